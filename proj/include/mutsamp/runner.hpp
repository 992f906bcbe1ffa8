#pragma once

// Executes the project's build/test commands against each mutant in an
// isolated working copy and classifies the outcome. Commands run through
// /bin/sh with MUTANT_ID exported; the exit code is the only pass/fail
// signal. The original tree is never left mutated, even on errors.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "mutsamp/mutant.hpp"
#include "mutsamp/result.hpp"
#include "mutsamp/store.hpp"

namespace mutsamp {

enum class WorkdirStrategy { copy_project, in_place_with_restore };

struct RunConfig {
    std::filesystem::path project_root;
    std::string test_command;
    std::string build_command;       // empty: no separate build step
    std::int64_t timeout_seconds = 30;
    WorkdirStrategy workdir_strategy = WorkdirStrategy::copy_project;
    bool verbose = false;            // inherit child stdout/stderr
};

class RunnerError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CommandOutcome {
    int exit_code = 0;
    bool timed_out = false;
    std::int64_t duration_ms = 0;
};

namespace detail {

// Runs `command` via /bin/sh -c in `workdir`. A non-positive timeout means
// unlimited. On timeout the whole process group is killed. MUTANT_ID is
// exported through the command string, so the post-fork child touches only
// async-signal-safe calls (workers fork from a multithreaded process).
inline CommandOutcome run_shell(const std::string& command, const std::filesystem::path& workdir,
                                std::int64_t timeout_ms, std::optional<std::int64_t> mutant_id,
                                bool verbose) {
    const auto start = std::chrono::steady_clock::now();
    std::string final_command;
    if (mutant_id)
        final_command = "export MUTANT_ID=" + std::to_string(*mutant_id) + "; " + command;
    else
        final_command = command;
    std::fflush(stdout);
    std::fflush(stderr);
    pid_t pid = ::fork();
    if (pid < 0) throw RunnerError("fork failed");
    if (pid == 0) {
        ::setpgid(0, 0);
        if (::chdir(workdir.c_str()) != 0) _exit(127);
        if (!verbose) {
            // raw dup2, not freopen: freopen would flush the stdio buffer
            // inherited from the parent into the real stream
            int null_fd = ::open("/dev/null", O_WRONLY);
            if (null_fd >= 0) {
                ::dup2(null_fd, 1);
                ::dup2(null_fd, 2);
                if (null_fd > 2) ::close(null_fd);
            }
        }
        ::execl("/bin/sh", "sh", "-c", final_command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    CommandOutcome outcome;
    int status = 0;
    while (true) {
        pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0) throw RunnerError("waitpid failed");
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        if (timeout_ms > 0 && elapsed >= timeout_ms) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            outcome.timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    outcome.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    if (!outcome.timed_out) {
        if (WIFEXITED(status)) outcome.exit_code = WEXITSTATUS(status);
        else if (WIFSIGNALED(status)) outcome.exit_code = 128 + WTERMSIG(status);
        else outcome.exit_code = -1;
    }
    return outcome;
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RunnerError("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RunnerError("cannot write file: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw RunnerError("write failed: " + path.string());
}

// Restores the original bytes when destroyed. A failed restore is fatal:
// it rethrows when safe and otherwise reports loudly before unwinding
// continues with a dirty tree.
class FileRestorer {
  public:
    FileRestorer(std::filesystem::path path, std::string original)
        : path_(std::move(path)), original_(std::move(original)) {}
    ~FileRestorer() noexcept(false) {
        try {
            write_file_bytes(path_, original_);
        } catch (...) {
            std::fprintf(stderr, "fatal: failed to restore original contents of %s\n",
                         path_.c_str());
            if (std::uncaught_exceptions() == 0) throw;
        }
    }

  private:
    std::filesystem::path path_;
    std::string original_;
};

// Scratch copy of the project tree, removed on destruction. VCS metadata is
// skipped.
class WorkingCopy {
  public:
    explicit WorkingCopy(const std::filesystem::path& project_root) {
        namespace fs = std::filesystem;
        root_ = fs::temp_directory_path() /
                ("mutsamp-work-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter().fetch_add(1)));
        fs::create_directories(root_);
        for (const fs::directory_entry& entry : fs::directory_iterator(project_root)) {
            if (entry.path().filename() == ".git") continue;
            fs::copy(entry.path(), root_ / entry.path().filename(),
                     fs::copy_options::recursive | fs::copy_options::copy_symlinks);
        }
    }
    ~WorkingCopy() {
        std::error_code ec;
        std::filesystem::remove_all(root_, ec);
    }
    const std::filesystem::path& root() const { return root_; }

  private:
    static std::atomic<std::uint64_t>& counter() {
        static std::atomic<std::uint64_t> c{0};
        return c;
    }
    std::filesystem::path root_;
};

} // namespace detail

struct BaselineResult {
    std::int64_t test_duration_ms = 0;
};

// Runs build (if configured) and the test command on the unmutated tree.
// A failing baseline is fatal: mutation verdicts are meaningless on a red
// suite.
inline BaselineResult run_baseline(const RunConfig& config) {
    if (config.test_command.empty()) throw RunnerError("test command must not be empty");
    if (config.timeout_seconds < 1) throw RunnerError("timeout must be >= 1 second");
    if (!config.build_command.empty()) {
        CommandOutcome build = detail::run_shell(config.build_command,
                                                         config.project_root, 0, std::nullopt,
                                                         config.verbose);
        if (build.exit_code != 0)
            throw RunnerError("baseline build failed (exit " + std::to_string(build.exit_code) +
                              "): " + config.build_command);
    }
    CommandOutcome test = detail::run_shell(config.test_command, config.project_root, 0,
                                                    std::nullopt, config.verbose);
    if (test.exit_code != 0)
        throw RunnerError("test suite red on unmutated code (exit " +
                          std::to_string(test.exit_code) + "): " + config.test_command);
    return BaselineResult{test.duration_ms};
}

// Per-mutant timeout: the larger of the configured timeout and twice the
// baseline suite duration.
inline std::int64_t mutant_timeout_ms(const RunConfig& config, std::int64_t baseline_ms) {
    return std::max<std::int64_t>(config.timeout_seconds * 1000, 2 * baseline_ms);
}

// Patches one file in `workdir`, runs build + test, restores the file, and
// classifies: build failure -> build-error, test timeout -> timeout, test
// nonzero -> killed, test zero -> survived.
inline MutantResult execute_mutant(const Mutant& mutant, const RunConfig& config,
                                   const std::filesystem::path& workdir,
                                   std::int64_t baseline_ms) {
    const std::filesystem::path target = workdir / mutant.file_path;
    const std::string original = detail::read_file_bytes(target);
    const std::string mutated = apply_mutation(original, mutant.point);

    MutantResult result;
    result.mutant_id = mutant.id;
    result.class_name = mutant.class_name;

    const std::int64_t budget_ms = mutant_timeout_ms(config, baseline_ms);
    const auto start = std::chrono::steady_clock::now();
    {
        detail::FileRestorer restore(target, original);
        detail::write_file_bytes(target, mutated);

        bool built = true;
        if (!config.build_command.empty()) {
            CommandOutcome build = detail::run_shell(config.build_command, workdir,
                                                             budget_ms, mutant.id, config.verbose);
            if (build.timed_out || build.exit_code != 0) {
                result.status = MutantStatus::build_error;
                built = false;
            }
        }
        if (built) {
            CommandOutcome test =
                detail::run_shell(config.test_command, workdir, budget_ms, mutant.id,
                                  config.verbose);
            if (test.timed_out) result.status = MutantStatus::timeout;
            else if (test.exit_code != 0) result.status = MutantStatus::killed;
            else result.status = MutantStatus::survived;
        }
    }
    result.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    return result;
}

struct RunProgress {
    std::size_t executed = 0;
    std::size_t skipped = 0; // already in the store
    std::size_t total = 0;
};

using ProgressCallback = std::function<void(const MutantResult&, const RunProgress&)>;

// Executes every mutant that has no stored result yet, appending verdicts as
// they arrive. Already-stored ids are skipped, so an interrupted run resumes
// where it stopped. Workers operate on isolated copies (copy_project) or a
// single restored tree (in_place_with_restore, parallelism 1).
inline RunProgress run_all(const std::vector<Mutant>& mutants, const RunConfig& config,
                           unsigned parallelism, Store& store,
                           std::atomic<bool>* cancel = nullptr,
                           const ProgressCallback& on_result = nullptr) {
    RunProgress progress;
    std::vector<const Mutant*> pending;
    for (const Mutant& m : mutants) {
        if (store.has_result(m.id)) ++progress.skipped;
        else pending.push_back(&m);
    }
    progress.total = mutants.size();
    if (pending.empty()) return progress;

    const BaselineResult baseline = run_baseline(config);

    if (config.workdir_strategy == WorkdirStrategy::in_place_with_restore) parallelism = 1;
    if (parallelism < 1) parallelism = 1;
    if (parallelism > pending.size()) parallelism = static_cast<unsigned>(pending.size());

    std::mutex sink_mutex; // serializes store appends and progress
    std::atomic<std::size_t> next_index{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        try {
            std::optional<detail::WorkingCopy> copy;
            std::filesystem::path workdir = config.project_root;
            if (config.workdir_strategy == WorkdirStrategy::copy_project) {
                copy.emplace(config.project_root);
                workdir = copy->root();
            }
            while (true) {
                if (cancel && cancel->load()) return;
                const std::size_t i = next_index.fetch_add(1);
                if (i >= pending.size()) return;
                MutantResult result = execute_mutant(*pending[i], config, workdir,
                                                     baseline.test_duration_ms);
                std::lock_guard<std::mutex> lock(sink_mutex);
                store.append_result(result);
                ++progress.executed;
                if (on_result) on_result(result, progress);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            if (cancel) cancel->store(true);
        }
    };

    if (parallelism == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(parallelism);
        for (unsigned t = 0; t < parallelism; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return progress;
}

} // namespace mutsamp
