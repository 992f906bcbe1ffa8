#pragma once

// Append-only store: one JSON record per line. Record kinds are "meta"
// (version + project id, first line), "mutant" (catalog entry), "result"
// (verdict) and "override" (manual equivalent flag, last writer wins).
// A torn final line from a crash is dropped on load; corruption anywhere
// else is fatal.

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <json.hpp>

#include "mutsamp/result.hpp"

namespace mutsamp {

inline constexpr int kStoreFormatVersion = 1;

class StoreError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using json = nlohmann::json;

inline json mutant_to_json(const Mutant& m) {
    return json{{"kind", "mutant"},
                {"id", m.id},
                {"class", m.class_name},
                {"file", m.file_path},
                {"line", m.point.line},
                {"op", std::string(operator_name(m.point.op))},
                {"token_index", m.point.token_index},
                {"original", m.original_text},
                {"replacement", m.point.replacement_text},
                {"class_loc", m.class_loc}};
}

inline Mutant mutant_from_json(const json& j) {
    Mutant m;
    m.id = j.at("id").get<std::int64_t>();
    m.class_name = j.at("class").get<std::string>();
    m.file_path = j.at("file").get<std::string>();
    m.point.line = j.at("line").get<int>();
    const std::string op_name = j.at("op").get<std::string>();
    std::optional<MutationOperator> op = operator_from_name(op_name);
    if (!op) throw StoreError("unknown operator name: " + op_name);
    m.point.op = *op;
    m.point.token_index = j.at("token_index").get<std::size_t>();
    m.original_text = j.at("original").get<std::string>();
    m.point.replacement_text = j.at("replacement").get<std::string>();
    m.class_loc = j.value("class_loc", static_cast<std::int64_t>(0));
    return m;
}

inline json result_to_json(const MutantResult& r) {
    return json{{"kind", "result"},
                {"id", r.mutant_id},
                {"class", r.class_name},
                {"status", std::string(status_name(r.status))},
                {"duration_ms", r.duration_ms}};
}

inline MutantResult result_from_json(const json& j) {
    MutantResult r;
    r.mutant_id = j.at("id").get<std::int64_t>();
    r.class_name = j.at("class").get<std::string>();
    const std::string st = j.at("status").get<std::string>();
    std::optional<MutantStatus> status = status_from_name(st);
    if (!status) throw StoreError("unknown result status: " + st);
    r.status = *status;
    r.duration_ms = j.at("duration_ms").get<std::int64_t>();
    return r;
}

} // namespace detail

// Writer handle over an existing store file. Keeps an index of catalog ids
// and already-recorded result ids so duplicate and unknown ids are rejected
// before anything is written. Each append is flushed and fsynced.
class Store {
  public:
    // Creates (or truncates) a store with the mutant catalog. The optional
    // seed is recorded in the meta line for provenance of generated stores.
    static Store initialize(const std::filesystem::path& path, const std::string& project_id,
                            const std::vector<Mutant>& mutants,
                            std::optional<std::uint64_t> seed = std::nullopt) {
        int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd < 0) throw StoreError("cannot create store: " + path.string());
        Store store(path, fd);
        detail::json meta{{"kind", "meta"},
                          {"version", kStoreFormatVersion},
                          {"project_id", project_id}};
        if (seed) meta["seed"] = *seed;
        store.write_line(meta.dump());
        for (const Mutant& m : mutants) {
            if (!store.catalog_ids_.insert(m.id).second)
                throw StoreError("duplicate mutant id in catalog: " + std::to_string(m.id));
            store.classes_[m.id] = m.class_name;
            store.write_line(detail::mutant_to_json(m).dump());
        }
        store.sync();
        return store;
    }

    static Store open(const std::filesystem::path& path) {
        ResultSet rs = load(path);
        int fd = ::open(path.c_str(), O_WRONLY | O_APPEND, 0644);
        if (fd < 0) throw StoreError("cannot open store for append: " + path.string());
        Store store(path, fd);
        for (const auto& [id, m] : rs.mutant_catalog) {
            store.catalog_ids_.insert(id);
            store.classes_[id] = m.class_name;
        }
        for (const auto& [cls, results] : rs.records)
            for (const MutantResult& r : results) store.result_ids_.insert(r.mutant_id);
        return store;
    }

    Store(Store&& other) noexcept
        : path_(std::move(other.path_)), fd_(other.fd_),
          catalog_ids_(std::move(other.catalog_ids_)), result_ids_(std::move(other.result_ids_)),
          classes_(std::move(other.classes_)) {
        other.fd_ = -1;
    }
    Store& operator=(Store&&) = delete;
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    ~Store() {
        if (fd_ >= 0) ::close(fd_);
    }

    void append_result(const MutantResult& result) {
        auto cls = classes_.find(result.mutant_id);
        if (cls == classes_.end())
            throw StoreError("result for mutant id " + std::to_string(result.mutant_id) +
                             " not present in catalog");
        if (cls->second != result.class_name)
            throw StoreError("result class '" + result.class_name + "' does not match catalog ('" +
                             cls->second + "') for mutant id " + std::to_string(result.mutant_id));
        if (!result_ids_.insert(result.mutant_id).second)
            throw StoreError("duplicate result for mutant id " + std::to_string(result.mutant_id));
        write_line(detail::result_to_json(result).dump());
        sync();
    }

    void set_equivalent_override(std::int64_t mutant_id, bool value) {
        if (!catalog_ids_.count(mutant_id))
            throw StoreError("unknown mutant id: " + std::to_string(mutant_id));
        write_line(detail::json{{"kind", "override"}, {"id", mutant_id}, {"equivalent", value}}
                       .dump());
        sync();
    }

    bool has_result(std::int64_t mutant_id) const { return result_ids_.count(mutant_id) > 0; }
    std::size_t result_count() const { return result_ids_.size(); }
    std::size_t catalog_size() const { return catalog_ids_.size(); }
    const std::filesystem::path& path() const { return path_; }

    // Parses the whole file into a ResultSet. `warnings` (when given)
    // receives a note if a torn trailing line was dropped.
    static ResultSet load(const std::filesystem::path& path,
                          std::vector<std::string>* warnings = nullptr) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw StoreError("cannot open store: " + path.string());
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

        ResultSet rs;
        std::size_t pos = 0;
        int line_no = 0;
        while (pos < content.size()) {
            std::size_t eol = content.find('\n', pos);
            const bool complete = eol != std::string::npos;
            std::string line = content.substr(pos, complete ? eol - pos : std::string::npos);
            pos = complete ? eol + 1 : content.size();
            ++line_no;
            if (line.empty()) continue;

            detail::json j = detail::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("kind")) {
                if (!complete) {
                    if (warnings)
                        warnings->push_back("dropped torn trailing record at line " +
                                            std::to_string(line_no));
                    break;
                }
                throw StoreError("corrupt store record at line " + std::to_string(line_no));
            }

            try {
                const std::string kind = j.at("kind").get<std::string>();
                if (kind == "meta") {
                    rs.project_id = j.value("project_id", std::string{});
                } else if (kind == "mutant") {
                    Mutant m = detail::mutant_from_json(j);
                    if (!rs.mutant_catalog.emplace(m.id, m).second)
                        throw StoreError("duplicate mutant id " + std::to_string(m.id) +
                                         " at line " + std::to_string(line_no));
                } else if (kind == "result") {
                    MutantResult r = detail::result_from_json(j);
                    auto cat = rs.mutant_catalog.find(r.mutant_id);
                    if (cat == rs.mutant_catalog.end())
                        throw StoreError("result references unknown mutant id " +
                                         std::to_string(r.mutant_id) + " at line " +
                                         std::to_string(line_no));
                    if (cat->second.class_name != r.class_name)
                        throw StoreError("result class mismatch for mutant id " +
                                         std::to_string(r.mutant_id) + " at line " +
                                         std::to_string(line_no));
                    rs.records[r.class_name].push_back(std::move(r));
                } else if (kind == "override") {
                    const std::int64_t id = j.at("id").get<std::int64_t>();
                    const bool value = j.at("equivalent").get<bool>();
                    auto cat = rs.mutant_catalog.find(id);
                    if (cat == rs.mutant_catalog.end())
                        throw StoreError("override references unknown mutant id " +
                                         std::to_string(id) + " at line " +
                                         std::to_string(line_no));
                    for (MutantResult& r : rs.records[cat->second.class_name])
                        if (r.mutant_id == id) r.equivalent_override = value;
                } else {
                    throw StoreError("unknown record kind '" + kind + "' at line " +
                                     std::to_string(line_no));
                }
            } catch (const detail::json::exception& e) {
                throw StoreError("corrupt store record at line " + std::to_string(line_no) + ": " +
                                 e.what());
            }
        }
        return rs;
    }

  private:
    Store(std::filesystem::path path, int fd) : path_(std::move(path)), fd_(fd) {}

    void write_line(const std::string& line) {
        std::string buf = line;
        buf.push_back('\n');
        std::size_t written = 0;
        while (written < buf.size()) {
            ssize_t n = ::write(fd_, buf.data() + written, buf.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw StoreError("write failed on store " + path_.string() + ": " +
                                 std::strerror(errno));
            }
            written += static_cast<std::size_t>(n);
        }
    }

    void sync() {
        if (::fsync(fd_) < 0 && errno != EINVAL && errno != EROFS)
            throw StoreError("fsync failed on store " + path_.string());
    }

    std::filesystem::path path_;
    int fd_ = -1;
    std::set<std::int64_t> catalog_ids_;
    std::set<std::int64_t> result_ids_;
    std::map<std::int64_t, std::string> classes_;
};

inline ResultSet load_result_set(const std::filesystem::path& path,
                                 std::vector<std::string>* warnings = nullptr) {
    return Store::load(path, warnings);
}

// Advisory per-store lock so two commands do not write the same store
// concurrently. Lock file lives next to the store.
class StoreLock {
  public:
    explicit StoreLock(const std::filesystem::path& store_path)
        : lock_path_(store_path.string() + ".lock") {
        fd_ = ::open(lock_path_.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) throw StoreError("cannot create lock file: " + lock_path_);
        if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
            ::close(fd_);
            fd_ = -1;
            throw StoreError("store is in use by another process (lock: " + lock_path_ +
                             ")");
        }
    }
    ~StoreLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;

  private:
    std::string lock_path_;
    int fd_ = -1;
};

} // namespace mutsamp
