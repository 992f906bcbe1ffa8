// mutsamp command-line tool: generate mutants, execute them against a test
// suite, sample verdict stores, sweep sampling rates, and report coverage.
//
// Exit codes: 0 success, 1 operational failure, 2 usage error.

#include <atomic>
#include <csignal>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mutsamp/mutsamp.hpp"

namespace fs = std::filesystem;
using namespace mutsamp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::atomic<bool> g_cancel{false};

void handle_interrupt(int) { g_cancel.store(true); }

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::vector<MutationOperator> parse_operators(const std::string& csv) {
    std::vector<MutationOperator> ops;
    for (const std::string& name : split_csv(csv)) {
        std::optional<MutationOperator> op = operator_from_name(name);
        if (!op) throw UsageError("unknown operator '" + name + "'");
        ops.push_back(*op);
    }
    if (ops.empty()) throw UsageError("operator list is empty");
    return ops;
}

Approach parse_approach(const std::string& name) {
    if (name == "uniform") return Approach::uniform;
    if (name == "weighted") return Approach::weighted;
    throw UsageError("unknown approach '" + name + "' (expected uniform or weighted)");
}

WeightBasis parse_weight_basis(const std::string& name) {
    if (name == "mutants") return WeightBasis::mutants;
    if (name == "loc") return WeightBasis::loc;
    throw UsageError("unknown weight basis '" + name + "' (expected mutants or loc)");
}

SizeDistribution parse_sizes(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (kind == "constant") return ConstantSize{std::stoll(args)};
        if (kind == "uniform") {
            const auto comma = args.find(',');
            if (comma == std::string::npos) throw UsageError("uniform needs lo,hi");
            return UniformSize{std::stoll(args.substr(0, comma)),
                               std::stoll(args.substr(comma + 1))};
        }
        if (kind == "lognormal") {
            const auto comma = args.find(',');
            if (comma == std::string::npos) throw UsageError("lognormal needs mu,sigma");
            return LognormalSize{std::stod(args.substr(0, comma)),
                                 std::stod(args.substr(comma + 1))};
        }
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed size distribution '" + spec + "'");
    } catch (const std::out_of_range&) {
        throw UsageError("size distribution value out of range in '" + spec + "'");
    }
    throw UsageError("unknown size distribution '" + spec +
                     "' (expected constant:K, uniform:LO,HI or lognormal:MU,SIGMA)");
}

std::vector<double> parse_adequacy(const std::string& text) {
    std::vector<double> values;
    try {
        for (const std::string& part : split_csv(text)) values.push_back(std::stod(part));
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed adequacy '" + text + "'");
    } catch (const std::out_of_range&) {
        throw UsageError("adequacy value out of range in '" + text + "'");
    }
    if (values.empty()) throw UsageError("adequacy is empty");
    return values;
}

// Flat key=value config file; '#' starts a comment. Flags win over the file.
std::map<std::string, std::string> load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file: " + path.string());
    std::map<std::string, std::string> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(line_no) + " is not key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return values;
}

struct CommonProjectArgs {
    std::string config_file;
    std::string project_root;
    std::string store_path = "mutants.db.jsonl";
    std::vector<std::string> includes;
    std::vector<std::string> excludes;
    std::string test_command;
    std::string build_command;
    std::int64_t timeout_seconds = 30;
    std::string operators_csv;
};

// Fills unset fields from the config file.
void apply_config_file(CommonProjectArgs& args, const CLI::App& cmd) {
    if (args.config_file.empty()) return;
    auto values = load_config_file(args.config_file);
    auto take = [&](const char* key, const char* flag, auto&& assign) {
        auto it = values.find(key);
        if (it == values.end()) return;
        const CLI::Option* option = cmd.get_option_no_throw(flag);
        if (option && option->count() > 0) return; // explicit flags win
        assign(it->second);
    };
    take("project_root", "--project", [&](const std::string& v) { args.project_root = v; });
    take("store", "--store", [&](const std::string& v) { args.store_path = v; });
    take("test_command", "--test-cmd", [&](const std::string& v) { args.test_command = v; });
    take("build_command", "--build-cmd", [&](const std::string& v) { args.build_command = v; });
    take("timeout_seconds", "--timeout",
         [&](const std::string& v) { args.timeout_seconds = std::stoll(v); });
    take("operators", "--operators", [&](const std::string& v) { args.operators_csv = v; });
    take("include", "--include", [&](const std::string& v) { args.includes = split_csv(v); });
    take("exclude", "--exclude", [&](const std::string& v) { args.excludes = split_csv(v); });
}

std::vector<Mutant> catalog_as_vector(const ResultSet& rs) {
    std::vector<Mutant> mutants;
    mutants.reserve(rs.mutant_catalog.size());
    for (const auto& [id, m] : rs.mutant_catalog) mutants.push_back(m);
    return mutants;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_generate(const CommonProjectArgs& args, const std::string& list_path) {
    GenerateOptions options;
    if (!args.includes.empty()) options.include_globs = args.includes;
    options.exclude_globs = args.excludes;
    if (!args.operators_csv.empty()) options.operators = parse_operators(args.operators_csv);
    if (args.project_root.empty()) throw UsageError("--project is required");

    GenerateResult generated = generate_mutants(args.project_root, options);
    print_warnings(generated.warnings);

    StoreLock lock(args.store_path);
    const std::string project_id = fs::path(args.project_root).filename().string();
    Store::initialize(args.store_path, project_id.empty() ? "project" : project_id,
                      generated.mutants);

    std::map<std::string, std::size_t> per_class;
    std::map<std::string, std::size_t> per_operator;
    for (const Mutant& m : generated.mutants) {
        per_class[m.class_name]++;
        per_operator[std::string(operator_name(m.point.op))]++;
    }
    std::cout << generated.mutants.size() << " mutants across " << per_class.size()
              << " classes\n";
    std::cout << "by operator:\n";
    for (const auto& [op, count] : per_operator) std::cout << "  " << op << ": " << count << "\n";
    std::cout << "by class:\n";
    for (const auto& [cls, count] : per_class) std::cout << "  " << cls << ": " << count << "\n";
    std::cout << "catalog written to " << args.store_path << "\n";

    if (!list_path.empty()) {
        std::ofstream out(list_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write mutant list: " + list_path);
        export_mutant_list(generated.mutants, out);
    }
    return kExitOk;
}

int cmd_run(const CommonProjectArgs& args, unsigned jobs, bool resume, bool in_place,
            bool verbose) {
    if (args.project_root.empty()) throw UsageError("--project is required");
    if (args.test_command.empty()) throw UsageError("--test-cmd is required");

    StoreLock lock(args.store_path);
    std::vector<std::string> warnings;
    ResultSet rs = load_result_set(args.store_path, &warnings);
    print_warnings(warnings);
    if (rs.mutant_catalog.empty())
        throw std::runtime_error("store has no mutant catalog; run generate first");
    if (rs.total_results() > 0 && !resume)
        throw std::runtime_error("store already has results; pass --resume to continue");

    RunConfig config;
    config.project_root = args.project_root;
    config.test_command = args.test_command;
    config.build_command = args.build_command;
    config.timeout_seconds = args.timeout_seconds;
    config.workdir_strategy =
        in_place ? WorkdirStrategy::in_place_with_restore : WorkdirStrategy::copy_project;
    config.verbose = verbose;

    std::vector<Mutant> mutants = catalog_as_vector(rs);
    Store store = Store::open(args.store_path);

    std::signal(SIGINT, handle_interrupt);
    std::signal(SIGTERM, handle_interrupt);
    RunProgress progress =
        run_all(mutants, config, jobs, store, &g_cancel,
                [&](const MutantResult& result, const RunProgress& p) {
                    std::cout << "[" << (p.executed + p.skipped) << "/" << p.total << "] mutant "
                              << result.mutant_id << " " << status_name(result.status) << " ("
                              << result.duration_ms << " ms)\n";
                });
    if (g_cancel.load()) {
        std::cout << "interrupted: " << progress.executed
                  << " executed this run; store remains resumable\n";
        return kExitFailure;
    }
    std::cout << "done: " << progress.executed << " executed, " << progress.skipped
              << " already stored\n";
    return kExitOk;
}

int cmd_sample(const std::string& store_path, const std::string& approach, double rate,
               std::uint64_t seed, const std::string& weight_basis, const std::string& out_path) {
    StoreLock lock(store_path);
    ResultSet rs = load_result_set(store_path);
    SampleConfig config;
    config.approach = parse_approach(approach);
    config.rate = rate;
    config.seed = seed;
    config.weight_basis = parse_weight_basis(weight_basis);
    SampleSet sample = draw_sample(rs, config);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write sample file: " + out_path);
        out = &file;
    }
    *out << "# seed=" << seed << " approach=" << approach_name(config.approach)
         << " rate=" << rate << " size=" << sample.mutant_ids.size() << "\n";
    for (std::int64_t id : sample.mutant_ids) *out << id << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& store_path, const std::string& approaches_csv,
              std::uint64_t seed, int repetitions, double critical, const std::string& out_dir,
              bool honor_overrides, bool exclude_unsampled, const std::string& weight_basis) {
    StoreLock lock(store_path);
    ResultSet rs = load_result_set(store_path);
    if (rs.total_results() == 0) throw std::runtime_error("store has no results to sweep");

    AnalysisOptions opts;
    opts.honor_overrides = honor_overrides;
    opts.include_unsampled = !exclude_unsampled;

    fs::create_directories(out_dir);
    std::vector<SweepReport> reports;
    for (const std::string& name : split_csv(approaches_csv)) {
        const Approach approach = parse_approach(name);
        SweepReport report = sweep(rs, approach, seed, repetitions, critical, opts,
                                   parse_weight_basis(weight_basis));
        const fs::path curve_path = fs::path(out_dir) / ("sweep_" + name + ".csv");
        std::ofstream curve(curve_path, std::ios::binary);
        if (!curve) throw std::runtime_error("cannot write " + curve_path.string());
        write_sweep_csv(report, curve);
        std::cout << "wrote " << curve_path.string() << "\n";
        reports.push_back(std::move(report));
    }
    const fs::path summary_path = fs::path(out_dir) / "sweep_summary.csv";
    std::ofstream summary(summary_path, std::ios::binary);
    if (!summary) throw std::runtime_error("cannot write " + summary_path.string());
    write_sweep_summary_csv(reports, summary);
    std::cout << "wrote " << summary_path.string() << "\n";
    return kExitOk;
}

int cmd_report(const std::string& store_path, bool honor_overrides) {
    StoreLock lock(store_path);
    std::vector<std::string> warnings;
    ResultSet rs = load_result_set(store_path, &warnings);
    print_warnings(warnings);
    if (rs.total_results() == 0) throw std::runtime_error("store has no results to report");

    AnalysisOptions opts;
    opts.honor_overrides = honor_overrides;

    std::map<MutantStatus, std::int64_t> by_status;
    std::int64_t overrides = 0;
    for (const auto& [cls, results] : rs.records) {
        for (const MutantResult& r : results) {
            by_status[r.status]++;
            if (r.equivalent_override) ++overrides;
        }
    }

    char line[160];
    std::snprintf(line, sizeof(line), "Mutation coverage: %.1f%%\n",
                  100.0 * project_coverage(rs, nullptr, opts));
    std::cout << "Project: " << rs.project_id << "\n" << line;
    std::cout << "Status counts: killed=" << by_status[MutantStatus::killed]
              << " survived=" << by_status[MutantStatus::survived]
              << " timeout=" << by_status[MutantStatus::timeout]
              << " build-error=" << by_status[MutantStatus::build_error] << "\n";
    std::cout << "Equivalent overrides: " << overrides
              << (honor_overrides ? " (excluded)" : " (ignored; pass --honor-overrides)") << "\n";

    CoverageVector vec = coverage_vector(rs, nullptr, opts);
    std::sort(vec.entries.begin(), vec.entries.end(),
              [](const CoverageEntry& a, const CoverageEntry& b) {
                  if (a.coverage != b.coverage) return a.coverage < b.coverage;
                  return a.class_name < b.class_name;
              });
    std::cout << "\n  coverage  considered  class (least covered first)\n";
    for (const CoverageEntry& entry : vec.entries) {
        std::snprintf(line, sizeof(line), "  %7.1f%%  %10lld  %s%s\n", 100.0 * entry.coverage,
                      static_cast<long long>(entry.considered), entry.class_name.c_str(),
                      entry.zero_denominator ? " [no considered mutants]" : "");
        std::cout << line;
    }
    return kExitOk;
}

int cmd_synth(const std::string& store_path, std::int64_t classes, const std::string& sizes,
              const std::string& adequacy, std::uint64_t seed) {
    SynthSpec spec;
    spec.class_count = classes;
    spec.size_distribution = parse_sizes(sizes);
    spec.adequacy = parse_adequacy(adequacy);
    spec.seed = seed;
    ResultSet rs = generate_synthetic(spec);

    StoreLock lock(store_path);
    Store store = Store::initialize(store_path, rs.project_id, catalog_as_vector(rs), seed);
    for (const auto& [cls, results] : rs.records)
        for (const MutantResult& r : results) store.append_result(r);
    std::cout << "synthetic store: " << rs.total_results() << " mutants across "
              << rs.records.size() << " classes -> " << store_path << "\n";
    return kExitOk;
}

int cmd_override(const std::string& store_path, std::int64_t id, bool equivalent) {
    StoreLock lock(store_path);
    Store store = Store::open(store_path);
    store.set_equivalent_override(id, equivalent);
    std::cout << "mutant " << id << " equivalent_override=" << (equivalent ? "true" : "false")
              << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mutation testing with uniform and weighted mutant sampling"};
    app.require_subcommand(1);

    CommonProjectArgs args;

    auto* generate = app.add_subcommand("generate", "scan sources and write the mutant catalog");
    std::string list_path;
    generate->add_option("--project", args.project_root, "project root directory");
    generate->add_option("--store", args.store_path, "store file path");
    generate->add_option("--include", args.includes, "include glob (repeatable)");
    generate->add_option("--exclude", args.excludes, "exclude glob (repeatable)");
    generate->add_option("--operators", args.operators_csv, "comma-separated operator subset");
    generate->add_option("--list", list_path, "also export the mutant list to this file");
    generate->add_option("--config", args.config_file, "key=value config file");

    auto* run = app.add_subcommand("run", "execute mutants against the test suite");
    unsigned jobs = 1;
    bool resume = false, in_place = false, verbose = false;
    run->add_option("--project", args.project_root, "project root directory");
    run->add_option("--store", args.store_path, "store file path");
    run->add_option("--test-cmd", args.test_command, "shell command that runs the suite");
    run->add_option("--build-cmd", args.build_command, "optional shell build command");
    run->add_option("--timeout", args.timeout_seconds, "per-mutant timeout seconds");
    run->add_option("--jobs", jobs, "parallel workers");
    run->add_flag("--resume", resume, "continue an interrupted run");
    run->add_flag("--in-place", in_place, "mutate the tree in place instead of copying");
    run->add_flag("--verbose", verbose, "inherit test command output");
    run->add_option("--config", args.config_file, "key=value config file");

    auto* sample = app.add_subcommand("sample", "select mutant ids from a store");
    std::string approach = "uniform", weight_basis = "mutants", out_path, sample_store;
    double rate = 0.1;
    std::uint64_t seed = 0;
    sample->add_option("--store", sample_store, "store file path")->required();
    sample->add_option("--approach", approach, "uniform or weighted");
    sample->add_option("--rate", rate, "sampling rate in (0,1]")->required();
    sample->add_option("--seed", seed, "random seed");
    sample->add_option("--weight-basis", weight_basis, "mutants or loc");
    sample->add_option("--out", out_path, "output file (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "rate sweep with representativeness curves");
    std::string sweep_store, approaches = "uniform,weighted", out_dir = ".";
    std::string sweep_basis = "mutants";
    int repetitions = 10;
    double critical = 0.75;
    std::uint64_t sweep_seed = 0;
    bool honor_overrides = false, exclude_unsampled = false;
    sweep_cmd->add_option("--store", sweep_store, "store file path")->required();
    sweep_cmd->add_option("--approaches", approaches, "comma-separated approaches");
    sweep_cmd->add_option("--seed", sweep_seed, "random seed");
    sweep_cmd->add_option("--repetitions", repetitions, "samples per rate");
    sweep_cmd->add_option("--critical", critical, "correlation critical point");
    sweep_cmd->add_option("--out-dir", out_dir, "directory for CSV output");
    sweep_cmd->add_flag("--honor-overrides", honor_overrides, "exclude override-marked mutants");
    sweep_cmd->add_flag("--exclude-unsampled", exclude_unsampled,
                        "drop classes the sample missed instead of scoring them 0");
    sweep_cmd->add_option("--weight-basis", sweep_basis, "mutants or loc");

    auto* report = app.add_subcommand("report", "human-readable coverage summary");
    std::string report_store;
    bool report_honor = false;
    report->add_option("--store", report_store, "store file path")->required();
    report->add_flag("--honor-overrides", report_honor, "exclude override-marked mutants");

    auto* synth = app.add_subcommand("synth", "write a synthetic store");
    std::string synth_store, sizes = "constant:10", adequacy = "1.0";
    std::int64_t classes = 10;
    std::uint64_t synth_seed = 0;
    synth->add_option("--store", synth_store, "store file path")->required();
    synth->add_option("--classes", classes, "number of classes");
    synth->add_option("--sizes", sizes, "constant:K | uniform:LO,HI | lognormal:MU,SIGMA");
    synth->add_option("--adequacy", adequacy, "kill probability, single or per-class list");
    synth->add_option("--seed", synth_seed, "random seed");

    auto* override_cmd = app.add_subcommand("override", "set the manual equivalent flag");
    std::string override_store;
    std::int64_t override_id = 0;
    bool equivalent = false;
    override_cmd->add_option("--store", override_store, "store file path")->required();
    override_cmd->add_option("--id", override_id, "mutant id")->required();
    override_cmd->add_option("--equivalent", equivalent, "true or false")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            apply_config_file(args, *generate);
            return cmd_generate(args, list_path);
        }
        if (run->parsed()) {
            apply_config_file(args, *run);
            return cmd_run(args, jobs, resume, in_place, verbose);
        }
        if (sample->parsed())
            return cmd_sample(sample_store, approach, rate, seed, weight_basis, out_path);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_store, approaches, sweep_seed, repetitions, critical, out_dir,
                             honor_overrides, exclude_unsampled, sweep_basis);
        if (report->parsed()) return cmd_report(report_store, report_honor);
        if (synth->parsed()) return cmd_synth(synth_store, classes, sizes, adequacy, synth_seed);
        if (override_cmd->parsed()) return cmd_override(override_store, override_id, equivalent);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NoFilesError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
