#pragma once

// First-order mutants: applying a mutation point to source text and scanning
// a project tree for all mutants. One source file is one "class"; the class
// name is the file's project-relative path.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mutsamp/operators.hpp"
#include "mutsamp/token.hpp"

namespace mutsamp {

struct Mutant {
    std::int64_t id = 0;
    std::string class_name;
    std::string file_path; // relative to project root, '/' separators
    MutationPoint point;
    std::string original_text;
    std::int64_t class_loc = 0; // newline-counted length of the owning file
};

class MutationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Include/exclude globs matched nothing: a configuration mistake, reported
// as a usage error by the CLI.
class NoFilesError : public MutationError {
  public:
    using MutationError::MutationError;
};

// Splices one operator token. The point must still match the source's token
// stream; otherwise the point is stale and an error is thrown.
inline std::string apply_mutation(std::string_view source, const MutationPoint& point) {
    std::vector<Token> tokens = tokenize(source);
    if (point.token_index >= tokens.size())
        throw MutationError("stale mutation point: token index out of range");
    std::vector<MutationPoint> current = find_mutation_points(tokens);
    const bool still_valid = std::any_of(current.begin(), current.end(), [&](const MutationPoint& p) {
        return p.token_index == point.token_index && p.op == point.op &&
               p.replacement_text == point.replacement_text;
    });
    if (!still_valid)
        throw MutationError("stale mutation point: token stream no longer matches");

    const Token& target = tokens[point.token_index];
    std::string out;
    out.reserve(source.size());
    out.append(source.substr(0, target.byte_offset));
    out.append(point.replacement_text);
    out.append(source.substr(target.byte_offset + target.text.size()));
    return out;
}

namespace detail {

// fnmatch-style glob: '*' within a path segment, '?' one char, '**' spans
// segments.
inline std::regex glob_to_regex(std::string_view glob) {
    std::string re;
    re.reserve(glob.size() * 2);
    for (std::size_t i = 0; i < glob.size(); ++i) {
        const char c = glob[i];
        if (c == '*') {
            if (i + 1 < glob.size() && glob[i + 1] == '*') {
                if (i + 2 < glob.size() && glob[i + 2] == '/') {
                    re += "(?:.*/)?"; // '**/' spans zero or more directories
                    i += 2;
                } else {
                    re += ".*";
                    ++i;
                }
            } else {
                re += "[^/]*";
            }
        } else if (c == '?') {
            re += "[^/]";
        } else if (std::string_view("\\^$.+()[]{}|").find(c) != std::string_view::npos) {
            re += '\\';
            re += c;
        } else {
            re += c;
        }
    }
    return std::regex(re);
}

inline bool matches_any_glob(const std::string& rel_path, const std::vector<std::regex>& globs) {
    return std::any_of(globs.begin(), globs.end(), [&](const std::regex& g) {
        return std::regex_match(rel_path, g);
    });
}

inline std::int64_t count_lines(std::string_view text) {
    if (text.empty()) return 0;
    std::int64_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    if (text.back() != '\n') ++lines;
    return lines;
}

} // namespace detail

struct GenerateOptions {
    std::vector<std::string> include_globs{"**/*.java"};
    std::vector<std::string> exclude_globs;
    std::vector<MutationOperator> operators{kAllOperators.begin(), kAllOperators.end()};
};

struct GenerateResult {
    std::vector<Mutant> mutants;
    std::vector<std::string> warnings; // skipped files, one message each
    std::size_t files_scanned = 0;
};

// Scans project_root for files matching the include globs, tokenizes each,
// and emits all mutation points as mutants with ids 1..N assigned in
// (file path, token index) order. Files that fail to read or tokenize are
// skipped with a warning. Zero matched files or zero mutants is an error.
inline GenerateResult generate_mutants(const std::filesystem::path& project_root,
                                       const GenerateOptions& options = {}) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(project_root))
        throw MutationError("project root is not a directory: " + project_root.string());

    std::vector<std::regex> includes, excludes;
    for (const std::string& g : options.include_globs) includes.push_back(detail::glob_to_regex(g));
    for (const std::string& g : options.exclude_globs) excludes.push_back(detail::glob_to_regex(g));

    std::vector<std::string> rel_paths;
    for (const fs::directory_entry& entry : fs::recursive_directory_iterator(project_root)) {
        if (!entry.is_regular_file()) continue;
        std::string rel = fs::relative(entry.path(), project_root).generic_string();
        if (!detail::matches_any_glob(rel, includes)) continue;
        if (detail::matches_any_glob(rel, excludes)) continue;
        rel_paths.push_back(std::move(rel));
    }
    std::sort(rel_paths.begin(), rel_paths.end());
    if (rel_paths.empty())
        throw NoFilesError("no source files matched the include globs");

    GenerateResult result;
    result.files_scanned = rel_paths.size();
    std::int64_t next_id = 1;
    for (const std::string& rel : rel_paths) {
        std::ifstream in(project_root / rel, std::ios::binary);
        if (!in) {
            result.warnings.push_back("cannot read file, skipped: " + rel);
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad()) {
            result.warnings.push_back("read error, skipped: " + rel);
            continue;
        }
        const std::string content = buf.str();

        std::vector<Token> tokens;
        try {
            tokens = tokenize(content);
        } catch (const TokenizeError& e) {
            result.warnings.push_back(rel + ":" + std::to_string(e.line()) + ": " + e.what() +
                                      ", file skipped");
            continue;
        }

        const std::int64_t loc = detail::count_lines(content);
        for (MutationPoint& point : find_mutation_points(tokens)) {
            if (std::find(options.operators.begin(), options.operators.end(), point.op) ==
                options.operators.end())
                continue;
            Mutant m;
            m.id = next_id++;
            m.class_name = rel;
            m.file_path = rel;
            m.original_text = tokens[point.token_index].text;
            m.point = std::move(point);
            m.class_loc = loc;
            result.mutants.push_back(std::move(m));
        }
    }

    if (result.mutants.empty())
        throw MutationError("no mutants: no eligible operator occurrences found");
    return result;
}

// Stable line-delimited export: id | class_name | file_path | line | operator
// | original | replacement.
inline void export_mutant_list(const std::vector<Mutant>& mutants, std::ostream& out) {
    for (const Mutant& m : mutants) {
        out << m.id << " | " << m.class_name << " | " << m.file_path << " | " << m.point.line
            << " | " << operator_name(m.point.op) << " | " << m.original_text << " | "
            << m.point.replacement_text << "\n";
    }
}

} // namespace mutsamp
