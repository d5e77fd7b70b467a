// Copyright 2026 The vqls-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vqls/analysis.hpp"
#include "vqls/cost.hpp"
#include "vqls/error.hpp"
#include "vqls/hadamard.hpp"
#include "vqls/io.hpp"
#include "vqls/optimizer.hpp"
#include "vqls/parallel.hpp"
#include "vqls/problems.hpp"

/// The `vqls` command line: gen, solve, sweep, barren, resources and run.
/// Every command resolves one JSON configuration (defaults, then --config,
/// then explicit options), records it in manifest.json and derives all
/// output from it, so `vqls run --manifest` reproduces a directory.
namespace vqls::cli {

using nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

inline constexpr std::string_view tool_version = "1.0.0";

enum class ValueType { Int, Uint, Real, Text, Flag, IntList, TextList };

struct Key {
    std::string name;
    ValueType type;
    std::string help;
};

/// Option names: key "max_evaluations" is "--max-evaluations".
inline std::string option_name(const std::string &key) {
    std::string s = "--" + key;
    for (char &c : s) {
        if (c == '_') {
            c = '-';
        }
    }
    return s;
}

inline std::vector<Key> instance_keys() {
    return {{"family", ValueType::Text, "ising, random-pauli, banded or matrix"},
            {"n", ValueType::Int, "qubit count (ising, random-pauli)"},
            {"J", ValueType::Real, "ising coupling"},
            {"eta", ValueType::Real, "ising identity weight"},
            {"instance_seed", ValueType::Uint, "seed of the instance generator"},
            {"size", ValueType::Int, "banded matrix size"},
            {"bandwidth", ValueType::Int, "banded matrix bandwidth"},
            {"matrix", ValueType::Text, "Matrix Market file (family matrix)"},
            {"rhs", ValueType::Text, "right-hand side, one value per line"},
            {"block_rows", ValueType::Text, "row block a:b (half open)"},
            {"block_cols", ValueType::Text, "column block a:b (half open)"}};
}

inline std::vector<Key> optimizer_keys() {
    return {{"rhobeg", ValueType::Real, "initial trust radius"},
            {"rhoend", ValueType::Real, "final trust radius"},
            {"window", ValueType::Int, "evaluations without improvement before stopping"},
            {"max_evaluations", ValueType::Int, "evaluation cap"}};
}

inline std::vector<Key> keys_for(const std::string &command) {
    std::vector<Key> k = {{"seed", ValueType::Uint, "base seed"}, {"threads", ValueType::Int, "worker threads"}};
    auto add = [&k](const std::vector<Key> &more) { k.insert(k.end(), more.begin(), more.end()); };
    if (command == "gen") {
        add(instance_keys());
    } else if (command == "solve") {
        add(instance_keys());
        add(optimizer_keys());
        add({{"layers", ValueType::Int, "ansatz layers"},
             {"kind", ValueType::Text, "global or local"},
             {"repeats", ValueType::Int, "solves with seeds seed, seed+1, ..."},
             {"trajectory", ValueType::Flag, "write per-evaluation cost CSVs"}});
    } else if (command == "sweep") {
        add(instance_keys());
        add(optimizer_keys());
        add({{"layers", ValueType::IntList, "comma-separated layer counts"},
             {"kind", ValueType::Text, "global or local"},
             {"repeats", ValueType::Int, "solves per layer count"}});
    } else if (command == "barren") {
        add(instance_keys());
        add({{"ns", ValueType::IntList, "comma-separated qubit counts"},
             {"kinds", ValueType::TextList, "comma-separated cost kinds"},
             {"layers", ValueType::Int, "ansatz layers"},
             {"samples", ValueType::Int, "parameter samples per point"},
             {"component", ValueType::Int, "gradient component"}});
    } else if (command == "resources") {
        add(instance_keys());
        add({{"ns", ValueType::IntList, "comma-separated qubit counts"},
             {"kind", ValueType::Text, "global or local"},
             {"layers", ValueType::Int, "ansatz layers"},
             {"print_budget", ValueType::Int, "print the test budget for this many LCU terms"}});
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    return k;
}

inline json defaults_for(const std::string &command) {
    json d = {{"seed", 0}, {"threads", 1}, {"family", "ising"}, {"n", 4}, {"J", 0.1}, {"eta", 5.0},
              {"size", 12}, {"bandwidth", 3}};
    const json opt = {{"rhobeg", 0.5}, {"rhoend", 1e-6}, {"window", 100}, {"max_evaluations", 100000}};
    if (command == "solve") {
        d.update(opt);
        d.update({{"layers", 1}, {"kind", "global"}, {"repeats", 1}, {"trajectory", false}});
    } else if (command == "sweep") {
        d.update(opt);
        d.update({{"layers", {1, 2, 3, 4}}, {"kind", "global"}, {"repeats", 10}});
    } else if (command == "barren") {
        d["family"] = "random-pauli";
        d.update({{"ns", {2, 3, 4}}, {"kinds", {"global", "local"}}, {"layers", 1}, {"samples", 4096},
                  {"component", 0}});
    } else if (command == "resources") {
        d.update({{"ns", {2, 3, 4, 5, 6}}, {"kind", "global"}, {"layers", 1}, {"print_budget", 0}});
    }
    return d;
}

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        const auto a = cur.find_first_not_of(" \t");
        const auto b = cur.find_last_not_of(" \t");
        if (a == std::string::npos) {
            throw ConfigError("empty item in list '" + s + "'");
        }
        out.push_back(cur.substr(a, b - a + 1));
    }
    if (out.empty()) {
        throw ConfigError("empty list");
    }
    return out;
}

/// Converts command-line text to the JSON value of a key.
inline json parse_value(const Key &k, const std::string &text) {
    try {
        std::size_t used = 0;
        switch (k.type) {
        case ValueType::Int: {
            const long v = std::stol(text, &used);
            if (used != text.size()) {
                break;
            }
            return v;
        }
        case ValueType::Uint: {
            if (!text.empty() && text[0] == '-') {
                break;
            }
            const unsigned long long v = std::stoull(text, &used);
            if (used != text.size()) {
                break;
            }
            return v;
        }
        case ValueType::Real: {
            const double v = std::stod(text, &used);
            if (used != text.size()) {
                break;
            }
            return v;
        }
        case ValueType::Text: return text;
        case ValueType::Flag: return text == "true" || text == "1";
        case ValueType::IntList: {
            json arr = json::array();
            for (const auto &item : split(text, ',')) {
                arr.push_back(std::stol(item, &used));
                if (used != item.size()) {
                    throw ConfigError("bad integer '" + item + "'");
                }
            }
            return arr;
        }
        case ValueType::TextList: {
            json arr = json::array();
            for (const auto &item : split(text, ',')) {
                arr.push_back(item);
            }
            return arr;
        }
        }
    } catch (const std::logic_error &) {
    }
    throw ConfigError("invalid value '" + text + "' for " + option_name(k.name));
}

/// Checks every key of `cfg` against the schema of `command`.
inline void validate_config(const std::string &command, const json &cfg) {
    if (!cfg.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    const auto keys = keys_for(command);
    for (const auto &[name, value] : cfg.items()) {
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const Key &k) { return k.name == name; });
        if (it == keys.end()) {
            throw ConfigError("unknown configuration key '" + name + "' for command " + command);
        }
        bool ok = false;
        switch (it->type) {
        case ValueType::Int: ok = value.is_number_integer(); break;
        case ValueType::Uint: ok = value.is_number_unsigned() || (value.is_number_integer() && value.get<long>() >= 0); break;
        case ValueType::Real: ok = value.is_number(); break;
        case ValueType::Text: ok = value.is_string(); break;
        case ValueType::Flag: ok = value.is_boolean(); break;
        case ValueType::IntList:
            ok = value.is_array() && !value.empty() &&
                 std::all_of(value.begin(), value.end(), [](const json &v) { return v.is_number_integer(); });
            break;
        case ValueType::TextList:
            ok = value.is_array() && !value.empty() &&
                 std::all_of(value.begin(), value.end(), [](const json &v) { return v.is_string(); });
            break;
        }
        if (!ok) {
            throw ConfigError("configuration key '" + name + "' has the wrong type");
        }
    }
}

inline json read_json_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot open '" + path + "'");
    }
    try {
        return json::parse(f);
    } catch (const json::parse_error &e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Defaults, then the config file, then explicit options.
inline json resolve_config(const std::string &command, const json &file_config, const json &overrides) {
    validate_config(command, file_config);
    validate_config(command, overrides);
    json cfg = defaults_for(command);
    cfg.update(file_config);
    cfg.update(overrides);
    return cfg;
}

// ---------------------------------------------------------------------------
// Instances and outputs.

inline problems::BlockRange parse_range(const std::string &text, long limit) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("block range '" + text + "' must look like a:b");
    }
    try {
        const long a = std::stol(text.substr(0, colon));
        const long b = std::stol(text.substr(colon + 1));
        if (a < 0 || b <= a || b > limit) {
            throw ConfigError("block range '" + text + "' is empty or outside 0:" + std::to_string(limit));
        }
        return {a, b - a};
    } catch (const std::logic_error &) {
        throw ConfigError("block range '" + text + "' must look like a:b");
    }
}

inline std::uint64_t instance_seed(const json &cfg) {
    return cfg.contains("instance_seed") ? cfg["instance_seed"].get<std::uint64_t>() : cfg["seed"].get<std::uint64_t>();
}

inline problems::ProblemInstance make_instance(const json &cfg, int n) {
    const std::string family = cfg["family"];
    if (family == "ising") {
        return problems::make_ising(n, cfg["J"].get<double>(), cfg["eta"].get<double>());
    }
    if (family == "random-pauli") {
        return problems::make_random_pauli(n, instance_seed(cfg));
    }
    if (family == "banded") {
        return problems::make_banded_synthetic(cfg["size"].get<long>(), cfg["bandwidth"].get<long>(),
                                               instance_seed(cfg));
    }
    if (family == "matrix") {
        if (!cfg.contains("matrix")) {
            throw ConfigError("family matrix needs --matrix");
        }
        const auto a = io::read_matrix_market(cfg["matrix"].get<std::string>());
        numerics::RealVector b = cfg.contains("rhs") ? io::read_vector(cfg["rhs"].get<std::string>())
                                                     : numerics::RealVector::Ones(a.rows());
        const problems::BlockRange rows =
            cfg.contains("block_rows") ? parse_range(cfg["block_rows"], a.rows()) : problems::BlockRange{0, a.rows()};
        const problems::BlockRange cols =
            cfg.contains("block_cols") ? parse_range(cfg["block_cols"], a.cols()) : problems::BlockRange{0, a.cols()};
        return problems::extract_and_pad(a, b, rows, cols, "matrix");
    }
    throw ConfigError("unknown family '" + family + "'");
}

inline problems::ProblemInstance make_instance(const json &cfg) { return make_instance(cfg, cfg["n"].get<int>()); }

inline optimizer::OptimizerConfig optimizer_config(const json &cfg, std::uint64_t seed) {
    optimizer::OptimizerConfig c;
    c.initial_trust_radius = cfg["rhobeg"].get<double>();
    c.final_trust_radius = cfg["rhoend"].get<double>();
    const long window = cfg["window"].get<long>();
    const long cap = cfg["max_evaluations"].get<long>();
    if (window < 1 || cap < 1) {
        throw ConfigError("window and max_evaluations must be positive");
    }
    c.no_improve_window = static_cast<std::size_t>(window);
    c.max_evaluations = static_cast<std::size_t>(cap);
    c.seed = seed;
    c.validate();
    return c;
}

inline std::size_t positive(const json &cfg, const char *key) {
    const long v = cfg[key].get<long>();
    if (v < 1) {
        throw ConfigError(std::string(key) + " must be at least 1");
    }
    return static_cast<std::size_t>(v);
}

inline void write_file(const fs::path &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    f << content;
}

/// CSV text with a schema line and header.
inline std::string csv(std::string_view schema, std::string_view header, const std::vector<std::string> &rows) {
    std::string s = "# schema: " + std::string(schema) + "\n" + std::string(header) + "\n";
    for (const auto &r : rows) {
        s += r + "\n";
    }
    return s;
}

// ---------------------------------------------------------------------------
// Commands. Each writes into `out` and reports on `log`.

inline int cmd_gen(const json &cfg, const fs::path &out, std::ostream &log, json &manifest) {
    const auto inst = make_instance(cfg);
    problems::check_invariants(inst);
    manifest["instance"] = problems::manifest(inst);
    write_file(out / "instance.json", problems::manifest(inst).dump(2) + "\n");
    std::ostringstream m, b;
    io::write_matrix_market(m, inst.matrix);
    io::write_vector(b, inst.b);
    write_file(out / "matrix.mtx", m.str());
    write_file(out / "rhs.txt", b.str());
    if (inst.lcu) {
        std::vector<std::string> rows;
        for (const auto &t : inst.lcu->terms()) {
            rows.push_back(t.string.str() + "," + io::fmt(t.coefficient.real()) + "," + io::fmt(t.coefficient.imag()));
        }
        write_file(out / "lcu.csv", csv("lcu/1", "string,re,im", rows));
    }
    write_file(out / "b_circuit.txt", circuit::to_text(inst.b_circuit));
    log << "family " << inst.metadata.family << ", n = " << inst.n << ", condition number "
        << io::fmt(inst.metadata.condition_number) << ", scale " << io::fmt(inst.metadata.scale) << "\n";
    for (const auto &w : inst.metadata.warnings) {
        log << "warning: " << w << "\n";
    }
    return exit_ok;
}

inline constexpr std::string_view solve_header = "seed,family,n,layers,kind,best_cost,cosine,evaluations,termination";

inline std::string solve_row(const optimizer::SolveReport &r) {
    return std::to_string(r.seed) + "," + r.family + "," + std::to_string(r.n) + "," + std::to_string(r.layers) +
           "," + std::string(kind_name(r.kind)) + "," + io::fmt(r.best_cost) + "," + io::fmt(r.cosine) + "," +
           std::to_string(r.evaluations) + "," + std::string(optimizer::termination_name(r.termination));
}

inline constexpr std::string_view summary_header =
    "layers,repeats,cosine_mean,cosine_std,cost_mean,cost_std,evaluations_mean,evaluations_std";

inline std::string summary_row(const optimizer::SweepRow &r) {
    return std::to_string(r.layers) + "," + std::to_string(r.repeats) + "," + io::fmt(r.cosine_mean) + "," +
           io::fmt(r.cosine_std) + "," + io::fmt(r.cost_mean) + "," + io::fmt(r.cost_std) + "," +
           io::fmt(r.evaluations_mean) + "," + io::fmt(r.evaluations_std);
}

/// Solves for every layer count and seed, grouped by layer count.
inline std::vector<optimizer::SolveReport> run_solves(const problems::ProblemInstance &inst,
                                                      const std::vector<int> &layers, CostKind kind,
                                                      const json &cfg) {
    const std::size_t repeats = positive(cfg, "repeats");
    const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
    const std::size_t jobs = layers.size() * repeats;
    return parallel::ordered_map<optimizer::SolveReport>(jobs, positive(cfg, "threads"), [&](std::size_t j) {
        const int l = layers[j / repeats];
        return optimizer::solve(inst, l, kind, optimizer_config(cfg, seed + j % repeats));
    });
}

inline void write_solves(const fs::path &out, const std::vector<optimizer::SolveReport> &reports,
                         const std::vector<int> &layers, std::size_t repeats, std::ostream &log) {
    std::vector<const optimizer::SolveReport *> sorted;
    for (const auto &r : reports) {
        sorted.push_back(&r);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto *a, const auto *b) {
        return std::tie(a->seed, a->n, a->layers) < std::tie(b->seed, b->n, b->layers);
    });
    std::vector<std::string> rows, summary;
    json all = json::array();
    for (const auto *r : sorted) {
        rows.push_back(solve_row(*r));
        all.push_back(optimizer::to_json(*r));
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::span<const optimizer::SolveReport> group(reports.data() + i * repeats, repeats);
        const auto row = optimizer::aggregate(layers[i], group);
        summary.push_back(summary_row(row));
        log << "layers " << row.layers << ": |cos| " << io::fmt(row.cosine_mean) << " +- "
            << io::fmt(row.cosine_std) << ", min cost " << io::fmt(row.cost_mean) << ", evaluations "
            << io::fmt(row.evaluations_mean) << "\n";
    }
    write_file(out / "solves.csv", csv("solves/1", solve_header, rows));
    write_file(out / "summary.csv", csv("summary/1", summary_header, summary));
    write_file(out / "reports.json", all.dump(2) + "\n");
}

inline int cmd_solve(const json &cfg, const fs::path &out, std::ostream &log) {
    const auto inst = make_instance(cfg);
    const CostKind kind = parse_cost_kind(cfg["kind"].get<std::string>());
    const std::vector<int> layers = {cfg["layers"].get<int>()};
    const auto reports = run_solves(inst, layers, kind, cfg);
    write_solves(out, reports, layers, positive(cfg, "repeats"), log);
    if (cfg["trajectory"].get<bool>()) {
        for (const auto &r : reports) {
            write_file(out / ("trajectory_seed" + std::to_string(r.seed) + ".csv"),
                       "# schema: trajectory/1\n" + std::string(optimizer::trajectory_csv_header) + "\n" +
                           optimizer::trajectory_csv(r));
        }
    }
    return exit_ok;
}

inline int cmd_sweep(const json &cfg, const fs::path &out, std::ostream &log) {
    const auto inst = make_instance(cfg);
    const CostKind kind = parse_cost_kind(cfg["kind"].get<std::string>());
    const auto layers = cfg["layers"].get<std::vector<int>>();
    const auto reports = run_solves(inst, layers, kind, cfg);
    write_solves(out, reports, layers, positive(cfg, "repeats"), log);
    return exit_ok;
}

inline int cmd_barren(const json &cfg, const fs::path &out, std::ostream &log) {
    const auto ns = cfg["ns"].get<std::vector<int>>();
    const int layers = cfg["layers"].get<int>();
    const std::size_t samples = positive(cfg, "samples");
    const auto component = static_cast<std::size_t>(cfg["component"].get<long>());
    const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
    std::vector<std::string> rows, fits;
    for (const auto &kind_text : cfg["kinds"].get<std::vector<std::string>>()) {
        const CostKind kind = parse_cost_kind(kind_text);
        std::vector<std::pair<double, double>> points;
        for (int n : ns) {
            const auto inst = make_instance(cfg, n);
            const auto st = analysis::estimate_gradient_variance(inst, kind, layers, component, samples, seed,
                                                                 positive(cfg, "threads"));
            rows.push_back(analysis::variance_csv_row(n, layers, kind, st));
            points.emplace_back(n, st.variance);
        }
        if (points.size() >= 3) {
            const auto fit = analysis::fit_variance_decay(points);
            fits.push_back(std::string(kind_name(kind)) + "," + io::fmt(fit.slope) + "," + io::fmt(fit.intercept) +
                           "," + io::fmt(fit.r2));
            log << kind_name(kind) << ": ln variance slope " << io::fmt(fit.slope) << " (r2 " << io::fmt(fit.r2)
                << ")\n";
        }
    }
    write_file(out / "variance.csv", csv("variance/1", analysis::variance_csv_header, rows));
    write_file(out / "fit.csv", csv("fit/1", "kind,slope,intercept,r2", fits));
    return exit_ok;
}

inline int cmd_resources(const json &cfg, const fs::path &out, std::ostream &log) {
    const CostKind kind = parse_cost_kind(cfg["kind"].get<std::string>());
    const long budget_terms = cfg["print_budget"].get<long>();
    std::vector<std::string> budget_rows;
    if (budget_terms > 0) {
        const int n = cfg["ns"].get<std::vector<int>>().front();
        const auto plan = hadamard::enumerate_tests(static_cast<std::size_t>(budget_terms), n, kind);
        log << hadamard::budget_csv_header << "\n" << hadamard::budget_csv_row(plan.budget) << "\n";
        budget_rows.push_back(hadamard::budget_csv_row(plan.budget));
    }
    std::vector<std::string> rows;
    const int layers = cfg["layers"].get<int>();
    for (int n : cfg["ns"].get<std::vector<int>>()) {
        const auto inst = make_instance(cfg, n);
        const auto rep = analysis::resource_report(inst, kind, layers, cfg["seed"].get<std::uint64_t>());
        budget_rows.push_back(hadamard::budget_csv_row(
            hadamard::enumerate_tests(inst.lcu->size(), inst.n, kind).budget));
        for (const auto &[name, part] : {std::pair{"denominator", &rep.denominator}, {"numerator", &rep.numerator}}) {
            const std::string prefix = inst.metadata.family + "," + std::to_string(inst.n) + "," + name + ",";
            for (const auto &[gate, count] : part->mean_counts) {
                rows.push_back(prefix + gate + "," + io::fmt(count) + "," + io::fmt(part->mean_depth));
            }
            rows.push_back(prefix + "total," + io::fmt(part->mean_total) + "," + io::fmt(part->mean_depth));
        }
        log << inst.metadata.family << " n=" << n << ": denominator mean total " << io::fmt(rep.denominator.mean_total)
            << ", numerator mean total " << io::fmt(rep.numerator.mean_total) << ", numerator mean depth "
            << io::fmt(rep.numerator.mean_depth) << "\n";
    }
    write_file(out / "resources.csv",
               csv("resources/1", analysis::resource_csv_header, rows));
    write_file(out / "budget.csv", csv("budget/1", hadamard::budget_csv_header, budget_rows));
    return exit_ok;
}

/// Runs a resolved configuration and writes manifest.json next to its output.
inline int execute(const std::string &command, const json &cfg, const fs::path &out, std::ostream &log) {
    fs::create_directories(out);
    json manifest = {{"tool", "vqls"}, {"version", tool_version}, {"command", command}, {"config", cfg}};
    write_file(out / "manifest.json", manifest.dump(2) + "\n");
    if (command == "gen") {
        const int rc = cmd_gen(cfg, out, log, manifest);
        write_file(out / "manifest.json", manifest.dump(2) + "\n");
        return rc;
    }
    if (command == "solve") {
        return cmd_solve(cfg, out, log);
    }
    if (command == "sweep") {
        return cmd_sweep(cfg, out, log);
    }
    if (command == "barren") {
        return cmd_barren(cfg, out, log);
    }
    if (command == "resources") {
        return cmd_resources(cfg, out, log);
    }
    throw ConfigError("unknown command '" + command + "'");
}

inline int rerun_manifest(const std::string &path, const fs::path &out, std::ostream &log) {
    const json m = read_json_file(path);
    if (!m.contains("command") || !m.contains("config") || !m["command"].is_string()) {
        throw ConfigError("'" + path + "' is not a vqls manifest");
    }
    const std::string command = m["command"];
    return execute(command, resolve_config(command, m["config"], json::object()), out, log);
}

/// Entry point. Errors are reported on `err` and mapped to exit codes.
inline int main_entry(int argc, const char *const *argv, std::ostream &log = std::cout,
                      std::ostream &err = std::cerr) {
    CLI::App app{"Variational quantum linear solver laboratory"};
    app.require_subcommand(1);
    std::string out_dir = "out";
    std::string config_path;
    std::string manifest_path;
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, std::map<std::string, CLI::Option *>> opts;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"gen", "generate or ingest an instance"},
        {"solve", "optimize the ansatz for one layer count"},
        {"sweep", "solve over a list of layer counts"},
        {"barren", "gradient variance against qubit count"},
        {"resources", "Hadamard-test gate counts and depths"}};
    for (const auto &[command, description] : commands) {
        auto *sub = app.add_subcommand(command, description);
        sub->add_option("--out-dir", out_dir, "output directory");
        sub->add_option("--config", config_path, "JSON configuration file");
        for (const auto &k : keys_for(command)) {
            if (k.type == ValueType::Flag) {
                opts[command][k.name] = sub->add_flag(option_name(k.name), k.help);
            } else {
                opts[command][k.name] = sub->add_option(option_name(k.name), raw[command][k.name], k.help);
            }
        }
    }
    auto *run = app.add_subcommand("run", "re-execute a manifest");
    run->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
    run->add_option("--out-dir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, log, err);
        return code == 0 ? exit_ok : exit_config;
    }
    try {
        if (run->parsed()) {
            return rerun_manifest(manifest_path, out_dir, log);
        }
        for (auto *sub : app.get_subcommands()) {
            const std::string command = sub->get_name();
            json overrides = json::object();
            for (const auto &k : keys_for(command)) {
                const auto *o = opts[command][k.name];
                if (o->count() == 0) {
                    continue;
                }
                overrides[k.name] = k.type == ValueType::Flag ? json(true) : parse_value(k, raw[command][k.name]);
            }
            const json file = config_path.empty() ? json::object() : read_json_file(config_path);
            return execute(command, resolve_config(command, file, overrides), out_dir, log);
        }
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const json::exception &e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const fs::filesystem_error &e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }
    return exit_config;
}

} // namespace vqls::cli
