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

// Acceptance checks. Prints one PASS/FAIL line per criterion with the
// measured numbers. Exits non-zero on any failure, or with --known-failures,
// on any difference from the listed set.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vqls/cli.hpp"
#include "vqls/vqls.hpp"

namespace {

using namespace vqls;
namespace fs = std::filesystem;
using numerics::DenseMatrix;

// Pinned tolerances and protocol constants.
constexpr double lcu_tol = 1e-10;
constexpr double path_tol = 1e-9;
constexpr double kappa_rel_tol = 0.01;
constexpr double cos_target = 0.99;
constexpr double ising_cost_target = 1e-3;
constexpr double constructed_cost_target = 1e-6;
constexpr double constructed_cos_target = 1.0 - 1e-6;
constexpr double fd_step = 1e-5;
constexpr double fd_tol = 1e-6;
constexpr double se_multiple = 3.0;
constexpr double linear_r2 = 0.99;
constexpr double depth_ratio_target = 10.0;
constexpr std::uint64_t random_pauli_seed_base = 1000; // instance seed 1000 + n
constexpr std::uint64_t variance_sample_seed = 2026;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::set<int> failed;

void report(int id, const std::string &title, const Outcome &o, double seconds) {
    std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!o.pass) {
        failed.insert(id);
    }
}

void check(int id, const std::string &title, const std::function<Outcome()> &body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    report(id, title, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

DenseMatrix random_matrix(int dim, bool hermitian, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    DenseMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            m(i, j) = {g(rng), g(rng)};
        }
    }
    return hermitian ? DenseMatrix((m + m.adjoint()) / 2.0) : m;
}

std::vector<double> uniform_theta(std::size_t m, std::uint64_t seed) { return optimizer::initial_parameters(m, seed); }

problems::ProblemInstance random_pauli(int n) { return problems::make_random_pauli(n, random_pauli_seed_base + n); }

optimizer::OptimizerConfig solver_config(std::size_t cap, std::uint64_t seed) {
    optimizer::OptimizerConfig c;
    c.max_evaluations = cap;
    c.seed = seed;
    return c;
}

Outcome lcu_round_trip() {
    std::mt19937_64 rng(1);
    const auto a = random_matrix(16, true, rng);
    const double err = (a - pauli::reconstruct(pauli::decompose(a))).cwiseAbs().maxCoeff();
    int agree = 0;
    for (int k = 0; k < 100; ++k) {
        const int dim = 2 << (k % 4);
        const auto m = random_matrix(dim, k % 2 == 0, rng);
        const bool real = pauli::coefficients_real(pauli::decompose(m), lcu_tol);
        const bool herm = (m - m.adjoint()).cwiseAbs().maxCoeff() <= lcu_tol;
        agree += real == herm && herm == (k % 2 == 0);
    }
    return {err < lcu_tol && agree == 100,
            "max |A - sum c_i A_i| = " + num(err) + ", real-coefficient test agreed on " + std::to_string(agree) +
                "/100 (50 Hermitian, 50 not)"};
}

Outcome cost_paths() {
    double worst = 0.0;
    int cases = 0;
    for (int n : {2, 3, 4}) {
        for (const auto &inst : {problems::make_ising(n), random_pauli(n)}) {
            const auto ansatz = circuit::ansatz_template(n, 2);
            cost::Evaluator ev(inst, ansatz);
            for (auto kind : {CostKind::Global, CostKind::Local}) {
                for (int t = 0; t < 50; ++t) {
                    const auto theta = uniform_theta(ansatz.parameter_count(), 5000 + 100 * n + t);
                    const double d = ev.evaluate(theta, kind, cost::EvalPath::direct()).value;
                    const double h = ev.evaluate(theta, kind, cost::EvalPath::hadamard_exact()).value;
                    worst = std::max(worst, std::abs(d - h));
                    ++cases;
                }
            }
        }
    }
    return {worst < path_tol, "max |direct - hadamard| = " + num(worst) + " over " + std::to_string(cases) + " cases"};
}

Outcome budget() {
    bool ok = true;
    for (std::size_t L = 1; L <= 20; ++L) {
        ok = ok && hadamard::enumerate_tests(L, 2, CostKind::Global).specs.size() == (L * L + 3 * L) / 2;
    }
    const auto four = hadamard::enumerate_tests(4, 2, CostKind::Global).specs.size();
    return {ok && four == 14, "(L^2+3L)/2 for L = 1..20: " + std::string(ok ? "yes" : "no") +
                                  ", L = 4 gives " + std::to_string(four)};
}

Outcome ising_kappa() {
    const std::vector<std::pair<int, double>> ref = {{2, 2.34}, {4, 9.08}, {6, 13.62}, {8, 20.16}, {10, 30.38}};
    Outcome o;
    for (auto [n, kappa] : ref) {
        const double k = problems::make_ising(n).metadata.condition_number;
        o.pass = o.pass && std::abs(k / kappa - 1.0) <= kappa_rel_tol;
        o.detail += "n=" + std::to_string(n) + ": " + num(k) + " ";
    }
    return o;
}

Outcome ising_solve() {
    Outcome o;
    for (int n : {2, 4, 6}) {
        const auto inst = problems::make_ising(n);
        for (auto kind : {CostKind::Global, CostKind::Local}) {
            double cos_sum = 0.0, cost_sum = 0.0;
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const auto r = optimizer::solve(inst, 1, kind, solver_config(20000, seed));
                cos_sum += r.cosine;
                cost_sum += r.best_cost;
            }
            const bool ok = cos_sum / 10 >= cos_target && cost_sum / 10 < ising_cost_target;
            o.pass = o.pass && ok;
            o.detail += "n=" + std::to_string(n) + " " + std::string(kind_name(kind)) + " cos " + num(cos_sum / 10) +
                        " cost " + num(cost_sum / 10) + "; ";
        }
    }
    // Smoke runs at n = 8, 10: the incumbent cost must strictly decrease.
    for (int n : {8, 10}) {
        const auto r = optimizer::solve(problems::make_ising(n), 1, CostKind::Global, solver_config(5000, 0));
        bool decreasing = r.incumbents.size() >= 2;
        for (std::size_t k = 1; k < r.incumbents.size(); ++k) {
            decreasing = decreasing && r.incumbents[k].value < r.incumbents[k - 1].value;
        }
        o.pass = o.pass && decreasing;
        o.detail += "smoke n=" + std::to_string(n) + " cost " + num(r.incumbents.front().value) + " -> " +
                    num(r.best_cost) + "; ";
    }
    return o;
}

Outcome random_pauli_solve() {
    Outcome o;
    {
        const auto inst = random_pauli(2);
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            sum += optimizer::solve(inst, 1, CostKind::Global, solver_config(50000, seed)).cosine;
        }
        o.pass = sum / 10 >= cos_target;
        o.detail += "n=2 layers=1 mean cos " + num(sum / 10) + "; ";
    }
    {
        const auto inst = random_pauli(4);
        std::vector<double> cosines;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            cosines.push_back(optimizer::solve(inst, 4, CostKind::Global, solver_config(50000, seed)).cosine);
        }
        std::sort(cosines.begin(), cosines.end());
        const double median = 0.5 * (cosines[4] + cosines[5]);
        o.pass = o.pass && median >= cos_target;
        o.detail += "n=4 layers=4 median cos " + num(median) + "; ";
    }
    {
        const auto inst = random_pauli(6);
        double c1 = 0.0, c5 = 0.0;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            c1 += optimizer::solve(inst, 1, CostKind::Global, solver_config(50000, seed)).cosine / 3;
            c5 += optimizer::solve(inst, 5, CostKind::Global, solver_config(50000, seed)).cosine / 3;
        }
        o.pass = o.pass && c5 > c1;
        o.detail += "n=6 mean cos layers=1 " + num(c1) + ", layers=5 " + num(c5);
    }
    return o;
}

Outcome constructed_optimum() {
    Outcome o;
    int met = 0, total = 0;
    for (const std::string family : {"ising", "random-pauli", "banded"}) {
        for (int n = 2; n <= 6; ++n) {
            auto inst = family == "ising"          ? problems::make_ising(n)
                        : family == "random-pauli" ? random_pauli(n)
                                                   : problems::make_banded_synthetic(1L << n, 2, n);
            const auto ansatz = circuit::ansatz_template(n, 1);
            const auto theta_hat = uniform_theta(ansatz.parameter_count(), 99 + n);
            const auto x = circuit::simulate(ansatz.bind(theta_hat), circuit::StateVector::zero(n)).to_vector();
            inst.b = (inst.matrix * x).real().normalized();
            inst.b_circuit = circuit::prepare_state(inst.b);
            const auto r = optimizer::solve(inst, 1, CostKind::Global, solver_config(50000, 5));
            const bool ok = r.best_cost < constructed_cost_target && r.cosine > constructed_cos_target;
            met += ok;
            ++total;
            if (!ok) {
                o.pass = false;
                o.detail += family + " n=" + std::to_string(n) + " missed: cost " + num(r.best_cost) + ", cos " +
                            num(r.cosine) + "; ";
            }
        }
    }
    o.detail = std::to_string(met) + "/" + std::to_string(total) + " reached the optimum. " + o.detail;
    return o;
}

Outcome gradients() {
    double worst = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
        const int n = 2 + pair % 3;
        const auto inst = pair % 4 == 0   ? problems::make_ising(n)
                          : pair % 4 == 1 ? problems::make_banded_synthetic(1L << n, 1, pair)
                                          : problems::make_random_pauli(n, 300 + pair);
        const auto kind = pair % 2 ? CostKind::Local : CostKind::Global;
        const auto ansatz = circuit::ansatz_template(n, 1 + pair % 3);
        cost::Evaluator ev(inst, ansatz);
        const auto theta = uniform_theta(ansatz.parameter_count(), 700 + pair);
        const auto g = ev.gradient(theta, kind);
        for (std::size_t k = 0; k < theta.size(); ++k) {
            auto tp = theta, tm = theta;
            tp[k] += fd_step;
            tm[k] -= fd_step;
            const double fd = (ev.value(tp, kind) - ev.value(tm, kind)) / (2 * fd_step);
            worst = std::max(worst, std::abs(fd - g[k]));
        }
    }
    return {worst < fd_tol, "max |shift - central difference| = " + num(worst) + " over 20 pairs"};
}

Outcome barren() {
    Outcome o;
    int within = 0, components = 0;
    std::string worst;
    double worst_ratio = 0.0;
    std::map<CostKind, std::vector<std::pair<double, double>>> points;
    for (int n : {2, 3, 4, 5}) {
        const auto inst = random_pauli(n);
        const std::size_t m = circuit::ansatz_parameter_count(n, 1);
        for (auto kind : {CostKind::Global, CostKind::Local}) {
            for (std::size_t k = 0; k < m; ++k) {
                const auto s = analysis::estimate_gradient_variance(inst, kind, 1, k, 4096, variance_sample_seed);
                const double ratio = std::abs(s.mean) / s.se_mean;
                within += ratio <= se_multiple;
                ++components;
                if (ratio > worst_ratio) {
                    worst_ratio = ratio;
                    worst = "n=" + std::to_string(n) + " " + std::string(kind_name(kind)) + " component " +
                            std::to_string(k);
                }
                if (k == 0) {
                    points[kind].emplace_back(n, s.variance);
                }
            }
        }
    }
    const auto fg = analysis::fit_variance_decay(points[CostKind::Global]);
    const auto fl = analysis::fit_variance_decay(points[CostKind::Local]);
    o.pass = within == components && fg.slope < 0 && fl.slope < 0 && fg.slope < fl.slope;
    o.detail = "(a) " + std::to_string(within) + "/" + std::to_string(components) +
               " component means within 3 SE, largest |mean|/SE " + num(worst_ratio) + " at " + worst +
               "; (b) ln-variance slope global " + num(fg.slope) + ", local " + num(fl.slope);
    return o;
}

Outcome resources() {
    Outcome o;
    std::vector<double> ns, totals;
    bool ratio_ok = true;
    double min_ratio = 1e300;
    for (int n = 2; n <= 10; ++n) {
        const auto r = analysis::resource_report(problems::make_ising(n), CostKind::Global);
        ns.push_back(n);
        totals.push_back(r.denominator.mean_total);
        const double ratio = r.numerator.mean_total / r.denominator.mean_total;
        min_ratio = std::min(min_ratio, ratio);
        ratio_ok = ratio_ok && ratio > 1.0;
    }
    const auto fit = analysis::linear_fit(ns, totals);
    const double ising_depth = analysis::resource_report(problems::make_ising(4), CostKind::Global).numerator.mean_depth;
    const double rp_depth = analysis::resource_report(random_pauli(4), CostKind::Global).numerator.mean_depth;
    const double depth_ratio = rp_depth / ising_depth;
    o.pass = fit.r2 > linear_r2 && ratio_ok && depth_ratio >= depth_ratio_target;
    o.detail = "ising denominator total r^2 " + num(fit.r2) + ", min numerator/denominator " + num(min_ratio) +
               ", n=4 numerator depth random-pauli " + num(rp_depth) + " / ising " + num(ising_depth) + " = " +
               num(depth_ratio) + " (target >= 10)";
    return o;
}

Outcome termination() {
    bool exact = true;
    for (std::size_t m : {1u, 3u, 8u}) {
        for (std::size_t window : {1u, 10u, 100u}) {
            optimizer::OptimizerConfig c;
            c.no_improve_window = window;
            c.final_trust_radius = 1e-300;
            const std::vector<double> x0(m, 0.5);
            const auto r = optimizer::cobyla_minimize([](auto) { return 1.0; }, x0, c);
            exact = exact && r.evaluations == m + 1 + window && r.termination == optimizer::Termination::NoImprovement;
        }
    }
    bool capped = true;
    for (std::size_t cap : {1u, 5u, 50u, 500u}) {
        optimizer::OptimizerConfig c;
        c.max_evaluations = cap;
        std::size_t calls = 0;
        const std::vector<double> x0 = {1.0, 2.0};
        const auto r = optimizer::cobyla_minimize(
            [&calls](std::span<const double> x) {
                ++calls;
                return std::cos(x[0]) * std::sin(x[1]) + 0.1 * x[0] * x[0];
            },
            x0, c);
        capped = capped && calls <= cap && r.evaluations == calls;
    }
    return {exact && capped, std::string("constant objective stops at m+1+window: ") + (exact ? "yes" : "no") +
                                 ", cap respected: " + (capped ? "yes" : "no")};
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "vqls");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    return cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "vqls_acceptance_determinism";
    fs::remove_all(root);
    const std::vector<std::vector<std::string>> runs = {
        {"gen", "--family", "random-pauli", "--n", "3", "--seed", "42"},
        {"solve", "--family", "ising", "--n", "3", "--repeats", "3", "--trajectory", "--threads", "2"},
        {"sweep", "--family", "random-pauli", "--n", "3", "--layers", "1,2", "--repeats", "2", "--kind", "local"},
        {"barren", "--ns", "2,3,4", "--samples", "256", "--threads", "2"},
        {"resources", "--ns", "2,3", "--print-budget", "4"}};
    std::size_t files = 0, identical = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const fs::path a = root / ("a" + std::to_string(k));
        const fs::path b = root / ("b" + std::to_string(k));
        auto args = runs[k];
        args.insert(args.end(), {"--out-dir", a.string()});
        if (cli(args) != 0 || cli({"run", "--manifest", (a / "manifest.json").string(), "--out-dir", b.string()}) != 0) {
            return {false, "command failed: " + runs[k][0]};
        }
        for (const auto &e : fs::directory_iterator(a)) {
            ++files;
            identical += fs::exists(b / e.path().filename()) && slurp(e.path()) == slurp(b / e.path().filename());
        }
    }
    fs::remove_all(root);
    return {files > 0 && identical == files,
            std::to_string(identical) + "/" + std::to_string(files) + " output files byte-identical after re-run"};
}

} // namespace

std::string join(const std::set<int> &ids) {
    std::string s;
    for (int id : ids) {
        s += (s.empty() ? "" : ",") + std::to_string(id);
    }
    return s.empty() ? "none" : s;
}

// Usage: acceptance [--known-failures 7,10]
// With the option, the exit status is zero only when the failing set equals
// the listed set exactly.
int main(int argc, char **argv) {
    std::optional<std::set<int>> known;
    if (argc == 3 && std::string(argv[1]) == "--known-failures") {
        known.emplace();
        std::istringstream ids(argv[2]);
        for (std::string id; std::getline(ids, id, ',');) {
            known->insert(std::stoi(id));
        }
    } else if (argc != 1) {
        std::fprintf(stderr, "usage: %s [--known-failures ID,ID,...]\n", argv[0]);
        return 2;
    }
    check(1, "LCU round trip and real-coefficient property", lcu_round_trip);
    check(2, "cost-path equivalence", cost_paths);
    check(3, "Hadamard test budget", budget);
    check(4, "ising condition numbers", ising_kappa);
    check(5, "ising solve", ising_solve);
    check(6, "random-pauli solve", random_pauli_solve);
    check(7, "constructed optimum", constructed_optimum);
    check(8, "gradient correctness", gradients);
    check(9, "barren-plateau statistics", barren);
    check(10, "resource trends", resources);
    check(11, "termination policy", termination);
    check(12, "determinism", determinism);
    std::printf("%zu criteria failed: %s\n", failed.size(), join(failed).c_str());
    if (known) {
        std::printf("known failures: %s\n", join(*known).c_str());
        return failed == *known ? 0 : 1;
    }
    return failed.empty() ? 0 : 1;
}
