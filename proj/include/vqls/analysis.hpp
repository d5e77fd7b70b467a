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
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vqls/circuit.hpp"
#include "vqls/cost.hpp"
#include "vqls/error.hpp"
#include "vqls/hadamard.hpp"
#include "vqls/io.hpp"
#include "vqls/optimizer.hpp"
#include "vqls/parallel.hpp"
#include "vqls/problems.hpp"

/// Gradient statistics over random parameters, decay fits, gradient-norm
/// scans and gate-count summaries of the Hadamard-test circuits.
namespace vqls::analysis {

/// Neumaier-compensated sum.
inline double compensated_sum(std::span<const double> v) {
    double sum = 0.0;
    double c = 0.0;
    for (double x : v) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

struct GradientStats {
    std::size_t component = 0;
    double mean = 0.0;
    /// Unbiased sample variance.
    double variance = 0.0;
    double se_mean = 0.0;
    /// Normal-theory approximation variance * sqrt(2 / (S - 1)); optimistic
    /// for heavy-tailed samples.
    double se_variance = 0.0;
    std::size_t samples = 0;
};

inline GradientStats summarize(std::size_t component, std::span<const double> values) {
    const std::size_t s = values.size();
    if (s < 2) {
        throw ConfigError("gradient statistics need at least 2 samples");
    }
    GradientStats st;
    st.component = component;
    st.samples = s;
    st.mean = compensated_sum(values) / static_cast<double>(s);
    std::vector<double> sq(s);
    for (std::size_t i = 0; i < s; ++i) {
        sq[i] = (values[i] - st.mean) * (values[i] - st.mean);
    }
    st.variance = compensated_sum(sq) / static_cast<double>(s - 1);
    st.se_mean = std::sqrt(st.variance / static_cast<double>(s));
    st.se_variance = st.variance * std::sqrt(2.0 / static_cast<double>(s - 1));
    return st;
}

/// Samples theta ~ U[0, 4 pi]^m under `seed`.
inline std::vector<std::vector<double>> sample_parameters(std::size_t m, std::size_t samples, std::uint64_t seed,
                                                         double upper = 4.0 * std::numbers::pi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, upper);
    std::vector<std::vector<double>> out(samples, std::vector<double>(m));
    for (auto &theta : out) {
        for (auto &t : theta) {
            t = u(rng);
        }
    }
    return out;
}

/// Mean and variance of dC/dtheta_component over theta ~ U[0, 4 pi]^m, for an
/// explicit parameterised ansatz.
inline GradientStats estimate_gradient_variance(const problems::ProblemInstance &inst,
                                                const circuit::Circuit &ansatz, CostKind kind,
                                                std::size_t component, std::size_t samples, std::uint64_t seed,
                                                std::size_t threads = 1) {
    if (samples < 2) {
        throw ConfigError("estimate_gradient_variance: samples must be at least 2");
    }
    if (component >= ansatz.parameter_count()) {
        throw ConfigError("estimate_gradient_variance: component " + std::to_string(component) +
                          " out of range (" + std::to_string(ansatz.parameter_count()) + " parameters)");
    }
    const auto thetas = sample_parameters(ansatz.parameter_count(), samples, seed);
    constexpr std::size_t chunk = 64;
    const std::size_t chunks = (samples + chunk - 1) / chunk;
    const auto parts = parallel::ordered_map<std::vector<double>>(chunks, threads, [&](std::size_t c) {
        cost::Evaluator ev(inst, ansatz);
        std::vector<double> out;
        for (std::size_t i = c * chunk; i < std::min(samples, (c + 1) * chunk); ++i) {
            out.push_back(ev.partial(thetas[i], kind, component));
        }
        return out;
    });
    std::vector<double> values;
    values.reserve(samples);
    for (const auto &p : parts) {
        values.insert(values.end(), p.begin(), p.end());
    }
    return summarize(component, values);
}

/// As above with the layered RY/CZ ansatz.
inline GradientStats estimate_gradient_variance(const problems::ProblemInstance &inst, CostKind kind, int layers,
                                                std::size_t component, std::size_t samples, std::uint64_t seed,
                                                std::size_t threads = 1) {
    return estimate_gradient_variance(inst, circuit::ansatz_template(inst.n, layers), kind, component, samples,
                                      seed, threads);
}

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope x, with r^2 (taken as 1 for
/// an exact fit to constant data).
inline DecayFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw ConfigError("linear_fit: need matching x and y with at least 2 points");
    }
    const double k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw ConfigError("linear_fit: all points share one x");
    }
    DecayFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss_res += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res <= 1e-24 ? 1.0 : 0.0);
    return f;
}

/// Least squares of ln(variance) against n.
inline DecayFit fit_variance_decay(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) {
        throw ConfigError("fit_variance_decay: need at least 3 points");
    }
    std::vector<double> xs, ys;
    for (auto [n, v] : points) {
        if (!(v > 0.0)) {
            throw NumericalError("fit_variance_decay: variance must be positive, got " + std::to_string(v));
        }
        xs.push_back(n);
        ys.push_back(std::log(v));
    }
    return linear_fit(xs, ys);
}

inline double norm(std::span<const double> g) {
    double s = 0.0;
    for (double x : g) {
        s += x * x;
    }
    return std::sqrt(s);
}

/// Gradient norms at `count` points theta ~ U[0, 2 pi)^m, sorted ascending.
inline std::vector<double> gradient_norm_scan(const problems::ProblemInstance &inst, int layers, CostKind kind,
                                              std::size_t count, std::uint64_t seed, std::size_t threads = 1) {
    if (count < 1) {
        throw ConfigError("gradient_norm_scan: count must be at least 1");
    }
    const auto ansatz = circuit::ansatz_template(inst.n, layers);
    const auto thetas = sample_parameters(ansatz.parameter_count(), count, seed, 2.0 * std::numbers::pi);
    constexpr std::size_t chunk = 64;
    const std::size_t chunks = (count + chunk - 1) / chunk;
    const auto parts = parallel::ordered_map<std::vector<double>>(chunks, threads, [&](std::size_t c) {
        cost::Evaluator ev(inst, ansatz);
        std::vector<double> out;
        for (std::size_t i = c * chunk; i < std::min(count, (c + 1) * chunk); ++i) {
            out.push_back(norm(ev.gradient(thetas[i], kind)));
        }
        return out;
    });
    std::vector<double> norms;
    for (const auto &p : parts) {
        norms.insert(norms.end(), p.begin(), p.end());
    }
    std::sort(norms.begin(), norms.end());
    return norms;
}

struct TrajectoryNorm {
    std::size_t evaluation = 0;
    double cost = 0.0;
    double gradient_norm = 0.0;
};

/// Gradient norm at every incumbent of a solve.
inline std::vector<TrajectoryNorm> trajectory_gradient_norms(const problems::ProblemInstance &inst,
                                                             const optimizer::SolveReport &report) {
    cost::Evaluator ev(inst, circuit::ansatz_template(inst.n, report.layers));
    std::vector<TrajectoryNorm> out;
    for (const auto &inc : report.incumbents) {
        out.push_back({inc.evaluation, inc.value, norm(ev.gradient(inc.x, report.kind))});
    }
    return out;
}

struct AveragedResources {
    std::size_t circuits = 0;
    std::map<std::string, double> mean_counts;
    double mean_total = 0.0;
    double mean_depth = 0.0;
};

struct ResourcePair {
    AveragedResources denominator;
    AveragedResources numerator;
};

/// Builds, lowers and counts every Hadamard-test circuit of one cost
/// evaluation, averaged per family. Ansatz angles are drawn from U[0, 2 pi)
/// under `seed`, so that no rotation vanishes by accident.
inline ResourcePair resource_report(const problems::ProblemInstance &inst, CostKind kind, int layers = 1,
                                    std::uint64_t seed = 0) {
    if (!inst.lcu) {
        throw ConfigError("resource_report: instance has no Pauli decomposition");
    }
    const auto ansatz = circuit::ansatz_template(inst.n, layers);
    const auto theta = optimizer::initial_parameters(ansatz.parameter_count(), seed);
    const hadamard::TestContext ctx{ansatz, inst.b_circuit, *inst.lcu};
    const auto plan = hadamard::enumerate_tests(inst.lcu->size(), inst.n, kind);

    ResourcePair out;
    for (const auto &spec : plan.specs) {
        auto &acc = spec.family == hadamard::Family::Denominator ? out.denominator : out.numerator;
        const auto report = circuit::resources(circuit::lower(hadamard::build_circuit(spec, ctx, theta)));
        ++acc.circuits;
        for (const auto &[k, v] : report.counts) {
            acc.mean_counts[std::string(circuit::kind_name(k))] += static_cast<double>(v);
        }
        acc.mean_total += static_cast<double>(report.total);
        acc.mean_depth += static_cast<double>(report.depth);
    }
    for (auto *acc : {&out.denominator, &out.numerator}) {
        if (acc->circuits == 0) {
            continue;
        }
        const double c = static_cast<double>(acc->circuits);
        for (auto &[k, v] : acc->mean_counts) {
            v /= c;
        }
        acc->mean_total /= c;
        acc->mean_depth /= c;
    }
    return out;
}

inline constexpr std::string_view variance_csv_header = "n,layers,kind,component,mean,variance,se";

inline std::string variance_csv_row(int n, int layers, CostKind kind, const GradientStats &s) {
    return std::to_string(n) + "," + std::to_string(layers) + "," + std::string(kind_name(kind)) + "," +
           std::to_string(s.component) + "," + io::fmt(s.mean) + "," + io::fmt(s.variance) + "," +
           io::fmt(s.se_mean);
}

inline constexpr std::string_view resource_csv_header = "family,n,circuit,gate_kind,mean_count,mean_depth";

} // namespace vqls::analysis
