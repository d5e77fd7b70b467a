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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "vqls/circuit.hpp"
#include "vqls/cost.hpp"
#include "vqls/error.hpp"
#include "vqls/io.hpp"
#include "vqls/problems.hpp"

namespace vqls::optimizer {

struct OptimizerConfig {
    double initial_trust_radius = 0.5;
    double final_trust_radius = 1e-6;
    /// Stop after this many consecutive evaluations without an improvement
    /// larger than `improvement_threshold` (counted once the simplex exists).
    std::size_t no_improve_window = 100;
    std::size_t max_evaluations = 100000;
    double improvement_threshold = 1e-12;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(initial_trust_radius > 0.0) || !(final_trust_radius > 0.0) ||
            !(final_trust_radius < initial_trust_radius)) {
            throw ConfigError("optimizer: need 0 < final_trust_radius < initial_trust_radius");
        }
        if (no_improve_window < 1) {
            throw ConfigError("optimizer: no_improve_window must be at least 1");
        }
        if (max_evaluations < 1) {
            throw ConfigError("optimizer: max_evaluations must be at least 1");
        }
    }
};

enum class Termination : std::uint8_t { NoImprovement, MaxEvaluations, TrustRadius };

inline std::string_view termination_name(Termination t) {
    switch (t) {
    case Termination::NoImprovement: return "no-improvement";
    case Termination::MaxEvaluations: return "max-evaluations";
    case Termination::TrustRadius: return "trust-radius";
    }
    return "?";
}

struct TrajectoryPoint {
    std::size_t evaluation = 0;
    double value = 0.0;
};

/// Best point seen so far, recorded each time it improves.
struct Incumbent {
    std::size_t evaluation = 0;
    double value = 0.0;
    std::vector<double> x;
};

struct MinimizeResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::vector<TrajectoryPoint> trajectory;
    std::vector<Incumbent> incumbents;
    Termination termination = Termination::TrustRadius;
};

namespace detail {

/// Evaluation bookkeeping shared by the phases of the minimiser. Throws
/// `Stop` once a termination rule fires.
class Tracker {
  public:
    struct Stop {
        Termination why;
    };

    Tracker(const std::function<double(std::span<const double>)> &f, const OptimizerConfig &cfg, MinimizeResult &out)
        : f_(f), cfg_(cfg), out_(out) {}

    double operator()(const Eigen::VectorXd &x) {
        if (out_.evaluations >= cfg_.max_evaluations) {
            throw Stop{Termination::MaxEvaluations};
        }
        const double v = f_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
        ++out_.evaluations;
        if (!std::isfinite(v)) {
            throw NumericalError("optimizer: objective returned " + std::to_string(v) + " at evaluation " +
                                 std::to_string(out_.evaluations));
        }
        out_.trajectory.push_back({out_.evaluations, v});
        if (v < out_.value - cfg_.improvement_threshold || out_.x.empty()) {
            out_.value = v;
            out_.x.assign(x.data(), x.data() + x.size());
            out_.incumbents.push_back({out_.evaluations, v, out_.x});
            stale_ = 0;
        } else {
            if (v < out_.value) {
                out_.value = v;
                out_.x.assign(x.data(), x.data() + x.size());
                out_.incumbents.push_back({out_.evaluations, v, out_.x});
            }
            if (counting_) {
                ++stale_;
            }
        }
        if (counting_ && stale_ >= cfg_.no_improve_window) {
            throw Stop{Termination::NoImprovement};
        }
        if (out_.evaluations >= cfg_.max_evaluations) {
            throw Stop{Termination::MaxEvaluations};
        }
        return v;
    }

    void start_window() { counting_ = true; }

  private:
    const std::function<double(std::span<const double>)> &f_;
    const OptimizerConfig &cfg_;
    MinimizeResult &out_;
    std::size_t stale_ = 0;
    bool counting_ = false;
};

} // namespace detail

/// Unconstrained COBYLA: linear interpolation on an (m+1)-point simplex, a
/// trust-region step of radius rho along the model's steepest descent, and
/// Powell's geometry safeguards. rho halves from the initial to the final
/// trust radius.
inline MinimizeResult cobyla_minimize(const std::function<double(std::span<const double>)> &f,
                                      std::span<const double> x0, const OptimizerConfig &cfg) {
    cfg.validate();
    const auto m = static_cast<Eigen::Index>(x0.size());
    if (m < 1) {
        throw ConfigError("cobyla_minimize: need at least one variable");
    }
    constexpr double parsig_factor = 0.25;
    constexpr double pareta_factor = 2.1;
    constexpr double geometry_factor = 0.5;
    constexpr double edge_factor = 1.1;
    constexpr std::size_t reinvert_every = 64;

    MinimizeResult out;
    detail::Tracker eval(f, cfg, out);
    double rho = cfg.initial_trust_radius;

    Eigen::VectorXd pole = Eigen::Map<const Eigen::VectorXd>(x0.data(), m);
    double f_pole = 0.0;
    Eigen::MatrixXd sim(m, m);  // column j: vertex j minus pole
    Eigen::MatrixXd simi(m, m); // inverse of sim
    Eigen::VectorXd fv(m);      // values at the vertices
    std::size_t updates = 0;

    auto reinvert = [&] {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sim);
        if (!lu.isInvertible()) {
            throw NumericalError("cobyla_minimize: simplex became degenerate");
        }
        simi = lu.inverse();
        updates = 0;
    };

    // Column j of sim replaced by d.
    auto replace_vertex = [&](Eigen::Index j, const Eigen::VectorXd &d, double value) {
        sim.col(j) = d;
        fv[j] = value;
        const double denom = simi.row(j).dot(d);
        if (std::abs(denom) < 1e-300 || ++updates >= reinvert_every) {
            reinvert();
            return;
        }
        const Eigen::RowVectorXd rj = simi.row(j) / denom;
        const Eigen::VectorXd w = simi * d;
        for (Eigen::Index k = 0; k < m; ++k) {
            if (k != j) {
                simi.row(k) -= w[k] * rj;
            }
        }
        simi.row(j) = rj;
    };

    // Makes the best vertex the pole.
    auto select_pole = [&] {
        Eigen::Index best = -1;
        double best_f = f_pole;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (fv[j] < best_f) {
                best_f = fv[j];
                best = j;
            }
        }
        if (best < 0) {
            return;
        }
        const Eigen::VectorXd shift = sim.col(best);
        pole += shift;
        for (Eigen::Index k = 0; k < m; ++k) {
            sim.col(k) -= shift;
        }
        sim.col(best) = -shift;
        std::swap(fv[best], f_pole);
        // Offsets s_k' = s_k - s_b, s_b' = -s_b: the inverse changes in row b only.
        simi.row(best) = -simi.colwise().sum();
        ++updates;
    };

    try {
        f_pole = eval(pole);
        for (Eigen::Index j = 0; j < m; ++j) {
            Eigen::VectorXd x = pole;
            x[j] += rho;
            fv[j] = eval(x);
        }
        sim = Eigen::MatrixXd::Identity(m, m) * rho;
        simi = Eigen::MatrixXd::Identity(m, m) / rho;
        select_pole();
        reinvert();
        eval.start_window();

        // Cleared by a failed step on an unacceptable simplex, which is then
        // repaired by one geometry step.
        bool trust_step_allowed = true;
        for (;;) {
            select_pole();
            if (updates >= reinvert_every) {
                reinvert();
            }
            const Eigen::VectorXd g = simi.transpose() * (fv.array() - f_pole).matrix();

            const double parsig = parsig_factor * rho;
            const double pareta = pareta_factor * rho;
            Eigen::VectorXd vsig(m), veta(m);
            for (Eigen::Index j = 0; j < m; ++j) {
                vsig[j] = 1.0 / simi.row(j).norm();
                veta[j] = sim.col(j).norm();
            }
            const bool acceptable = (vsig.array() >= parsig).all() && (veta.array() <= pareta).all();

            auto geometry_step = [&] {
                Eigen::Index j = 0;
                veta.maxCoeff(&j);
                if (veta[j] <= pareta) {
                    vsig.minCoeff(&j);
                }
                Eigen::VectorXd d = simi.row(j).transpose() * (geometry_factor * rho / simi.row(j).norm());
                if (g.dot(d) > 0.0) {
                    d = -d;
                }
                const double v = eval(pole + d);
                replace_vertex(j, d, v);
            };

            auto reduce_rho = [&] {
                if (rho <= cfg.final_trust_radius) {
                    throw detail::Tracker::Stop{Termination::TrustRadius};
                }
                rho *= 0.5;
                if (rho <= 1.5 * cfg.final_trust_radius) {
                    rho = cfg.final_trust_radius;
                }
            };

            if (!trust_step_allowed && !acceptable) {
                geometry_step();
                trust_step_allowed = true;
                continue;
            }

            auto after_failure = [&] {
                if (!acceptable) {
                    trust_step_allowed = false;
                } else {
                    reduce_rho();
                }
            };

            const double gnorm = g.norm();
            if (gnorm == 0.0 || !std::isfinite(gnorm)) {
                after_failure();
                continue;
            }

            const Eigen::VectorXd d = -g * (rho / gnorm);
            const double predicted = rho * gnorm;
            const double f_new = eval(pole + d);
            const double actual = f_pole - f_new;
            const bool improved = actual > 0.0;

            // Vertex to drop, following Powell's selection. An improving point
            // always enters the simplex.
            Eigen::Index jdrop = -1;
            double best_ratio = improved ? 0.0 : 1.0;
            Eigen::VectorXd sigbar(m);
            for (Eigen::Index j = 0; j < m; ++j) {
                const double t = std::abs(simi.row(j).dot(d));
                if (t > best_ratio) {
                    jdrop = j;
                    best_ratio = t;
                }
                sigbar[j] = t * vsig[j];
            }
            double edgmax = edge_factor * rho;
            Eigen::Index far = -1;
            for (Eigen::Index j = 0; j < m; ++j) {
                if (sigbar[j] >= parsig || sigbar[j] >= vsig[j]) {
                    const double dist = improved ? (d - sim.col(j)).norm() : veta[j];
                    if (dist > edgmax) {
                        far = j;
                        edgmax = dist;
                    }
                }
            }
            if (far >= 0) {
                jdrop = far;
            }
            if (jdrop >= 0) {
                replace_vertex(jdrop, d, f_new);
                if (actual >= 0.1 * predicted) {
                    continue;
                }
            }
            after_failure();
        }
    } catch (const detail::Tracker::Stop &stop) {
        out.termination = stop.why;
    }
    return out;
}

struct SolveReport {
    std::string family;
    int n = 0;
    int layers = 0;
    CostKind kind = CostKind::Global;
    std::uint64_t seed = 0;
    double best_cost = 0.0;
    std::vector<double> best_theta;
    double cosine = 0.0;
    std::size_t evaluations = 0;
    Termination termination = Termination::TrustRadius;
    std::vector<TrajectoryPoint> trajectory;
    std::vector<Incumbent> incumbents;
    double wall_time = 0.0;
};

/// theta_0 ~ U[0, 2 pi) per component under `seed`.
inline std::vector<double> initial_parameters(std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> theta(m);
    for (auto &t : theta) {
        t = u(rng);
    }
    return theta;
}

/// Minimises the direct-path cost from a random start.
inline SolveReport solve(const problems::ProblemInstance &inst, int layers, CostKind kind,
                         const OptimizerConfig &config) {
    const auto start = std::chrono::steady_clock::now();
    cost::Evaluator ev(inst, circuit::ansatz_template(inst.n, layers));
    const auto theta0 = initial_parameters(ev.parameter_count(), config.seed);
    auto f = [&ev, kind](std::span<const double> theta) { return ev.value(theta, kind); };
    MinimizeResult r = cobyla_minimize(f, theta0, config);

    SolveReport rep;
    rep.family = inst.metadata.family;
    rep.n = inst.n;
    rep.layers = layers;
    rep.kind = kind;
    rep.seed = config.seed;
    rep.best_cost = r.value;
    rep.best_theta = r.x;
    rep.cosine = ev.cosine(r.x);
    rep.evaluations = r.evaluations;
    rep.termination = r.termination;
    rep.trajectory = std::move(r.trajectory);
    rep.incumbents = std::move(r.incumbents);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

/// JSON form of a report. Wall time is included only when asked, so that
/// reruns can be compared byte for byte.
inline nlohmann::json to_json(const SolveReport &r, bool with_wall_time = false) {
    nlohmann::json j = {{"family", r.family},
                        {"n", r.n},
                        {"layers", r.layers},
                        {"kind", kind_name(r.kind)},
                        {"seed", r.seed},
                        {"best_cost", r.best_cost},
                        {"best_theta", r.best_theta},
                        {"cosine", r.cosine},
                        {"evaluations", r.evaluations},
                        {"termination", termination_name(r.termination)}};
    if (with_wall_time) {
        j["wall_time"] = r.wall_time;
    }
    return j;
}

inline constexpr std::string_view trajectory_csv_header = "evaluation,cost";

inline std::string trajectory_csv(const SolveReport &r) {
    std::string s;
    for (const auto &p : r.trajectory) {
        s += std::to_string(p.evaluation) + "," + io::fmt(p.value) + "\n";
    }
    return s;
}

struct SweepRow {
    int layers = 0;
    std::size_t repeats = 0;
    double cosine_mean = 0.0;
    double cosine_std = 0.0;
    double cost_mean = 0.0;
    double cost_std = 0.0;
    double evaluations_mean = 0.0;
    double evaluations_std = 0.0;
};

/// Sample mean and standard deviation (n - 1 denominator; 0 for one sample).
inline std::pair<double, double> mean_std(std::span<const double> v) {
    if (v.empty()) {
        return {0.0, 0.0};
    }
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    if (v.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

inline SweepRow aggregate(int layers, std::span<const SolveReport> reports) {
    std::vector<double> cosines, costs, evals;
    for (const auto &r : reports) {
        cosines.push_back(std::abs(r.cosine));
        costs.push_back(r.best_cost);
        evals.push_back(static_cast<double>(r.evaluations));
    }
    SweepRow row;
    row.layers = layers;
    row.repeats = reports.size();
    std::tie(row.cosine_mean, row.cosine_std) = mean_std(cosines);
    std::tie(row.cost_mean, row.cost_std) = mean_std(costs);
    std::tie(row.evaluations_mean, row.evaluations_std) = mean_std(evals);
    return row;
}

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SolveReport> reports;
};

/// Repeat r of every layer count uses seed config.seed + r.
inline SweepResult sweep_layers(const problems::ProblemInstance &inst, std::span<const int> layers_list,
                                CostKind kind, const OptimizerConfig &config, std::size_t repeats) {
    if (repeats < 1) {
        throw ConfigError("sweep_layers: repeats must be at least 1");
    }
    SweepResult out;
    for (int layers : layers_list) {
        std::vector<SolveReport> reps;
        for (std::size_t r = 0; r < repeats; ++r) {
            OptimizerConfig c = config;
            c.seed = config.seed + r;
            reps.push_back(solve(inst, layers, kind, c));
        }
        out.rows.push_back(aggregate(layers, reps));
        out.reports.insert(out.reports.end(), reps.begin(), reps.end());
    }
    return out;
}

} // namespace vqls::optimizer
