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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vqls/circuit.hpp"
#include "vqls/error.hpp"
#include "vqls/hadamard.hpp"
#include "vqls/io.hpp"
#include "vqls/numerics.hpp"
#include "vqls/pauli.hpp"
#include "vqls/problems.hpp"

/// Global and local VQLS costs. With |psi> = A V(theta)|0>:
///   C_G = 1 - |<b|psi>|^2 / <psi|psi>
///   C_L = 1/2 - (1/2n) sum_q <psi|U Z_q U+|psi> / <psi|psi>
/// The local "numerator" reported here is (1/n) sum_q <psi|U Z_q U+|psi>, so
/// C_L = 1/2 - numerator / (2 <psi|psi>). The projector form
/// 1 - <psi|U (1/n sum_q |0><0|_q) U+|psi> / <psi|psi> is the same number.
namespace vqls::cost {

using numerics::cplx;

struct EvalPath {
    enum class Kind : std::uint8_t { DirectMatrix, HadamardExact, HadamardSampled };
    Kind kind = Kind::DirectMatrix;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    static EvalPath direct() { return {}; }
    static EvalPath hadamard_exact() { return {Kind::HadamardExact, 0, 0}; }
    static EvalPath hadamard_sampled(std::uint64_t shots, std::uint64_t seed) {
        if (shots == 0) {
            throw ConfigError("sampled evaluation needs at least one shot");
        }
        return {Kind::HadamardSampled, shots, seed};
    }

    std::string name() const {
        switch (kind) {
        case Kind::DirectMatrix: return "direct";
        case Kind::HadamardExact: return "hadamard-exact";
        case Kind::HadamardSampled: return "hadamard-sampled";
        }
        return "?";
    }
};

struct CostEvaluation {
    double value = 0.0;
    double numerator = 0.0;
    /// <psi|psi>
    double denominator = 0.0;
    CostKind kind = CostKind::Global;
    EvalPath path;
    std::vector<double> theta;
};

inline constexpr double singular_threshold = 1e-14;

/// Numerator and denominator of one cost evaluation.
struct Terms {
    double psi_norm_sq = 0.0;
    double overlap_sq = 0.0;
    /// (1/n) sum_q <psi|U Z_q U+|psi>
    double local_z = 0.0;
    /// <psi|U (1/n sum_q |0><0|_q) U+|psi>
    double local_projector = 0.0;
};

inline double combine(CostKind kind, double numerator, double denominator) {
    if (!(denominator >= singular_threshold)) {
        throw NumericalError("cost: <psi|psi> = " + std::to_string(denominator) + " is singular");
    }
    return kind == CostKind::Global ? 1.0 - numerator / denominator : 0.5 - numerator / (2.0 * denominator);
}

/// Evaluates the cost terms of one instance and ansatz. Holds scratch buffers,
/// so one Evaluator must not be shared between threads.
class Evaluator {
  public:
    /// `ansatz` is a parameterised template (see circuit::ansatz_template).
    Evaluator(const problems::ProblemInstance &inst, circuit::Circuit ansatz)
        : inst_(inst), ansatz_(std::move(ansatz)), bound_(ansatz_), u_dagger_(circuit::inverse(inst.b_circuit)) {
        if (ansatz_.n != inst.n || inst.b_circuit.n != inst.n) {
            throw ConfigError("cost: ansatz has " + std::to_string(ansatz_.n) + " qubits, instance has " +
                              std::to_string(inst.n));
        }
        const auto dim = inst.dimension();
        x_.resize(dim);
        psi_.resize(dim);
        phi_.resize(dim);
        b_.resize(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            b_[k] = inst.b[static_cast<Eigen::Index>(k)];
        }
    }

    const problems::ProblemInstance &instance() const { return inst_; }
    const circuit::Circuit &ansatz() const { return ansatz_; }
    std::size_t parameter_count() const { return ansatz_.parameter_count(); }

    /// x = V(theta)|0>.
    std::vector<cplx> solution_state(std::span<const double> theta) {
        prepare(theta);
        return x_;
    }

    /// All terms by direct statevector algebra.
    Terms direct(std::span<const double> theta, bool with_local = true) {
        prepare(theta);
        apply_a(x_, psi_);
        Terms t;
        cplx ov = 0.0;
        for (std::size_t k = 0; k < psi_.size(); ++k) {
            t.psi_norm_sq += std::norm(psi_[k]);
            ov += b_[k] * psi_[k];
        }
        t.overlap_sq = std::norm(ov);
        if (with_local) {
            phi_ = psi_;
            circuit::simulate_in_place(u_dagger_, phi_);
            const int n = inst_.n;
            for (std::size_t k = 0; k < phi_.size(); ++k) {
                const double w = std::norm(phi_[k]);
                for (int q = 0; q < n; ++q) {
                    const bool one = (k >> (n - 1 - q)) & 1U;
                    t.local_z += one ? -w : w;
                    t.local_projector += one ? 0.0 : w;
                }
            }
            t.local_z /= n;
            t.local_projector /= n;
        }
        return t;
    }

    /// Terms assembled from Hadamard-test values with the real-coefficient
    /// expansions. Throws ConfigError for complex coefficients.
    Terms hadamard(std::span<const double> theta, CostKind kind, std::optional<hadamard::Sampling> sampling) {
        const auto &lcu = require_lcu();
        if (!pauli::coefficients_real(lcu)) {
            throw ConfigError("cost: LCU coefficients are complex; the real-coefficient expansion does not apply "
                              "(use the general expansion)");
        }
        const std::size_t L = lcu.size();
        const int n = inst_.n;
        std::vector<double> c(L);
        for (std::size_t i = 0; i < L; ++i) {
            c[i] = lcu[i].coefficient.real();
        }
        const hadamard::TestContext ctx{ansatz_, inst_.b_circuit, lcu};
        auto run = [&](const hadamard::HadamardTestSpec &s) { return hadamard::run_test(s, ctx, theta, sampling); };

        Terms t;
        for (std::size_t i = 0; i < L; ++i) {
            t.psi_norm_sq += c[i] * c[i];
            for (std::size_t j = i + 1; j < L; ++j) {
                t.psi_norm_sq += 2.0 * c[i] * c[j] * run(hadamard::HadamardTestSpec::denominator(i, j));
            }
        }
        if (kind == CostKind::Global) {
            std::vector<double> re(L), im(L);
            for (std::size_t i = 0; i < L; ++i) {
                re[i] = run(hadamard::HadamardTestSpec::global_numerator(i, hadamard::Part::Real));
                im[i] = run(hadamard::HadamardTestSpec::global_numerator(i, hadamard::Part::Imaginary));
            }
            for (std::size_t i = 0; i < L; ++i) {
                t.overlap_sq += c[i] * c[i] * (re[i] * re[i] + im[i] * im[i]);
                for (std::size_t j = i + 1; j < L; ++j) {
                    t.overlap_sq += 2.0 * c[i] * c[j] * (re[i] * re[j] + im[i] * im[j]);
                }
            }
        } else {
            double acc = 0.0;
            for (int q = 0; q < n; ++q) {
                for (std::size_t i = 0; i < L; ++i) {
                    acc += c[i] * c[i] * run(hadamard::HadamardTestSpec::local_numerator(i, i, q));
                    for (std::size_t j = i + 1; j < L; ++j) {
                        acc += 2.0 * c[i] * c[j] * run(hadamard::HadamardTestSpec::local_numerator(i, j, q));
                    }
                }
            }
            t.local_z = acc / n;
            t.local_projector = 0.5 * (t.psi_norm_sq + t.local_z);
        }
        return t;
    }

    /// Unreduced expansion valid for complex coefficients:
    ///   <psi|psi>   = sum_ij conj(c_i) c_j <x|A_i A_j|x>
    ///   <b|psi>     = sum_i c_i <b|A_i|x>
    ///   local_z     = (1/n) sum_q sum_ij conj(c_i) c_j <x|A_i U Z_q U+ A_j|x>
    /// with the pairwise inner products taken from statevectors.
    Terms general(std::span<const double> theta) {
        const auto &lcu = require_lcu();
        prepare(theta);
        const std::size_t L = lcu.size();
        const std::size_t dim = x_.size();
        const int n = inst_.n;
        std::vector<std::vector<cplx>> ax(L, std::vector<cplx>(dim));
        std::vector<std::vector<cplx>> uax(L);
        for (std::size_t i = 0; i < L; ++i) {
            pauli::apply(lcu[i].string, x_, ax[i]);
            uax[i] = ax[i];
            circuit::simulate_in_place(u_dagger_, uax[i]);
        }
        Terms t;
        cplx ov = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
            cplx bi = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                bi += b_[k] * ax[i][k];
            }
            ov += lcu[i].coefficient * bi;
            for (std::size_t j = 0; j < L; ++j) {
                const cplx w = std::conj(lcu[i].coefficient) * lcu[j].coefficient;
                cplx d = 0.0;
                cplx z = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    d += std::conj(ax[i][k]) * ax[j][k];
                    const cplx p = std::conj(uax[i][k]) * uax[j][k];
                    for (int q = 0; q < n; ++q) {
                        z += ((k >> (n - 1 - q)) & 1U) ? -p : p;
                    }
                }
                t.psi_norm_sq += (w * d).real();
                t.local_z += (w * z).real();
            }
        }
        t.overlap_sq = std::norm(ov);
        t.local_z /= n;
        t.local_projector = 0.5 * (t.psi_norm_sq + t.local_z);
        return t;
    }

    Terms terms(std::span<const double> theta, CostKind kind, const EvalPath &path) {
        switch (path.kind) {
        case EvalPath::Kind::DirectMatrix: return direct(theta, kind == CostKind::Local);
        case EvalPath::Kind::HadamardExact: return hadamard(theta, kind, std::nullopt);
        case EvalPath::Kind::HadamardSampled:
            return hadamard(theta, kind, hadamard::Sampling{path.shots, path.seed});
        }
        throw ConfigError("cost: unknown evaluation path");
    }

    CostEvaluation evaluate(std::span<const double> theta, CostKind kind, const EvalPath &path = {}) {
        const Terms t = terms(theta, kind, path);
        CostEvaluation e;
        e.kind = kind;
        e.path = path;
        e.denominator = t.psi_norm_sq;
        e.numerator = kind == CostKind::Global ? t.overlap_sq : t.local_z;
        e.value = combine(kind, e.numerator, e.denominator);
        e.theta.assign(theta.begin(), theta.end());
        return e;
    }

    /// Direct-path cost value only.
    double value(std::span<const double> theta, CostKind kind) {
        const Terms t = direct(theta, kind == CostKind::Local);
        return combine(kind, kind == CostKind::Global ? t.overlap_sq : t.local_z, t.psi_norm_sq);
    }

    /// Exact gradient. Every parameter drives one RY gate, so numerator and
    /// denominator (both <0|V+ M V|0> with M Hermitian) obey the shift rule
    /// f' = [f(theta + pi/2) - f(theta - pi/2)] / 2; the quotient rule combines them.
    std::vector<double> gradient(std::span<const double> theta, CostKind kind) {
        const auto [n0, d0] = fraction(theta, kind);
        std::vector<double> g(theta.size());
        for (std::size_t k = 0; k < theta.size(); ++k) {
            g[k] = shifted_partial(theta, kind, k, n0, d0);
        }
        return g;
    }

    /// One component of the gradient.
    double partial(std::span<const double> theta, CostKind kind, std::size_t k) {
        if (k >= theta.size()) {
            throw ConfigError("gradient component " + std::to_string(k) + " out of range");
        }
        const auto [n0, d0] = fraction(theta, kind);
        return shifted_partial(theta, kind, k, n0, d0);
    }

    /// |cos| between A x and b for x = V(theta)|0>.
    double cosine(std::span<const double> theta) {
        prepare(theta);
        apply_a(x_, psi_);
        numerics::ComplexVector ax(static_cast<Eigen::Index>(psi_.size()));
        numerics::ComplexVector bv(static_cast<Eigen::Index>(psi_.size()));
        for (std::size_t k = 0; k < psi_.size(); ++k) {
            ax[static_cast<Eigen::Index>(k)] = psi_[k];
            bv[static_cast<Eigen::Index>(k)] = b_[k];
        }
        return std::abs(numerics::cosine_alignment(ax, bv));
    }

  private:
    static double numerator_of(const Terms &t, CostKind kind) {
        return kind == CostKind::Local ? t.local_z : t.overlap_sq;
    }

    std::pair<double, double> fraction(std::span<const double> theta, CostKind kind) {
        const Terms t = direct(theta, kind == CostKind::Local);
        if (!(t.psi_norm_sq >= singular_threshold)) {
            throw NumericalError("gradient: <psi|psi> is singular");
        }
        return {numerator_of(t, kind), t.psi_norm_sq};
    }

    double shifted_partial(std::span<const double> theta, CostKind kind, std::size_t k, double n0, double d0) {
        const bool local = kind == CostKind::Local;
        shifted_.assign(theta.begin(), theta.end());
        shifted_[k] = theta[k] + std::numbers::pi / 2.0;
        const Terms plus = direct(shifted_, local);
        shifted_[k] = theta[k] - std::numbers::pi / 2.0;
        const Terms minus = direct(shifted_, local);
        const double dn = 0.5 * (numerator_of(plus, kind) - numerator_of(minus, kind));
        const double dd = 0.5 * (plus.psi_norm_sq - minus.psi_norm_sq);
        const double dq = (dn * d0 - n0 * dd) / (d0 * d0);
        return local ? -0.5 * dq : -dq;
    }

    const pauli::LcuTerms &require_lcu() const {
        if (!inst_.lcu) {
            throw ConfigError("cost: instance has no Pauli decomposition");
        }
        return *inst_.lcu;
    }

    void prepare(std::span<const double> theta) {
        if (theta.size() != ansatz_.parameter_count()) {
            throw ConfigError("cost: expected " + std::to_string(ansatz_.parameter_count()) + " parameters, got " +
                              std::to_string(theta.size()));
        }
        for (std::size_t k = 0; k < theta.size(); ++k) {
            bound_.gates[ansatz_.parameter_slots[k]].angle = theta[k];
        }
        std::fill(x_.begin(), x_.end(), cplx(0.0));
        x_[0] = 1.0;
        circuit::simulate_in_place(bound_, x_);
    }

    void apply_a(const std::vector<cplx> &in, std::vector<cplx> &out) const {
        if (inst_.lcu) {
            inst_.lcu->apply(in, out);
            return;
        }
        const Eigen::Map<const numerics::ComplexVector> v(in.data(), static_cast<Eigen::Index>(in.size()));
        Eigen::Map<numerics::ComplexVector> w(out.data(), static_cast<Eigen::Index>(out.size()));
        w.noalias() = inst_.matrix * v;
    }

    const problems::ProblemInstance &inst_;
    circuit::Circuit ansatz_;
    circuit::Circuit bound_;
    circuit::Circuit u_dagger_;
    std::vector<cplx> x_, psi_, phi_, b_;
    std::vector<double> shifted_;
};

inline double psi_norm_sq(const problems::ProblemInstance &inst, const circuit::Circuit &ansatz,
                          std::span<const double> theta, const EvalPath &path = {}) {
    return Evaluator(inst, ansatz).terms(theta, CostKind::Global, path).psi_norm_sq;
}

inline double overlap_sq(const problems::ProblemInstance &inst, const circuit::Circuit &ansatz,
                         std::span<const double> theta, const EvalPath &path = {}) {
    return Evaluator(inst, ansatz).terms(theta, CostKind::Global, path).overlap_sq;
}

/// (1/n) sum_q <psi|U Z_q U+|psi>.
inline double local_numerator(const problems::ProblemInstance &inst, const circuit::Circuit &ansatz,
                              std::span<const double> theta, const EvalPath &path = {}) {
    return Evaluator(inst, ansatz).terms(theta, CostKind::Local, path).local_z;
}

inline CostEvaluation cost(const problems::ProblemInstance &inst, const circuit::Circuit &ansatz,
                           std::span<const double> theta, CostKind kind, const EvalPath &path = {}) {
    return Evaluator(inst, ansatz).evaluate(theta, kind, path);
}

inline std::vector<double> gradient(const problems::ProblemInstance &inst, const circuit::Circuit &ansatz,
                                    std::span<const double> theta, CostKind kind) {
    return Evaluator(inst, ansatz).gradient(theta, kind);
}

inline constexpr std::string_view evaluation_csv_header = "kind,path,value,numerator,denominator,eval_index";

inline std::string evaluation_csv_row(const CostEvaluation &e, std::size_t index) {
    return std::string(kind_name(e.kind)) + "," + e.path.name() + "," + io::fmt(e.value) + "," +
           io::fmt(e.numerator) + "," + io::fmt(e.denominator) + "," + std::to_string(index);
}

} // namespace vqls::cost
