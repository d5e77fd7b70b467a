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
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vqls/error.hpp"
#include "vqls/numerics.hpp"

/// Gate model and statevector simulator.
///
/// Qubit 0 is the most significant bit of a basis-state index, so the
/// amplitude of |q0 q1 ... q_{n-1}> sits at index q0 * 2^{n-1} + ... + q_{n-1}.
/// The same convention orders Pauli-string letters.
namespace vqls::circuit {

using numerics::cplx;

enum class GateKind : std::uint8_t { RX, RY, RZ, H, S, Sdg, X, Y, Z, CX, CZ };

inline constexpr std::array<GateKind, 11> all_kinds = {
    GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::H,  GateKind::S, GateKind::Sdg,
    GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::CX, GateKind::CZ};

inline std::string_view kind_name(GateKind k) {
    static constexpr std::array<std::string_view, 11> names = {"RX", "RY", "RZ", "H", "S", "Sdg",
                                                                "X",  "Y",  "Z",  "CX", "CZ"};
    return names[static_cast<std::size_t>(k)];
}

inline GateKind parse_kind(std::string_view s) {
    for (GateKind k : all_kinds) {
        if (kind_name(k) == s) {
            return k;
        }
    }
    throw ConfigError("unknown gate kind '" + std::string(s) + "'");
}

inline bool is_rotation(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

/// A single-target gate with an arbitrary control set. CX and CZ carry at
/// least one control; a doubly-controlled Z is a CZ with two controls.
struct Gate {
    GateKind kind = GateKind::X;
    double angle = 0.0;
    int target = 0;
    std::vector<int> controls;

    static Gate rx(int q, double a) { return {GateKind::RX, a, q, {}}; }
    static Gate ry(int q, double a) { return {GateKind::RY, a, q, {}}; }
    static Gate rz(int q, double a) { return {GateKind::RZ, a, q, {}}; }
    static Gate h(int q) { return {GateKind::H, 0.0, q, {}}; }
    static Gate s(int q) { return {GateKind::S, 0.0, q, {}}; }
    static Gate sdg(int q) { return {GateKind::Sdg, 0.0, q, {}}; }
    static Gate x(int q) { return {GateKind::X, 0.0, q, {}}; }
    static Gate y(int q) { return {GateKind::Y, 0.0, q, {}}; }
    static Gate z(int q) { return {GateKind::Z, 0.0, q, {}}; }
    static Gate cx(int c, int t) { return {GateKind::CX, 0.0, t, {c}}; }
    static Gate cz(int c, int t) { return {GateKind::CZ, 0.0, t, {c}}; }

    bool operator==(const Gate &) const = default;
};

/// The 2x2 unitary a gate applies to its target when all controls are set.
inline std::array<cplx, 4> target_matrix(const Gate &g) {
    const double c = std::cos(g.angle / 2.0);
    const double s = std::sin(g.angle / 2.0);
    const double r = std::numbers::sqrt2 / 2.0;
    const cplx i(0.0, 1.0);
    switch (g.kind) {
    case GateKind::RX: return {c, -i * s, -i * s, c};
    case GateKind::RY: return {c, -s, s, c};
    case GateKind::RZ: return {std::exp(-i * (g.angle / 2.0)), 0.0, 0.0, std::exp(i * (g.angle / 2.0))};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::S: return {1.0, 0.0, 0.0, i};
    case GateKind::Sdg: return {1.0, 0.0, 0.0, -i};
    case GateKind::X:
    case GateKind::CX: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y: return {0.0, -i, i, 0.0};
    case GateKind::Z:
    case GateKind::CZ: return {1.0, 0.0, 0.0, -1.0};
    }
    return {1.0, 0.0, 0.0, 1.0};
}

inline void validate(const Gate &g, int n) {
    auto in_range = [n](int q) { return q >= 0 && q < n; };
    if (!in_range(g.target)) {
        throw ConfigError("gate " + std::string(kind_name(g.kind)) + ": target " +
                          std::to_string(g.target) + " outside register of " + std::to_string(n));
    }
    for (std::size_t a = 0; a < g.controls.size(); ++a) {
        const int c = g.controls[a];
        if (!in_range(c) || c == g.target) {
            throw ConfigError("gate " + std::string(kind_name(g.kind)) + ": invalid control " +
                              std::to_string(c));
        }
        for (std::size_t b = a + 1; b < g.controls.size(); ++b) {
            if (g.controls[b] == c) {
                throw ConfigError("gate " + std::string(kind_name(g.kind)) + ": repeated control");
            }
        }
    }
    if ((g.kind == GateKind::CX || g.kind == GateKind::CZ) && g.controls.empty()) {
        throw ConfigError("gate " + std::string(kind_name(g.kind)) + " needs a control");
    }
    if (!is_rotation(g.kind) && g.angle != 0.0) {
        throw ConfigError("gate " + std::string(kind_name(g.kind)) + " takes no angle");
    }
    if (!std::isfinite(g.angle)) {
        throw ConfigError("gate angle is not finite");
    }
}

class StateVector {
  public:
    StateVector() = default;
    StateVector(int n, std::vector<cplx> amplitudes) : n_(n), amps_(std::move(amplitudes)) {
        if (n < 1 || amps_.size() != (std::size_t{1} << n)) {
            throw ConfigError("StateVector: expected 2^" + std::to_string(n) + " amplitudes");
        }
    }

    static StateVector zero(int n) { return basis(n, 0); }

    static StateVector basis(int n, std::uint64_t index) {
        if (n < 1 || n > 30) {
            throw ConfigError("StateVector: unsupported qubit count");
        }
        std::vector<cplx> a(std::size_t{1} << n, cplx(0.0));
        a.at(index) = 1.0;
        return StateVector(n, std::move(a));
    }

    int qubits() const { return n_; }
    std::size_t dimension() const { return amps_.size(); }
    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx operator[](std::size_t k) const { return amps_[k]; }

    double norm() const {
        double acc = 0.0;
        for (const cplx &a : amps_) {
            acc += std::norm(a);
        }
        return std::sqrt(acc);
    }

    numerics::ComplexVector to_vector() const {
        return Eigen::Map<const numerics::ComplexVector>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
    }

  private:
    int n_ = 0;
    std::vector<cplx> amps_;
};

/// Ordered gate list. `parameter_slots[k]` is the index of the RY gate whose
/// angle is parameter k.
struct Circuit {
    int n = 0;
    std::vector<Gate> gates;
    std::vector<std::size_t> parameter_slots;

    Circuit() = default;
    explicit Circuit(int qubits) : n(qubits) {
        if (qubits < 1) {
            throw ConfigError("Circuit: qubit count must be positive");
        }
    }

    void add(Gate g) {
        validate(g, n);
        gates.push_back(std::move(g));
    }

    /// Appends `other` with its qubit q mapped to q + offset. Parameter slots
    /// of `other` are dropped.
    void append(const Circuit &other, int offset = 0) {
        for (Gate g : other.gates) {
            g.target += offset;
            for (int &c : g.controls) {
                c += offset;
            }
            add(std::move(g));
        }
    }

    std::size_t parameter_count() const { return parameter_slots.size(); }

    /// Copy with the parameterised angles replaced by `theta`.
    Circuit bind(std::span<const double> theta) const {
        if (theta.size() != parameter_slots.size()) {
            throw ConfigError("Circuit::bind: expected " + std::to_string(parameter_slots.size()) +
                              " parameters, got " + std::to_string(theta.size()));
        }
        Circuit out = *this;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            out.gates[parameter_slots[k]].angle = theta[k];
        }
        return out;
    }
};

/// Applies one gate in place.
inline void apply_gate(std::span<cplx> amps, int n, const Gate &g) {
    const auto u = target_matrix(g);
    const std::uint64_t tbit = std::uint64_t{1} << (n - 1 - g.target);
    std::uint64_t cmask = 0;
    for (int c : g.controls) {
        cmask |= std::uint64_t{1} << (n - 1 - c);
    }
    const std::uint64_t dim = amps.size();
    const bool diagonal = u[1] == 0.0 && u[2] == 0.0;
    for (std::uint64_t k = 0; k < dim; ++k) {
        if ((k & tbit) != 0 || (k & cmask) != cmask) {
            continue;
        }
        const std::uint64_t k1 = k | tbit;
        const cplx a0 = amps[k];
        const cplx a1 = amps[k1];
        if (diagonal) {
            amps[k] = u[0] * a0;
            amps[k1] = u[3] * a1;
        } else {
            amps[k] = u[0] * a0 + u[1] * a1;
            amps[k1] = u[2] * a0 + u[3] * a1;
        }
    }
}

inline void simulate_in_place(const Circuit &c, std::span<cplx> amps) {
    if (amps.size() != (std::size_t{1} << c.n)) {
        throw ConfigError("simulate: state dimension does not match circuit width");
    }
    for (const Gate &g : c.gates) {
        apply_gate(amps, c.n, g);
    }
}

/// Output state of `c` applied to `input`.
inline StateVector simulate(const Circuit &c, const StateVector &input) {
    if (c.n != input.qubits()) {
        throw ConfigError("simulate: circuit has " + std::to_string(c.n) + " qubits, state has " +
                          std::to_string(input.qubits()));
    }
    StateVector out = input;
    simulate_in_place(c, out.amplitudes());
    return out;
}

/// Dense unitary of a circuit, column by column.
inline numerics::DenseMatrix unitary(const Circuit &c) {
    if (c.n > 12) {
        throw ResourceError("unitary: circuit too wide for a dense matrix");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << c.n);
    numerics::DenseMatrix m(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        const auto out = simulate(c, StateVector::basis(c.n, static_cast<std::uint64_t>(col)));
        for (Eigen::Index row = 0; row < dim; ++row) {
            m(row, col) = out[static_cast<std::size_t>(row)];
        }
    }
    return m;
}

inline std::size_t ansatz_parameter_count(int n, int layers) {
    return static_cast<std::size_t>(n + layers * (2 * n - 2));
}

/// Layered RY/CZ ansatz with every angle zero and the parameter slots filled
/// in: an initial RY on each qubit, then per layer CZ on (0,1),(2,3),...,
/// RY on every qubit, CZ on (1,2),(3,4),... and RY on qubits 1..n-2.
inline Circuit ansatz_template(int n, int layers) {
    if (n < 2) {
        throw ConfigError("ansatz: at least 2 qubits required");
    }
    if (layers < 0) {
        throw ConfigError("ansatz: layer count must be non-negative");
    }
    Circuit c(n);
    auto add_ry = [&c](int q) {
        c.parameter_slots.push_back(c.gates.size());
        c.add(Gate::ry(q, 0.0));
    };
    for (int q = 0; q < n; ++q) {
        add_ry(q);
    }
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q + 1 < n; q += 2) {
            c.add(Gate::cz(q, q + 1));
        }
        for (int q = 0; q < n; ++q) {
            add_ry(q);
        }
        for (int q = 1; q + 1 < n; q += 2) {
            c.add(Gate::cz(q, q + 1));
        }
        for (int q = 1; q + 1 < n; ++q) {
            add_ry(q);
        }
    }
    return c;
}

inline Circuit build_ansatz(int n, int layers, std::span<const double> theta) {
    const std::size_t expected = ansatz_parameter_count(n, layers);
    if (theta.size() != expected) {
        throw ConfigError("build_ansatz: expected " + std::to_string(expected) +
                          " parameters for n=" + std::to_string(n) + ", layers=" +
                          std::to_string(layers) + ", got " + std::to_string(theta.size()));
    }
    return ansatz_template(n, layers).bind(theta);
}

/// Adjoint circuit. Parameter slots are not carried over.
inline Circuit inverse(const Circuit &c) {
    Circuit out(c.n);
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        Gate g = *it;
        if (is_rotation(g.kind)) {
            g.angle = -g.angle;
        } else if (g.kind == GateKind::S) {
            g.kind = GateKind::Sdg;
        } else if (g.kind == GateKind::Sdg) {
            g.kind = GateKind::S;
        }
        out.gates.push_back(std::move(g));
    }
    return out;
}

/// Prepends an ancilla as qubit 0 and makes it a control of every gate.
/// Parameter slots keep pointing at the same (now controlled) RY gates.
inline Circuit controlled(const Circuit &c) {
    Circuit out(c.n + 1);
    out.parameter_slots = c.parameter_slots;
    for (const Gate &g0 : c.gates) {
        Gate g = g0;
        g.target += 1;
        for (int &q : g.controls) {
            q += 1;
        }
        g.controls.insert(g.controls.begin(), 0);
        if (g.kind == GateKind::X) {
            g.kind = GateKind::CX;
        } else if (g.kind == GateKind::Z) {
            g.kind = GateKind::CZ;
        }
        out.add(std::move(g));
    }
    return out;
}

namespace detail {

inline std::uint64_t gray(std::uint64_t i) { return i ^ (i >> 1); }

// Uniformly controlled RY on `target` with controls 0..target-1; `alpha[x]`
// is the angle for control pattern x (qubit 0 is the most significant bit).
inline void multiplexed_ry(Circuit &c, int target, const std::vector<double> &alpha, double eps) {
    const int k = target;
    const std::size_t count = alpha.size();
    std::vector<double> theta(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t gi = gray(i);
        double acc = 0.0;
        for (std::size_t x = 0; x < count; ++x) {
            acc += (std::popcount(x & gi) & 1) ? -alpha[x] : alpha[x];
        }
        theta[i] = acc / static_cast<double>(count);
    }
    const bool uniform = std::all_of(theta.begin() + 1, theta.end(),
                                     [eps](double t) { return std::abs(t) <= eps; });
    if (uniform) {
        if (std::abs(theta[0]) > eps) {
            c.add(Gate::ry(target, theta[0]));
        }
        return;
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (std::abs(theta[i]) > eps) {
            c.add(Gate::ry(target, theta[i]));
        }
        const int pos = (i + 1 == count) ? k - 1 : std::countr_zero(i + 1);
        c.add(Gate::cx(k - 1 - pos, target));
    }
}

} // namespace detail

/// Circuit U with U|0...0> = b for a real unit vector b (global phase +1).
/// Built as a binary tree of uniformly controlled RY rotations; the leaf level
/// uses signed atan2 angles so negative amplitudes come out exactly.
inline Circuit prepare_state(const numerics::RealVector &b, double norm_tol = 1e-9) {
    const auto dim = static_cast<std::uint64_t>(b.size());
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw ConfigError("prepare_state: length " + std::to_string(dim) + " is not a power of 2");
    }
    const double norm = b.norm();
    if (std::abs(norm - 1.0) > norm_tol) {
        throw ConfigError("prepare_state: vector norm " + std::to_string(norm) + " is not 1");
    }
    const int n = std::countr_zero(dim);
    constexpr double eps = 1e-14;
    // weight[level][p]: squared norm of the amplitudes whose top `level` bits equal p.
    std::vector<std::vector<double>> weight(static_cast<std::size_t>(n + 1));
    weight[static_cast<std::size_t>(n)].resize(dim);
    for (std::uint64_t k = 0; k < dim; ++k) {
        weight[static_cast<std::size_t>(n)][k] = b[static_cast<Eigen::Index>(k)] * b[static_cast<Eigen::Index>(k)];
    }
    for (int level = n - 1; level >= 0; --level) {
        auto &w = weight[static_cast<std::size_t>(level)];
        const auto &next = weight[static_cast<std::size_t>(level + 1)];
        w.resize(std::size_t{1} << level);
        for (std::size_t p = 0; p < w.size(); ++p) {
            w[p] = next[2 * p] + next[2 * p + 1];
        }
    }
    Circuit c(n);
    for (int level = 0; level < n; ++level) {
        std::vector<double> alpha(std::size_t{1} << level, 0.0);
        for (std::size_t p = 0; p < alpha.size(); ++p) {
            if (level == n - 1) {
                alpha[p] = 2.0 * std::atan2(b[static_cast<Eigen::Index>(2 * p + 1)],
                                            b[static_cast<Eigen::Index>(2 * p)]);
            } else {
                const auto &next = weight[static_cast<std::size_t>(level + 1)];
                alpha[p] = 2.0 * std::atan2(std::sqrt(next[2 * p + 1]), std::sqrt(next[2 * p]));
            }
        }
        detail::multiplexed_ry(c, level, alpha, eps);
    }
    return c;
}

// --------------------------------------------------------------------------
// Lowering to {RX, RY, RZ, CX}.

namespace detail {

inline void lower_into(const Gate &g, std::vector<Gate> &out);

inline void lower_all(std::initializer_list<Gate> gates, std::vector<Gate> &out) {
    for (const Gate &g : gates) {
        lower_into(g, out);
    }
}

// Controlled phase diag(1, 1, 1, e^{i lambda}) up to a global phase.
inline void controlled_phase(int c, int t, double lambda, std::vector<Gate> &out) {
    lower_all({Gate::rz(c, lambda / 2.0), Gate::cx(c, t), Gate::rz(t, -lambda / 2.0), Gate::cx(c, t),
               Gate::rz(t, lambda / 2.0)},
              out);
}

// Doubly-controlled Z: 6 CX and 7 RZ(+-pi/4).
inline void ccz(int a, int b, int t, std::vector<Gate> &out) {
    const double q = std::numbers::pi / 4.0;
    out.push_back(Gate::cx(b, t));
    out.push_back(Gate::rz(t, -q));
    out.push_back(Gate::cx(a, t));
    out.push_back(Gate::rz(t, q));
    out.push_back(Gate::cx(b, t));
    out.push_back(Gate::rz(t, -q));
    out.push_back(Gate::cx(a, t));
    out.push_back(Gate::rz(b, q));
    out.push_back(Gate::rz(t, q));
    out.push_back(Gate::cx(a, b));
    out.push_back(Gate::rz(a, q));
    out.push_back(Gate::rz(b, -q));
    out.push_back(Gate::cx(a, b));
}

inline void lower_into(const Gate &g, std::vector<Gate> &out) {
    const double pi = std::numbers::pi;
    const int t = g.target;
    if (g.controls.empty()) {
        switch (g.kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ: out.push_back(g); return;
        case GateKind::H: out.push_back(Gate::rz(t, pi)); out.push_back(Gate::ry(t, pi / 2.0)); return;
        case GateKind::S: out.push_back(Gate::rz(t, pi / 2.0)); return;
        case GateKind::Sdg: out.push_back(Gate::rz(t, -pi / 2.0)); return;
        case GateKind::X: out.push_back(Gate::rx(t, pi)); return;
        case GateKind::Y: out.push_back(Gate::ry(t, pi)); return;
        case GateKind::Z: out.push_back(Gate::rz(t, pi)); return;
        default: break;
        }
    } else if (g.controls.size() == 1) {
        const int c = g.controls.front();
        switch (g.kind) {
        case GateKind::CX: out.push_back(g); return;
        case GateKind::CZ: lower_all({Gate::h(t), Gate::cx(c, t), Gate::h(t)}, out); return;
        case GateKind::Y: lower_all({Gate::sdg(t), Gate::cx(c, t), Gate::s(t)}, out); return;
        case GateKind::RY:
            lower_all({Gate::ry(t, g.angle / 2.0), Gate::cx(c, t), Gate::ry(t, -g.angle / 2.0), Gate::cx(c, t)}, out);
            return;
        case GateKind::RZ:
            lower_all({Gate::rz(t, g.angle / 2.0), Gate::cx(c, t), Gate::rz(t, -g.angle / 2.0), Gate::cx(c, t)}, out);
            return;
        case GateKind::RX:
            lower_into(Gate::h(t), out);
            lower_into(Gate{GateKind::RZ, g.angle, t, {c}}, out);
            lower_into(Gate::h(t), out);
            return;
        case GateKind::H:
            // RY(pi/4) Z RY(-pi/4) = H exactly.
            lower_all({Gate::ry(t, -pi / 4.0), Gate::cz(c, t), Gate::ry(t, pi / 4.0)}, out);
            return;
        case GateKind::S: controlled_phase(c, t, pi / 2.0, out); return;
        case GateKind::Sdg: controlled_phase(c, t, -pi / 2.0, out); return;
        default: break;
        }
    } else if (g.controls.size() == 2) {
        const int a = g.controls[0];
        const int b = g.controls[1];
        switch (g.kind) {
        case GateKind::CZ: ccz(a, b, t, out); return;
        case GateKind::CX:
            lower_into(Gate::h(t), out);
            ccz(a, b, t, out);
            lower_into(Gate::h(t), out);
            return;
        default: break;
        }
    }
    throw ConfigError("lower: unsupported gate " + std::string(kind_name(g.kind)) + " with " +
                      std::to_string(g.controls.size()) + " controls");
}

// Wraps an angle into (-pi, pi]. Only valid on uncontrolled rotations, where
// a 2 pi shift is a global sign.
inline double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::remainder(a, two_pi);
    if (a <= -std::numbers::pi) {
        a += two_pi;
    }
    return a;
}

inline std::vector<Gate> peephole(std::vector<Gate> gates, int n, double eps) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Gate> out;
        out.reserve(gates.size());
        // Index into `out` of the last gate touching each qubit, or -1.
        std::vector<long> last(static_cast<std::size_t>(n), -1);
        for (Gate &g : gates) {
            if (is_rotation(g.kind) && g.controls.empty()) {
                g.angle = wrap_angle(g.angle);
                const long prev = last[static_cast<std::size_t>(g.target)];
                if (prev >= 0) {
                    Gate &p = out[static_cast<std::size_t>(prev)];
                    if (p.kind == g.kind && p.controls.empty() && p.target == g.target) {
                        p.angle = wrap_angle(p.angle + g.angle);
                        changed = true;
                        continue;
                    }
                }
                if (std::abs(g.angle) <= eps) {
                    changed = true;
                    continue;
                }
            }
            out.push_back(g);
            const long idx = static_cast<long>(out.size() - 1);
            last[static_cast<std::size_t>(g.target)] = idx;
            for (int c : g.controls) {
                last[static_cast<std::size_t>(c)] = idx;
            }
        }
        // Merged rotations that cancelled to zero.
        std::vector<Gate> pruned;
        pruned.reserve(out.size());
        for (Gate &g : out) {
            if (is_rotation(g.kind) && g.controls.empty() && std::abs(g.angle) <= eps) {
                changed = true;
                continue;
            }
            pruned.push_back(std::move(g));
        }
        gates = std::move(pruned);
    }
    return gates;
}

} // namespace detail

inline bool is_lowered(const Gate &g) {
    return (is_rotation(g.kind) && g.controls.empty()) ||
           (g.kind == GateKind::CX && g.controls.size() == 1);
}

/// Rewrites a circuit over {RX, RY, RZ, CX}. The result equals the input up to
/// a global phase; adjacent same-axis rotations are merged and zero rotations
/// removed.
inline Circuit lower(const Circuit &c, double eps = 1e-12) {
    std::vector<Gate> raw;
    raw.reserve(c.gates.size() * 4);
    for (const Gate &g : c.gates) {
        detail::lower_into(g, raw);
    }
    Circuit out(c.n);
    out.gates = detail::peephole(std::move(raw), c.n, eps);
    return out;
}

struct ResourceReport {
    std::map<GateKind, std::size_t> counts;
    std::size_t total = 0;
    std::size_t depth = 0;
};

/// Gate counts by kind and depth of a lowered circuit.
inline ResourceReport resources(const Circuit &c) {
    ResourceReport r;
    std::vector<std::size_t> level(static_cast<std::size_t>(c.n), 0);
    for (const Gate &g : c.gates) {
        if (!is_lowered(g)) {
            throw ConfigError("resources: circuit is not lowered (found " +
                              std::string(kind_name(g.kind)) + ")");
        }
        ++r.counts[g.kind];
        ++r.total;
        std::size_t l = level[static_cast<std::size_t>(g.target)];
        for (int q : g.controls) {
            l = std::max(l, level[static_cast<std::size_t>(q)]);
        }
        ++l;
        level[static_cast<std::size_t>(g.target)] = l;
        for (int q : g.controls) {
            level[static_cast<std::size_t>(q)] = l;
        }
        r.depth = std::max(r.depth, l);
    }
    return r;
}

// --------------------------------------------------------------------------
// Text format: a header line "qubits <n>", then one gate per line as
// "<KIND> <angle|-> <controls|-> <target>", controls comma separated.
// Lines starting with '#' are comments.

inline std::string to_text(const Circuit &c) {
    std::ostringstream os;
    os << "# vqls circuit v1\n";
    os << "qubits " << c.n << '\n';
    os << std::setprecision(17);
    for (const Gate &g : c.gates) {
        os << kind_name(g.kind) << ' ';
        if (is_rotation(g.kind)) {
            os << g.angle;
        } else {
            os << '-';
        }
        os << ' ';
        if (g.controls.empty()) {
            os << '-';
        } else {
            for (std::size_t i = 0; i < g.controls.size(); ++i) {
                os << (i ? "," : "") << g.controls[i];
            }
        }
        os << ' ' << g.target << '\n';
    }
    return os.str();
}

inline Circuit from_text(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    Circuit c;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        if (!have_header) {
            std::string word;
            int n = 0;
            if (!(ls >> word >> n) || word != "qubits" || n < 1) {
                throw ParseError("expected 'qubits <n>' header", lineno);
            }
            c = Circuit(n);
            have_header = true;
            continue;
        }
        std::string kind, angle, controls;
        int target = 0;
        if (!(ls >> kind >> angle >> controls >> target)) {
            throw ParseError("expected '<kind> <angle> <controls> <target>'", lineno);
        }
        Gate g;
        try {
            g.kind = parse_kind(kind);
            g.angle = angle == "-" ? 0.0 : std::stod(angle);
            g.target = target;
            if (controls != "-") {
                std::istringstream cs(controls);
                std::string item;
                while (std::getline(cs, item, ',')) {
                    g.controls.push_back(std::stoi(item));
                }
            }
            c.add(std::move(g));
        } catch (const ConfigError &e) {
            throw ParseError(e.what(), lineno);
        } catch (const std::exception &) {
            throw ParseError("malformed number", lineno);
        }
    }
    if (!have_header) {
        throw ParseError("missing 'qubits' header", lineno);
    }
    return c;
}

} // namespace vqls::circuit
