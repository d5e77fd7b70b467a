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

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqls/circuit.hpp"
#include "vqls/error.hpp"
#include "vqls/pauli.hpp"

namespace vqls {

enum class CostKind : std::uint8_t { Global, Local };

inline std::string_view kind_name(CostKind k) { return k == CostKind::Global ? "global" : "local"; }

inline CostKind parse_cost_kind(std::string_view s) {
    if (s == "global") {
        return CostKind::Global;
    }
    if (s == "local") {
        return CostKind::Local;
    }
    throw ConfigError("unknown cost kind '" + std::string(s) + "' (expected global or local)");
}

} // namespace vqls

/// Hadamard tests: an ancilla (qubit 0) in superposition controls a unitary W
/// acting on a prepared register state |phi>, and 1 - 2 P(ancilla = 1)
/// estimates Re <phi|W|phi> (or Im, with S-dagger after the first H).
namespace vqls::hadamard {

enum class Family : std::uint8_t { Denominator, GlobalNumerator, LocalNumerator };
enum class Part : std::uint8_t { Real, Imaginary };

inline std::string_view family_name(Family f) {
    switch (f) {
    case Family::Denominator: return "denominator";
    case Family::GlobalNumerator: return "global-numerator";
    case Family::LocalNumerator: return "local-numerator";
    }
    return "?";
}

/// Denominator(i, j): Re <0|V+ A_i A_j V|0>, i < j.
/// GlobalNumerator(i): Re or Im of <0|U+ A_i V|0>.
/// LocalNumerator(i, j, q): Re <0|V+ A_i U Z_q U+ A_j V|0>, i <= j.
struct HadamardTestSpec {
    Family family = Family::Denominator;
    Part part = Part::Real;
    std::size_t i = 0;
    std::size_t j = 0;
    int q = 0;

    static HadamardTestSpec denominator(std::size_t i, std::size_t j) {
        return {Family::Denominator, Part::Real, i, j, 0};
    }
    static HadamardTestSpec global_numerator(std::size_t i, Part part) {
        return {Family::GlobalNumerator, part, i, i, 0};
    }
    static HadamardTestSpec local_numerator(std::size_t i, std::size_t j, int q) {
        return {Family::LocalNumerator, Part::Real, i, j, q};
    }

    bool operator==(const HadamardTestSpec &) const = default;
};

/// The pieces a test circuit is assembled from. `ansatz` carries parameter
/// slots; `state_prep` is U with U|0> = |b>.
struct TestContext {
    const circuit::Circuit &ansatz;
    const circuit::Circuit &state_prep;
    const pauli::LcuTerms &lcu;
};

/// The Pauli string as a circuit of X/Y/Z gates.
inline circuit::Circuit pauli_circuit(const pauli::PauliString &p) {
    circuit::Circuit c(p.size());
    for (int q = 0; q < p.size(); ++q) {
        switch (p.letters()[static_cast<std::size_t>(q)]) {
        case pauli::Letter::I: break;
        case pauli::Letter::X: c.add(circuit::Gate::x(q)); break;
        case pauli::Letter::Y: c.add(circuit::Gate::y(q)); break;
        case pauli::Letter::Z: c.add(circuit::Gate::z(q)); break;
        }
    }
    return c;
}

inline void validate(const HadamardTestSpec &s, std::size_t L, int n) {
    auto fail = [](const std::string &msg) { throw ConfigError("Hadamard test: " + msg); };
    if (s.i >= L || s.j >= L) {
        fail("term index out of range (L=" + std::to_string(L) + ")");
    }
    switch (s.family) {
    case Family::Denominator:
        if (s.i >= s.j) {
            fail("denominator tests need i < j; diagonal terms are c_i^2 and need no circuit");
        }
        if (s.part != Part::Real) {
            fail("denominator tests use the real part only");
        }
        break;
    case Family::GlobalNumerator:
        if (s.i != s.j) {
            fail("global numerator tests take a single term index");
        }
        break;
    case Family::LocalNumerator:
        if (s.i > s.j) {
            fail("local numerator tests need i <= j");
        }
        if (s.q < 0 || s.q >= n) {
            fail("qubit index " + std::to_string(s.q) + " out of range");
        }
        if (s.part != Part::Real) {
            fail("local numerator tests use the real part only");
        }
        break;
    }
}

/// The full (n+1)-qubit test circuit for parameters `theta`, including the
/// ancilla H gates (and S-dagger for the imaginary part).
inline circuit::Circuit build_circuit(const HadamardTestSpec &spec, const TestContext &ctx,
                                      std::span<const double> theta) {
    const int n = ctx.lcu.qubits();
    if (ctx.ansatz.n != n || ctx.state_prep.n != n) {
        throw ConfigError("Hadamard test: ansatz, state preparation and LCU disagree on qubit count");
    }
    validate(spec, ctx.lcu.size(), n);
    using circuit::Circuit;
    using circuit::controlled;
    using circuit::Gate;
    const Circuit v = ctx.ansatz.bind(theta);
    const Circuit a_i = pauli_circuit(ctx.lcu[spec.i].string);
    const Circuit a_j = pauli_circuit(ctx.lcu[spec.j].string);

    Circuit c(n + 1);
    c.add(Gate::h(0));
    if (spec.part == Part::Imaginary) {
        c.add(Gate::sdg(0));
    }
    switch (spec.family) {
    case Family::Denominator:
        c.append(v, 1);
        c.append(controlled(a_j));
        c.append(controlled(a_i));
        break;
    case Family::GlobalNumerator:
        c.append(controlled(v));
        c.append(controlled(a_i));
        c.append(controlled(circuit::inverse(ctx.state_prep)));
        break;
    case Family::LocalNumerator:
        c.append(v, 1);
        c.append(controlled(a_i));
        c.append(circuit::inverse(ctx.state_prep), 1);
        c.add(Gate::cz(0, spec.q + 1));
        c.append(ctx.state_prep, 1);
        c.append(controlled(a_j));
        break;
    }
    c.add(Gate::h(0));
    return c;
}

/// Probability that the ancilla (most significant bit) reads 1.
inline double ancilla_one_probability(const circuit::StateVector &s) {
    const auto amps = s.amplitudes();
    const std::size_t half = amps.size() / 2;
    double p = 0.0;
    for (std::size_t k = half; k < amps.size(); ++k) {
        p += std::norm(amps[k]);
    }
    return std::min(1.0, std::max(0.0, p));
}

struct Sampling {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// splitmix64 finaliser, used to derive one independent stream per test.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, const HadamardTestSpec &s) {
    std::uint64_t h = mix(seed);
    for (std::uint64_t v : {std::uint64_t(s.family), std::uint64_t(s.part), std::uint64_t(s.i), std::uint64_t(s.j),
                            std::uint64_t(s.q)}) {
        h = mix(h ^ v);
    }
    return h;
}

/// 1 - 2 P(1). Exact when `sampling` is empty; otherwise P(1) is replaced by
/// the frequency of a Binomial(shots, P(1)) draw.
inline double run_test(const HadamardTestSpec &spec, const TestContext &ctx, std::span<const double> theta,
                       std::optional<Sampling> sampling = std::nullopt) {
    if (sampling && sampling->shots == 0) {
        throw ConfigError("Hadamard test: shots must be at least 1");
    }
    const circuit::Circuit c = build_circuit(spec, ctx, theta);
    const double p1 = ancilla_one_probability(circuit::simulate(c, circuit::StateVector::zero(c.n)));
    if (!sampling) {
        return 1.0 - 2.0 * p1;
    }
    std::mt19937_64 rng(stream_seed(sampling->seed, spec));
    std::binomial_distribution<std::uint64_t> draw(sampling->shots, p1);
    const double freq = static_cast<double>(draw(rng)) / static_cast<double>(sampling->shots);
    return 1.0 - 2.0 * freq;
}

/// Re or Im of <psi|W|psi> with |psi> = prep|0>, by a single Hadamard test
/// with W controlled on the ancilla.
inline double expectation(const circuit::Circuit &prep, const circuit::Circuit &w, Part part,
                          std::optional<Sampling> sampling = std::nullopt) {
    if (prep.n != w.n) {
        throw ConfigError("Hadamard test: state preparation and unitary disagree on qubit count");
    }
    if (sampling && sampling->shots == 0) {
        throw ConfigError("Hadamard test: shots must be at least 1");
    }
    circuit::Circuit c(w.n + 1);
    c.append(prep, 1);
    c.add(circuit::Gate::h(0));
    if (part == Part::Imaginary) {
        c.add(circuit::Gate::sdg(0));
    }
    c.append(circuit::controlled(w));
    c.add(circuit::Gate::h(0));
    const double p1 = ancilla_one_probability(circuit::simulate(c, circuit::StateVector::zero(c.n)));
    if (!sampling) {
        return 1.0 - 2.0 * p1;
    }
    std::mt19937_64 rng(mix(sampling->seed));
    std::binomial_distribution<std::uint64_t> draw(sampling->shots, p1);
    return 1.0 - 2.0 * static_cast<double>(draw(rng)) / static_cast<double>(sampling->shots);
}

struct Budget {
    CostKind kind = CostKind::Global;
    std::size_t L = 0;
    int n = 0;
    std::size_t denominator_tests = 0;
    std::size_t numerator_tests = 0;
    std::size_t total() const { return denominator_tests + numerator_tests; }
};

struct TestPlan {
    std::vector<HadamardTestSpec> specs;
    Budget budget;
};

/// Every test needed by one cost evaluation, in a fixed order: denominator
/// cross terms (i < j), then numerator tests.
inline TestPlan enumerate_tests(std::size_t L, int n, CostKind kind) {
    if (L < 1) {
        throw ConfigError("enumerate_tests: L must be at least 1");
    }
    if (n < 1) {
        throw ConfigError("enumerate_tests: n must be at least 1");
    }
    TestPlan plan;
    plan.budget.kind = kind;
    plan.budget.L = L;
    plan.budget.n = n;
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = i + 1; j < L; ++j) {
            plan.specs.push_back(HadamardTestSpec::denominator(i, j));
        }
    }
    plan.budget.denominator_tests = plan.specs.size();
    if (kind == CostKind::Global) {
        for (std::size_t i = 0; i < L; ++i) {
            plan.specs.push_back(HadamardTestSpec::global_numerator(i, Part::Real));
            plan.specs.push_back(HadamardTestSpec::global_numerator(i, Part::Imaginary));
        }
    } else {
        for (int q = 0; q < n; ++q) {
            for (std::size_t i = 0; i < L; ++i) {
                for (std::size_t j = i; j < L; ++j) {
                    plan.specs.push_back(HadamardTestSpec::local_numerator(i, j, q));
                }
            }
        }
    }
    plan.budget.numerator_tests = plan.specs.size() - plan.budget.denominator_tests;
    return plan;
}

inline constexpr std::string_view budget_csv_header = "kind,L,n,denominator_tests,numerator_tests,total";

inline std::string budget_csv_row(const Budget &b) {
    return std::string(kind_name(b.kind)) + "," + std::to_string(b.L) + "," + std::to_string(b.n) + "," +
           std::to_string(b.denominator_tests) + "," + std::to_string(b.numerator_tests) + "," +
           std::to_string(b.total());
}

} // namespace vqls::hadamard
