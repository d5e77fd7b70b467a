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
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqls/circuit.hpp"
#include "vqls/error.hpp"
#include "vqls/numerics.hpp"
#include "vqls/pauli.hpp"

/// Problem instances: the transverse-field Ising family, random Pauli
/// systems, and block-extracted/padded matrices (ingested or synthetic).
namespace vqls::problems {

using numerics::DenseMatrix;
using numerics::RealVector;

struct InstanceMetadata {
    std::string family;
    std::uint64_t seed = 0;
    /// Generator parameters (n, J, eta, size, bandwidth, block ranges, ...).
    nlohmann::json parameters = nlohmann::json::object();
    /// The factor the raw matrix was divided by.
    double scale = 1.0;
    double condition_number = 0.0;
    std::vector<std::string> warnings;
};

/// A linear system A x = b with A (spectral max 1) held densely and, when
/// known, as Pauli terms. `b` is a unit vector prepared by `b_circuit`.
struct ProblemInstance {
    int n = 0;
    DenseMatrix matrix;
    std::optional<pauli::LcuTerms> lcu;
    RealVector b;
    circuit::Circuit b_circuit;
    InstanceMetadata metadata;

    std::size_t dimension() const { return std::size_t{1} << n; }
};

inline nlohmann::json to_json(const InstanceMetadata &m) {
    return {{"family", m.family},
            {"seed", m.seed},
            {"parameters", m.parameters},
            {"scale", m.scale},
            {"condition_number", m.condition_number},
            {"warnings", m.warnings}};
}

/// Instance manifest: metadata plus structural facts.
inline nlohmann::json manifest(const ProblemInstance &inst) {
    nlohmann::json j = to_json(inst.metadata);
    j["n"] = inst.n;
    j["dimension"] = inst.dimension();
    j["lcu_terms"] = inst.lcu ? static_cast<long>(inst.lcu->size()) : -1;
    return j;
}

/// Checks the instance invariants; throws NumericalError on violation.
inline void check_invariants(const ProblemInstance &inst, double tol = 1e-9) {
    if (inst.matrix.rows() != static_cast<Eigen::Index>(inst.dimension()) ||
        inst.b.size() != static_cast<Eigen::Index>(inst.dimension())) {
        throw NumericalError("instance: inconsistent sizes");
    }
    if (std::abs(inst.b.norm() - 1.0) > 1e-12) {
        throw NumericalError("instance: b is not a unit vector");
    }
    if (inst.lcu) {
        const double diff = (pauli::reconstruct(*inst.lcu) - inst.matrix).cwiseAbs().maxCoeff();
        if (diff > 1e-10) {
            throw NumericalError("instance: LCU terms do not reproduce the matrix");
        }
    }
    const auto ev = numerics::hermitian_eigenvalues(inst.matrix);
    const double spectral = std::max(std::abs(ev.front()), std::abs(ev.back()));
    if (std::abs(spectral - 1.0) > tol) {
        throw NumericalError("instance: spectral max is " + std::to_string(spectral));
    }
}

namespace detail {

inline std::pair<double, double> spectral_max_and_condition(const DenseMatrix &m) {
    const auto ev = numerics::hermitian_eigenvalues(m);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double v : ev) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
    }
    if (hi == 0.0 || lo < 1e-14 * hi) {
        throw NumericalError("instance matrix is singular");
    }
    return {hi, hi / lo};
}

inline pauli::PauliString single(int n, std::initializer_list<std::pair<int, pauli::Letter>> letters) {
    std::vector<pauli::Letter> v(static_cast<std::size_t>(n), pauli::Letter::I);
    for (auto [q, l] : letters) {
        v[static_cast<std::size_t>(q)] = l;
    }
    return pauli::PauliString(std::move(v));
}

inline circuit::Circuit hadamard_layer(int n) {
    circuit::Circuit c(n);
    for (int q = 0; q < n; ++q) {
        c.add(circuit::Gate::h(q));
    }
    return c;
}

} // namespace detail

/// A = (sum_i X_i + J sum_i Z_i Z_{i+1} + eta I) / xi on an open chain, with xi
/// the largest absolute eigenvalue; b is the uniform superposition.
inline ProblemInstance make_ising(int n, double J = 0.1, double eta = 5.0) {
    if (n < 2) {
        throw ConfigError("make_ising: n must be at least 2");
    }
    using pauli::Letter;
    std::vector<pauli::LcuTerm> terms;
    for (int i = 0; i < n; ++i) {
        terms.push_back({1.0, detail::single(n, {{i, Letter::X}})});
    }
    if (J != 0.0) {
        for (int i = 0; i + 1 < n; ++i) {
            terms.push_back({J, detail::single(n, {{i, Letter::Z}, {i + 1, Letter::Z}})});
        }
    }
    if (eta != 0.0) {
        terms.push_back({eta, pauli::PauliString::identity(n)});
    }
    pauli::LcuTerms raw(n, std::move(terms));
    const DenseMatrix raw_matrix = pauli::reconstruct(raw);
    const auto [xi, kappa] = detail::spectral_max_and_condition(raw_matrix);

    ProblemInstance inst;
    inst.n = n;
    inst.lcu = raw.scaled(1.0 / xi);
    inst.matrix = raw_matrix / xi;
    inst.b = RealVector::Constant(static_cast<Eigen::Index>(inst.dimension()),
                                  1.0 / std::sqrt(static_cast<double>(inst.dimension())));
    inst.b_circuit = detail::hadamard_layer(n);
    inst.metadata.family = "ising";
    inst.metadata.parameters = {{"n", n}, {"J", J}, {"eta", eta}, {"xi", xi}};
    inst.metadata.scale = xi;
    inst.metadata.condition_number = kappa;
    return inst;
}

/// 2n distinct strings over {I, X, Z} drawn without replacement, coefficients
/// uniform in [-10, 10], b uniform in [-1, 1]^N then normalised. The matrix is
/// divided by its largest absolute eigenvalue.
inline ProblemInstance make_random_pauli(int n, std::uint64_t seed) {
    if (n < 2) {
        throw ConfigError("make_random_pauli: n must be at least 2");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> letter(0, 2);
    std::uniform_real_distribution<double> coef(-10.0, 10.0);
    static constexpr pauli::Letter alphabet[3] = {pauli::Letter::I, pauli::Letter::X, pauli::Letter::Z};

    const std::size_t L = static_cast<std::size_t>(2 * n);
    std::set<pauli::PauliString> seen;
    std::vector<pauli::LcuTerm> terms;
    while (terms.size() < L) {
        std::vector<pauli::Letter> letters(static_cast<std::size_t>(n));
        for (auto &l : letters) {
            l = alphabet[letter(rng)];
        }
        pauli::PauliString p(std::move(letters));
        if (!seen.insert(p).second) {
            continue;
        }
        terms.push_back({coef(rng), std::move(p)});
    }
    pauli::LcuTerms raw(n, std::move(terms));
    const DenseMatrix raw_matrix = pauli::reconstruct(raw);
    const auto [scale, kappa] = detail::spectral_max_and_condition(raw_matrix);

    ProblemInstance inst;
    inst.n = n;
    inst.lcu = raw.scaled(1.0 / scale);
    inst.matrix = raw_matrix / scale;
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    RealVector b(static_cast<Eigen::Index>(inst.dimension()));
    for (Eigen::Index k = 0; k < b.size(); ++k) {
        b[k] = entry(rng);
    }
    inst.b = b / b.norm();
    inst.b_circuit = circuit::prepare_state(inst.b);
    inst.metadata.family = "random-pauli";
    inst.metadata.seed = seed;
    inst.metadata.parameters = {{"n", n}};
    inst.metadata.scale = scale;
    inst.metadata.condition_number = kappa;
    return inst;
}

/// Half-open index range [offset, offset + count).
struct BlockRange {
    long offset = 0;
    long count = 0;
};

inline std::size_t next_power_of_two(std::size_t size) {
    return std::max<std::size_t>(2, std::bit_ceil(size));
}

/// Pulls the block A_full[rows, cols] and b_full[rows] out of a larger system,
/// divides both by the block's largest absolute eigenvalue, and pads to the
/// next power of two with zero rows/columns, unit diagonal and zero right-hand
/// side. The complementary block is expected to be diagonal; if it is not, a
/// warning is recorded in the metadata.
inline ProblemInstance extract_and_pad(const DenseMatrix &a_full, const RealVector &b_full, BlockRange rows,
                                       BlockRange cols, std::string family = "matrix") {
    if (rows.count < 1 || cols.count < 1 || rows.offset < 0 || cols.offset < 0 ||
        rows.offset + rows.count > a_full.rows() || cols.offset + cols.count > a_full.cols()) {
        throw ConfigError("extract_and_pad: block lies outside the matrix");
    }
    if (rows.count != cols.count) {
        throw ConfigError("extract_and_pad: block is " + std::to_string(rows.count) + "x" +
                          std::to_string(cols.count) + ", not square");
    }
    if (b_full.size() != a_full.rows()) {
        throw ConfigError("extract_and_pad: right-hand side length does not match the matrix");
    }
    InstanceMetadata meta;
    meta.family = std::move(family);

    // Complementary block: rows and columns outside the chosen ranges.
    std::vector<long> other_rows, other_cols;
    for (long i = 0; i < a_full.rows(); ++i) {
        if (i < rows.offset || i >= rows.offset + rows.count) {
            other_rows.push_back(i);
        }
    }
    for (long j = 0; j < a_full.cols(); ++j) {
        if (j < cols.offset || j >= cols.offset + cols.count) {
            other_cols.push_back(j);
        }
    }
    bool diagonal = true;
    for (std::size_t r = 0; r < other_rows.size() && diagonal; ++r) {
        for (std::size_t c = 0; c < other_cols.size(); ++c) {
            if (r != c && std::abs(a_full(other_rows[r], other_cols[c])) != 0.0) {
                diagonal = false;
                break;
            }
        }
    }
    if (!diagonal) {
        meta.warnings.push_back("complementary block is not diagonal");
    }

    DenseMatrix block = a_full.block(rows.offset, cols.offset, rows.count, cols.count);
    RealVector segment = b_full.segment(rows.offset, rows.count);
    double scale = 0.0;
    if (numerics::is_hermitian(block, 1e-12)) {
        scale = numerics::rescale_to_unit_spectral_max(block).scale;
    } else {
        meta.warnings.push_back("block is not Hermitian; scaled by its largest singular value");
        scale = numerics::singular_values(block).back();
        if (scale == 0.0) {
            throw NumericalError("extract_and_pad: zero block");
        }
    }
    block /= scale;
    segment /= scale;

    const std::size_t size = static_cast<std::size_t>(rows.count);
    const std::size_t padded = next_power_of_two(size);
    const int n = std::countr_zero(padded);
    DenseMatrix a = DenseMatrix::Identity(static_cast<Eigen::Index>(padded), static_cast<Eigen::Index>(padded));
    a.topLeftCorner(rows.count, cols.count) = block;
    RealVector b = RealVector::Zero(static_cast<Eigen::Index>(padded));
    b.head(rows.count) = segment;
    const double b_norm = b.norm();
    if (b_norm == 0.0) {
        throw NumericalError("extract_and_pad: right-hand side segment is zero");
    }

    ProblemInstance inst;
    inst.n = n;
    inst.matrix = std::move(a);
    inst.b = b / b_norm;
    inst.b_circuit = circuit::prepare_state(inst.b);
    if (n <= pauli::Limits{}.max_enumeration_qubits) {
        inst.lcu = pauli::decompose(inst.matrix);
    }
    meta.scale = scale;
    meta.condition_number = numerics::condition_number(inst.matrix);
    meta.parameters["block_rows"] = {rows.offset, rows.count};
    meta.parameters["block_cols"] = {cols.offset, cols.count};
    meta.parameters["original_size"] = {a_full.rows(), a_full.cols()};
    meta.parameters["padded_size"] = padded;
    meta.parameters["b_norm"] = b_norm;
    meta.parameters["n"] = n;
    inst.metadata = std::move(meta);
    return inst;
}

/// Whole-matrix ingestion: the block is the full matrix.
inline ProblemInstance from_matrix(const DenseMatrix &a, const RealVector &b) {
    if (a.rows() != a.cols()) {
        throw ConfigError("from_matrix: matrix is not square");
    }
    return extract_and_pad(a, b, {0, a.rows()}, {0, a.cols()}, "matrix");
}

/// Random symmetric banded matrix (entries within `bandwidth` of the diagonal)
/// with a diagonally dominant diagonal, plus a random right-hand side, run
/// through the same scaling and padding as ingested blocks.
inline ProblemInstance make_banded_synthetic(long size, long bandwidth, std::uint64_t seed) {
    if (size < 2) {
        throw ConfigError("make_banded_synthetic: size must be at least 2");
    }
    if (bandwidth < 0) {
        throw ConfigError("make_banded_synthetic: bandwidth must be non-negative");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    std::uniform_real_distribution<double> margin(0.1, 1.0);
    std::uniform_real_distribution<double> sign(0.0, 1.0);
    DenseMatrix a = DenseMatrix::Zero(size, size);
    for (long i = 0; i < size; ++i) {
        for (long j = i + 1; j < size && j <= i + bandwidth; ++j) {
            const double v = off(rng);
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    for (long i = 0; i < size; ++i) {
        double row = 0.0;
        for (long j = 0; j < size; ++j) {
            if (j != i) {
                row += std::abs(a(i, j));
            }
        }
        const double d = row + margin(rng);
        a(i, i) = sign(rng) < 0.5 ? -d : d;
    }
    RealVector b(size);
    for (long i = 0; i < size; ++i) {
        b[i] = off(rng);
    }
    ProblemInstance inst = extract_and_pad(a, b, {0, size}, {0, size}, "banded");
    inst.metadata.seed = seed;
    inst.metadata.parameters["size"] = size;
    inst.metadata.parameters["bandwidth"] = bandwidth;
    return inst;
}

} // namespace vqls::problems
