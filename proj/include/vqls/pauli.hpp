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
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqls/error.hpp"
#include "vqls/numerics.hpp"

namespace vqls::pauli {

using numerics::cplx;
using numerics::DenseMatrix;

enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Letter l) { return "IXYZ"[static_cast<int>(l)]; }

/// Tensor product of single-qubit Pauli matrices. The leftmost letter acts on
/// qubit 0, which is the most significant bit of a basis-state index.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    static PauliString identity(int n) {
        return PauliString(std::vector<Letter>(static_cast<std::size_t>(n), Letter::I));
    }

    static PauliString parse(std::string_view text) {
        std::vector<Letter> letters;
        letters.reserve(text.size());
        for (char ch : text) {
            switch (ch) {
            case 'I': letters.push_back(Letter::I); break;
            case 'X': letters.push_back(Letter::X); break;
            case 'Y': letters.push_back(Letter::Y); break;
            case 'Z': letters.push_back(Letter::Z); break;
            default:
                throw ConfigError("invalid Pauli letter '" + std::string(1, ch) + "' in \"" +
                                  std::string(text) + "\"");
            }
        }
        if (letters.empty()) {
            throw ConfigError("empty Pauli string");
        }
        return PauliString(std::move(letters));
    }

    int size() const { return static_cast<int>(letters_.size()); }
    Letter operator[](int q) const { return letters_[static_cast<std::size_t>(q)]; }
    const std::vector<Letter> &letters() const { return letters_; }

    std::string str() const {
        std::string s;
        for (Letter l : letters_) {
            s.push_back(to_char(l));
        }
        return s;
    }

    /// Bits flipped by the string (X or Y letters).
    std::uint64_t x_mask() const { return mask([](Letter l) { return l == Letter::X || l == Letter::Y; }); }
    /// Bits picking up a sign (Z or Y letters).
    std::uint64_t z_mask() const { return mask([](Letter l) { return l == Letter::Z || l == Letter::Y; }); }
    int y_count() const {
        return static_cast<int>(std::count(letters_.begin(), letters_.end(), Letter::Y));
    }
    bool is_identity() const {
        return std::all_of(letters_.begin(), letters_.end(), [](Letter l) { return l == Letter::I; });
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;
    friend auto operator<=>(const PauliString &a, const PauliString &b) { return a.letters_ <=> b.letters_; }

  private:
    template <class Pred> std::uint64_t mask(Pred pred) const {
        std::uint64_t m = 0;
        const int n = size();
        for (int q = 0; q < n; ++q) {
            if (pred(letters_[static_cast<std::size_t>(q)])) {
                m |= std::uint64_t{1} << (n - 1 - q);
            }
        }
        return m;
    }

    std::vector<Letter> letters_;
};

/// Column action of a Pauli string: P|k> = phase(k) |k ^ x_mask>.
struct PauliAction {
    std::uint64_t flip = 0;
    std::uint64_t sign = 0;
    cplx base = 1.0; // i^{number of Y}

    explicit PauliAction(const PauliString &p) : flip(p.x_mask()), sign(p.z_mask()) {
        static const cplx powers[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
        base = powers[p.y_count() % 4];
    }

    cplx phase(std::uint64_t k) const { return (std::popcount(k & sign) & 1) ? -base : base; }
};

/// Applies `p` to `in`, writing into `out` (which must not alias `in`).
inline void apply(const PauliString &p, std::span<const cplx> in, std::span<cplx> out) {
    const PauliAction act(p);
    for (std::uint64_t k = 0; k < in.size(); ++k) {
        out[k ^ act.flip] = act.phase(k) * in[k];
    }
}

struct Limits {
    int max_qubits = 12;
    int max_enumeration_qubits = 6;
};

/// Dense 2^n x 2^n matrix of a Pauli string.
inline DenseMatrix matrix(const PauliString &p, const Limits &limits = {}) {
    if (p.size() > limits.max_qubits) {
        throw ResourceError("pauli_matrix: " + std::to_string(p.size()) +
                            " qubits exceeds the limit of " + std::to_string(limits.max_qubits));
    }
    const std::uint64_t dim = std::uint64_t{1} << p.size();
    DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const PauliAction act(p);
    for (std::uint64_t k = 0; k < dim; ++k) {
        m(static_cast<Eigen::Index>(k ^ act.flip), static_cast<Eigen::Index>(k)) = act.phase(k);
    }
    return m;
}

struct LcuTerm {
    cplx coefficient;
    PauliString string;
};

/// A = sum_i c_i P_i with distinct strings, kept in lexicographic order of the
/// letters (I < X < Y < Z).
class LcuTerms {
  public:
    LcuTerms() = default;
    LcuTerms(int n, std::vector<LcuTerm> terms) : n_(n), terms_(std::move(terms)) {
        if (n < 1) {
            throw ConfigError("LcuTerms: qubit count must be positive");
        }
        for (const auto &t : terms_) {
            if (t.string.size() != n) {
                throw ConfigError("LcuTerms: string " + t.string.str() + " has wrong length");
            }
        }
        std::sort(terms_.begin(), terms_.end(),
                  [](const LcuTerm &a, const LcuTerm &b) { return a.string < b.string; });
        for (std::size_t i = 1; i < terms_.size(); ++i) {
            if (terms_[i].string == terms_[i - 1].string) {
                throw ConfigError("LcuTerms: duplicate string " + terms_[i].string.str());
            }
        }
    }

    int qubits() const { return n_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::vector<LcuTerm> &terms() const { return terms_; }
    const LcuTerm &operator[](std::size_t i) const { return terms_[i]; }

    LcuTerms scaled(double factor) const {
        auto copy = terms_;
        for (auto &t : copy) {
            t.coefficient *= factor;
        }
        return LcuTerms(n_, std::move(copy));
    }

    /// out = A in, without forming A.
    void apply(std::span<const cplx> in, std::span<cplx> out) const {
        std::fill(out.begin(), out.end(), cplx(0.0));
        for (const auto &t : terms_) {
            const PauliAction act(t.string);
            for (std::uint64_t k = 0; k < in.size(); ++k) {
                out[k ^ act.flip] += t.coefficient * act.phase(k) * in[k];
            }
        }
    }

  private:
    int n_ = 0;
    std::vector<LcuTerm> terms_;
};

namespace detail {

inline int qubits_for_dimension(Eigen::Index dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw ConfigError("decompose: matrix dimension " + std::to_string(dim) +
                          " is not a power of 2");
    }
    return std::countr_zero(static_cast<std::uint64_t>(dim));
}

// Tr(A P) in O(N): P has exactly one non-zero per column.
inline cplx trace_product(const DenseMatrix &a, const PauliString &p) {
    const PauliAction act(p);
    cplx acc = 0.0;
    const auto dim = static_cast<std::uint64_t>(a.rows());
    for (std::uint64_t k = 0; k < dim; ++k) {
        acc += a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ act.flip)) * act.phase(k);
    }
    return acc;
}

} // namespace detail

/// All 4^n strings in lexicographic order.
inline std::vector<PauliString> all_strings(int n) {
    const std::uint64_t count = std::uint64_t{1} << (2 * n);
    std::vector<PauliString> out;
    out.reserve(count);
    for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<Letter> letters(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) {
            letters[static_cast<std::size_t>(q)] = static_cast<Letter>((code >> (2 * (n - 1 - q))) & 3U);
        }
        out.emplace_back(std::move(letters));
    }
    return out;
}

/// c_i = Tr(A P_i) / 2^n. Without an explicit string set every string is
/// scanned, which is limited to `limits.max_enumeration_qubits`.
inline LcuTerms decompose(const DenseMatrix &a, double drop_tol = 1e-12,
                          const std::optional<std::vector<PauliString>> &strings = std::nullopt,
                          const Limits &limits = {}) {
    if (a.rows() != a.cols()) {
        throw ConfigError("decompose: matrix is not square");
    }
    const int n = detail::qubits_for_dimension(a.rows());
    std::vector<PauliString> candidates;
    if (strings) {
        candidates = *strings;
    } else {
        if (n > limits.max_enumeration_qubits) {
            throw ResourceError("decompose: full enumeration of 4^" + std::to_string(n) +
                                " strings exceeds the limit; pass an explicit string set");
        }
        candidates = all_strings(n);
    }
    const double norm = static_cast<double>(a.rows());
    std::vector<LcuTerm> terms;
    for (auto &p : candidates) {
        if (p.size() != n) {
            throw ConfigError("decompose: string " + p.str() + " does not match matrix size");
        }
        const cplx c = detail::trace_product(a, p) / norm;
        if (std::abs(c) > drop_tol) {
            terms.push_back({c, std::move(p)});
        }
    }
    return LcuTerms(n, std::move(terms));
}

/// sum_i c_i P_i as a dense matrix.
inline DenseMatrix reconstruct(const LcuTerms &t, const Limits &limits = {}) {
    const int n = t.qubits();
    if (n > limits.max_qubits) {
        throw ResourceError("reconstruct: too many qubits");
    }
    const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n);
    DenseMatrix m = DenseMatrix::Zero(dim, dim);
    for (const auto &term : t.terms()) {
        const PauliAction act(term.string);
        for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(dim); ++k) {
            m(static_cast<Eigen::Index>(k ^ act.flip), static_cast<Eigen::Index>(k)) +=
                term.coefficient * act.phase(k);
        }
    }
    return m;
}

/// True iff every coefficient has |Im c| <= tol. For a Pauli decomposition this
/// is equivalent to the reconstructed matrix being Hermitian.
inline bool coefficients_real(const LcuTerms &t, double tol = 1e-10) {
    return std::all_of(t.terms().begin(), t.terms().end(),
                       [tol](const LcuTerm &x) { return std::abs(x.coefficient.imag()) <= tol; });
}

} // namespace vqls::pauli
