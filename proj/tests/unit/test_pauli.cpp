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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vqls/pauli.hpp"

namespace {

using namespace vqls;
using pauli::PauliString;
using numerics::DenseMatrix;

TEST(PauliString, ParseAndPrint) {
    EXPECT_EQ(PauliString::parse("XIZY").str(), "XIZY");
    EXPECT_EQ(PauliString::identity(3).str(), "III");
    EXPECT_THROW(PauliString::parse("XQ"), ConfigError);
    EXPECT_THROW(PauliString::parse(""), ConfigError);
}

TEST(PauliMatrix, SingleLetters) {
    EXPECT_LT(oracle::max_abs(pauli::matrix(PauliString::parse("I")) - DenseMatrix::Identity(2, 2)), 1e-15);
    EXPECT_LT(oracle::max_abs(pauli::matrix(PauliString::parse("Z")) - oracle::pauli('Z')), 1e-15);
    EXPECT_LT(oracle::max_abs(pauli::matrix(PauliString::parse("Y")) - oracle::pauli('Y')), 1e-15);
}

TEST(PauliMatrix, XZIsHandKronecker) {
    DenseMatrix ref(4, 4);
    // X (x) Z written out entry by entry.
    ref << 0, 0, 1, 0,
           0, 0, 0, -1,
           1, 0, 0, 0,
           0, -1, 0, 0;
    EXPECT_LT(oracle::max_abs(pauli::matrix(PauliString::parse("XZ")) - ref), 1e-15);
}

TEST(PauliMatrix, LongWordsAgreeWithKronecker) {
    for (const char *w : {"XYZ", "ZZIY", "YXIXZ"}) {
        EXPECT_LT(oracle::max_abs(pauli::matrix(PauliString::parse(w)) - oracle::word(w)), 1e-15) << w;
    }
}

TEST(PauliMatrix, RespectsQubitLimit) {
    pauli::Limits lim;
    lim.max_qubits = 3;
    EXPECT_THROW(pauli::matrix(PauliString::identity(4), lim), ResourceError);
}

TEST(PauliApply, MatchesDenseProduct) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<numerics::cplx> in(8), out(8);
    for (auto &v : in) {
        v = {g(rng), g(rng)};
    }
    const auto p = PauliString::parse("YXZ");
    pauli::apply(p, in, out);
    const Eigen::VectorXcd ref = oracle::word("YXZ") * Eigen::Map<Eigen::VectorXcd>(in.data(), 8);
    for (int k = 0; k < 8; ++k) {
        EXPECT_LT(std::abs(out[k] - ref[k]), 1e-14);
    }
}

TEST(Decompose, SingleZ) {
    const auto t = pauli::decompose(oracle::pauli('Z'));
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].string.str(), "Z");
    EXPECT_NEAR(std::abs(t[0].coefficient - 1.0), 0.0, 1e-15);
}

TEST(Decompose, HadamardMatrixByTraceFormula) {
    const auto h = oracle::hadamard();
    const auto t = pauli::decompose(h);
    ASSERT_EQ(t.size(), 2u);
    // Tr(H X) / 2 and Tr(H Z) / 2.
    const auto cx = (h * oracle::pauli('X')).trace() / 2.0;
    const auto cz = (h * oracle::pauli('Z')).trace() / 2.0;
    EXPECT_EQ(t[0].string.str(), "X");
    EXPECT_EQ(t[1].string.str(), "Z");
    EXPECT_LT(std::abs(t[0].coefficient - cx), 1e-15);
    EXPECT_LT(std::abs(t[1].coefficient - cz), 1e-15);
    EXPECT_NEAR(t[0].coefficient.real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Decompose, ZeroGivesNoTerms) {
    const auto t = pauli::decompose(DenseMatrix::Zero(4, 4));
    EXPECT_TRUE(t.empty());
    EXPECT_EQ(t.qubits(), 2);
    EXPECT_LT(oracle::max_abs(pauli::reconstruct(t)), 1e-300);
}

TEST(Decompose, RejectsNonPowerOfTwo) {
    EXPECT_THROW(pauli::decompose(DenseMatrix::Identity(3, 3)), ConfigError);
    EXPECT_THROW(pauli::decompose(DenseMatrix::Identity(2, 4)), ConfigError);
}

TEST(Decompose, EnumerationLimit) {
    EXPECT_THROW(pauli::decompose(DenseMatrix::Identity(128, 128)), ResourceError);
}

TEST(Reconstruct, SingleTerm) {
    const pauli::LcuTerms t(1, {{1.0, PauliString::parse("Z")}});
    EXPECT_LT(oracle::max_abs(pauli::reconstruct(t) - oracle::pauli('Z')), 1e-15);
}

TEST(Reconstruct, RoundTripRandomHermitian16) {
    std::mt19937_64 rng(11);
    const auto a = oracle::random_hermitian(16, rng);
    const auto t = pauli::decompose(a);
    EXPECT_LT(oracle::max_abs(a - pauli::reconstruct(t)), 1e-10);
}

TEST(Reconstruct, RoundTripNonHermitian) {
    std::mt19937_64 rng(12);
    const auto a = oracle::random_complex(8, rng);
    EXPECT_LT(oracle::max_abs(a - pauli::reconstruct(pauli::decompose(a))), 1e-10);
}

TEST(LcuTerms, ApplyMatchesDense) {
    std::mt19937_64 rng(13);
    const auto a = oracle::random_hermitian(8, rng);
    const auto t = pauli::decompose(a);
    std::vector<numerics::cplx> in(8), out(8);
    std::normal_distribution<double> g;
    for (auto &v : in) {
        v = {g(rng), g(rng)};
    }
    t.apply(in, out);
    const Eigen::VectorXcd ref = a * Eigen::Map<Eigen::VectorXcd>(in.data(), 8);
    for (int k = 0; k < 8; ++k) {
        EXPECT_LT(std::abs(out[k] - ref[k]), 1e-12);
    }
}

TEST(LcuTerms, RejectsDuplicatesAndWrongLength) {
    EXPECT_THROW(pauli::LcuTerms(1, {{1.0, PauliString::parse("Z")}, {2.0, PauliString::parse("Z")}}), ConfigError);
    EXPECT_THROW(pauli::LcuTerms(2, {{1.0, PauliString::parse("Z")}}), ConfigError);
}

TEST(CoefficientsReal, Examples) {
    std::mt19937_64 rng(14);
    EXPECT_TRUE(pauli::coefficients_real(pauli::decompose(oracle::random_real_symmetric(8, rng))));
    // i (|0><1| - |1><0|) is Y.
    DenseMatrix y(2, 2);
    y << 0, numerics::cplx(0, 1), numerics::cplx(0, -1), 0;
    EXPECT_TRUE(pauli::coefficients_real(pauli::decompose(y)));
    const auto m = oracle::random_complex(4, rng);
    EXPECT_GT(oracle::max_abs(m - m.adjoint()), 1e-3);
    EXPECT_FALSE(pauli::coefficients_real(pauli::decompose(m)));
}

TEST(CoefficientsReal, BothDirectionsOnRandomMatrices) {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const bool hermitian = trial % 2 == 0;
        const auto m = hermitian ? oracle::random_hermitian(8, rng) : oracle::random_complex(8, rng);
        const bool real = pauli::coefficients_real(pauli::decompose(m), 1e-10);
        const bool oracle_hermitian = oracle::max_abs(m - m.adjoint()) <= 1e-10;
        EXPECT_EQ(real, oracle_hermitian);
        EXPECT_EQ(real, hermitian);
    }
}

} // namespace
