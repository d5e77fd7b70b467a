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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vqls/numerics.hpp"
#include "vqls/problems.hpp"

namespace {

using namespace vqls;
using numerics::DenseMatrix;

// Roots of det(lambda I - M) for a real symmetric 3x3 by the trigonometric
// cubic formula.
std::vector<double> cubic_roots(const DenseMatrix &m) {
    const double a11 = m(0, 0).real(), a22 = m(1, 1).real(), a33 = m(2, 2).real();
    const double a12 = m(0, 1).real(), a13 = m(0, 2).real(), a23 = m(1, 2).real();
    const double tr = a11 + a22 + a33;
    const double c2 = a11 * a22 + a11 * a33 + a22 * a33 - a12 * a12 - a13 * a13 - a23 * a23;
    const double det = a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) + a13 * (a12 * a23 - a22 * a13);
    // lambda = t + tr/3 gives t^3 + p t + q = 0.
    const double s = tr / 3.0;
    const double p = c2 - tr * tr / 3.0;
    const double q = -(2.0 * tr * tr * tr / 27.0 - tr * c2 / 3.0 + det);
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double phi = std::acos(std::clamp(3.0 * q / (p * r), -1.0, 1.0)) / 3.0;
    std::vector<double> out;
    for (int k = 0; k < 3; ++k) {
        out.push_back(s + r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    }
    std::sort(out.begin(), out.end());
    return out;
}

TEST(HermitianEigenvalues, Identity) {
    const auto ev = numerics::hermitian_eigenvalues(DenseMatrix::Identity(4, 4));
    EXPECT_EQ(ev.size(), 4u);
    for (double v : ev) {
        EXPECT_NEAR(v, 1.0, 1e-14);
    }
}

TEST(HermitianEigenvalues, PauliZ) {
    const auto ev = numerics::hermitian_eigenvalues(oracle::pauli('Z'));
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(ev[0], -1.0, 1e-14);
    EXPECT_NEAR(ev[1], 1.0, 1e-14);
}

TEST(HermitianEigenvalues, RandomSymmetric3x3MatchesCubicFormula) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = oracle::random_real_symmetric(3, rng);
        const auto ev = numerics::hermitian_eigenvalues(m);
        const auto ref = cubic_roots(m);
        for (int k = 0; k < 3; ++k) {
            EXPECT_NEAR(ev[k], ref[k], 1e-10);
        }
    }
}

TEST(HermitianEigenvalues, TridiagonalPathAgreesWithJacobi) {
    std::mt19937_64 rng(3);
    const auto m = oracle::random_hermitian(40, rng);
    numerics::Tolerances small;
    small.jacobi_max_dimension = 8;
    const auto a = numerics::hermitian_eigenvalues(m);
    const auto b = numerics::hermitian_eigenvalues(m, small);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_NEAR(a[k], b[k], 1e-10);
    }
}

TEST(HermitianEigenvalues, RejectsNonHermitian) {
    DenseMatrix m(2, 2);
    m << 1, 2, 0, 1;
    try {
        numerics::hermitian_eigenvalues(m);
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("not Hermitian"), std::string::npos);
    }
}

TEST(ConditionNumber, Trivial) {
    EXPECT_NEAR(numerics::condition_number(DenseMatrix::Identity(3, 3)), 1.0, 1e-14);
    DenseMatrix d = DenseMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    EXPECT_NEAR(numerics::condition_number(d), 4.0, 1e-14);
}

TEST(ConditionNumber, NonHermitianUsesSingularValues) {
    DenseMatrix m(2, 2);
    m << 0, 3, 1, 0;
    EXPECT_NEAR(numerics::condition_number(m), 3.0, 1e-12);
}

TEST(ConditionNumber, SingularReported) {
    DenseMatrix m = DenseMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    EXPECT_THROW(numerics::condition_number(m), NumericalError);
}

TEST(ConditionNumber, IsingTwoQubits) {
    EXPECT_NEAR(problems::make_ising(2).metadata.condition_number, 2.34, 0.01);
}

TEST(CosineAlignment, Examples) {
    numerics::ComplexVector v(3);
    v << 1.0, -2.0, 0.5;
    EXPECT_NEAR(numerics::cosine_alignment(v, v), 1.0, 1e-15);
    EXPECT_NEAR(numerics::cosine_alignment(v, -v), -1.0, 1e-15);
    numerics::ComplexVector e0(2), e1(2);
    e0 << 1, 0;
    e1 << 0, 1;
    EXPECT_EQ(numerics::cosine_alignment(e0, e1), 0.0);
    EXPECT_THROW(numerics::cosine_alignment(v, numerics::ComplexVector::Zero(3)), NumericalError);
}

TEST(Rescale, Examples) {
    const auto r = numerics::rescale_to_unit_spectral_max(2.0 * DenseMatrix::Identity(4, 4));
    EXPECT_DOUBLE_EQ(r.scale, 2.0);
    EXPECT_LT(oracle::max_abs(r.matrix - DenseMatrix::Identity(4, 4)), 1e-15);
    const auto x = numerics::rescale_to_unit_spectral_max(oracle::pauli('X'));
    EXPECT_DOUBLE_EQ(x.scale, 1.0);
    EXPECT_THROW(numerics::rescale_to_unit_spectral_max(DenseMatrix::Zero(2, 2)), NumericalError);
}

TEST(Rescale, UnscaledIsingTwoQubits) {
    // X0 + X1 + J Z0 Z1 + eta I with J = 0.1, eta = 5. On the span of
    // |00> + |11> and |01> + |10> it acts as eta + [[J, 2], [2, -J]], so the
    // largest eigenvalue is 5 + sqrt(4.01).
    const DenseMatrix a =
        oracle::word("XI") + oracle::word("IX") + 0.1 * oracle::word("ZZ") + 5.0 * oracle::word("II");
    const auto r = numerics::rescale_to_unit_spectral_max(a);
    EXPECT_NEAR(r.scale, 5.0 + std::sqrt(4.01), 1e-12);
    EXPECT_NEAR(r.scale, 7.0025, 1e-4);
}

} // namespace
