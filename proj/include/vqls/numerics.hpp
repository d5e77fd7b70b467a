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
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vqls/error.hpp"

/// Dense linear algebra used across the library: Hermitian eigenvalues,
/// singular values, condition numbers and the cosine alignment metric.
namespace vqls::numerics {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerances shared by the numerics routines. Tests pin these explicitly.
struct Tolerances {
    double hermitian = 1e-12;
    double singular_ratio = 1e-14;
    double jacobi_off_diagonal = 1e-15;
    /// Matrices above this dimension use the tridiagonal solver.
    std::size_t jacobi_max_dimension = 256;
};

/// Largest element-wise deviation |M - M^dagger|.
inline double max_asymmetry(const DenseMatrix &m) {
    if (m.rows() != m.cols()) {
        throw ConfigError("max_asymmetry: matrix is not square");
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i; j < m.cols(); ++j) {
            worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return worst;
}

inline bool is_hermitian(const DenseMatrix &m, double tol = Tolerances{}.hermitian) {
    return m.rows() == m.cols() && max_asymmetry(m) <= tol;
}

namespace detail {

// Cyclic Jacobi on a Hermitian matrix. Each rotation first removes the phase
// of the pivot a_pq, then applies the real symmetric Jacobi rotation.
inline std::vector<double> jacobi_eigenvalues(DenseMatrix a, double off_tol) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
    }
    const double scale = std::max(a.norm(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) <= off_tol * scale) {
            break;
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-300) {
                    continue;
                }
                const cplx phase = apq / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on (p, q).
                const cplx gpp = c;
                const cplx gpq = s;
                const cplx gqp = -s * std::conj(phase);
                const cplx gqq = c * std::conj(phase);
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    std::vector<double> values(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        values[static_cast<std::size_t>(i)] = a(i, i).real();
    }
    std::sort(values.begin(), values.end());
    return values;
}

inline std::vector<double> tridiagonal_eigenvalues(const DenseMatrix &a) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eigenvalues: eigensolver did not converge");
    }
    const Eigen::VectorXd &ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

} // namespace detail

/// Ascending eigenvalues of a Hermitian matrix. Cyclic Jacobi is used up to
/// `tol.jacobi_max_dimension`; larger matrices go through Householder
/// tridiagonalisation.
inline std::vector<double> hermitian_eigenvalues(const DenseMatrix &m,
                                                 const Tolerances &tol = {}) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ConfigError("hermitian_eigenvalues: matrix must be square and non-empty");
    }
    const double asym = max_asymmetry(m);
    if (asym > tol.hermitian) {
        throw ConfigError("hermitian_eigenvalues: matrix is not Hermitian (max |M - M^dagger| = " +
                          std::to_string(asym) + ")");
    }
    if (static_cast<std::size_t>(m.rows()) <= tol.jacobi_max_dimension) {
        return detail::jacobi_eigenvalues(m, tol.jacobi_off_diagonal);
    }
    return detail::tridiagonal_eigenvalues(m);
}

/// Singular values in ascending order, taken from the eigenvalues of M^dagger M.
/// For Hermitian input the absolute eigenvalues of M are used directly; they
/// are the same numbers without squaring the conditioning.
inline std::vector<double> singular_values(const DenseMatrix &m, const Tolerances &tol = {}) {
    std::vector<double> sv;
    if (m.rows() == m.cols() && max_asymmetry(m) <= tol.hermitian) {
        sv = hermitian_eigenvalues(m, tol);
        for (double &s : sv) {
            s = std::abs(s);
        }
    } else {
        DenseMatrix gram = m.adjoint() * m;
        gram = 0.5 * (gram + gram.adjoint()).eval();
        sv = hermitian_eigenvalues(gram, tol);
        for (double &s : sv) {
            s = std::sqrt(std::max(s, 0.0));
        }
    }
    std::sort(sv.begin(), sv.end());
    return sv;
}

/// sigma_max / sigma_min. Throws NumericalError("singular") when sigma_min is
/// below `tol.singular_ratio * sigma_max`.
inline double condition_number(const DenseMatrix &m, const Tolerances &tol = {}) {
    if (m.rows() != m.cols()) {
        throw ConfigError("condition_number: matrix is not square");
    }
    const auto sv = singular_values(m, tol);
    const double smax = sv.back();
    const double smin = sv.front();
    if (smax == 0.0 || smin < tol.singular_ratio * smax) {
        throw NumericalError("condition_number: matrix is singular");
    }
    return smax / smin;
}

/// Re<u, v> / (|u| |v|).
inline double cosine_alignment(const ComplexVector &u, const ComplexVector &v) {
    if (u.size() != v.size()) {
        throw ConfigError("cosine_alignment: length mismatch");
    }
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) {
        throw NumericalError("cosine_alignment: zero vector");
    }
    return u.dot(v).real() / (nu * nv);
}

struct Rescaled {
    DenseMatrix matrix;
    double scale = 1.0;
};

/// Divides a Hermitian matrix by its largest absolute eigenvalue.
inline Rescaled rescale_to_unit_spectral_max(const DenseMatrix &m, const Tolerances &tol = {}) {
    const auto ev = hermitian_eigenvalues(m, tol);
    const double lambda = std::max(std::abs(ev.front()), std::abs(ev.back()));
    if (lambda == 0.0) {
        throw NumericalError("rescale_to_unit_spectral_max: zero matrix");
    }
    return {m / lambda, lambda};
}

} // namespace vqls::numerics
