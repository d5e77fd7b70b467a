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

#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vqls/error.hpp"
#include "vqls/numerics.hpp"

/// Matrix Market coordinate/array files and plain one-value-per-line vectors.
namespace vqls::io {

using numerics::cplx;
using numerics::DenseMatrix;
using numerics::RealVector;

struct MatrixMarketLimits {
    long max_dimension = 16384;
};

namespace detail {

inline std::string lower(std::string s) {
    for (char &c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

inline bool blank_or_comment(const std::string &line) {
    for (char c : line) {
        if (c == '%') {
            return true;
        }
        if (!std::isspace(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

} // namespace detail

inline DenseMatrix read_matrix_market(std::istream &in, const MatrixMarketLimits &limits = {}) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        throw ParseError("empty Matrix Market stream", 0);
    }
    ++lineno;
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") {
        throw ParseError("missing %%MatrixMarket banner", lineno);
    }
    object = detail::lower(object);
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (object != "matrix") {
        throw ParseError("unsupported object '" + object + "'", lineno);
    }
    if (format != "coordinate" && format != "array") {
        throw ParseError("unsupported format '" + format + "'", lineno);
    }
    if (field != "real" && field != "integer" && field != "complex" && field != "pattern") {
        throw ParseError("unsupported field '" + field + "'", lineno);
    }
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
        symmetry != "hermitian") {
        throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
    }
    if (format == "array" && field == "pattern") {
        throw ParseError("pattern field requires coordinate format", lineno);
    }
    const bool is_complex = field == "complex";

    do {
        if (!std::getline(in, line)) {
            throw ParseError("missing size line", lineno);
        }
        ++lineno;
    } while (detail::blank_or_comment(line));

    long rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream ss(line);
        if (!(ss >> rows >> cols)) {
            throw ParseError("malformed size line", lineno);
        }
        if (format == "coordinate" && !(ss >> nnz)) {
            throw ParseError("coordinate size line needs an entry count", lineno);
        }
    }
    if (rows < 1 || cols < 1 || rows > limits.max_dimension || cols > limits.max_dimension) {
        throw ParseError("matrix dimensions out of range", lineno);
    }
    if (symmetry != "general" && rows != cols) {
        throw ParseError("symmetric storage requires a square matrix", lineno);
    }
    DenseMatrix m = DenseMatrix::Zero(rows, cols);

    auto read_value = [&](std::istringstream &ss) -> cplx {
        if (field == "pattern") {
            return 1.0;
        }
        double re = 0.0, im = 0.0;
        if (!(ss >> re)) {
            throw ParseError("missing value", lineno);
        }
        if (is_complex && !(ss >> im)) {
            throw ParseError("missing imaginary part", lineno);
        }
        if (!std::isfinite(re) || !std::isfinite(im)) {
            throw ParseError("non-finite value", lineno);
        }
        return {re, im};
    };
    auto store = [&](long i, long j, cplx v) {
        m(i, j) = v;
        if (i != j) {
            if (symmetry == "symmetric") {
                m(j, i) = v;
            } else if (symmetry == "skew-symmetric") {
                m(j, i) = -v;
            } else if (symmetry == "hermitian") {
                m(j, i) = std::conj(v);
            }
        }
    };

    if (format == "coordinate") {
        for (long e = 0; e < nnz; ++e) {
            do {
                if (!std::getline(in, line)) {
                    throw ParseError("expected " + std::to_string(nnz) + " entries, found " +
                                         std::to_string(e),
                                     lineno);
                }
                ++lineno;
            } while (detail::blank_or_comment(line));
            std::istringstream ss(line);
            long i = 0, j = 0;
            if (!(ss >> i >> j)) {
                throw ParseError("malformed entry", lineno);
            }
            if (i < 1 || i > rows || j < 1 || j > cols) {
                throw ParseError("entry index out of range", lineno);
            }
            if (symmetry != "general" && j > i) {
                throw ParseError("symmetric storage expects lower-triangular entries", lineno);
            }
            store(i - 1, j - 1, read_value(ss));
        }
    } else {
        // Column-major; symmetric variants list the lower triangle only.
        for (long j = 0; j < cols; ++j) {
            const long first = symmetry == "general" ? 0 : (symmetry == "skew-symmetric" ? j + 1 : j);
            for (long i = first; i < rows; ++i) {
                do {
                    if (!std::getline(in, line)) {
                        throw ParseError("array data ended early", lineno);
                    }
                    ++lineno;
                } while (detail::blank_or_comment(line));
                std::istringstream ss(line);
                store(i, j, read_value(ss));
            }
        }
    }
    return m;
}

inline DenseMatrix read_matrix_market(const std::string &path, const MatrixMarketLimits &limits = {}) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot open matrix file '" + path + "'");
    }
    return read_matrix_market(f, limits);
}

/// Writes the non-zero entries in coordinate format. The field is "real"
/// unless some entry has a non-zero imaginary part.
inline void write_matrix_market(std::ostream &out, const DenseMatrix &m) {
    bool is_complex = false;
    long nnz = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) != cplx(0.0)) {
                ++nnz;
                is_complex = is_complex || m(i, j).imag() != 0.0;
            }
        }
    }
    out << "%%MatrixMarket matrix coordinate " << (is_complex ? "complex" : "real") << " general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    out << std::setprecision(17);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const cplx v = m(i, j);
            if (v == cplx(0.0)) {
                continue;
            }
            out << i + 1 << ' ' << j + 1 << ' ' << v.real();
            if (is_complex) {
                out << ' ' << v.imag();
            }
            out << '\n';
        }
    }
}

inline void write_matrix_market(const std::string &path, const DenseMatrix &m) {
    std::ofstream f(path);
    if (!f) {
        throw ConfigError("cannot write matrix file '" + path + "'");
    }
    write_matrix_market(f, m);
}

/// One real value per line; blank lines and lines starting with '#' or '%'
/// are skipped.
inline RealVector read_vector(std::istream &in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (detail::blank_or_comment(line) || line[first] == '#') {
            continue;
        }
        std::istringstream ss(line);
        double v = 0.0;
        std::string rest;
        if (!(ss >> v) || (ss >> rest) || !std::isfinite(v)) {
            throw ParseError("expected exactly one finite number", lineno);
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw ParseError("vector file holds no values", lineno);
    }
    return Eigen::Map<RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline RealVector read_vector(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot open vector file '" + path + "'");
    }
    return read_vector(f);
}

inline void write_vector(std::ostream &out, const RealVector &v) {
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out << v[i] << '\n';
    }
}

inline void write_vector(const std::string &path, const RealVector &v) {
    std::ofstream f(path);
    if (!f) {
        throw ConfigError("cannot write vector file '" + path + "'");
    }
    write_vector(f, v);
}

/// Shortest round-trip form of a double, used in every CSV cell.
inline std::string fmt(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace vqls::io
