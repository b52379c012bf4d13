#pragma once

// Dense complex linear algebra used as the brute-force oracle: Pauli strings,
// generalized Bell vectors, the flip operator, partial transposition and
// Hermitian spectra. Everything here is double precision and independent of
// the exact combinatorial path it is used to check.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pptes/lattice.hpp"

namespace pptes {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline const Matrix& pauli(int mu) {
  static const std::array<Matrix, 4> sigma = [] {
    std::array<Matrix, 4> s;
    const Complex i(0.0, 1.0);
    s[0] = Matrix::Identity(2, 2);
    s[1] = (Matrix(2, 2) << 0, 1, 1, 0).finished();
    s[2] = (Matrix(2, 2) << 0, -i, i, 0).finished();
    s[3] = (Matrix(2, 2) << 1, 0, 0, -1).finished();
    return s;
  }();
  if (mu < 0 || mu > 3) {
    throw std::invalid_argument("pauli index must lie in {0,1,2,3}");
  }
  return sigma[mu];
}

// sigma_{w1} (x) ... (x) sigma_{wk}, leftmost factor most significant.
inline Matrix pauli_string(const MultiIndex& idx) {
  validate_multi_index(idx, static_cast<int>(idx.size()));
  if (idx.empty()) throw std::invalid_argument("empty pauli string");
  Matrix out = pauli(idx[0]);
  for (std::size_t k = 1; k < idx.size(); ++k) {
    out = Eigen::kroneckerProduct(out, pauli(idx[k])).eval();
  }
  return out;
}

inline Matrix pauli_string(const LatticeShape& shape, const LatticeSite& site) {
  validate_site(shape, site);
  MultiIndex all = site.alpha;
  all.insert(all.end(), site.beta.begin(), site.beta.end());
  return pauli_string(all);
}

// |Psi_+^d> = (1/sqrt(d)) sum_j |j>|j>
inline Vector max_entangled(std::int64_t d) {
  if (d < 2) throw std::invalid_argument("max_entangled requires d >= 2");
  Vector psi = Vector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::int64_t j = 0; j < d; ++j) psi(j * d + j) = amp;
  return psi;
}

// |psi_w> = (1 (x) sigma_w) |Psi_+^{2^k}>; amplitude at (j,k) is
// sigma[k][j] / sqrt(d).
inline Vector bell_vector(const MultiIndex& string_digits) {
  const Matrix sigma = pauli_string(string_digits);
  const std::int64_t d = sigma.rows();
  Vector psi = Vector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::int64_t j = 0; j < d; ++j) {
    for (std::int64_t k = 0; k < d; ++k) {
      psi(j * d + k) = amp * sigma(k, j);
    }
  }
  return psi;
}

inline Vector bell_vector(const LatticeShape& shape, const LatticeSite& site) {
  validate_site(shape, site);
  MultiIndex all = site.alpha;
  all.insert(all.end(), site.beta.begin(), site.beta.end());
  return bell_vector(all);
}

// V |psi (x) phi> = |phi (x) psi>
inline Matrix flip_operator(std::int64_t d) {
  if (d < 2) throw std::invalid_argument("flip_operator requires d >= 2");
  Matrix v = Matrix::Zero(d * d, d * d);
  for (std::int64_t i = 0; i < d; ++i) {
    for (std::int64_t j = 0; j < d; ++j) {
      v(i * d + j, j * d + i) = 1.0;
    }
  }
  return v;
}

// Transposes the second tensor factor (the id (x) T convention).
inline Matrix partial_transpose(const Matrix& mat, std::int64_t dim_a,
                                std::int64_t dim_b) {
  if (mat.rows() != dim_a * dim_b || mat.cols() != dim_a * dim_b) {
    throw std::invalid_argument("partial_transpose dimension mismatch");
  }
  Matrix out(mat.rows(), mat.cols());
  for (std::int64_t a = 0; a < dim_a; ++a) {
    for (std::int64_t ap = 0; ap < dim_a; ++ap) {
      for (std::int64_t b = 0; b < dim_b; ++b) {
        for (std::int64_t bp = 0; bp < dim_b; ++bp) {
          out(a * dim_b + b, ap * dim_b + bp) =
              mat(a * dim_b + bp, ap * dim_b + b);
        }
      }
    }
  }
  return out;
}

// Trace over the first tensor factor.
inline Matrix partial_trace_first(const Matrix& mat, std::int64_t dim_a,
                                  std::int64_t dim_b) {
  if (mat.rows() != dim_a * dim_b || mat.cols() != dim_a * dim_b) {
    throw std::invalid_argument("partial_trace dimension mismatch");
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (std::int64_t a = 0; a < dim_a; ++a) {
    out += mat.block(a * dim_b, a * dim_b, dim_b, dim_b);
  }
  return out;
}

inline double hermiticity_defect(const Matrix& mat) {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& mat, double tol = 1e-12) {
  return mat.rows() == mat.cols() && hermiticity_defect(mat) <= tol;
}

// All eigenvalues of a Hermitian matrix, ascending. Rejects matrices that are
// not Hermitian within herm_tol.
inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& mat,
                                             double herm_tol = 1e-10) {
  if (mat.rows() != mat.cols()) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix not square");
  }
  if (hermiticity_defect(mat) > herm_tol) {
    throw std::invalid_argument("hermitian_eigenvalues: input not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(mat,
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian eigensolver failed to converge");
  }
  return solver.eigenvalues();
}

inline double min_eigenvalue(const Matrix& mat, double herm_tol = 1e-10) {
  return hermitian_eigenvalues(mat, herm_tol)(0);
}

inline bool is_psd(const Matrix& mat, double tol = 1e-10) {
  return min_eigenvalue(mat) >= -tol;
}

// Tr(A^dagger B)
inline Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("hs_inner dimension mismatch");
  }
  return (a.adjoint() * b).trace();
}

// ----------------------------------------------------------------------------
// Matrix text format: header "dims r c", then row-major "re im" pairs with 17
// significant digits. Embedded in map files and certificates.

inline std::string format_double17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void save_matrix_text(std::ostream& os, const Matrix& mat) {
  os << "dims " << mat.rows() << " " << mat.cols() << "\n";
  for (Eigen::Index r = 0; r < mat.rows(); ++r) {
    for (Eigen::Index c = 0; c < mat.cols(); ++c) {
      os << format_double17(mat(r, c).real()) << " "
         << format_double17(mat(r, c).imag()) << "\n";
    }
  }
}

inline Matrix load_matrix_text(std::istream& is) {
  std::string tag;
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> tag >> rows >> cols) || tag != "dims" || rows < 1 || cols < 1) {
    throw std::runtime_error("matrix text: bad header");
  }
  Matrix mat(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double re = 0, im = 0;
      if (!(is >> re >> im)) {
        throw std::runtime_error("matrix text: truncated entries");
      }
      mat(r, c) = Complex(re, im);
    }
  }
  return mat;
}

}  // namespace pptes
