#pragma once

// Hermiticity-preserving maps as coefficient matrices over the normalized
// Pauli-string basis: application, Choi matrices, CP analysis with Kraus
// extraction, the tensor-sum positive-map builder and its distinguished
// one-negative-coefficient family, positivity probing, and witness values.

#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <variant>
#include <vector>

#include "pptes/dense.hpp"
#include "pptes/lattice.hpp"
#include "pptes/rational.hpp"
#include "pptes/states.hpp"

namespace pptes {

// Coefficients already diagonal in the Pauli-string basis.
struct DiagonalCoeffs {
  std::vector<Rational> lambda;  // indexed by flat Pauli-string index
};

// Generic Hermitian coefficient matrix C_Lambda.
struct FullCoeffs {
  Matrix c;
};

// Factor data for Lambda = Lambda_1 (x) id + id (x) Lambda_2 with hermitian
// diagonal bases; exactly one negative coefficient, sitting in lambda2.
struct TensorSumSpec {
  LatticeShape shape;             // (m, n) split of the N qubits
  std::vector<Rational> lambda1;  // over L^(m), size 4^m
  std::vector<Rational> lambda2;  // over L^(n), size 4^n
  std::int64_t neg_index = 0;     // position of the negative entry in lambda2
};

// A map on M_{2^k}(C), written Lambda[X] = sum_{ki} lambda_{ki} F_k X F_i^dag
// with F the Pauli strings / sqrt(2^k).
struct MapRep {
  int num_qubits = 1;
  std::optional<LatticeShape> split;          // (m, n) when meaningful
  std::variant<DiagonalCoeffs, FullCoeffs> coeffs;
  std::optional<TensorSumSpec> tensor_sum;    // positivity provenance

  std::int64_t dim() const { return 1LL << num_qubits; }
  std::int64_t basis_size() const { return 1LL << (2 * num_qubits); }

  bool is_diagonal() const {
    return std::holds_alternative<DiagonalCoeffs>(coeffs);
  }
  const std::vector<Rational>& diagonal() const {
    return std::get<DiagonalCoeffs>(coeffs).lambda;
  }
  const Matrix& full() const { return std::get<FullCoeffs>(coeffs).c; }
};

inline MapRep make_diagonal_map(int num_qubits, std::vector<Rational> lambda) {
  if (static_cast<std::int64_t>(lambda.size()) != (1LL << (2 * num_qubits))) {
    throw std::invalid_argument("diagonal coefficient vector must have 4^k entries");
  }
  return MapRep{num_qubits, std::nullopt, DiagonalCoeffs{std::move(lambda)},
                std::nullopt};
}

inline MapRep make_full_map(int num_qubits, Matrix c) {
  const std::int64_t size = 1LL << (2 * num_qubits);
  if (c.rows() != size || c.cols() != size) {
    throw std::invalid_argument("coefficient matrix must be 4^k x 4^k");
  }
  if (!is_hermitian(c, 1e-12)) {
    throw std::invalid_argument("coefficient matrix must be Hermitian to 1e-12");
  }
  return MapRep{num_qubits, std::nullopt, FullCoeffs{std::move(c)},
                std::nullopt};
}

// The identity map: single coefficient d at the (0...0, 0...0) slot.
inline MapRep identity_map(int num_qubits) {
  std::vector<Rational> lambda(static_cast<std::size_t>(1) << (2 * num_qubits),
                               Rational(0));
  lambda[0] = Rational(1LL << num_qubits);
  return make_diagonal_map(num_qubits, std::move(lambda));
}

// Single-qubit transposition: diagonal with lambda = (1, 1, -1, 1).
inline MapRep transposition_map_1q() {
  return make_diagonal_map(1, {Rational(1), Rational(1), Rational(-1), Rational(1)});
}

// ----------------------------------------------------------------------------
// Map application and Choi matrix.

inline Matrix apply_map(const MapRep& rep, const Matrix& x) {
  const std::int64_t d = rep.dim();
  if (x.rows() != d || x.cols() != d) {
    throw std::invalid_argument("apply_map: operand must be 2^k x 2^k");
  }
  Matrix out = Matrix::Zero(d, d);
  const double inv_d = 1.0 / static_cast<double>(d);
  if (rep.is_diagonal()) {
    const auto& lambda = rep.diagonal();
    for (std::int64_t s = 0; s < rep.basis_size(); ++s) {
      if (lambda[s].numerator() == 0) continue;
      const Matrix sigma = pauli_string(multi_index_from_flat(rep.num_qubits, s));
      out.noalias() += (to_double(lambda[s]) * inv_d) * (sigma * x * sigma);
    }
  } else {
    const Matrix& c = rep.full();
    std::vector<Matrix> sigma(static_cast<std::size_t>(rep.basis_size()));
    for (std::int64_t s = 0; s < rep.basis_size(); ++s) {
      sigma[s] = pauli_string(multi_index_from_flat(rep.num_qubits, s));
    }
    for (std::int64_t k = 0; k < rep.basis_size(); ++k) {
      Matrix right = Matrix::Zero(d, d);
      bool any = false;
      for (std::int64_t i = 0; i < rep.basis_size(); ++i) {
        if (std::abs(c(k, i)) < 1e-300) continue;
        right.noalias() += c(k, i) * sigma[i].adjoint();
        any = true;
      }
      if (any) out.noalias() += inv_d * (sigma[k] * x * right);
    }
  }
  return out;
}

// (id (x) Lambda)[P_+^{2^k}]. For diagonal coefficients the analytic form
// (1/2^k) sum_s lambda_s P_s is computed as well and both routes must agree.
inline Matrix choi(const MapRep& rep) {
  const std::int64_t d = rep.dim();
  Matrix out = Matrix::Zero(d * d, d * d);
  const double inv_d = 1.0 / static_cast<double>(d);
  Matrix unit = Matrix::Zero(d, d);
  for (std::int64_t i = 0; i < d; ++i) {
    for (std::int64_t j = 0; j < d; ++j) {
      unit(i, j) = 1.0;
      out.block(i * d, j * d, d, d) = inv_d * apply_map(rep, unit);
      unit(i, j) = 0.0;
    }
  }
  if (rep.is_diagonal()) {
    const auto& lambda = rep.diagonal();
    Matrix analytic = Matrix::Zero(d * d, d * d);
    for (std::int64_t s = 0; s < rep.basis_size(); ++s) {
      if (lambda[s].numerator() == 0) continue;
      const Vector psi = bell_vector(multi_index_from_flat(rep.num_qubits, s));
      analytic.noalias() +=
          (to_double(lambda[s]) * inv_d) * (psi * psi.adjoint());
    }
    if ((out - analytic).cwiseAbs().maxCoeff() > 1e-10) {
      throw std::runtime_error("choi: analytic and dense routes disagree");
    }
  }
  return out;
}

// ----------------------------------------------------------------------------
// Complete positivity: C_Lambda >= 0, with Kraus operators from its
// eigendecomposition.

struct KrausSet {
  std::vector<Matrix> operators;

  bool is_trace_preserving(double tol = 1e-10) const {
    if (operators.empty()) return false;
    const std::int64_t d = operators.front().rows();
    Matrix acc = Matrix::Zero(d, d);
    for (const auto& k : operators) acc.noalias() += k.adjoint() * k;
    return (acc - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
  }
};

struct CpAnalysis {
  bool is_cp = false;
  double min_eig = 0.0;                     // of C_Lambda
  std::optional<Rational> min_eig_exact;    // diagonal reps only
  std::optional<KrausSet> kraus;            // present iff is_cp
};

inline CpAnalysis cp_analysis(const MapRep& rep, double tol = 1e-10) {
  CpAnalysis result;
  const std::int64_t d = rep.dim();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  if (rep.is_diagonal()) {
    const auto& lambda = rep.diagonal();
    Rational min_l = lambda[0];
    for (const auto& l : lambda) min_l = std::min(min_l, l);
    result.min_eig_exact = min_l;
    result.min_eig = to_double(min_l);
    result.is_cp = result.min_eig >= -tol;
    if (result.is_cp) {
      KrausSet kraus;
      for (std::int64_t s = 0; s < rep.basis_size(); ++s) {
        if (lambda[s] <= Rational(0)) continue;
        kraus.operators.push_back(
            std::sqrt(to_double(lambda[s])) * inv_sqrt_d *
            pauli_string(multi_index_from_flat(rep.num_qubits, s)));
      }
      result.kraus = std::move(kraus);
    }
    return result;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rep.full());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("cp_analysis: eigensolver failed");
  }
  result.min_eig = solver.eigenvalues()(0);
  result.is_cp = result.min_eig >= -tol;
  if (result.is_cp) {
    KrausSet kraus;
    for (std::int64_t j = 0; j < rep.basis_size(); ++j) {
      const double lj = solver.eigenvalues()(j);
      if (lj <= tol) continue;
      Matrix g = Matrix::Zero(d, d);
      for (std::int64_t k = 0; k < rep.basis_size(); ++k) {
        g.noalias() += solver.eigenvectors()(k, j) * inv_sqrt_d *
                       pauli_string(multi_index_from_flat(rep.num_qubits, k));
      }
      kraus.operators.push_back(std::sqrt(lj) * g);
    }
    result.kraus = std::move(kraus);
  }
  return result;
}

// Splits C_Lambda into positive and negative parts: Lambda = cp_plus - cp_minus.
inline std::pair<MapRep, MapRep> cp_difference(const MapRep& rep) {
  if (rep.is_diagonal()) {
    std::vector<Rational> plus(rep.diagonal().size(), Rational(0));
    std::vector<Rational> minus(rep.diagonal().size(), Rational(0));
    for (std::size_t s = 0; s < rep.diagonal().size(); ++s) {
      const Rational& l = rep.diagonal()[s];
      (l >= Rational(0) ? plus[s] : minus[s]) = l >= Rational(0) ? l : -l;
    }
    return {make_diagonal_map(rep.num_qubits, std::move(plus)),
            make_diagonal_map(rep.num_qubits, std::move(minus))};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rep.full());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("cp_difference: eigensolver failed");
  }
  Matrix plus = Matrix::Zero(rep.basis_size(), rep.basis_size());
  Matrix minus = Matrix::Zero(rep.basis_size(), rep.basis_size());
  for (std::int64_t j = 0; j < rep.basis_size(); ++j) {
    const double lj = solver.eigenvalues()(j);
    const Matrix proj = solver.eigenvectors().col(j) *
                        solver.eigenvectors().col(j).adjoint();
    if (lj >= 0) {
      plus.noalias() += lj * proj;
    } else {
      minus.noalias() += -lj * proj;
    }
  }
  return {make_full_map(rep.num_qubits, std::move(plus)),
          make_full_map(rep.num_qubits, std::move(minus))};
}

// ----------------------------------------------------------------------------
// Tensor-sum positive maps.

// Validates the one-negative-coefficient hypothesis; every other coefficient
// must be >= |lambda2[neg_index]|, which in particular rules out zeros.
inline void validate_tensor_sum_spec(const TensorSumSpec& spec) {
  const std::int64_t size1 = 1LL << (2 * spec.shape.m);
  const std::int64_t size2 = 1LL << (2 * spec.shape.n);
  if (static_cast<std::int64_t>(spec.lambda1.size()) != size1 ||
      static_cast<std::int64_t>(spec.lambda2.size()) != size2) {
    throw std::invalid_argument("tensor-sum factor vectors must have 4^m and 4^n entries");
  }
  if (spec.neg_index < 0 || spec.neg_index >= size2) {
    throw std::invalid_argument("tensor-sum negative index out of range");
  }
  const Rational neg = spec.lambda2[spec.neg_index];
  if (neg >= Rational(0)) {
    throw std::invalid_argument(
        "tensor-sum hypothesis violated: lambda2[" +
        std::to_string(spec.neg_index) + "] = " + format_rational(neg) +
        " is not negative");
  }
  const Rational bound = -neg;
  for (std::int64_t i = 0; i < size1; ++i) {
    if (spec.lambda1[i] < Rational(0)) {
      throw std::invalid_argument(
          "tensor-sum hypothesis violated: lambda1[" + std::to_string(i) +
          "] = " + format_rational(spec.lambda1[i]) +
          " is a second negative entry");
    }
    if (spec.lambda1[i] < bound) {
      throw std::invalid_argument(
          "tensor-sum hypothesis violated: lambda1[" + std::to_string(i) +
          "] = " + format_rational(spec.lambda1[i]) + " < |lambda2[" +
          std::to_string(spec.neg_index) + "]| = " + format_rational(bound));
    }
  }
  for (std::int64_t j = 0; j < size2; ++j) {
    if (j == spec.neg_index) continue;
    if (spec.lambda2[j] < Rational(0)) {
      throw std::invalid_argument(
          "tensor-sum hypothesis violated: lambda2[" + std::to_string(j) +
          "] = " + format_rational(spec.lambda2[j]) +
          " is a second negative entry");
    }
    if (spec.lambda2[j] < bound) {
      throw std::invalid_argument(
          "tensor-sum hypothesis violated: lambda2[" + std::to_string(j) +
          "] = " + format_rational(spec.lambda2[j]) + " < |lambda2[" +
          std::to_string(spec.neg_index) + "]| = " + format_rational(bound));
    }
  }
}

// Lambda = Lambda_1 (x) id_{2^n} + id_{2^m} (x) Lambda_2, assembled in the
// full N-qubit Pauli basis. The 2^n / 2^m prefactors from re-normalizing the
// factor bases are folded into the coefficients, so the distinguished family
// below comes out with integer coefficients.
inline MapRep tensor_sum_map(const TensorSumSpec& spec) {
  validate_tensor_sum_spec(spec);
  const int num = spec.shape.num_coords();
  std::vector<Rational> lambda(static_cast<std::size_t>(spec.shape.lattice_size()),
                               Rational(0));
  const std::int64_t size2 = 1LL << (2 * spec.shape.n);
  const long long two_n = pow2ll(spec.shape.n);
  const long long two_m = pow2ll(spec.shape.m);
  for (std::int64_t a = 0; a < static_cast<std::int64_t>(spec.lambda1.size()); ++a) {
    lambda[a * size2] += Rational(two_n) * spec.lambda1[a];
  }
  for (std::int64_t b = 0; b < size2; ++b) {
    lambda[b] += Rational(two_m) * spec.lambda2[b];
  }
  MapRep rep = make_diagonal_map(num, std::move(lambda));
  rep.split = spec.shape;
  rep.tensor_sum = spec;
  return rep;
}

// The distinguished family: uniform factors with one sign flip at beta0.
// Composite coefficients are 2 at the origin, 1 on the two zero-axes, -1 at
// (0_m, beta0) and 0 elsewhere.
inline MapRep lambda_beta0(const LatticeShape& shape, const MultiIndex& beta0) {
  if (shape.m < shape.n) {
    throw std::invalid_argument(
        "lambda_beta0 requires m >= n (tensor-sum hypothesis fails otherwise)");
  }
  validate_multi_index(beta0, shape.n);
  if (is_zero_index(beta0)) {
    throw std::invalid_argument("lambda_beta0 requires beta0 != 0");
  }
  TensorSumSpec spec;
  spec.shape = shape;
  spec.lambda1.assign(static_cast<std::size_t>(1) << (2 * shape.m),
                      Rational(1, pow2ll(shape.n)));
  spec.lambda2.assign(static_cast<std::size_t>(1) << (2 * shape.n),
                      Rational(1, pow2ll(shape.m)));
  spec.neg_index = flat_from_multi_index(beta0);
  spec.lambda2[spec.neg_index] = Rational(-1, pow2ll(shape.m));
  return tensor_sum_map(spec);
}

// Returns beta0 when the map is exactly a member of the distinguished family.
inline std::optional<MultiIndex> family_beta0_of(const MapRep& rep) {
  if (!rep.tensor_sum.has_value() || !rep.is_diagonal()) return std::nullopt;
  const TensorSumSpec& spec = *rep.tensor_sum;
  try {
    const MultiIndex beta0 = multi_index_from_flat(spec.shape.n, spec.neg_index);
    if (lambda_beta0(spec.shape, beta0).diagonal() == rep.diagonal()) {
      return beta0;
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

// ----------------------------------------------------------------------------
// Positivity probing: D(phi, psi) = <psi| Lambda[|phi><phi|] |psi>.

// Precomputed evaluation kernel. For diagonal maps the generic route reduces
// to sum_s (lambda_s / d) |<psi| sigma_s |phi>|^2; maps built from a
// tensor-sum construction additionally evaluate the factor form
//   sum_mu lambda1_mu |Tr(F1_mu Phi Psi^dag)|^2
//     + sum_nu lambda2_nu |Tr(F2_nu (Psi^dag Phi)^T)|^2
// and both routes must agree to 1e-10. Immutable after construction, so one
// kernel may be shared across probe threads.
class ProbeKernel {
 public:
  explicit ProbeKernel(const MapRep& rep) : rep_(rep) {
    if (rep.is_diagonal()) {
      const auto& lambda = rep.diagonal();
      for (std::int64_t s = 0; s < rep.basis_size(); ++s) {
        if (lambda[s].numerator() == 0) continue;
        diag_terms_.emplace_back(
            to_double(lambda[s]),
            pauli_string(multi_index_from_flat(rep.num_qubits, s)));
      }
    }
    if (rep.tensor_sum.has_value()) {
      const TensorSumSpec& spec = *rep.tensor_sum;
      const double inv_sqrt_d1 = 1.0 / std::sqrt(std::pow(2.0, spec.shape.m));
      const double inv_sqrt_d2 = 1.0 / std::sqrt(std::pow(2.0, spec.shape.n));
      for (std::int64_t a = 0; a < static_cast<std::int64_t>(spec.lambda1.size()); ++a) {
        factor1_.emplace_back(
            to_double(spec.lambda1[a]),
            (inv_sqrt_d1 * pauli_string(multi_index_from_flat(spec.shape.m, a)))
                .eval());
      }
      for (std::int64_t b = 0; b < static_cast<std::int64_t>(spec.lambda2.size()); ++b) {
        factor2_.emplace_back(
            to_double(spec.lambda2[b]),
            (inv_sqrt_d2 * pauli_string(multi_index_from_flat(spec.shape.n, b)))
                .eval());
      }
    }
  }

  double operator()(const Vector& phi, const Vector& psi) const {
    const std::int64_t d = rep_.dim();
    if (phi.size() != d || psi.size() != d) {
      throw std::invalid_argument("positivity_probe: vector dimension mismatch");
    }
    double generic = 0.0;
    if (rep_.is_diagonal()) {
      for (const auto& [coeff, sigma] : diag_terms_) {
        generic += coeff * std::norm(psi.dot(sigma * phi));
      }
      generic /= static_cast<double>(d);
    } else {
      const Matrix phi_proj = phi * phi.adjoint();
      generic = psi.dot(apply_map(rep_, phi_proj) * psi).real();
    }
    if (rep_.tensor_sum.has_value()) {
      const double analytic = analytic_route(phi, psi);
      if (std::abs(generic - analytic) > 1e-10) {
        throw std::runtime_error(
            "positivity_probe: analytic route disagrees with generic route");
      }
    }
    return generic;
  }

 private:
  double analytic_route(const Vector& phi, const Vector& psi) const {
    const TensorSumSpec& spec = *rep_.tensor_sum;
    const std::int64_t d1 = 1LL << spec.shape.m;
    const std::int64_t d2 = 1LL << spec.shape.n;
    Matrix phi_mat(d1, d2), psi_mat(d1, d2);
    for (std::int64_t i = 0; i < d1; ++i) {
      for (std::int64_t j = 0; j < d2; ++j) {
        phi_mat(i, j) = phi(i * d2 + j);
        psi_mat(i, j) = psi(i * d2 + j);
      }
    }
    const Matrix left = phi_mat * psi_mat.adjoint();                 // d1 x d1
    const Matrix right = (psi_mat.adjoint() * phi_mat).transpose();  // d2 x d2
    double acc = 0.0;
    for (const auto& [coeff, f] : factor1_) {
      acc += coeff * std::norm((f * left).trace());
    }
    for (const auto& [coeff, f] : factor2_) {
      acc += coeff * std::norm((f * right).trace());
    }
    return acc;
  }

  MapRep rep_;
  std::vector<std::pair<double, Matrix>> diag_terms_;
  std::vector<std::pair<double, Matrix>> factor1_, factor2_;
};

inline double positivity_probe(const MapRep& rep, const Vector& phi,
                               const Vector& psi) {
  return ProbeKernel(rep)(phi, psi);
}

inline Vector haar_vector(std::int64_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    v(i) = Complex(gauss(rng), gauss(rng));
  }
  return v / v.norm();
}

// Minimum of D over Haar-random pairs. Samples are drawn in fixed-size chunks
// with per-chunk seeds, so the result depends on (seed, num_samples) only,
// not on the worker count.
inline double probe_minimum(const MapRep& rep, std::int64_t num_samples,
                            std::uint64_t seed, int workers = 1) {
  if (num_samples < 1) {
    throw std::invalid_argument("probe_minimum needs at least one sample");
  }
  const ProbeKernel kernel(rep);
  constexpr std::int64_t kChunk = 250;
  const std::int64_t num_chunks = (num_samples + kChunk - 1) / kChunk;
  const auto run_chunk = [&](std::int64_t chunk) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (chunk + 1)));
    const std::int64_t count =
        std::min(kChunk, num_samples - chunk * kChunk);
    double lo = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < count; ++i) {
      const Vector phi = haar_vector(rep.dim(), rng);
      const Vector psi = haar_vector(rep.dim(), rng);
      lo = std::min(lo, kernel(phi, psi));
    }
    return lo;
  };
  if (workers <= 1 || num_chunks == 1) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::int64_t chunk = 0; chunk < num_chunks; ++chunk) {
      lo = std::min(lo, run_chunk(chunk));
    }
    return lo;
  }
  std::vector<std::future<double>> futures;
  std::atomic<std::int64_t> next{0};
  const int pool = std::min<std::int64_t>(workers, num_chunks);
  for (int w = 0; w < pool; ++w) {
    futures.push_back(std::async(std::launch::async, [&] {
      double lo = std::numeric_limits<double>::infinity();
      for (std::int64_t chunk = next.fetch_add(1); chunk < num_chunks;
           chunk = next.fetch_add(1)) {
        lo = std::min(lo, run_chunk(chunk));
      }
      return lo;
    }));
  }
  double lo = std::numeric_limits<double>::infinity();
  for (auto& f : futures) lo = std::min(lo, f.get());
  return lo;
}

// ----------------------------------------------------------------------------
// Witness values D_Lambda(rho) = Tr(choi(Lambda) rho).

// Exact lattice fast path: (1/2^N) sum_site lambda_site pi_site.
inline Rational lattice_witness(const MapRep& rep, const LatticeState& state) {
  if (!rep.is_diagonal()) {
    throw std::invalid_argument("lattice witness fast path needs a diagonal map");
  }
  if (rep.num_qubits != state.shape.num_coords()) {
    throw std::invalid_argument("lattice witness: map and state sizes differ");
  }
  const auto& lambda = rep.diagonal();
  Rational acc(0);
  for (std::size_t s = 0; s < lambda.size(); ++s) {
    if (state.weights[s] == 0 || lambda[s].numerator() == 0) continue;
    acc += lambda[s] * Rational(state.weights[s], state.denom);
  }
  return acc / Rational(pow2ll(rep.num_qubits));
}

inline void validate_density(const Matrix& rho, double psd_tol = 1e-8,
                             double trace_tol = 1e-10) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("density operator must be square");
  }
  if (std::abs(rho.trace().real() - 1.0) > trace_tol ||
      std::abs(rho.trace().imag()) > trace_tol) {
    throw std::invalid_argument("density operator trace differs from 1");
  }
  if (!is_hermitian(rho, 1e-10)) {
    throw std::invalid_argument("density operator is not Hermitian");
  }
  if (min_eigenvalue(rho) < -psd_tol) {
    throw std::invalid_argument("density operator has a negative eigenvalue");
  }
}

inline double dense_witness(const MapRep& rep, const Matrix& rho,
                            double psd_tol = 1e-8) {
  validate_density(rho, psd_tol);
  const std::int64_t dd = rep.dim() * rep.dim();
  if (rho.rows() != dd) {
    throw std::invalid_argument("dense witness: state dimension mismatch");
  }
  return (choi(rep) * rho).trace().real();
}

// D < 0 certifies entanglement; a band around zero is reported inconclusive.
enum class WitnessClass { entangled, inconclusive };

inline WitnessClass classify_witness(const Rational& d) {
  return d < Rational(0) ? WitnessClass::entangled : WitnessClass::inconclusive;
}

inline WitnessClass classify_witness(double d, double band = 1e-12) {
  return d < -band ? WitnessClass::entangled : WitnessClass::inconclusive;
}

// ----------------------------------------------------------------------------
// Map files:
//   pauli-map v1
//   shape <m> <n>
//   kind diagonal|full
//   family lambda-beta0 <beta0>     (optional provenance)
//   <siteIndex> <p/q>               (diagonal) or matrix text block (full)
//   end

inline void save_map(std::ostream& os, const MapRep& rep) {
  if (!rep.split.has_value()) {
    throw std::invalid_argument("map file requires an (m, n) split");
  }
  os << "pauli-map v1\n";
  os << "shape " << rep.split->m << " " << rep.split->n << "\n";
  os << "kind " << (rep.is_diagonal() ? "diagonal" : "full") << "\n";
  if (const auto beta0 = family_beta0_of(rep)) {
    os << "family lambda-beta0 " << format_multi_index(*beta0) << "\n";
  }
  if (rep.is_diagonal()) {
    for (std::size_t s = 0; s < rep.diagonal().size(); ++s) {
      os << s << " " << format_rational(rep.diagonal()[s]) << "\n";
    }
  } else {
    save_matrix_text(os, rep.full());
  }
  os << "end\n";
}

inline MapRep load_map(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "pauli-map v1") {
    throw std::runtime_error("map file: bad magic line");
  }
  std::string tag, kind;
  int m = 0, n = 0;
  is >> tag >> m >> n;
  if (tag != "shape") throw std::runtime_error("map file: missing shape");
  is >> tag >> kind;
  if (tag != "kind" || (kind != "diagonal" && kind != "full")) {
    throw std::runtime_error("map file: bad kind");
  }
  const LatticeShape shape(m, n);
  std::optional<MultiIndex> family_beta0;
  is >> tag;
  if (tag == "family") {
    std::string family_name, beta0_text;
    is >> family_name >> beta0_text;
    if (family_name != "lambda-beta0") {
      throw std::runtime_error("map file: unknown family " + family_name);
    }
    family_beta0 = parse_multi_index(beta0_text);
    is >> tag;
  }
  MapRep rep;
  if (kind == "diagonal") {
    std::vector<Rational> lambda(
        static_cast<std::size_t>(shape.lattice_size()), Rational(0));
    // `tag` already holds the first site index.
    for (std::int64_t count = 0; count < shape.lattice_size(); ++count) {
      if (count > 0 && !(is >> tag)) {
        throw std::runtime_error("map file: truncated coefficient list");
      }
      std::string value;
      if (!(is >> value)) {
        throw std::runtime_error("map file: missing coefficient value");
      }
      std::int64_t idx = -1;
      try {
        idx = std::stoll(tag);
      } catch (const std::exception&) {
        throw std::runtime_error("map file: bad site index \"" + tag + "\"");
      }
      if (idx < 0 || idx >= shape.lattice_size()) {
        throw std::runtime_error("map file: site index out of range");
      }
      lambda[idx] = parse_rational(value);
    }
    rep = make_diagonal_map(shape.num_coords(), std::move(lambda));
  } else {
    if (tag != "dims") throw std::runtime_error("map file: missing matrix block");
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows != shape.lattice_size() ||
        cols != shape.lattice_size()) {
      throw std::runtime_error("map file: bad matrix dimensions");
    }
    Matrix c(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index col = 0; col < cols; ++col) {
        double re = 0, im = 0;
        if (!(is >> re >> im)) {
          throw std::runtime_error("map file: truncated matrix entries");
        }
        c(r, col) = Complex(re, im);
      }
    }
    rep = make_full_map(shape.num_coords(), std::move(c));
  }
  is >> tag;
  if (tag != "end") throw std::runtime_error("map file: missing end marker");
  rep.split = shape;
  if (family_beta0.has_value()) {
    MapRep family = lambda_beta0(shape, *family_beta0);
    if (!rep.is_diagonal() || family.diagonal() != rep.diagonal()) {
      throw std::runtime_error(
          "map file: family annotation does not match stored coefficients");
    }
    rep.tensor_sum = family.tensor_sum;
  }
  return rep;
}

}  // namespace pptes
