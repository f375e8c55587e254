#pragma once

// Finite-dimensional model of a Hilbert scale generated by a diagonal
// positive operator A = diag(a_1..a_N), a_j >= 1. Every space H_p is C^N
// with the weighted inner product <x,y>_p = sum_j a_j^p x_j conj(y_j).

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hsf {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Signed chain index p of the space H_p; 0 is the pivot space.
using SpaceIndex = int;

// Largest |p| for which weight powers a_j^p are evaluated. Keeps
// exp(p*log a_j) inside binary64 range for the shipped weight formulas.
inline constexpr int kMaxIndexMagnitude = 16;

inline void check_index(SpaceIndex p) {
  if (p < -kMaxIndexMagnitude || p > kMaxIndexMagnitude)
    throw std::invalid_argument("space index out of supported range [-16,16]: " +
                                std::to_string(p));
}

struct ScaleSpec {
  std::vector<double> weights;  // a_1..a_N, each >= 1
  int truncation = 0;           // N
  std::string weight_formula;   // how the weights were generated

  int n() const { return truncation; }

  double weight(int j) const { return weights[static_cast<size_t>(j)]; }

  // a_j^p, j zero-based. Half powers arise inside the Berezanskii maps,
  // hence the double-valued exponent.
  double weight_power(int j, double p) const {
    double w = std::pow(weights[static_cast<size_t>(j)], p);
    if (!std::isfinite(w))
      throw std::overflow_error("weight power overflow: a_j^" + std::to_string(p));
    return w;
  }

  // diag(a_j^p) as a real vector.
  RealVector weight_powers(double p) const {
    RealVector d(truncation);
    for (int j = 0; j < truncation; ++j) d[j] = weight_power(j, p);
    return d;
  }
};

// Operator between two spaces of the chain, stored in the canonical
// coordinates. Norms and adjoints are taken with the declared indices.
struct ChainOperator {
  Matrix matrix;
  SpaceIndex source_index = 0;
  SpaceIndex target_index = 0;
};

inline ScaleSpec make_scale_explicit(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("truncation must be >= 1");
  for (double a : weights) {
    if (!std::isfinite(a)) throw std::invalid_argument("non-finite weight");
    if (a < 1.0) throw std::invalid_argument("weight below 1");
  }
  ScaleSpec s;
  s.weights = weights;
  s.truncation = static_cast<int>(weights.size());
  s.weight_formula = "explicit";
  return s;
}

// formula in {linear, shifted_quadratic, exponential, constant}.
inline ScaleSpec make_scale(const std::string& formula, int n) {
  if (n < 1) throw std::invalid_argument("truncation must be >= 1");
  std::vector<double> w(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    double a;
    if (formula == "linear")
      a = static_cast<double>(j);
    else if (formula == "shifted_quadratic")
      a = 1.0 + static_cast<double>(j) * j;
    else if (formula == "exponential")
      a = std::ldexp(1.0, j);  // 2^j
    else if (formula == "constant")
      a = 1.0;
    else
      throw std::invalid_argument("unknown weight formula: " + formula);
    w[static_cast<size_t>(j - 1)] = a;
  }
  ScaleSpec s = make_scale_explicit(w);
  s.weight_formula = formula;
  return s;
}

inline void check_length(const ScaleSpec& scale, const Vector& x) {
  if (x.size() != scale.truncation)
    throw std::invalid_argument("vector length does not match truncation");
}

// <x,y>_p = sum_j a_j^p x_j conj(y_j); conjugate-linear in y.
inline Complex inner_product(const ScaleSpec& scale, SpaceIndex p,
                             const Vector& x, const Vector& y) {
  check_length(scale, x);
  check_length(scale, y);
  check_index(p);
  Complex acc = 0.0;
  for (int j = 0; j < scale.truncation; ++j)
    acc += scale.weight_power(j, p) * x[j] * std::conj(y[j]);
  return acc;
}

inline double norm(const ScaleSpec& scale, SpaceIndex p, const Vector& x) {
  double s = 0.0;
  check_length(scale, x);
  check_index(p);
  for (int j = 0; j < scale.truncation; ++j)
    s += scale.weight_power(j, p) * std::norm(x[j]);
  return std::sqrt(s);
}

// iota_{r,p}: H_r -> H_p, adjoint of the inclusion H_p subset H_r, r <= p.
// Defined by <f,x>_r = <iota_{r,p} f, x>_p; coordinates a_j^{r-p} f_j.
inline Vector inclusion_adjoint(const ScaleSpec& scale, SpaceIndex r,
                                SpaceIndex p, const Vector& f) {
  if (r > p) throw std::invalid_argument("not an inclusion direction (need r <= p)");
  check_length(scale, f);
  check_index(r);
  check_index(p);
  Vector g(scale.truncation);
  for (int j = 0; j < scale.truncation; ++j)
    g[j] = scale.weight_power(j, r - p) * f[j];
  return g;
}

// Coordinate matrix of iota_{r,p}.
inline Matrix inclusion_adjoint_matrix(const ScaleSpec& scale, SpaceIndex r,
                                       SpaceIndex p) {
  if (r > p) throw std::invalid_argument("not an inclusion direction (need r <= p)");
  check_index(r);
  check_index(p);
  return scale.weight_powers(static_cast<double>(r - p))
      .cast<Complex>()
      .asDiagonal();
}

// Unitary I_{p,r} = B^r F^p : H_p -> H_r; coordinates a_j^{(p-r)/2} x_j.
inline Vector berezanskii_map(const ScaleSpec& scale, SpaceIndex p,
                              SpaceIndex r, const Vector& x) {
  check_length(scale, x);
  check_index(p);
  check_index(r);
  Vector y(scale.truncation);
  for (int j = 0; j < scale.truncation; ++j)
    y[j] = scale.weight_power(j, 0.5 * (p - r)) * x[j];
  return y;
}

inline Matrix berezanskii_matrix(const ScaleSpec& scale, SpaceIndex p,
                                 SpaceIndex r) {
  check_index(p);
  check_index(r);
  return scale.weight_powers(0.5 * (p - r)).cast<Complex>().asDiagonal();
}

// I_{p,r} is a genuine Berezanskii isomorphism when (p-r)/2 is an integer;
// for odd p-r it is the half-power extension.
inline bool is_berezanskii(SpaceIndex p, SpaceIndex r) {
  return (p - r) % 2 == 0;
}

// Pivot adjoint of T in B(H_p, H_q): the unique T* with
// <alpha, T x>_0 = <T* alpha, x>_0, an element of B(H_{-q}, H_{-p}).
// In canonical coordinates the three factors of I_{p,-p} T^adj I_{-q,q}
// cancel to the plain conjugate transpose, which is used here; the
// factored form is kept as a test oracle.
inline ChainOperator pivot_adjoint(const ChainOperator& t) {
  ChainOperator out;
  out.matrix = t.matrix.adjoint();
  out.source_index = -t.target_index;
  out.target_index = -t.source_index;
  return out;
}

// Operator norm of T between its declared weighted spaces.
inline double chain_operator_norm(const ScaleSpec& scale, const ChainOperator& t) {
  RealVector wt = scale.weight_powers(0.5 * t.target_index);
  RealVector ws = scale.weight_powers(-0.5 * t.source_index);
  Matrix m = wt.cast<Complex>().asDiagonal() * t.matrix *
             ws.cast<Complex>().asDiagonal();
  return m.jacobiSvd().singularValues()[0];
}

// Index of the conjugate dual of H_p with central space H_pivot: 2*pivot - p.
inline SpaceIndex dual_index(SpaceIndex p, SpaceIndex pivot) {
  if (pivot > p) throw std::invalid_argument("pivot must satisfy pivot <= p");
  return 2 * pivot - p;
}

// A_p = B^p F^{2+p} = I_{2+p,p} in B(H_{2+p}, H_p); diag(a_j) for every p.
inline ChainOperator shifted_generator(const ScaleSpec& scale, SpaceIndex p) {
  check_index(p);
  check_index(p + 2);
  ChainOperator t;
  t.matrix = scale.weight_powers(1.0).cast<Complex>().asDiagonal();
  t.source_index = p + 2;
  t.target_index = p;
  return t;
}

}  // namespace hsf
