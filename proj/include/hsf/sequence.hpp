#pragma once

// Generators for the sequences psi = (psi_1..psi_M) in H_m that the
// frame and propagation studies operate on.

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "hsf/rng.hpp"
#include "hsf/scale.hpp"

namespace hsf {

struct SequenceFamily {
  Matrix vectors;            // N x M, column k is psi_k
  SpaceIndex ambient_index = 0;
  std::string label;

  // generator parameters, kept for reports and bound oracles
  double exponent = 0.0;
  std::uint64_t seed = 0;

  int count() const { return static_cast<int>(vectors.cols()); }
  Vector column(int k) const { return vectors.col(k); }
};

inline SequenceFamily canonical_basis(const ScaleSpec& scale, SpaceIndex m) {
  check_index(m);
  SequenceFamily f;
  f.vectors = Matrix::Identity(scale.truncation, scale.truncation);
  f.ambient_index = m;
  f.label = "canonical_basis";
  return f;
}

// Columns a_k^s e_k. With s = -m/2 this is an orthonormal basis of H_m.
inline SequenceFamily weighted_basis(const ScaleSpec& scale, SpaceIndex m,
                                     double s) {
  check_index(m);
  SequenceFamily f;
  f.vectors = scale.weight_powers(s).cast<Complex>().asDiagonal();
  f.ambient_index = m;
  f.label = "weighted_basis(s=" + std::to_string(s) + ")";
  f.exponent = s;
  return f;
}

inline SequenceFamily orthonormal_basis(const ScaleSpec& scale, SpaceIndex m) {
  SequenceFamily f = weighted_basis(scale, m, -0.5 * m);
  f.label = "orthonormal_basis";
  return f;
}

// Condition number of T as an operator on H_m.
inline double condition_number_on(const ScaleSpec& scale, SpaceIndex m,
                                  const Matrix& t) {
  RealVector w = scale.weight_powers(0.5 * m);
  Matrix rep = w.cast<Complex>().asDiagonal() * t *
               w.cwiseInverse().cast<Complex>().asDiagonal();
  auto sv = rep.jacobiSvd().singularValues();
  double smin = sv[sv.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / smin;
}

// Riesz basis psi_k = T e_k with (e_k) an orthonormal basis of H_m.
inline SequenceFamily riesz_from_operator(const ScaleSpec& scale, SpaceIndex m,
                                          const ChainOperator& t) {
  if (t.matrix.rows() != scale.truncation || t.matrix.cols() != scale.truncation)
    throw std::invalid_argument("operator must be square of size N");
  if (t.source_index != m || t.target_index != m)
    throw std::invalid_argument("operator must be declared on (m,m)");
  if (condition_number_on(scale, m, t.matrix) > 1e12)
    throw std::invalid_argument("operator is numerically singular");
  SequenceFamily f;
  f.vectors = t.matrix * orthonormal_basis(scale, m).vectors;
  f.ambient_index = m;
  f.label = "riesz_from_operator";
  return f;
}

// Largest eigenvalue of the H_m frame operator of the columns of psi.
inline double bessel_bound(const ScaleSpec& scale, SpaceIndex m,
                           const Matrix& psi) {
  RealVector w = scale.weight_powers(0.5 * m);
  Matrix a = w.cast<Complex>().asDiagonal() * psi;
  auto sv = a.jacobiSvd().singularValues();
  double top = sv.size() > 0 ? sv[0] : 0.0;
  return top * top;
}

// M complex-normal columns, rescaled so the H_m Bessel bound is 1.
inline SequenceFamily random_bessel(const ScaleSpec& scale, SpaceIndex m,
                                    int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  check_index(m);
  Rng rng(seed);
  SequenceFamily f;
  f.vectors = rng.complex_normal_matrix(scale.truncation, count);
  double b = bessel_bound(scale, m, f.vectors);
  if (b > 0.0) f.vectors /= std::sqrt(b);
  f.ambient_index = m;
  f.label = "random_bessel(M=" + std::to_string(count) +
            ",seed=" + std::to_string(seed) + ")";
  f.seed = seed;
  return f;
}

// Column-wise image under I_{p,r}; the result lives in H_r.
inline SequenceFamily transform_sequence(const ScaleSpec& scale,
                                         const SequenceFamily& seq,
                                         SpaceIndex p, SpaceIndex r) {
  SequenceFamily out;
  out.vectors = berezanskii_matrix(scale, p, r) * seq.vectors;
  out.ambient_index = r;
  out.label = seq.label + " |> I_{" + std::to_string(p) + "," +
              std::to_string(r) + "}";
  out.exponent = seq.exponent;
  out.seed = seq.seed;
  return out;
}

}  // namespace hsf
