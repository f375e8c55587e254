#pragma once

// Deterministic random sources. The generator is std::mt19937_64 (fully
// specified by the standard) and normals come from a hand-rolled
// Box-Muller transform, so fixtures are reproducible from seeds across
// platforms and reimplementations.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace hsf {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0,1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::complex<double> complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  Eigen::VectorXcd complex_normal_vector(int n) {
    Eigen::VectorXcd v(n);
    for (int j = 0; j < n; ++j) v[j] = complex_normal();
    return v;
  }

  Eigen::MatrixXcd complex_normal_matrix(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) m(r, c) = complex_normal();
    return m;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hsf
