#ifndef ETCABS_TESTS_HELPERS_HPP_
#define ETCABS_TESTS_HELPERS_HPP_

#include <random>

#include "etcabs/care.hpp"
#include "etcabs/matexp.hpp"
#include "etcabs/types.hpp"

namespace etcabs::test {

// The second-order benchmark plant used throughout the tests.
inline PlantSpec bench_plant() {
  PlantSpec p;
  p.A = Matrix{{0, 1}, {-2, 3}};
  p.B = Matrix{{0}, {1}};
  p.E = Matrix{{0}, {1}};
  p.W = 0.001;
  p.gamma = 100;
  p.beta = 0.25;
  return p;
}

inline const EtcDesign& bench_design() {
  static EtcDesign d = make_design(bench_plant(), 1.0);
  return d;
}

inline Matrix random_matrix(std::mt19937_64& rng, int r, int c,
                            double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

inline Matrix random_spd(std::mt19937_64& rng, int n, double ridge = 0.1) {
  Matrix m = random_matrix(rng, n, n);
  return m * m.transpose() + ridge * Matrix::Identity(n, n);
}

}  // namespace etcabs::test

#endif
