#pragma once

// Shared test helpers: golden-file loader, an independent matrix exponential
// and seeded random generators.

#include "ckt/linalg.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef CKT_TEST_DATA_DIR
#define CKT_TEST_DATA_DIR "tests/data"
#endif

namespace ckt::test {

/// Golden files hold named blocks:
///   name rows cols   followed by rows of "re im" pairs (complex matrix)
///   name n           followed by one line of n reals
struct Golden {
  std::map<std::string, ComplexMatrix> matrices;
  std::map<std::string, std::vector<double>> vectors;

  const ComplexMatrix& matrix(const std::string& k) const { return matrices.at(k); }
  const std::vector<double>& vector(const std::string& k) const { return vectors.at(k); }
  double scalar(const std::string& k) const { return vectors.at(k).at(0); }
};

inline Golden load_golden(const std::string& file) {
  const std::string path = std::string(CKT_TEST_DATA_DIR) + "/" + file;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing golden file " + path);
  Golden g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream head(line);
    std::string name;
    long a = 0, b = -1;
    head >> name >> a;
    if (!(head >> b)) b = -1;
    if (b < 0) {
      std::vector<double> v(static_cast<std::size_t>(a));
      for (auto& x : v) in >> x;
      g.vectors[name] = v;
    } else {
      ComplexMatrix m(a, b);
      for (long r = 0; r < a; ++r)
        for (long c = 0; c < b; ++c) {
          double re = 0, im = 0;
          in >> re >> im;
          m(r, c) = Complex(re, im);
        }
      g.matrices[name] = m;
    }
    std::getline(in, line);
  }
  return g;
}

/// exp(a) by scaling and squaring of a truncated Taylor series. Deliberately
/// independent of the eigendecomposition route used by the library.
inline ComplexMatrix taylor_expm(const ComplexMatrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const ComplexMatrix x = a / std::ldexp(1.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline ComplexVector random_state(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) a(i, k) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace ckt::test
