#pragma once

#include <vector>

namespace dyngeo::quad {

struct Rule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// Composite Gauss-Legendre on [0, 1]: `panels` equal panels of a 16-point rule.
Rule composite_gauss_legendre(int panels);

// Plain n-point Gauss-Legendre on [0, 1] (n in {4, 8, 16, 32}).
Rule gauss_legendre(int n);

}  // namespace dyngeo::quad
