#include "dyngeo/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "dyngeo/errors.hpp"

namespace dyngeo::quad {

namespace {

// Boost stores the non-negative half of the abscissae on [-1, 1].
template <unsigned N>
Rule rule_on_unit() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& abs = G::abscissa();
  const auto& wts = G::weights();
  Rule r;
  for (std::size_t i = 0; i < abs.size(); ++i) {
    const double x = abs[i];
    const double w = wts[i];
    if (x == 0.0) {
      r.nodes.push_back(0.5);
      r.weights.push_back(0.5 * w);
    } else {
      r.nodes.push_back(0.5 * (1.0 - x));
      r.weights.push_back(0.5 * w);
      r.nodes.push_back(0.5 * (1.0 + x));
      r.weights.push_back(0.5 * w);
    }
  }
  return r;
}

}  // namespace

Rule gauss_legendre(int n) {
  switch (n) {
    case 4: return rule_on_unit<4>();
    case 8: return rule_on_unit<8>();
    case 16: return rule_on_unit<16>();
    case 32: return rule_on_unit<32>();
    default: throw InvalidArgument("gauss_legendre: unsupported node count");
  }
}

Rule composite_gauss_legendre(int panels) {
  if (panels < 1) throw InvalidArgument("composite_gauss_legendre: panels must be >= 1");
  const Rule base = rule_on_unit<16>();
  Rule r;
  const double width = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      r.nodes.push_back((p + base.nodes[i]) * width);
      r.weights.push_back(base.weights[i] * width);
    }
  }
  return r;
}

}  // namespace dyngeo::quad
