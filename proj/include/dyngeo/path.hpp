#pragma once

#include <functional>
#include <vector>

#include "dyngeo/types.hpp"

namespace dyngeo {

// A C^1 path t -> y(t), t in [0, 1], with its velocity. Paths built by
// concatenation are only piecewise smooth; their junctions are listed in
// knots() and integrators stop on them.
class Path {
 public:
  using Fn = std::function<Vec(double)>;

  Path(Fn position, Fn velocity, std::vector<double> knots = {});

  Vec point(double t) const { return position_(t); }
  Vec velocity(double t) const { return velocity_(t); }
  Vec start() const { return position_(0.0); }
  Vec end() const { return position_(1.0); }
  int dim() const { return static_cast<int>(start().size()); }
  const std::vector<double>& knots() const { return knots_; }

  // The same curve traversed from end to start.
  Path reversed() const;

  // max over probe points of |velocity - central difference of position|.
  double c1_defect(int probes = 64) const;

  static Path constant(const Vec& p);
  static Path line(const Vec& a, const Vec& b);
  // Straight line from a to b plus a sin(pi t) * offset bulge.
  static Path bulge(const Vec& a, const Vec& b, const Vec& offset);
  // `first` on [0, 1/2] then `second` on [1/2, 1].
  static Path concat(const Path& first, const Path& second);
  // Cubic Hermite interpolation through (times, points, velocities); times
  // must start at 0 and end at 1.
  static Path hermite(std::vector<double> times, std::vector<Vec> points, std::vector<Vec> velocities);
  // Circle through `base` around `center`, once, in the (i, j) coordinate
  // plane; counterclockwise in (x^i, x^j) when ccw is true.
  static Path circle(const Vec& base, const Vec& center, int i, int j, bool ccw = true);

 private:
  Fn position_;
  Fn velocity_;
  std::vector<double> knots_;
};

// Quintic smoothstep used for C^2 corners: s(0)=0, s(1)=1, s', s'' vanish at both ends.
double smoothstep5(double t);
double smoothstep5_derivative(double t);

// Polyline through `vertices` (first == last for loops), each leg eased by
// smoothstep5 so the velocity vanishes at the corners.
Path eased_polyline(const std::vector<Vec>& vertices);

}  // namespace dyngeo
