#include "dyngeo/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dyngeo/errors.hpp"

namespace dyngeo {

Path::Path(Fn position, Fn velocity, std::vector<double> knots)
    : position_(std::move(position)), velocity_(std::move(velocity)), knots_(std::move(knots)) {
  std::sort(knots_.begin(), knots_.end());
  knots_.erase(std::remove_if(knots_.begin(), knots_.end(),
                              [](double k) { return !(k > 0.0 && k < 1.0); }),
               knots_.end());
}

Path Path::reversed() const {
  auto pos = position_;
  auto vel = velocity_;
  std::vector<double> k;
  for (double t : knots_) k.push_back(1.0 - t);
  return Path([pos](double t) { return pos(1.0 - t); }, [vel](double t) -> Vec { return -vel(1.0 - t); },
              std::move(k));
}

double Path::c1_defect(int probes) const {
  double worst = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < probes; ++i) {
    const double t = (i + 0.5) / probes;
    bool near_knot = false;
    for (double k : knots_) near_knot = near_knot || std::abs(t - k) < 2 * h;
    if (near_knot) continue;
    const Vec fd = (point(t + h) - point(t - h)) / (2 * h);
    worst = std::max(worst, (fd - velocity(t)).cwiseAbs().maxCoeff());
  }
  return worst;
}

Path Path::constant(const Vec& p) {
  return Path([p](double) { return p; }, [p](double) -> Vec { return Vec::Zero(p.size()); });
}

Path Path::line(const Vec& a, const Vec& b) {
  const Vec d = b - a;
  return Path([a, d](double t) -> Vec { return a + t * d; }, [d](double) { return d; });
}

Path Path::bulge(const Vec& a, const Vec& b, const Vec& offset) {
  const Vec d = b - a;
  const double pi = std::numbers::pi;
  return Path([a, d, offset, pi](double t) -> Vec { return a + t * d + std::sin(pi * t) * offset; },
              [d, offset, pi](double t) -> Vec { return d + pi * std::cos(pi * t) * offset; });
}

Path Path::concat(const Path& first, const Path& second) {
  std::vector<double> k{0.5};
  for (double t : first.knots()) k.push_back(0.5 * t);
  for (double t : second.knots()) k.push_back(0.5 + 0.5 * t);
  auto pos = [first, second](double t) -> Vec {
    return t <= 0.5 ? first.point(2.0 * t) : second.point(2.0 * t - 1.0);
  };
  auto vel = [first, second](double t) -> Vec {
    return t <= 0.5 ? Vec(2.0 * first.velocity(2.0 * t)) : Vec(2.0 * second.velocity(2.0 * t - 1.0));
  };
  return Path(pos, vel, std::move(k));
}

Path Path::hermite(std::vector<double> times, std::vector<Vec> points, std::vector<Vec> velocities) {
  if (times.size() < 2 || times.size() != points.size() || times.size() != velocities.size()) {
    throw InvalidArgument("Path::hermite: need >= 2 matching samples");
  }
  if (times.front() != 0.0 || times.back() != 1.0 ||
      !std::is_sorted(times.begin(), times.end())) {
    throw InvalidArgument("Path::hermite: times must increase from 0 to 1");
  }
  auto locate = [times](double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t i = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    return std::min(i, times.size() - 2);
  };
  auto pos = [=](double t) -> Vec {
    const std::size_t i = locate(t);
    const double h = times[i + 1] - times[i];
    const double s = (t - times[i]) / h;
    const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    return h00 * points[i] + h10 * h * velocities[i] + h01 * points[i + 1] + h11 * h * velocities[i + 1];
  };
  auto vel = [=](double t) -> Vec {
    const std::size_t i = locate(t);
    const double h = times[i + 1] - times[i];
    const double s = (t - times[i]) / h;
    const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
    return (d00 * points[i] + d01 * points[i + 1]) / h + d10 * velocities[i] + d11 * velocities[i + 1];
  };
  std::vector<double> k(times.begin() + 1, times.end() - 1);
  return Path(pos, vel, std::move(k));
}

Path Path::circle(const Vec& base, const Vec& center, int i, int j, bool ccw) {
  const double r = (base - center).norm();
  const double phase = std::atan2(base[j] - center[j], base[i] - center[i]);
  const double sign = ccw ? 1.0 : -1.0;
  const double two_pi = 2.0 * std::numbers::pi;
  auto pos = [=](double t) -> Vec {
    Vec p = base;
    const double a = phase + sign * two_pi * t;
    p[i] = center[i] + r * std::cos(a);
    p[j] = center[j] + r * std::sin(a);
    return p;
  };
  auto vel = [=](double t) -> Vec {
    Vec v = Vec::Zero(base.size());
    const double a = phase + sign * two_pi * t;
    v[i] = -sign * two_pi * r * std::sin(a);
    v[j] = sign * two_pi * r * std::cos(a);
    return v;
  };
  return Path(pos, vel);
}

double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }

double smoothstep5_derivative(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }

Path eased_polyline(const std::vector<Vec>& vertices) {
  if (vertices.size() < 2) throw InvalidArgument("eased_polyline: need >= 2 vertices");
  const int legs = static_cast<int>(vertices.size()) - 1;
  auto leg_of = [legs](double t) {
    const int l = static_cast<int>(std::floor(t * legs));
    return std::clamp(l, 0, legs - 1);
  };
  auto pos = [=](double t) -> Vec {
    const int l = leg_of(t);
    const double s = t * legs - l;
    return vertices[l] + smoothstep5(s) * (vertices[l + 1] - vertices[l]);
  };
  auto vel = [=](double t) -> Vec {
    const int l = leg_of(t);
    const double s = t * legs - l;
    return legs * smoothstep5_derivative(s) * (vertices[l + 1] - vertices[l]);
  };
  std::vector<double> k;
  for (int l = 1; l < legs; ++l) k.push_back(static_cast<double>(l) / legs);
  return Path(pos, vel, std::move(k));
}

}  // namespace dyngeo
