#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include <omp.h>

#include "dyngeo/path_map.hpp"

using namespace dyngeo;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int count = argc > 1 ? std::atoi(argv[1]) : 2000;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  std::printf("threads %d, points %d, best of %d\n", omp_get_max_threads(), count, reps);
  std::printf("%-16s %-8s %12s %12s %8s %12s\n", "model", "factor", "serial_s", "parallel_s", "speedup",
              "max_diff");
  for (const char* name : {"flat-r4", "sphere-s2", "hyperbolic-h2"}) {
    const auto model = make_model(name);
    const auto field = make_ether_field(model);
    const int d = model->dim();
    const double r = std::isfinite(model->cap()) ? 0.2 * model->cap() : 1.0;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto point = [&] {
      Vec v(d);
      for (int i = 0; i < d; ++i) v[i] = r * unit(rng) / std::sqrt(double(d));
      return v;
    };
    const Vec a = point(), b = point();
    Vec bend = Vec::Zero(d);
    bend[0] = 0.3 * (b - a).norm();
    std::vector<Vec> zs;
    for (int i = 0; i < count; ++i) zs.push_back(point());
    for (double factor : {0.5, 1.0}) {
      const PathMap map(field, Path::bulge(a, b, bend), factor);
      std::vector<Vec> serial, parallel;
      const double ts = best_of(reps, [&] { serial = map.evaluate_batch_serial(zs); });
      const double tp = best_of(reps, [&] { parallel = map.evaluate_batch(zs); });
      double diff = 0.0;
      for (int i = 0; i < count; ++i) diff = std::max(diff, (serial[i] - parallel[i]).norm());
      std::printf("%-16s %-8.1f %12.4f %12.4f %8.2f %12.3e\n", name, factor, ts, tp, ts / tp, diff);
    }
  }
}
