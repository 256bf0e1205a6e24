#include <chrono>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>

#include "dyngeo/run.hpp"

// Prints one line per criterion. Exit status is 0 when the set of failing
// criteria equals the --expect-fail list (empty by default), 1 otherwise.
int main(int argc, char** argv) {
  std::uint64_t seed = 7;
  std::set<std::string> expected;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else if (!std::strcmp(argv[i], "--expect-fail") && i + 1 < argc) {
      expected.insert(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--seed N] [--expect-fail ID]...\n");
      return 2;
    }
  }
  std::set<std::string> failed;
  for (const auto& id : dyngeo::acceptance_ids()) {
    const auto t0 = std::chrono::steady_clock::now();
    dyngeo::CheckRecord r;
    std::string error;
    try {
      r = dyngeo::acceptance_check(id, seed);
    } catch (const std::exception& e) {
      r.id = id;
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s  worst ratio %.3g  (%s)  %.1fs\n", id.c_str(), r.pass ? "PASS" : "FAIL", r.ratio(),
                r.tag.c_str(), secs);
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    if (!r.pass) {
      failed.insert(id);
      for (const auto& p : r.parts) {
        if (!p.pass) {
          std::printf("    %s  %.3e %s %.1e\n", p.id.c_str(), p.residual, p.at_least ? ">=" : "<", p.threshold);
        }
      }
    }
  }
  std::printf("%zu/%zu criteria pass\n", dyngeo::acceptance_ids().size() - failed.size(),
              dyngeo::acceptance_ids().size());
  if (failed == expected) {
    if (!expected.empty()) std::printf("failing criteria match the expected list\n");
    return 0;
  }
  for (const auto& id : failed) {
    if (!expected.count(id)) std::printf("unexpected failure: %s\n", id.c_str());
  }
  for (const auto& id : expected) {
    if (!failed.count(id)) std::printf("expected failure now passes: %s\n", id.c_str());
  }
  return 1;
}
