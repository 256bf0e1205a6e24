#pragma once

#include <initializer_list>

#include "dyngeo/types.hpp"

inline dyngeo::Vec vec(std::initializer_list<double> v) {
  dyngeo::Vec out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}
