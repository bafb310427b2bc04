#pragma once

#include <vector>

#include "exec.hpp"
#include "interval.hpp"

namespace singerkit {

// Inclusive uniform grid; endpoints land exactly on J.lo and J.hi.
inline std::vector<double> uniform_grid(const Interval& J, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  const double w = J.hi - J.lo;
  for (int i = 0; i < count; ++i)
    xs[static_cast<std::size_t>(i)] = J.lo + w * static_cast<double>(i) / (count - 1);
  xs.front() = J.lo;
  xs.back() = J.hi;
  return xs;
}

template <class T, class F>
std::vector<T> map_indices(Exec exec, std::size_t count, F&& f) {
  std::vector<T> out(count);
  for_each_index(exec, count, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace singerkit
