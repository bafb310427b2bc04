// Timing harness comparing the serial reference path against the OpenMP
// grid kernels. Prints one line per kernel with both timings and the ratio.

#include <chrono>
#include <cstdio>
#include <string>

#include "singerkit/dynamics.hpp"
#include "singerkit/exec.hpp"
#include "singerkit/min_principle.hpp"
#include "singerkit/schwarzian.hpp"
#include "singerkit/sweep.hpp"

using namespace singerkit;

namespace {

template <class F>
double seconds_of(int reps, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-24s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", name,
              serial * 1e3, parallel * 1e3, parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  int grid = 1 << 16;
  int reps = 5;
  if (argc > 1) grid = std::stoi(argv[1]);
  if (argc > 2) reps = std::stoi(argv[2]);

  const MapSpec map = MapSpec::compile("mu*x*(1-x)", {{"mu", 3.8}}, {0.0, 1.0});
  Settings st;
  std::printf("grid %d, %d reps, %d thread(s)\n", grid, reps, max_threads());

  report("negativity_scan n=4",
         seconds_of(reps, [&] { negativity_scan(map, 4, grid, st, Exec::Serial); }),
         seconds_of(reps, [&] { negativity_scan(map, 4, grid, st, Exec::Parallel); }));

  report("derivative_extrema n=6",
         seconds_of(reps, [&] { find_derivative_extrema(map, 6, grid, st, Exec::Serial); }),
         seconds_of(reps, [&] { find_derivative_extrema(map, 6, grid, st, Exec::Parallel); }));

  report("periodic_orbits p<=8",
         seconds_of(reps, [&] { find_periodic_orbits(map, 8, grid / 8, st, Exec::Serial); }),
         seconds_of(reps, [&] { find_periodic_orbits(map, 8, grid / 8, st, Exec::Parallel); }));

  const auto values = sweep_values(2.9, 3.4, 0.025);
  report("bifurcation_scan",
         seconds_of(reps, [&] {
           bifurcation_scan(map, "mu", values, 0.5, st.transient, st.window, st, Exec::Serial);
         }),
         seconds_of(reps, [&] {
           bifurcation_scan(map, "mu", values, 0.5, st.transient, st.window, st, Exec::Parallel);
         }));
  return 0;
}
