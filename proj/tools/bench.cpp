#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "snev/convergence.hpp"

using namespace snev;

namespace {

template <class F>
double time_s(const F& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("openmp not available; Parallel falls back to the serial path\n");
#endif

  {
    double ks_s = 0.0, ks_p = 0.0;
    const double ts = time_s([&] { ks_s = monte_carlo_check(1.0, 5000, 8000, 42, Exec::Serial); });
    const double tp =
        time_s([&] { ks_p = monte_carlo_check(1.0, 5000, 8000, 42, Exec::Parallel); });
    std::printf("monte_carlo 4e7 draws: serial %.3f s, parallel %.3f s, speedup %.2fx, "
                "results %s (ks=%.12g)\n",
                ts, tp, ts / tp, ks_s == ks_p ? "identical" : "DIFFER", ks_s);
    if (ks_s != ks_p) return 1;
  }

  {
    const std::vector<std::int64_t> grid{1000, 10000, 100000, 1000000, 10000000};
    RateCurve s, p;
    const double ts = time_s([&] { s = rate_curve(1.0, grid, Exec::Serial); });
    const double tp = time_s([&] { p = rate_curve(1.0, grid, Exec::Parallel); });
    bool same = s.points.size() == p.points.size();
    for (std::size_t i = 0; same && i < s.points.size(); ++i)
      same = s.points[i].delta_n == p.points[i].delta_n &&
             s.points[i].argmax_x == p.points[i].argmax_x;
    std::printf("rate_curve 5 points to 1e7: serial %.3f s, parallel %.3f s, speedup %.2fx, "
                "results %s (band [%.10g, %.10g])\n",
                ts, tp, ts / tp, same ? "identical" : "DIFFER", s.band_min, s.band_max);
    if (!same) return 1;
  }
  return 0;
}
