// Benchmark: OpenMP-parallel kernels against their serial reference paths.
// Checks that both paths agree bit-for-bit before timing them.

#include "dimec/certify.hpp"
#include "dimec/protocol.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

namespace {

template <typename F>
double time_ms(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
  using namespace dimec;

  CertificationParams params;
  params.M = 3;
  params.M_prime = 2;
  params.n = 500;
  params.gamma = 0.5;
  params.delta_est = 0.05;
  params.eps_smo = 1e-4;
  params.eps_snd = 1e-4;
  params.omega_exp = p_bounds(3).second;

  const SourceModel source = SourceModel::honest_werner(3, 1.0);
  const DeviceModel device = DeviceModel::honest_optimal(3);
  const long long trials = 2000;

  AbortEstimate serial, parallel;
  const double t_mc_serial =
      time_ms([&] { serial = estimate_abort_probability(source, device, params, trials, 42, false); });
  const double t_mc_parallel =
      time_ms([&] { parallel = estimate_abort_probability(source, device, params, trials, 42, true); });
  if (serial.aborts != parallel.aborts) {
    std::fprintf(stderr, "FAIL: Monte Carlo serial/parallel mismatch (%lld vs %lld aborts)\n",
                 serial.aborts, parallel.aborts);
    return 1;
  }
  std::printf("monte-carlo abort estimate  (%lld trials x %lld rounds)\n", trials, params.n);
  std::printf("  serial:   %8.1f ms\n", t_mc_serial);
  std::printf("  parallel: %8.1f ms   (speedup %.2fx, abort rate %.4f)\n", t_mc_parallel,
              t_mc_serial / t_mc_parallel, parallel.rate);

  CertificationParams curve = params;
  curve.M = 4;
  curve.M_prime = 3;
  curve.n = 1000000000000LL;
  curve.delta_est = 0.0;
  curve.eps_smo = 1e-2;
  curve.eps_snd = 1e-2;
  const int grid = 160;

  std::vector<RateCurvePoint> ref, par;
  const double t_rc_serial = time_ms([&] { ref = rate_curve(curve, grid, false); });
  const double t_rc_parallel = time_ms([&] { par = rate_curve(curve, grid, true); });
  for (int i = 0; i < grid; ++i) {
    if (ref[i].leading_order_rate != par[i].leading_order_rate ||
        ref[i].rate_per_round != par[i].rate_per_round) {
      std::fprintf(stderr, "FAIL: rate-curve serial/parallel mismatch at grid point %d\n", i);
      return 1;
    }
  }
  std::printf("rate-curve sweep            (%d omega_exp grid points)\n", grid);
  std::printf("  serial:   %8.1f ms\n", t_rc_serial);
  std::printf("  parallel: %8.1f ms   (speedup %.2fx)\n", t_rc_parallel, t_rc_serial / t_rc_parallel);
  return 0;
}
