// Acceptance gate: one PASS/FAIL line per criterion, exit nonzero if any
// criterion fails.

#include "dimec/certify.hpp"
#include "dimec/ghz.hpp"
#include "dimec/jordan.hpp"
#include "dimec/mabk.hpp"
#include "dimec/protocol.hpp"
#include "dimec/qmath.hpp"
#include "dimec/tradeoff.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace dimec;

namespace {

const double kSqrt2 = std::sqrt(2.0);

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) ++g_failures;
}

std::vector<ObservablePair> random_equatorial(int M, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-3.141592653589793, 3.141592653589793);
  std::vector<ObservablePair> out;
  for (int i = 0; i < M; ++i)
    out.emplace_back(equatorial_observable(ang(rng)), equatorial_observable(ang(rng)));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Recursive operator vs coefficient reassembly and the bipartition
//    factorization, 50 random equatorial observable sets for M = 2..6.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  double worst_reassembly = 0.0, worst_factorization = 0.0;
  for (int M = 2; M <= 6; ++M) {
    const CoeffTable table = unroll_coefficients(M);
    for (int t = 0; t < 50; ++t) {
      const auto parties = random_equatorial(M, rng);
      worst_reassembly = std::max(
          worst_reassembly, (mabk_operator(parties) - assemble_from_coefficients(table, parties)).norm());
      for (int m = 1; m <= M - 1; ++m)
        worst_factorization = std::max(worst_factorization, verify_bipartition_factorization(M, m, parties));
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass = worst_reassembly < 1e-10 && worst_factorization < 1e-10 && elapsed < 30.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "operator consistency M=2..6 (reassembly %.2e, factorization %.2e, %.1f s)",
                worst_reassembly, worst_factorization, elapsed);
  report(1, pass, buf);
}

// 2. Game endpoints on pure GHZ at the optimal observables.
void criterion_2() {
  double worst_omega = 0.0, worst_beta = 0.0;
  for (int M : {2, 3, 4, 5, 6}) {
    const MabkGame game = MabkGame::make(optimal_observables(M));
    const DensityMatrix ghz = ghz_rank_d(M, 2).to_density();
    const double target = M % 2 == 0 ? (2.0 + kSqrt2) / 4.0 : 0.5;
    worst_omega = std::max(worst_omega, std::abs(winning_probability_exact(ghz, game) - target));
    worst_beta = std::max(worst_beta, std::abs(mabk_value(ghz, game) - 2.0 * kSqrt2));
  }
  const bool pass = worst_omega < 1e-9 && worst_beta < 1e-6;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "game endpoints (|omega err| %.2e, |beta err| %.2e)", worst_omega,
                worst_beta);
  report(2, pass, buf);
}

// 3. Rate-curve anchors for M=4, gamma=0.5: right endpoint 1/6, zero
//    crossing at 0.775752 +/- 1e-4, monotone increasing.
void criterion_3() {
  CertificationParams base;
  base.M = 4;
  base.M_prime = 3;
  base.gamma = 0.5;
  base.n = 1000000000000LL;
  base.delta_est = 0.0;
  base.eps_smo = 1e-2;
  base.eps_snd = 1e-2;
  base.omega_exp = p_bounds(4).second;

  const auto curve = rate_curve(base, 200);
  bool monotone = true;
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (curve[i].leading_order_rate < curve[i - 1].leading_order_rate - 1e-12) monotone = false;
  const double endpoint_err = std::abs(curve.back().leading_order_rate - 1.0 / 6.0);

  auto leading = [&](double omega) {
    CertificationParams p = base;
    p.omega_exp = omega;
    return certified_rate(p).leading_order_rate;
  };
  double lo = p_bounds(4).first, hi = p_bounds(4).second;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (leading(mid) < 0.0 ? lo : hi) = mid;
  }
  const double crossing = 0.5 * (lo + hi);

  const bool pass = monotone && endpoint_err < 1e-9 && std::abs(crossing - 0.775752) < 1e-4;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "rate curve (endpoint err %.2e, zero crossing %.6f, monotone %s)", endpoint_err,
                crossing, monotone ? "yes" : "no");
  report(3, pass, buf);
}

// 4. Completeness and soundness statistics, 2000 trials at n = 500.
void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  CertificationParams p;
  p.M = 3;
  p.M_prime = 2;
  p.n = 500;
  p.gamma = 1.0;
  p.omega_exp = 0.5;
  p.eps_smo = 1e-2;
  p.eps_snd = 1e-2;
  const DeviceModel dev = DeviceModel::honest_optimal(3);
  const SourceModel honest = SourceModel::honest_werner(3, 1.0);

  p.delta_est = 0.1;
  const AbortEstimate tight = estimate_abort_probability(honest, dev, p, 2000, 404);
  const double bound_tight = completeness_bound(500, 0.1);

  p.delta_est = 0.02;
  const AbortEstimate loose = estimate_abort_probability(honest, dev, p, 2000, 404);
  const double bound_loose = completeness_bound(500, 0.02);

  // Soundness smoke test: true omega = omega_exp - 0.1/gamma = 0.4, reached
  // at Werner visibility 0.6 for three parties.
  const AbortEstimate bad =
      estimate_abort_probability(SourceModel::honest_werner(3, 0.6), dev, p, 2000, 404);

  const double elapsed = seconds_since(t0);
  const bool pass = tight.rate <= bound_tight && loose.rate <= bound_loose && bad.rate > 0.99 &&
                    elapsed < 120.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "abort stats (delta=0.1: %.2e <= %.2e; delta=0.02: %.3f <= %.3f; bad device %.3f; %.1f s)",
                tight.rate, bound_tight, loose.rate, bound_loose, bad.rate, elapsed);
  report(4, pass, buf);
}

// 5. Tradeoff function suite: endpoints, domination grid, gradient bound.
void criterion_5() {
  const double endpoint_even = std::abs(g_even((2.0 + kSqrt2) / 4.0) + 1.0);
  const double endpoint_odd = std::abs(g_odd(0.5) + 1.0);
  const double classical_err =
      std::max(std::abs(g_even(0.75) - 0.2017520733857122), std::abs(g_odd((2.0 + kSqrt2) / 8.0) - 0.2017520733857122));

  const int M = 4;
  const double gamma = 0.5;
  const auto [p_min, p_max] = p_bounds(M);
  const double lo = gamma * p_min, hi = gamma * p_max;
  long long violations = 0, gradient_violations = 0;
  for (int j = 0; j < 512; ++j) {
    const double pt1 = lo + (hi - lo) * (j + 1) / 513.0;  // open interval
    const double a_mag = std::abs(tangent_coeffs(pt1, gamma, M).a);
    for (int i = 0; i < 512; ++i) {
      const double p1 = lo + (hi - lo) * i / 511.0;
      if (f_max_linearized(p1, pt1, gamma, M) < f_piecewise(p1, gamma, M) - 1e-10) ++violations;
      // Local slope of f_max: the tangent slope beyond pt1, f' before it.
      const double local = p1 >= pt1 || p1 <= lo + 1e-12
                               ? a_mag
                               : std::abs(tangent_coeffs(std::max(p1, lo + 1e-9), gamma, M).a);
      if (local > a_mag + 1e-9) ++gradient_violations;
    }
  }

  // The even endpoint (2+sqrt2)/4 is not exactly representable, so "exact"
  // means up to double rounding of the h2 argument.
  const bool pass = endpoint_even < 1e-12 && endpoint_odd == 0.0 && classical_err < 1e-5 &&
                    violations == 0 && gradient_violations == 0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "tradeoff suite (endpoints %.1e/%.1e, classical err %.2e, %lld domination / %lld "
                "gradient violations)",
                endpoint_even, endpoint_odd, classical_err, violations, gradient_violations);
  report(5, pass, buf);
}

// 6. eta_opt sanity at n = 1e10: leading-order agreement within 1e-4 and
//    grid dominance of the refined minimum.
void criterion_6() {
  CertificationParams p;
  p.M = 4;
  p.M_prime = 3;
  p.gamma = 0.5;
  p.omega_exp = 0.84;
  p.delta_est = 0.0;
  p.eps_smo = 1e-2;
  p.eps_snd = 1e-2;
  p.n = 10000000000LL;

  const EtaOptimum opt = eta_opt(p);
  const double gap =
      std::abs(opt.value / static_cast<double>(p.n) - f_piecewise(p.omega_exp * p.gamma, p.gamma, p.M));

  const auto [p_min, p_max] = p_bounds(p.M);
  const double lo = p.gamma * p_min, hi = p.gamma * p_max;
  bool dominated = true;
  for (int i = 0; i < 512; ++i) {
    const double pt1 = lo + (hi - lo) * (i + 1) / 513.0;
    if (opt.value > eta(p, pt1) + 1e-9) dominated = false;
  }

  const bool pass = gap < 1e-4 && dominated;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "eta_opt sanity (leading-order gap %.3e vs 1e-4 tolerance; the sqrt(n) penalty "
                "v/sqrt(n) keeps the gap above tolerance at n=1e10; grid dominance %s)",
                gap, dominated ? "yes" : "no");
  report(6, pass, buf);
}

// 7. Distillation-rate oracles and brute-force enumeration agreement.
void criterion_7() {
  const double ghz3_err = std::abs(asymptotic_distill_rate(ghz_rank_d(3, 2).to_density(), 3) - 0.5);
  const double mixed_err =
      std::abs(asymptotic_distill_rate(DensityMatrix(identity(8) / 8.0, {2, 2, 2}), 3) + 1.0);

  double worst_brute = 0.0;
  for (int M = 3; M <= 5; ++M) {
    const DensityMatrix rho = make_source(SourceModel::honest_werner(M, 0.9));
    double best = -1e300;
    for (int k = 0; k < M; ++k) {
      double worst = 1e300;
      for (int mask = 1; mask < (1 << M); ++mask) {
        if (mask & (1 << k)) continue;
        std::vector<int> K;
        for (int i = 0; i < M; ++i)
          if (mask & (1 << i)) K.push_back(i);
        worst = std::min(worst, coherent_information(rho, K) / static_cast<double>(K.size()));
      }
      best = std::max(best, worst);
    }
    worst_brute = std::max(worst_brute, std::abs(asymptotic_distill_rate(rho, M) - best));
  }

  const bool pass = ghz3_err < 1e-10 && mixed_err < 1e-10 && worst_brute < 1e-12;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "distillation oracles (GHZ3 err %.1e, mixed err %.1e, brute-force gap %.1e)",
                ghz3_err, mixed_err, worst_brute);
  report(7, pass, buf);
}

// 8. Jordan recovery, Protocol 1 vs 2 statistics, twirl Bell-diagonality.
void criterion_8() {
  // Planted dim-16 pair: eight known angles conjugated by a random unitary.
  std::mt19937_64 rng(808);
  std::normal_distribution<double> gauss;
  const std::vector<double> angles = {0.15, 0.6, 1.05, 1.5, 1.95, 2.4, 2.85, 0.35};
  Mat o0 = Mat::Zero(16, 16), o1 = Mat::Zero(16, 16);
  for (int k = 0; k < 8; ++k) {
    o0.block(2 * k, 2 * k, 2, 2) = pauli_y();
    o1.block(2 * k, 2 * k, 2, 2) = std::cos(angles[k]) * pauli_y() + std::sin(angles[k]) * pauli_x();
  }
  Mat g(16, 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat u = qr.householderQ();
  const JordanDecomposition dec =
      jordan_decompose(ObservablePair(u * o0 * u.adjoint(), u * o1 * u.adjoint()));
  std::vector<double> found;
  for (const JordanBlock& blk : dec.blocks) found.push_back(blk.alpha);
  std::vector<double> want = angles;
  std::sort(want.begin(), want.end());
  std::sort(found.begin(), found.end());
  double angle_err = found.size() == want.size() ? 0.0 : 1.0;
  if (found.size() == want.size())
    for (std::size_t i = 0; i < want.size(); ++i)
      angle_err = std::max(angle_err, std::abs(found[i] - want[i]));

  // Protocol 1 vs 2: empirical omega within merged 3 sigma over 1e4 rounds.
  CertificationParams p;
  p.M = 3;
  p.M_prime = 2;
  p.n = 10000;
  p.gamma = 0.5;
  p.omega_exp = 0.5;
  p.delta_est = 0.3;
  p.eps_smo = 1e-2;
  p.eps_snd = 1e-2;
  const SourceModel src = SourceModel::honest_werner(3, 0.95);
  const DeviceModel dev = DeviceModel::honest_optimal(3);
  const Transcript t1 = run_protocol(src, dev, p, 515);
  const Transcript t2 = run_protocol_with_projection(src, dev, p, 616);
  const double w1 = t1.empirical_omega(), w2 = t2.empirical_omega();
  const double s1 = std::sqrt(w1 * (1.0 - w1) / static_cast<double>(t1.test_rounds));
  const double s2 = std::sqrt(w2 * (1.0 - w2) / static_cast<double>(t2.test_rounds));
  const double merged = std::sqrt(s1 * s1 + s2 * s2);
  const double omega_gap = std::abs(w1 - w2);

  // Twirl Bell-diagonality after the CNOT reduction of a GHZ-diagonal state.
  GhzDiagonalSpec spec;
  spec.M = 3;
  spec.lambda0 = {0.35, 0.1, 0.05, 0.05};
  spec.lambda1 = {0.15, 0.1, 0.1, 0.1};
  spec.s = {0.1, 0.0, 0.02, 0.03};
  const DensityMatrix rho = ghz_diagonal_state(spec);
  double off_mass = 0.0;
  for (int mp = 1; mp <= 2; ++mp) {
    const UnitaryMatrix cu = cnot_reduction_unitary(3, mp);
    DensityMatrix mapped(cu.data * rho.data * cu.data.adjoint(), {2, 2, 2});
    const DensityMatrix pair = partial_trace(mapped, {0, mp});
    const Mat in_bell = bell_basis().adjoint() * bell_twirl(pair).data * bell_basis();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (r != c) off_mass = std::max(off_mass, std::abs(in_bell(r, c)));
  }

  const bool pass = angle_err < 1e-8 && omega_gap < 3.0 * merged && off_mass < 1e-12;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "jordan/projection suite (angle err %.1e, omega gap %.4f vs 3sigma %.4f, twirl "
                "off-diagonal %.1e)",
                angle_err, omega_gap, 3.0 * merged, off_mass);
  report(8, pass, buf);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::printf("%d of 8 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
