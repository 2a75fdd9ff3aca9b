#include "dimec/certify.hpp"

#include "dimec/mabk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dimec {

void CertificationParams::validate() const {
  if (n < 1) throw std::invalid_argument("CertificationParams: n must be positive");
  // The round engine accepts the degenerate endpoints (all-storage or
  // all-test runs); the tradeoff-side functions reject them on their own.
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("CertificationParams: gamma outside [0,1]");
  if (delta_est < 0.0 || delta_est >= 1.0) throw std::invalid_argument("CertificationParams: delta_est outside [0,1)");
  if (M < 2) throw std::invalid_argument("CertificationParams: M must be at least 2");
  if (M_prime < 1 || M_prime > M - 1) throw std::invalid_argument("CertificationParams: M' outside [1, M-1]");
  if (eps_smo <= 0.0 || eps_snd <= 0.0 || eps_smo >= 1.0 || eps_snd >= 1.0)
    throw std::invalid_argument("CertificationParams: epsilons outside (0,1)");
  const auto [p_min, p_max] = p_bounds(M);
  if (omega_exp < p_min - 1e-12 || omega_exp > p_max + 1e-12)
    throw std::invalid_argument("CertificationParams: omega_exp outside [p_min, p_max]");
}

bool CertificationParams::fidelity_constraint_satisfied() const {
  return 8.0 * std::pow(3.0, M / 2.0) * std::sqrt(eps_smo) < 1.0;
}

double completeness_bound(long long n, double delta_est) {
  if (n < 1) throw std::invalid_argument("completeness_bound: n must be positive");
  if (delta_est < 0.0 || delta_est >= 1.0) throw std::invalid_argument("completeness_bound: delta_est outside [0,1)");
  return std::exp(-2.0 * static_cast<double>(n) * delta_est * delta_est);
}

double v_term(int M_prime, double a_ceil, double eps_smo, double eps_snd, bool alt_dimension) {
  if (M_prime < 1) throw std::invalid_argument("v_term: M' must be positive");
  if (a_ceil < 0.0) throw std::invalid_argument("v_term: slope bound must be nonnegative");
  const double prod = eps_smo * eps_snd;
  if (!(prod > 0.0) || eps_smo >= 1.0 || eps_snd >= 1.0)
    throw std::invalid_argument("v_term: epsilon product outside (0,1)");
  const double dim_term =
      alt_dimension ? std::log2(1.0 + std::pow(2.0, M_prime)) : std::log2(1.0 + 2.0 * M_prime);
  return 2.0 * (dim_term + a_ceil) * std::sqrt(1.0 - 2.0 * std::log2(prod));
}

double eta(const CertificationParams& params, double pt1) {
  params.validate();
  const double p1 = params.omega_exp * params.gamma - params.delta_est;
  if (p1 < 0.0) throw std::invalid_argument("eta: omega_exp*gamma - delta_est is negative");
  const double n = static_cast<double>(params.n);
  const TangentCoeffs t = tangent_coeffs(pt1, params.gamma, params.M);
  const double a_ceil = std::ceil(std::abs(t.a));
  return n * f_max_linearized(p1, pt1, params.gamma, params.M) +
         std::sqrt(n) * v_term(params.M_prime, a_ceil, params.eps_smo, params.eps_snd, params.alt_dimension);
}

EtaOptimum eta_opt(const CertificationParams& params) {
  params.validate();
  const auto [p_min, p_max] = p_bounds(params.M);
  const double lo = params.gamma * p_min;
  const double hi = params.gamma * p_max;
  if (!(hi > lo)) throw std::invalid_argument("eta_opt: empty feasible interval");

  constexpr int kGrid = 512;
  auto grid_point = [&](int i) { return lo + (hi - lo) * (i + 1) / (kGrid + 1.0); };
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double value = eta(params, grid_point(i));
    if (value < best) {
      best = value;
      best_i = i;
    }
  }

  // Golden-section refinement in the bracket around the grid minimum.
  double a = best_i > 0 ? grid_point(best_i - 1) : lo + 1e-12 * (hi - lo);
  double b = best_i < kGrid - 1 ? grid_point(best_i + 1) : hi - 1e-12 * (hi - lo);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = eta(params, c), fd = eta(params, d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = eta(params, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = eta(params, d);
    }
  }
  const double pt_refined = 0.5 * (a + b);
  const double refined = eta(params, pt_refined);
  if (refined <= best) return {refined, pt_refined};
  return {best, grid_point(best_i)};
}

RateCertificate certified_rate(const CertificationParams& params) {
  CertificationParams p = params;
  p.M_prime = p.M - 1;  // the certificate always cuts one party off
  p.validate();
  const EtaOptimum opt = eta_opt(p);
  RateCertificate cert;
  cert.eta_opt = opt.value;
  cert.pt_star = opt.pt_star;
  cert.rate_total = (-opt.value + 2.0 * std::log2(p.eps_smo)) / (p.M - 1);
  cert.rate_per_round = cert.rate_total / static_cast<double>(p.n);
  cert.leading_order_rate =
      -f_piecewise(p.omega_exp * p.gamma - p.delta_est, p.gamma, p.M) / (p.M - 1);
  return cert;
}

std::vector<RateCurvePoint> rate_curve(const CertificationParams& base, int grid_points, bool parallel) {
  if (grid_points < 2) throw std::invalid_argument("rate_curve: need at least 2 grid points");
  const auto [p_min, p_max] = p_bounds(base.M);
  std::vector<RateCurvePoint> out(grid_points);
  auto eval = [&](int i) {
    CertificationParams p = base;
    p.omega_exp = p_min + (p_max - p_min) * i / (grid_points - 1.0);
    const RateCertificate cert = certified_rate(p);
    out[i] = {p.omega_exp, cert.leading_order_rate, cert.rate_per_round, cert.pt_star};
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < grid_points; ++i) eval(i);
  } else {
    for (int i = 0; i < grid_points; ++i) eval(i);
  }
  return out;
}

namespace {

template <typename PerCut>
double best_cut_rate(int M, PerCut&& per_cut) {
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < M; ++k) {
    double worst = std::numeric_limits<double>::infinity();
    // K ranges over nonempty subsets of [M] \ {k}.
    for (int mask = 1; mask < (1 << M); ++mask) {
      if (mask & (1 << k)) continue;
      std::vector<int> K;
      for (int i = 0; i < M; ++i)
        if (mask & (1 << i)) K.push_back(i);
      worst = std::min(worst, per_cut(K) / static_cast<double>(K.size()));
    }
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace

double asymptotic_distill_rate(const DensityMatrix& rho, int M) {
  if (rho.num_subsystems() != M) throw std::invalid_argument("asymptotic_distill_rate: party count mismatch");
  return best_cut_rate(M, [&](const std::vector<int>& K) { return coherent_information(rho, K); });
}

double one_shot_distill_bound(const DensityMatrix& rho, int M, double eps_prime) {
  if (rho.num_subsystems() != M) throw std::invalid_argument("one_shot_distill_bound: party count mismatch");
  if (!(eps_prime > 0.0) || 8.0 * std::pow(3.0, M / 2.0) * std::sqrt(eps_prime) >= 1.0)
    throw std::invalid_argument("one_shot_distill_bound: eps_prime out of range");
  const double main = best_cut_rate(M, [&](const std::vector<int>& K) {
    const MaxEntropyResult r = max_entropy_conditional(rho, K);
    if (!r.converged) throw std::runtime_error("one_shot_distill_bound: H_max ascent did not converge");
    return -r.value;
  });
  return main + 2.0 * std::log2(eps_prime) / (M - 1);
}

}  // namespace dimec
