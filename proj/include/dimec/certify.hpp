#pragma once

// Completeness bound, the second-order term v, eta and its minimization,
// the certified one-shot rate, and the device-dependent distillation-rate
// calculators.

#include "dimec/qmath.hpp"
#include "dimec/tradeoff.hpp"

#include <vector>

namespace dimec {

struct CertificationParams {
  long long n = 0;           // round count
  double gamma = 0.0;        // test probability
  double omega_exp = 0.0;    // expected winning probability
  double delta_est = 0.0;    // confidence width
  double eps_smo = 0.0;      // smoothing parameter
  double eps_snd = 0.0;      // soundness parameter
  int M = 0;                 // parties
  int M_prime = 0;           // cut size
  bool alt_dimension = false;  // use 2^M' instead of 2M' in the v term

  void validate() const;

  /// Whether 8 * 3^(M/2) * sqrt(eps_smo) < 1, the condition under which the
  /// certificate's fidelity guarantee is meaningful. Reported, not enforced:
  /// the rate formulas are well-defined without it.
  bool fidelity_constraint_satisfied() const;
};

struct RateCertificate {
  double eta_opt = 0.0;             // bits
  double rate_total = 0.0;          // certified one-shot total, bits
  double rate_per_round = 0.0;      // rate_total / n
  double pt_star = 0.0;             // minimizing tangent point
  double leading_order_rate = 0.0;  // bits per round, sqrt(n) term dropped
};

struct EtaOptimum {
  double value = 0.0;
  double pt_star = 0.0;
};

/// Hoeffding bound exp(-2 n delta_est^2) on the honest abort probability.
double completeness_bound(long long n, double delta_est);

/// 2 (log2(1 + 2M') + a_ceil) sqrt(1 - 2 log2(eps_smo eps_snd)).
double v_term(int M_prime, double a_ceil, double eps_smo, double eps_snd, bool alt_dimension = false);

/// n f_max(omega_exp gamma - delta_est, pt, M) + sqrt(n) v(M', ceil|a(pt)|).
double eta(const CertificationParams& params, double pt1);

/// Minimum of eta over pt1 in (gamma p_min, gamma p_max): 512-point grid
/// scan refined by golden-section search (tolerance 1e-10 in pt1).
EtaOptimum eta_opt(const CertificationParams& params);

/// Certified one-shot rate with the cut forced to M' = M-1:
/// rate_total = (-eta_opt + 2 log2 eps_smo) / (M-1).
RateCertificate certified_rate(const CertificationParams& params);

struct RateCurvePoint {
  double omega_exp = 0.0;
  double leading_order_rate = 0.0;
  double rate_per_round = 0.0;
  double pt_star = 0.0;
};

/// certified_rate swept over a uniform omega_exp grid on [p_min, p_max].
/// Grid points are independent; the parallel path uses OpenMP and the
/// serial path is the reference for testing.
std::vector<RateCurvePoint> rate_curve(const CertificationParams& base, int grid_points,
                                       bool parallel = true);

/// max_k min_{K subset of [M]\{k}, K nonempty} I(A_K > A_rest) / |K|,
/// by exact enumeration.
double asymptotic_distill_rate(const DensityMatrix& rho, int M);

/// Same shape with -H_max(A_K | A_rest) in place of coherent information,
/// plus the one-shot penalty 2 log2(eps_prime) / (M-1). Uses the non-smooth
/// H_max, which lower-bounds the smoothed rate.
double one_shot_distill_bound(const DensityMatrix& rho, int M, double eps_prime);

}  // namespace dimec
