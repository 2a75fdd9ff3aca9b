#pragma once

// MABK operator construction (recursive and unrolled), the MABK game,
// winning probabilities, beta <-> omega conversion, optimal measurement
// settings, and the bipartition-factorization verifier.

#include "dimec/qmath.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dimec {

/// A pair of binary (Hermitian, +/-1 spectrum) observables for one party.
struct ObservablePair {
  Mat O0;
  Mat O1;

  ObservablePair(Mat o0, Mat o1);
  int dim() const { return static_cast<int>(O0.rows()); }
};

/// Equatorial qubit observable cos(theta) X + sin(theta) Y.
Mat equatorial_observable(double theta);

enum class Coeff : std::int8_t { Plus = 0, Minus = 1, Perp = -1 };

/// Unrolled form of the MABK operator: K_M = scale * sum_x (-1)^f(x)
/// (x)_i O_{x_i}^i, with f(x) in {0,1,perp} and (-1)^perp = 0. The scale is
/// derived from the symbolic expansion of the recursion, not assumed.
struct CoeffTable {
  int M = 0;
  double scale = 0.0;
  std::vector<Coeff> f;  // indexed by x, first party's bit most significant

  std::size_t num_inputs() const { return f.size(); }
  std::string to_json() const;
};

CoeffTable unroll_coefficients(int M);

struct MabkGame {
  int M = 0;
  std::vector<ObservablePair> parties;
  CoeffTable coeffs;

  static MabkGame make(std::vector<ObservablePair> parties);
};

struct GameStats {
  double omega = 0.0;
  double beta = 0.0;
  int M = 0;
};

/// Recursive MABK operator K_M; companion() swaps O0 and O1 for every party.
Mat mabk_operator(const std::vector<ObservablePair>& parties);
Mat mabk_operator_companion(const std::vector<ObservablePair>& parties);

/// Reassemble the operator from a coefficient table.
Mat assemble_from_coefficients(const CoeffTable& table, const std::vector<ObservablePair>& parties);

/// beta_M = 2^((4-M)/2) |Tr[K_M rho]|.
double mabk_value(const DensityMatrix& rho, const MabkGame& game);

enum class WinStatus { Won, Lost, NotPlayed };

WinStatus win_predicate(const std::vector<int>& x, const std::vector<int>& a, const MabkGame& game);

/// Exact Born-rule winning probability with inputs uniform over all 2^M
/// strings; rounds with f(x) = perp cannot be won and count toward the
/// denominator, which is the reading that reproduces the published
/// even/odd endpoint values.
double winning_probability_exact(const DensityMatrix& rho, const MabkGame& game);

/// (p_min, p_max) for genuinely multipartite entangled states.
std::pair<double, double> p_bounds(int M);

double beta_from_omega(double omega, int M);
double omega_from_beta(double beta, int M);

/// Equatorial settings achieving beta = 2 sqrt(2) on the pure GHZ state,
/// from a closed-form phase-matched family refined by coordinate ascent.
std::vector<ObservablePair> optimal_observables(int M);

/// Frobenius residual of K_M minus its Lemma-1 bipartite factorization with
/// cut parameter m (composite observables built over the last m parties).
double verify_bipartition_factorization(int M, int m, const std::vector<ObservablePair>& parties);

}  // namespace dimec
