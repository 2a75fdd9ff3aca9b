#pragma once

// Max-tradeoff function machinery: the parity-dependent g, the piecewise f,
// the tangent-linearized f_max, and its slope/intercept coefficients.

#include <string>

namespace dimec {

struct TradeoffSpec {
  int M = 0;            // party count; parity selects g_even / g_odd
  int M_prime = 0;      // cut size in [1, M-1]
  double gamma = 0.0;   // test probability in (0,1)
  double p1 = 0.0;      // winning-frequency coordinate in [0, gamma]
  double pt1 = 0.0;     // tangent point in (gamma p_min, gamma p_max)
};

/// Tangent line to f at pt1: slope in bits per unit probability, intercept
/// in bits. The slope is the analytic derivative (chain rule through h2) and
/// is negative in the operating region.
struct TangentCoeffs {
  double a = 0.0;
  double b = 0.0;
};

/// g_e(omega) = 2 h2(1/2 - (2 omega - 1)/sqrt(2)) - 1 on [3/4, (2+sqrt2)/4].
double g_even(double omega);

/// g_o(omega) = 2 h2(1/2 - (4 omega - 1)/2) - 1 on [(2+sqrt2)/8, 1/2].
double g_odd(double omega);

/// Parity dispatch: g_even for even M, g_odd for odd M. The argument is
/// accepted down to g's natural lower bound (where the h2 argument leaves
/// [0, 1/2]), below the entanglement threshold included.
double g_parity(double omega, int M);

/// f(p1, M) = (1 - gamma) g(p1/gamma) while p1/gamma <= p_max, else gamma-1.
double f_piecewise(double p1, double gamma, int M);

TangentCoeffs tangent_coeffs(double pt1, double gamma, int M);

/// f for p1 <= pt1; the tangent line a p1 + b beyond. Concave majorant of f.
double f_max_linearized(double p1, double pt1, double gamma, int M);

/// CSV rows (p1, f, f_max, a, b) over a uniform p1 grid of `points` samples.
std::string tradeoff_csv(int M, double gamma, double pt1, int points);

}  // namespace dimec
