#include "dimec/tradeoff.hpp"

#include "dimec/mabk.hpp"
#include "dimec/qmath.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dimec {

namespace {

// h2 argument for the parity-specific g. Clamped to [0, 1/2] (with 1e-12
// slack treated as exact) so the endpoint values are exact and the formula
// stays defined below the entanglement threshold.
double clamped_h2_arg(double q) {
  if (q < 0.0) {
    if (q < -1e-12) throw std::invalid_argument("g: omega beyond the quantum maximum");
    return 0.0;
  }
  if (q > 0.5) return 0.5;
  return q;
}

double g_from_arg(double q) { return 2.0 * binary_entropy(clamped_h2_arg(q)) - 1.0; }

}  // namespace

double g_even(double omega) { return g_from_arg(0.5 - (2.0 * omega - 1.0) / std::sqrt(2.0)); }

double g_odd(double omega) { return g_from_arg(0.5 - (4.0 * omega - 1.0) / 2.0); }

double g_parity(double omega, int M) {
  if (omega < 0.0 || omega > 1.0) throw std::invalid_argument("g_parity: omega outside [0,1]");
  return M % 2 == 0 ? g_even(omega) : g_odd(omega);
}

double f_piecewise(double p1, double gamma, int M) {
  if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("f_piecewise: gamma outside (0,1)");
  const double ratio = p1 / gamma;
  if (ratio < -1e-12 || ratio > 1.0 + 1e-12) throw std::invalid_argument("f_piecewise: p1/gamma outside [0,1]");
  const double p_max = p_bounds(M).second;
  if (ratio > p_max) return gamma - 1.0;
  return (1.0 - gamma) * g_parity(std::min(std::max(ratio, 0.0), 1.0), M);
}

TangentCoeffs tangent_coeffs(double pt1, double gamma, int M) {
  if (gamma <= 0.0 || gamma >= 1.0) throw std::invalid_argument("tangent_coeffs: gamma outside (0,1)");
  const auto [p_min, p_max] = p_bounds(M);
  const double omega = pt1 / gamma;
  if (omega <= p_min || omega >= p_max)
    throw std::invalid_argument("tangent_coeffs: tangent point outside (gamma p_min, gamma p_max)");
  const double q = M % 2 == 0 ? 0.5 - (2.0 * omega - 1.0) / std::sqrt(2.0) : 0.5 - (4.0 * omega - 1.0) / 2.0;
  if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("tangent_coeffs: derivative diverges at tangent point");
  // d/domega of 2 h2(q(omega)): h2'(q) = log2((1-q)/q), chain rule through
  // q'(omega) = -sqrt(2) (even) or -2 (odd), then through p1 = gamma omega.
  const double h2p = std::log2((1.0 - q) / q);
  const double gprime = (M % 2 == 0 ? -2.0 * std::sqrt(2.0) : -4.0) * h2p;
  TangentCoeffs out;
  out.a = (1.0 - gamma) / gamma * gprime;
  out.b = f_piecewise(pt1, gamma, M) - out.a * pt1;
  return out;
}

double f_max_linearized(double p1, double pt1, double gamma, int M) {
  const TangentCoeffs t = tangent_coeffs(pt1, gamma, M);
  if (p1 <= pt1) return f_piecewise(p1, gamma, M);
  return t.a * p1 + t.b;
}

std::string tradeoff_csv(int M, double gamma, double pt1, int points) {
  if (points < 2) throw std::invalid_argument("tradeoff_csv: need at least 2 grid points");
  const TangentCoeffs t = tangent_coeffs(pt1, gamma, M);
  std::string out = "p1,f,f_max,a,b\n";
  char line[256];
  for (int i = 0; i < points; ++i) {
    const double p1 = gamma * static_cast<double>(i) / (points - 1);
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.12g,%.12g\n", p1, f_piecewise(p1, gamma, M),
                  f_max_linearized(p1, pt1, gamma, M), t.a, t.b);
    out += line;
  }
  return out;
}

}  // namespace dimec
