#include "dimec/mabk.hpp"

#include <json.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dimec {

namespace {

constexpr double kPi = std::numbers::pi;

std::string bits_to_string(std::size_t value, int width) {
  std::string s(width, '0');
  for (int k = 0; k < width; ++k)
    if (value & (std::size_t{1} << (width - 1 - k))) s[k] = '1';
  return s;
}

// Signed dyadic coefficient table of the recursion; index x runs over
// {0,1}^M with the first party's bit most significant.
std::vector<double> coefficient_vector(int M) {
  std::vector<double> c = {0.5, 0.5, 0.5, -0.5};  // K_2
  for (int m = 3; m <= M; ++m) {
    const std::size_t prev = c.size();
    std::vector<double> next(prev * 2);
    const std::size_t mask = prev - 1;
    for (std::size_t x = 0; x < prev; ++x) {
      const double bar = c[~x & mask];  // companion swaps O0 and O1 everywhere
      next[x << 1] = 0.5 * (c[x] + bar);
      next[(x << 1) | 1] = 0.5 * (c[x] - bar);
    }
    c = std::move(next);
  }
  return c;
}

void check_party_dims(const std::vector<ObservablePair>& parties) {
  if (parties.size() < 2) throw std::invalid_argument("mabk: need at least 2 parties");
}

double tsirelson() { return 2.0 * std::sqrt(2.0); }

}  // namespace

ObservablePair::ObservablePair(Mat o0, Mat o1) : O0(std::move(o0)), O1(std::move(o1)) {
  if (O0.rows() != O0.cols() || O1.rows() != O1.cols() || O0.rows() != O1.rows())
    throw std::invalid_argument("ObservablePair: observables must be square and of equal size");
  auto check = [](const Mat& o, const char* name) {
    if ((o - o.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
      throw std::invalid_argument(std::string("ObservablePair: ") + name + " not Hermitian");
    Mat sq = o * o;
    sq -= Mat::Identity(o.rows(), o.cols());
    if (sq.cwiseAbs().maxCoeff() > kHermTol)
      throw std::invalid_argument(std::string("ObservablePair: ") + name + " does not square to identity");
  };
  check(O0, "O0");
  check(O1, "O1");
}

Mat equatorial_observable(double theta) {
  return std::cos(theta) * pauli_x() + std::sin(theta) * pauli_y();
}

CoeffTable unroll_coefficients(int M) {
  if (M < 2 || M > 10) throw std::invalid_argument("unroll_coefficients: M out of [2,10]");
  const std::vector<double> c = coefficient_vector(M);
  CoeffTable table;
  table.M = M;
  table.f.assign(c.size(), Coeff::Perp);
  double scale = 0.0;
  for (std::size_t x = 0; x < c.size(); ++x) {
    if (c[x] == 0.0) continue;
    const double mag = std::abs(c[x]);
    if (scale == 0.0) scale = mag;
    if (std::abs(mag - scale) > 1e-14 * scale)
      throw std::logic_error("unroll_coefficients: expansion magnitudes are not uniform");
    table.f[x] = c[x] > 0.0 ? Coeff::Plus : Coeff::Minus;
  }
  table.scale = scale;
  return table;
}

std::string CoeffTable::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t x = 0; x < f.size(); ++x) {
    const std::string key = bits_to_string(x, M);
    if (f[x] == Coeff::Perp)
      j[key] = "perp";
    else
      j[key] = static_cast<int>(f[x]);
  }
  nlohmann::json out;
  out["M"] = M;
  out["scale"] = scale;
  out["f"] = j;
  return out.dump(2);
}

MabkGame MabkGame::make(std::vector<ObservablePair> parties) {
  check_party_dims(parties);
  MabkGame game;
  game.M = static_cast<int>(parties.size());
  game.coeffs = unroll_coefficients(game.M);
  game.parties = std::move(parties);
  return game;
}

Mat mabk_operator(const std::vector<ObservablePair>& parties) {
  check_party_dims(parties);
  const auto& p = parties;
  Mat k = 0.5 * (kron(p[0].O0, p[1].O0 + p[1].O1) + kron(p[0].O1, p[1].O0 - p[1].O1));
  Mat kbar = 0.5 * (kron(p[0].O1, p[1].O1 + p[1].O0) + kron(p[0].O0, p[1].O1 - p[1].O0));
  for (std::size_t i = 2; i < p.size(); ++i) {
    Mat next = 0.5 * (kron(k, p[i].O0 + p[i].O1) + kron(kbar, p[i].O0 - p[i].O1));
    Mat next_bar = 0.5 * (kron(kbar, p[i].O1 + p[i].O0) + kron(k, p[i].O1 - p[i].O0));
    k = std::move(next);
    kbar = std::move(next_bar);
  }
  return k;
}

Mat mabk_operator_companion(const std::vector<ObservablePair>& parties) {
  std::vector<ObservablePair> swapped;
  swapped.reserve(parties.size());
  for (const auto& p : parties) swapped.emplace_back(p.O1, p.O0);
  return mabk_operator(swapped);
}

Mat assemble_from_coefficients(const CoeffTable& table, const std::vector<ObservablePair>& parties) {
  if (static_cast<int>(parties.size()) != table.M)
    throw std::invalid_argument("assemble_from_coefficients: party count mismatch");
  const int d = parties.front().dim();
  long long D = 1;
  for (const auto& p : parties) {
    if (p.dim() != d) throw std::invalid_argument("assemble_from_coefficients: unequal party dimensions");
    D *= d;
  }
  Mat out = Mat::Zero(D, D);
  std::vector<Mat> factors(table.M);
  for (std::size_t x = 0; x < table.f.size(); ++x) {
    if (table.f[x] == Coeff::Perp) continue;
    for (int i = 0; i < table.M; ++i) {
      const int bit = (x >> (table.M - 1 - i)) & 1;
      factors[i] = bit ? parties[i].O1 : parties[i].O0;
    }
    const double sign = table.f[x] == Coeff::Plus ? 1.0 : -1.0;
    out += sign * kron(factors);
  }
  return table.scale * out;
}

double mabk_value(const DensityMatrix& rho, const MabkGame& game) {
  const Mat k = mabk_operator(game.parties);
  if (k.rows() != rho.dim()) throw std::invalid_argument("mabk_value: dimension mismatch");
  const double tr = (k * rho.data).trace().real();
  return std::pow(2.0, (4.0 - game.M) / 2.0) * std::abs(tr);
}

WinStatus win_predicate(const std::vector<int>& x, const std::vector<int>& a, const MabkGame& game) {
  if (static_cast<int>(x.size()) != game.M || static_cast<int>(a.size()) != game.M)
    throw std::invalid_argument("win_predicate: length mismatch");
  std::size_t xi = 0;
  int parity = 0;
  for (int i = 0; i < game.M; ++i) {
    xi = (xi << 1) | (x[i] & 1);
    parity ^= a[i] & 1;
  }
  const Coeff fx = game.coeffs.f[xi];
  if (fx == Coeff::Perp) return WinStatus::NotPlayed;
  return parity == static_cast<int>(fx) ? WinStatus::Won : WinStatus::Lost;
}

double winning_probability_exact(const DensityMatrix& rho, const MabkGame& game) {
  const int M = game.M;
  for (const auto& p : game.parties)
    if (p.dim() != 2) throw std::invalid_argument("winning_probability_exact: qubit observables required");
  if (rho.dim() != (1 << M)) throw std::invalid_argument("winning_probability_exact: dimension mismatch");
  const std::size_t num_x = std::size_t{1} << M;
  double total = 0.0;
  std::vector<Mat> factors(M);
  for (std::size_t x = 0; x < num_x; ++x) {
    const Coeff fx = game.coeffs.f[x];
    if (fx == Coeff::Perp) continue;  // unwinnable round
    for (int i = 0; i < M; ++i) {
      const int bit = (x >> (M - 1 - i)) & 1;
      factors[i] = bit ? game.parties[i].O1 : game.parties[i].O0;
    }
    const double corr = (kron(factors) * rho.data).trace().real();
    const double sign = fx == Coeff::Plus ? 1.0 : -1.0;
    total += 0.5 * (1.0 + sign * corr);
  }
  return total / static_cast<double>(num_x);
}

std::pair<double, double> p_bounds(int M) {
  if (M < 2) throw std::invalid_argument("p_bounds: M must be at least 2");
  const double fl = std::floor(M / 2.0);
  const double p_min = std::pow(2.0, 2 * fl - M - 1) + std::pow(2.0, fl - M / 2.0 - 2.0);
  const double p_max = std::pow(2.0, 2 * fl - M - 1) + std::pow(2.0, fl - M / 2.0 - 1.5);
  return {p_min, p_max};
}

double beta_from_omega(double omega, int M) {
  const auto [lo, hi] = p_bounds(M);
  if (omega < lo - 1e-9 || omega > hi + 1e-9)
    throw std::invalid_argument("beta_from_omega: omega outside [p_min, p_max]");
  if (M % 2 == 0) return 8.0 * omega - 4.0;
  return 8.0 * std::sqrt(2.0) * omega - 2.0 * std::sqrt(2.0);
}

double omega_from_beta(double beta, int M) {
  if (beta < 2.0 - 1e-9 || beta > tsirelson() + 1e-9)
    throw std::invalid_argument("omega_from_beta: beta outside [2, 2 sqrt 2]");
  if (M % 2 == 0) return (beta + 4.0) / 8.0;
  return (beta + 2.0 * std::sqrt(2.0)) / (8.0 * std::sqrt(2.0));
}

namespace {

// beta on the pure GHZ state for equatorial settings; the GHZ correlator of
// a product of equatorial observables is cos(sum of the chosen angles).
double equatorial_beta(const CoeffTable& table, const std::vector<double>& theta0,
                       const std::vector<double>& theta1) {
  const int M = table.M;
  double sum = 0.0;
  for (std::size_t x = 0; x < table.f.size(); ++x) {
    if (table.f[x] == Coeff::Perp) continue;
    double angle = 0.0;
    for (int i = 0; i < M; ++i) angle += ((x >> (M - 1 - i)) & 1) ? theta1[i] : theta0[i];
    const double sign = table.f[x] == Coeff::Plus ? 1.0 : -1.0;
    sum += sign * std::cos(angle);
  }
  return std::pow(2.0, (4.0 - M) / 2.0) * table.scale * std::abs(sum);
}

double golden_section_max(const std::function<double(double)>& fn, double lo, double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<ObservablePair> optimal_observables(int M) {
  if (M < 2 || M > 8) throw std::invalid_argument("optimal_observables: M out of [2,8]");
  const CoeffTable table = unroll_coefficients(M);

  // Closed-form candidate: theta1 = theta0 + pi/2 per party turns the GHZ
  // trace into Re[e^{iA} c] with c = sum_x (-1)^f(x) i^{|x|}; the common
  // phase A = -arg(c) saturates it.
  cplx c = 0.0;
  for (std::size_t x = 0; x < table.f.size(); ++x) {
    if (table.f[x] == Coeff::Perp) continue;
    int w = 0;
    for (int i = 0; i < M; ++i) w += (x >> i) & 1;
    const cplx iw = std::pow(cplx(0.0, 1.0), w);
    c += (table.f[x] == Coeff::Plus ? 1.0 : -1.0) * iw;
  }
  const double A = -std::arg(c);
  std::vector<double> best0(M, A / M), best1(M, A / M + kPi / 2.0);
  double best = equatorial_beta(table, best0, best1);

  std::mt19937_64 rng(0x5eed00ULL + M);
  std::uniform_real_distribution<double> uni(-kPi, kPi);
  for (int restart = 0; restart < 16; ++restart) {
    std::vector<double> t0 = best0, t1 = best1;
    if (restart > 0) {
      for (int i = 0; i < M; ++i) {
        t0[i] = uni(rng);
        t1[i] = uni(rng);
      }
    }
    double value = equatorial_beta(table, t0, t1);
    for (int sweep = 0; sweep < 200; ++sweep) {
      const double before = value;
      for (int i = 0; i < 2 * M; ++i) {
        std::vector<double>& vec = i < M ? t0 : t1;
        const int idx = i % M;
        const double center = vec[idx];
        auto fn = [&](double th) {
          vec[idx] = th;
          return equatorial_beta(table, t0, t1);
        };
        vec[idx] = golden_section_max(fn, center - kPi, center + kPi, 1e-12);
        value = equatorial_beta(table, t0, t1);
      }
      if (value - before < 1e-13) break;
    }
    if (value > best) {
      best = value;
      best0 = t0;
      best1 = t1;
    }
  }
  if (best < tsirelson() - 1e-6)
    throw std::runtime_error("optimal_observables: optimizer stalled at beta = " + std::to_string(best));

  std::vector<ObservablePair> out;
  out.reserve(M);
  for (int i = 0; i < M; ++i)
    out.emplace_back(equatorial_observable(best0[i]), equatorial_observable(best1[i]));
  return out;
}

double verify_bipartition_factorization(int M, int m, const std::vector<ObservablePair>& parties) {
  if (static_cast<int>(parties.size()) != M)
    throw std::invalid_argument("verify_bipartition_factorization: party count mismatch");
  if (m < 1 || m > M - 1) throw std::invalid_argument("verify_bipartition_factorization: m out of range");

  // Composite operators over the last m parties: the factorization is exact
  // with the tail's own MABK operator and companion in the composite slots
  // (the plain product-observable relabelling leaves a nonzero remainder).
  const std::vector<ObservablePair> tail(parties.begin() + (M - m), parties.end());
  const Mat P0 = m >= 2 ? mabk_operator(tail) : tail.front().O0;
  const Mat P1 = m >= 2 ? mabk_operator_companion(tail) : tail.front().O1;

  const std::vector<ObservablePair> head(parties.begin(), parties.begin() + (M - m));
  Mat k_head, k_head_bar;
  if (M - m >= 2) {
    k_head = mabk_operator(head);
    k_head_bar = mabk_operator_companion(head);
  } else {
    k_head = head.front().O0;
    k_head_bar = head.front().O1;
  }
  const Mat rhs = 0.5 * (kron(k_head, P0 + P1) + kron(k_head_bar, P0 - P1));
  return (mabk_operator(parties) - rhs).norm();
}

}  // namespace dimec
