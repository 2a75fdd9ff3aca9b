#include "dimec/protocol.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace dimec {

namespace {

// splitmix64: counter-based, so per-round and per-trial streams can be
// derived independently of evaluation order.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Stream {
  std::uint64_t state;

  explicit Stream(std::uint64_t s) : state(s) {}
  std::uint64_t next() { return mix64(state++); }
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

Stream round_stream(std::uint64_t seed, std::uint64_t j, std::uint64_t substream) {
  return Stream(mix64(seed ^ mix64(2 * (j + 1) + substream)) << 8);
}

// Per-(party, input-bit) eigenbasis of the observable with the outcome bit
// of each column: 0 for the +1 eigenspace, 1 for the -1 eigenspace.
struct MeasBasis {
  Mat vectors;
  std::vector<int> outcome_bit;
};

struct DeviceTables {
  int M = 0;
  MabkGame game;                               // coefficient table + observables
  std::vector<std::vector<double>> cdf_by_x;   // cumulative P(a|x), index a
  std::vector<std::vector<int>> classical_a;   // classical: x -> output bits

  bool classical() const { return cdf_by_x.empty(); }
};

std::vector<int> unpack_bits(std::size_t value, int width) {
  std::vector<int> bits(width);
  for (int i = 0; i < width; ++i) bits[i] = static_cast<int>((value >> (width - 1 - i)) & 1);
  return bits;
}

DeviceTables build_tables(const SourceModel& source, const DeviceModel& device) {
  DeviceTables t;
  t.M = device.M;
  const std::size_t num_x = std::size_t{1} << device.M;

  if (device.kind == DeviceModel::Kind::ClassicalDeterministic) {
    if (device.strategy.size() != num_x) throw std::invalid_argument("DeviceModel: strategy table size mismatch");
    t.game.M = device.M;
    t.game.coeffs = unroll_coefficients(device.M);
    t.classical_a.resize(num_x);
    for (std::size_t x = 0; x < num_x; ++x) t.classical_a[x] = unpack_bits(device.strategy[x], device.M);
    return t;
  }

  t.game = MabkGame::make(device.observables);
  const DensityMatrix rho = make_source(source);
  long long expected_dim = 1;
  for (const auto& pair : device.observables) expected_dim *= pair.dim();
  if (rho.dim() != expected_dim || rho.num_subsystems() != device.M)
    throw std::invalid_argument("run_protocol: source/device dimension mismatch");

  std::vector<std::vector<MeasBasis>> bases(device.M, std::vector<MeasBasis>(2));
  for (int i = 0; i < device.M; ++i) {
    for (int b = 0; b < 2; ++b) {
      const Mat& o = b ? device.observables[i].O1 : device.observables[i].O0;
      Eigen::SelfAdjointEigenSolver<Mat> es(o);
      MeasBasis mb;
      mb.vectors = es.eigenvectors();
      mb.outcome_bit.resize(o.rows());
      for (int k = 0; k < o.rows(); ++k) mb.outcome_bit[k] = es.eigenvalues()(k) > 0.0 ? 0 : 1;
      bases[i][b] = std::move(mb);
    }
  }

  t.cdf_by_x.resize(num_x);
  for (std::size_t x = 0; x < num_x; ++x) {
    std::vector<Mat> factors(device.M);
    for (int i = 0; i < device.M; ++i) factors[i] = bases[i][(x >> (device.M - 1 - i)) & 1].vectors;
    const Mat V = kron(factors);
    const Vec diag = (V.adjoint() * rho.data * V).diagonal();

    std::vector<double> p(num_x, 0.0);
    const int D = static_cast<int>(diag.size());
    for (int idx = 0; idx < D; ++idx) {
      // Joint eigenvector index -> per-party outcome bits.
      std::size_t a = 0;
      int rem = idx;
      std::vector<int> local(device.M);
      for (int i = device.M - 1; i >= 0; --i) {
        const int d_i = static_cast<int>(bases[i][0].vectors.rows());
        local[i] = rem % d_i;
        rem /= d_i;
      }
      for (int i = 0; i < device.M; ++i) {
        const int bit = bases[i][(x >> (device.M - 1 - i)) & 1].outcome_bit[local[i]];
        a = (a << 1) | bit;
      }
      p[a] += std::max(diag(idx).real(), 0.0);
    }
    double acc = 0.0;
    t.cdf_by_x[x].resize(num_x);
    for (std::size_t a = 0; a < num_x; ++a) {
      acc += p[a];
      t.cdf_by_x[x][a] = acc;
    }
  }
  return t;
}

std::size_t sample_cdf(const std::vector<double>& cdf, double u) {
  const double target = u * cdf.back();
  for (std::size_t i = 0; i < cdf.size(); ++i)
    if (target < cdf[i]) return i;
  return cdf.size() - 1;
}

struct RoundOutcome {
  bool test = false;
  std::size_t x = 0;
  std::size_t a = 0;
  int w = 0;  // 1 iff won
};

RoundOutcome play_round(const DeviceTables& t, const CertificationParams& params, Stream& rng) {
  RoundOutcome out;
  out.test = rng.u01() < params.gamma;
  if (!out.test) return out;
  const std::size_t num_x = std::size_t{1} << t.M;
  out.x = rng.next() & (num_x - 1);
  if (t.classical()) {
    std::size_t a = 0;
    for (int bit : t.classical_a[out.x]) a = (a << 1) | bit;
    out.a = a;
  } else {
    out.a = sample_cdf(t.cdf_by_x[out.x], rng.u01());
  }
  const WinStatus s = win_predicate(unpack_bits(out.x, t.M), unpack_bits(out.a, t.M), t.game);
  out.w = s == WinStatus::Won ? 1 : 0;
  return out;
}

bool abort_decision(long long w_total, const CertificationParams& params) {
  return static_cast<double>(w_total) <
         (params.omega_exp * params.gamma - params.delta_est) * static_cast<double>(params.n);
}

Transcript run_impl(const SourceModel& source, const DeviceModel& device,
                    const CertificationParams& params, std::uint64_t seed, bool with_projection) {
  params.validate();
  if (device.M != params.M) throw std::invalid_argument("run_protocol: device party count mismatch");
  const DeviceTables tables = build_tables(source, device);

  // The projection instrument over the stored (IID) source state.
  std::vector<std::vector<QubitBlock>> cells;
  std::vector<double> block_cdf;
  DensityMatrix rho = make_source(source);
  const bool keep_states = params.n <= 1000 && params.M <= 4;
  if (with_projection && !tables.classical()) {
    for (const auto& pair : device.observables) cells.push_back(qubit_blocks(jordan_decompose(pair)));
    double acc = 0.0;
    for (double p : block_outcome_probabilities(rho, cells)) {
      acc += p;
      block_cdf.push_back(acc);
    }
  }

  Transcript tr;
  tr.params = params;
  tr.seed = seed;
  tr.rounds.reserve(static_cast<std::size_t>(params.n));
  for (long long j = 0; j < params.n; ++j) {
    Stream rng = round_stream(seed, static_cast<std::uint64_t>(j), 0);
    const RoundOutcome o = play_round(tables, params, rng);
    RoundRecord rec;
    rec.j = j;
    rec.T = o.test ? 1 : 0;
    if (o.test) {
      rec.X = unpack_bits(o.x, params.M);
      rec.A = unpack_bits(o.a, params.M);
      rec.W = o.w;
      tr.W_total += o.w;
      ++tr.test_rounds;
    } else if (!block_cdf.empty()) {
      Stream proj = round_stream(seed, static_cast<std::uint64_t>(j), 1);
      const std::size_t outcome = sample_cdf(block_cdf, proj.u01());
      std::size_t rem = outcome;
      rec.D.assign(params.M, 0);
      for (int i = params.M; i-- > 0;) {
        rec.D[i] = static_cast<int>(rem % cells[i].size());
        rem /= cells[i].size();
      }
      if (keep_states) tr.stored_states.push_back(apply_block_projection(rho, cells, rec.D).first);
    } else if (keep_states && !tables.classical()) {
      tr.stored_states.push_back(rho);
    }
    tr.rounds.push_back(std::move(rec));
  }
  tr.aborted = abort_decision(tr.W_total, params);
  return tr;
}

}  // namespace

DeviceModel DeviceModel::honest_optimal(int M) {
  DeviceModel d;
  d.kind = Kind::HonestOptimal;
  d.M = M;
  d.observables = optimal_observables(M);
  return d;
}

DeviceModel DeviceModel::fixed_angles(std::vector<ObservablePair> observables) {
  DeviceModel d;
  d.kind = Kind::FixedAngles;
  d.M = static_cast<int>(observables.size());
  d.observables = std::move(observables);
  return d;
}

DeviceModel DeviceModel::classical(int M, std::vector<int> strategy) {
  DeviceModel d;
  d.kind = Kind::ClassicalDeterministic;
  d.M = M;
  d.strategy = std::move(strategy);
  return d;
}

Transcript run_protocol(const SourceModel& source, const DeviceModel& device,
                        const CertificationParams& params, std::uint64_t seed) {
  return run_impl(source, device, params, seed, false);
}

Transcript run_protocol_with_projection(const SourceModel& source, const DeviceModel& device,
                                        const CertificationParams& params, std::uint64_t seed) {
  return run_impl(source, device, params, seed, true);
}

AbortEstimate estimate_abort_probability(const SourceModel& source, const DeviceModel& device,
                                         const CertificationParams& params, long long trials,
                                         std::uint64_t seed, bool parallel) {
  params.validate();
  if (trials < 100) throw std::invalid_argument("estimate_abort_probability: need at least 100 trials");
  if (device.M != params.M) throw std::invalid_argument("estimate_abort_probability: device party count mismatch");
  const DeviceTables tables = build_tables(source, device);

  auto trial_aborts = [&](long long trial) -> long long {
    const std::uint64_t trial_seed = mix64(seed ^ mix64(static_cast<std::uint64_t>(trial) + 1));
    long long w_total = 0;
    for (long long j = 0; j < params.n; ++j) {
      Stream rng = round_stream(trial_seed, static_cast<std::uint64_t>(j), 0);
      w_total += play_round(tables, params, rng).w;
    }
    return abort_decision(w_total, params) ? 1 : 0;
  };

  long long aborts = 0;
  if (parallel) {
#pragma omp parallel for reduction(+ : aborts) schedule(static)
    for (long long trial = 0; trial < trials; ++trial) aborts += trial_aborts(trial);
  } else {
    for (long long trial = 0; trial < trials; ++trial) aborts += trial_aborts(trial);
  }

  AbortEstimate est;
  est.aborts = aborts;
  est.trials = trials;
  est.rate = static_cast<double>(aborts) / static_cast<double>(trials);
  const double z = 1.959964;
  const double nt = static_cast<double>(trials);
  const double phat = est.rate;
  const double denom = 1.0 + z * z / nt;
  const double center = (phat + z * z / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z * z / (4.0 * nt * nt)) / denom;
  est.lo = std::max(0.0, center - half);
  est.hi = std::min(1.0, center + half);
  return est;
}

std::string transcript_to_jsonl(const Transcript& transcript) {
  std::string out;
  for (const auto& r : transcript.rounds) {
    nlohmann::json j;
    j["j"] = r.j;
    j["T"] = r.T;
    j["X"] = r.T ? nlohmann::json(r.X) : nlohmann::json();
    j["A"] = r.T ? nlohmann::json(r.A) : nlohmann::json();
    j["D"] = r.D.empty() ? nlohmann::json() : nlohmann::json(r.D);
    j["W"] = r.W < 0 ? nlohmann::json() : nlohmann::json(r.W);
    out += j.dump();
    out += '\n';
  }
  nlohmann::json s;
  s["summary"] = {{"n", transcript.params.n},
                  {"W_total", transcript.W_total},
                  {"test_rounds", transcript.test_rounds},
                  {"empirical_omega", transcript.empirical_omega()},
                  {"aborted", transcript.aborted},
                  {"seed", transcript.seed}};
  out += s.dump();
  out += '\n';
  return out;
}

}  // namespace dimec
