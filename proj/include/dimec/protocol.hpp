#pragma once

// Monte Carlo round engine for the certification protocol (with and without
// the block-projection instrument), device models, transcripts, and abort
// statistics.

#include "dimec/certify.hpp"
#include "dimec/ghz.hpp"
#include "dimec/jordan.hpp"
#include "dimec/mabk.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dimec {

/// Per-round record. Bottom is encoded as -1 (scalars) / empty (vectors):
/// storage rounds have X = A = empty and W = -1; test rounds have D empty.
struct RoundRecord {
  long long j = 0;
  int T = 0;
  std::vector<int> X;
  std::vector<int> A;
  std::vector<int> D;
  int W = -1;
};

struct Transcript {
  std::vector<RoundRecord> rounds;
  long long W_total = 0;
  long long test_rounds = 0;
  bool aborted = false;
  CertificationParams params;
  std::uint64_t seed = 0;
  // Post-instrument storage-round states, retained only for n <= 1000 and
  // M <= 4; otherwise empty.
  std::vector<DensityMatrix> stored_states;

  double empirical_omega() const {
    return test_rounds > 0 ? static_cast<double>(W_total) / static_cast<double>(test_rounds) : 0.0;
  }
};

struct DeviceModel {
  enum class Kind { HonestOptimal, FixedAngles, ClassicalDeterministic };
  Kind kind = Kind::HonestOptimal;
  int M = 0;
  std::vector<ObservablePair> observables;  // quantum kinds
  std::vector<int> strategy;                // classical: input index -> output index

  static DeviceModel honest_optimal(int M);
  static DeviceModel fixed_angles(std::vector<ObservablePair> observables);
  static DeviceModel classical(int M, std::vector<int> strategy);
};

/// Run the certification protocol: per round, test with probability gamma;
/// test rounds draw inputs uniformly over all 2^M strings, sample outputs
/// from the Born rule (or the classical strategy table), and score the win
/// predicate (unwinnable inputs score 0). Aborts when W_total falls below
/// (omega_exp gamma - delta_est) n. Deterministic in (seed, params, models).
Transcript run_protocol(const SourceModel& source, const DeviceModel& device,
                        const CertificationParams& params, std::uint64_t seed);

/// Same engine, but storage rounds additionally apply the per-party Jordan
/// block instrument and record the outcome labels D. Test rounds consume an
/// independent substream, so their statistics match run_protocol seed for
/// seed.
Transcript run_protocol_with_projection(const SourceModel& source, const DeviceModel& device,
                                        const CertificationParams& params, std::uint64_t seed);

struct AbortEstimate {
  double rate = 0.0;
  double lo = 0.0;   // Wilson 95% interval
  double hi = 0.0;
  long long aborts = 0;
  long long trials = 0;
};

/// Monte Carlo abort frequency over independent trials. The parallel path
/// uses OpenMP; per-trial counter-based seeding makes it bit-identical to
/// the serial reference.
AbortEstimate estimate_abort_probability(const SourceModel& source, const DeviceModel& device,
                                         const CertificationParams& params, long long trials,
                                         std::uint64_t seed, bool parallel = true);

/// One JSON object per round plus a final summary object.
std::string transcript_to_jsonl(const Transcript& transcript);

}  // namespace dimec
