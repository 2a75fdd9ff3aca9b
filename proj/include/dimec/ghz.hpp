#pragma once

// GHZ-basis construction, GHZ-diagonal states, the CNOT reduction to
// Bell-pair form, Bell twirling, and noisy source models.

#include "dimec/qmath.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dimec {

/// Weight tables for a GHZ-diagonal M-qubit state. Tables are indexed by the
/// integer value of the (M-1)-bit string u (first bit most significant).
struct GhzDiagonalSpec {
  int M = 0;
  std::vector<double> lambda0;
  std::vector<double> lambda1;
  std::vector<double> s;

  void validate() const;

  std::string to_json() const;
  static GhzDiagonalSpec from_json(const std::string& text);
};

struct SourceModel {
  enum class Kind { HonestWerner, CustomDensityMatrix, ClassicalDeterministic };
  Kind kind = Kind::HonestWerner;
  int M = 0;
  double visibility = 1.0;                  // honest-werner only
  std::optional<DensityMatrix> state;       // custom only
  std::uint64_t basis_string = 0;           // classical-deterministic product state |b_1...b_M>

  static SourceModel honest_werner(int M, double visibility);
  static SourceModel custom(DensityMatrix state);
  static SourceModel classical(int M, std::uint64_t basis_string = 0);
};

/// |psi_{v,u}> = (|0,u> + (-1)^v |1,~u>)/sqrt(2), u given as M-1 bits.
PureState ghz_basis_state(int M, int v, const std::vector<int>& u);

/// Rank-d GHZ state (1/sqrt(d)) sum_i |i>^(x)M on M d-dimensional parties.
PureState ghz_rank_d(int M, int d);

DensityMatrix ghz_diagonal_state(const GhzDiagonalSpec& spec);

/// Local unitary of CNOTs that maps every GHZ-basis element to a Bell pair
/// on qubits (0, M') tensored with computational residuals. Qubit 0 controls
/// the first partition (size M'), qubit M' controls the complement.
UnitaryMatrix cnot_reduction_unitary(int M, int M_prime);

/// (1/4)(rho + XX rho XX + YY rho YY + ZZ rho ZZ) on a 2-qubit state.
DensityMatrix bell_twirl(const DensityMatrix& rho);

/// Bell basis columns in the fixed order (Phi+, Phi-, Psi+, Psi-).
Mat bell_basis();

DensityMatrix make_source(const SourceModel& model);

}  // namespace dimec
