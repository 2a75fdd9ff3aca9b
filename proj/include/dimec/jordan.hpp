#pragma once

// Jordan's-lemma block decomposition of a binary-observable pair and the
// per-party block-projection instrument used by the protocol engine.

#include "dimec/mabk.hpp"
#include "dimec/qmath.hpp"

#include <utility>
#include <vector>

namespace dimec {

/// One invariant subspace of a binary-observable pair. For dim-2 blocks the
/// basis columns are chosen so that O0 = sigma_y and O1 = cos(alpha) sigma_y
/// + sin(alpha) sigma_x in the block basis. For dim-1 blocks O1 = +/- O0 on
/// the spanned line; alpha is 0 (same sign) or pi (opposite sign) and
/// o0_sign records the eigenvalue of O0.
struct JordanBlock {
  int dim = 0;          // 1 or 2
  double alpha = 0.0;   // radians, in [0, pi]
  Mat basis;            // d x dim isometry columns
  int o0_sign = 0;      // dim-1 blocks only

  Mat projector() const { return basis * basis.adjoint(); }
};

struct JordanDecomposition {
  std::vector<JordanBlock> blocks;  // sorted by ascending alpha
  UnitaryMatrix basis;              // block columns concatenated

  int dim() const { return basis.dim(); }
};

JordanDecomposition jordan_decompose(const ObservablePair& pair);

/// Qubit register cell for the protocol instrument: dim-2 Jordan blocks pass
/// through; dim-1 blocks are paired into degenerate 2x2 cells (opposite O0
/// signs preferred) so that every post-projection register is a qubit. A
/// lone unpaired dim-1 block (odd device dimension) stays one-dimensional.
struct QubitBlock {
  Mat isometry;         // d x 2 (d x 1 for a lone leftover block)
  double alpha = 0.0;   // angle of the source block (first of a pair)

  Mat projector() const { return isometry * isometry.adjoint(); }
};

std::vector<QubitBlock> qubit_blocks(const JordanDecomposition& decomp);

/// Project rho with (x)_i Pi_{d_i} over the parties' qubit-block cells and
/// renormalize. Returns the post-measurement state (in the original space)
/// and the outcome probability.
std::pair<DensityMatrix, double> apply_block_projection(const DensityMatrix& rho,
                                                        const std::vector<std::vector<QubitBlock>>& cells,
                                                        const std::vector<int>& outcome);

/// Probability of every joint block outcome, indexed in mixed radix with the
/// first party most significant. Sums to 1.
std::vector<double> block_outcome_probabilities(const DensityMatrix& rho,
                                                const std::vector<std::vector<QubitBlock>>& cells);

}  // namespace dimec
