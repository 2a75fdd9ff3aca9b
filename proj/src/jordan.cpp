#include "dimec/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dimec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-8;

// Basis change taking sigma_x to sigma_y (and back): u = (X + Y)/sqrt(2).
Mat xy_swap() {
  Mat u(2, 2);
  u << 0.0, cplx(1.0, -1.0) / std::sqrt(2.0), cplx(1.0, 1.0) / std::sqrt(2.0), 0.0;
  return u;
}

}  // namespace

JordanDecomposition jordan_decompose(const ObservablePair& pair) {
  const int d = pair.dim();
  const Mat W = pair.O0 * pair.O1;  // unitary; eigen-angles are the block angles

  Eigen::ComplexEigenSolver<Mat> ces(W);
  if (ces.info() != Eigen::Success) throw std::runtime_error("jordan_decompose: eigensolver failed");

  // Cluster eigenvalues by angle; orthonormalize each eigenspace.
  std::vector<double> angles(d);
  for (int i = 0; i < d; ++i) angles[i] = std::arg(ces.eigenvalues()(i));
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return angles[a] < angles[b]; });

  std::vector<JordanBlock> blocks;
  const Mat u = xy_swap();
  int pos = 0;
  while (pos < d) {
    int end = pos + 1;
    while (end < d && angles[order[end]] - angles[order[pos]] < kAngleTol) ++end;
    const double phi = angles[order[pos]];
    Mat V(d, end - pos);
    for (int k = pos; k < end; ++k) V.col(k - pos) = ces.eigenvectors().col(order[k]);
    Eigen::HouseholderQR<Mat> qr(V);
    V = Mat(qr.householderQ()) * Mat::Identity(d, end - pos);

    if (std::abs(phi) < kAngleTol || std::abs(std::abs(phi) - kPi) < kAngleTol) {
      // W eigenvalue +/-1: O1 = +/-O0 on the eigenspace; split along O0.
      const double alpha = std::abs(phi) < kAngleTol ? 0.0 : kPi;
      const Mat small = V.adjoint() * pair.O0 * V;
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (small + small.adjoint()));
      for (int k = 0; k < small.rows(); ++k) {
        JordanBlock b;
        b.dim = 1;
        b.alpha = alpha;
        b.basis = V * es.eigenvectors().col(k);
        b.o0_sign = es.eigenvalues()(k) > 0.0 ? 1 : -1;
        blocks.push_back(std::move(b));
      }
    } else if (phi > 0.0) {
      // e^{i alpha} half of a conjugate pair; the e^{-i alpha} eigenspace is
      // O0 times this one, so consuming it here covers both.
      for (int k = 0; k < V.cols(); ++k) {
        const Vec v = V.col(k);
        Mat pre(d, 2);
        pre.col(0) = v;
        pre.col(1) = pair.O0 * v;  // orthogonal to v: different W eigenspace
        JordanBlock b;
        b.dim = 2;
        b.alpha = phi;
        b.basis = pre * u;  // in this basis O0 = Y, O1 = cos a Y + sin a X
        blocks.push_back(std::move(b));
      }
    }
    pos = end;
  }

  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const JordanBlock& a, const JordanBlock& b) { return a.alpha < b.alpha; });

  Mat full(d, d);
  int col = 0;
  for (const auto& b : blocks) {
    full.block(0, col, d, b.dim) = b.basis;
    col += b.dim;
  }
  if (col != d) throw std::logic_error("jordan_decompose: block dimensions do not sum to the space");

  JordanDecomposition out{std::move(blocks), UnitaryMatrix(full)};

  // Reconstruction check against both inputs.
  auto check = [&](const Mat& o) {
    Mat rebuilt = Mat::Zero(d, d);
    for (const auto& b : out.blocks) rebuilt += b.basis * (b.basis.adjoint() * o * b.basis) * b.basis.adjoint();
    if ((rebuilt - o).norm() > 1e-9)
      throw std::runtime_error("jordan_decompose: reconstruction residual too large");
  };
  check(pair.O0);
  check(pair.O1);
  return out;
}

std::vector<QubitBlock> qubit_blocks(const JordanDecomposition& decomp) {
  const int d = decomp.dim();
  std::vector<QubitBlock> cells;
  std::vector<const JordanBlock*> singles;
  for (const auto& b : decomp.blocks) {
    if (b.dim == 2) {
      QubitBlock q;
      q.isometry = b.basis;
      q.alpha = b.alpha;
      cells.push_back(std::move(q));
    } else {
      singles.push_back(&b);
    }
  }

  // Pair dim-1 blocks, opposite O0 signs first so the paired O0 restriction
  // keeps a +/-1 spectrum whenever possible.
  std::vector<bool> used(singles.size(), false);
  auto pair_up = [&](std::size_t i, std::size_t j) {
    Mat iso(d, 2);
    iso.col(0) = singles[i]->basis.col(0);
    iso.col(1) = singles[j]->basis.col(0);
    QubitBlock q;
    q.isometry = std::move(iso);
    q.alpha = singles[i]->alpha;
    cells.push_back(std::move(q));
    used[i] = used[j] = true;
  };
  for (std::size_t i = 0; i < singles.size(); ++i) {
    if (used[i]) continue;
    std::size_t best = singles.size();
    for (std::size_t j = i + 1; j < singles.size(); ++j) {
      if (used[j]) continue;
      if (singles[j]->o0_sign != singles[i]->o0_sign) {
        best = j;
        break;
      }
      if (best == singles.size()) best = j;
    }
    if (best < singles.size()) pair_up(i, best);
  }
  for (std::size_t i = 0; i < singles.size(); ++i) {
    if (used[i]) continue;
    QubitBlock q;  // odd dimension leaves one unpaired line
    q.isometry = singles[i]->basis;
    q.alpha = singles[i]->alpha;
    cells.push_back(std::move(q));
  }
  return cells;
}

namespace {

Mat joint_projector(const std::vector<std::vector<QubitBlock>>& cells, const std::vector<int>& outcome) {
  std::vector<Mat> factors;
  factors.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) factors.push_back(cells[i].at(outcome[i]).projector());
  return kron(factors);
}

}  // namespace

std::pair<DensityMatrix, double> apply_block_projection(const DensityMatrix& rho,
                                                        const std::vector<std::vector<QubitBlock>>& cells,
                                                        const std::vector<int>& outcome) {
  if (cells.size() != rho.dims.size() || outcome.size() != cells.size())
    throw std::invalid_argument("apply_block_projection: party count mismatch");
  const Mat P = joint_projector(cells, outcome);
  if (P.rows() != rho.dim()) throw std::invalid_argument("apply_block_projection: dimension mismatch");
  const double prob = (P * rho.data).trace().real();
  if (prob <= 1e-14) throw std::invalid_argument("apply_block_projection: zero-probability outcome");
  Mat post = (P * rho.data * P) / prob;
  post = 0.5 * (post + post.adjoint().eval());
  return {DensityMatrix(std::move(post), rho.dims), prob};
}

std::vector<double> block_outcome_probabilities(const DensityMatrix& rho,
                                                const std::vector<std::vector<QubitBlock>>& cells) {
  if (cells.size() != rho.dims.size())
    throw std::invalid_argument("block_outcome_probabilities: party count mismatch");
  std::size_t total = 1;
  for (const auto& c : cells) total *= c.size();
  std::vector<double> probs(total);
  std::vector<int> outcome(cells.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t i = cells.size(); i-- > 0;) {
      outcome[i] = static_cast<int>(rem % cells[i].size());
      rem /= cells[i].size();
    }
    probs[idx] = (joint_projector(cells, outcome) * rho.data).trace().real();
  }
  return probs;
}

}  // namespace dimec
