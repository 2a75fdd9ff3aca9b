#pragma once

// Dense complex linear algebra and entropy primitives for multi-qubit
// systems of total dimension <= 256. All entropies are in bits.

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace dimec {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline constexpr double kHermTol = 1e-10;
inline constexpr int kMaxDim = 256;

/// Trace-one positive semidefinite Hermitian matrix together with the
/// ordered list of tensor-factor dimensions.
struct DensityMatrix {
  Mat data;
  std::vector<int> dims;

  DensityMatrix(Mat m, std::vector<int> d);

  int dim() const { return static_cast<int>(data.rows()); }
  int num_subsystems() const { return static_cast<int>(dims.size()); }
};

/// Normalized state vector with a subsystem dimension list.
struct PureState {
  Vec amplitudes;
  std::vector<int> dims;

  PureState(Vec v, std::vector<int> d);

  int dim() const { return static_cast<int>(amplitudes.size()); }
  DensityMatrix to_density() const;
};

struct UnitaryMatrix {
  Mat data;

  explicit UnitaryMatrix(Mat m);
  int dim() const { return static_cast<int>(data.rows()); }
};

/// Kronecker product of the factors in list order.
Mat kron(const std::vector<Mat>& factors);
Mat kron(const Mat& a, const Mat& b);

/// Lift an operator acting on the subsystems `where` (given in ascending
/// order) to the full space described by `dims`, identity elsewhere.
Mat lift(const Mat& op, const std::vector<int>& dims, const std::vector<int>& where);

/// Reduced state on the kept subsystems (0-based indices, any order given;
/// output factor order follows ascending index).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Partial trace of an arbitrary (not necessarily Hermitian) matrix.
Mat partial_trace_matrix(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep);

/// -Tr[rho log2 rho]; eigenvalues in [-1e-10, 0) are clamped to zero.
double von_neumann_entropy(const DensityMatrix& rho);

/// H(A|B) = H(AB) - H(B). A and B must partition the subsystems.
double conditional_entropy(const DensityMatrix& rho, const std::vector<int>& A, const std::vector<int>& B);

/// I(A>B) = H(B) - H(AB) = -H(A|B), with B the complement of A.
double coherent_information(const DensityMatrix& rho, const std::vector<int>& A);

/// F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Fidelity against an arbitrary PSD operator (not necessarily trace one).
double fidelity_operator(const Mat& rho, const Mat& x);

/// h2(p) = -p log2 p - (1-p) log2(1-p), endpoints 0.
double binary_entropy(double p);

struct MaxEntropyOptions {
  int max_iterations = 10000;
  double rel_tol = 1e-6;
};

struct MaxEntropyResult {
  double value = 0.0;       // bits
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;    // last relative change of the objective
  std::vector<double> iterates;  // sqrt-fidelity value per iteration
};

/// Non-smooth conditional max-entropy H_max(A|B) = sup_sigma log2 F(rho_AB,
/// I_A (x) sigma_B), located by alternating ascent from the uniform sigma.
MaxEntropyResult max_entropy_conditional(const DensityMatrix& rho, const std::vector<int>& A,
                                         const MaxEntropyOptions& opts = {});

// Helpers shared across modules.
Mat identity(int n);
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

/// Eigenvalues of a Hermitian matrix, ascending, tiny negatives clamped to 0.
std::vector<double> clamped_spectrum(const Mat& herm);

/// Hermitian principal square root (negative eigenvalues clamped to 0).
Mat psd_sqrt(const Mat& herm);

}  // namespace dimec
