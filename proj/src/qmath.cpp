#include "dimec/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dimec {

namespace {

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

void check_dims(const Mat& m, const std::vector<int>& dims, const char* what) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + ": matrix not square");
  if (dims.empty()) throw std::invalid_argument(std::string(what) + ": empty dimension list");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument(std::string(what) + ": nonpositive subsystem dimension");
  if (product(dims) != m.rows())
    throw std::invalid_argument(std::string(what) + ": dims product does not match matrix side");
}

// Decompose a flat index into per-subsystem indices (row-major, first
// subsystem most significant).
void unflatten(int idx, const std::vector<int>& dims, std::vector<int>& out) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = idx % dims[k];
    idx /= dims[k];
  }
}

int flatten(const std::vector<int>& idx, const std::vector<int>& dims) {
  int f = 0;
  for (size_t k = 0; k < dims.size(); ++k) f = f * dims[k] + idx[k];
  return f;
}

std::vector<int> complement_of(const std::vector<int>& A, int n) {
  std::vector<bool> in(n, false);
  for (int a : A) in[a] = true;
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(Mat m, std::vector<int> d) : data(std::move(m)), dims(std::move(d)) {
  check_dims(data, dims, "DensityMatrix");
  if ((data - data.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(data.trace().real() - 1.0) > kHermTol || std::abs(data.trace().imag()) > kHermTol)
    throw std::invalid_argument("DensityMatrix: trace not one");
  Eigen::SelfAdjointEigenSolver<Mat> es(data, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kHermTol)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

PureState::PureState(Vec v, std::vector<int> d) : amplitudes(std::move(v)), dims(std::move(d)) {
  if (dims.empty()) throw std::invalid_argument("PureState: empty dimension list");
  if (product(dims) != amplitudes.size())
    throw std::invalid_argument("PureState: dims product does not match vector length");
  if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12)
    throw std::invalid_argument("PureState: not normalized");
}

DensityMatrix PureState::to_density() const {
  return DensityMatrix(amplitudes * amplitudes.adjoint(), dims);
}

UnitaryMatrix::UnitaryMatrix(Mat m) : data(std::move(m)) {
  if (data.rows() != data.cols()) throw std::invalid_argument("UnitaryMatrix: not square");
  Mat should_be_id = data * data.adjoint();
  should_be_id -= Mat::Identity(data.rows(), data.cols());
  if (should_be_id.norm() > kHermTol) throw std::invalid_argument("UnitaryMatrix: not unitary");
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat kron(const std::vector<Mat>& factors) {
  if (factors.empty()) throw std::invalid_argument("kron: empty factor list");
  for (const Mat& f : factors)
    if (f.rows() != f.cols()) throw std::invalid_argument("kron: non-square factor");
  Mat out = factors.front();
  for (size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

Mat lift(const Mat& op, const std::vector<int>& dims, const std::vector<int>& where) {
  if (where.empty()) throw std::invalid_argument("lift: empty subsystem list");
  std::vector<int> sub_dims;
  for (int w : where) {
    if (w < 0 || w >= static_cast<int>(dims.size())) throw std::invalid_argument("lift: index out of range");
    sub_dims.push_back(dims[w]);
  }
  if (product(sub_dims) != op.rows()) throw std::invalid_argument("lift: operator dimension mismatch");

  const int n = static_cast<int>(dims.size());
  const int D = product(dims);
  Mat out = Mat::Zero(D, D);
  std::vector<int> ridx(n), cidx(n), rsub(where.size()), csub(where.size());
  for (int r = 0; r < D; ++r) {
    unflatten(r, dims, ridx);
    for (int c = 0; c < D; ++c) {
      unflatten(c, dims, cidx);
      bool diag_elsewhere = true;
      for (int k = 0; k < n && diag_elsewhere; ++k) {
        if (std::find(where.begin(), where.end(), k) == where.end() && ridx[k] != cidx[k])
          diag_elsewhere = false;
      }
      if (!diag_elsewhere) continue;
      for (size_t k = 0; k < where.size(); ++k) {
        rsub[k] = ridx[where[k]];
        csub[k] = cidx[where[k]];
      }
      out(r, c) = op(flatten(rsub, sub_dims), flatten(csub, sub_dims));
    }
  }
  return out;
}

Mat partial_trace_matrix(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep) {
  check_dims(m, dims, "partial_trace");
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  for (int k : keep_sorted)
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw std::invalid_argument("partial_trace: index out of range");
  const std::vector<int> drop = complement_of(keep_sorted, static_cast<int>(dims.size()));

  std::vector<int> keep_dims, drop_dims;
  for (int k : keep_sorted) keep_dims.push_back(dims[k]);
  for (int k : drop) drop_dims.push_back(dims[k]);
  const int Dk = product(keep_dims);
  const int Dd = drop.empty() ? 1 : product(drop_dims);

  const int n = static_cast<int>(dims.size());
  Mat out = Mat::Zero(Dk, Dk);
  std::vector<int> full_r(n), full_c(n);
  std::vector<int> kr(keep_sorted.size()), kc(keep_sorted.size()), dd(drop.size());
  for (int r = 0; r < Dk; ++r) {
    unflatten(r, keep_dims, kr);
    for (int c = 0; c < Dk; ++c) {
      unflatten(c, keep_dims, kc);
      cplx sum = 0.0;
      for (int t = 0; t < Dd; ++t) {
        if (!drop.empty()) unflatten(t, drop_dims, dd);
        for (size_t k = 0; k < keep_sorted.size(); ++k) {
          full_r[keep_sorted[k]] = kr[k];
          full_c[keep_sorted[k]] = kc[k];
        }
        for (size_t k = 0; k < drop.size(); ++k) {
          full_r[drop[k]] = dd[k];
          full_c[drop[k]] = dd[k];
        }
        sum += m(flatten(full_r, dims), flatten(full_c, dims));
      }
      out(r, c) = sum;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  std::vector<int> keep_dims;
  for (int k : keep_sorted) {
    if (k < 0 || k >= rho.num_subsystems()) throw std::invalid_argument("partial_trace: index out of range");
    keep_dims.push_back(rho.dims[k]);
  }
  Mat reduced = partial_trace_matrix(rho.data, rho.dims, keep_sorted);
  // Symmetrize away roundoff before revalidating.
  reduced = 0.5 * (reduced + reduced.adjoint().eval());
  return DensityMatrix(reduced, keep_dims);
}

std::vector<double> clamped_spectrum(const Mat& herm) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& v : ev)
    if (v < 0.0 && v >= -kHermTol) v = 0.0;
  return ev;
}

Mat psd_sqrt(const Mat& herm) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev(i) = ev(i) > 0.0 ? std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double h = 0.0;
  for (double lam : clamped_spectrum(rho.data))
    if (lam > 0.0) h -= lam * std::log2(lam);
  return h;
}

double conditional_entropy(const DensityMatrix& rho, const std::vector<int>& A, const std::vector<int>& B) {
  const int n = rho.num_subsystems();
  std::vector<bool> seen(n, false);
  for (int a : A) {
    if (a < 0 || a >= n || seen[a]) throw std::invalid_argument("conditional_entropy: bad A index");
    seen[a] = true;
  }
  for (int b : B) {
    if (b < 0 || b >= n || seen[b]) throw std::invalid_argument("conditional_entropy: overlapping partition");
    seen[b] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw std::invalid_argument("conditional_entropy: incomplete partition");
  const double h_ab = von_neumann_entropy(rho);
  const double h_b = B.empty() ? 0.0 : von_neumann_entropy(partial_trace(rho, B));
  return h_ab - h_b;
}

double coherent_information(const DensityMatrix& rho, const std::vector<int>& A) {
  return -conditional_entropy(rho, A, complement_of([&] {
                                std::vector<int> a = A;
                                std::sort(a.begin(), a.end());
                                return a;
                              }(),
                              rho.num_subsystems()));
}

double fidelity_operator(const Mat& rho, const Mat& x) {
  Mat sr = psd_sqrt(rho);
  Mat inner = sr * x * sr;
  inner = 0.5 * (inner + inner.adjoint().eval());
  double f = 0.0;
  for (double lam : clamped_spectrum(inner))
    if (lam > 0.0) f += std::sqrt(lam);
  return f * f;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::min(1.0, fidelity_operator(rho.data, sigma.data));
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

MaxEntropyResult max_entropy_conditional(const DensityMatrix& rho, const std::vector<int>& A,
                                         const MaxEntropyOptions& opts) {
  if (rho.dim() > kMaxDim) throw std::invalid_argument("max_entropy_conditional: dimension above desk scale");
  std::vector<int> a_sorted = A;
  std::sort(a_sorted.begin(), a_sorted.end());
  const std::vector<int> B = complement_of(a_sorted, rho.num_subsystems());
  if (a_sorted.empty() || B.empty())
    throw std::invalid_argument("max_entropy_conditional: A and its complement must be nonempty");
  std::vector<int> b_dims;
  for (int b : B) b_dims.push_back(rho.dims[b]);
  int dB = 1;
  for (int d : b_dims) dB *= d;

  const Mat sqrt_rho = psd_sqrt(rho.data);

  // Alternating ascent on sqrt(F): for fixed sigma the optimal contraction
  // unitary comes from a polar decomposition; for fixed unitary the optimal
  // sqrt(sigma) is the normalized positive part of a partial trace.
  Mat S = Mat::Identity(dB, dB) / std::sqrt(static_cast<double>(dB));  // sqrt of uniform sigma
  double obj = 0.0;
  MaxEntropyResult res;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Mat lifted = lift(S, rho.dims, B);
    Mat prod = sqrt_rho * lifted;
    Eigen::JacobiSVD<Mat> svd(prod, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Mat W = svd.matrixV() * svd.matrixU().adjoint();  // maximizes Re Tr[W * prod]

    Mat Y = partial_trace_matrix(W * sqrt_rho, rho.dims, B);
    Mat H = 0.5 * (Y + Y.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    double norm = ev.norm();
    double new_obj;
    if (norm < 1e-300) {
      // No ascent direction; keep the current sigma.
      new_obj = svd.singularValues().sum();
    } else {
      S = es.eigenvectors() * (ev / norm).asDiagonal() * es.eigenvectors().adjoint();
      new_obj = norm;
    }
    res.iterates.push_back(new_obj);
    res.iterations = it + 1;
    res.residual = std::abs(new_obj - obj) / std::max(new_obj, 1e-300);
    obj = new_obj;
    if (it > 0 && res.residual < opts.rel_tol) {
      res.converged = true;
      break;
    }
  }
  res.value = 2.0 * std::log2(std::max(obj, 1e-300));
  return res;
}

Mat identity(int n) { return Mat::Identity(n, n); }

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace dimec
