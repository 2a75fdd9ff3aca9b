#include "dimec/ghz.hpp"

#include <json.hpp>

#include <bitset>
#include <cmath>
#include <stdexcept>

namespace dimec {

namespace {

std::vector<int> qubit_dims(int M) { return std::vector<int>(M, 2); }

std::string bits_to_string(int value, int width) {
  std::string s(width, '0');
  for (int k = 0; k < width; ++k)
    if (value & (1 << (width - 1 - k))) s[k] = '1';
  return s;
}

int string_to_bits(const std::string& s) {
  int v = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("GhzDiagonalSpec: bad bit-string key");
    v = (v << 1) | (c - '0');
  }
  return v;
}

// CNOT on M qubits as a basis permutation: target bit flips when control is 1.
Mat cnot_matrix(int M, int control, int target) {
  const int D = 1 << M;
  Mat out = Mat::Zero(D, D);
  for (int b = 0; b < D; ++b) {
    const int cbit = (b >> (M - 1 - control)) & 1;
    int image = b;
    if (cbit) image ^= 1 << (M - 1 - target);
    out(image, b) = 1.0;
  }
  return out;
}

}  // namespace

void GhzDiagonalSpec::validate() const {
  if (M < 2) throw std::invalid_argument("GhzDiagonalSpec: M must be at least 2");
  const size_t n = size_t{1} << (M - 1);
  if (lambda0.size() != n || lambda1.size() != n || s.size() != n)
    throw std::invalid_argument("GhzDiagonalSpec: tables must have 2^(M-1) entries");
  double total = 0.0;
  for (size_t u = 0; u < n; ++u) {
    if (lambda0[u] < 0.0 || lambda0[u] > 1.0 || lambda1[u] < 0.0 || lambda1[u] > 1.0)
      throw std::invalid_argument("GhzDiagonalSpec: lambda outside [0,1]");
    if (s[u] < 0.0 || s[u] > 1.0) throw std::invalid_argument("GhzDiagonalSpec: s outside [0,1]");
    if (s[u] * s[u] > lambda0[u] * lambda1[u] + 1e-12)
      throw std::invalid_argument("GhzDiagonalSpec: 2x2 block not positive semidefinite");
    total += lambda0[u] + lambda1[u];
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("GhzDiagonalSpec: weights do not sum to one");
}

std::string GhzDiagonalSpec::to_json() const {
  nlohmann::json j;
  j["M"] = M;
  nlohmann::json l0 = nlohmann::json::object(), l1 = nlohmann::json::object(), sv = nlohmann::json::object();
  for (size_t u = 0; u < lambda0.size(); ++u) {
    const std::string key = bits_to_string(static_cast<int>(u), M - 1);
    l0[key] = lambda0[u];
    l1[key] = lambda1[u];
    sv[key] = s[u];
  }
  j["lambda0"] = l0;
  j["lambda1"] = l1;
  j["s"] = sv;
  return j.dump(2);
}

GhzDiagonalSpec GhzDiagonalSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GhzDiagonalSpec spec;
  spec.M = j.at("M").get<int>();
  if (spec.M < 2) throw std::invalid_argument("GhzDiagonalSpec: M must be at least 2");
  const size_t n = size_t{1} << (spec.M - 1);
  spec.lambda0.assign(n, 0.0);
  spec.lambda1.assign(n, 0.0);
  spec.s.assign(n, 0.0);
  for (auto& [key, value] : j.at("lambda0").items()) spec.lambda0.at(string_to_bits(key)) = value.get<double>();
  for (auto& [key, value] : j.at("lambda1").items()) spec.lambda1.at(string_to_bits(key)) = value.get<double>();
  for (auto& [key, value] : j.at("s").items()) spec.s.at(string_to_bits(key)) = value.get<double>();
  spec.validate();
  return spec;
}

SourceModel SourceModel::honest_werner(int M, double visibility) {
  if (M < 2) throw std::invalid_argument("SourceModel: M must be at least 2");
  if (visibility < 0.0 || visibility > 1.0) throw std::invalid_argument("SourceModel: visibility outside [0,1]");
  SourceModel m;
  m.kind = Kind::HonestWerner;
  m.M = M;
  m.visibility = visibility;
  return m;
}

SourceModel SourceModel::custom(DensityMatrix state) {
  SourceModel m;
  m.kind = Kind::CustomDensityMatrix;
  m.M = state.num_subsystems();
  m.state = std::move(state);
  return m;
}

SourceModel SourceModel::classical(int M, std::uint64_t basis_string) {
  if (M < 2) throw std::invalid_argument("SourceModel: M must be at least 2");
  SourceModel m;
  m.kind = Kind::ClassicalDeterministic;
  m.M = M;
  m.basis_string = basis_string;
  return m;
}

PureState ghz_basis_state(int M, int v, const std::vector<int>& u) {
  if (M < 2) throw std::invalid_argument("ghz_basis_state: M must be at least 2");
  if (static_cast<int>(u.size()) != M - 1) throw std::invalid_argument("ghz_basis_state: u must have M-1 bits");
  if (v != 0 && v != 1) throw std::invalid_argument("ghz_basis_state: v must be 0 or 1");
  int u_val = 0, ubar_val = 0;
  for (int b : u) {
    if (b != 0 && b != 1) throw std::invalid_argument("ghz_basis_state: u bits must be 0 or 1");
    u_val = (u_val << 1) | b;
    ubar_val = (ubar_val << 1) | (1 - b);
  }
  const int D = 1 << M;
  Vec amps = Vec::Zero(D);
  const double r = 1.0 / std::sqrt(2.0);
  amps(u_val) = r;                                       // |0,u>
  amps((1 << (M - 1)) | ubar_val) = (v == 0) ? r : -r;   // (-1)^v |1,~u>
  return PureState(amps, qubit_dims(M));
}

PureState ghz_rank_d(int M, int d) {
  if (M < 2 || d < 2) throw std::invalid_argument("ghz_rank_d: need M >= 2 and d >= 2");
  long long D = 1;
  for (int i = 0; i < M; ++i) D *= d;
  Vec amps = Vec::Zero(D);
  long long stride = 0;
  // |i>^(x)M has flat index i * (d^(M-1) + ... + 1).
  long long pos_unit = 0, p = 1;
  for (int i = 0; i < M; ++i) {
    pos_unit += p;
    p *= d;
  }
  (void)stride;
  const double r = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) amps(i * pos_unit) = r;
  return PureState(amps, std::vector<int>(M, d));
}

DensityMatrix ghz_diagonal_state(const GhzDiagonalSpec& spec) {
  spec.validate();
  const int D = 1 << spec.M;
  Mat rho = Mat::Zero(D, D);
  const size_t n = size_t{1} << (spec.M - 1);
  for (size_t u = 0; u < n; ++u) {
    std::vector<int> ubits(spec.M - 1);
    for (int k = 0; k < spec.M - 1; ++k) ubits[k] = (u >> (spec.M - 2 - k)) & 1;
    const Vec psi0 = ghz_basis_state(spec.M, 0, ubits).amplitudes;
    const Vec psi1 = ghz_basis_state(spec.M, 1, ubits).amplitudes;
    rho += spec.lambda0[u] * (psi0 * psi0.adjoint());
    rho += spec.lambda1[u] * (psi1 * psi1.adjoint());
    rho += cplx(0, 1) * spec.s[u] * (psi0 * psi1.adjoint() - psi1 * psi0.adjoint());
  }
  return DensityMatrix(rho, qubit_dims(spec.M));
}

UnitaryMatrix cnot_reduction_unitary(int M, int M_prime) {
  if (M < 2) throw std::invalid_argument("cnot_reduction_unitary: M must be at least 2");
  if (M_prime < 1 || M_prime > M - 1) throw std::invalid_argument("cnot_reduction_unitary: M' out of range");
  const int D = 1 << M;
  Mat U = Mat::Identity(D, D);
  for (int t = 1; t < M_prime; ++t) U = cnot_matrix(M, 0, t) * U;
  for (int t = M_prime + 1; t < M; ++t) U = cnot_matrix(M, M_prime, t) * U;
  return UnitaryMatrix(U);
}

Mat bell_basis() {
  Mat b(4, 4);
  const double r = 1.0 / std::sqrt(2.0);
  b.setZero();
  b(0, 0) = r;  b(3, 0) = r;    // Phi+
  b(0, 1) = r;  b(3, 1) = -r;   // Phi-
  b(1, 2) = r;  b(2, 2) = r;    // Psi+
  b(1, 3) = r;  b(2, 3) = -r;   // Psi-
  return b;
}

DensityMatrix bell_twirl(const DensityMatrix& rho) {
  if (rho.dim() != 4 || rho.dims != std::vector<int>{2, 2})
    throw std::invalid_argument("bell_twirl: input must be a 2-qubit state");
  const Mat xx = kron(pauli_x(), pauli_x());
  const Mat yy = kron(pauli_y(), pauli_y());
  const Mat zz = kron(pauli_z(), pauli_z());
  Mat out = 0.25 * (rho.data + xx * rho.data * xx + yy * rho.data * yy + zz * rho.data * zz);
  out = 0.5 * (out + out.adjoint().eval());
  return DensityMatrix(out, rho.dims);
}

DensityMatrix make_source(const SourceModel& model) {
  switch (model.kind) {
    case SourceModel::Kind::HonestWerner: {
      const int D = 1 << model.M;
      const Vec ghz = ghz_rank_d(model.M, 2).amplitudes;
      Mat rho = model.visibility * (ghz * ghz.adjoint());
      rho += (1.0 - model.visibility) / D * Mat::Identity(D, D);
      return DensityMatrix(rho, qubit_dims(model.M));
    }
    case SourceModel::Kind::CustomDensityMatrix:
      if (!model.state) throw std::invalid_argument("make_source: custom model missing state");
      return *model.state;
    case SourceModel::Kind::ClassicalDeterministic: {
      const int D = 1 << model.M;
      const int idx = static_cast<int>(model.basis_string) & (D - 1);
      Mat rho = Mat::Zero(D, D);
      rho(idx, idx) = 1.0;
      return DensityMatrix(rho, qubit_dims(model.M));
    }
  }
  throw std::logic_error("make_source: unknown kind");
}

}  // namespace dimec
