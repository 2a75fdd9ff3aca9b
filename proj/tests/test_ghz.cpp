#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dimec/ghz.hpp"
#include "dimec/qmath.hpp"

#include <cmath>
#include <random>

using namespace dimec;

namespace {

GhzDiagonalSpec uniform_spec(int M) {
  GhzDiagonalSpec spec;
  spec.M = M;
  const std::size_t n = std::size_t{1} << (M - 1);
  spec.lambda0.assign(n, 1.0 / (2.0 * n));
  spec.lambda1.assign(n, 1.0 / (2.0 * n));
  spec.s.assign(n, 0.0);
  return spec;
}

}  // namespace

TEST_CASE("GHZ basis states") {
  // M=2, v=0, u=0: the Phi+ Bell pair.
  const PureState bell = ghz_basis_state(2, 0, {0});
  CHECK(std::abs(bell.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(bell.amplitudes(3) - 1.0 / std::sqrt(2.0)) < 1e-12);

  // M=3, v=1, u=01: (|001> - |110>)/sqrt(2).
  const PureState s = ghz_basis_state(3, 1, {0, 1});
  CHECK(std::abs(s.amplitudes(1) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(s.amplitudes(6) + 1.0 / std::sqrt(2.0)) < 1e-12);

  // Orthonormality at M=3 via the Gram matrix.
  std::vector<PureState> basis;
  for (int v = 0; v < 2; ++v)
    for (int u = 0; u < 4; ++u) basis.push_back(ghz_basis_state(3, v, {(u >> 1) & 1, u & 1}));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx g = basis[i].amplitudes.dot(basis[j].amplitudes);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
    }

  CHECK_THROWS_AS(ghz_basis_state(3, 0, {0}), std::invalid_argument);
  CHECK_THROWS_AS(ghz_basis_state(3, 2, {0, 0}), std::invalid_argument);
}

TEST_CASE("GHZ basis spans the space for M <= 5") {
  for (int M = 2; M <= 5; ++M) {
    const int D = 1 << M;
    Mat sum = Mat::Zero(D, D);
    for (int v = 0; v < 2; ++v)
      for (int u = 0; u < (1 << (M - 1)); ++u) {
        std::vector<int> ubits(M - 1);
        for (int k = 0; k < M - 1; ++k) ubits[k] = (u >> (M - 2 - k)) & 1;
        const Vec psi = ghz_basis_state(M, v, ubits).amplitudes;
        sum += psi * psi.adjoint();
      }
    CHECK((sum - identity(D)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("rank-d GHZ state") {
  const PureState bell = ghz_rank_d(2, 2);
  CHECK(std::abs(bell.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(bell.amplitudes(3) - 1.0 / std::sqrt(2.0)) < 1e-12);

  const PureState g3 = ghz_rank_d(3, 2);
  CHECK(std::abs(g3.amplitudes(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(g3.amplitudes(7) - 1.0 / std::sqrt(2.0)) < 1e-12);

  for (int d : {2, 3}) {
    const DensityMatrix rho = ghz_rank_d(3, d).to_density();
    for (int party = 0; party < 3; ++party) {
      const DensityMatrix marg = partial_trace(rho, {party});
      CHECK((marg.data - identity(d) / d).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("GHZ-diagonal states") {
  GhzDiagonalSpec pure;
  pure.M = 3;
  pure.lambda0.assign(4, 0.0);
  pure.lambda1.assign(4, 0.0);
  pure.s.assign(4, 0.0);
  pure.lambda0[0] = 1.0;
  const DensityMatrix rho = ghz_diagonal_state(pure);
  const Vec ghz = ghz_rank_d(3, 2).amplitudes;
  CHECK((rho.data - ghz * ghz.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  const DensityMatrix mixed = ghz_diagonal_state(uniform_spec(3));
  CHECK((mixed.data - identity(8) / 8.0).cwiseAbs().maxCoeff() < 1e-12);

  // A generic valid spec passes the density-matrix invariants by
  // construction of the return type; also check the off-diagonal part.
  GhzDiagonalSpec spec = uniform_spec(3);
  spec.lambda0 = {0.3, 0.1, 0.05, 0.05};
  spec.lambda1 = {0.2, 0.1, 0.1, 0.1};
  spec.s = {0.2, 0.05, 0.0, 0.05};
  const DensityMatrix generic = ghz_diagonal_state(spec);
  CHECK(generic.data.trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  GhzDiagonalSpec bad = spec;
  bad.s[0] = 0.9;  // violates the 2x2 PSD condition
  CHECK_THROWS_AS(ghz_diagonal_state(bad), std::invalid_argument);
}

TEST_CASE("GhzDiagonalSpec JSON round trip") {
  GhzDiagonalSpec spec = uniform_spec(3);
  spec.lambda0 = {0.3, 0.1, 0.05, 0.05};
  spec.lambda1 = {0.2, 0.1, 0.1, 0.1};
  spec.s = {0.1, 0.05, 0.0, 0.05};
  const GhzDiagonalSpec back = GhzDiagonalSpec::from_json(spec.to_json());
  CHECK(back.M == spec.M);
  for (std::size_t u = 0; u < spec.lambda0.size(); ++u) {
    CHECK(back.lambda0[u] == doctest::Approx(spec.lambda0[u]).epsilon(1e-15));
    CHECK(back.lambda1[u] == doctest::Approx(spec.lambda1[u]).epsilon(1e-15));
    CHECK(back.s[u] == doctest::Approx(spec.s[u]).epsilon(1e-15));
  }
}

TEST_CASE("CNOT reduction") {
  const UnitaryMatrix u2 = cnot_reduction_unitary(2, 1);
  CHECK((u2.data - identity(4)).cwiseAbs().maxCoeff() < 1e-12);  // no target qubits

  // M=3, M'=1: (|001>+|110>)/sqrt(2) must map to a Bell pair on qubits
  // (0,1) tensored with a computational residual on qubit 2.
  const UnitaryMatrix u = cnot_reduction_unitary(3, 1);
  CHECK((u.data * u.data.adjoint() - identity(8)).cwiseAbs().maxCoeff() < 1e-12);
  const Vec mapped = u.data * ghz_basis_state(3, 0, {0, 1}).amplitudes;
  DensityMatrix full(mapped * mapped.adjoint(), {2, 2, 2});
  const DensityMatrix pair = partial_trace(full, {0, 1});
  // Control-pair marginal is pure and maximally entangled across (0,1).
  CHECK(von_neumann_entropy(pair) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(von_neumann_entropy(partial_trace(full, {0})) == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(cnot_reduction_unitary(3, 3), std::invalid_argument);
}

TEST_CASE("Bell twirl") {
  // Bell-diagonal fixed point.
  const Mat b = bell_basis();
  Mat diag = Mat::Zero(4, 4);
  const double w[4] = {0.4, 0.3, 0.2, 0.1};
  for (int i = 0; i < 4; ++i) diag += w[i] * (b.col(i) * b.col(i).adjoint());
  const DensityMatrix fixed(diag, {2, 2});
  CHECK((bell_twirl(fixed).data - fixed.data).cwiseAbs().maxCoeff() < 1e-12);

  // |00><00| -> (Phi+ + Phi-)/2.
  Mat zz = Mat::Zero(4, 4);
  zz(0, 0) = 1.0;
  const Mat twirled = bell_basis().adjoint() * bell_twirl(DensityMatrix(zz, {2, 2})).data * bell_basis();
  CHECK(twirled(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(twirled(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(twirled(2, 2).real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(twirled(3, 3).real() == doctest::Approx(0.0).epsilon(1e-12));

  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 5; ++t) {
    Mat g(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) g(r, c) = cplx(gauss(rng), gauss(rng));
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    CHECK(bell_twirl(DensityMatrix(rho, {2, 2})).data.trace().real() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("reduction then twirl leaves control pair Bell-diagonal") {
  GhzDiagonalSpec spec = uniform_spec(3);
  spec.lambda0 = {0.35, 0.1, 0.05, 0.05};
  spec.lambda1 = {0.15, 0.1, 0.1, 0.1};
  spec.s = {0.1, 0.0, 0.02, 0.03};
  const DensityMatrix rho = ghz_diagonal_state(spec);
  for (int mp = 1; mp <= 2; ++mp) {
    const UnitaryMatrix u = cnot_reduction_unitary(3, mp);
    DensityMatrix mapped(u.data * rho.data * u.data.adjoint(), {2, 2, 2});
    const DensityMatrix pair = partial_trace(mapped, {0, mp});
    const Mat in_bell = bell_basis().adjoint() * bell_twirl(pair).data * bell_basis();
    double off = 0.0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (r != c) off = std::max(off, std::abs(in_bell(r, c)));
    CHECK(off < 1e-12);
  }
}

TEST_CASE("source models") {
  const DensityMatrix pure = make_source(SourceModel::honest_werner(3, 1.0));
  const Vec ghz = ghz_rank_d(3, 2).amplitudes;
  CHECK((pure.data - ghz * ghz.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  const DensityMatrix flat = make_source(SourceModel::honest_werner(3, 0.0));
  CHECK((flat.data - identity(8) / 8.0).cwiseAbs().maxCoeff() < 1e-12);

  const DensityMatrix w = make_source(SourceModel::honest_werner(3, 0.9));
  const std::vector<double> ev = clamped_spectrum(w.data);
  CHECK(ev.back() == doctest::Approx(0.9 + 0.1 / 8.0).epsilon(1e-12));
  for (int i = 0; i < 7; ++i) CHECK(ev[i] == doctest::Approx(0.1 / 8.0).epsilon(1e-10));

  // 21-point visibility grid passes the density-matrix invariants.
  for (int i = 0; i <= 20; ++i) CHECK_NOTHROW(make_source(SourceModel::honest_werner(3, i / 20.0)));

  const DensityMatrix cls = make_source(SourceModel::classical(3, 0b101));
  CHECK(cls.data(5, 5).real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(SourceModel::honest_werner(3, 1.5), std::invalid_argument);
}
