#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdisp/impedance.hpp"

#include <cmath>

using namespace mdisp;
using namespace mdisp::impedance;
using tracespace::Family;
using tracespace::SpectralSurface;
using tracespace::SurfaceKind;

namespace {

double max_abs(const MatrixXcd& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

TEST_CASE("mulz: unit impedance reproduces the identity") {
  for (auto [kind, trunc] : {std::pair{SurfaceKind::sphere, 3},
                             std::pair{SurfaceKind::flat_torus, 2}}) {
    SpectralSurface surf = tracespace::build_surface(kind, trunc);
    MatrixXcd g = mulz_matrix(surf, ImpedanceSpec::constant(1.0));
    MatrixXcd id = MatrixXcd::Identity(surf.n_hodge(), surf.n_hodge());
    CHECK(max_abs(g - id) <= 1e-10);
  }
}

TEST_CASE("mulz: constant impedance is a multiple of the identity") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 2);
  Complex alpha(0.7, 0.3);
  MatrixXcd g = mulz_matrix(surf, ImpedanceSpec::constant(alpha));
  MatrixXcd id = MatrixXcd::Identity(surf.n_hodge(), surf.n_hodge());
  CHECK(max_abs(g - alpha * id) <= 1e-10);
}

TEST_CASE("mulz: cos^2(theta) on the degree-one sphere block") {
  // In the degree-one truncation the multiplication matrix of z = cos^2
  // (polar angle) is diagonal: 1/5 on the zonal modes, 2/5 on the sectoral
  // ones, the same for the gradient and curl families.
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 1);
  ImpedanceSpec z = ImpedanceSpec::pointwise(
      [](const Eigen::Vector3d& x, int) { return Complex(x.z() * x.z(), 0.0); },
      "cos2");
  MatrixXcd g = mulz_matrix(surf, z);
  REQUIRE(surf.n_hodge() == 6);
  for (int i = 0; i < 6; ++i) {
    double expected =
        surf.hodge[i].label.find("m+00") != std::string::npos ? 0.2 : 0.4;
    CHECK(std::abs(g(i, i) - expected) <= 1e-12);
    for (int j = 0; j < 6; ++j)
      if (j != i) CHECK(std::abs(g(i, j)) <= 1e-12);
  }
}

TEST_CASE("mulz: polynomial-in-eigenvalue impedance acts diagonally") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 2);
  ImpedanceSpec z = ImpedanceSpec::diagonal({Complex(1.0, 0.0), Complex(0.5, 0.0)});
  MatrixXcd g = mulz_matrix(surf, z);
  for (int j = 0; j < surf.n_hodge(); ++j) {
    const auto& hm = surf.hodge[j];
    double ls = hm.family == Family::harmonic ? 0.0 : hm.lambda * hm.lambda;
    CHECK(std::abs(g(j, j) - Complex(1.0 + 0.5 * ls, 0.0)) <= 1e-13);
    CHECK(g.row(j).cwiseAbs().sum() ==
          doctest::Approx(std::abs(g(j, j))).epsilon(1e-12));
  }
}

TEST_CASE("mulz: negative real part is rejected") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 1);
  CHECK_THROWS(mulz_matrix(surf, ImpedanceSpec::constant(-1.0)));
  CHECK_THROWS(mulz_matrix(surf, ImpedanceSpec::diagonal({Complex(-0.5, 0.0)})));
  CHECK_THROWS(mulz_matrix(
      surf, ImpedanceSpec::pointwise(
                [](const Eigen::Vector3d& x, int) {
                  return Complex(x.z(), 0.0);  // changes sign on the sphere
                },
                "signed")));
}

TEST_CASE("boundary operator: constant impedance gives the weight diagonal") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 2);
  double alpha = 0.7;
  BoundaryOperator bop = boundary_operator(surf, ImpedanceSpec::constant(alpha));
  CHECK(bop.hermiticity_defect <= 1e-12);
  CHECK(bop.accretivity_margin >= -1e-12);
  for (int j = 0; j < surf.n_hodge(); ++j) {
    const auto& hm = surf.hodge[j];
    double expected = hm.family == Family::grad    ? alpha * hm.lambda
                      : hm.family == Family::curl ? alpha / hm.lambda
                                                  : alpha;
    CHECK(std::abs(bop.t(j, j) - expected) <= 1e-10);
  }
}

TEST_CASE("cayley contraction: closed form for constant impedance") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 2);
  for (double alpha : {0.5, 1.0, 2.0}) {
    BoundaryOperator bop =
        boundary_operator(surf, ImpedanceSpec::constant(alpha));
    MatrixXcd k = cayley_kz(bop);
    for (int j = 0; j < surf.n_hodge(); ++j) {
      const auto& hm = surf.hodge[j];
      double t = hm.family == Family::grad    ? alpha * hm.lambda
                 : hm.family == Family::curl ? alpha / hm.lambda
                                             : alpha;
      CHECK(std::abs(k(j, j) - (t - 1.0) / (t + 1.0)) <= 1e-10);
      CHECK(k.row(j).cwiseAbs().sum() - std::abs(k(j, j)) <= 1e-10);
    }
  }
  // matched case: alpha = 1 annihilates the eigenvalue-one modes
  BoundaryOperator bop = boundary_operator(surf, ImpedanceSpec::constant(1.0));
  MatrixXcd k = cayley_kz(bop);
  bool saw_unit = false;
  for (int j = 0; j < surf.n_hodge(); ++j) {
    const auto& hm = surf.hodge[j];
    if (hm.family == Family::harmonic) continue;
    if (std::abs(hm.lambda - 1.0) < 1e-12) {
      saw_unit = true;
      CHECK(std::abs(k(j, j)) <= 1e-12);
    }
  }
  CHECK(saw_unit);
}

TEST_CASE("zero impedance: T = 0 and K = -I") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 1);
  BoundaryOperator bop = boundary_operator(surf, ImpedanceSpec::constant(0.0));
  CHECK(max_abs(bop.t) == 0.0);
  MatrixXcd k = cayley_kz(bop);
  MatrixXcd id = MatrixXcd::Identity(surf.n_hodge(), surf.n_hodge());
  CHECK(max_abs(k + id) <= 1e-14);
}

TEST_CASE("assembled condition: K = -I is the graph of zero, K = +I purely multivalued") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 1);
  const int n = surf.n_hodge();
  MatrixXcd id = MatrixXcd::Identity(n, n);

  BoundaryCondition dir = assemble_condition(surf, -id);
  CHECK(max_abs(dir.theta.second()) <= 1e-14);
  CHECK(dir.theta.rank() == n);
  ConditionVerdict vd = classify_condition(dir);
  CHECK(vd.m_dissipative);
  CHECK(vd.selfadjoint);
  CHECK(vd.relation.is_nonnegative);
  CHECK(vd.recovery_error <= 1e-12);

  BoundaryCondition neu = assemble_condition(surf, id);
  CHECK(max_abs(neu.theta.first()) <= 1e-14);
  CHECK(neu.theta.rank() == n);
  ConditionVerdict vn = classify_condition(neu);
  CHECK(vn.m_dissipative);
  CHECK(vn.selfadjoint);
  CHECK(vn.recovery_error <= 1e-12);
}

TEST_CASE("assembled condition: contraction roundtrip") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 1);
  const int n = surf.n_hodge();
  Rng rng(321);
  for (int trial = 0; trial < 20; ++trial) {
    MatrixXcd k = random_contraction(n, rng);
    BoundaryCondition cond = assemble_condition(surf, k);
    CHECK(cond.theta.rank() == n);
    ConditionVerdict v = classify_condition(cond);
    CHECK(v.m_dissipative);
    CHECK(v.margin <= 1e-10);
    CHECK(v.recovery_error <= 1e-12);
  }
}

TEST_CASE("assembled condition: unitary contractions give selfadjoint relations") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 1);
  const int n = surf.n_hodge();
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    MatrixXcd u = random_unitary(n, rng);
    ConditionVerdict v = classify_condition(assemble_condition(surf, u));
    CHECK(v.m_dissipative);
    CHECK(v.selfadjoint);
    CHECK(v.recovery_error <= 1e-12);
  }
}

TEST_CASE("assembled condition: complex impedance is dissipative, not selfadjoint") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 2);
  BoundaryOperator bop =
      boundary_operator(surf, ImpedanceSpec::constant(Complex(1.0, 2.0)));
  ConditionVerdict v =
      classify_condition(assemble_condition(surf, cayley_kz(bop)));
  CHECK(v.m_dissipative);
  CHECK_FALSE(v.selfadjoint);
  CHECK(v.recovery_error <= 1e-12);
}

TEST_CASE("assembled condition: input validation") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 1);
  const int n = surf.n_hodge();
  CHECK_THROWS(assemble_condition(surf, MatrixXcd::Identity(n + 1, n + 1)));
  CHECK_THROWS(assemble_condition(surf, 2.0 * MatrixXcd::Identity(n, n)));
}

TEST_CASE("extreme extensions: densely defined operator has a unique extension") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 2);
  const int n = surf.n_hodge();
  FkPair pair = fk_extensions(surf, ImpedanceSpec::constant(1.0),
                              MatrixXcd::Identity(n, n));
  CHECK(pair.domain_dim == n);
  CHECK(pair.gap <= 1e-10);
  CHECK(max_abs(pair.k_f - pair.k_k) <= 1e-10);
  CHECK(pair.ordering_margin >= -1e-10);
  // extensions of a real symmetric operator carry Hermitian contractions
  CHECK(max_abs(pair.k_f - pair.k_f.adjoint()) <= 1e-10);
  CHECK(classify_condition(pair.f).m_dissipative);
  CHECK(classify_condition(pair.k).m_dissipative);
}

TEST_CASE("extreme extensions: restricted domain splits into hard/soft walls") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 1);
  const int n = surf.n_hodge();
  const int r = n - 2;
  MatrixXcd dom = MatrixXcd::Identity(n, n).leftCols(r);
  FkPair pair = fk_extensions(surf, ImpedanceSpec::constant(1.0), dom);
  CHECK(pair.domain_dim == r);
  // off the domain the Friedrichs contraction is +1, the Krein one is -1
  for (int j = r; j < n; ++j) {
    CHECK(std::abs(pair.k_f(j, j) - 1.0) <= 1e-10);
    CHECK(std::abs(pair.k_k(j, j) + 1.0) <= 1e-10);
  }
  CHECK(pair.gap >= 0.9);
  CHECK(pair.ordering_margin >= -1e-10);
  CHECK(max_abs(pair.k_f - pair.k_f.adjoint()) <= 1e-10);
  CHECK(max_abs(pair.k_k - pair.k_k.adjoint()) <= 1e-10);
  CHECK(classify_condition(pair.f).m_dissipative);
  CHECK(classify_condition(pair.k).m_dissipative);
}

TEST_CASE("extreme extensions: spherical cap impedance") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 2);
  ImpedanceSpec cap = ImpedanceSpec::spherical_cap(0.5);
  BoundaryOperator bop = boundary_operator(surf, cap);
  CHECK(bop.hermiticity_defect <= 1e-11);
  CHECK(bop.accretivity_margin >= -1e-11);

  MatrixXcd g = mulz_matrix(surf, cap);
  MatrixXcd dom = resolved_domain(g);
  FkPair pair = fk_extensions(surf, cap, dom);
  CHECK(pair.domain_dim == dom.cols());
  CHECK(pair.ordering_margin >= -1e-10);
  CHECK(pair.gap >= -1e-12);
  ConditionVerdict vf = classify_condition(pair.f);
  ConditionVerdict vk = classify_condition(pair.k);
  CHECK(vf.m_dissipative);
  CHECK(vk.m_dissipative);
  CHECK(max_abs(pair.k_f - pair.k_f.adjoint()) <= 1e-9);
  CHECK(max_abs(pair.k_k - pair.k_k.adjoint()) <= 1e-9);
}

TEST_CASE("spherical cap: identical on both components of a disjoint union") {
  SpectralSurface two = tracespace::build_surface(SurfaceKind::two_spheres, 1);
  ImpedanceSpec cap = ImpedanceSpec::spherical_cap(0.8);
  VectorXcd v = cap.values_at_nodes(two);
  const int nq = two.quad.n_nodes();
  REQUIRE(nq % 2 == 0);
  // the quadrature lists component 0 first, then the shifted copy
  for (int k = 0; k < nq / 2; ++k) {
    CHECK(two.quad.component(k) == 0);
    CHECK(two.quad.component(nq / 2 + k) == 1);
    CHECK(v(k) == v(nq / 2 + k));
  }
  double frac = v.real().sum() / nq;
  CHECK(frac > 0.0);
  CHECK(frac < 0.5);
}

TEST_CASE("random impedance: deterministic in the seed") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 2);
  ImpedanceSpec a = sample_random_impedance(surf, 1.2, surf.n_scalar(), 7);
  ImpedanceSpec b = sample_random_impedance(surf, 1.2, surf.n_scalar(), 7);
  ImpedanceSpec c = sample_random_impedance(surf, 1.2, surf.n_scalar(), 8);
  REQUIRE(a.node_values.size() == b.node_values.size());
  CHECK((a.node_values - b.node_values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.node_values - c.node_values).cwiseAbs().maxCoeff() > 0.0);
  CHECK((a.node_values.array() >= 0.0).all());
}

TEST_CASE("random impedance: coefficient statistics match the prior") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 2);
  const double s = 1.2;
  const int nseeds = 1000;
  VectorXd xi0(nseeds), xi3(nseeds);
  for (int t = 0; t < nseeds; ++t) {
    VectorXd xi = random_impedance_coefficients(surf, s, surf.n_scalar(), t);
    xi0(t) = xi(0);
    xi3(t) = xi(3);
  }
  auto check_moments = [&](const VectorXd& sample, double lambda) {
    double mean = sample.mean();
    double var = (sample.array() - mean).square().sum() / (nseeds - 1);
    double target = std::pow(lambda, -2.0 * s);
    CHECK(std::abs(mean) <= 0.1 * std::sqrt(target));
    CHECK(std::abs(var - target) <= 0.15 * target);
  };
  check_moments(xi0, surf.modes[0].lambda);
  check_moments(xi3, surf.modes[3].lambda);
}

TEST_CASE("random impedance: truncation clips roughly half the surface") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 2);
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    ImpedanceSpec z = sample_random_impedance(surf, 1.2, surf.n_scalar(), seed);
    int zeros = 0;
    for (int k = 0; k < z.node_values.size(); ++k)
      if (z.node_values(k) == 0.0) ++zeros;
    double frac = static_cast<double>(zeros) / z.node_values.size();
    CHECK(frac > 0.2);
    CHECK(frac < 0.8);
    // the sampled field still defines a classifiable boundary condition
    BoundaryOperator bop = boundary_operator(surf, z);
    CHECK(bop.accretivity_margin >= -1e-11);
    ConditionVerdict v =
        classify_condition(assemble_condition(surf, cayley_kz(bop)));
    CHECK(v.m_dissipative);
  }
  CHECK_THROWS(sample_random_impedance(surf, 0.4, surf.n_scalar(), 1));
  CHECK_THROWS(sample_random_impedance(surf, 1.2, surf.n_scalar() + 1, 1));
}

TEST_CASE("harmonic rotation leaves the classification invariant") {
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 2);
  SpectralSurface rot = tracespace::build_surface(SurfaceKind::flat_torus, 2);
  MatrixXd q(2, 2);
  q << 0.0, -1.0, 1.0, 0.0;
  rot.rotate_harmonics(q);

  ImpedanceSpec z = ImpedanceSpec::pointwise(
      [](const Eigen::Vector3d& x, int) {
        return Complex(1.0 + 0.5 * std::cos(x.x()), 0.0);
      },
      "wavy");
  BoundaryOperator b0 = boundary_operator(surf, z);
  BoundaryOperator b1 = boundary_operator(rot, z);

  // the operator is conjugated by the block rotation on the harmonic block
  const int ns = surf.n_scalar();
  const int nh = surf.n_hodge();
  MatrixXcd qq = MatrixXcd::Identity(nh, nh);
  qq.block(ns, ns, 2, 2) = q.cast<Complex>();
  CHECK(max_abs(b1.t - qq.adjoint() * b0.t * qq) <= 1e-10);

  ConditionVerdict v0 =
      classify_condition(assemble_condition(surf, cayley_kz(b0)));
  ConditionVerdict v1 =
      classify_condition(assemble_condition(rot, cayley_kz(b1)));
  CHECK(v0.m_dissipative);
  CHECK(v1.m_dissipative);
  CHECK(std::abs(v0.margin - v1.margin) <= 1e-10);
  CHECK(v0.selfadjoint == v1.selfadjoint);
}
