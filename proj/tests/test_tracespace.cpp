#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdisp/tracespace.hpp"

using namespace mdisp;
using namespace mdisp::tracespace;

namespace {

// quadrature integral of the dot product of two stacked field columns
double quad_dot(const SpectralSurface& s, const VectorXd& a, const VectorXd& b) {
  return (a.array() * s.stacked_weights().array() * b.array()).sum();
}

}  // namespace

TEST_CASE("sphere mode counts and eigenvalues") {
  auto s = build_surface(SurfaceKind::sphere, 1);
  CHECK(s.n_scalar() == 3);
  CHECK(s.b0 == 1);
  CHECK(s.b1 == 0);
  for (const auto& m : s.modes) CHECK(m.lambda * m.lambda == doctest::Approx(2.0));

  // independent oracle: quadrature of |grad Y|^2 must equal l(l+1)
  for (const auto& m : s.modes) {
    double acc = 0.0;
    for (int k = 0; k < s.quad.n_nodes(); ++k)
      acc += s.quad.weights(k) * m.grad.col(k).squaredNorm();
    CHECK(acc == doctest::Approx(2.0).epsilon(1e-12));
  }

  auto s2 = build_surface(SurfaceKind::sphere, 2);
  CHECK(s2.n_scalar() == 8);
  CHECK(s2.n_hodge() == 16);
  CHECK(s2.gram_residual() <= 1e-10);
}

TEST_CASE("scalar modes are orthonormal under quadrature") {
  for (auto kind : {SurfaceKind::sphere, SurfaceKind::flat_torus}) {
    auto s = build_surface(kind, 3);
    int n = s.n_scalar();
    MatrixXd g(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        g(a, b) = (s.modes[a].values.array() * s.quad.weights.array() *
                   s.modes[b].values.array())
                      .sum();
    CHECK((g - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
    // lambda ascending
    for (int a = 1; a < n; ++a) CHECK(s.modes[a].lambda >= s.modes[a - 1].lambda);
  }
}

TEST_CASE("torus counts, betti numbers, harmonic frame") {
  auto t = build_surface(SurfaceKind::flat_torus, 1);
  CHECK(t.n_scalar() == 4);
  CHECK(t.b1 == 2);
  CHECK(t.n_hodge() == 10);
  for (const auto& m : t.modes) CHECK(m.lambda == doctest::Approx(1.0));
  CHECK(t.gram_residual() <= 1e-12);

  auto ts = build_surface(SurfaceKind::two_spheres, 1);
  CHECK(ts.b0 == 2);
  CHECK(ts.n_scalar() == 6);
  auto tt = build_surface(SurfaceKind::two_tori, 1);
  CHECK(tt.b0 == 2);
  CHECK(tt.b1 == 4);
}

TEST_CASE("hodge gram is the identity; grad and curl blocks orthogonal") {
  auto s = build_surface(SurfaceKind::sphere, 4);
  MatrixXd g = gram_matrix(s);
  CHECK((g - MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <=
        1e-10);
  int ns = s.n_scalar();
  for (int a = 0; a < ns; ++a)
    for (int b = 0; b < ns; ++b)
      CHECK(std::abs(g(a, ns + s.b1 + b)) <= 1e-11);  // grad vs curl
}

TEST_CASE("trace weights and norm examples") {
  auto s = build_surface(SurfaceKind::sphere, 2);
  auto w = trace_weights(s);
  int ns = s.n_scalar();
  // lambda = sqrt(2) modes sit first in each block
  CHECK(s.hodge[0].family == Family::grad);
  CHECK(w.s(0) == doctest::Approx(std::pow(2.0, -0.25)));
  CHECK(s.hodge[ns + s.b1].family == Family::curl);
  CHECK(w.s(ns + s.b1) == doctest::Approx(std::pow(2.0, 0.25)));

  VectorXcd curl_unit = VectorXcd::Zero(s.n_hodge());
  curl_unit(ns + s.b1) = 1.0;
  CHECK(morder::norm(w, curl_unit, morder::Side::minus_plus) ==
        doctest::Approx(std::pow(2.0, 0.25)));
  CHECK(morder::norm(w, curl_unit, morder::Side::plus_minus) ==
        doctest::Approx(std::pow(2.0, -0.25)));

  auto t = build_surface(SurfaceKind::flat_torus, 2);
  auto wt = trace_weights(t);
  for (int j = 0; j < t.n_hodge(); ++j)
    if (t.hodge[j].family == Family::harmonic) CHECK(wt.s(j) == 1.0);

  // dual weight product is one
  VectorXd prod = w.s.array() * trace_weights(s).s.cwiseInverse().array();
  CHECK((prod - VectorXd::Ones(prod.size())).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("riesz bases biorthogonal: coefficient and quadrature routes") {
  auto s = build_surface(SurfaceKind::sphere, 4);
  // coefficient route: diag(s)^-1 I diag(s) = I exactly
  VectorXd sv = trace_weights(s).s;
  MatrixXd coeff = sv.cwiseInverse().asDiagonal() *
                   MatrixXd::Identity(s.n_hodge(), s.n_hodge()) *
                   MatrixXd(sv.asDiagonal());
  CHECK((coeff - MatrixXd::Identity(s.n_hodge(), s.n_hodge()))
            .cwiseAbs()
            .maxCoeff() <= 1e-15);
  // quadrature route
  MatrixXd cg = riesz_cross_gram(s);
  CHECK((cg - MatrixXd::Identity(cg.rows(), cg.cols())).cwiseAbs().maxCoeff() <=
        1e-9);
  // pi-basis columns have unit pi-norm by construction
  auto w = trace_weights(s);
  for (int j = 0; j < s.n_hodge(); ++j) {
    VectorXcd c = VectorXcd::Zero(s.n_hodge());
    c(j) = 1.0 / w.s(j);
    CHECK(morder::norm(w, c, morder::Side::minus_plus) == doctest::Approx(1.0));
  }
}

TEST_CASE("upi family: diagonal factors and unitarity") {
  auto s = build_surface(SurfaceKind::flat_torus, 3);
  auto w = trace_weights(s);
  VectorXd inv = upi_factors(s, UpiDirection::upi_inv);
  VectorXd fwd = upi_factors(s, UpiDirection::upi);
  CHECK(((inv.array() * fwd.array()) - 1.0).abs().maxCoeff() <= 1e-15);
  for (int j = 0; j < s.n_hodge(); ++j) {
    const auto& hm = s.hodge[j];
    if (hm.family == Family::grad)
      CHECK(inv(j) == doctest::Approx(std::sqrt(hm.lambda)));
    if (hm.family == Family::curl)
      CHECK(inv(j) == doctest::Approx(1.0 / std::sqrt(hm.lambda)));
    if (hm.family == Family::harmonic) CHECK(inv(j) == 1.0);
  }

  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    VectorXcd c = randn_complex(s.n_hodge(), 1, rng);
    double r1 = morder::norm(w, apply_upi(s, c, UpiDirection::upi_inv),
                             morder::Side::minus_plus) /
                c.norm();
    CHECK(std::abs(r1 - 1.0) <= 1e-13);
    double r2 = morder::norm(w, apply_upi(s, c, UpiDirection::upi_sharp),
                             morder::Side::plus_minus) /
                c.norm();
    CHECK(std::abs(r2 - 1.0) <= 1e-13);
  }
}

TEST_CASE("s_gamma diagonal factors") {
  auto s = build_surface(SurfaceKind::sphere, 2);
  VectorXd sg = s_gamma(s);
  for (int j = 0; j < s.n_hodge(); ++j) {
    const auto& hm = s.hodge[j];
    if (hm.family == Family::grad && std::abs(hm.lambda - std::sqrt(2.0)) < 1e-12)
      CHECK(sg(j) == doctest::Approx(std::pow(2.0, 0.25)));
    if (hm.family == Family::curl && std::abs(hm.lambda - std::sqrt(2.0)) < 1e-12)
      CHECK(sg(j) == doctest::Approx(std::pow(2.0, -0.25)));
    if (hm.family == Family::harmonic) CHECK(sg(j) == 1.0);
  }
  // S_gamma = diag(s)^-1 of the trace weight pair
  CHECK((sg - trace_weights(s).s.cwiseInverse()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("n_cross: pointwise projection, isometry, square") {
  auto s = build_surface(SurfaceKind::sphere, 3);
  MatrixXd m = n_cross_matrix(s);
  int ns = s.n_scalar();

  // independent oracle: project pointwise n(x) cross v_j(x) back onto the
  // basis by quadrature and compare with the matrix column
  const MatrixXd& tab = s.table();
  for (int j : {0, 1, ns - 1}) {
    VectorXd nx(tab.rows());
    for (int k = 0; k < s.quad.n_nodes(); ++k) {
      Eigen::Vector3d v = tab.block<3, 1>(3 * k, j);
      nx.segment<3>(3 * k) = s.quad.normals.col(k).cross(v);
    }
    VectorXd coeffs(s.n_hodge());
    for (int a = 0; a < s.n_hodge(); ++a)
      coeffs(a) = quad_dot(s, nx, tab.col(a));
    CHECK((coeffs - m.col(j)).cwiseAbs().maxCoeff() <= 1e-9);
  }

  // square is -I, operator is L2-isometric
  CHECK((m * m + MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK((m.transpose() * m - MatrixXd::Identity(m.rows(), m.cols()))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  // ||n x u||_ga = ||u||_pi
  auto w = trace_weights(s);
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    VectorXcd u = randn_complex(s.n_hodge(), 1, rng);
    VectorXcd nu = n_cross(s, u);
    double lhs = morder::norm(w, nu, morder::Side::plus_minus);
    double rhs = morder::norm(w, u, morder::Side::minus_plus);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
  }
}

TEST_CASE("n_cross on the torus harmonic frame") {
  auto t = build_surface(SurfaceKind::flat_torus, 1);
  MatrixXd m = n_cross_matrix(t);
  int ns = t.n_scalar();
  MatrixXd hb = m.block(ns, ns, 2, 2);
  // n = e_z: e_x rotates to e_y, e_y to -e_x
  MatrixXd expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK((hb - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("laplace - de rham diagonal action") {
  auto s = build_surface(SurfaceKind::flat_torus, 2);
  VectorXcd c = VectorXcd::Ones(s.n_hodge());
  VectorXcd out = laplace_de_rham(s, c);
  for (int j = 0; j < s.n_hodge(); ++j) {
    const auto& hm = s.hodge[j];
    if (hm.family == Family::harmonic)
      CHECK(std::abs(out(j)) == 0.0);
    else
      CHECK(std::abs(out(j) + hm.lambda * hm.lambda) <= 1e-14);
  }
  // symmetric: <Dev u|v> = <u|Dev v>
  Rng rng(23);
  VectorXcd u = randn_complex(s.n_hodge(), 1, rng);
  VectorXcd v = randn_complex(s.n_hodge(), 1, rng);
  Complex a = v.dot(laplace_de_rham(s, u));
  Complex b = laplace_de_rham(s, v).dot(u);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}

TEST_CASE("sphere lambda=sqrt(2) curl mode norms") {
  auto s = build_surface(SurfaceKind::sphere, 1);
  auto w = trace_weights(s);
  VectorXcd v = VectorXcd::Zero(s.n_hodge());
  v(s.n_scalar()) = 1.0;  // first curl mode
  CHECK(morder::norm(w, v, morder::Side::minus_plus) ==
        doctest::Approx(std::pow(2.0, 0.25)));
  CHECK(morder::norm(w, v, morder::Side::plus_minus) ==
        doctest::Approx(std::pow(2.0, -0.25)));
}

TEST_CASE("gamma norm agrees with the duality supremum") {
  auto s = build_surface(SurfaceKind::flat_torus, 2);
  auto w = trace_weights(s);
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    VectorXcd h = randn_complex(s.n_hodge(), 1, rng);
    double closed = morder::norm(w, h, morder::Side::plus_minus);
    double sup = morder::dual_norm_sup(w, h, morder::Side::plus_minus, 20, t);
    CHECK(std::abs(closed - sup) <= 1e-10 * std::max(1.0, closed));
  }
}

TEST_CASE("harmonic frame rotation leaves structure invariant") {
  auto t = build_surface(SurfaceKind::flat_torus, 2);
  MatrixXd g0 = gram_matrix(t);
  VectorXd w0 = trace_weights(t).s;
  MatrixXd m0 = n_cross_matrix(t);

  double angle = 0.73;
  MatrixXd q(2, 2);
  q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  t.rotate_harmonics(q);

  CHECK((gram_matrix(t) - g0).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((trace_weights(t).s - w0).cwiseAbs().maxCoeff() == 0.0);
  MatrixXd m1 = n_cross_matrix(t);
  int ns = t.n_scalar();
  MatrixXd hb0 = m0.block(ns, ns, 2, 2), hb1 = m1.block(ns, ns, 2, 2);
  CHECK((hb1 - q.transpose() * hb0 * q).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((m1 * m1 + MatrixXd::Identity(m1.rows(), m1.cols())).cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("input validation") {
  CHECK_THROWS(build_surface(SurfaceKind::sphere, 0));
  CHECK_THROWS(surface_kind_from_string("klein_bottle"));
  auto t = build_surface(SurfaceKind::flat_torus, 1);
  MatrixXd notq(2, 2);
  notq << 1, 1, 0, 1;
  CHECK_THROWS(t.rotate_harmonics(notq));
  CHECK_THROWS(apply_upi(t, VectorXcd::Zero(3), UpiDirection::upi));
}
