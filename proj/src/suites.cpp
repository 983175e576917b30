#include "mdisp/suites.hpp"

#include "mdisp/impedance.hpp"
#include "mdisp/lapack.hpp"
#include "mdisp/linrel.hpp"
#include "mdisp/maxwell1d.hpp"
#include "mdisp/morder.hpp"
#include "mdisp/tracespace.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mdisp::suites {

using namespace mdisp;
using tracespace::Family;
using tracespace::SpectralSurface;
using tracespace::SurfaceKind;
using tracespace::UpiDirection;

namespace {

const Complex I(0, 1);

double max_abs(const MatrixXcd& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

// ---- 1: biorthogonality of the two trace bases ---------------------------

CriterionResult crit_biorthogonality() {
  CriterionResult r{1, "trace-basis biorthogonality", false, false, 0.0, 1e-9};
  double worst_coeff = 0.0, worst_quad = 0.0;
  for (auto [kind, trunc] : {std::pair{SurfaceKind::sphere, 8},
                             std::pair{SurfaceKind::flat_torus, 4}}) {
    SpectralSurface surf = tracespace::build_surface(kind, trunc);
    const int n = surf.n_hodge();
    // coefficient route: the pairing matrix of the two scaled bases
    VectorXd s = tracespace::trace_weights(surf).s;
    MatrixXd coeff = s.cwiseInverse().asDiagonal() * MatrixXd::Identity(n, n) *
                     s.asDiagonal();
    worst_coeff = std::max(worst_coeff,
                           (coeff - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
    // quadrature route through the pointwise tables
    MatrixXd cross = tracespace::riesz_cross_gram(surf);
    worst_quad = std::max(
        worst_quad, (cross - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  r.measured = worst_quad;
  r.pass = worst_coeff <= 1e-12 && worst_quad <= 1e-9;
  std::ostringstream os;
  os << "coefficient residual " << worst_coeff << ", quadrature residual "
     << worst_quad;
  r.detail = os.str();
  return r;
}

// ---- 2: the transfer maps are unitary ------------------------------------

CriterionResult crit_unitarity() {
  CriterionResult r{2, "trace transfer maps are unitary", false, false, 0.0,
                    1e-12};
  double worst = 0.0;
  for (auto [kind, trunc] : {std::pair{SurfaceKind::sphere, 6},
                             std::pair{SurfaceKind::flat_torus, 4}}) {
    SpectralSurface surf = tracespace::build_surface(kind, trunc);
    morder::MOrderWeights w = tracespace::trace_weights(surf);
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
      VectorXcd c = randn_complex(surf.n_hodge(), 1, rng);
      double r1 = morder::norm(w, tracespace::apply_upi(surf, c, UpiDirection::upi_inv),
                               morder::Side::minus_plus) /
                  c.norm();
      double r2 = morder::norm(w, tracespace::apply_upi(surf, c, UpiDirection::upi_sharp),
                               morder::Side::plus_minus) /
                  c.norm();
      worst = std::max({worst, std::abs(r1 - 1.0), std::abs(r2 - 1.0)});
    }
  }
  r.measured = worst;
  r.pass = worst <= r.tolerance;
  return r;
}

// ---- 3: duality of the weighted norm pair --------------------------------

CriterionResult crit_duality() {
  CriterionResult r{3, "norm pair duality (sup form)", false, false, 0.0,
                    1e-10};
  Rng rng(23);
  double worst = 0.0;
  VectorXd s = (VectorXd::Random(12).cwiseAbs().array() + 0.1).matrix();
  morder::MOrderWeights w(s);
  for (int t = 0; t < 100; ++t) {
    VectorXcd h = randn_complex(12, 1, rng);
    for (morder::Side side :
         {morder::Side::minus_plus, morder::Side::plus_minus}) {
      double closed = morder::norm(w, h, side);
      double sup = morder::dual_norm_sup(w, h, side, 64, 300 + t);
      worst = std::max(worst, std::abs(closed - sup));
    }
  }
  r.measured = worst;
  r.pass = worst <= r.tolerance;
  return r;
}

// ---- 4: Cayley transform round trips -------------------------------------

CriterionResult crit_cayley() {
  CriterionResult r{4, "Cayley transform round trip", false, false, 0.0,
                    1e-12};
  double worst = 0.0, anchors = 0.0;
  Rng rng(31);
  for (int n = 1; n <= 8; ++n) {
    linrel::PivotSpace sp(n);
    // fixed points of the construction
    MatrixXcd id = MatrixXcd::Identity(n, n);
    anchors = std::max(
        anchors,
        max_abs(linrel::cayley(linrel::LinearRelation::graph(sp, -I * id))
                    .matrix()));
    anchors = std::max(
        anchors,
        max_abs(linrel::cayley(
                    linrel::LinearRelation::graph(sp, MatrixXcd::Zero(n, n)))
                    .matrix() +
                id));
    anchors = std::max(
        anchors,
        max_abs(linrel::cayley(linrel::LinearRelation::pure_multivalued(sp))
                    .matrix() -
                id));
    for (int t = 0; t < 100; ++t) {
      MatrixXcd k = random_contraction(n, rng);
      linrel::LinearRelation theta = linrel::inverse_cayley(sp, k);
      MatrixXcd back = linrel::cayley(theta).matrix();
      worst = std::max(worst, max_abs(back - k));
      linrel::LinearRelation again = linrel::inverse_cayley(sp, back);
      worst = std::max(worst, linrel::subspace_distance(theta, again));
    }
  }
  r.measured = std::max(worst, anchors);
  r.pass = worst <= r.tolerance && anchors <= 1e-14;
  std::ostringstream os;
  os << "roundtrip " << worst << ", anchors " << anchors;
  r.detail = os.str();
  return r;
}

// ---- 5: constant impedance diagonalizes ----------------------------------

CriterionResult crit_constant_impedance() {
  CriterionResult r{5, "constant impedance contraction is diagonal", false,
                    false, 0.0, 1e-12};
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, 6);
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    impedance::BoundaryOperator bop = impedance::boundary_operator(
        surf, impedance::ImpedanceSpec::constant(alpha));
    MatrixXcd k = impedance::cayley_kz(bop);
    for (int i = 0; i < surf.n_hodge(); ++i) {
      const auto& hm = surf.hodge[i];
      double t = hm.family == Family::grad    ? alpha * hm.lambda
                 : hm.family == Family::curl ? alpha / hm.lambda
                                             : alpha;
      worst = std::max(worst, std::abs(k(i, i) - (t - 1.0) / (t + 1.0)));
      for (int j = 0; j < surf.n_hodge(); ++j)
        if (j != i) worst = std::max(worst, std::abs(k(i, j)));
    }
  }
  r.measured = worst;
  r.pass = worst <= r.tolerance;
  return r;
}

MatrixXcd weighted_orthonormalize_cols(const MatrixXcd& m);

// ---- 6: hard/soft extension ordering -------------------------------------

CriterionResult crit_fk_ordering() {
  CriterionResult r{6, "extreme extensions bracket the resolvents", false,
                    false, 0.0, 1e-10};
  double worst = 0.0;  // most negative ordering eigenvalue, sign flipped
  Rng rng(57);
  for (int seed = 0; seed < 100; ++seed) {
    int n = 2 + static_cast<int>(rng.next_u64() % 7);  // dims 2..8
    int rr = 1 + static_cast<int>(rng.next_u64() % n);
    linrel::PivotSpace sp(n);
    MatrixXcd g = randn_complex(n, n, rng);
    MatrixXcd a = g * g.adjoint();  // Hermitian PSD
    MatrixXcd dom = weighted_orthonormalize_cols(randn_complex(n, rr, rng));
    linrel::LinearRelation psi =
        linrel::LinearRelation::graph_on(sp, dom, a * dom);
    linrel::LinearRelation f = linrel::friedrichs(psi);
    linrel::LinearRelation k = linrel::krein(psi);
    MatrixXcd rf = linrel::resolvent_of_relation(f);
    MatrixXcd rk = linrel::resolvent_of_relation(k);
    worst = std::max(worst, -eig_min_hermitian(rk - rf));
    worst = std::max(worst, -eig_min_hermitian(rf));
  }
  // two-dimensional worked case: multiplication by a on the first axis only
  const double a = 3.0;
  linrel::PivotSpace sp(2);
  MatrixXcd dom(2, 1);
  dom << 1.0, 0.0;
  linrel::LinearRelation psi =
      linrel::LinearRelation::graph_on(sp, dom, a * dom);
  MatrixXcd rf = linrel::resolvent_of_relation(linrel::friedrichs(psi));
  MatrixXcd rk = linrel::resolvent_of_relation(linrel::krein(psi));
  MatrixXcd ef = MatrixXcd::Zero(2, 2), ek = MatrixXcd::Zero(2, 2);
  ef(0, 0) = ek(0, 0) = 1.0 / (1.0 + a);
  ek(1, 1) = 1.0;
  double example = std::max(max_abs(rf - ef), max_abs(rk - ek));
  r.measured = std::max(worst, example);
  r.pass = worst <= r.tolerance && example <= 1e-12;
  std::ostringstream os;
  os << "ordering deficit " << worst << ", worked example residual " << example;
  r.detail = os.str();
  return r;
}

// ---- 7: integration-by-parts identity ------------------------------------

CriterionResult crit_green() {
  CriterionResult r{7, "boundary pairing identity", false, false, 0.0, 1e-10};
  using namespace maxwell1d;
  Maxwell1DModel model;
  Field psi{
      [](double x) { return Complex(std::sin(2 * x), std::cos(x)); },
      [](double x) { return Complex(std::exp(x), 0.5 * x * x); },
      [](double x) { return Complex(2 * std::cos(2 * x), -std::sin(x)); },
      [](double x) { return Complex(std::exp(x), x); },
  };
  Field phi{
      [](double x) { return Complex(x * x * x - x, 2 * x); },
      [](double x) { return Complex(1 - x * x, x * x * x); },
      [](double x) { return Complex(3 * x * x - 1, 2); },
      [](double x) { return Complex(-2 * x, 3 * x * x); },
  };
  double continuum = std::max({green_identity_residual(model, psi, phi),
                               green_identity_residual(model, phi, psi),
                               green_identity_residual(model, psi, psi)});

  // discrete analogue: interior-supported fields see a symmetric operator
  double discrete = 0.0;
  Rng rng(71);
  DiscreteGenerator gen = build_generator_impedance(model, 2.0, 0.5, 400);
  double scale = operator_norm_est(gen.scaled());
  const int np = gen.n + 1;
  for (int t = 0; t < 20; ++t) {
    VectorXcd u = randn_complex(gen.size(), 1, rng);
    VectorXcd v = randn_complex(gen.size(), 1, rng);
    for (int idx : {0, np - 1, np, 2 * np - 1}) u(idx) = v(idx) = 0.0;
    Complex defect = gen.inner(gen.m * u, v) - gen.inner(u, gen.m * v);
    double norms = std::sqrt(std::real(gen.inner(u, u)) *
                             std::real(gen.inner(v, v)));
    discrete = std::max(discrete, std::abs(defect) / (scale * norms));
  }
  r.measured = std::max(continuum, discrete);
  r.pass = continuum <= 1e-10 && discrete <= 1e-13;
  std::ostringstream os;
  os << "continuum " << continuum << ", discrete (relative) " << discrete;
  r.detail = os.str();
  return r;
}

// ---- 8: numerical range and resolvent bound ------------------------------

CriterionResult crit_range() {
  CriterionResult r{8, "spectrum and resolvent stay dissipative", false, false,
                    0.0, 1.0 + 1e-8};
  using namespace maxwell1d;
  Maxwell1DModel model;
  Rng rng(83);
  double worst_im = 0.0, worst_bound = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    MatrixXcd k22 = random_contraction(2, rng);
    DiscreteGenerator gen = build_generator(model, k22, 400);
    auto grid = default_lambda_grid(gen, 200, 5000 + trial);
    RangeReport rep = numerical_range_and_resolvent(gen, grid);
    worst_im = std::max(worst_im, rep.max_im_eig / rep.norm_scale);
    worst_bound = std::max(worst_bound, rep.max_bound);
  }
  r.measured = worst_bound;
  r.pass = worst_im <= 1e-10 && worst_bound <= 1.0 + 1e-8;
  std::ostringstream os;
  os << "max Im(eig)/||M|| " << worst_im << ", max Im(l)*||R(l)|| "
     << worst_bound;
  r.detail = os.str();
  return r;
}

// ---- 9: time stepping ----------------------------------------------------

CriterionResult crit_evolution() {
  CriterionResult r{9, "trapezoidal evolution: decay, conservation, spectrum",
                    false, false, 0.0, 1e-3};
  using namespace maxwell1d;
  Maxwell1DModel model;
  const double pi = 3.14159265358979323846;

  // conservative wall: energy constant over 1000 steps
  DiscreteGenerator cons =
      build_generator(model, -Eigen::Matrix2cd::Identity(), 128);
  auto trace_c = evolve_cn(cons, gaussian_pulse(cons, 0.5, 0.07), 1e-3, 1000);
  double e0 = trace_c.front().energy, drift = 0.0;
  for (const auto& s : trace_c)
    drift = std::max(drift, std::abs(s.energy - e0) / e0);

  // dissipative wall: energy monotone to 1e-12
  DiscreteGenerator diss = build_generator_impedance(model, 1.0, 0.5, 128);
  auto trace_d = evolve_cn(diss, gaussian_pulse(diss, 0.5, 0.07), 1e-3, 1000);
  double mono = 0.0;
  for (size_t s = 1; s < trace_d.size(); ++s)
    mono = std::max(mono, (trace_d[s].energy - trace_d[s - 1].energy) /
                              trace_d.front().energy);

  // electric-wall spectrum at n = 400: {k pi} plus a zero mode
  DiscreteGenerator wall =
      build_generator(model, -Eigen::Matrix2cd::Identity(), 400);
  VectorXcd eigs = lapackw::eigenvalues(wall.scaled());
  double spec = eigs.cwiseAbs().minCoeff();  // zero mode
  for (int k = 1; k <= 5; ++k) {
    double best = 1e9;
    for (int j = 0; j < eigs.size(); ++j)
      best = std::min(best, std::abs(eigs(j) - Complex(k * pi, 0)));
    spec = std::max(spec, best / (k * pi));
  }

  // spatial convergence of the first cavity frequency
  std::vector<double> errs;
  for (int n : {40, 80, 160}) {
    DiscreteGenerator g = build_generator(model, -Eigen::Matrix2cd::Identity(), n);
    VectorXcd e = lapackw::eigenvalues(g.scaled());
    double best = 1e9;
    for (int j = 0; j < e.size(); ++j)
      best = std::min(best, std::abs(e(j) - Complex(pi, 0)));
    errs.push_back(best);
  }
  double order = std::min(std::log2(errs[0] / errs[1]),
                          std::log2(errs[1] / errs[2]));

  r.measured = std::max({drift, mono, spec});
  r.pass = drift <= 1e-10 && mono <= 1e-12 && spec <= 1e-3 && order >= 1.9;
  std::ostringstream os;
  os << "energy drift " << drift << ", monotonicity deficit " << mono
     << ", spectrum error " << spec << ", order " << order;
  r.detail = os.str();
  return r;
}

// ---- 10: unit impedance is the identity ----------------------------------

CriterionResult crit_unit_impedance() {
  CriterionResult r{10, "unit impedance multiplies by one", false, false, 0.0,
                    1e-10};
  double worst = 0.0;
  for (auto [kind, trunc] : {std::pair{SurfaceKind::sphere, 6},
                             std::pair{SurfaceKind::flat_torus, 4}}) {
    SpectralSurface surf = tracespace::build_surface(kind, trunc);
    MatrixXcd g =
        impedance::mulz_matrix(surf, impedance::ImpedanceSpec::constant(1.0));
    worst = std::max(
        worst,
        max_abs(g - MatrixXcd::Identity(surf.n_hodge(), surf.n_hodge())));
  }
  r.measured = worst;
  r.pass = worst <= r.tolerance;
  return r;
}

// ---- 11: harmonic basis rotation invariance ------------------------------

CriterionResult crit_rotation() {
  CriterionResult r{11, "harmonic basis rotation invariance", false, false,
                    0.0, 1e-10};
  SpectralSurface surf = tracespace::build_surface(SurfaceKind::flat_torus, 4);
  SpectralSurface rot = tracespace::build_surface(SurfaceKind::flat_torus, 4);
  MatrixXd q(2, 2);
  double c = std::cos(0.7), s = std::sin(0.7);
  q << c, -s, s, c;
  rot.rotate_harmonics(q);
  impedance::ImpedanceSpec z = impedance::ImpedanceSpec::pointwise(
      [](const Eigen::Vector3d& x, int) {
        return Complex(1.0 + 0.5 * std::cos(x.x()) + 0.25 * std::sin(x.y()),
                       0.0);
      },
      "wavy");
  impedance::BoundaryOperator b0 = impedance::boundary_operator(surf, z);
  impedance::BoundaryOperator b1 = impedance::boundary_operator(rot, z);
  const int ns = surf.n_scalar(), nh = surf.n_hodge();
  MatrixXcd qq = MatrixXcd::Identity(nh, nh);
  qq.block(ns, ns, 2, 2) = q.cast<Complex>();
  double conj = max_abs(b1.t - qq.adjoint() * b0.t * qq);
  auto v0 = impedance::classify_condition(
      impedance::assemble_condition(surf, impedance::cayley_kz(b0)));
  auto v1 = impedance::classify_condition(
      impedance::assemble_condition(rot, impedance::cayley_kz(b1)));
  double margin_gap = std::abs(v0.margin - v1.margin);
  r.measured = std::max(conj, margin_gap);
  r.pass = r.measured <= r.tolerance && v0.m_dissipative && v1.m_dissipative;
  std::ostringstream os;
  os << "conjugation residual " << conj << ", margin gap " << margin_gap;
  r.detail = os.str();
  return r;
}

// ---- 12: extension gap for the cap impedance (reported) ------------------

CriterionResult crit_cap_gap() {
  CriterionResult r{12, "hard/soft gap for the cap impedance (informational)",
                    true, true, 0.0, 0.0};
  std::ostringstream os;
  os << "gap by truncation:";
  for (int lmax : {4, 6, 8}) {
    SpectralSurface surf = tracespace::build_surface(SurfaceKind::sphere, lmax);
    impedance::ImpedanceSpec cap = impedance::ImpedanceSpec::spherical_cap(0.5);
    MatrixXcd g = impedance::mulz_matrix(surf, cap);
    MatrixXcd dom = impedance::resolved_domain(g);
    impedance::FkPair pair = impedance::fk_extensions(surf, cap, dom);
    os << " L=" << lmax << " gap=" << pair.gap
       << " dim=" << pair.domain_dim << "/" << surf.n_hodge();
    r.measured = pair.gap;
    r.pass = r.pass && pair.ordering_margin >= -1e-10;
  }
  r.detail = os.str();
  return r;
}

// column orthonormalization helper used by criterion 6
MatrixXcd weighted_orthonormalize_cols(const MatrixXcd& m) {
  Eigen::HouseholderQR<MatrixXcd> qr(m);
  return qr.householderQ() * MatrixXcd::Identity(m.rows(), m.cols());
}

}  // namespace

CriterionResult run_criterion(int id) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = crit_biorthogonality(); break;
    case 2: r = crit_unitarity(); break;
    case 3: r = crit_duality(); break;
    case 4: r = crit_cayley(); break;
    case 5: r = crit_constant_impedance(); break;
    case 6: r = crit_fk_ordering(); break;
    case 7: r = crit_green(); break;
    case 8: r = crit_range(); break;
    case 9: r = crit_evolution(); break;
    case 10: r = crit_unit_impedance(); break;
    case 11: r = crit_rotation(); break;
    case 12: r = crit_cap_gap(); break;
    default:
      throw std::invalid_argument("run_criterion: id must be 1..12");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
  return r;
}

std::vector<int> criteria_in_suite(const std::string& name) {
  if (name == "duality") return {1, 2, 3, 10, 11};
  if (name == "cayley") return {4, 5};
  if (name == "fk") return {6, 12};
  if (name == "maxwell1d") return {7, 8, 9};
  if (name == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  throw std::invalid_argument("unknown suite: " + name);
}

std::vector<CriterionResult> run_suite(const std::string& name) {
  std::vector<CriterionResult> out;
  for (int id : criteria_in_suite(name)) out.push_back(run_criterion(id));
  return out;
}

}  // namespace mdisp::suites
