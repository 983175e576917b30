#include "mdisp/impedance.hpp"

#include <stdexcept>

namespace mdisp::impedance {

using linrel::LinearRelation;
using linrel::PivotSpace;
using tracespace::UpiDirection;

ImpedanceSpec ImpedanceSpec::constant(Complex a) {
  ImpedanceSpec s;
  s.kind = Kind::constant;
  s.alpha = a;
  s.description = "const";
  return s;
}

ImpedanceSpec ImpedanceSpec::diagonal(std::vector<Complex> coeffs) {
  ImpedanceSpec s;
  s.kind = Kind::diagonal_of_dev;
  s.poly = std::move(coeffs);
  s.description = "f-dev";
  return s;
}

ImpedanceSpec ImpedanceSpec::pointwise(
    std::function<Complex(const Eigen::Vector3d&, int)> f, std::string desc) {
  ImpedanceSpec s;
  s.kind = Kind::pointwise;
  s.z = std::move(f);
  s.description = std::move(desc);
  return s;
}

ImpedanceSpec ImpedanceSpec::spherical_cap(double theta0) {
  const double c0 = std::cos(theta0);
  ImpedanceSpec s = pointwise(
      [c0](const Eigen::Vector3d& x, int) {
        // unit-sphere nodes may be x-shifted on the second component
        double zc = x.z();
        return Complex(zc > c0 ? 1.0 : 0.0, 0.0);
      },
      "cap");
  return s;
}

Complex ImpedanceSpec::diagonal_value(double lambda_sq) const {
  Complex acc(0, 0);
  double p = 1.0;
  for (const Complex& c : poly) {
    acc += c * p;
    p *= lambda_sq;
  }
  return acc;
}

VectorXcd ImpedanceSpec::values_at_nodes(const SpectralSurface& surf) const {
  const int nq = surf.quad.n_nodes();
  VectorXcd v(nq);
  switch (kind) {
    case Kind::constant:
      v.setConstant(alpha);
      break;
    case Kind::pointwise:
      for (int k = 0; k < nq; ++k) {
        Eigen::Vector3d p = surf.quad.positions.col(k);
        int comp = surf.quad.component(k);
        if (comp == 1) p.x() -= 10.0;  // undo the disjoint-union shift
        v(k) = z(p, comp);
      }
      break;
    case Kind::random_field:
      if (node_values.size() != nq)
        throw std::invalid_argument("impedance: sampled field does not match surface");
      v = node_values.cast<Complex>();
      break;
    case Kind::diagonal_of_dev:
      throw std::logic_error("impedance: diagonal kind has no pointwise values");
  }
  return v;
}

MatrixXcd mulz_matrix(const SpectralSurface& surf, const ImpedanceSpec& z) {
  const int n = surf.n_hodge();
  if (z.kind == ImpedanceSpec::Kind::diagonal_of_dev) {
    VectorXcd d(n);
    for (int j = 0; j < n; ++j) {
      const auto& hm = surf.hodge[j];
      double ls = hm.family == tracespace::Family::harmonic
                      ? 0.0
                      : hm.lambda * hm.lambda;
      d(j) = z.diagonal_value(ls);
      if (d(j).real() < -1e-10)
        throw std::invalid_argument("impedance: Re f < 0 on the spectrum");
    }
    return d.asDiagonal();
  }
  VectorXcd zv = z.values_at_nodes(surf);
  if ((zv.real().array() < -1e-10).any())
    throw std::invalid_argument("impedance: Re z < 0 at a quadrature node");
  const MatrixXd& b = surf.table();
  const VectorXd& w = surf.stacked_weights();
  VectorXcd wz(3 * surf.quad.n_nodes());
  for (int k = 0; k < surf.quad.n_nodes(); ++k)
    wz.segment<3>(3 * k).setConstant(w(3 * k) * zv(k));
  MatrixXcd g = b.transpose().cast<Complex>() *
                (wz.asDiagonal() * b.cast<Complex>());
  return g;
}

BoundaryOperator boundary_operator(const SpectralSurface& surf,
                                   const ImpedanceSpec& z) {
  BoundaryOperator bop;
  VectorXd sg = tracespace::s_gamma(surf);
  MatrixXcd g = mulz_matrix(surf, z);
  bop.t = sg.cast<Complex>().asDiagonal() * g * sg.cast<Complex>().asDiagonal();
  bop.accretivity_margin = eig_min_hermitian(0.5 * (bop.t + bop.t.adjoint()));
  bop.hermiticity_defect = (bop.t - bop.t.adjoint()).cwiseAbs().maxCoeff();
  bop.surface = tracespace::to_string(surf.kind);
  bop.truncation = surf.truncation;
  bop.z_description = z.description;
  return bop;
}

MatrixXcd cayley_kz(const BoundaryOperator& bop) {
  if (bop.accretivity_margin < -1e-10)
    throw std::invalid_argument("cayley_kz: boundary operator is not accretive");
  const int n = static_cast<int>(bop.t.rows());
  MatrixXcd id = MatrixXcd::Identity(n, n);
  MatrixXcd k = (bop.t - id) * (bop.t + id).inverse();
  if (operator_norm(k) > 1.0 + 1e-10)
    throw std::runtime_error("cayley_kz: result is not a contraction");
  return k;
}

BoundaryCondition assemble_condition(const SpectralSurface& surf,
                                     const MatrixXcd& k) {
  const int n = surf.n_hodge();
  if (k.rows() != n || k.cols() != n)
    throw std::invalid_argument("assemble_condition: K must match the truncation");
  if (operator_norm(k) > 1.0 + 1e-10)
    throw std::invalid_argument("assemble_condition: K is not a contraction");
  const MatrixXcd id = MatrixXcd::Identity(n, n);
  VectorXd upi = tracespace::upi_factors(surf, UpiDirection::upi);
  VectorXd upisharpinv =
      tracespace::upi_factors(surf, UpiDirection::upi_sharp_inv);
  BoundaryCondition cond{
      (id + k) * upi.cast<Complex>().asDiagonal(),
      (id - k) * upisharpinv.cast<Complex>().asDiagonal(),
      LinearRelation::trivial(PivotSpace(n)),
      k};
  // null space of [T0 T1] gives the coefficient pairs (a, b); the relation
  // collects (U_pi a, i (U_pi^#)^-1 b)
  MatrixXcd block(n, 2 * n);
  block.leftCols(n) = cond.t0;
  block.rightCols(n) = cond.t1;
  Eigen::FullPivLU<MatrixXcd> lu(block);
  lu.setThreshold(1e-12);
  MatrixXcd kernel = lu.kernel();
  MatrixXcd raw(2 * n, kernel.cols());
  raw.topRows(n) =
      upi.cast<Complex>().asDiagonal() * kernel.topRows(n);
  raw.bottomRows(n) = Complex(0, 1) * (upisharpinv.cast<Complex>().asDiagonal() *
                                       kernel.bottomRows(n));
  cond.theta = LinearRelation(PivotSpace(n), raw);
  return cond;
}

ConditionVerdict classify_condition(const BoundaryCondition& cond) {
  ConditionVerdict v;
  v.relation = linrel::classify_relation(cond.theta);
  v.m_dissipative = v.relation.is_maximal_dissipative;
  v.selfadjoint = v.relation.is_selfadjoint;
  v.margin = v.relation.margin;
  if (cond.k && v.m_dissipative) {
    MatrixXcd rec = linrel::cayley(cond.theta).matrix();
    v.recovery_error = (rec - *cond.k).cwiseAbs().maxCoeff();
  }
  return v;
}

MatrixXcd resolved_domain(const MatrixXcd& g, double threshold) {
  MatrixXcd h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  const int n = static_cast<int>(g.rows());
  int keep = 0;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) >= threshold) ++keep;
  return es.eigenvectors().rightCols(keep);
}

FkPair fk_extensions(const SpectralSurface& surf, const ImpedanceSpec& z,
                     const MatrixXcd& restricted_domain) {
  const int n = surf.n_hodge();
  BoundaryOperator bop = boundary_operator(surf, z);
  if (bop.hermiticity_defect > 1e-9 || bop.accretivity_margin < -1e-10)
    throw std::invalid_argument("fk_extensions: impedance must be nonnegative");
  PivotSpace sp(n);
  LinearRelation psi = LinearRelation::graph_on(sp, restricted_domain,
                                                bop.t * restricted_domain);
  LinearRelation fx = linrel::friedrichs(psi);
  LinearRelation kx = linrel::krein(psi);

  auto rotate_and_cayley = [&](const LinearRelation& rel) {
    // rel is selfadjoint; (h, -i h') is maximal dissipative
    MatrixXcd raw(2 * n, rel.rank());
    raw.topRows(n) = rel.first();
    raw.bottomRows(n) = Complex(0, -1) * rel.second();
    return linrel::cayley(LinearRelation(sp, raw)).matrix();
  };

  FkPair pair{assemble_condition(surf, rotate_and_cayley(fx)),
              assemble_condition(surf, rotate_and_cayley(kx)),
              MatrixXcd(), MatrixXcd(), 0.0, 0.0,
              static_cast<int>(restricted_domain.cols())};
  pair.k_f = *pair.f.k;
  pair.k_k = *pair.k.k;
  pair.gap = linrel::subspace_distance(pair.f.theta, pair.k.theta);
  pair.ordering_margin = eig_min_hermitian(linrel::resolvent_of_relation(kx) -
                                           linrel::resolvent_of_relation(fx));
  return pair;
}

VectorXd random_impedance_coefficients(const SpectralSurface& surf, double s,
                                       int truncation, std::uint64_t seed) {
  if (s <= 0.5)
    throw std::invalid_argument("sample_random_impedance: need s > 1/2");
  if (truncation < 1 || truncation > surf.n_scalar())
    throw std::invalid_argument("sample_random_impedance: bad truncation");
  VectorXd xi(truncation);
  for (int j = 0; j < truncation; ++j)
    xi(j) = std::pow(surf.modes[j].lambda, -s) *
            gaussian_at(seed, static_cast<std::uint64_t>(j));
  return xi;
}

ImpedanceSpec sample_random_impedance(const SpectralSurface& surf, double s,
                                      int truncation, std::uint64_t seed) {
  VectorXd xi = random_impedance_coefficients(surf, s, truncation, seed);
  VectorXd field = VectorXd::Zero(surf.quad.n_nodes());
  for (int j = 0; j < truncation; ++j) field += xi(j) * surf.modes[j].values;
  ImpedanceSpec spec;
  spec.kind = ImpedanceSpec::Kind::random_field;
  spec.node_values = field.cwiseMax(0.0);
  spec.description = "random";
  return spec;
}

}  // namespace mdisp::impedance
