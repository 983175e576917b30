#include "mdisp/linrel.hpp"

namespace mdisp::linrel {

namespace {

VectorXd stacked_sqrt_weights(const PivotSpace& sp) {
  VectorXd s(2 * sp.dim);
  s.head(sp.dim) = sp.sqrt_weights();
  s.tail(sp.dim) = sp.sqrt_weights();
  return s;
}

// Euclidean-orthonormal complement of the (already orthonormal) columns of q
MatrixXcd orthonormal_complement(const MatrixXcd& q) {
  const int n = static_cast<int>(q.rows());
  const int r = static_cast<int>(q.cols());
  if (r == 0) return MatrixXcd::Identity(n, n);
  Eigen::HouseholderQR<MatrixXcd> qr(q);
  MatrixXcd full = qr.householderQ() * MatrixXcd::Identity(n, n);
  return full.rightCols(n - r);
}

MatrixXcd scale_rows(const MatrixXcd& m, const VectorXd& s) {
  return s.asDiagonal() * m;
}

MatrixXcd unscale_rows(const MatrixXcd& m, const VectorXd& s) {
  return s.cwiseInverse().asDiagonal() * m;
}

}  // namespace

MatrixXcd weighted_orthonormalize(const MatrixXcd& m, const VectorXd& sqrt_w,
                                  double rtol) {
  if (m.cols() == 0) return MatrixXcd(m.rows(), 0);
  MatrixXcd ms = scale_rows(m, sqrt_w);
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(ms);
  qr.setThreshold(rtol);
  const int r = static_cast<int>(qr.rank());
  if (r == 0) return MatrixXcd(m.rows(), 0);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(m.rows(), r);
  return unscale_rows(q, sqrt_w);
}

LinearRelation::LinearRelation(PivotSpace space, const MatrixXcd& raw_pairs)
    : space_(std::move(space)) {
  if (raw_pairs.rows() != 2 * space_.dim)
    throw std::invalid_argument("LinearRelation: pair vectors must have 2*dim rows");
  basis_ = weighted_orthonormalize(raw_pairs, stacked_sqrt_weights(space_));
}

LinearRelation LinearRelation::graph(const PivotSpace& sp, const MatrixXcd& a) {
  if (a.rows() != sp.dim || a.cols() != sp.dim)
    throw std::invalid_argument("graph: matrix must be dim x dim");
  MatrixXcd raw(2 * sp.dim, sp.dim);
  raw.topRows(sp.dim) = MatrixXcd::Identity(sp.dim, sp.dim);
  raw.bottomRows(sp.dim) = a;
  return LinearRelation(sp, raw);
}

LinearRelation LinearRelation::graph_on(const PivotSpace& sp,
                                        const MatrixXcd& domain_basis,
                                        const MatrixXcd& image) {
  if (domain_basis.rows() != sp.dim || image.rows() != sp.dim ||
      domain_basis.cols() != image.cols())
    throw std::invalid_argument("graph_on: shape mismatch");
  MatrixXcd raw(2 * sp.dim, domain_basis.cols());
  raw.topRows(sp.dim) = domain_basis;
  raw.bottomRows(sp.dim) = image;
  return LinearRelation(sp, raw);
}

LinearRelation LinearRelation::pure_multivalued(const PivotSpace& sp) {
  MatrixXcd raw = MatrixXcd::Zero(2 * sp.dim, sp.dim);
  raw.bottomRows(sp.dim) = MatrixXcd::Identity(sp.dim, sp.dim);
  return LinearRelation(sp, raw);
}

LinearRelation LinearRelation::trivial(const PivotSpace& sp) {
  return LinearRelation(sp, MatrixXcd(2 * sp.dim, 0));
}

LinearRelation LinearRelation::inverse() const {
  const int n = space_.dim;
  MatrixXcd raw(2 * n, rank());
  raw.topRows(n) = basis_.bottomRows(n);
  raw.bottomRows(n) = basis_.topRows(n);
  return LinearRelation(space_, raw);
}

bool LinearRelation::contains(const LinearRelation& sub, double tol) const {
  if (!space_.same_as(sub.space_))
    throw std::invalid_argument("contains: spaces differ");
  if (sub.rank() == 0) return true;
  VectorXd s = stacked_sqrt_weights(space_);
  MatrixXcd qs = scale_rows(basis_, s);
  MatrixXcd qsub = scale_rows(sub.basis_, s);
  MatrixXcd residual = qsub - qs * (qs.adjoint() * qsub);
  return operator_norm(residual) <= tol;
}

RelationVerdict classify_relation(const LinearRelation& rel, int samples,
                                  std::uint64_t seed) {
  const double tol = 1e-10;
  RelationVerdict v;
  v.rank = rel.rank();
  v.dim = rel.dim();
  const int r = rel.rank();
  if (r == 0) {
    v.is_symmetric = v.is_nonnegative = v.is_dissipative = v.is_accretive = true;
    v.is_maximal_dissipative = false;
    v.is_selfadjoint = false;
    return v;
  }
  // compressed pairing form: <h1|h0> = c^* M c for h = basis*c
  const MatrixXcd w = rel.space().weights.cast<Complex>().asDiagonal();
  MatrixXcd m = rel.first().adjoint() * w * rel.second();
  MatrixXcd im_part = (m - m.adjoint()) / Complex(0, 2);
  MatrixXcd re_part = 0.5 * (m + m.adjoint());
  v.margin = eig_max_hermitian(im_part);
  v.accretivity_margin = -eig_min_hermitian(re_part);
  v.symmetry_defect = std::max(v.margin, eig_max_hermitian(-im_part));
  v.is_dissipative = v.margin <= tol;
  v.is_accretive = v.accretivity_margin <= tol;
  v.is_symmetric = v.symmetry_defect <= tol;
  v.is_nonnegative = v.is_symmetric && eig_min_hermitian(re_part) >= -tol;
  v.is_maximal_dissipative = v.is_dissipative && r == rel.dim();
  if (v.is_symmetric && r == rel.dim()) {
    v.is_selfadjoint =
        subspace_distance(rel, adjoint_relation(rel)) <= 1e-9;
  }
  if (samples > 0) {
    Rng rng(seed);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
      VectorXcd c = randn_complex(r, 1, rng);
      c /= c.norm();
      worst = std::max(worst, std::imag(Complex(c.adjoint() * m * c)));
    }
    v.sampled_margin = worst;
  }
  return v;
}

LinearRelation adjoint_relation(const LinearRelation& rel) {
  const int n = rel.dim();
  VectorXd s = stacked_sqrt_weights(rel.space());
  MatrixXcd qs = scale_rows(rel.basis(), s);
  // (g,g') is in the adjoint iff it is W-orthogonal to J(f,f') = (f',-f)
  MatrixXcd jqs(2 * n, rel.rank());
  jqs.topRows(n) = qs.bottomRows(n);
  jqs.bottomRows(n) = -qs.topRows(n);
  MatrixXcd comp = orthonormal_complement(jqs);
  return LinearRelation(rel.space(), unscale_rows(comp, s));
}

CayleyAction cayley(const LinearRelation& rel) {
  RelationVerdict v = classify_relation(rel);
  if (!v.is_dissipative)
    throw std::invalid_argument("cayley: relation is not dissipative");
  const int n = rel.dim();
  const int r = rel.rank();
  const Complex i(0, 1);
  MatrixXcd dom_raw = rel.second() - i * rel.first();
  MatrixXcd img_raw = rel.second() + i * rel.first();
  VectorXd sw = rel.space().sqrt_weights();
  MatrixXcd qd = weighted_orthonormalize(dom_raw, sw);
  if (qd.cols() != r)
    throw std::invalid_argument("cayley: domain map degenerate (relation not dissipative)");
  // coefficients of dom_raw in the qd basis
  MatrixXcd t = qd.adjoint() * rel.space().weights.cast<Complex>().asDiagonal() * dom_raw;
  CayleyAction act;
  act.domain = qd;
  act.action = img_raw * t.inverse();
  act.full_domain = (r == n);
  return act;
}

LinearRelation inverse_cayley(const PivotSpace& sp, const MatrixXcd& k,
                              double norm_tol) {
  if (k.rows() != sp.dim || k.cols() != sp.dim)
    throw std::invalid_argument("inverse_cayley: K must be dim x dim");
  VectorXd sw = sp.sqrt_weights();
  MatrixXcd kw = sw.asDiagonal() * k * sw.cwiseInverse().asDiagonal();
  if (operator_norm(kw) > 1.0 + norm_tol)
    throw std::invalid_argument("inverse_cayley: operator norm exceeds 1");
  const Complex i(0, 1);
  const MatrixXcd id = MatrixXcd::Identity(sp.dim, sp.dim);
  MatrixXcd raw(2 * sp.dim, sp.dim);
  raw.topRows(sp.dim) = k - id;
  raw.bottomRows(sp.dim) = i * (k + id);
  return LinearRelation(sp, raw);
}

LinearRelation friedrichs(const LinearRelation& rel) {
  RelationVerdict v = classify_relation(rel);
  if (!(v.is_symmetric && v.is_nonnegative))
    throw std::invalid_argument("friedrichs: relation must be symmetric nonnegative");
  const int n = rel.dim();
  VectorXd sw = rel.space().sqrt_weights();
  // orthogonal complement of the domain (span of first components)
  MatrixXcd d = weighted_orthonormalize(rel.first(), sw);
  MatrixXcd ds = scale_rows(d, sw);
  MatrixXcd dperp = unscale_rows(orthonormal_complement(ds), sw);
  MatrixXcd raw(2 * n, rel.rank() + dperp.cols());
  raw.leftCols(rel.rank()) = rel.basis();
  raw.rightCols(dperp.cols()).setZero();
  raw.bottomRightCorner(n, dperp.cols()) = dperp;
  return LinearRelation(rel.space(), raw);
}

LinearRelation krein(const LinearRelation& rel) {
  RelationVerdict v = classify_relation(rel);
  if (!(v.is_symmetric && v.is_nonnegative))
    throw std::invalid_argument("krein: relation must be symmetric nonnegative");
  return friedrichs(rel.inverse()).inverse();
}

MatrixXcd resolvent_of_relation(const LinearRelation& rel) {
  RelationVerdict v = classify_relation(rel);
  if (!(v.is_selfadjoint && v.is_nonnegative))
    throw std::invalid_argument("resolvent_of_relation: needs selfadjoint nonnegative relation");
  const int n = rel.dim();
  VectorXd sw = rel.space().sqrt_weights();
  MatrixXcd sum_s = scale_rows(rel.first() + rel.second(), sw);
  MatrixXcd f_s = scale_rows(rel.first(), sw);
  Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cod(sum_s);
  MatrixXcd r_s = f_s * cod.pseudoInverse();
  return sw.cwiseInverse().asDiagonal() * r_s * sw.asDiagonal();
}

double subspace_distance(const LinearRelation& a, const LinearRelation& b) {
  if (!a.space().same_as(b.space()))
    throw std::invalid_argument("subspace_distance: spaces differ");
  VectorXd s = stacked_sqrt_weights(a.space());
  MatrixXcd qa = scale_rows(a.basis(), s);
  MatrixXcd qb = scale_rows(b.basis(), s);
  MatrixXcd diff = qa * qa.adjoint() - qb * qb.adjoint();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace mdisp::linrel
