#pragma once

#include "mdisp/util.hpp"

#include <stdexcept>
#include <string>

// Finite-dimensional linear relations (subspaces of H (+) H) over a weighted
// pivot space, with the calculus needed for boundary-condition
// classification: dissipativity tests, Cayley transforms, adjoints, and
// Friedrichs / Krein-von Neumann extensions of nonnegative relations.

namespace mdisp::linrel {

struct PivotSpace {
  int dim = 0;
  VectorXd weights;  // strictly positive; (f|g) = sum_k w_k f_k conj(g_k)

  explicit PivotSpace(int n) : dim(n), weights(VectorXd::Ones(n)) { check(); }
  PivotSpace(int n, VectorXd w) : dim(n), weights(std::move(w)) { check(); }

  void check() const {
    if (dim < 1) throw std::invalid_argument("PivotSpace: dim must be >= 1");
    if (weights.size() != dim)
      throw std::invalid_argument("PivotSpace: weight length mismatch");
    if ((weights.array() <= 0).any())
      throw std::invalid_argument("PivotSpace: weights must be positive");
  }

  VectorXd sqrt_weights() const { return weights.cwiseSqrt(); }

  Complex inner(const VectorXcd& f, const VectorXcd& g) const {
    return (g.conjugate().array() * weights.array() * f.array()).sum();
  }

  bool same_as(const PivotSpace& o) const {
    return dim == o.dim && (weights - o.weights).cwiseAbs().maxCoeff() == 0.0;
  }
};

// Subspace of H (+) H stored as a weighted-orthonormal column basis
// [f; f'] (first components on top).
class LinearRelation {
 public:
  LinearRelation(PivotSpace space, const MatrixXcd& raw_pairs);

  static LinearRelation graph(const PivotSpace& sp, const MatrixXcd& a);
  // graph of the map domain_basis*c -> a_on_domain*c
  static LinearRelation graph_on(const PivotSpace& sp,
                                 const MatrixXcd& domain_basis,
                                 const MatrixXcd& image);
  static LinearRelation pure_multivalued(const PivotSpace& sp);  // {0} x H
  static LinearRelation trivial(const PivotSpace& sp);           // {(0,0)}

  const PivotSpace& space() const { return space_; }
  int dim() const { return space_.dim; }
  int rank() const { return static_cast<int>(basis_.cols()); }

  // weighted-orthonormal basis of the subspace, 2n x rank
  const MatrixXcd& basis() const { return basis_; }
  MatrixXcd first() const { return basis_.topRows(space_.dim); }
  MatrixXcd second() const { return basis_.bottomRows(space_.dim); }

  LinearRelation inverse() const;  // swap components
  bool contains(const LinearRelation& sub, double tol = 1e-9) const;

 private:
  LinearRelation(PivotSpace space, MatrixXcd orthonormal, int /*tag*/)
      : space_(std::move(space)), basis_(std::move(orthonormal)) {}

  PivotSpace space_;
  MatrixXcd basis_;

  friend LinearRelation adjoint_relation(const LinearRelation&);
};

struct RelationVerdict {
  bool is_symmetric = false;
  bool is_nonnegative = false;
  bool is_dissipative = false;
  bool is_accretive = false;
  bool is_maximal_dissipative = false;
  bool is_selfadjoint = false;
  // worst-case value of Im<h1|h0> over the unit sphere of the relation
  // (<= 0 means dissipativity holds with that much slack)
  double margin = 0.0;
  double accretivity_margin = 0.0;  // worst-case -Re<h1|h0>
  double symmetry_defect = 0.0;     // max |Im<h1|h0>| over the cone
  // empirical margin over `samples` random cone points (<= margin)
  double sampled_margin = 0.0;
  int rank = 0;
  int dim = 0;
};

RelationVerdict classify_relation(const LinearRelation& rel, int samples = 0,
                                  std::uint64_t seed = 12345);

LinearRelation adjoint_relation(const LinearRelation& rel);

// Cayley transform of a dissipative relation: a contraction defined on
// span{h' - i h} sending h' - i h to h' + i h.
struct CayleyAction {
  MatrixXcd domain;  // n x r, weighted-orthonormal basis of the domain
  MatrixXcd action;  // n x r, Cay(domain*c) = action*c
  bool full_domain = false;

  MatrixXcd matrix() const {  // full-space matrix; requires full_domain
    if (!full_domain)
      throw std::logic_error("cayley: domain is not the full space");
    return action * domain.inverse();
  }
};

CayleyAction cayley(const LinearRelation& rel);
LinearRelation inverse_cayley(const PivotSpace& sp, const MatrixXcd& k,
                              double norm_tol = 1e-10);

LinearRelation friedrichs(const LinearRelation& rel);
LinearRelation krein(const LinearRelation& rel);

// R with R(f + f') = f on {f + f'}, 0 on its orthogonal complement.
MatrixXcd resolvent_of_relation(const LinearRelation& rel);

// sine of the largest principal angle between the two subspaces
double subspace_distance(const LinearRelation& a, const LinearRelation& b);

// Orthonormalize the columns of m in the metric diag(sqrt_w)^2 using
// column-pivoted QR; rank cut at `rtol` relative to the largest column.
MatrixXcd weighted_orthonormalize(const MatrixXcd& m, const VectorXd& sqrt_w,
                                  double rtol = 1e-11);

}  // namespace mdisp::linrel
