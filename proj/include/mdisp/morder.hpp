#pragma once

#include "mdisp/util.hpp"

#include <stdexcept>

// Mixed-order dual pairs in a diagonal-weight model: a strictly positive
// weight vector s over a fixed pivot orthonormal basis defines the norm pair
// ||h||_mp = ||diag(s) h||   (the "minus,plus" side)
// ||h||_pm = ||diag(s)^-1 h|| (the "plus,minus" side)
// which are dual to each other with respect to the pivot pairing.

namespace mdisp::morder {

enum class Side { minus_plus, plus_minus };

struct MOrderWeights {
  VectorXd s;

  explicit MOrderWeights(VectorXd weights) : s(std::move(weights)) {
    if (s.size() == 0 || (s.array() <= 0).any())
      throw std::invalid_argument("MOrderWeights: weights must be positive");
  }
  int dim() const { return static_cast<int>(s.size()); }
};

inline Complex pairing(const MOrderWeights& w, const VectorXcd& u,
                       const VectorXcd& v) {
  if (u.size() != w.dim() || v.size() != w.dim())
    throw std::invalid_argument("pairing: dimension mismatch");
  return v.dot(u);  // sum_k u_k conj(v_k); pivot weights are 1 here
}

inline double norm(const MOrderWeights& w, const VectorXcd& h, Side side) {
  if (h.size() != w.dim())
    throw std::invalid_argument("norm: dimension mismatch");
  if (side == Side::minus_plus)
    return (w.s.asDiagonal() * h).norm();
  return (w.s.cwiseInverse().asDiagonal() * h).norm();
}

// ||h|| on `side` via the duality sup over the opposite side, evaluated at
// the explicit optimizer g = diag(s)^{+-2} h (plus random probes if asked).
double dual_norm_sup(const MOrderWeights& w, const VectorXcd& h, Side side,
                     int probes = 0, std::uint64_t seed = 99);

// #-adjoint in pivot coordinates: the conjugate transpose.  The weight pair
// only changes which operator norms are associated with T; the matrix of the
// adjoint is the same in pivot coordinates for all four signatures.
inline MatrixXcd sharp_adjoint(const MatrixXcd& t) { return t.adjoint(); }

// operator norm of T as a map H_{-,+} -> H_{+,-}
inline double norm_mp_to_pm(const MOrderWeights& w, const MatrixXcd& t) {
  Eigen::MatrixXcd m = w.s.cwiseInverse().asDiagonal() * t *
                       w.s.cwiseInverse().asDiagonal();
  return operator_norm(m);
}

struct UnitaryMaps {
  MatrixXd to_minus_plus;       // U_{H -> H_{-,+}} = diag(s)^-1
  MatrixXd to_plus_minus;       // U_{H -> H_{+,-}} = diag(s)
  MatrixXd minus_plus_to_plus_minus;  // diag(s)^2
};

inline UnitaryMaps unitary_maps(const MOrderWeights& w) {
  UnitaryMaps u;
  u.to_minus_plus = w.s.cwiseInverse().asDiagonal();
  u.to_plus_minus = w.s.asDiagonal();
  u.minus_plus_to_plus_minus =
      (w.s.array() * w.s.array()).matrix().asDiagonal();
  return u;
}

}  // namespace mdisp::morder
