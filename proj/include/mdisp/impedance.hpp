#pragma once

#include "mdisp/linrel.hpp"
#include "mdisp/tracespace.hpp"

#include <functional>
#include <optional>
#include <string>

// Galerkin impedance boundary operators over a spectral surface: the
// multiplication matrix Mul_z compressed to the truncated Hodge space, the
// sandwiched operator T = S_gamma Mul_z S_gamma, its Cayley contraction,
// boundary-condition assembly/classification, and the extreme (F/K)
// selfadjoint extensions for non-densely-defined nonnegative cases.

namespace mdisp::impedance {

using tracespace::SpectralSurface;

struct ImpedanceSpec {
  enum class Kind { constant, diagonal_of_dev, pointwise, random_field };
  Kind kind = Kind::constant;
  Complex alpha{1.0, 0.0};        // constant
  std::vector<Complex> poly;      // diagonal kind: polynomial in lambda^2
  // pointwise kind: z(position, component-id)
  std::function<Complex(const Eigen::Vector3d&, int)> z;
  VectorXd node_values;           // random_field kind: values at quadrature nodes
  std::string description;

  static ImpedanceSpec constant(Complex a);
  static ImpedanceSpec diagonal(std::vector<Complex> coeffs);
  static ImpedanceSpec pointwise(std::function<Complex(const Eigen::Vector3d&, int)> f,
                                 std::string desc);
  // indicator of the spherical cap { polar angle < theta0 } (unit-sphere
  // geometry; applied per component on two_spheres)
  static ImpedanceSpec spherical_cap(double theta0);

  VectorXcd values_at_nodes(const SpectralSurface& surf) const;
  Complex diagonal_value(double lambda_sq) const;
};

MatrixXcd mulz_matrix(const SpectralSurface& surf, const ImpedanceSpec& z);

struct BoundaryOperator {
  MatrixXcd t;  // S_gamma * Mul_z * S_gamma in Hodge coordinates
  double accretivity_margin = 0.0;  // eigmin of the Hermitian part
  double hermiticity_defect = 0.0;  // ||T - T*||_max
  std::string surface;
  int truncation = 0;
  std::string z_description;
};

BoundaryOperator boundary_operator(const SpectralSurface& surf,
                                   const ImpedanceSpec& z);

MatrixXcd cayley_kz(const BoundaryOperator& bop);

struct BoundaryCondition {
  MatrixXcd t0, t1;  // condition t0 * (pi-side) + t1 * (gamma-side) = 0
  linrel::LinearRelation theta;
  std::optional<MatrixXcd> k;  // contraction it was assembled from, if any
};

BoundaryCondition assemble_condition(const SpectralSurface& surf,
                                     const MatrixXcd& k);

struct ConditionVerdict {
  bool m_dissipative = false;
  bool selfadjoint = false;
  double margin = 0.0;             // worst-case Im over the numerical cone
  double recovery_error = -1.0;    // ||Cay_theta - K||, when K known
  linrel::RelationVerdict relation;
};

ConditionVerdict classify_condition(const BoundaryCondition& cond);

// span of eigenvectors of the (Hermitian) Galerkin matrix with eigenvalue
// >= threshold: the quadrature/Galerkin-resolved modes of Mul_z
MatrixXcd resolved_domain(const MatrixXcd& g, double threshold = 1e-8);

struct FkPair {
  BoundaryCondition f, k;
  MatrixXcd k_f, k_k;           // the two Cayley contractions
  double gap = 0.0;             // subspace distance between the two relations
  double ordering_margin = 0.0; // eigmin of resolvent(K-ext) - resolvent(F-ext)
  int domain_dim = 0;
};

FkPair fk_extensions(const SpectralSurface& surf, const ImpedanceSpec& z,
                     const MatrixXcd& restricted_domain);

// z(x) = max(0, sum_j xi_j u_j(x)) with independent Gaussians
// xi_j ~ N(0, lambda_j^{-2s}), drawn by a counter-based generator split by
// (seed, mode index); requires s > 1/2
ImpedanceSpec sample_random_impedance(const SpectralSurface& surf, double s,
                                      int truncation, std::uint64_t seed);
// the xi coefficients the sampler would draw (exposed for statistics)
VectorXd random_impedance_coefficients(const SpectralSurface& surf, double s,
                                       int truncation, std::uint64_t seed);

}  // namespace mdisp::impedance
