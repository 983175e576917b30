#pragma once

#include "mdisp/morder.hpp"
#include "mdisp/util.hpp"

#include <string>
#include <vector>

// Spectral model surfaces (sphere, flat torus, and their two-component
// disjoint unions) carrying an explicit scalar eigenbasis, the tangential
// Hodge basis built from it, surface quadrature, the trace-norm weight pair,
// and the diagonal operators acting on Hodge coefficients.

namespace mdisp::tracespace {

enum class SurfaceKind { sphere, flat_torus, two_spheres, two_tori };

enum class Family { grad, harmonic, curl };

struct Quadrature {
  Eigen::Matrix3Xd positions;
  Eigen::Matrix3Xd normals;
  VectorXd weights;
  Eigen::VectorXi component;
  int n_nodes() const { return static_cast<int>(weights.size()); }
};

struct ScalarMode {
  double lambda = 0.0;  // sqrt of the Laplace eigenvalue
  int component = 0;
  std::string label;
  VectorXd values;        // at quadrature nodes
  Eigen::Matrix3Xd grad;  // tangential gradient at quadrature nodes
};

struct HodgeMode {
  Family family;
  int index;  // scalar-mode index, or harmonic index
  double lambda;
  int component;
  std::string label;
};

class SpectralSurface {
 public:
  SurfaceKind kind;
  int truncation = 0;
  int quad_factor = 3;
  int b0 = 1;
  int b1 = 0;
  Quadrature quad;
  std::vector<ScalarMode> modes;  // sorted by (lambda, component, label)
  std::vector<Eigen::Matrix3Xd> harmonic_fields;
  std::vector<int> harmonic_component;
  std::vector<std::string> harmonic_label;

  std::vector<HodgeMode> hodge;  // grad block, harmonic block, curl block

  int n_scalar() const { return static_cast<int>(modes.size()); }
  int n_hodge() const { return 2 * n_scalar() + b1; }

  // pointwise table of the Hodge basis: rows = 3 * n_nodes (xyz per node),
  // one column per Hodge mode
  const MatrixXd& table() const { return table_; }
  // quadrature weights repeated once per vector component
  const VectorXd& stacked_weights() const { return wstack_; }

  double gram_residual() const;
  // conjugate the harmonic block by an orthogonal b1 x b1 matrix
  void rotate_harmonics(const MatrixXd& q);

  void finalize();  // builds hodge ordering + tables; called by build_surface

 private:
  MatrixXd table_;
  VectorXd wstack_;
};

SpectralSurface build_surface(SurfaceKind kind, int truncation,
                              int quad_factor = 3);
SurfaceKind surface_kind_from_string(const std::string& name);
std::string to_string(SurfaceKind kind);

// diagonal weight vector s over Hodge coefficients: lambda^{1/2} on curl,
// lambda^{-1/2} on grad, 1 on harmonic.  ||.||_pi = ||diag(s) .||,
// ||.||_ga = ||diag(s)^{-1} .||.
morder::MOrderWeights trace_weights(const SpectralSurface& surf);

// S_gamma = diag(s)^{-1}: lambda^{1/2} on grad, lambda^{-1/2} on curl, 1 on
// harmonic
VectorXd s_gamma(const SpectralSurface& surf);

enum class UpiDirection { upi, upi_inv, upi_sharp, upi_sharp_inv };
VectorXd upi_factors(const SpectralSurface& surf, UpiDirection dir);
VectorXcd apply_upi(const SpectralSurface& surf, const VectorXcd& coeffs,
                    UpiDirection dir);

// coefficient matrix of pointwise x -> n(x) cross v(x)
MatrixXd n_cross_matrix(const SpectralSurface& surf);
VectorXcd n_cross(const SpectralSurface& surf, const VectorXcd& coeffs);

VectorXcd laplace_de_rham(const SpectralSurface& surf, const VectorXcd& coeffs);

// quadrature Gram matrix of the Hodge basis (identity up to quadrature error)
MatrixXd gram_matrix(const SpectralSurface& surf);
// quadrature cross Gram of the pi-normalized and gamma-normalized bases
MatrixXd riesz_cross_gram(const SpectralSurface& surf);

}  // namespace mdisp::tracespace
