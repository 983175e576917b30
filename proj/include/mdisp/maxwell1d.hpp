#pragma once

#include "mdisp/util.hpp"

#include <functional>
#include <vector>

// 1-D Maxwell testbed on [0,1]: fields psi = (E, H), generator
// M(E,H) = ((1/eps) H', -(1/mu) E') with boundary maps
// Gamma0 psi = (H(0), H(1)),  Gamma1 psi = (E(0), -E(1)),
// discretized by a second-order diagonal-norm summation-by-parts derivative
// with penalty terms tuned so the discrete energy identity
//   Im (M_h psi | psi)_h = (||K v||^2 - ||v||^2) / 2,  v = (Gamma1 - i Gamma0)/sqrt(2)
// holds to machine precision for every state.

namespace mdisp::maxwell1d {

struct Maxwell1DModel {
  double eps = 1.0;
  double mu = 1.0;
};

// smooth field with its derivative, for continuum identities
struct Field {
  std::function<Complex(double)> e, h, de, dh;
};

Eigen::Vector2cd gamma0(const Field& psi);
Eigen::Vector2cd gamma1(const Field& psi);

struct GreenParts {
  Complex lhs;  // (M psi | phi) - (psi | M phi), weighted inner product
  Complex rhs;  // <Gamma1 psi | Gamma0 phi> - <Gamma0 psi | Gamma1 phi>
};

GreenParts green_identity_parts(const Maxwell1DModel& model, const Field& psi,
                                const Field& phi, int quad_order = 40);
double green_identity_residual(const Maxwell1DModel& model, const Field& psi,
                               const Field& phi, int quad_order = 40);

Eigen::Matrix2cd impedance_to_contraction(Complex z0, Complex z1);

struct DiscreteGenerator {
  Maxwell1DModel model;
  int n = 0;       // number of grid cells; n+1 points per field
  double h = 0.0;  // grid spacing
  Eigen::Matrix2cd k;
  MatrixXcd m;     // 2(n+1) square; E block first, then H block
  VectorXd wdiag;  // diagonal of the weighted discrete inner product

  int size() const { return static_cast<int>(m.rows()); }
  Complex inner(const VectorXcd& a, const VectorXcd& b) const {
    return (b.conjugate().array() * wdiag.cast<Complex>().array() * a.array()).sum();
  }
  double energy(const VectorXcd& psi) const {
    return std::real(inner(psi, psi));
  }
  Eigen::Vector2cd trace_gamma0(const VectorXcd& psi) const;
  Eigen::Vector2cd trace_gamma1(const VectorXcd& psi) const;
  // generator in coordinates where the weighted norm is the plain 2-norm
  MatrixXcd scaled() const;
};

DiscreteGenerator build_generator(const Maxwell1DModel& model,
                                  const Eigen::Matrix2cd& k, int n);
DiscreteGenerator build_generator_impedance(const Maxwell1DModel& model,
                                            Complex z0, Complex z1, int n);

struct RangeReport {
  double max_im_eig = 0.0;    // largest imaginary part over the spectrum
  double norm_scale = 0.0;    // operator norm of the (scaled) generator
  double max_bound = 0.0;     // max over samples of Im(lambda) ||R(lambda)||
  int samples = 0;
};

RangeReport numerical_range_and_resolvent(const DiscreteGenerator& gen,
                                          const std::vector<Complex>& lambdas);
std::vector<Complex> default_lambda_grid(const DiscreteGenerator& gen,
                                         int count, std::uint64_t seed);

struct EvolutionStep {
  int step;
  double t;
  double energy;
  double boundary_flux;  // (||K v||^2 - ||v||^2)/2 at the midpoint state
};

std::vector<EvolutionStep> evolve_cn(const DiscreteGenerator& gen,
                                     const VectorXcd& psi0, double dt,
                                     int steps);

// E = exp(-(x-x0)^2 / (2 w^2)), H = 0
VectorXcd gaussian_pulse(const DiscreteGenerator& gen, double x0, double w);

}  // namespace mdisp::maxwell1d
