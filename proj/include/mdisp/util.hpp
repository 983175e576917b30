#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <cmath>

// Deterministic RNG + small numeric helpers shared across modules.
// All randomness in the library flows through the counter-based splitmix64
// generator below so that results are bit-identical across platforms and
// independent of call order.

namespace mdisp {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() { return splitmix64(state); }

  // uniform in (0,1]; never returns 0 so log() below is safe
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via Box-Muller
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Complex cgaussian() { return {gaussian(), gaussian()}; }

 private:
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One Gaussian value addressed by (seed, counter), independent of any
// other draw.  Used where a stream must be splittable by index.
inline double gaussian_at(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t s = seed ^ (0xd1342543de82ef95ULL * (counter + 1));
  Rng r(s);
  r.next_u64();  // decorrelate nearby seeds
  return r.gaussian();
}

inline MatrixXcd randn_complex(int rows, int cols, Rng& rng) {
  MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.cgaussian();
  return m;
}

inline MatrixXcd random_unitary(int n, Rng& rng) {
  MatrixXcd a = randn_complex(n, n, rng);
  Eigen::HouseholderQR<MatrixXcd> qr(a);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, n);
  // fix phases so the factorization is unique (R with positive diagonal)
  MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    double ad = std::abs(d);
    if (ad > 0) q.col(j) *= d / ad;
  }
  return q;
}

// random matrix with operator norm <= norm_cap
inline MatrixXcd random_contraction(int n, Rng& rng, double norm_cap = 1.0) {
  MatrixXcd a = randn_complex(n, n, rng);
  Eigen::JacobiSVD<MatrixXcd> svd(a);
  double top = svd.singularValues()(0);
  double scale = rng.uniform();  // also exercise strictly-contractive cases
  return a * (norm_cap * scale / top);
}

// power-iteration 2-norm estimate for matrices too large for a full SVD
inline double operator_norm_est(const MatrixXcd& a, int max_iter = 200,
                                double rtol = 1e-10) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Rng rng(0xabcdULL ^ static_cast<std::uint64_t>(a.rows()));
  VectorXcd x(a.cols());
  for (int j = 0; j < a.cols(); ++j) x(j) = rng.cgaussian();
  x /= x.norm();
  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    VectorXcd y = a * x;
    x = a.adjoint() * y;
    double nx = x.norm();
    if (nx == 0.0) return 0.0;
    x /= nx;
    double cur = std::sqrt(nx);
    if (it > 2 && std::abs(cur - est) <= rtol * cur) return cur;
    est = cur;
  }
  return est;
}

inline double operator_norm(const MatrixXcd& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

// largest/smallest eigenvalue of a (numerically) Hermitian matrix
inline double eig_max_hermitian(const MatrixXcd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (a + a.adjoint()),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline double eig_min_hermitian(const MatrixXcd& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (a + a.adjoint()),
                                              Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, VectorXd& x, VectorXd& w) {
  x.resize(n);
  w.resize(n);
  const double pi = 3.14159265358979323846264338327950288;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = -p0 / dp;
      t += dt;
      if (std::abs(dt) < 1e-15) {
        p0 = 1.0;
        p1 = 0.0;
        for (int k = 0; k < n; ++k) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
        }
        break;
      }
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x(i) = -t;
    x(n - 1 - i) = t;
    double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w(i) = wi;
    w(n - 1 - i) = wi;
  }
}

}  // namespace mdisp
