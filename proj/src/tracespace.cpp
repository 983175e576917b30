#include "mdisp/tracespace.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <tuple>

namespace mdisp::tracespace {

namespace {

const double kPi = 3.14159265358979323846264338327950288;

std::string fmt_label(const char* fmt, int a, int b) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

// Fully normalized associated Legendre values P(l,m) and theta-derivatives
// at x = cos(theta), including the sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) factor,
// without the Condon-Shortley sign.  plm and dplm are (lmax+1) x (lmax+1)
// lower-triangular tables indexed (l,m).
void normalized_alp(int lmax, double x, MatrixXd& plm, MatrixXd& dplm) {
  const double st = std::sqrt(std::max(0.0, 1.0 - x * x));  // sin(theta) >= 0
  plm.setZero(lmax + 1, lmax + 1);
  dplm.setZero(lmax + 1, lmax + 1);
  plm(0, 0) = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= lmax; ++m)
    plm(m, m) = plm(m - 1, m - 1) * st * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
  for (int m = 0; m <= lmax; ++m) {
    if (m + 1 <= lmax)
      plm(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * plm(m, m);
    for (int l = m + 2; l <= lmax; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) /
                           (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      plm(l, m) = a * (x * plm(l - 1, m) - b * plm(l - 2, m));
    }
  }
  // sin(theta) d/dtheta P(l,m) = l x P(l,m) - sqrt((l^2-m^2)(2l+1)/(2l-1)) P(l-1,m)
  for (int m = 0; m <= lmax; ++m)
    for (int l = m; l <= lmax; ++l) {
      double c = (l == 0) ? 0.0
                          : std::sqrt((double(l) * l - double(m) * m) *
                                      (2.0 * l + 1.0) / (2.0 * l - 1.0));
      double prev = (l > m) ? plm(l - 1, m) : 0.0;
      dplm(l, m) = (l * x * plm(l, m) - c * prev) / st;
    }
}

SpectralSurface build_sphere(int lmax, int quad_factor) {
  SpectralSurface s;
  s.kind = SurfaceKind::sphere;
  s.truncation = lmax;
  s.quad_factor = quad_factor;
  s.b0 = 1;
  s.b1 = 0;

  const int ntheta = quad_factor * (lmax + 1);
  const int nphi = 2 * ntheta + 1;
  VectorXd gx, gw;
  gauss_legendre(ntheta, gx, gw);

  const int nq = ntheta * nphi;
  s.quad.positions.resize(3, nq);
  s.quad.normals.resize(3, nq);
  s.quad.weights.resize(nq);
  s.quad.component = Eigen::VectorXi::Zero(nq);

  std::vector<MatrixXd> plm(ntheta), dplm(ntheta);
  for (int it = 0; it < ntheta; ++it)
    normalized_alp(lmax, gx(it), plm[it], dplm[it]);

  VectorXd phi(nphi);
  for (int ip = 0; ip < nphi; ++ip) phi(ip) = 2.0 * kPi * ip / nphi;

  for (int it = 0; it < ntheta; ++it) {
    double ct = gx(it), st = std::sqrt(1.0 - ct * ct);
    for (int ip = 0; ip < nphi; ++ip) {
      int k = it * nphi + ip;
      double cp = std::cos(phi(ip)), sp = std::sin(phi(ip));
      Eigen::Vector3d n(st * cp, st * sp, ct);
      s.quad.positions.col(k) = n;
      s.quad.normals.col(k) = n;
      s.quad.weights(k) = gw(it) * (2.0 * kPi / nphi);
    }
  }

  for (int l = 1; l <= lmax; ++l) {
    double lambda = std::sqrt(double(l) * (l + 1.0));
    for (int m = -l; m <= l; ++m) {
      ScalarMode mode;
      mode.lambda = lambda;
      mode.component = 0;
      mode.label = fmt_label("l%02dm%+03d", l, m);
      mode.values.resize(nq);
      mode.grad.resize(3, nq);
      int am = std::abs(m);
      for (int it = 0; it < ntheta; ++it) {
        double ct = gx(it), st = std::sqrt(1.0 - ct * ct);
        double pv = plm[it](l, am), dv = dplm[it](l, am);
        for (int ip = 0; ip < nphi; ++ip) {
          int k = it * nphi + ip;
          double cp = std::cos(phi(ip)), sp = std::sin(phi(ip));
          double az, daz;  // azimuthal factor and its phi-derivative
          if (m == 0) {
            az = 1.0;
            daz = 0.0;
          } else if (m > 0) {
            az = std::sqrt(2.0) * std::cos(m * phi(ip));
            daz = -std::sqrt(2.0) * m * std::sin(m * phi(ip));
          } else {
            az = std::sqrt(2.0) * std::sin(am * phi(ip));
            daz = std::sqrt(2.0) * am * std::cos(am * phi(ip));
          }
          mode.values(k) = pv * az;
          Eigen::Vector3d etheta(ct * cp, ct * sp, -st);
          Eigen::Vector3d ephi(-sp, cp, 0.0);
          mode.grad.col(k) = dv * az * etheta + pv * daz / st * ephi;
        }
      }
      s.modes.push_back(std::move(mode));
    }
  }
  return s;
}

SpectralSurface build_torus(int kmax, int quad_factor) {
  SpectralSurface s;
  s.kind = SurfaceKind::flat_torus;
  s.truncation = kmax;
  s.quad_factor = quad_factor;
  s.b0 = 1;
  s.b1 = 2;

  const int ng = std::max(2 * kmax + 1, quad_factor * (kmax + 1));
  const int nq = ng * ng;
  s.quad.positions.resize(3, nq);
  s.quad.normals.resize(3, nq);
  s.quad.weights.resize(nq);
  s.quad.component = Eigen::VectorXi::Zero(nq);
  const double h = 2.0 * kPi / ng;
  for (int i = 0; i < ng; ++i)
    for (int j = 0; j < ng; ++j) {
      int k = i * ng + j;
      s.quad.positions.col(k) = Eigen::Vector3d(i * h, j * h, 0.0);
      s.quad.normals.col(k) = Eigen::Vector3d(0, 0, 1);
      s.quad.weights(k) = h * h;
    }

  const double nrm = 1.0 / (std::sqrt(2.0) * kPi);
  for (int m = 0; m <= kmax; ++m) {
    for (int n = -kmax; n <= kmax; ++n) {
      if (m == 0 && n <= 0) continue;  // half lattice
      if (m * m + n * n > kmax * kmax) continue;
      double lambda = std::sqrt(double(m) * m + double(n) * n);
      for (int phase = 0; phase < 2; ++phase) {  // 0 = cos, 1 = sin
        ScalarMode mode;
        mode.lambda = lambda;
        mode.component = 0;
        mode.label = fmt_label(phase == 0 ? "m%+03dn%+03dc" : "m%+03dn%+03ds",
                               m, n);
        mode.values.resize(nq);
        mode.grad.resize(3, nq);
        for (int k = 0; k < nq; ++k) {
          double x = s.quad.positions(0, k), y = s.quad.positions(1, k);
          double arg = m * x + n * y;
          if (phase == 0) {
            mode.values(k) = nrm * std::cos(arg);
            mode.grad.col(k) =
                Eigen::Vector3d(-m * std::sin(arg), -n * std::sin(arg), 0.0) * nrm;
          } else {
            mode.values(k) = nrm * std::sin(arg);
            mode.grad.col(k) =
                Eigen::Vector3d(m * std::cos(arg), n * std::cos(arg), 0.0) * nrm;
          }
        }
        s.modes.push_back(std::move(mode));
      }
    }
  }

  const double hnrm = 1.0 / (2.0 * kPi);
  for (int d = 0; d < 2; ++d) {
    Eigen::Matrix3Xd f = Eigen::Matrix3Xd::Zero(3, nq);
    f.row(d).setConstant(hnrm);
    s.harmonic_fields.push_back(f);
    s.harmonic_component.push_back(0);
    s.harmonic_label.push_back(d == 0 ? "hx" : "hy");
  }
  return s;
}

SpectralSurface duplicate(const SpectralSurface& one, SurfaceKind kind) {
  SpectralSurface s;
  s.kind = kind;
  s.truncation = one.truncation;
  s.quad_factor = one.quad_factor;
  s.b0 = 2 * one.b0;
  s.b1 = 2 * one.b1;
  const int nq = one.quad.n_nodes();
  s.quad.positions.resize(3, 2 * nq);
  s.quad.normals.resize(3, 2 * nq);
  s.quad.weights.resize(2 * nq);
  s.quad.component.resize(2 * nq);
  for (int c = 0; c < 2; ++c) {
    s.quad.positions.middleCols(c * nq, nq) = one.quad.positions;
    // shift the second copy so node positions stay distinct
    if (c == 1) s.quad.positions.middleCols(nq, nq).row(0).array() += 10.0;
    s.quad.normals.middleCols(c * nq, nq) = one.quad.normals;
    s.quad.weights.segment(c * nq, nq) = one.quad.weights;
    s.quad.component.segment(c * nq, nq).setConstant(c);
  }
  for (int c = 0; c < 2; ++c) {
    for (const auto& m : one.modes) {
      ScalarMode mode;
      mode.lambda = m.lambda;
      mode.component = c;
      mode.label = m.label;
      mode.values = VectorXd::Zero(2 * nq);
      mode.grad = Eigen::Matrix3Xd::Zero(3, 2 * nq);
      mode.values.segment(c * nq, nq) = m.values;
      mode.grad.middleCols(c * nq, nq) = m.grad;
      s.modes.push_back(std::move(mode));
    }
    for (size_t j = 0; j < one.harmonic_fields.size(); ++j) {
      Eigen::Matrix3Xd f = Eigen::Matrix3Xd::Zero(3, 2 * nq);
      f.middleCols(c * nq, nq) = one.harmonic_fields[j];
      s.harmonic_fields.push_back(f);
      s.harmonic_component.push_back(c);
      s.harmonic_label.push_back(one.harmonic_label[j]);
    }
  }
  return s;
}

Eigen::Vector3d cross3(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return a.cross(b);
}

}  // namespace

void SpectralSurface::finalize() {
  std::sort(modes.begin(), modes.end(),
            [](const ScalarMode& a, const ScalarMode& b) {
              return std::tie(a.lambda, a.component, a.label) <
                     std::tie(b.lambda, b.component, b.label);
            });
  hodge.clear();
  for (int j = 0; j < n_scalar(); ++j)
    hodge.push_back({Family::grad, j, modes[j].lambda, modes[j].component,
                     modes[j].label});
  for (int j = 0; j < b1; ++j)
    hodge.push_back({Family::harmonic, j, 1.0, harmonic_component[j],
                     harmonic_label[j]});
  for (int j = 0; j < n_scalar(); ++j)
    hodge.push_back({Family::curl, j, modes[j].lambda, modes[j].component,
                     modes[j].label});

  const int nq = quad.n_nodes();
  const int nm = n_hodge();
  table_.resize(3 * nq, nm);
  for (int c = 0; c < nm; ++c) {
    const HodgeMode& hm = hodge[c];
    for (int k = 0; k < nq; ++k) {
      Eigen::Vector3d v;
      if (hm.family == Family::harmonic) {
        v = harmonic_fields[hm.index].col(k);
      } else {
        Eigen::Vector3d g = modes[hm.index].grad.col(k) / hm.lambda;
        v = (hm.family == Family::grad) ? g : -cross3(quad.normals.col(k), g);
      }
      table_.block<3, 1>(3 * k, c) = v;
    }
  }
  wstack_.resize(3 * nq);
  for (int k = 0; k < nq; ++k) wstack_.segment<3>(3 * k).setConstant(quad.weights(k));
}

double SpectralSurface::gram_residual() const {
  MatrixXd g = gram_matrix(*this);
  return (g - MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

void SpectralSurface::rotate_harmonics(const MatrixXd& q) {
  if (q.rows() != b1 || q.cols() != b1)
    throw std::invalid_argument("rotate_harmonics: matrix must be b1 x b1");
  if ((q * q.transpose() - MatrixXd::Identity(b1, b1)).cwiseAbs().maxCoeff() >
      1e-12)
    throw std::invalid_argument("rotate_harmonics: matrix is not orthogonal");
  std::vector<Eigen::Matrix3Xd> rotated;
  for (int a = 0; a < b1; ++a) {
    Eigen::Matrix3Xd f = Eigen::Matrix3Xd::Zero(3, quad.n_nodes());
    for (int b = 0; b < b1; ++b) f += q(b, a) * harmonic_fields[b];
    rotated.push_back(std::move(f));
  }
  harmonic_fields = std::move(rotated);
  for (auto& lab : harmonic_label) lab += "'";
  finalize();
}

SpectralSurface build_surface(SurfaceKind kind, int truncation,
                              int quad_factor) {
  if (truncation < 1) throw std::invalid_argument("build_surface: truncation must be >= 1");
  if (quad_factor < 1) throw std::invalid_argument("build_surface: quad_factor must be >= 1");
  SpectralSurface s;
  switch (kind) {
    case SurfaceKind::sphere:
      s = build_sphere(truncation, quad_factor);
      break;
    case SurfaceKind::flat_torus:
      s = build_torus(truncation, quad_factor);
      break;
    case SurfaceKind::two_spheres:
      s = duplicate(build_sphere(truncation, quad_factor), SurfaceKind::two_spheres);
      break;
    case SurfaceKind::two_tori:
      s = duplicate(build_torus(truncation, quad_factor), SurfaceKind::two_tori);
      break;
    default:
      throw std::invalid_argument("build_surface: unknown surface");
  }
  if (s.modes.empty())
    throw std::invalid_argument("build_surface: truncation admits no modes");
  s.finalize();
  return s;
}

SurfaceKind surface_kind_from_string(const std::string& name) {
  if (name == "sphere") return SurfaceKind::sphere;
  if (name == "torus" || name == "flat_torus") return SurfaceKind::flat_torus;
  if (name == "two_spheres") return SurfaceKind::two_spheres;
  if (name == "two_tori") return SurfaceKind::two_tori;
  throw std::invalid_argument("unknown surface: " + name);
}

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::flat_torus: return "flat_torus";
    case SurfaceKind::two_spheres: return "two_spheres";
    case SurfaceKind::two_tori: return "two_tori";
  }
  return "?";
}

morder::MOrderWeights trace_weights(const SpectralSurface& surf) {
  VectorXd s(surf.n_hodge());
  for (int j = 0; j < surf.n_hodge(); ++j) {
    const auto& hm = surf.hodge[j];
    switch (hm.family) {
      case Family::curl: s(j) = std::sqrt(hm.lambda); break;
      case Family::grad: s(j) = 1.0 / std::sqrt(hm.lambda); break;
      case Family::harmonic: s(j) = 1.0; break;
    }
  }
  return morder::MOrderWeights(s);
}

VectorXd s_gamma(const SpectralSurface& surf) {
  return trace_weights(surf).s.cwiseInverse();
}

VectorXd upi_factors(const SpectralSurface& surf, UpiDirection dir) {
  // U_pi is real diagonal in the Hodge basis, so its #-adjoint has the same
  // matrix; only the inverse flips the factors.
  const bool inv = dir == UpiDirection::upi_inv || dir == UpiDirection::upi_sharp_inv;
  VectorXd f(surf.n_hodge());
  for (int j = 0; j < surf.n_hodge(); ++j) {
    const auto& hm = surf.hodge[j];
    double r = std::sqrt(hm.lambda);
    switch (hm.family) {
      case Family::harmonic: f(j) = 1.0; break;
      case Family::grad: f(j) = inv ? r : 1.0 / r; break;
      case Family::curl: f(j) = inv ? 1.0 / r : r; break;
    }
  }
  return f;
}

VectorXcd apply_upi(const SpectralSurface& surf, const VectorXcd& coeffs,
                    UpiDirection dir) {
  if (coeffs.size() != surf.n_hodge())
    throw std::invalid_argument("apply_upi: coefficient length mismatch");
  return upi_factors(surf, dir).cast<Complex>().asDiagonal() * coeffs;
}

MatrixXd n_cross_matrix(const SpectralSurface& surf) {
  const int ns = surf.n_scalar();
  const int nm = surf.n_hodge();
  MatrixXd m = MatrixXd::Zero(nm, nm);
  for (int j = 0; j < ns; ++j) {
    m(ns + surf.b1 + j, j) = -1.0;  // grad_j -> -curl_j
    m(j, ns + surf.b1 + j) = 1.0;   // curl_j -> +grad_j
  }
  // harmonic block by quadrature: entries <n x h_b | h_a>
  for (int b = 0; b < surf.b1; ++b) {
    for (int a = 0; a < surf.b1; ++a) {
      double acc = 0.0;
      for (int k = 0; k < surf.quad.n_nodes(); ++k) {
        Eigen::Vector3d nxh =
            surf.quad.normals.col(k).cross(Eigen::Vector3d(surf.harmonic_fields[b].col(k)));
        acc += surf.quad.weights(k) *
               nxh.dot(Eigen::Vector3d(surf.harmonic_fields[a].col(k)));
      }
      m(ns + a, ns + b) = acc;
    }
  }
  return m;
}

VectorXcd n_cross(const SpectralSurface& surf, const VectorXcd& coeffs) {
  if (coeffs.size() != surf.n_hodge())
    throw std::invalid_argument("n_cross: coefficient length mismatch");
  return n_cross_matrix(surf).cast<Complex>() * coeffs;
}

VectorXcd laplace_de_rham(const SpectralSurface& surf, const VectorXcd& coeffs) {
  if (coeffs.size() != surf.n_hodge())
    throw std::invalid_argument("laplace_de_rham: coefficient length mismatch");
  VectorXcd out = coeffs;
  for (int j = 0; j < surf.n_hodge(); ++j) {
    const auto& hm = surf.hodge[j];
    out(j) *= (hm.family == Family::harmonic)
                  ? 0.0
                  : -hm.lambda * hm.lambda;
  }
  return out;
}

MatrixXd gram_matrix(const SpectralSurface& surf) {
  const MatrixXd& b = surf.table();
  return b.transpose() * surf.stacked_weights().asDiagonal() * b;
}

MatrixXd riesz_cross_gram(const SpectralSurface& surf) {
  VectorXd s = trace_weights(surf).s;
  MatrixXd g = gram_matrix(surf);
  // pi-basis = diag(s)^-1 * modes, gamma-basis = diag(s) * modes
  return s.cwiseInverse().asDiagonal() * g * s.asDiagonal();
}

}  // namespace mdisp::tracespace
