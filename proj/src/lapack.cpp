#include "mdisp/lapack.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <stdexcept>
#include <vector>

namespace mdisp::lapackw {

VectorXcd eigenvalues(const MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("eigenvalues: square matrix required");
  MatrixXcd work = a;
  VectorXcd w(n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(),
                                  n, w.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw std::runtime_error("zgeev failed");
  return w;
}

MatrixXcd hessenberg(const MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("hessenberg: square matrix required");
  MatrixXcd work = a;
  VectorXcd tau(std::max(1, n - 1));
  lapack_int info = LAPACKE_zgehrd(LAPACK_COL_MAJOR, n, 1, n, work.data(), n,
                                   tau.data());
  if (info != 0) throw std::runtime_error("zgehrd failed");
  // zero out the reflector data below the first subdiagonal
  for (int j = 0; j < n; ++j)
    for (int i = j + 2; i < n; ++i) work(i, j) = 0.0;
  return work;
}

namespace {

struct Givens {
  double c;
  Complex s;
};

}  // namespace

double smallest_singular_hessenberg(const MatrixXcd& h, Complex shift,
                                    double rtol, int max_iter) {
  const int n = static_cast<int>(h.rows());
  MatrixXcd r = h;
  r.diagonal().array() -= shift;
  // QR by Givens rotations on the single subdiagonal
  std::vector<Givens> rot(std::max(0, n - 1));
  for (int k = 0; k + 1 < n; ++k) {
    Complex f = r(k, k), g = r(k + 1, k);
    double gn = std::abs(g);
    Givens gv{1.0, Complex(0, 0)};
    if (gn != 0.0) {
      double fn = std::abs(f);
      double d = std::hypot(fn, gn);
      if (fn == 0.0) {
        gv.c = 0.0;
        gv.s = std::conj(g) / gn;
      } else {
        gv.c = fn / d;
        gv.s = (f / fn) * std::conj(g) / d;
      }
      for (int j = k; j < n; ++j) {
        Complex a = r(k, j), b = r(k + 1, j);
        r(k, j) = gv.c * a + gv.s * b;
        r(k + 1, j) = -std::conj(gv.s) * a + gv.c * b;
      }
    }
    rot[k] = gv;
  }
  // power iteration on (R^-H R^-1): growth factor -> 1/sigma_min^2
  const double tiny = 1e-300;
  auto solve_r = [&](VectorXcd& x) {  // x <- R^-1 x
    for (int i = n - 1; i >= 0; --i) {
      Complex acc = x(i);
      for (int j = i + 1; j < n; ++j) acc -= r(i, j) * x(j);
      Complex d = r(i, i);
      if (std::abs(d) < tiny) d = tiny;
      x(i) = acc / d;
    }
  };
  auto solve_rh = [&](VectorXcd& x) {  // x <- R^-H x
    for (int i = 0; i < n; ++i) {
      Complex acc = x(i);
      for (int j = 0; j < i; ++j) acc -= std::conj(r(j, i)) * x(j);
      Complex d = std::conj(r(i, i));
      if (std::abs(d) < tiny) d = tiny;
      x(i) = acc / d;
    }
  };
  Rng rng(0x5eedULL ^ static_cast<std::uint64_t>(n));
  VectorXcd x = randn_complex(n, 1, rng);
  x /= x.norm();
  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    solve_r(x);
    solve_rh(x);
    double growth = x.norm();
    if (growth <= 0) return 0.0;
    x /= growth;
    double cur = 1.0 / std::sqrt(growth);
    if (it > 2 && std::abs(cur - est) <= rtol * cur) return cur;
    est = cur;
  }
  return est;
}

}  // namespace mdisp::lapackw
