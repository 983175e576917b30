#pragma once

#include "mdisp/util.hpp"

// Thin wrappers over the dense LAPACK routines used for the large 1-D
// generator matrices, plus a Hessenberg-based smallest-singular-value solver
// for resolvent norms (O(n^2) per shift after a one-time O(n^3) reduction).

namespace mdisp::lapackw {

// all eigenvalues of a general complex matrix (zgeev, values only)
VectorXcd eigenvalues(const MatrixXcd& a);

// upper Hessenberg form H unitarily similar to a (zgehrd; Q discarded —
// singular values of H - shift*I equal those of a - shift*I)
MatrixXcd hessenberg(const MatrixXcd& a);

// smallest singular value of (h - shift*I) for upper Hessenberg h, via
// Givens QR + power iteration on the inverse Gram matrix, iterated until the
// estimate is stationary to rtol
double smallest_singular_hessenberg(const MatrixXcd& h, Complex shift,
                                    double rtol = 1e-8, int max_iter = 500);

}  // namespace mdisp::lapackw
