#pragma once

#include "edgelq/types.hpp"

namespace edgelq {

// Kronecker product. Satisfies (X ⊗ Y)(U ⊗ V) = XU ⊗ YV on compatible shapes
// and (X ⊗ Y)^T = X^T ⊗ Y^T.
Mat kron(const Mat& a, const Mat& b);

// Matrix exponential by scaling and squaring with a diagonal Pade(6,6)
// approximant. The input is scaled until its 1-norm is at most 0.5, so the
// approximant's backward error stays near 1e-13 for well-scaled inputs.
Mat expm(const Mat& a);

// Dimension of the (numerical) null space of a, decided by a relative
// singular-value threshold rel_tol * sigma_max. gap_out, when non-null,
// receives the ratio sigma[rank-1] / sigma[rank] across the cut (infinity
// when the null space is empty or the matrix is zero); a small gap means the
// rank decision is ambiguous.
int nullspace_dimension(const Mat& a, double rel_tol, double* gap_out = nullptr);

// Complex-matrix variant, used for kernels of shifted matrices M - lambda I.
int nullspace_dimension(const CMat& a, double rel_tol,
                        double* gap_out = nullptr);

}  // namespace edgelq
