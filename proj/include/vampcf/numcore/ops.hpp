#pragma once

#include "vampcf/numcore/tape.hpp"

// Differentiable primitives recorded on a Tape. Shapes follow Matrix
// semantics; the only broadcast is a 1 x n row added to every row.

namespace vampcf::numcore::ops {

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
/// a + bias, with a 1 x a.cols() bias broadcast over rows.
Var add_row(Var a, Var bias);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);

Var sigmoid(Var a);
Var tanh(Var a);
Var exp(Var a);
Var log(Var a);
Var square(Var a);
/// log sigma(a), stable for any finite input.
Var log_sigmoid(Var a);
/// Elementwise clamp; the gradient is zero where the input lies outside [lo, hi].
Var clamp(Var a, double lo, double hi);

Var concat_cols(Var a, Var b);
/// Rows scaled to unit L2 norm; all-zero rows pass through unchanged.
Var l2_normalize_rows(Var a);
Var log_softmax_rows(Var a);
/// n x 1 column of per-row logsumexp.
Var logsumexp_rows(Var a);
/// n x 1 column of row sums.
Var row_sums(Var a);
/// 1 x 1 sum of all entries.
Var sum(Var a);
/// Diagonal-Gaussian log densities of every row of z under every component:
/// result(r, k) = log N(z_r; mean_k, diag(exp(log_var_k))).
Var pairwise_gauss_log_pdf(Var z, Var mean, Var log_var);

}  // namespace vampcf::numcore::ops
