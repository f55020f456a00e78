#pragma once

#include <cstddef>

#include "vampcf/numcore/matrix.hpp"

// Dense products used by the forward and backward passes. Every kernel
// exists twice: a plain serial loop nest kept as the reference, and an
// OpenMP version parallel over output rows. Both accumulate each output
// entry over the inner index in ascending order, so they agree bitwise
// and results do not depend on the thread count.

namespace vampcf::numcore {

namespace serial {
Matrix matmul(const Matrix& a, const Matrix& b);     // a * b
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T * b
/// out(r, k) = -1/2 sum_d [ln 2pi + lv(k,d) + (z(r,d) - mu(k,d))^2 exp(-lv(k,d))]
Matrix pairwise_gauss_log_pdf(const Matrix& z, const Matrix& mean, const Matrix& log_var);
}  // namespace serial

namespace parallel {
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix pairwise_gauss_log_pdf(const Matrix& z, const Matrix& mean, const Matrix& log_var);
}  // namespace parallel

/// Products below this many multiply-adds stay on the serial path.
inline constexpr std::size_t kParallelWorkThreshold = 1u << 16;

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix pairwise_gauss_log_pdf(const Matrix& z, const Matrix& mean, const Matrix& log_var);

}  // namespace vampcf::numcore
