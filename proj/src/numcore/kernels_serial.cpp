#include <cmath>
#include <numbers>

#include "vampcf/error.hpp"
#include "vampcf/numcore/kernels.hpp"

namespace vampcf::numcore {

namespace detail {

void check_matmul(const Matrix& a, const Matrix& b, std::size_t a_inner, std::size_t b_inner,
                  const char* op) {
  if (a_inner != b_inner) {
    throw ShapeError(std::string(op) + ": inner dimension mismatch " + a.shape_string() +
                     " vs " + b.shape_string());
  }
}

void check_pairwise(const Matrix& z, const Matrix& mean, const Matrix& log_var) {
  require_same_shape(mean, log_var, "pairwise_gauss_log_pdf");
  if (z.cols() != mean.cols()) {
    throw ShapeError("pairwise_gauss_log_pdf: latent dim mismatch " + z.shape_string() + " vs " +
                     mean.shape_string());
  }
}

}  // namespace detail

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
  detail::check_matmul(a, b, a.cols(), b.rows(), "matmul");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  detail::check_matmul(a, b, a.cols(), b.cols(), "matmul_nt");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
      c(i, j) = acc;
    }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  detail::check_matmul(a, b, a.rows(), b.rows(), "matmul_tn");
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, i) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

Matrix pairwise_gauss_log_pdf(const Matrix& z, const Matrix& mean, const Matrix& log_var) {
  detail::check_pairwise(z, mean, log_var);
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  Matrix out(z.rows(), mean.rows());
  for (std::size_t r = 0; r < z.rows(); ++r)
    for (std::size_t k = 0; k < mean.rows(); ++k) {
      double acc = 0.0;
      for (std::size_t d = 0; d < z.cols(); ++d) {
        const double diff = z(r, d) - mean(k, d);
        acc += log_2pi + log_var(k, d) + diff * diff * std::exp(-log_var(k, d));
      }
      out(r, k) = -0.5 * acc;
    }
  return out;
}

}  // namespace serial

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.rows() * a.cols() * b.cols() < kParallelWorkThreshold) return serial::matmul(a, b);
  return parallel::matmul(a, b);
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.rows() * a.cols() * b.rows() < kParallelWorkThreshold) return serial::matmul_nt(a, b);
  return parallel::matmul_nt(a, b);
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() * a.cols() * b.cols() < kParallelWorkThreshold) return serial::matmul_tn(a, b);
  return parallel::matmul_tn(a, b);
}

Matrix pairwise_gauss_log_pdf(const Matrix& z, const Matrix& mean, const Matrix& log_var) {
  if (z.rows() * mean.rows() * z.cols() < kParallelWorkThreshold)
    return serial::pairwise_gauss_log_pdf(z, mean, log_var);
  return parallel::pairwise_gauss_log_pdf(z, mean, log_var);
}

}  // namespace vampcf::numcore
