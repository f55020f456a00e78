#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "vampcf/numcore/kernels.hpp"

namespace vampcf::numcore {

namespace detail {
void check_matmul(const Matrix& a, const Matrix& b, std::size_t a_inner, std::size_t b_inner,
                  const char* op);
void check_pairwise(const Matrix& z, const Matrix& mean, const Matrix& log_var);
}  // namespace detail

namespace parallel {

Matrix matmul(const Matrix& a, const Matrix& b) {
  detail::check_matmul(a, b, a.cols(), b.rows(), "matmul");
  const std::int64_t n = static_cast<std::int64_t>(a.rows());
  const std::size_t inner = a.cols();
  const std::size_t m = b.cols();
  Matrix c(a.rows(), m);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    double* crow = pc + i * m;
    const double* arow = pa + i * inner;
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = arow[k];
      const double* brow = pb + k * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  detail::check_matmul(a, b, a.cols(), b.cols(), "matmul_nt");
  const std::int64_t n = static_cast<std::int64_t>(a.rows());
  const std::size_t inner = a.cols();
  const std::size_t m = b.rows();
  Matrix c(a.rows(), m);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double* arow = pa + i * inner;
    for (std::size_t j = 0; j < m; ++j) {
      const double* brow = pb + j * inner;
      double acc = 0.0;
      for (std::size_t k = 0; k < inner; ++k) acc += arow[k] * brow[k];
      pc[i * m + j] = acc;
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  detail::check_matmul(a, b, a.rows(), b.rows(), "matmul_tn");
  const std::int64_t n = static_cast<std::int64_t>(a.cols());
  const std::size_t inner = a.rows();
  const std::size_t lda = a.cols();
  const std::size_t m = b.cols();
  Matrix c(a.cols(), m);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    double* crow = pc + i * m;
    for (std::size_t k = 0; k < inner; ++k) {
      const double aki = pa[k * lda + i];
      if (aki == 0.0) continue;
      const double* brow = pb + k * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += aki * brow[j];
    }
  }
  return c;
}

Matrix pairwise_gauss_log_pdf(const Matrix& z, const Matrix& mean, const Matrix& log_var) {
  detail::check_pairwise(z, mean, log_var);
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  const std::size_t dim = z.cols();
  const std::size_t n_comp = mean.rows();

  // Precision per component is shared by every row of z.
  std::vector<double> precision(log_var.size());
  for (std::size_t i = 0; i < log_var.size(); ++i) precision[i] = std::exp(-log_var[i]);

  Matrix out(z.rows(), n_comp);
  const std::int64_t n = static_cast<std::int64_t>(z.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n_comp; ++k) {
      double acc = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = z(r, d) - mean(k, d);
        acc += log_2pi + log_var(k, d) + diff * diff * precision[k * dim + d];
      }
      out(r, k) = -0.5 * acc;
    }
  }
  return out;
}

}  // namespace parallel
}  // namespace vampcf::numcore
