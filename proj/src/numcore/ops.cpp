#include "vampcf/numcore/ops.hpp"

#include <algorithm>
#include <cmath>

#include "vampcf/error.hpp"
#include "vampcf/numcore/kernels.hpp"
#include "vampcf/numcore/scalar.hpp"

namespace vampcf::numcore::ops {

namespace {

template <class F>
Matrix map(const Matrix& a, F f) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

// grad(dst) += g .* f(i)
template <class F>
void accumulate(Tape& t, Var dst, const Matrix& g, F f) {
  if (!t.requires_grad(dst)) return;
  Matrix& acc = t.grad(dst);
  for (std::size_t i = 0; i < g.size(); ++i) acc[i] += g[i] * f(i);
}

Tape& same_tape(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw Error("ops: operands live on different tapes");
  return a.tape();
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  return t.record(numcore::matmul(a.value(), b.value()), {a, b}, [a, b](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a)) add_into(t.grad(a), matmul_nt(g, b.value()));
    if (t.requires_grad(b)) add_into(t.grad(b), matmul_tn(a.value(), g));
  });
}

Var add(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape(a.value(), b.value(), "add");
  Matrix out = a.value();
  add_into(out, b.value());
  return t.record(std::move(out), {a, b}, [a, b](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a)) add_into(t.grad(a), g);
    if (t.requires_grad(b)) add_into(t.grad(b), g);
  });
}

Var sub(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape(a.value(), b.value(), "sub");
  Matrix out = a.value();
  const Matrix& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return t.record(std::move(out), {a, b}, [a, b](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    accumulate(t, a, g, [](std::size_t) { return 1.0; });
    accumulate(t, b, g, [](std::size_t) { return -1.0; });
  });
}

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  require_same_shape(av, bv, "mul");
  Matrix out(av.rows(), av.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return t.record(std::move(out), {a, b}, [a, b](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    const Matrix& av = a.value();
    const Matrix& bv = b.value();
    accumulate(t, a, g, [&](std::size_t i) { return bv[i]; });
    accumulate(t, b, g, [&](std::size_t i) { return av[i]; });
  });
}

Var add_row(Var a, Var bias) {
  Tape& t = same_tape(a, bias);
  const Matrix& av = a.value();
  const Matrix& bv = bias.value();
  if (bv.rows() != 1 || bv.cols() != av.cols()) {
    throw ShapeError("add_row: bias " + bv.shape_string() + " does not fit " + av.shape_string());
  }
  Matrix out = av;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += bv[c];
  return t.record(std::move(out), {a, bias}, [a, bias](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a)) add_into(t.grad(a), g);
    if (t.requires_grad(bias)) {
      Matrix& gb = t.grad(bias);
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) gb[c] += g(r, c);
    }
  });
}

Var scale(Var a, double s) {
  Tape& t = a.tape();
  return t.record(map(a.value(), [s](double x) { return s * x; }), {a}, [a, s](Tape& t, Var self) {
    accumulate(t, a, t.grad(self), [s](std::size_t) { return s; });
  });
}

Var add_scalar(Var a, double s) {
  Tape& t = a.tape();
  return t.record(map(a.value(), [s](double x) { return x + s; }), {a}, [a](Tape& t, Var self) {
    if (t.requires_grad(a)) add_into(t.grad(a), t.grad(self));
  });
}

Var sigmoid(Var a) {
  Tape& t = a.tape();
  return t.record(map(a.value(), numcore::sigmoid), {a}, [a](Tape& t, Var self) {
    const Matrix& y = self.value();
    accumulate(t, a, t.grad(self), [&](std::size_t i) { return y[i] * (1.0 - y[i]); });
  });
}

Var tanh(Var a) {
  Tape& t = a.tape();
  return t.record(map(a.value(), [](double x) { return std::tanh(x); }), {a},
                  [a](Tape& t, Var self) {
                    const Matrix& y = self.value();
                    accumulate(t, a, t.grad(self), [&](std::size_t i) { return 1.0 - y[i] * y[i]; });
                  });
}

Var exp(Var a) {
  Tape& t = a.tape();
  return t.record(map(a.value(), [](double x) { return std::exp(x); }), {a},
                  [a](Tape& t, Var self) {
                    const Matrix& y = self.value();
                    accumulate(t, a, t.grad(self), [&](std::size_t i) { return y[i]; });
                  });
}

Var log(Var a) {
  Tape& t = a.tape();
  return t.record(map(a.value(), [](double x) { return std::log(x); }), {a},
                  [a](Tape& t, Var self) {
                    const Matrix& x = a.value();
                    accumulate(t, a, t.grad(self), [&](std::size_t i) { return 1.0 / x[i]; });
                  });
}

Var square(Var a) {
  Tape& t = a.tape();
  return t.record(map(a.value(), [](double x) { return x * x; }), {a}, [a](Tape& t, Var self) {
    const Matrix& x = a.value();
    accumulate(t, a, t.grad(self), [&](std::size_t i) { return 2.0 * x[i]; });
  });
}

Var log_sigmoid(Var a) {
  Tape& t = a.tape();
  return t.record(map(a.value(), numcore::log_sigmoid), {a}, [a](Tape& t, Var self) {
    const Matrix& x = a.value();
    // d/dx log sigma(x) = sigma(-x)
    accumulate(t, a, t.grad(self), [&](std::size_t i) { return numcore::sigmoid(-x[i]); });
  });
}

Var clamp(Var a, double lo, double hi) {
  Tape& t = a.tape();
  return t.record(map(a.value(), [lo, hi](double x) { return std::clamp(x, lo, hi); }), {a},
                  [a, lo, hi](Tape& t, Var self) {
                    const Matrix& x = a.value();
                    accumulate(t, a, t.grad(self),
                               [&](std::size_t i) { return x[i] >= lo && x[i] <= hi ? 1.0 : 0.0; });
                  });
}

Var concat_cols(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.rows() != bv.rows()) {
    throw ShapeError("concat_cols: row mismatch " + av.shape_string() + " vs " + bv.shape_string());
  }
  Matrix out(av.rows(), av.cols() + bv.cols());
  for (std::size_t r = 0; r < av.rows(); ++r) {
    std::copy(av.row(r).begin(), av.row(r).end(), out.row(r).begin());
    std::copy(bv.row(r).begin(), bv.row(r).end(), out.row(r).begin() + av.cols());
  }
  return t.record(std::move(out), {a, b}, [a, b](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    const std::size_t ac = a.cols();
    if (t.requires_grad(a)) {
      Matrix& ga = t.grad(a);
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < ac; ++c) ga(r, c) += g(r, c);
    }
    if (t.requires_grad(b)) {
      Matrix& gb = t.grad(b);
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < gb.cols(); ++c) gb(r, c) += g(r, ac + c);
    }
  });
}

Var l2_normalize_rows(Var a) {
  Tape& t = a.tape();
  const Matrix& av = a.value();
  Matrix out = av;
  std::vector<double> norms(av.rows());
  for (std::size_t r = 0; r < av.rows(); ++r) {
    double ss = 0.0;
    for (double x : av.row(r)) ss += x * x;
    norms[r] = std::sqrt(ss);
    if (norms[r] > 0.0)
      for (double& x : out.row(r)) x /= norms[r];
  }
  return t.record(std::move(out), {a}, [a, norms = std::move(norms)](Tape& t, Var self) {
    if (!t.requires_grad(a)) return;
    const Matrix& g = t.grad(self);
    const Matrix& y = self.value();
    Matrix& ga = t.grad(a);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      if (norms[r] == 0.0) {
        // Pass-through region: identity map.
        for (std::size_t c = 0; c < g.cols(); ++c) ga(r, c) += g(r, c);
        continue;
      }
      // dx = (g - y (y . g)) / |x|
      double dot = 0.0;
      for (std::size_t c = 0; c < g.cols(); ++c) dot += y(r, c) * g(r, c);
      for (std::size_t c = 0; c < g.cols(); ++c) ga(r, c) += (g(r, c) - y(r, c) * dot) / norms[r];
    }
  });
}

Var log_softmax_rows(Var a) {
  Tape& t = a.tape();
  const Matrix& av = a.value();
  Matrix out(av.rows(), av.cols());
  for (std::size_t r = 0; r < av.rows(); ++r) {
    const auto row = av.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double acc = 0.0;
    for (double x : row) acc += std::exp(x - mx);
    const double lse = mx + std::log(acc);
    for (std::size_t c = 0; c < av.cols(); ++c) out(r, c) = row[c] - lse;
  }
  return t.record(std::move(out), {a}, [a](Tape& t, Var self) {
    if (!t.requires_grad(a)) return;
    const Matrix& g = t.grad(self);
    const Matrix& y = self.value();
    Matrix& ga = t.grad(a);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      double gsum = 0.0;
      for (std::size_t c = 0; c < g.cols(); ++c) gsum += g(r, c);
      for (std::size_t c = 0; c < g.cols(); ++c) ga(r, c) += g(r, c) - std::exp(y(r, c)) * gsum;
    }
  });
}

Var logsumexp_rows(Var a) {
  Tape& t = a.tape();
  const Matrix& av = a.value();
  if (av.cols() == 0) throw DomainError("logsumexp_rows of a matrix with no columns");
  Matrix out(av.rows(), 1);
  for (std::size_t r = 0; r < av.rows(); ++r) {
    const auto row = av.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double acc = 0.0;
    for (double x : row) acc += std::exp(x - mx);
    out(r, 0) = mx + std::log(acc);
  }
  return t.record(std::move(out), {a}, [a](Tape& t, Var self) {
    if (!t.requires_grad(a)) return;
    const Matrix& g = t.grad(self);
    const Matrix& y = self.value();
    const Matrix& x = a.value();
    Matrix& ga = t.grad(a);
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < x.cols(); ++c) ga(r, c) += g(r, 0) * std::exp(x(r, c) - y(r, 0));
  });
}

Var row_sums(Var a) {
  Tape& t = a.tape();
  const Matrix& av = a.value();
  Matrix out(av.rows(), 1);
  for (std::size_t r = 0; r < av.rows(); ++r) {
    double acc = 0.0;
    for (double x : av.row(r)) acc += x;
    out(r, 0) = acc;
  }
  return t.record(std::move(out), {a}, [a](Tape& t, Var self) {
    if (!t.requires_grad(a)) return;
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(a);
    for (std::size_t r = 0; r < ga.rows(); ++r)
      for (double& x : ga.row(r)) x += g(r, 0);
  });
}

Var sum(Var a) {
  Tape& t = a.tape();
  double acc = 0.0;
  for (double x : a.value().values()) acc += x;
  return t.record(Matrix::scalar(acc), {a}, [a](Tape& t, Var self) {
    if (!t.requires_grad(a)) return;
    const double g = t.grad(self)(0, 0);
    for (double& x : t.grad(a).values()) x += g;
  });
}

Var pairwise_gauss_log_pdf(Var z, Var mean, Var log_var) {
  Tape& t = same_tape(z, mean);
  same_tape(mean, log_var);
  Matrix out = numcore::pairwise_gauss_log_pdf(z.value(), mean.value(), log_var.value());
  return t.record(std::move(out), {z, mean, log_var}, [z, mean, log_var](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    const Matrix& zv = z.value();
    const Matrix& mv = mean.value();
    const Matrix& lv = log_var.value();
    const std::size_t dim = zv.cols();
    Matrix gz(zv.rows(), dim);
    Matrix gm(mv.rows(), dim);
    Matrix glv(mv.rows(), dim);
    for (std::size_t r = 0; r < zv.rows(); ++r)
      for (std::size_t k = 0; k < mv.rows(); ++k) {
        const double w = g(r, k);
        if (w == 0.0) continue;
        for (std::size_t d = 0; d < dim; ++d) {
          const double prec = std::exp(-lv(k, d));
          const double diff = zv(r, d) - mv(k, d);
          const double scaled = diff * prec;
          gz(r, d) -= w * scaled;
          gm(k, d) += w * scaled;
          glv(k, d) -= 0.5 * w * (1.0 - diff * scaled);
        }
      }
    if (t.requires_grad(z)) add_into(t.grad(z), gz);
    if (t.requires_grad(mean)) add_into(t.grad(mean), gm);
    if (t.requires_grad(log_var)) add_into(t.grad(log_var), glv);
  });
}

}  // namespace vampcf::numcore::ops
