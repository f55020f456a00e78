#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tempdir.hpp"
#include "vampcf/error.hpp"
#include "vampcf/dataset/split.hpp"
#include "vampcf/model/checkpoint.hpp"
#include "vampcf/model/graph.hpp"
#include "vampcf/model/model.hpp"
#include "vampcf/numcore/gradcheck.hpp"
#include "vampcf/numcore/kernels.hpp"
#include "vampcf/numcore/scalar.hpp"

using namespace vampcf;
using namespace vampcf::model;
using numcore::Matrix;

namespace {

const double kLn2Pi = std::log(2.0 * std::numbers::pi);

ModelConfig tiny(PriorKind prior = PriorKind::standard, Hierarchy h = Hierarchy::flat,
                 bool gated = false, Likelihood lik = Likelihood::multinomial) {
  ModelConfig c;
  c.prior = prior;
  c.hierarchy = h;
  c.gated = gated;
  c.likelihood = lik;
  c.hidden = 16;
  c.latent_z1 = 4;
  c.latent_z2 = 4;
  c.n_pseudo = 3;
  c.n_items = 30;
  return c;
}

std::vector<dataset::InteractionVector> random_users(std::size_t n, std::size_t m,
                                                     std::mt19937_64& rng) {
  std::vector<dataset::InteractionVector> out;
  std::bernoulli_distribution coin(0.25);
  for (std::size_t u = 0; u < n; ++u) {
    dataset::InteractionVector v{u, {}};
    for (std::uint32_t i = 0; i < m; ++i)
      if (coin(rng)) v.items.push_back(i);
    if (v.items.empty()) v.items.push_back(static_cast<std::uint32_t>(u % m));
    out.push_back(v);
  }
  return out;
}

Matrix dense(const std::vector<dataset::InteractionVector>& users, std::size_t m) {
  std::vector<const dataset::InteractionVector*> ptr;
  for (const auto& u : users) ptr.push_back(&u);
  return dataset::to_dense(ptr, m);
}

ModelParams random_params(const ModelConfig& c, std::mt19937_64& rng) {
  auto users = random_users(20, c.n_items, rng);
  ModelParams p = initialize(c, users, rng);
  std::normal_distribution<double> n(0.0, 0.1);
  for (auto& t : p.tensors())
    if (t.value->rows() == 1 && t.name != "pseudo_inputs")
      for (double& v : t.value->values()) v = n(rng);
  return p;
}

GaussianParams gauss(std::initializer_list<double> mean, std::initializer_list<double> log_var) {
  return {Matrix::from_rows({mean}), Matrix::from_rows({log_var})};
}

// Independent per-row oracle of the diagonal Gaussian KL.
double kl_oracle(const GaussianParams& q, const GaussianParams& p) {
  double kl = 0.0;
  for (std::size_t d = 0; d < q.mean.size(); ++d) {
    const double vq = std::exp(q.log_var[d]), vp = std::exp(p.log_var[d]);
    const double dm = q.mean[d] - p.mean[d];
    kl += 0.5 * ((vq + dm * dm) / vp - 1.0 + std::log(vp) - std::log(vq));
  }
  return kl;
}

}  // namespace

TEST_CASE("gated layer examples") {
  GatedLayerParams l{Matrix::scalar(1), Matrix::scalar(0), Matrix::scalar(0), Matrix::scalar(0), true};
  CHECK(gated_layer(Matrix::scalar(1), l) == Matrix::scalar(0.5));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  GatedLayerParams g{Matrix(3, 2), Matrix(1, 2), Matrix(3, 2), Matrix(1, 2, 50.0), true};
  for (auto* m : {&g.W, &g.b}) for (double& v : m->values()) v = n(rng);
  const Matrix x = Matrix::from_rows({{0.3, -0.2, 0.9}});
  Matrix linear = numcore::matmul(x, g.W);
  for (std::size_t j = 0; j < 2; ++j) linear[j] += g.b[j];
  CHECK(numcore::max_abs_diff(gated_layer(x, g), linear) < 1e-8);

  g.c.fill(-50.0);
  const Matrix closed = gated_layer(x, g);
  for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(closed[j]) <= 1e-8 * std::abs(linear[j]));

  g.c.fill(0.7);
  const Matrix zero = gated_layer(Matrix(1, 3), g);
  for (std::size_t j = 0; j < 2; ++j) CHECK(zero[j] == doctest::Approx(g.b[j] * numcore::sigmoid(0.7)));

  GatedLayerParams t{Matrix::scalar(2), Matrix::scalar(0.5), {}, {}, false};
  CHECK(gated_layer(Matrix::scalar(1), t).item() == doctest::Approx(std::tanh(2.5)));
  CHECK_THROWS_AS(gated_layer(Matrix(1, 2), t), ShapeError);
}

TEST_CASE("encode_z2") {
  const ModelConfig c = tiny();
  const ModelParams zero = ModelParams::zeros(c);
  std::mt19937_64 rng(2);
  const Matrix x = dense(random_users(5, 30, rng), 30);
  const GaussianParams g = encode_z2(x, zero);
  CHECK(g.mean == Matrix(5, 4));
  CHECK(g.log_var == Matrix(5, 4));

  const ModelParams p = random_params(c, rng);
  const GaussianParams a = encode_z2(x, p), b = encode_z2(x, p);
  CHECK(a.mean == b.mean);
  CHECK(a.log_var == b.log_var);
  Matrix x3 = x;
  for (double& v : x3.values()) v *= 3.0;
  const GaussianParams s = encode_z2(x3, p);
  CHECK(numcore::max_abs_diff(s.mean, a.mean) < 1e-12);
  CHECK(numcore::max_abs_diff(s.log_var, a.log_var) < 1e-12);

  // zero rows pass through without NaN
  CHECK(encode_z2(Matrix(2, 30), p).mean.all_finite());

  // dropout only in train mode
  Rng r1(5), r2(5);
  const GaussianParams t1 = encode_z2(x, p, Mode::train, &r1, 0.5);
  const GaussianParams t2 = encode_z2(x, p, Mode::train, &r2, 0.5);
  CHECK(t1.mean == t2.mean);
  CHECK_FALSE(t1.mean == a.mean);
}

TEST_CASE("encode_z1 and prior_z1") {
  const ModelConfig c = tiny(PriorKind::vamp, Hierarchy::two_level);
  std::mt19937_64 rng(3);
  const Matrix x = dense(random_users(4, 30, rng), 30);
  const ModelParams zero = ModelParams::zeros(c);
  Rng r(1);
  const LatentSample z2 = sample(encode_z2(x, zero), r);
  const GaussianParams q1 = encode_z1(x, z2, zero);
  CHECK(q1.mean == Matrix(4, c.latent_z1));
  CHECK(q1.log_var == Matrix(4, c.latent_z1));
  const GaussianParams p1 = prior_z1(z2, zero);
  CHECK(p1.mean == Matrix(4, c.latent_z1));

  const ModelParams p = random_params(c, rng);
  for (int t = 0; t < 50; ++t) {
    const LatentSample s = sample(encode_z2(x, p), r);
    const GaussianParams a = prior_z1(s, p), b = prior_z1(s, p);
    CHECK(a.mean == b.mean);
    CHECK(kl_diag_gauss(encode_z1(x, s, p), a) >= 0.0);
  }

  const ModelParams flat = ModelParams::zeros(tiny());
  const LatentSample fz = sample(encode_z2(x, flat), r);
  CHECK_THROWS_AS(encode_z1(x, fz, flat), ConfigError);
  CHECK_THROWS_AS(prior_z1(fz, flat), ConfigError);
}

TEST_CASE("sample") {
  GaussianParams g{Matrix(1, 3, 2.0), Matrix(1, 3, -10.0)};
  Rng r(7);
  const LatentSample s = sample(g, r);
  for (std::size_t d = 0; d < 3; ++d) {
    CHECK(s.z[d] == g.mean[d] + std::exp(-5.0) * s.noise[d]);
    CHECK(std::abs(s.z[d] - 2.0) <= 0.0068 * std::abs(s.noise[d]));
  }
  Rng r2(7);
  CHECK(sample(g, r2).z == s.z);

  GaussianParams one{Matrix(100000, 1, 1.0), Matrix(100000, 1, 0.0)};
  const LatentSample many = sample(one, r);
  double mean = 0;
  for (double v : many.z.values()) mean += v;
  CHECK(mean / 100000 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("decode") {
  const ModelConfig c = tiny();
  const ModelParams zero = ModelParams::zeros(c);
  CHECK(decode(Matrix(2, 4, 1.3), nullptr, zero) == Matrix(2, 30));
  std::mt19937_64 rng(4);
  const ModelParams p = random_params(c, rng);
  CHECK(decode(Matrix(2, 4, 1e3), nullptr, p).all_finite());
  CHECK_THROWS(decode(Matrix(2, 5), nullptr, p));

  const ModelParams h = random_params(tiny(PriorKind::vamp, Hierarchy::two_level), rng);
  const Matrix z1(1, 4, 0.2), z2(1, 4, -0.1);
  CHECK(decode(z1, &z2, h).cols() == 30);
  CHECK_THROWS_AS(decode(z1, nullptr, h), ConfigError);
}

TEST_CASE("likelihood spot values") {
  const Matrix x = Matrix::from_rows({{1, 0, 1, 0}});
  // the six-decimal literals are roundings of the closed forms
  CHECK(std::abs(log_lik_multinomial(Matrix(1, 4), x) - 2 * std::log(0.25)) < 1e-12);
  CHECK(std::abs(log_lik_multinomial(Matrix(1, 4), x) + 2.772589) < 5e-7);
  const Matrix skew = Matrix::from_rows({{std::log(3.0), 0, 0, 0}});
  CHECK(std::abs(log_lik_multinomial(skew, x) - (std::log(0.5) + std::log(1.0 / 6))) < 1e-12);
  CHECK(std::abs(log_lik_multinomial(skew, x) + 2.484907) < 1e-6);
  CHECK(log_lik_multinomial(skew, Matrix(1, 4)) == 0.0);

  CHECK(std::abs(log_lik_bernoulli(Matrix(1, 4), x) - 4 * std::log(0.5)) < 1e-12);
  const Matrix sat = Matrix::from_rows({{50, -50, 50, -50}});
  CHECK(std::abs(log_lik_bernoulli(sat, x)) < 1e-20);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 3);
  std::bernoulli_distribution coin(0.3);
  for (int t = 0; t < 200; ++t) {
    Matrix l(2, 9), xx(2, 9);
    for (double& v : l.values()) v = n(rng);
    for (double& v : xx.values()) v = coin(rng);
    CHECK(log_lik_multinomial(l, xx) <= 0.0);
    CHECK(log_lik_bernoulli(l, xx) <= 0.0);
    Matrix shifted = l;
    const double c = n(rng) * 10;
    for (double& v : shifted.values()) v += c;
    CHECK(std::abs(log_lik_multinomial(shifted, xx) - log_lik_multinomial(l, xx)) < 1e-10);
  }
}

TEST_CASE("kl_diag_gauss") {
  const GaussianParams a = gauss({0.3, -1.0}, {0.2, -0.5});
  CHECK(kl_diag_gauss(a, a) == 0.0);
  CHECK(std::abs(kl_diag_gauss(gauss({1}, {0}), gauss({0}, {0})) - 0.5) < 1e-12);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 10000; ++t) {
    GaussianParams q{Matrix(1, 3), Matrix(1, 3)}, p{Matrix(1, 3), Matrix(1, 3)};
    for (auto* m : {&q.mean, &q.log_var, &p.mean, &p.log_var})
      for (double& v : m->values()) v = u(rng);
    const double kl = kl_diag_gauss(q, p);
    CHECK(kl >= 0.0);
    CHECK(std::abs(kl - kl_oracle(q, p)) < 1e-10 * std::max(1.0, kl));
  }
  CHECK_THROWS(kl_diag_gauss(gauss({0}, {0}), gauss({0, 0}, {0, 0})));
}

TEST_CASE("vamp log density") {
  ModelConfig c = tiny(PriorKind::vamp);
  c.latent_z2 = 2;
  c.n_pseudo = 1;
  ModelParams zero = ModelParams::zeros(c);
  const double origin[] = {0.0, 0.0};
  CHECK(std::abs(vamp_log_density(origin, zero) + kLn2Pi) < 1e-12);

  std::mt19937_64 rng(8);
  c.n_pseudo = 1;
  ModelParams one = random_params(c, rng);
  ModelConfig c2 = c;
  c2.n_pseudo = 2;
  ModelParams two = one;
  two.config = c2;
  two.pseudo_inputs = Matrix(2, 30);
  for (std::size_t j = 0; j < 30; ++j) two.pseudo_inputs(0, j) = two.pseudo_inputs(1, j) = one.pseudo_inputs(0, j);
  std::normal_distribution<double> n;
  for (int t = 0; t < 50; ++t) {
    const double z[] = {n(rng), n(rng)};
    CHECK(std::abs(vamp_log_density(z, one) - vamp_log_density(z, two)) < 1e-12);
  }

  c.n_pseudo = 5;
  ModelParams five = random_params(c, rng);
  ModelParams rev = five;
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t j = 0; j < 30; ++j) rev.pseudo_inputs(k, j) = five.pseudo_inputs(4 - k, j);
  Matrix zs(20, 2);
  for (double& v : zs.values()) v = n(rng);
  const auto a = vamp_log_density(zs, five), b = vamp_log_density(zs, rev);
  for (std::size_t r = 0; r < 20; ++r) {
    CHECK(std::abs(a[r] - b[r]) < 1e-12);
    CHECK(a[r] == vamp_log_density(zs.row(r), five));
  }

  ModelConfig bad = c;
  bad.n_pseudo = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(vamp_log_density(origin, ModelParams::zeros(tiny())), ConfigError);
}

TEST_CASE("vamp prior with K = N is the aggregated posterior") {
  ModelConfig c = tiny(PriorKind::vamp);
  std::mt19937_64 rng(9);
  const auto users = random_users(12, 30, rng);
  c.n_pseudo = users.size();
  ModelParams p = random_params(c, rng);
  p.pseudo_inputs = dense(users, 30);
  const GaussianParams post = encode_z2(p.pseudo_inputs, p);
  std::normal_distribution<double> n;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> z(4);
    for (double& v : z) v = n(rng);
    std::vector<double> terms;
    for (std::size_t u = 0; u < users.size(); ++u) {
      double lp = 0;
      for (std::size_t d = 0; d < 4; ++d) {
        const double var = std::exp(post.log_var(u, d)), dz = z[d] - post.mean(u, d);
        lp += -0.5 * (kLn2Pi + std::log(var) + dz * dz / var);
      }
      terms.push_back(lp);
    }
    const double oracle = numcore::logsumexp(terms) - std::log(double(users.size()));
    CHECK(std::abs(vamp_log_density(z, p) - oracle) < 1e-12);
  }
}

TEST_CASE("elbo terms") {
  std::mt19937_64 rng(10);
  const auto users = random_users(6, 30, rng);
  const Matrix x = dense(users, 30);
  const ModelParams zero = ModelParams::zeros(tiny());
  Rng r(1);
  const ElboTerms t = elbo(x, zero, 1.0, r);
  double recon = 0;
  for (const auto& u : users) recon += double(u.count()) * std::log(1.0 / 30);
  recon /= double(users.size());
  CHECK(std::abs(t.recon - recon) < 1e-12);
  CHECK(t.kl_z2 == 0.0);
  CHECK(t.elbo == t.recon);

  for (const ModelConfig& c : {tiny(), tiny(PriorKind::vamp), tiny(PriorKind::vamp, Hierarchy::two_level, true)}) {
    const ModelParams p = random_params(c, rng);
    Rng a(3);
    const ElboTerms e0 = elbo(x, p, 0.0, a);
    CHECK(e0.elbo == e0.recon);
    Rng b(3);
    const ElboTerms e1 = elbo(x, p, 0.4, b);
    CHECK(std::abs(e1.elbo - (e1.recon - 0.4 * (e1.kl_z1 + e1.kl_z2))) < 1e-10);
    Rng d(3);
    CHECK_THROWS_AS(elbo(x, p, 1.5, d), ConfigError);
    CHECK_THROWS_AS(elbo(x, p, -0.1, d), ConfigError);
  }
}

TEST_CASE("single-sample vamp KL matches the closed form for K = 1") {
  ModelConfig c = tiny(PriorKind::vamp);
  c.n_pseudo = 1;
  std::mt19937_64 rng(11);
  const ModelParams p = random_params(c, rng);
  const auto users = random_users(1, 30, rng);
  const std::size_t n = 100000;
  Matrix x(n, 30);
  for (std::size_t r = 0; r < n; ++r)
    for (auto i : users[0].items) x(r, i) = 1.0;

  Rng r(5);
  const graph::ElboNoise noise = graph::draw_noise(c, n, Mode::eval, 0.0, r);
  numcore::Tape tape;
  graph::ParamBinding bind(tape, p);
  const graph::ElboGraph g = graph::build_elbo(bind, x, 1.0, noise);
  double mean = 0, sq = 0;
  for (double v : g.kl_z2_rows.value().values()) {
    mean += v;
    sq += v * v;
  }
  mean /= double(n);
  const double se = std::sqrt((sq / double(n) - mean * mean) / double(n - 1));
  const double closed = kl_diag_gauss(encode_z2(dataset::to_dense(users[0], 30), p),
                                      encode_z2(p.pseudo_inputs, p));
  INFO("mc " << mean << " closed " << closed << " se " << se);
  CHECK(std::abs(mean - closed) < 3 * se);
}

TEST_CASE("elbo decomposition") {
  std::mt19937_64 rng(12);
  const Matrix x = dense(random_users(50, 30, rng), 30);
  const ModelParams zero = ModelParams::zeros(tiny());
  Rng r(2);
  const ElboDecomposition d = elbo_decomposition(x, zero, 200, r);
  const double h = 0.5 * 4 * (1 + kLn2Pi);
  CHECK(std::abs(d.posterior_entropy - h) < 1e-12);
  CHECK(std::abs(d.cross_entropy_prior - h) < 4 * d.cross_entropy_stderr);
  CHECK(d.cross_entropy_stderr > 0.0);
  double recon = 0;
  for (std::size_t u = 0; u < 50; ++u)
    for (std::size_t i = 0; i < 30; ++i) recon += x(u, i) * std::log(1.0 / 30);
  CHECK(std::abs(d.recon - recon / 50) < 1e-12);
  CHECK_THROWS(elbo_decomposition(Matrix(0, 30), zero, 10, r));
}

TEST_CASE("fold-in latents and scoring") {
  std::mt19937_64 rng(13);
  const Matrix x = dense(random_users(5, 30, rng), 30);
  const ModelParams zero = ModelParams::zeros(tiny(PriorKind::vamp, Hierarchy::two_level));
  const FoldInLatents z = fold_in_latents(x, zero);
  CHECK(z.z1 == Matrix(5, 4));
  CHECK(z.z2 == Matrix(5, 4));

  const ModelParams flat = random_params(tiny(), rng);
  const FoldInLatents f = fold_in_latents(x, flat);
  CHECK(f.z1 == f.z2);
  CHECK(f.z2 == encode_z2(x, flat).mean);

  const ModelParams h = random_params(tiny(PriorKind::vamp, Hierarchy::two_level, true), rng);
  const FoldInLatents a = fold_in_latents(x, h), b = fold_in_latents(x, h);
  CHECK(a.z1 == b.z1);
  CHECK(a.z2 == b.z2);
  CHECK(score(x, h) == decode(a.z1, &a.z2, h));
  CHECK(score(x, h) == score(x, h));
}

TEST_CASE("full-model gradient matches finite differences for every tensor") {
  std::mt19937_64 rng(14);
  const Matrix x = dense(random_users(3, 30, rng), 30);
  for (const ModelConfig& c : {tiny(PriorKind::vamp, Hierarchy::two_level, true),
                               tiny(PriorKind::standard, Hierarchy::flat, false, Likelihood::bernoulli)}) {
    const ModelParams p = random_params(c, rng);
    Rng r(4);
    const graph::ElboNoise noise = graph::draw_noise(c, 3, Mode::eval, 0.0, r);
    ModelParams grads = ModelParams::zeros(c);
    loss_and_gradient(x, p, 0.6, noise, &grads, nullptr);
    const auto gt = grads.tensors();
    ModelParams base = p;
    const auto pt = base.tensors();
    for (std::size_t i = 0; i < gt.size(); ++i) {
      const std::string name = gt[i].name;
      auto f = [&](const Matrix& value) {
        ModelParams q = p;
        *q.tensors()[i].value = value;
        return loss_and_gradient(x, q, 0.6, noise, nullptr, nullptr);
      };
      INFO(c.grid_name() << " " << name);
      CHECK(numcore::grad_check(f, *pt[i].value, *gt[i].value, 1e-5) < 1e-4);
    }
  }
}

TEST_CASE("config validation and presets") {
  ModelConfig c = tiny(PriorKind::standard, Hierarchy::two_level);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.prior = PriorKind::vamp;
  CHECK_NOTHROW(c.validate());
  c.hidden = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);

  const auto hg = preset("h_vamp_gated");
  REQUIRE(hg);
  CHECK(hg->prior == PriorKind::vamp);
  CHECK(hg->hierarchy == Hierarchy::two_level);
  CHECK(hg->gated);
  CHECK(hg->grid_name() == "H+Vamp (Gated)");
  CHECK(preset("multi_vae")->grid_name() == "Multi-VAE");
  CHECK(preset("vamp")->grid_name() == "Vamp");
  CHECK_FALSE(preset("nope"));
  CHECK(ModelConfig{}.hidden == 600);
  CHECK(ModelConfig{}.n_pseudo == 1000);
}

TEST_CASE("parameter initialization") {
  std::mt19937_64 rng(15);
  const auto users = random_users(10, 30, rng);
  const ModelConfig c = tiny(PriorKind::vamp, Hierarchy::two_level, true);
  Rng a(1), b(1);
  const ModelParams p = initialize(c, users, a), q = initialize(c, users, b);
  for (std::size_t i = 0; i < p.tensors().size(); ++i) CHECK(*p.tensors()[i].value == *q.tensors()[i].value);
  CHECK(p.head_z2.mean_b == Matrix(1, 4));
  // every pseudo-input is a jittered copy of some training row
  const Matrix x = dense(users, 30);
  for (std::size_t k = 0; k < 3; ++k) {
    double best = 1e9;
    for (std::size_t u = 0; u < 10; ++u) {
      double worst = 0;
      for (std::size_t j = 0; j < 30; ++j) worst = std::max(worst, std::abs(p.pseudo_inputs(k, j) - x(u, j)));
      best = std::min(best, worst);
    }
    CHECK(best < 0.1);
    CHECK(best > 0.0);
  }
  CHECK(ModelParams::zeros(tiny()).pseudo_inputs.empty());
}

TEST_CASE("checkpoint round trip") {
  std::mt19937_64 rng(16);
  const ModelConfig c = tiny(PriorKind::vamp, Hierarchy::two_level, true, Likelihood::bernoulli);
  Checkpoint ck{random_params(c, rng), {}, ""};
  for (int i = 0; i < 30; ++i) ck.vocabulary.push_back("item" + std::to_string(i));
  ck.vocab_fingerprint = dataset::vocabulary_fingerprint(ck.vocabulary);
  testing::TempDir tmp;
  save_checkpoint(tmp / "m.ckpt", ck);
  CHECK_FALSE(std::filesystem::exists(tmp / "m.ckpt.partial"));
  const Checkpoint back = load_checkpoint(tmp / "m.ckpt");
  CHECK(back.params.config == c);
  CHECK(back.vocabulary == ck.vocabulary);
  CHECK(back.vocab_fingerprint == ck.vocab_fingerprint);
  for (std::size_t i = 0; i < ck.params.tensors().size(); ++i)
    CHECK(*back.params.tensors()[i].value == *ck.params.tensors()[i].value);

  save_checkpoint(tmp / "again.ckpt", back);
  CHECK(testing::read_file(tmp / "again.ckpt") == testing::read_file(tmp / "m.ckpt"));

  std::string bytes = testing::read_file(tmp / "m.ckpt");
  testing::write_file(tmp / "short.ckpt", bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(load_checkpoint(tmp / "short.ckpt"), DataError);
  testing::write_file(tmp / "long.ckpt", bytes + "x");
  CHECK_THROWS_AS(load_checkpoint(tmp / "long.ckpt"), DataError);
  CHECK_THROWS_AS(load_checkpoint(tmp / "missing.ckpt"), DataError);
}
