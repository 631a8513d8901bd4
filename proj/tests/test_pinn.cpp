#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "symcat/enriched.hpp"
#include "symcat/error.hpp"
#include "symcat/pinn.hpp"

using namespace symcat;
using namespace symcat::pinn;

namespace {

Ansatz zero_ansatz() {
  Ansatz a = init_ansatz({1, 4}, 0);
  a.base = unflatten(a.base, Vector::Zero(static_cast<Eigen::Index>(a.base.parameter_count())));
  return a;
}

// Hidden units tanh(w x + b) and tanh(-w x + b) with equal output weights: an even function.
Ansatz even_ansatz() {
  Ansatz a = init_ansatz({1, 2}, 0);
  a.base.layers[0].w << 1.3, -1.3;
  a.base.layers[0].b << 0.4, 0.4;
  a.base.layers[1].w << 0.7, 0.7;
  a.base.layers[1].b << -0.2;
  return a;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::UsageError;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("exact solutions have negligible residual loss") {
  for (const std::string src : {"cospi", "zero", "one"}) {
    for (auto [ua, ub] : {std::pair{-1.0, -1.0}, std::pair{0.0, 0.0}, std::pair{2.0, -0.5}}) {
      PdeSpec s;
      s.source = src;
      s.ua = ua;
      s.ub = ub;
      const auto u = exact_solution(s);
      REQUIRE(u.has_value());
      INFO(src << " " << ua << " " << ub);
      CHECK(residual_loss(*u, s) <= 1e-10);
    }
  }
  PdeSpec shifted;
  shifted.a = 0.0;
  shifted.b = 3.0;
  CHECK(residual_loss(*exact_solution(shifted), shifted) <= 1e-10);
}

TEST_CASE("residual loss of the zero ansatz") {
  PdeSpec s;
  s.source = "zero";
  s.ua = s.ub = 0.0;
  CHECK(residual_loss(zero_ansatz(), s) == 0.0);

  s.source = "one";
  CHECK(residual_loss(zero_ansatz(), s) == 1.0);
  s.ua = 2.0;
  s.ub = -1.0;
  s.lambda = 0.5;
  CHECK(residual_loss(zero_ansatz(), s) == 1.0 + 0.5 * 5.0);

  s.samples = std::vector<double>(s.collocation, 3.0);
  s.ua = s.ub = 0.0;
  CHECK(residual_loss(zero_ansatz(), s) == 9.0);
}

TEST_CASE("spec validation") {
  PdeSpec s;
  s.a = 1.0;
  CHECK(kind_of([&] { validate_spec(s); }) == ErrorKind::MalformedDocument);
  s = {};
  s.collocation = 1;
  CHECK(kind_of([&] { validate_spec(s); }) == ErrorKind::MalformedDocument);
  s = {};
  s.ua = NAN;
  CHECK(kind_of([&] { validate_spec(s); }) == ErrorKind::MalformedDocument);
  s = {};
  s.source = "sinpi";
  CHECK(kind_of([&] { validate_spec(s); }) == ErrorKind::SchemaError);
  s = {};
  s.equation = "heat1d";
  CHECK(kind_of([&] { validate_spec(s); }) == ErrorKind::SchemaError);
  s = {};
  s.samples = {1.0, 2.0};
  CHECK(kind_of([&] { validate_spec(s); }) == ErrorKind::MalformedDocument);
}

TEST_CASE("collocation points include the ends and mirror exactly") {
  PdeSpec s;
  const auto xs = collocation_points(s);
  REQUIRE(xs.size() == 12);
  CHECK(xs.front() == -1.0);
  CHECK(xs.back() == 1.0);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(xs[i] == -xs[xs.size() - 1 - i]);
}

TEST_CASE("symmetrization") {
  PdeSpec s;
  const Ansatz base = init_ansatz({2, 16}, 3);
  // Zero biases and tanh make the initial network odd, so its symmetrization vanishes.
  const Ansatz odd = symmetrize(base, s);
  for (double x : {-0.9, -0.2, 0.0, 0.35, 1.0}) CHECK(std::abs(evaluate(odd, x).v) <= 1e-15);
  CHECK(invariance_defect(odd, s) == 0.0);

  const Ansatz even = even_ansatz();
  const Ansatz even_s = symmetrize(even, s);
  for (double x : {-0.9, -0.2, 0.0, 0.35, 1.0}) CHECK(std::abs(evaluate(even_s, x).v - evaluate(even, x).v) <= 1e-15);

  Ansatz random = init_ansatz({2, 16}, 11);
  Vector p = flatten(random.base);
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) += 0.3 * std::sin(static_cast<double>(i));  // nonzero biases too
  random.base = unflatten(random.base, p);
  CHECK(invariance_defect(random, s) > 1e-3);
  CHECK(invariance_defect(symmetrize(random, s), s, 101) <= 1e-12);

  PdeSpec lopsided;
  lopsided.a = -1.0;
  lopsided.b = 2.0;
  CHECK(kind_of([&] { symmetrize(base, lopsided); }) == ErrorKind::AsymmetricDomain);
}

TEST_CASE("second derivatives agree with finite differences") {
  for (const auto& arch : {Arch{1, 8}, Arch{2, 16}, Arch{3, 4}}) {
    for (bool sym : {false, true}) {
      Ansatz a = init_ansatz(arch, 5);
      Vector p = flatten(a.base);
      for (Eigen::Index i = 0; i < p.size(); ++i) p(i) += 0.2 * std::cos(3.0 * static_cast<double>(i));
      a.base = unflatten(a.base, p);
      a.symmetrized = sym;
      const double h = 1e-4;
      for (std::size_t k = 0; k < 50; ++k) {
        const double x = -1.0 + 2.0 * static_cast<double>(k) / 49.0;
        const Jet j = evaluate(a, x);
        const double d1 = (evaluate(a, x + h).v - evaluate(a, x - h).v) / (2 * h);
        const double d2 = (evaluate(a, x + h).v - 2 * j.v + evaluate(a, x - h).v) / (h * h);
        CHECK(std::abs(j.d1 - d1) / std::max(1.0, std::abs(j.d1)) <= 1e-6);
        CHECK(std::abs(j.d2 - d2) / std::max(1.0, std::abs(j.d2)) <= 1e-4);
      }
    }
  }
}

TEST_CASE("reverse-mode loss gradient agrees with central differences") {
  PdeSpec s;
  for (bool sym : {false, true}) {
    for (std::uint64_t probe = 0; probe < 10; ++probe) {
      Ansatz a = init_ansatz({2, 8}, probe);
      a.symmetrized = sym;
      const Vector p0 = flatten(a.base) + 0.1 * enriched::sample_vector(probe, 0, a.base.parameter_count());
      a.base = unflatten(a.base, p0);
      const auto lg = loss_gradient(a, s);
      CHECK(lg.loss == residual_loss(a, s));
      Vector fd(p0.size());
      for (Eigen::Index i = 0; i < p0.size(); ++i) {
        Vector up = p0, down = p0;
        up(i) += 1e-6;
        down(i) -= 1e-6;
        Ansatz au = a, ad_ = a;
        au.base = unflatten(a.base, up);
        ad_.base = unflatten(a.base, down);
        fd(i) = (residual_loss(au, s) - residual_loss(ad_, s)) / 2e-6;
      }
      const double err = (lg.gradient - fd).cwiseAbs().maxCoeff() /
                         std::max({1.0, lg.gradient.cwiseAbs().maxCoeff(), fd.cwiseAbs().maxCoeff()});
      CHECK(err <= 1e-6);
    }
  }
}

TEST_CASE("zero steps reports initial losses from identical weights") {
  PdeSpec s;
  TrainOptions o;
  o.steps = 0;
  const auto c = train_compare(s, {2, 16}, o);
  CHECK(c.baseline.loss_curve.size() == 1);
  CHECK(c.symmetrized.loss_curve.size() == 1);
  CHECK(flatten(c.baseline.final_ansatz.base) == flatten(c.symmetrized.final_ansatz.base));
  CHECK(c.source_even);
  CHECK(c.warnings.empty());
}

TEST_CASE("short training is deterministic and keeps the symmetrized ansatz invariant") {
  PdeSpec s;
  TrainOptions o;
  o.steps = 150;
  o.seed = 4;
  const auto a = train_compare(s, {2, 16}, o);
  const auto b = train_compare(s, {2, 16}, o);
  CHECK(same_bits(a.baseline.loss_curve, b.baseline.loss_curve));
  CHECK(same_bits(a.symmetrized.loss_curve, b.symmetrized.loss_curve));
  CHECK(a.baseline.loss_curve.size() == 151);
  CHECK(a.symmetrized.max_defect <= 1e-12);
  for (double d : a.symmetrized.defect_curve) CHECK(d <= 1e-12);
  CHECK(a.baseline.loss_curve.back() < a.baseline.loss_curve.front());
  CHECK(a.symmetrized.loss_curve.back() < a.symmetrized.loss_curve.front());
  for (const auto& [t, hit] : a.baseline.steps_to_threshold) {
    if (hit) CHECK(a.baseline.loss_curve[*hit] < t);
  }
}

TEST_CASE("divergent training aborts with a partial curve") {
  PdeSpec s;
  TrainOptions o;
  o.steps = 500;
  o.lr = 50.0;
  const auto r = train(s, {2, 16}, false, o);
  CHECK(r.aborted);
  CHECK(r.loss_curve.size() < 501);
  CHECK_FALSE(r.loss_curve.empty());
}

TEST_CASE("comparison warnings") {
  PdeSpec s;
  s.samples.resize(s.collocation);
  for (std::size_t i = 0; i < s.collocation; ++i) s.samples[i] = static_cast<double>(i);
  TrainOptions o;
  o.steps = 0;
  const auto c = train_compare(s, {1, 4}, o);
  CHECK_FALSE(c.source_even);
  CHECK_FALSE(c.warnings.empty());

  PdeSpec lopsided;
  lopsided.b = 2.0;
  const auto d = train_compare(lopsided, {1, 4}, o);
  CHECK(d.symmetrized.loss_curve.empty());
  CHECK_FALSE(d.warnings.empty());
}

TEST_CASE("architecture parsing") {
  CHECK(parse_arch("2x16").hidden_layers == 2);
  CHECK(parse_arch("2x16").width == 16);
  CHECK(kind_of([] { parse_arch("16"); }) == ErrorKind::UsageError);
  CHECK(kind_of([] { parse_arch("0x16"); }) == ErrorKind::UsageError);
  CHECK(kind_of([] { parse_arch("2x"); }) == ErrorKind::UsageError);
  CHECK(kind_of([] { parse_arch("-2x4"); }) == ErrorKind::UsageError);
  const auto a = init_ansatz(parse_arch("2x16"), 0);
  CHECK(a.base.parameter_count() == 16 + 16 + 256 + 16 + 16 + 1);
}
