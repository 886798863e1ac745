#include <doctest.h>

#include <memory>
#include <string>
#include <vector>

#include "wallx/series.hpp"
#include "wallx/target.hpp"

using namespace wallx;

namespace {

std::string tgt(const char* f) { return std::string(WALLX_TARGETS_DIR) + "/" + f; }

std::shared_ptr<const ToricTarget> load(const char* f) {
  return std::make_shared<const ToricTarget>(ToricTarget::parse_file(tgt(f)));
}

SeriesContext make_ctx(std::shared_ptr<const ToricTarget> t, long D, int M, int zmin, int zmax,
                       int ntv) {
  SeriesContext c;
  c.target = std::move(t);
  c.trunc = TruncationSpec{D, M, zmin, zmax};
  c.n_tvars = ntv;
  return c;
}

Scalar sc(const SeriesContext& c, long n, long d = 1) {
  return Scalar(c.target->n_scalar_vars(), Rat(n, d));
}

SKey qk(const SeriesContext& c, long d) {
  SKey k = skey_zero(c);
  k.beta[0] = d;
  return k;
}

SKey tk(const SeriesContext& c, long d, std::vector<int> texp) {
  SKey k{Curve{d}, std::move(texp)};
  return k;
}

}  // namespace

TEST_CASE("series product: difference of squares") {
  auto ctx = make_ctx(load("p1.toml"), 3, 0, 0, 0, 0);
  NovikovSeries<Scalar> a(ctx), b(ctx);
  a.add(qk(ctx, 0), sc(ctx, 1));
  a.add(qk(ctx, 1), sc(ctx, 1));
  b.add(qk(ctx, 0), sc(ctx, 1));
  b.add(qk(ctx, 1), sc(ctx, -1));
  auto p = a * b;
  REQUIRE(p.term_count() == 2);
  CHECK(p.find(qk(ctx, 0))->value_equals(sc(ctx, 1)));
  CHECK(p.find(qk(ctx, 2))->value_equals(sc(ctx, -1)));
  CHECK(p.find(qk(ctx, 1)) == nullptr);
}

TEST_CASE("series product respects the theta-degree cap") {
  auto ctx = make_ctx(load("p1.toml"), 1, 0, 0, 0, 0);
  NovikovSeries<Scalar> a(ctx);
  a.add(qk(ctx, 0), sc(ctx, 1));
  a.add(qk(ctx, 1), sc(ctx, 5));
  auto p = a * a;
  CHECK(p.find(qk(ctx, 1))->value_equals(sc(ctx, 10)));
  CHECK(p.find(qk(ctx, 2)) == nullptr);  // truncated, not 25
}

TEST_CASE("exponentials in t/z multiply to one") {
  auto ctx = make_ctx(load("p1.toml"), 0, 3, -3, 0, 1);
  ZSeries<Scalar> ep(ctx), em(ctx);
  Rat f(1);
  for (int m = 0; m <= 3; ++m) {
    if (m > 0) f /= m;
    ep.add(-m, tk(ctx, 0, {m}), sc(ctx, 1).scaled(f));
    em.add(-m, tk(ctx, 0, {m}), sc(ctx, m % 2 ? -1 : 1).scaled(f));
  }
  auto prod = ep * em;
  auto one = ZSeries<Scalar>::unit(ctx, sc(ctx, 1));
  CHECK(value_equals(prod, one));
}

TEST_CASE("geometric series inversion") {
  auto ctx = make_ctx(load("p1.toml"), 5, 0, 0, 0, 0);
  NovikovSeries<Scalar> a(ctx);
  a.add(qk(ctx, 0), sc(ctx, 1));
  a.add(qk(ctx, 1), sc(ctx, -1));
  auto inv = a.invert();
  for (long d = 0; d <= 5; ++d) {
    REQUIRE(inv.find(qk(ctx, d)) != nullptr);
    CHECK(inv.find(qk(ctx, d))->value_equals(sc(ctx, 1)));
  }
  CHECK(value_equals(a * inv, NovikovSeries<Scalar>::unit(ctx, sc(ctx, 1))));
}

TEST_CASE("inversion of a hypergeometric leading series") {
  // Leading q-coefficients (5d)!/(d!)^5: 1, 120, 113400.
  auto ctx = make_ctx(load("p1.toml"), 2, 0, 0, 0, 0);
  NovikovSeries<Scalar> i0(ctx);
  i0.add(qk(ctx, 0), sc(ctx, 1));
  i0.add(qk(ctx, 1), sc(ctx, 120));
  i0.add(qk(ctx, 2), sc(ctx, 113400));
  auto inv = i0.invert();
  CHECK(inv.find(qk(ctx, 0))->value_equals(sc(ctx, 1)));
  CHECK(inv.find(qk(ctx, 1))->value_equals(sc(ctx, -120)));
  CHECK(inv.find(qk(ctx, 2))->value_equals(sc(ctx, -99000)));
  CHECK(value_equals(i0 * inv, NovikovSeries<Scalar>::unit(ctx, sc(ctx, 1))));
}

TEST_CASE("inversion requires a unit leading term") {
  auto ctx = make_ctx(load("p1.toml"), 2, 0, 0, 0, 0);
  NovikovSeries<Scalar> a(ctx);
  a.add(qk(ctx, 1), sc(ctx, 1));
  CHECK_THROWS_AS((void)a.invert(), ValidationError);
}

TEST_CASE("laurent series inversion carries negative z-powers") {
  auto ctx = make_ctx(load("p1.toml"), 0, 0, -3, 0, 0);
  ZSeries<Scalar> a(ctx);
  a.add(0, qk(ctx, 0), sc(ctx, 1));
  a.add(-1, qk(ctx, 0), sc(ctx, 1));  // 1 + 1/z
  auto inv = a.invert();
  for (int e = 0; e >= -3; --e) {
    REQUIRE(inv.find(e, qk(ctx, 0)) != nullptr);
    CHECK(inv.find(e, qk(ctx, 0))->value_equals(sc(ctx, e % 2 ? -1 : 1)));
  }
  auto ctx2 = make_ctx(load("p1.toml"), 0, 0, -3, 1, 0);
  ZSeries<Scalar> b(ctx2);
  b.add(1, qk(ctx2, 0), sc(ctx2, 1));
  b.add(0, qk(ctx2, 0), sc(ctx2, 1));  // 1 + z cannot be inverted in 1/z
  CHECK_THROWS_AS((void)b.invert(), ValidationError);
}

TEST_CASE("ring laws on a sampled corpus") {
  auto ctx = make_ctx(load("p1xp1.toml"), 2, 1, -1, 1, 1);
  int nv = ctx.target->n_scalar_vars();
  auto mk = [&](int seed) {
    ZSeries<Scalar> s(ctx);
    long v = seed;
    for (long b1 = 0; b1 <= 2; ++b1)
      for (long b2 = 0; b1 + b2 <= 2; ++b2)
        for (int m = 0; m <= 1; ++m)
          for (int e = -1; e <= 1; ++e) {
            v = (v * 37 + 11) % 19;
            if (v % 3 == 0) continue;
            SKey k{Curve{b1, b2}, {m}};
            s.add(e, k, Scalar(nv, Rat(v - 9, (v % 5) + 1)));
          }
    return s;
  };
  auto a = mk(1), b = mk(2), c = mk(3);
  CHECK(value_equals((a + b) * c, a * c + b * c));
  CHECK(value_equals(a * (b * c), (a * b) * c));
  CHECK(value_equals(a * b, b * a));
}

TEST_CASE("t substitution: identity, shift, and functional inverse") {
  auto ctx = make_ctx(load("p1.toml"), 3, 3, 0, 0, 1);
  int nv = ctx.target->n_scalar_vars();

  NovikovSeries<Scalar> a(ctx);
  a.add(tk(ctx, 0, {1}), sc(ctx, 1));
  a.add(tk(ctx, 1, {2}), sc(ctx, 7));

  auto id = identity_t_map(ctx);
  CHECK(value_equals(substitute_t(a, id), a));

  // tau = t + q: a(t) = t picks up exactly + q.
  std::vector<NovikovSeries<Scalar>> tau = id;
  tau[0].add(qk(ctx, 1), sc(ctx, 1));
  auto shifted = substitute_t(a, tau);
  CHECK(shifted.find(tk(ctx, 0, {1}))->value_equals(sc(ctx, 1)));
  CHECK(shifted.find(tk(ctx, 1, {0}))->value_equals(sc(ctx, 1)));
  // (t+q)^2 contributes 7(t^2 + 2tq + q^2) at degree shifts
  CHECK(shifted.find(tk(ctx, 1, {2}))->value_equals(sc(ctx, 7)));
  CHECK(shifted.find(tk(ctx, 2, {1}))->value_equals(sc(ctx, 14)));
  CHECK(shifted.find(tk(ctx, 3, {0}))->value_equals(sc(ctx, 7)));

  // Functional inverse round-trip through (D, M) = (3, 3).
  std::vector<NovikovSeries<Scalar>> tau2 = id;
  tau2[0].add(qk(ctx, 1), sc(ctx, 3));
  tau2[0].add(tk(ctx, 1, {1}), sc(ctx, -2));
  tau2[0].add(tk(ctx, 2, {2}), sc(ctx, 5));
  auto sigma = invert_t_map(tau2);
  for (int i = 0; i < 1; ++i) {
    auto round = substitute_t(tau2[i], sigma);
    CHECK(value_equals(round, id[i]));
    auto round2 = substitute_t(sigma[i], tau2);
    CHECK(value_equals(round2, id[i]));
  }
  (void)nv;
}

TEST_CASE("t substitution rejects maps without the t_i + O(q) shape") {
  auto ctx = make_ctx(load("p1.toml"), 2, 2, 0, 0, 1);
  NovikovSeries<Scalar> a(ctx);
  a.add(tk(ctx, 0, {1}), sc(ctx, 1));
  std::vector<NovikovSeries<Scalar>> bad;
  bad.push_back(NovikovSeries<Scalar>(ctx));
  bad[0].add(tk(ctx, 0, {1}), sc(ctx, 2));  // leading coefficient 2, not 1
  CHECK_THROWS_AS((void)substitute_t(a, bad), ValidationError);
  std::vector<NovikovSeries<Scalar>> bad2;
  bad2.push_back(NovikovSeries<Scalar>(ctx));
  bad2[0].add(tk(ctx, 0, {1}), sc(ctx, 1));
  bad2[0].add(tk(ctx, 0, {2}), sc(ctx, 1));  // q^0 part beyond t_i
  CHECK_THROWS_AS((void)substitute_t(a, bad2), ValidationError);
}

TEST_CASE("novikov substitution: exponential reweighting of q") {
  auto ctx = make_ctx(load("p1.toml"), 3, 0, 0, 0, 0);
  // a = q, g = c q with one divisor pairing row (theta itself).
  NovikovSeries<Scalar> a(ctx);
  a.add(qk(ctx, 1), sc(ctx, 1));
  std::vector<NovikovSeries<Scalar>> g;
  g.push_back(NovikovSeries<Scalar>(ctx));
  Rat c(3);
  g[0].add(qk(ctx, 1), sc(ctx, 3));
  std::vector<IntVec> rows{IntVec{Int(1)}};
  auto r = substitute_novikov(a, g, rows);
  // q e^{3q} = q + 3q^2 + 9/2 q^3
  CHECK(r.find(qk(ctx, 1))->value_equals(sc(ctx, 1)));
  CHECK(r.find(qk(ctx, 2))->value_equals(sc(ctx, 3)));
  CHECK(r.find(qk(ctx, 3))->value_equals(sc(ctx, 9, 2)));

  auto idcheck = substitute_novikov(a, std::vector<NovikovSeries<Scalar>>{NovikovSeries<Scalar>(ctx)}, rows);
  CHECK(value_equals(idcheck, a));

  // Round trip through the inverse exponent data.
  auto h = invert_novikov_map(g, rows);
  auto back = substitute_novikov(r, h, rows);
  CHECK(value_equals(back, a));

  // Also on a fatter series.
  NovikovSeries<Scalar> b(ctx);
  b.add(qk(ctx, 0), sc(ctx, 1));
  b.add(qk(ctx, 1), sc(ctx, -4));
  b.add(qk(ctx, 2), sc(ctx, 11, 7));
  b.add(qk(ctx, 3), sc(ctx, 5));
  auto rb = substitute_novikov(substitute_novikov(b, g, rows), h, rows);
  CHECK(value_equals(rb, b));
}

TEST_CASE("z-regularity report and mod-z truncation") {
  auto ctx = make_ctx(load("p1.toml"), 2, 1, -2, 3, 1);
  ZSeries<Scalar> a(ctx);
  a.add(0, qk(ctx, 0), sc(ctx, 1));
  a.add(1, qk(ctx, 1), sc(ctx, 2));
  CHECK(z_regular_check(a).empty());

  a.add(-1, qk(ctx, 1), sc(ctx, 1));
  auto rep = z_regular_check(a);
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].beta == Curve{1});
  CHECK(rep[0].z_exp == -1);

  ZSeries<Scalar> b(ctx);
  b.add(0, qk(ctx, 0), sc(ctx, 1));
  b.add(-1, tk(ctx, 0, {1}), sc(ctx, 1));
  b.add(-2, qk(ctx, 1), sc(ctx, 4));
  b.add(3, qk(ctx, 2), sc(ctx, 9));
  auto tb = b.z_truncate_mod(2);
  CHECK(tb.find(0, qk(ctx, 0)) != nullptr);
  CHECK(tb.find(-1, tk(ctx, 0, {1})) != nullptr);
  CHECK(tb.find(-2, qk(ctx, 1)) == nullptr);
  CHECK(tb.find(3, qk(ctx, 2)) != nullptr);  // positive powers kept
}

TEST_CASE("chamber truncation by stability parameter") {
  auto ctx = make_ctx(load("p1.toml"), 4, 0, 0, 0, 0);
  NovikovSeries<Scalar> a(ctx);
  for (long d = 0; d <= 4; ++d) a.add(qk(ctx, d), sc(ctx, d + 1));
  CHECK(chamber_truncate(a, Epsilon::zero_plus()).term_count() == 5);
  CHECK(chamber_truncate(a, Epsilon::infinite()).term_count() == 1);
  CHECK(chamber_truncate(a, Epsilon::of(Rat(1, 2))).term_count() == 3);
  CHECK(chamber_truncate(a, Epsilon::of(Rat(1, 3))).term_count() == 4);
  CHECK(chamber_truncate(a, Epsilon::of(Rat(2))).term_count() == 1);
}

TEST_CASE("exp of a q-series and scalar series utilities") {
  auto ctx = make_ctx(load("p1.toml"), 3, 0, 0, 0, 0);
  NovikovSeries<Scalar> g(ctx);
  g.add(qk(ctx, 1), sc(ctx, 1));
  auto e = exp_series(g);
  CHECK(e.find(qk(ctx, 0))->value_equals(sc(ctx, 1)));
  CHECK(e.find(qk(ctx, 1))->value_equals(sc(ctx, 1)));
  CHECK(e.find(qk(ctx, 2))->value_equals(sc(ctx, 1, 2)));
  CHECK(e.find(qk(ctx, 3))->value_equals(sc(ctx, 1, 6)));
  NovikovSeries<Scalar> c1(ctx);
  c1.add(qk(ctx, 0), sc(ctx, 1));
  CHECK_THROWS_AS((void)exp_series(c1), ValidationError);
}

TEST_CASE("series reject keys outside the effective cone") {
  auto ctx = make_ctx(load("p1xp1.toml"), 3, 0, 0, 0, 0);
  NovikovSeries<Scalar> a(ctx);
  CHECK_THROWS_AS(a.add(SKey{Curve{1, -1}, {}}, sc(ctx, 1)), InternalCheckError);
}

TEST_CASE("incompatible contexts are rejected") {
  auto t = load("p1.toml");
  auto c1 = make_ctx(t, 2, 0, 0, 0, 0);
  auto c2 = make_ctx(t, 3, 0, 0, 0, 0);
  NovikovSeries<Scalar> a(c1), b(c2);
  a.add(qk(c1, 0), sc(c1, 1));
  b.add(qk(c2, 0), sc(c2, 1));
  CHECK_THROWS_AS((void)(a * b), ValidationError);
}
