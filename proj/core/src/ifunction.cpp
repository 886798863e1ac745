#include "wallx/ifunction.hpp"

#include <string>

#include "wallx/zview.hpp"

namespace wallx {

namespace {

ZLaurent zl_unit(const CohBasisPtr& basis) {
  return {{0, CohClass::unit(basis, CohMode::Ambient)}};
}

// (c + m z)^{-1} for a class c = (unit scalar) * z^0-free nilpotent part is
// not needed in general: here c is a divisor class (no unit component), so
// (c + m z)^{-1} = sum_j (-c)^j / (m z)^{j+1}, a finite sum.
ZLaurent zl_inverse_linear(const CohClass& c, long m) {
  ZLaurent out;
  CohClass pw = CohClass::unit(c.basis(), c.mode());
  Rat mr(m);
  Rat scale = Rat(1) / mr;
  int j = 0;
  while (!pw.is_zero()) {
    out.emplace(-j - 1, pw.scaled_rat(scale));
    pw = (pw * c).scaled_rat(Rat(-1));
    scale /= mr;
    ++j;
    if (j > c.basis()->top_degree() + 1)
      throw InternalCheckError("non-nilpotent divisor class in inverse factor");
  }
  return out;
}

void check_convex_pairing(const ToricTarget& t, const Curve& beta) {
  for (const auto& e : t.convex_twist())
    if (t.pair_curve(beta, e) < 0)
      throw ValidationError(
          "invalid-twist: convex class pairs negatively with an effective "
          "class");
}

}  // namespace

ZLaurent zl_mul(const ZLaurent& a, const ZLaurent& b) {
  ZLaurent out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      CohClass p = ca * cb;
      if (p.is_zero()) continue;
      auto it = out.find(ea + eb);
      if (it == out.end()) {
        out.emplace(ea + eb, std::move(p));
      } else {
        it->second = it->second + p;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  return out;
}

ZLaurent zl_linear(const CohClass& c0, const Rat& c1) {
  ZLaurent out;
  if (!c0.is_zero()) out.emplace(0, c0);
  if (c1 != 0) out.emplace(1, CohClass::unit(c0.basis(), c0.mode()).scaled_rat(c1));
  return out;
}

bool zl_equal(const ZLaurent& a, const ZLaurent& b) {
  for (const auto& [e, c] : a) {
    auto it = b.find(e);
    if (it == b.end() ? !c.is_zero() : !(c - it->second).is_zero()) return false;
  }
  for (const auto& [e, c] : b)
    if (a.find(e) == a.end() && !c.is_zero()) return false;
  return true;
}

ZLaurent i_coefficient(const CohBasisPtr& basis, const Curve& beta) {
  const auto& t = *basis->target();
  if (!t.is_effective(beta))
    throw ValidationError("i-coefficient of a non-effective class");
  check_convex_pairing(t, beta);
  return i_coefficient_relaxed(basis, beta);
}

ZLaurent i_coefficient_relaxed(const CohBasisPtr& basis, const Curve& beta) {
  const auto& t = *basis->target();
  const int nv = t.n_scalar_vars();
  ZLaurent out = zl_unit(basis);
  for (int i = 0; i < t.n_coords(); ++i) {
    long d = t.pair_curve(beta, t.xi(i));
    CohClass Di = basis->ambient_rat(basis->divisor_class(i));
    if (d >= 0) {
      for (long m = 1; m <= d; ++m) out = zl_mul(out, zl_inverse_linear(Di, m));
    } else {
      for (long m = 0; m <= -d - 1; ++m) out = zl_mul(out, zl_linear(Di, Rat(-m)));
    }
  }
  for (size_t a = 0; a < t.convex_twist().size(); ++a) {
    long d = t.pair_curve(beta, t.convex_twist()[a]);
    CohClass Ea = basis->ambient_rat(basis->character_class(t.convex_twist()[a]));
    for (long m = 1; m <= d; ++m) out = zl_mul(out, zl_linear(Ea, Rat(m)));
  }
  for (size_t a = 0; a < t.concave_twist().size(); ++a) {
    long d = t.pair_curve(beta, t.concave_twist()[a]);
    auto chars = basis->character_class(t.concave_twist()[a]);
    std::vector<Scalar> coeffs;
    coeffs.reserve(chars.size());
    for (const Rat& r : chars) coeffs.emplace_back(nv, r);
    coeffs[0] += Scalar::from_poly(Poly::var(nv, t.extra_var(static_cast<int>(a))));
    CohClass Ea = basis->ambient(std::move(coeffs));
    for (long m = d + 1; m <= -1; ++m) out = zl_mul(out, zl_linear(Ea, Rat(m)));
  }
  return out;
}

CohClass i_coefficient_fp(const CohBasisPtr& basis, const Curve& beta) {
  const auto& t = *basis->target();
  if (!t.is_effective(beta))
    throw ValidationError("i-coefficient of a non-effective class");
  check_convex_pairing(t, beta);
  const int nv = t.n_scalar_vars();
  const Poly zp = Poly::var(nv, t.zvar());
  std::vector<Scalar> vals;
  vals.reserve(t.fixed_points().size());
  for (const auto& fp : t.fixed_points()) {
    Scalar v(nv, Rat(1));
    for (int i = 0; i < t.n_coords(); ++i) {
      long d = t.pair_curve(beta, t.xi(i));
      Poly Di = t.divisor_restriction(fp, i);
      if (d >= 0) {
        for (long m = 1; m <= d; ++m)
          v = v / Scalar::from_poly(Di + zp.scaled(Rat(m)));
      } else {
        for (long m = 0; m <= -d - 1; ++m)
          v = v * Scalar::from_poly(Di - zp.scaled(Rat(m)));
      }
    }
    for (size_t a = 0; a < t.convex_twist().size(); ++a) {
      long d = t.pair_curve(beta, t.convex_twist()[a]);
      Poly Ea = t.convex_restriction(fp, static_cast<int>(a));
      for (long m = 1; m <= d; ++m)
        v = v * Scalar::from_poly(Ea + zp.scaled(Rat(m)));
    }
    for (size_t a = 0; a < t.concave_twist().size(); ++a) {
      long d = t.pair_curve(beta, t.concave_twist()[a]);
      Poly Ea = t.concave_restriction(fp, static_cast<int>(a));
      for (long m = d + 1; m <= -1; ++m)
        v = v * Scalar::from_poly(Ea + zp.scaled(Rat(m)));
    }
    vals.push_back(std::move(v));
  }
  return basis->fixed_point_class(std::move(vals));
}

SmallIFunction small_I(const CohBasisPtr& basis, const SeriesContext& ctx,
                       CohMode mode) {
  if (ctx.target.get() != basis->target().get())
    throw ValidationError("incompatible-operands: basis and context bind different targets");
  const auto& t = *ctx.target;
  ZSeries<CohClass> s(ctx);
  ZOps zops(t.zvar());
  for (const Curve& beta : t.effective_classes(ctx.trunc.D)) {
    SKey key{beta, std::vector<int>(ctx.n_tvars, 0)};
    if (mode == CohMode::Ambient) {
      for (const auto& [e, c] : i_coefficient(basis, beta)) s.add(e, key, c);
    } else {
      CohClass rc = i_coefficient_fp(basis, beta);
      std::map<int, std::vector<Scalar>> rows;
      for (int p = 0; p < basis->n_fixed(); ++p) {
        auto coeffs =
            zops.expand_at_infinity(rc.coeff(p), ctx.trunc.z_min, ctx.trunc.z_max);
        for (auto& [e, v] : coeffs) {
          if (v.is_zero()) continue;
          auto it = rows
                        .try_emplace(e, std::vector<Scalar>(
                                            basis->n_fixed(),
                                            Scalar(t.n_scalar_vars(), Rat(0))))
                        .first;
          it->second[p] = std::move(v);
        }
      }
      for (auto& [e, row] : rows)
        s.add(e, key, basis->fixed_point_class(std::move(row)));
    }
  }
  return SmallIFunction{basis, mode, std::move(s)};
}

IAsymptotics i0_i1(const SmallIFunction& I) {
  const auto& basis = I.basis;
  const SeriesContext& ctx = I.series.ctx();
  if (I.mode != CohMode::Ambient)
    throw ValidationError(
        "asymptotics extraction requires the non-equivariant basis");
  if (ctx.trunc.z_min > -1 || ctx.trunc.z_max < 0)
    throw ValidationError("z-window must cover exponents 0 and -1");
  const bool shaped =
      basis->target()->classify().kind != Classification::General;

  IAsymptotics out{basis,
                   NovikovSeries<Scalar>(ctx),
                   NovikovSeries<CohClass>(ctx),
                   NovikovSeries<Scalar>(ctx),
                   {}};
  const auto& h2 = basis->h2_indices();
  out.f_div.assign(h2.size(), NovikovSeries<Scalar>(ctx));

  const auto s_zero = I.series.slice_or_zero(0);
  for (const auto& [k, v] : s_zero.terms()) {
    if (shaped)
      for (int i = 1; i < basis->dim(); ++i)
        if (!v.coeff(i).is_zero())
          throw ValidationError(
              "shape-violation: z^0 slice is not a unit multiple at " +
              skey_str(k));
    out.i0.add(k, v.coeff(0));
  }
  const SKey k0 = skey_zero(ctx);
  const Scalar* lead = out.i0.find(k0);
  if (!lead || !lead->value_equals(Scalar(basis->target()->n_scalar_vars(), Rat(1))))
    throw InternalCheckError("leading coefficient of I0 is not 1");

  const auto s_minus = I.series.slice_or_zero(-1);
  for (const auto& [k, v] : s_minus.terms()) {
    if (shaped)
      for (int i = 1; i < basis->dim(); ++i)
        if (basis->degree(i) > 1 && !v.coeff(i).is_zero())
          throw ValidationError(
              "shape-violation: 1/z slice exceeds divisor degree at " +
              skey_str(k));
    out.i1.add(k, v);
    out.f0.add(k, v.coeff(0));
    for (size_t j = 0; j < h2.size(); ++j) out.f_div[j].add(k, v.coeff(h2[j]));
  }
  return out;
}

std::pair<NovikovSeries<Scalar>, NovikovSeries<CohClass>> epsilon_J0_J1(
    const IAsymptotics& asym, const Epsilon& eps) {
  long cap = eps.degree_cap();
  return {asym.i0.theta_truncate(cap), asym.i1.theta_truncate(cap)};
}

}  // namespace wallx
