#include "wallx/oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include "wallx/errors.hpp"
#include "wallx/zview.hpp"

namespace wallx {

Rat psi_integral(const std::vector<long>& a) {
  const long k = static_cast<long>(a.size());
  if (k < 3)
    throw ValidationError("unstable-moduli: psi integrals need at least three marked points");
  long total = 0;
  for (long x : a) {
    if (x < 0) throw ValidationError("unstable-moduli: negative psi exponent");
    total += x;
  }
  if (total != k - 3) return Rat(0);
  mpz_class num;
  mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(k - 3));
  mpz_class den(1);
  for (long x : a) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(x));
    den *= f;
  }
  return Rat(num) / Rat(den);
}

namespace {

Curve curve_scaled(const Curve& b, long n) {
  Curve r = b;
  for (long& v : r) v *= n;
  return r;
}

// Weight of the k-th section of a degree-d line bundle on the orbit cover,
// interpolating the endpoint restrictions u (at mu) and v (at nu).
Poly section_weight(const Poly& u, const Poly& v, long d, long k) {
  if (d == 0) return u;
  return u.scaled(Rat(d - k, d)) + v.scaled(Rat(k, d));
}

}  // namespace

FixedPointGraph::FixedPointGraph(CohBasisPtr basis) : basis_(std::move(basis)) {
  const ToricTarget& T = *basis_->target();
  const auto& fps = T.fixed_points();
  const int nfp = static_cast<int>(fps.size());
  const int nc = T.n_coords();
  const int l = T.rank();
  from_.resize(nfp);
  pair_idx_.assign(nfp, std::vector<int>(nfp, -1));

  for (int mu = 0; mu < nfp; ++mu) {
    const FixedPoint& fmu = fps[mu];
    std::vector<Poly> dmu(nc);
    for (int i = 0; i < nc; ++i) dmu[i] = T.divisor_restriction(fmu, i);
    for (int nu = 0; nu < nfp; ++nu) {
      if (nu == mu) continue;
      const FixedPoint& fnu = fps[nu];
      std::vector<Poly> dnu(nc);
      for (int j = 0; j < nc; ++j) dnu[j] = T.divisor_restriction(fnu, j);

      // An invariant curve joins mu and nu exactly when one tangent direction
      // at mu matches one at nu with opposite weight, and the matching is
      // unique.
      int di = -1, dj = -1, count = 0;
      for (int i = 0; i < nc; ++i) {
        if (dmu[i].is_zero()) continue;
        for (int j = 0; j < nc; ++j) {
          if (dnu[j].is_zero()) continue;
          if ((dmu[i] + dnu[j]).is_zero()) {
            ++count;
            di = i;
            dj = j;
          }
        }
      }
      if (count != 1) continue;

      const Poly& w = dmu[di];
      RatFunc winv = RatFunc::from_poly(w).inverse();
      std::vector<long> dk(nc, 0);
      bool ok = true;
      for (int kidx = 0; kidx < nc; ++kidx) {
        Poly diff = dmu[kidx] - dnu[kidx];
        if (diff.is_zero()) continue;
        RatFunc r = RatFunc::from_poly(diff) * winv;
        if (!r.is_rational()) {
          ok = false;
          break;
        }
        Rat q = r.rat_value();
        if (q.get_den() != 1) {
          ok = false;
          break;
        }
        dk[kidx] = q.get_num().get_si();
      }
      if (!ok) continue;

      Curve beta(l, 0);
      for (int r = 0; r < l && ok; ++r) {
        Rat acc(0);
        for (int c = 0; c < l; ++c) acc += Rat(dk[fmu.sigma[c]]) * fmu.xi_inv[c][r];
        if (acc.get_den() != 1) ok = false;
        else beta[r] = acc.get_num().get_si();
      }
      if (!ok) continue;
      for (int kidx = 0; kidx < nc && ok; ++kidx)
        if (T.pair_curve(beta, T.xi(kidx)) != dk[kidx]) ok = false;
      if (!ok || !T.is_effective(beta) || T.theta_degree(beta) < 1) continue;

      pair_idx_[mu][nu] = static_cast<int>(orbits_.size());
      from_[mu].push_back(static_cast<int>(orbits_.size()));
      orbits_.push_back(Orbit{mu, nu, di, dj, beta, w});
    }
  }
}

const Orbit* FixedPointGraph::orbit_between(int mu, int nu) const {
  int idx = pair_idx_.at(mu).at(nu);
  return idx < 0 ? nullptr : &orbits_[idx];
}

OracleEdge FixedPointGraph::edge_data(const Orbit& o, long n) const {
  if (n < 1) throw ValidationError("edge cover degree must be positive");
  const ToricTarget& T = target();
  const int nv = T.n_scalar_vars();
  const FixedPoint& fmu = T.fixed_points()[o.mu];
  const FixedPoint& fnu = T.fixed_points()[o.nu];

  OracleEdge E;
  E.mu = o.mu;
  E.nu = o.nu;
  E.n = n;
  E.beta = curve_scaled(o.beta, n);
  E.flag_weight = RatFunc::from_poly(o.w).scaled(Rat(1, n));

  long zeros = 0;
  for (int j = 0; j < T.n_coords(); ++j) {
    long d = n * T.pair_curve(o.beta, T.xi(j));
    Poly u = T.divisor_restriction(fmu, j);
    Poly v = T.divisor_restriction(fnu, j);
    if (d >= 0) {
      for (long k = 0; k <= d; ++k) {
        Poly wk = section_weight(u, v, d, k);
        if (wk.is_zero())
          ++zeros;
        else
          E.denominator.push_back(RatFunc::from_poly(wk));
      }
    } else {
      for (long k = d + 1; k <= -1; ++k) {
        Poly wk = section_weight(u, v, d, k);
        if (wk.is_zero())
          throw ValidationError(
              "degenerate-orbit: vanishing obstruction weight on an orbit cover");
        E.numerator.push_back(RatFunc::from_poly(wk));
      }
    }
  }
  if (zeros != T.rank() + 1) {
    std::ostringstream os;
    os << "degenerate-orbit: expected " << T.rank() + 1 << " trivial section weights, found "
       << zeros << " (fixed points " << o.mu << "," << o.nu << ", cover degree " << n << ")";
    throw ValidationError(os.str());
  }

  for (std::size_t a = 0; a < T.convex_twist().size(); ++a) {
    long d = n * T.pair_curve(o.beta, T.convex_twist()[a]);
    if (d < 0)
      throw ValidationError("invalid-twist: convex twist restricts negatively to an orbit");
    Poly u = T.convex_restriction(fmu, static_cast<int>(a));
    Poly v = T.convex_restriction(fnu, static_cast<int>(a));
    for (long k = 0; k <= d; ++k) {
      Poly wk = section_weight(u, v, d, k);
      if (wk.is_zero())
        E.vanishes = true;
      else
        E.numerator.push_back(RatFunc::from_poly(wk));
    }
  }
  for (std::size_t a = 0; a < T.concave_twist().size(); ++a) {
    long d = n * T.pair_curve(o.beta, T.concave_twist()[a]);
    if (d > 0)
      throw ValidationError("invalid-twist: concave twist restricts positively to an orbit");
    Poly u = T.concave_restriction(fmu, static_cast<int>(a));
    Poly v = T.concave_restriction(fnu, static_cast<int>(a));
    for (long k = d + 1; k <= -1; ++k) {
      Poly wk = section_weight(u, v, d, k);
      if (wk.is_zero())
        E.vanishes = true;
      else
        E.numerator.push_back(RatFunc::from_poly(wk));
    }
  }
  (void)nv;
  return E;
}

Scalar FixedPointGraph::edge_factor(const Orbit& o, long n) const {
  const int nv = target().n_scalar_vars();
  OracleEdge E = edge_data(o, n);
  if (E.vanishes) return Scalar(nv);
  Scalar num(nv, Rat(1, n));
  for (const Scalar& s : E.numerator) num = num * s;
  Scalar den(nv, Rat(1));
  for (const Scalar& s : E.denominator) den = den * s;
  return num * den.inverse();
}

Scalar FixedPointGraph::recursion_coefficient(const Orbit& o, long n) const {
  return edge_factor(o, n) * basis_->localization_weight(o.mu).inverse();
}

namespace {

struct TreeShape {
  int V = 0;
  std::vector<std::array<int, 2>> edges;  // each {a, b} with a < b
};

// All labeled trees on {0..V-1}, decoded from Pruefer sequences.
std::vector<TreeShape> labeled_trees(int V) {
  std::vector<TreeShape> out;
  if (V < 2) return out;
  if (V == 2) {
    out.push_back({2, {{{0, 1}}}});
    return out;
  }
  std::vector<int> seq(V - 2, 0);
  while (true) {
    std::vector<int> deg(V, 1);
    for (int s : seq) deg[s]++;
    TreeShape t;
    t.V = V;
    std::vector<int> d = deg;
    for (int s : seq) {
      int leaf = 0;
      while (d[leaf] != 1) ++leaf;
      t.edges.push_back({std::min(leaf, s), std::max(leaf, s)});
      d[leaf] = 0;
      d[s]--;
    }
    int u = -1, v = -1;
    for (int i = 0; i < V; ++i)
      if (d[i] == 1) (u < 0 ? u : v) = i;
    t.edges.push_back({u, v});
    out.push_back(std::move(t));

    int pos = V - 3;
    while (pos >= 0 && seq[pos] == V - 1) seq[pos--] = 0;
    if (pos < 0) break;
    seq[pos]++;
  }
  return out;
}

// One fully decorated localization graph, ready for evaluation.
struct DecoratedGraph {
  int V = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<int> orbit;   // global orbit index, oriented edges[e][0] -> [1]
  std::vector<long> cover;  // cover degree per edge
  std::vector<int> factor;  // index into the shared edge-factor table
  std::vector<int> sigma;   // fixed point per vertex
  std::vector<int> mark;    // vertex carrying each insertion
};

struct Insertion {
  std::vector<Scalar> restr;  // fixed-point restrictions
  long psi = 0;
};

Scalar vertex_factor(const CohBasis& B, int s, const std::vector<Scalar>& om,
                     const std::vector<std::pair<const Scalar*, long>>& mk) {
  const int nv = B.target()->n_scalar_vars();
  const int f = static_cast<int>(om.size());
  const int m = static_cast<int>(mk.size());
  if (f == 1 && m == 0) return om[0];
  if (f == 1 && m == 1) {
    Scalar r = *mk[0].first;
    if (r.is_zero()) return r;
    if (mk[0].second > 0) r = r * om[0].scaled(Rat(-1)).pow(static_cast<int>(mk[0].second));
    return r;
  }
  if (f == 2 && m == 0) return (B.localization_weight(s) * (om[0] + om[1])).inverse();

  long rem = f + m - 3;
  Scalar pre = B.localization_weight(s).pow(1 - f);
  for (const auto& [g, a] : mk) {
    rem -= a;
    pre = pre * (*g);
    if (pre.is_zero()) return pre;
  }
  if (rem < 0) return Scalar(nv);

  std::vector<long> expo(f + m, 0);
  for (int i = 0; i < m; ++i) expo[f + i] = mk[i].second;
  Scalar sum(nv);
  std::function<void(int, long, Scalar)> comp = [&](int pos, long left, Scalar acc) {
    if (pos == f - 1) {
      expo[pos] = left;
      Scalar term = acc * om[pos].pow(static_cast<int>(-left - 1));
      sum = sum + term.scaled(psi_integral(expo));
      return;
    }
    for (long b = 0; b <= left; ++b) {
      expo[pos] = b;
      comp(pos + 1, left - b, acc * om[pos].pow(static_cast<int>(-b - 1)));
    }
  };
  comp(0, rem, Scalar(nv, Rat(1)));
  return pre * sum;
}

Scalar evaluate_graph(const CohBasis& B, const std::vector<Orbit>& orbits,
                      const std::vector<Scalar>& factors, const std::vector<Insertion>& ins,
                      const DecoratedGraph& g) {
  const int nv = B.target()->n_scalar_vars();
  Scalar total(nv, Rat(1));
  for (int idx : g.factor) total = total * factors[idx];
  for (int v = 0; v < g.V; ++v) {
    std::vector<Scalar> om;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      if (g.edges[e][0] == v)
        om.push_back(RatFunc::from_poly(orbits[g.orbit[e]].w).scaled(Rat(1, g.cover[e])));
      else if (g.edges[e][1] == v)
        om.push_back(RatFunc::from_poly(orbits[g.orbit[e]].w).scaled(Rat(-1, g.cover[e])));
    }
    std::vector<std::pair<const Scalar*, long>> mk;
    for (std::size_t i = 0; i < ins.size(); ++i)
      if (g.mark[i] == v) mk.push_back({&ins[i].restr[g.sigma[v]], ins[i].psi});
    Scalar vf = vertex_factor(B, g.sigma[v], om, mk);
    if (vf.is_zero()) return Scalar(nv);
    total = total * vf;
  }
  Rat norm(1);
  for (int i = 2; i <= g.V; ++i) norm /= i;
  return total.scaled(norm);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  int n = 0;
  if (const char* env = std::getenv("WALLX_THREADS"); env && *env) n = std::atoi(env);
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return n > 0 ? n : 1;
}

}  // namespace

Scalar graph_sum_invariant(const FixedPointGraph& G, const Curve& beta,
                           const std::vector<std::pair<CohClass, long>>& insertions,
                           const GraphSumOptions& opts) {
  const CohBasis& B = *G.basis();
  const ToricTarget& T = G.target();
  const int nv = T.n_scalar_vars();
  if (static_cast<int>(beta.size()) != T.rank())
    throw ValidationError("graph-sum: curve class has wrong rank");
  if (!T.is_effective(beta) || T.theta_degree(beta) < 1)
    throw ValidationError("graph-sum: class must be effective and nonzero");
  const long d = T.theta_degree(beta);
  if (d > opts.degree_bound) {
    std::ostringstream os;
    os << "graph-sum: theta-degree " << d << " exceeds the degree bound " << opts.degree_bound;
    throw ValidationError(os.str());
  }
  if (d >= 3) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      std::cerr << "wallx: graph sums at theta-degree >= 3 may take a while" << std::endl;
  }

  std::vector<Insertion> ins;
  for (const auto& [cls, a] : insertions) {
    if (cls.basis().get() != G.basis().get())
      throw ValidationError("graph-sum: insertion belongs to a different basis");
    if (a < 0) throw ValidationError("graph-sum: negative psi exponent");
    ins.push_back({cls.to_fixed_point().coeffs(), a});
  }
  const int m = static_cast<int>(ins.size());
  const int nfp = B.n_fixed();
  const auto& orbits = G.orbits();

  // Enumerate decorated graphs; edge factors are shared through a table so
  // that evaluation is read-only and can be partitioned across threads.
  std::vector<Scalar> factors;
  std::map<std::pair<int, long>, int> factor_idx;
  auto factor_of = [&](int oi, long n) -> int {
    auto key = std::make_pair(oi, n);
    if (auto it = factor_idx.find(key); it != factor_idx.end()) return it->second;
    Scalar f = G.edge_factor(orbits[oi], n);
    int idx = f.is_zero() ? -1 : static_cast<int>(factors.size());
    if (idx >= 0) factors.push_back(std::move(f));
    factor_idx.emplace(key, idx);
    return idx;
  };

  std::vector<DecoratedGraph> jobs;
  for (int V = 2; V <= static_cast<int>(d) + 1; ++V) {
    for (const TreeShape& tree : labeled_trees(V)) {
      const int ne = static_cast<int>(tree.edges.size());
      std::vector<int> sig(V, -1);
      std::function<void(int)> assign_sigma = [&](int pos) {
        if (pos == V) {
          std::vector<int> oidx(ne);
          std::vector<long> odeg(ne);
          long min_total = 0;
          for (int e = 0; e < ne; ++e) {
            int idx = G.orbit_index(sig[tree.edges[e][0]], sig[tree.edges[e][1]]);
            oidx[e] = idx;
            odeg[e] = T.theta_degree(orbits[idx].beta);
            min_total += odeg[e];
          }
          if (min_total > d) return;
          std::vector<long> cover(ne, 1);
          std::function<void(int, long)> assign_cover = [&](int e, long left) {
            if (e == ne) {
              if (left != 0) return;
              Curve sum(beta.size(), 0);
              for (int i = 0; i < ne; ++i)
                for (std::size_t r = 0; r < sum.size(); ++r)
                  sum[r] += cover[i] * orbits[oidx[i]].beta[r];
              if (sum != beta) return;
              std::vector<int> fidx(ne);
              for (int i = 0; i < ne; ++i) {
                fidx[i] = factor_of(oidx[i], cover[i]);
                if (fidx[i] < 0) return;
              }
              std::vector<int> mark(m, 0);
              std::function<void(int)> assign_marks = [&](int mi) {
                if (mi == m) {
                  DecoratedGraph gjob;
                  gjob.V = V;
                  gjob.edges = tree.edges;
                  gjob.orbit = oidx;
                  gjob.cover = cover;
                  gjob.factor = fidx;
                  gjob.sigma = sig;
                  gjob.mark = mark;
                  jobs.push_back(std::move(gjob));
                  return;
                }
                for (int v = 0; v < V; ++v) {
                  mark[mi] = v;
                  assign_marks(mi + 1);
                }
              };
              assign_marks(0);
              return;
            }
            long rest = 0;
            for (int i = e + 1; i < ne; ++i) rest += odeg[i];
            for (long n = 1; n * odeg[e] <= left - rest; ++n) {
              cover[e] = n;
              assign_cover(e + 1, left - n * odeg[e]);
            }
            cover[e] = 1;
          };
          assign_cover(0, d);
          return;
        }
        for (int s = 0; s < nfp; ++s) {
          bool ok = true;
          for (const auto& e : tree.edges) {
            if (e[1] != pos || e[0] > pos) continue;
            if (G.orbit_index(sig[e[0]], s) < 0) {
              ok = false;
              break;
            }
          }
          if (ok) {
            sig[pos] = s;
            assign_sigma(pos + 1);
            sig[pos] = -1;
          }
        }
      };
      assign_sigma(0);
    }
  }

  const int nthreads = std::min<int>(resolve_threads(opts.threads), std::max<std::size_t>(jobs.size(), 1));
  if (nthreads <= 1 || jobs.size() < 2) {
    Scalar total(nv);
    for (const DecoratedGraph& g : jobs) total = total + evaluate_graph(B, orbits, factors, ins, g);
    return total;
  }
  std::vector<Scalar> partial(nthreads, Scalar(nv));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t]() {
      Scalar acc(nv);
      for (std::size_t i = t; i < jobs.size(); i += nthreads)
        acc = acc + evaluate_graph(B, orbits, factors, ins, jobs[i]);
      partial[t] = std::move(acc);
    });
  }
  for (auto& th : pool) th.join();
  Scalar total(nv);
  for (const Scalar& p : partial) total = total + p;
  return total;
}

Rat graph_sum_classical(const FixedPointGraph& G, const Curve& beta,
                        const std::vector<std::pair<CohClass, long>>& insertions,
                        const GraphSumOptions& opts) {
  Scalar v = graph_sum_invariant(G, beta, insertions, opts);
  try {
    return nonequivariant_limit(v);
  } catch (const InternalCheckError& e) {
    throw InternalCheckError(std::string("internal-consistency: classical limit of a graph sum "
                                         "depends on the torus direction (") +
                             e.what() + ")");
  }
}

ZSeries<CohClass> oracle_small_J(const FixedPointGraph& G, const SeriesContext& ctx, long d_max,
                                 const GraphSumOptions& opts) {
  if (ctx.target.get() != G.basis()->target().get())
    throw ValidationError("oracle-small-j: context bound to a different target");
  const CohBasis& B = *G.basis();
  ZSeries<CohClass> J(ctx);
  J.add(0, skey_zero(ctx), CohClass::unit(G.basis(), CohMode::FixedPoint));
  const long dcap = std::min(d_max, ctx.trunc.D);
  const long amax = -static_cast<long>(ctx.trunc.z_min) - 2;
  for (const Curve& beta : ctx.target->effective_classes(dcap)) {
    if (ctx.target->theta_degree(beta) < 1) continue;
    SKey key{beta, std::vector<int>(ctx.n_tvars, 0)};
    for (long a = 0; a <= amax; ++a) {
      CohClass cls = CohClass::zero(G.basis(), CohMode::FixedPoint);
      for (int i = 0; i < B.dim(); ++i) {
        Scalar val = graph_sum_invariant(G, beta, {{B.dual_element(i), a}}, opts);
        if (!val.is_zero())
          cls = cls + B.basis_element(i, CohMode::FixedPoint).scaled(val);
      }
      J.add(static_cast<int>(-a - 2), key, cls);
    }
  }
  return J;
}

RecursionData build_recursion_data(const FixedPointGraph& G, long d_max) {
  const ToricTarget& T = G.target();
  RecursionData rd;
  rd.n_fixed = G.basis()->n_fixed();
  for (const Orbit& o : G.orbits()) {
    const long step = T.theta_degree(o.beta);
    for (long n = 1; n * step <= d_max; ++n) {
      Scalar C = G.recursion_coefficient(o, n);
      if (C.is_zero()) continue;
      rd.terms.push_back(RecursionTerm{o.mu, o.nu, n, curve_scaled(o.beta, n), std::move(C),
                                       o.w.scaled(Rat(1, n))});
    }
  }
  return rd;
}

std::vector<NovikovSeries<Scalar>> recursion_reconstruct(
    const FixedPointGraph& G, const SeriesContext& ctx,
    const std::vector<NovikovSeries<Scalar>>& initial) {
  if (ctx.target.get() != G.basis()->target().get())
    throw ValidationError("recursion-reconstruct: context bound to a different target");
  return uniqueness_reconstruct(ctx, initial, build_recursion_data(G, ctx.trunc.D));
}

}  // namespace wallx
