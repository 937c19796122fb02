#include "timewarp/constraints.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include "timewarp/errors.hpp"

namespace timewarp {

const char* condition_name(int c) {
  static const char* const names[] = {
      "fail",          "mon",          "zero",          "pre",
      "suc",           "last",         "last2",         "id",
      "bot",           "prod",         "last-prod",     "o-values",
      "o-inf",         "o-last-finite", "o-last-value-finite", "r-lower",
      "r-finite",      "r-last-inf",   "r-last-value-finite", "l-finite1",
      "l-finite2",     "l-inf",        "l-last-inf",    "l-last-value-finite"};
  return c >= 0 && c <= kConditionCount ? names[c] : "?";
}

const char* set_name(PsiSet s) {
  switch (s) {
    case PsiSet::Struct: return "struct";
    case PsiSet::Log: return "log";
    case PsiSet::Bounds: return "bounds";
    case PsiSet::Right: return "right";
    case PsiSet::Left: return "left";
    case PsiSet::Fail: return "fail";
  }
  return "?";
}

namespace {

using K = BasicTerm::Kind;

// Instances of every quantified condition, enumerated once over Δ. Companion
// samples that saturation guarantees are resolved here.
struct Instances {
  struct App {
    SampleId self, arg;
    TermId term;
  };
  struct Pair {
    SampleId a, b;
  };
  struct Triple {
    SampleId a, b, c;
  };

  std::vector<App> apps;
  std::map<TermId, std::vector<App>> by_term;
  std::vector<Pair> pres;   // (pre(α), α)
  std::vector<Pair> sucs;   // (α, suc(α))
  // (t[α], last(t), t[last(t)])
  std::vector<Triple> last;
  // (t[last(t)], last(t))
  std::vector<Pair> last2;
  std::vector<Pair> ids;    // (id[α], α)
  std::vector<SampleId> bot_lasts;
  std::vector<Pair> prods;  // (tu[α], t[u[α]])
  std::vector<Triple> last_prods;  // (last(tu), last(t), last(u))
  // (t^o[α], α, t[α])
  std::vector<Triple> os;
  std::vector<SampleId> o_lasts;  // last(t^o)
  // (t^o[last(t^o)], α, t[α]) for every t[α] ∈ Δ
  std::vector<Triple> o_last_values;
  std::vector<Pair> r_lower;    // (t[t^r[α]], α)
  std::vector<Triple> r_finite;  // (α, t^r[α], t[suc(t^r[α])])
  std::vector<Pair> r_last_inf;  // (last(t^r), last(t))
  std::vector<Pair> r_last_val;  // (t^r[last(t^r)], t[suc(t^r[last(t^r)])])
  std::vector<Triple> l_inner;   // (α, t^ℓ[α], t[t^ℓ[α]])
  std::vector<Triple> l_finite2;  // (α, t^ℓ[α], t[pre(t^ℓ[α])])
  std::vector<Pair> l_last_inf;  // (last(t^ℓ), last(t))
  std::vector<Pair> l_last_val;  // (t^ℓ[last(t^ℓ)], t[t^ℓ[last(t^ℓ)]])

  explicit Instances(const SampleSet& d) {
    if (!d.saturated()) throw std::invalid_argument("sample set is not saturated");
    const SampleArena& ar = d.arena();
    auto need = [](std::optional<SampleId> id, const char* what) {
      if (!id) throw InternalError(std::string("saturated set lacks ") + what);
      return *id;
    };
    for (SampleId s : d.members()) {
      const SampleNode& n = ar.node(s);
      if (n.kind == SampleKind::Pre) pres.push_back({s, n.child});
      if (n.kind == SampleKind::Suc) sucs.push_back({n.child, s});
      if (n.kind == SampleKind::Last && ar.term_kind(n.term) == K::O) o_lasts.push_back(s);
      if (n.kind != SampleKind::App) continue;
      App a{s, n.child, n.term};
      apps.push_back(a);
      by_term[n.term].push_back(a);
    }
    for (const App& a : apps) {
      TermId t = a.term;
      TermId h = ar.term_head(t);
      SampleId lt = need(d.find_last(t), "last(t)");
      last.push_back({a.self, lt, need(d.find_app(t, lt), "t[last(t)]")});
      bool at_last = a.arg == lt;
      if (at_last) last2.push_back({a.self, lt});
      const SampleNode& arg = ar.node(a.arg);
      // t[t^r[α]] and t[t^ℓ[α]]
      if (arg.kind == SampleKind::App && ar.term_head(arg.term) == t) {
        if (ar.term_kind(arg.term) == K::R) r_lower.push_back({a.self, arg.child});
        if (ar.term_kind(arg.term) == K::L) l_inner.push_back({arg.child, a.arg, a.self});
      }
      switch (ar.term_kind(t)) {
        case K::Id: ids.push_back({a.self, a.arg}); break;
        case K::Bot: bot_lasts.push_back(lt); break;
        case K::Comp: {
          TermId l = ar.term_left(t), u = ar.term_right(t);
          SampleId inner = need(d.find_app(u, a.arg), "u[α]");
          prods.push_back({a.self, need(d.find_app(l, inner), "t[u[α]]")});
          if (at_last)
            last_prods.push_back({lt, need(d.find_last(l), "last(t)"), need(d.find_last(u), "last(u)")});
          break;
        }
        case K::O: {
          os.push_back({a.self, a.arg, need(d.find_app(h, a.arg), "t[α]")});
          // by_term is complete here, so every t[α] ∈ Δ is paired up.
          if (auto it = by_term.find(h); at_last && it != by_term.end())
            for (const App& b : it->second) o_last_values.push_back({a.self, b.arg, b.self});
          break;
        }
        case K::R: {
          SampleId next = need(d.find_app(h, need(d.find_suc(a.self), "suc(t^r[α])")), "t[suc(t^r[α])]");
          r_finite.push_back({a.arg, a.self, next});
          if (at_last) {
            r_last_inf.push_back({lt, need(d.find_last(h), "last(t)")});
            r_last_val.push_back({a.self, next});
          }
          break;
        }
        case K::L: {
          SampleId prev = need(d.find_app(h, need(d.find_pre(a.self), "pre(t^ℓ[α])")), "t[pre(t^ℓ[α])]");
          l_finite2.push_back({a.arg, a.self, prev});
          if (at_last) {
            l_last_inf.push_back({lt, need(d.find_last(h), "last(t)")});
            l_last_val.push_back({a.self, need(d.find_app(h, a.self), "t[t^ℓ[α]]")});
          }
          break;
        }
        default: break;
      }
    }
  }
};

TauFormula at(TauAtom::Kind k, SampleId a, SampleId b = kNoId) {
  return TauFormula::atom(TauAtom{k, a, b});
}
TauFormula leq(SampleId a, SampleId b) { return at(TauAtom::Kind::Leq, a, b); }
TauFormula lt(SampleId a, SampleId b) {
  return TauFormula::conj({leq(a, b), TauFormula::negate(leq(b, a))});
}
TauFormula eq(SampleId a, SampleId b) { return at(TauAtom::Kind::Eq, a, b); }
TauFormula succ(SampleId a, SampleId b) { return at(TauAtom::Kind::Succ, a, b); }
TauFormula omega(SampleId a) { return at(TauAtom::Kind::IsOmega, a); }
TauFormula zero(SampleId a) { return at(TauAtom::Kind::IsZero, a); }
TauFormula no(TauFormula f) { return TauFormula::negate(std::move(f)); }
TauFormula all(std::vector<TauFormula> fs) { return TauFormula::conj(std::move(fs)); }
TauFormula imp(TauFormula a, TauFormula b) { return TauFormula::implies(std::move(a), std::move(b)); }

}  // namespace

TauFormula Psi::conjunction() const {
  std::vector<TauFormula> fs;
  fs.reserve(clauses.size());
  for (const PsiClause& c : clauses) fs.push_back(c.formula);
  return TauFormula::conj(std::move(fs));
}

Psi build_psi(const SampleSet& d, const std::vector<SampleId>& goals) {
  Instances in(d);
  Psi psi;
  auto add = [&](PsiSet s, int c, TauFormula f) { psi.clauses.push_back({s, c, std::move(f)}); };
  using S = PsiSet;

  for (const auto& [t, group] : in.by_term)
    for (const auto& x : group)
      for (const auto& y : group)
        if (x.self != y.self) add(S::Struct, 1, imp(leq(x.arg, y.arg), leq(x.self, y.self)));
  for (const auto& a : in.apps) add(S::Struct, 2, imp(zero(a.arg), zero(a.self)));
  for (const auto& [p, a] : in.pres)
    add(S::Struct, 3, TauFormula::disj({succ(p, a), all({zero(p), zero(a)})}));
  for (const auto& [a, s] : in.sucs) add(S::Struct, 4, succ(a, s));
  for (const auto& [ta, l, tl] : in.last) {
    const auto& n = d.arena().node(ta);
    add(S::Struct, 5, TauFormula::iff(leq(l, n.child), eq(ta, tl)));
  }
  for (const auto& [tl, l] : in.last2) add(S::Struct, 6, imp(omega(l), omega(tl)));

  for (const auto& [s, a] : in.ids) add(S::Log, 7, eq(s, a));
  {
    std::vector<SampleId> seen;
    for (SampleId l : in.bot_lasts) {
      if (std::find(seen.begin(), seen.end(), l) != seen.end()) continue;
      seen.push_back(l);
      add(S::Log, 8, zero(l));
    }
  }
  for (const auto& [s, t] : in.prods) add(S::Log, 9, eq(s, t));
  for (const auto& [l, lt1, lu] : in.last_prods)
    add(S::Log, 10, imp(omega(l), all({omega(lt1), omega(lu)})));

  for (const auto& [o, a, t] : in.os) {
    add(S::Bounds, 11, TauFormula::disj({zero(o), omega(o)}));
    add(S::Bounds, 12, imp(no(omega(a)), TauFormula::iff(omega(o), omega(t))));
  }
  for (SampleId l : in.o_lasts) add(S::Bounds, 13, no(omega(l)));
  for (const auto& [ol, a, t] : in.o_last_values)
    add(S::Bounds, 14, imp(all({no(omega(ol)), no(omega(a))}), no(omega(t))));

  for (const auto& [s, a] : in.r_lower) add(S::Right, 15, leq(s, a));
  for (const auto& [a, r, next] : in.r_finite)
    add(S::Right, 16, imp(all({no(zero(a)), no(omega(a)), no(omega(r))}), lt(a, next)));
  for (const auto& [lr, l] : in.r_last_inf) add(S::Right, 17, imp(omega(lr), omega(l)));
  for (const auto& [r, next] : in.r_last_val) add(S::Right, 18, imp(no(omega(r)), omega(next)));

  for (const auto& [a, l, tl] : in.l_inner) add(S::Left, 19, imp(no(omega(l)), leq(a, tl)));
  for (const auto& [a, l, prev] : in.l_finite2)
    add(S::Left, 20, imp(all({no(zero(a)), no(omega(a)), no(omega(l))}), lt(prev, a)));
  for (const auto& [a, l, tl] : in.l_inner)
    add(S::Left, 21, imp(all({no(omega(a)), omega(l)}), lt(tl, a)));
  for (const auto& [ll, l] : in.l_last_inf) add(S::Left, 22, imp(omega(ll), omega(l)));
  for (const auto& [l, tl] : in.l_last_val) add(S::Left, 23, imp(no(omega(l)), omega(tl)));

  auto k = d.find_kappa();
  for (SampleId g : goals) {
    if (!d.contains(g) || !k) throw std::invalid_argument("goal sample is not in the sample set");
    add(S::Fail, 0, lt(g, *k));
  }
  return psi;
}

bool eval_atom(const TauAtom& a, const Prediagram& d) {
  switch (a.kind) {
    case TauAtom::Kind::Leq: return d[a.a] <= d[a.b];
    case TauAtom::Kind::Succ: return d[a.a].is_omega() ? d[a.b].is_omega() : d[a.b] == d[a.a] + 1;
    case TauAtom::Kind::IsOmega: return d[a.a].is_omega();
    case TauAtom::Kind::IsZero: return d[a.a].is_zero();
    case TauAtom::Kind::Eq: return d[a.a] == d[a.b];
  }
  return false;
}

bool eval_tau(const TauFormula& f, const Prediagram& d) {
  return f.evaluate([&](const TauAtom& a) { return eval_atom(a, d); });
}

std::string print(const TauAtom& a, const SampleArena& ar) {
  switch (a.kind) {
    case TauAtom::Kind::Leq: return ar.print(a.a) + " ≼ " + ar.print(a.b);
    case TauAtom::Kind::Succ: return "S(" + ar.print(a.a) + ", " + ar.print(a.b) + ")";
    case TauAtom::Kind::IsOmega: return "O(" + ar.print(a.a) + ")";
    case TauAtom::Kind::IsZero: return "I(" + ar.print(a.a) + ")";
    case TauAtom::Kind::Eq: return ar.print(a.a) + " ≗ " + ar.print(a.b);
  }
  return {};
}

std::string print(const TauFormula& f, const SampleArena& ar) {
  using FK = TauFormula::Kind;
  auto sub = [&](const TauFormula& k) {
    bool paren = k.kind() != FK::Atom && k.kind() != FK::Not && k.kind() != FK::True &&
                 k.kind() != FK::False;
    std::string s = print(k, ar);
    return paren ? "(" + s + ")" : s;
  };
  auto joined = [&](const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < f.kids().size(); ++i) {
      if (i > 0) s += sep;
      s += sub(f.kids()[i]);
    }
    return s;
  };
  switch (f.kind()) {
    case FK::True: return "⊤";
    case FK::False: return "⊥";
    case FK::Atom: return print(f.atom(), ar);
    case FK::Not: return "¬" + sub(f.kids()[0]);
    case FK::And: return joined(" ∧ ");
    case FK::Or: return joined(" ∨ ");
    case FK::Implies: return joined(" ⇒ ");
    case FK::Iff: return joined(" ⇔ ");
  }
  return {};
}

std::vector<Violation> check_diagram(const Prediagram& d, const SampleSet& delta) {
  Instances in(delta);
  std::vector<Violation> out;
  auto check = [&](bool ok, int c, std::vector<SampleId> w) {
    if (!ok) out.push_back({c, std::move(w)});
  };
  auto v = [&](SampleId s) { return d[s]; };
  const ExtNat zero_v(0);

  for (const auto& [t, group] : in.by_term)
    for (const auto& x : group)
      for (const auto& y : group)
        if (v(x.arg) <= v(y.arg)) check(v(x.self) <= v(y.self), 1, {x.self, y.self});
  for (const auto& a : in.apps)
    if (v(a.arg).is_zero()) check(v(a.self).is_zero(), 2, {a.self});
  for (const auto& [p, a] : in.pres) check(v(p) == v(a).pred(), 3, {p, a});
  for (const auto& [a, s] : in.sucs) check(v(s) == v(a).succ(), 4, {a, s});
  for (const auto& [ta, l, tl] : in.last) {
    SampleId arg = delta.arena().node(ta).child;
    check((v(l) <= v(arg)) == (v(ta) == v(tl)), 5, {ta, l, tl});
  }
  for (const auto& [tl, l] : in.last2)
    if (v(l).is_omega()) check(v(tl).is_omega(), 6, {tl, l});

  for (const auto& [s, a] : in.ids) check(v(s) == v(a), 7, {s, a});
  for (SampleId l : in.bot_lasts) check(v(l) == zero_v, 8, {l});
  for (const auto& [s, t] : in.prods) check(v(s) == v(t), 9, {s, t});
  for (const auto& [l, lt1, lu] : in.last_prods)
    if (v(l).is_omega()) check(v(lt1).is_omega() && v(lu).is_omega(), 10, {l, lt1, lu});

  for (const auto& [o, a, t] : in.os) {
    check(v(o).is_zero() || v(o).is_omega(), 11, {o});
    if (v(a).is_finite()) check(v(o).is_omega() == v(t).is_omega(), 12, {o, a, t});
  }
  for (SampleId l : in.o_lasts) check(v(l).is_finite(), 13, {l});
  for (const auto& [ol, a, t] : in.o_last_values)
    if (v(ol).is_finite() && v(a).is_finite()) check(v(t).is_finite(), 14, {ol, a, t});

  for (const auto& [s, a] : in.r_lower) check(v(s) <= v(a), 15, {s, a});
  for (const auto& [a, r, next] : in.r_finite)
    if (v(a) > zero_v && v(a).is_finite() && v(r).is_finite()) check(v(a) < v(next), 16, {a, r, next});
  for (const auto& [lr, l] : in.r_last_inf)
    if (v(lr).is_omega()) check(v(l).is_omega(), 17, {lr, l});
  for (const auto& [r, next] : in.r_last_val)
    if (v(r).is_finite()) check(v(next).is_omega(), 18, {r, next});

  for (const auto& [a, l, tl] : in.l_inner)
    if (v(l).is_finite()) check(v(a) <= v(tl), 19, {a, l, tl});
  for (const auto& [a, l, prev] : in.l_finite2)
    if (v(a) > zero_v && v(a).is_finite() && v(l).is_finite()) check(v(prev) < v(a), 20, {a, l, prev});
  for (const auto& [a, l, tl] : in.l_inner)
    if (v(a).is_finite() && v(l).is_omega()) check(v(tl) < v(a), 21, {a, l, tl});
  for (const auto& [ll, l] : in.l_last_inf)
    if (v(ll).is_omega()) check(v(l).is_omega(), 22, {ll, l});
  for (const auto& [l, tl] : in.l_last_val)
    if (v(l).is_finite()) check(v(tl).is_omega(), 23, {l, tl});
  return out;
}

bool fail_holds(const Prediagram& d, const SampleSet& delta, const std::vector<SampleId>& goals) {
  auto k = delta.find_kappa();
  if (!k) return false;
  for (SampleId g : goals)
    if (!(d[g] < d[*k])) return false;
  return true;
}

Prediagram diagram_from_valuation(const Valuation& theta, ExtNat p, const SampleSet& delta) {
  const SampleArena& ar = delta.arena();
  std::vector<std::optional<Warp>> warps(ar.term_count());
  std::function<const Warp&(TermId)> warp = [&](TermId t) -> const Warp& {
    if (warps[t]) return *warps[t];
    const BasicTerm& bt = ar.term(t);
    Warp w;
    switch (bt.kind()) {
      case K::Var: w = theta.at(bt.name()); break;
      case K::Id: w = Warp::identity(); break;
      case K::Bot: w = Warp::bottom(); break;
      case K::Comp: w = compose(warp(ar.term_left(t)), warp(ar.term_right(t))); break;
      case K::O: w = op_o(warp(ar.term_head(t))); break;
      case K::L: w = op_l(warp(ar.term_head(t))); break;
      case K::R: w = op_r(warp(ar.term_head(t))); break;
    }
    warps[t] = std::move(w);
    return *warps[t];
  };

  Prediagram d(ar.size(), ExtNat(0));
  std::vector<bool> done(ar.size(), false);
  std::function<ExtNat(SampleId)> value = [&](SampleId s) -> ExtNat {
    if (done[s]) return d[s];
    const SampleNode& n = ar.node(s);
    ExtNat r;
    switch (n.kind) {
      case SampleKind::Kappa: r = p; break;
      case SampleKind::App: r = warp(n.term)(value(n.child)); break;
      case SampleKind::Suc: r = value(n.child).succ(); break;
      case SampleKind::Pre: r = value(n.child).pred(); break;
      case SampleKind::Last: r = last(warp(n.term)); break;
    }
    d[s] = r;
    done[s] = true;
    return r;
  };
  for (SampleId s : delta.members()) value(s);
  return d;
}

}  // namespace timewarp
