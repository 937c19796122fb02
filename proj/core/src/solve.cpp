#include "timewarp/solve.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <tuple>

#include "timewarp/errors.hpp"

namespace timewarp {

// ---- Encoding -----------------------------------------------------------------

namespace {

SigmaFormula s_atom(SigmaAtom::Kind k, std::uint32_t x, std::uint32_t y = kNoId) {
  return SigmaFormula::atom(SigmaAtom{k, x, y});
}
SigmaFormula is_zero(std::uint32_t x) { return s_atom(SigmaAtom::Kind::IsZero, x); }

}  // namespace

SigmaFormula translate(const TauFormula& psi) {
  using TK = TauAtom::Kind;
  using SK = SigmaAtom::Kind;
  return psi.substitute([](const TauAtom& a) -> SigmaFormula {
    switch (a.kind) {
      case TK::IsOmega: return is_zero(a.a);
      case TK::IsZero: return s_atom(SK::Succ, kZeroVar, a.a);
      case TK::Succ:
        return SigmaFormula::disj(
            {SigmaFormula::conj({is_zero(a.a), is_zero(a.b)}),
             SigmaFormula::conj({SigmaFormula::negate(is_zero(a.a)), s_atom(SK::Succ, a.a, a.b)})});
      case TK::Leq:
        return SigmaFormula::disj(
            {is_zero(a.b),
             SigmaFormula::conj({SigmaFormula::negate(is_zero(a.a)), s_atom(SK::Leq, a.a, a.b)})});
      case TK::Eq: return s_atom(SK::Eq, a.a, a.b);
    }
    return SigmaFormula::falsity();
  });
}

Prediagram decode(const Model& w) {
  Prediagram d;
  d.reserve(w.size());
  for (std::uint64_t n : w) d.push_back(n == 0 ? kOmega : ExtNat(n - 1));
  return d;
}

Model encode(const Prediagram& d) {
  Model w;
  w.reserve(d.size());
  for (ExtNat v : d) w.push_back(v.is_omega() ? 0 : v.value() + 1);
  return w;
}

bool eval_sigma(const SigmaFormula& f, const Model& w) {
  auto val = [&](std::uint32_t x) { return x == kZeroVar ? std::uint64_t{0} : w.at(x); };
  return f.evaluate([&](const SigmaAtom& a) {
    switch (a.kind) {
      case SigmaAtom::Kind::Leq: return val(a.x) <= val(a.y);
      case SigmaAtom::Kind::Succ: return val(a.y) == val(a.x) + 1;
      case SigmaAtom::Kind::IsZero: return val(a.x) == 0;
      case SigmaAtom::Kind::Eq: return val(a.x) == val(a.y);
    }
    return false;
  });
}

// ---- Solver -------------------------------------------------------------------

namespace {

using Lit = int;  // 2·var + sign; sign 1 is negation
inline int var_of(Lit l) { return l >> 1; }
inline Lit neg(Lit l) { return l ^ 1; }
inline Lit pos_lit(int v) { return v << 1; }

// x − y ≤ c over graph nodes.
struct Diff {
  std::uint32_t x, y;
  std::int64_t c;
};

// Boolean structure in negation normal form over literals.
struct Nnf {
  enum Kind { True, False, Leaf, And, Or } kind;
  Lit lit = 0;
  std::vector<Nnf> kids;
};

Nnf nnf_const(bool b) { return Nnf{b ? Nnf::True : Nnf::False, 0, {}}; }

Nnf nnf_join(Nnf::Kind k, std::vector<Nnf> kids) {
  // k is And or Or; fold constants and flatten.
  Nnf::Kind absorbing = k == Nnf::And ? Nnf::False : Nnf::True;
  Nnf::Kind unit = k == Nnf::And ? Nnf::True : Nnf::False;
  Nnf out{k, 0, {}};
  for (Nnf& c : kids) {
    if (c.kind == absorbing) return nnf_const(absorbing == Nnf::True);
    if (c.kind == unit) continue;
    if (c.kind == k) {
      for (Nnf& g : c.kids) out.kids.push_back(std::move(g));
    } else {
      out.kids.push_back(std::move(c));
    }
  }
  if (out.kids.empty()) return nnf_const(unit == Nnf::True);
  if (out.kids.size() == 1) return std::move(out.kids[0]);
  return out;
}

class Solver {
 public:
  Solver(std::size_t num_vars, const SolveOptions& opts)
      : n_(num_vars), zero_(static_cast<std::uint32_t>(num_vars)), opts_(opts) {
    adj_.resize(n_ + 1);
    pot_.assign(n_ + 1, 0);
    // x ≥ 0, i.e. z − x ≤ 0: edge x → z with weight 0.
    for (std::uint32_t x = 0; x < n_; ++x) add_edge_raw(x, zero_, 0, -1);
  }

  SolveResult run(const SigmaFormula& phi) {
    SolveResult res;
    std::vector<SigmaFormula> added;
    if (!assert_formula(phi)) return finish_unsat(res);
    while (true) {
      bool sat = search();
      if (!sat) {
        res.stats = stats();
        return res;
      }
      Model m = least_model();
      std::vector<SigmaFormula> more;
      if (opts_.refine) more = opts_.refine(m);
      if (more.empty()) {
        res.stats = stats();
        res.sat = true;
        res.model = std::move(m);
        break;
      }
      ++refinements_;
      backtrack(0);
      for (SigmaFormula& f : more) {
        if (!assert_formula(f)) return finish_unsat(res);
        added.push_back(std::move(f));
      }
    }
    if (!eval_sigma(phi, res.model) ||
        !std::all_of(added.begin(), added.end(), [&](const SigmaFormula& f) { return eval_sigma(f, res.model); }))
      throw InternalError("difference-logic model fails re-evaluation");
    return res;
  }

 private:
  // --- encoding ---

  // Only called at decision level 0. False when φ became unsatisfiable.
  bool assert_formula(const SigmaFormula& f) {
    Nnf root = to_nnf(f, true);
    if (root.kind == Nnf::False) return false;
    if (root.kind != Nnf::True) assert_top(root);
    return !trivially_unsat_;
  }

  std::uint32_t node(std::uint32_t v) const { return v == kZeroVar ? zero_ : v; }

  Nnf diff_leaf(std::uint32_t x, std::uint32_t y, std::int64_t c) {
    x = node(x);
    y = node(y);
    if (x >= n_ + 1 || y >= n_ + 1) throw std::out_of_range("sigma variable out of range");
    if (x == y) return nnf_const(0 <= c);
    bool negated = false;
    Diff d{x, y, c};
    if (x > y) {
      // ¬(y − x ≤ −c − 1)
      d = Diff{y, x, -c - 1};
      negated = true;
    }
    auto key = std::make_tuple(d.x, d.y, d.c);
    auto it = atom_ids_.find(key);
    int v;
    if (it == atom_ids_.end()) {
      v = new_var();
      atom_ids_.emplace(key, v);
      theory_[v] = d;
      has_theory_[v] = true;
      ++theory_atoms_;
    } else {
      v = it->second;
    }
    return Nnf{Nnf::Leaf, negated ? neg(pos_lit(v)) : pos_lit(v), {}};
  }

  Nnf to_nnf(const SigmaFormula& f, bool positive) {
    using FK = SigmaFormula::Kind;
    switch (f.kind()) {
      case FK::True: return nnf_const(positive);
      case FK::False: return nnf_const(!positive);
      case FK::Atom: return atom_nnf(f.atom(), positive);
      case FK::Not: return to_nnf(f.kids()[0], !positive);
      case FK::And:
      case FK::Or: {
        std::vector<Nnf> ks;
        for (const SigmaFormula& k : f.kids()) ks.push_back(to_nnf(k, positive));
        bool is_and = (f.kind() == FK::And) == positive;
        return nnf_join(is_and ? Nnf::And : Nnf::Or, std::move(ks));
      }
      case FK::Implies: {
        // a ⇒ b  ≡  ¬a ∨ b
        std::vector<Nnf> ks;
        ks.push_back(to_nnf(f.kids()[0], !positive));
        ks.push_back(to_nnf(f.kids()[1], positive));
        return nnf_join(positive ? Nnf::Or : Nnf::And, std::move(ks));
      }
      case FK::Iff: {
        const SigmaFormula& a = f.kids()[0];
        const SigmaFormula& b = f.kids()[1];
        // a ⇔ b  ≡  (¬a ∨ b) ∧ (a ∨ ¬b);  ¬(a ⇔ b)  ≡  (a ∨ b) ∧ (¬a ∨ ¬b)
        std::vector<Nnf> l, r;
        l.push_back(to_nnf(a, !positive));
        l.push_back(to_nnf(b, true));
        r.push_back(to_nnf(a, positive));
        r.push_back(to_nnf(b, false));
        std::vector<Nnf> both;
        both.push_back(nnf_join(Nnf::Or, std::move(l)));
        both.push_back(nnf_join(Nnf::Or, std::move(r)));
        return nnf_join(Nnf::And, std::move(both));
      }
    }
    return nnf_const(false);
  }

  Nnf atom_nnf(const SigmaAtom& a, bool positive) {
    using SK = SigmaAtom::Kind;
    auto two = [&](Nnf::Kind k, Nnf p, Nnf q) {
      std::vector<Nnf> ks;
      ks.push_back(std::move(p));
      ks.push_back(std::move(q));
      return nnf_join(k, std::move(ks));
    };
    switch (a.kind) {
      case SK::Leq: return positive ? diff_leaf(a.x, a.y, 0) : diff_leaf(a.y, a.x, -1);
      case SK::IsZero: return positive ? diff_leaf(a.x, kZeroVar, 0) : diff_leaf(kZeroVar, a.x, -1);
      case SK::Succ:
        return positive ? two(Nnf::And, diff_leaf(a.y, a.x, 1), diff_leaf(a.x, a.y, -1))
                        : two(Nnf::Or, diff_leaf(a.y, a.x, 0), diff_leaf(a.x, a.y, -2));
      case SK::Eq:
        return positive ? two(Nnf::And, diff_leaf(a.x, a.y, 0), diff_leaf(a.y, a.x, 0))
                        : two(Nnf::Or, diff_leaf(a.x, a.y, -1), diff_leaf(a.y, a.x, -1));
    }
    return nnf_const(false);
  }

  // Polarity-aware Tseitin: only lit ⇒ subformula is encoded.
  Lit define(const Nnf& f) {
    if (f.kind == Nnf::Leaf) return f.lit;
    Lit v = pos_lit(new_var());
    if (f.kind == Nnf::And) {
      for (const Nnf& k : f.kids) add_clause({neg(v), define(k)});
    } else {
      std::vector<Lit> c{neg(v)};
      for (const Nnf& k : f.kids) c.push_back(define(k));
      add_clause(std::move(c));
    }
    return v;
  }

  void assert_top(const Nnf& f) {
    switch (f.kind) {
      case Nnf::True: return;
      case Nnf::False: trivially_unsat_ = true; return;
      case Nnf::Leaf: add_clause({f.lit}); return;
      case Nnf::And:
        for (const Nnf& k : f.kids) assert_top(k);
        return;
      case Nnf::Or: {
        std::vector<Lit> c;
        for (const Nnf& k : f.kids) c.push_back(define(k));
        add_clause(std::move(c));
        return;
      }
    }
  }

  int new_var() {
    int v = static_cast<int>(assign_.size());
    assign_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    phase_.push_back(1);  // prefer the negative literal first
    watches_.emplace_back();
    watches_.emplace_back();
    theory_.emplace_back();
    has_theory_.push_back(false);
    heap_pos_.push_back(-1);
    seen_.push_back(0);
    if (started_) heap_insert(v);
    return v;
  }

  // Clauses arrive at decision level 0, where assignments are final.
  void add_clause(std::vector<Lit> c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c[i] == neg(c[i - 1])) return;  // tautology
    if (std::any_of(c.begin(), c.end(), [&](Lit l) { return value(l) == 1; })) return;
    std::erase_if(c, [&](Lit l) { return value(l) == 0; });
    if (c.empty()) {
      trivially_unsat_ = true;
      return;
    }
    if (c.size() == 1) {
      units_.push_back(c[0]);
      return;
    }
    attach(std::move(c));
  }

  int attach(std::vector<Lit> c) {
    int idx = static_cast<int>(clauses_.size());
    watches_[neg(c[0])].push_back(idx);
    watches_[neg(c[1])].push_back(idx);
    clauses_.push_back(std::move(c));
    return idx;
  }

  // --- assignment ---

  static constexpr std::int8_t kUndef = 2;

  std::int8_t value(Lit l) const {
    std::int8_t a = assign_[var_of(l)];
    if (a == kUndef) return kUndef;
    return static_cast<std::int8_t>(a ^ (l & 1));
  }

  void enqueue(Lit l, int reason) {
    int v = var_of(l);
    assign_[v] = static_cast<std::int8_t>((l & 1) ^ 1);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  // --- theory ---

  struct Edge {
    std::uint32_t from, to;
    std::int64_t w;
    Lit lit;  // -1 for permanent edges
    std::size_t trail_pos;
  };

  void add_edge_raw(std::uint32_t from, std::uint32_t to, std::int64_t w, Lit lit) {
    edges_.push_back(Edge{from, to, w, lit, trail_.size()});
    adj_[from].push_back(edges_.size() - 1);
    permanent_edges_ = lit < 0 ? edges_.size() : permanent_edges_;
  }

  // Asserts the constraint of literal l. Returns false and fills `conflict`
  // when it closes a negative cycle.
  bool theory_assert(Lit l, std::vector<Lit>& conflict) {
    Diff d = theory_[var_of(l)];
    if (l & 1) d = Diff{d.y, d.x, -d.c - 1};
    // x − y ≤ c is the edge y → x of weight c.
    std::uint32_t u = d.y, v = d.x;
    std::int64_t w = d.c;
    if (pot_[v] <= pot_[u] + w) {
      push_edge(u, v, w, l);
      return true;
    }
    // Lower potentials Dijkstra-style from v; reaching u means a negative cycle.
    ++stamp_;
    if (gamma_.size() < n_ + 1) {
      gamma_.assign(n_ + 1, 0);
      seen_stamp_.assign(n_ + 1, 0);
      done_stamp_.assign(n_ + 1, 0);
      pred_.assign(n_ + 1, 0);
      new_pot_.assign(n_ + 1, 0);
    }
    auto gamma = [&](std::uint32_t x) -> std::int64_t& {
      if (seen_stamp_[x] != stamp_) {
        seen_stamp_[x] = stamp_;
        gamma_[x] = 0;
      }
      return gamma_[x];
    };
    using Item = std::pair<std::int64_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    gamma(v) = pot_[u] + w - pot_[v];
    pred_[v] = kNoEdge;
    pq.push({gamma(v), v});
    std::vector<std::uint32_t> touched;
    while (!pq.empty()) {
      auto [g, s] = pq.top();
      pq.pop();
      if (done_stamp_[s] == stamp_ || g != gamma(s)) continue;
      done_stamp_[s] = stamp_;
      new_pot_[s] = pot_[s] + g;
      touched.push_back(s);
      for (std::size_t e : adj_[s]) {
        const Edge& ed = edges_[e];
        std::uint32_t t = ed.to;
        if (done_stamp_[t] == stamp_) continue;
        std::int64_t ng = new_pot_[s] + ed.w - pot_[t];
        if (ng < gamma(t)) {
          if (t == u) {
            conflict.clear();
            conflict.push_back(neg(l));
            std::size_t cur = e;
            while (cur != kNoEdge) {
              const Edge& ce = edges_[cur];
              if (ce.lit >= 0) conflict.push_back(neg(ce.lit));
              cur = pred_[ce.from];
            }
            return false;
          }
          gamma(t) = ng;
          pred_[t] = e;
          pq.push({ng, t});
        }
      }
    }
    for (std::uint32_t s : touched) pot_[s] = new_pot_[s];
    push_edge(u, v, w, l);
    return true;
  }

  void push_edge(std::uint32_t u, std::uint32_t v, std::int64_t w, Lit l) {
    edges_.push_back(Edge{u, v, w, l, processing_pos_});
    adj_[u].push_back(edges_.size() - 1);
  }

  void pop_edges(std::size_t trail_size) {
    while (edges_.size() > permanent_edges_ && edges_.back().trail_pos >= trail_size) {
      adj_[edges_.back().from].pop_back();
      edges_.pop_back();
    }
  }

  // --- search ---

  int propagate(std::vector<Lit>& conflict) {
    while (qhead_ < trail_.size()) {
      processing_pos_ = qhead_;
      Lit p = trail_[qhead_++];
      if (has_theory_[var_of(p)] && !theory_assert(p, conflict)) {
        ++theory_conflicts_;
        return kTheoryConflict;
      }
      // Clauses watching ¬p: p became true, so ¬p is false.
      std::vector<int>& ws = watches_[p];
      std::size_t i = 0, j = 0;
      Lit false_lit = neg(p);
      while (i < ws.size()) {
        int ci = ws[i++];
        std::vector<Lit>& c = clauses_[ci];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[neg(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(c[0]) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(j);
    }
    return kNoConflict;
  }

  void analyze(const std::vector<Lit>& confl, std::vector<Lit>& learnt, int& bt_level) {
    learnt.assign(1, 0);
    int pending = 0;
    Lit p = -1;
    std::size_t idx = trail_.size();
    const std::vector<Lit>* clause = &confl;
    while (true) {
      for (Lit q : *clause) {
        if (q == p) continue;  // reasons hold the implied literal itself
        int v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(v);
        if (level_[v] >= decision_level()) ++pending;
        else learnt.push_back(q);
      }
      do {
        --idx;
      } while (!seen_[var_of(trail_[idx])]);
      p = trail_[idx];
      seen_[var_of(p)] = 0;
      if (--pending == 0) break;
      clause = &clauses_[reason_[var_of(p)]];
    }
    learnt[0] = neg(p);
    bt_level = 0;
    std::size_t max_i = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      if (level_[var_of(learnt[i])] > bt_level) {
        bt_level = level_[var_of(learnt[i])];
        max_i = i;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
    for (Lit q : learnt) seen_[var_of(q)] = 0;
    decay();
  }

  void backtrack(int lvl) {
    if (decision_level() <= lvl) return;
    std::size_t keep = trail_lim_[lvl];
    for (std::size_t i = trail_.size(); i > keep; --i) {
      int v = var_of(trail_[i - 1]);
      phase_[v] = trail_[i - 1] & 1;
      assign_[v] = kUndef;
      reason_[v] = -1;
      heap_insert(v);
    }
    trail_.resize(keep);
    trail_lim_.resize(lvl);
    qhead_ = std::min(qhead_, keep);
    pop_edges(keep);
  }

  bool search() {
    if (!started_) {
      started_ = true;
      for (int v = 0; v < static_cast<int>(assign_.size()); ++v) heap_insert(v);
    }
    for (; units_head_ < units_.size(); ++units_head_) {
      Lit u = units_[units_head_];
      if (value(u) == 0) return false;
      if (value(u) == kUndef) enqueue(u, -1);
    }
    std::vector<Lit> conflict, learnt;
    std::size_t restart_at = luby(restarts_) * 64;
    std::size_t since_restart = 0;
    while (true) {
      int ci = propagate(conflict);
      if (ci != kNoConflict) {
        ++conflicts_;
        ++since_restart;
        if (conflicts_ > opts_.conflict_budget)
          throw BudgetExceeded("solver exceeds the conflict budget of " +
                               std::to_string(opts_.conflict_budget));
        if ((conflicts_ & 255) == 0 && opts_.should_stop && opts_.should_stop()) throw SolveCancelled();
        if (decision_level() == 0) return false;
        const std::vector<Lit>& confl = ci == kTheoryConflict ? conflict : clauses_[ci];
        int bt = 0;
        analyze(confl, learnt, bt);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int idx = attach(learnt);
          enqueue(learnt[0], idx);
        }
        continue;
      }
      if (since_restart >= restart_at) {
        since_restart = 0;
        ++restarts_;
        restart_at = luby(restarts_) * 64;
        backtrack(0);
        continue;
      }
      int v = pick_branch();
      if (v < 0) return true;
      ++decisions_;
      if ((decisions_ & 1023) == 0 && opts_.should_stop && opts_.should_stop()) throw SolveCancelled();
      trail_lim_.push_back(trail_.size());
      enqueue(static_cast<Lit>(pos_lit(v) | decision_phase(v)), -1);
    }
  }

  // Theory atoms follow the current potentials, which satisfy every
  // asserted constraint, so a decision never closes a cycle by itself.
  int decision_phase(int v) const {
    if (!has_theory_[v]) return phase_[v];
    const Diff& d = theory_[v];
    return pot_[d.x] - pot_[d.y] <= d.c ? 0 : 1;
  }

  static std::size_t luby(std::size_t i) {
    std::size_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i = i % size;
    }
    return std::size_t{1} << seq;
  }

  // --- VSIDS heap (max activity; ties go to the lower variable index) ---

  bool heap_less(int a, int b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
  }

  void heap_insert(int v) {
    if (heap_pos_[v] >= 0) return;
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(heap_pos_[v]);
  }

  void sift_up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int p = (i - 1) / 2;
      if (!heap_less(v, heap_[p])) break;
      heap_[i] = heap_[p];
      heap_pos_[heap_[i]] = i;
      i = p;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  void sift_down(int i) {
    int v = heap_[i];
    int n = static_cast<int>(heap_.size());
    while (true) {
      int c = 2 * i + 1;
      if (c >= n) break;
      if (c + 1 < n && heap_less(heap_[c + 1], heap_[c])) ++c;
      if (!heap_less(heap_[c], v)) break;
      heap_[i] = heap_[c];
      heap_pos_[heap_[i]] = i;
      i = c;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  int heap_pop() {
    int v = heap_[0];
    heap_pos_[v] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[last] = 0;
      sift_down(0);
    }
    return v;
  }

  int pick_branch() {
    while (!heap_.empty()) {
      int v = heap_pop();
      if (assign_[v] == kUndef) return v;
    }
    return -1;
  }

  void bump(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) sift_up(heap_pos_[v]);
  }

  void decay() { var_inc_ /= 0.95; }

  // --- results ---

  // Least nonnegative solution of the active constraints with 0 at the zero
  // node: lower bounds pushed along edges until stable.
  Model least_model() {
    std::vector<std::int64_t> val(n_ + 1, 0);
    std::vector<std::vector<std::size_t>> in(n_ + 1);
    for (std::size_t e = 0; e < edges_.size(); ++e) in[edges_[e].to].push_back(e);
    std::deque<std::uint32_t> work;
    std::vector<bool> queued(n_ + 1, true);
    for (std::uint32_t x = 0; x <= n_; ++x) work.push_back(x);
    while (!work.empty()) {
      std::uint32_t t = work.front();
      work.pop_front();
      queued[t] = false;
      // Edge s → t of weight w is t − s ≤ w, so s ≥ t − w.
      for (std::size_t e : in[t]) {
        const Edge& ed = edges_[e];
        if (val[ed.from] < val[t] - ed.w) {
          val[ed.from] = val[t] - ed.w;
          if (!queued[ed.from]) {
            queued[ed.from] = true;
            work.push_back(ed.from);
          }
        }
      }
    }
    if (val[zero_] != 0) throw InternalError("least difference-logic solution moved the zero node");
    Model m(n_);
    for (std::uint32_t x = 0; x < n_; ++x) m[x] = static_cast<std::uint64_t>(val[x]);
    return m;
  }

  SolveStats stats() const {
    SolveStats s;
    s.bool_vars = assign_.size();
    s.theory_atoms = theory_atoms_;
    s.clauses = clauses_.size() + units_.size();
    s.decisions = decisions_;
    s.conflicts = conflicts_;
    s.theory_conflicts = theory_conflicts_;
    s.refinements = refinements_;
    return s;
  }

  SolveResult& finish_unsat(SolveResult& r) {
    r.sat = false;
    r.stats = stats();
    return r;
  }

  static constexpr int kNoConflict = -1;
  static constexpr int kTheoryConflict = -2;
  static constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

  std::size_t n_;
  std::uint32_t zero_;
  const SolveOptions& opts_;
  bool trivially_unsat_ = false;

  std::map<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>, int> atom_ids_;
  std::vector<Diff> theory_;
  std::vector<bool> has_theory_;
  std::size_t theory_atoms_ = 0;

  std::vector<std::vector<Lit>> clauses_;
  std::vector<Lit> units_;
  std::size_t units_head_ = 0;
  bool started_ = false;
  std::vector<std::vector<int>> watches_;

  std::vector<std::int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::size_t processing_pos_ = 0;
  std::vector<char> seen_;

  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> phase_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;

  std::vector<Edge> edges_;
  std::size_t permanent_edges_ = 0;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::int64_t> pot_;
  std::vector<std::int64_t> gamma_, new_pot_;
  std::vector<std::uint64_t> seen_stamp_, done_stamp_;
  std::vector<std::size_t> pred_;
  std::uint64_t stamp_ = 0;

  std::size_t decisions_ = 0, conflicts_ = 0, theory_conflicts_ = 0, restarts_ = 0, refinements_ = 0;
};

}  // namespace

SolveResult solve_builtin(const SigmaFormula& phi, std::size_t num_vars, const SolveOptions& opts) {
  Solver s(num_vars, opts);
  return s.run(phi);
}

}  // namespace timewarp
