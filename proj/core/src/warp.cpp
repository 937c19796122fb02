#include "timewarp/warp.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "timewarp/errors.hpp"

namespace timewarp {

namespace {

using u64 = std::uint64_t;
constexpr u64 kInf = std::numeric_limits<u64>::max();

ExtNat piece_value(const Piece& p, u64 n) {
  return p.ramp ? p.value + (n - p.start) : p.value;
}

u64 piece_end(std::span<const Piece> ps, std::size_t i) {
  return i + 1 < ps.size() ? ps[i + 1].start : kInf;
}

std::size_t piece_index(std::span<const Piece> ps, u64 n) {
  auto it = std::upper_bound(ps.begin(), ps.end(), n,
                             [](u64 v, const Piece& p) { return v < p.start; });
  return static_cast<std::size_t>(it - ps.begin()) - 1;
}

ExtNat eval_pieces(std::span<const Piece> ps, u64 n) {
  return piece_value(ps[piece_index(ps, n)], n);
}

ExtNat omega_of(std::span<const Piece> ps) {
  const Piece& p = ps.back();
  return p.ramp ? kOmega : p.value;
}

// A function on ω∪{ω} that need not be a warp (f(0) may be nonzero, f(ω) is
// stored explicitly). Used for the adjoint helpers behind the residuals.
struct Pw {
  std::vector<Piece> pieces;
  ExtNat omega;

  ExtNat at(ExtNat p) const {
    return p.is_omega() ? omega : eval_pieces(pieces, p.value());
  }
};

}  // namespace

// Greedy left-to-right canonicalizer. Points must be fed in order without
// gaps, either one at a time or as whole runs; every piece is extended as far
// as it can go before a new one starts, which makes the output unique.
class WarpBuilder {
 public:
  void run(u64 s, u64 e, ExtNat c, bool ramp) {
    if (e <= s) return;
    if (c.is_omega()) ramp = false;
    point(s, c);
    if (e == s + 1) return;
    if (!determined_) {
      cur_.ramp = ramp;
      determined_ = true;
      next_ = e;
      return;
    }
    if (cur_.ramp == ramp) {
      next_ = e;
      return;
    }
    close();
    ExtNat v = ramp ? c + 1 : c;
    cur_ = Piece{s + 1, v, ramp};
    open_ = true;
    determined_ = e - (s + 1) >= 2;
    if (!determined_) cur_.ramp = false;
    next_ = e;
  }

  std::vector<Piece> finish() {
    if (open_) close();
    if (out_.empty() || out_.front().start != 0)
      throw InternalError("warp builder: pieces must start at 0");
    return std::move(out_);
  }

  Warp warp() {
    auto ps = finish();
    if (!ps.front().value.is_zero())
      throw InternalError("warp builder: f(0) must be 0");
    return Warp(std::move(ps));
  }

  Pw pw(ExtNat omega) { return Pw{finish(), omega}; }

 private:
  void point(u64 n, ExtNat v) {
    assert(n == next_);
    next_ = n + 1;
    if (!open_) {
      start(n, v);
      return;
    }
    if (!determined_) {
      if (v == cur_.value) {
        cur_.ramp = false;
        determined_ = true;
        return;
      }
      if (cur_.value.is_finite() && v.is_finite() && v == cur_.value + 1) {
        cur_.ramp = true;
        determined_ = true;
        return;
      }
      close();
      start(n, v);
      return;
    }
    if (v == piece_value(cur_, n)) return;
    close();
    start(n, v);
  }

  void start(u64 n, ExtNat v) {
    cur_ = Piece{n, v, false};
    open_ = true;
    determined_ = false;
  }

  void close() {
    if (!determined_) cur_.ramp = false;
    out_.push_back(cur_);
    open_ = false;
  }

  std::vector<Piece> out_;
  Piece cur_;
  bool open_ = false;
  bool determined_ = false;
  u64 next_ = 0;
};

namespace {

// Emits g restricted to [from, to).
void emit_range(WarpBuilder& b, std::span<const Piece> ps, u64 from, u64 to) {
  if (from >= to) return;
  for (std::size_t i = piece_index(ps, from); i < ps.size(); ++i) {
    u64 s = std::max(ps[i].start, from);
    u64 e = std::min(piece_end(ps, i), to);
    if (s < e) b.run(s, e, piece_value(ps[i], s), ps[i].ramp);
    if (piece_end(ps, i) >= to) break;
  }
}

// (F ∘ G) on all of ω; the value at ω is supplied by the caller.
void emit_compose(WarpBuilder& b, const Pw& f, std::span<const Piece> g) {
  std::span<const Piece> fp = f.pieces;
  for (std::size_t i = 0; i < g.size(); ++i) {
    u64 s = g[i].start;
    u64 e = piece_end(g, i);
    ExtNat c = g[i].value;
    if (!g[i].ramp || c.is_omega()) {
      b.run(s, e, f.at(c), false);
      continue;
    }
    u64 lo = c.value();
    u64 hi = e == kInf ? kInf : lo + (e - s);
    for (std::size_t j = piece_index(fp, lo); j < fp.size(); ++j) {
      u64 fs = std::max(fp[j].start, lo);
      u64 fe = std::min(piece_end(fp, j), hi);
      if (fs < fe) {
        u64 out_e = fe == kInf ? kInf : s + (fe - lo);
        b.run(s + (fs - lo), out_e, piece_value(fp[j], fs), fp[j].ramp);
      }
      if (piece_end(fp, j) >= hi) break;
    }
  }
}

Pw pw_of(const Warp& f) {
  return Pw{std::vector<Piece>(f.pieces().begin(), f.pieces().end()), f.at_omega()};
}

struct Line {
  ExtNat c;  // value at the segment start
  bool ramp;
};

Line line_at(const Piece& p, u64 s) {
  ExtNat c = piece_value(p, s);
  return Line{c, p.ramp && c.is_finite()};
}

// Pointwise min (or max) of two lines over [s, e).
void emit_extremum(WarpBuilder& b, u64 s, u64 e, Line x, Line y, bool take_max) {
  if (x.ramp == y.ramp) {
    b.run(s, e, take_max ? std::max(x.c, y.c) : std::min(x.c, y.c), x.ramp);
    return;
  }
  Line r = x.ramp ? x : y;
  Line k = x.ramp ? y : x;
  if (k.c.is_omega()) {
    if (take_max) b.run(s, e, kOmega, false);
    else b.run(s, e, r.c, true);
    return;
  }
  if (r.c >= k.c) {
    if (take_max) b.run(s, e, r.c, true);
    else b.run(s, e, k.c, false);
    return;
  }
  // The ramp meets the constant at `cross`.
  u64 cross = s + (k.c.value() - r.c.value());
  u64 mid = std::min(cross, e);
  if (take_max) {
    b.run(s, mid, k.c, false);
    if (cross < e) b.run(cross, e, k.c, true);
  } else {
    b.run(s, mid, r.c, true);
    if (cross < e) b.run(cross, e, k.c, false);
  }
}

Warp lattice_op(const Warp& f, const Warp& g, bool take_max) {
  auto fp = f.pieces();
  auto gp = g.pieces();
  WarpBuilder b;
  std::size_t i = 0, j = 0;
  u64 s = 0;
  while (true) {
    u64 e = std::min(piece_end(fp, i), piece_end(gp, j));
    emit_extremum(b, s, e, line_at(fp[i], s), line_at(gp[j], s), take_max);
    if (e == kInf) break;
    s = e;
    if (piece_end(fp, i) == e) ++i;
    if (piece_end(gp, j) == e) ++j;
  }
  return b.warp();
}

// R(v) = sup{q | f(q) ≤ v}, the upper adjoint of f, as a function of v.
Pw upper_adjoint(const Warp& f) {
  auto ps = f.pieces();
  WarpBuilder b;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Piece& p = ps[k];
    if (p.value.is_omega()) break;
    u64 lo = p.value.value();
    bool last_piece = k + 1 == ps.size();
    if (last_piece) {
      if (p.ramp) b.run(lo, kInf, ExtNat(p.start), true);
      else b.run(lo, kInf, kOmega, false);
      break;
    }
    const Piece& next = ps[k + 1];
    u64 next_lo = next.value.is_finite() ? next.value.value() : kInf;
    u64 final_q = next.start - 1;
    if (p.ramp) {
      u64 hi = lo + (final_q - p.start);
      b.run(lo, std::min(hi + 1, next_lo), ExtNat(p.start), true);
      b.run(hi + 1, next_lo, ExtNat(final_q), false);
    } else {
      b.run(lo, next_lo, ExtNat(final_q), false);
    }
    if (next_lo == kInf) break;
  }
  return b.pw(kOmega);
}

// L(v) = min{q | v ≤ f(q)}, the lower adjoint of f; ω where the set is
// empty (v > f(ω)).
Pw lower_adjoint(const Warp& f) {
  auto ps = f.pieces();
  WarpBuilder b;
  u64 from = 0;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const Piece& p = ps[k];
    ExtNat a(p.start);
    if (p.value.is_omega()) {
      b.run(from, kInf, a, false);
      break;
    }
    u64 lo = p.value.value();
    b.run(from, lo + 1, a, false);
    bool last_piece = k + 1 == ps.size();
    if (p.ramp) {
      if (last_piece) {
        b.run(lo + 1, kInf, a + 1, true);
        break;
      }
      u64 hi = lo + (ps[k + 1].start - 1 - p.start);
      b.run(lo + 1, hi + 1, a + 1, true);
      from = hi + 1;
    } else {
      if (last_piece) {
        b.run(lo + 1, kInf, kOmega, false);
        break;
      }
      from = lo + 1;
    }
  }
  return b.pw(kOmega);
}

// Forces value 0 at 0 and keeps h on [1, ∞).
Warp zero_at_origin(const Pw& h) {
  WarpBuilder b;
  b.run(0, 1, ExtNat(0), false);
  emit_range(b, h.pieces, 1, kInf);
  return b.warp();
}

}  // namespace

Warp::Warp() : pieces_{Piece{0, ExtNat(0), true}} {}

Warp Warp::identity() { return Warp(); }

Warp Warp::bottom() { return Warp(std::vector<Piece>{Piece{0, ExtNat(0), false}}); }

Warp Warp::top() {
  return Warp(std::vector<Piece>{Piece{0, ExtNat(0), false}, Piece{1, kOmega, false}});
}

Warp Warp::unit_step() {
  return Warp(std::vector<Piece>{Piece{0, ExtNat(0), true}, Piece{2, ExtNat(1), false}});
}

ExtNat Warp::operator()(ExtNat p) const {
  return p.is_omega() ? at_omega() : eval_pieces(pieces_, p.value());
}

ExtNat Warp::at_omega() const { return omega_of(pieces_); }

std::uint64_t Warp::max_finite_value() const noexcept {
  u64 m = 0;
  for (const Piece& p : pieces_)
    if (p.value.is_finite()) m = std::max(m, p.value.value());
  return m;
}

Warp Warp::from_pieces(std::vector<Piece> pieces) {
  if (pieces.empty() || pieces.front().start != 0 || !pieces.front().value.is_zero())
    throw std::invalid_argument("warp pieces must start with value 0 at 0");
  WarpBuilder b;
  ExtNat prev_end(0);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    u64 e = piece_end(pieces, i);
    if (e <= pieces[i].start)
      throw std::invalid_argument("warp piece starts must be strictly increasing");
    if (pieces[i].value < prev_end)
      throw std::invalid_argument("warp pieces must be monotone");
    if (e != kInf) prev_end = piece_value(pieces[i], e - 1);
    b.run(pieces[i].start, e, pieces[i].value, pieces[i].ramp);
  }
  return b.warp();
}

namespace {

Warp warp_from_anchors(std::span<const Breakpoint> anchors, Tail tail) {
  WarpBuilder b;
  u64 at = 0;
  ExtNat v(0);
  for (const Breakpoint& bp : anchors) {
    if (!bp.ramp || v.is_omega()) {
      b.run(at, bp.at, v, false);
    } else if (bp.value.is_omega()) {
      b.run(at, bp.at, v, true);
    } else {
      u64 reach = at + (bp.value.value() - v.value());
      u64 ramp_end = reach + 1 < bp.at ? reach + 1 : bp.at;
      b.run(at, ramp_end, v, true);
      b.run(ramp_end, bp.at, bp.value, false);
    }
    at = bp.at;
    v = bp.value;
  }
  if (tail.ramp) {
    b.run(at, kInf, v, true);
  } else {
    b.run(at, at + 1, v, false);
    b.run(at + 1, kInf, tail.value, false);
  }
  return b.warp();
}

}  // namespace

Warp Warp::from_breakpoints(std::span<const Breakpoint> anchors, Tail tail) {
  u64 at = 0;
  ExtNat v(0);
  for (const Breakpoint& bp : anchors) {
    if (bp.at <= at)
      throw std::invalid_argument("breakpoint positions must be strictly increasing and >= 1");
    if (bp.value < v) throw std::invalid_argument("breakpoint values must be nondecreasing");
    at = bp.at;
    v = bp.value;
  }
  if (!tail.ramp && tail.value < v)
    throw std::invalid_argument("constant tail lies below the last breakpoint value");
  return warp_from_anchors(anchors, tail);
}

Tail Warp::tail() const {
  const Piece& p = pieces_.back();
  return p.ramp ? Tail::unit_ramp() : Tail::constant(p.value);
}

std::vector<Breakpoint> Warp::breakpoints() const {
  std::vector<Breakpoint> raw;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.start > 0) raw.push_back(Breakpoint{p.start, p.value, false});
    u64 e = piece_end(pieces_, i);
    if (e != kInf && e - 1 > p.start)
      raw.push_back(Breakpoint{e - 1, piece_value(p, e - 1), p.ramp});
  }
  Tail t = tail();
  // Drop anchors the function does not need, until nothing more can go.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < raw.size();) {
      std::vector<Breakpoint> trial = raw;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (warp_from_anchors(trial, t) == *this) {
        raw = std::move(trial);
        changed = true;
      } else {
        ++i;
      }
    }
  }
  return raw;
}

Warp compose(const Warp& f, const Warp& g) {
  WarpBuilder b;
  emit_compose(b, pw_of(f), g.pieces());
  return b.warp();
}

Warp meet(const Warp& f, const Warp& g) { return lattice_op(f, g, false); }
Warp join(const Warp& f, const Warp& g) { return lattice_op(f, g, true); }

Warp lres(const Warp& f, const Warp& g) {
  Pw r = upper_adjoint(f);
  WarpBuilder b;
  emit_compose(b, r, g.pieces());
  return zero_at_origin(b.pw(kOmega));
}

Warp rres(const Warp& g, const Warp& f) {
  Pw l = lower_adjoint(f);
  WarpBuilder hb;
  emit_compose(hb, pw_of(g), l.pieces);
  Pw h = hb.pw(kOmega);
  ExtNat top = f.at_omega();
  if (top.is_finite()) {
    // Past f(ω) the defining set is empty, so the infimum is ω.
    u64 c = top.value();
    WarpBuilder b;
    emit_range(b, h.pieces, 0, c + 1);
    b.run(c + 1, kInf, kOmega, false);
    h = b.pw(kOmega);
  }
  return zero_at_origin(h);
}

Warp op_o(const Warp& f) { return lres(Warp::top(), f); }
Warp op_l(const Warp& f) { return rres(Warp::identity(), f); }
Warp op_r(const Warp& f) { return lres(f, Warp::identity()); }

ExtNat last(const Warp& f) {
  ExtNat target = f.at_omega();
  auto ps = f.pieces();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Piece& p = ps[i];
    if (!p.ramp) {
      if (p.value == target) return ExtNat(p.start);
      continue;
    }
    if (target.is_omega()) continue;
    u64 e = piece_end(ps, i);
    if (p.value <= target && (e == kInf || target <= piece_value(p, e - 1)))
      return ExtNat(p.start + (target.value() - p.value.value()));
  }
  return kOmega;
}

bool leq(const Warp& f, const Warp& g) { return meet(f, g) == f; }

std::string to_string(const Warp& f) {
  std::ostringstream os;
  os << "{0↦0";
  for (const Breakpoint& bp : f.breakpoints()) {
    os << ", " << bp.at << "↦" << bp.value;
    if (bp.ramp) os << '+';
  }
  Tail t = f.tail();
  os << "; tail=";
  if (t.ramp) os << "ramp";
  else os << "const " << t.value;
  os << '}';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Warp& f) { return os << to_string(f); }

namespace {

nlohmann::json ext_to_json(ExtNat v) {
  if (v.is_omega()) return "omega";
  return v.value();
}

ExtNat ext_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "omega") return kOmega;
    throw std::invalid_argument("expected a natural number or \"omega\"");
  }
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw std::invalid_argument("expected a natural number or \"omega\"");
  return ExtNat(j.get<std::uint64_t>());
}

}  // namespace

nlohmann::json to_json(const Warp& f) {
  nlohmann::json segs = nlohmann::json::array();
  for (const Breakpoint& bp : f.breakpoints())
    segs.push_back({{"start", bp.at}, {"value", ext_to_json(bp.value)}, {"slope", bp.ramp ? 1 : 0}});
  Tail t = f.tail();
  nlohmann::json tail = t.ramp ? nlohmann::json("ramp") : nlohmann::json{{"const", ext_to_json(t.value)}};
  return {{"segments", segs}, {"tail", tail}};
}

Warp warp_from_json(const nlohmann::json& j) {
  std::vector<Breakpoint> anchors;
  for (const auto& s : j.at("segments")) {
    int slope = s.at("slope").get<int>();
    if (slope != 0 && slope != 1) throw std::invalid_argument("slope must be 0 or 1");
    anchors.push_back(Breakpoint{s.at("start").get<std::uint64_t>(), ext_from_json(s.at("value")), slope == 1});
  }
  const auto& t = j.at("tail");
  Tail tail = t.is_string() && t.get<std::string>() == "ramp" ? Tail::unit_ramp()
                                                              : Tail::constant(ext_from_json(t.at("const")));
  return Warp::from_breakpoints(anchors, tail);
}

}  // namespace timewarp
