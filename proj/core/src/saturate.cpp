#include "timewarp/saturate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "timewarp/errors.hpp"

namespace timewarp {

namespace {

// a₁(a₂(⋯aₙ)) ↦ (a₁⋯aₙ₋₁, aₙ)
std::pair<BasicTerm, BasicTerm> split_last(const BasicTerm& t) {
  if (t.rest().kind() != BasicTerm::Kind::Comp) return {t.head(), t.rest()};
  auto [init, last] = split_last(t.rest());
  return {BasicTerm::comp(t.head(), init), last};
}

}  // namespace

TermId SampleArena::intern(const BasicTerm& t) {
  if (auto it = term_ids_.find(t); it != term_ids_.end()) return it->second;
  TermId head = kNoId, rest = kNoId, left = kNoId, right = kNoId;
  switch (t.kind()) {
    case BasicTerm::Kind::Comp: {
      head = intern(t.head());
      rest = intern(t.rest());
      auto [init, last] = split_last(t);
      left = intern(init);
      right = intern(last);
      break;
    }
    case BasicTerm::Kind::O:
    case BasicTerm::Kind::L:
    case BasicTerm::Kind::R: head = intern(t.head()); break;
    default: break;
  }
  auto id = static_cast<TermId>(terms_.size());
  terms_.push_back({t, head, rest, left, right});
  term_ids_.emplace(t, id);
  return id;
}

SampleId SampleArena::get(const SampleNode& n) {
  if (auto it = sample_ids_.find(n); it != sample_ids_.end()) return it->second;
  auto id = static_cast<SampleId>(samples_.size());
  samples_.push_back(n);
  sample_ids_.emplace(n, id);
  return id;
}

std::optional<SampleId> SampleArena::find(const SampleNode& n) const {
  if (auto it = sample_ids_.find(n); it != sample_ids_.end()) return it->second;
  return std::nullopt;
}

std::string SampleArena::print(SampleId id) const {
  const SampleNode& n = samples_[id];
  switch (n.kind) {
    case SampleKind::Kappa: return "κ";
    case SampleKind::App: return timewarp::print(term(n.term)) + "[" + print(n.child) + "]";
    case SampleKind::Suc: return "suc(" + print(n.child) + ")";
    case SampleKind::Pre: return "pre(" + print(n.child) + ")";
    case SampleKind::Last: return "last(" + timewarp::print(term(n.term)) + ")";
  }
  return {};
}

bool SampleSet::insert(SampleId id) {
  if (contains(id)) return false;
  if (member_.size() <= id) member_.resize(id + 1, false);
  member_[id] = true;
  order_.push_back(id);
  return true;
}

std::optional<SampleId> SampleSet::member(const SampleNode& n) const {
  auto id = arena_->find(n);
  if (id && contains(*id)) return id;
  return std::nullopt;
}

std::optional<SampleId> SampleSet::find_app(TermId t, SampleId a) const {
  return member({SampleKind::App, t, a});
}
std::optional<SampleId> SampleSet::find_suc(SampleId a) const {
  return member({SampleKind::Suc, kNoId, a});
}
std::optional<SampleId> SampleSet::find_pre(SampleId a) const {
  return member({SampleKind::Pre, kNoId, a});
}
std::optional<SampleId> SampleSet::find_last(TermId t) const {
  return member({SampleKind::Last, t, kNoId});
}
std::optional<SampleId> SampleSet::find_kappa() const { return member({SampleKind::Kappa}); }

std::vector<std::string> SampleSet::printed() const {
  std::vector<std::string> out;
  out.reserve(order_.size());
  for (SampleId id : order_) out.push_back(arena_->print(id));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SampleId> step(SampleArena& arena, SampleId a) {
  SampleNode n = arena.node(a);
  switch (n.kind) {
    case SampleKind::Kappa:
    case SampleKind::Last: return {};
    case SampleKind::Suc:
    case SampleKind::Pre: return {n.child};
    case SampleKind::App: break;
  }
  TermId t = n.term;
  std::vector<SampleId> out{n.child, arena.app(t, arena.last(t))};
  TermId h = arena.term_head(t);
  switch (arena.term_kind(t)) {
    case BasicTerm::Kind::Comp:
      out.push_back(arena.app(arena.term_left(t), arena.app(arena.term_right(t), n.child)));
      break;
    case BasicTerm::Kind::O: out.push_back(arena.app(h, n.child)); break;
    case BasicTerm::Kind::R:
      out.push_back(arena.app(h, a));
      out.push_back(arena.app(h, arena.suc(a)));
      break;
    case BasicTerm::Kind::L:
      out.push_back(arena.app(h, a));
      out.push_back(arena.app(h, arena.pre(a)));
      break;
    default: break;
  }
  return out;
}

SampleSet saturate(const SampleSet& roots, const SaturateOptions& opts) {
  SampleSet out(roots.arena_ptr());
  std::deque<SampleId> work;
  for (SampleId r : roots.members())
    if (out.insert(r)) work.push_back(r);
  while (!work.empty()) {
    SampleId a = work.front();
    work.pop_front();
    for (SampleId b : step(out.arena(), a)) {
      if (!out.insert(b)) continue;
      if (out.size() > opts.sample_budget)
        throw BudgetExceeded("saturation exceeds the sample budget of " +
                             std::to_string(opts.sample_budget));
      work.push_back(b);
    }
  }
  out.mark_saturated();
  return out;
}

SampleSet saturate_goals(const std::vector<BasicTerm>& goals, const SaturateOptions& opts,
                         std::vector<SampleId>* goal_samples) {
  auto arena = std::make_shared<SampleArena>();
  SampleSet roots(arena);
  SampleId k = arena->kappa();
  std::vector<SampleId> ids;
  for (const BasicTerm& g : goals) {
    SampleId s = arena->app(arena->intern(g), k);
    roots.insert(s);
    ids.push_back(s);
  }
  if (goal_samples) *goal_samples = ids;
  return saturate(roots, opts);
}

double saturation_bound(std::size_t c) {
  double b = 6.0 * static_cast<double>(c);
  return std::pow(b, static_cast<double>(c));
}

}  // namespace timewarp
