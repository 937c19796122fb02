#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "timewarp/term.hpp"

namespace timewarp {

using TermId = std::uint32_t;
using SampleId = std::uint32_t;
inline constexpr std::uint32_t kNoId = ~std::uint32_t{0};

enum class SampleKind : std::uint8_t { Kappa, App, Suc, Pre, Last };

/// κ | t[α] | suc(α) | pre(α) | last(t), with terms and children by id.
struct SampleNode {
  SampleKind kind;
  TermId term = kNoId;    // App, Last
  SampleId child = kNoId;  // App, Suc, Pre

  bool operator==(const SampleNode&) const = default;
};

/// Hash-consing tables for basic terms and samples. Interned identity implies
/// structural equality, so ids can be compared directly. Not thread-safe;
/// use one arena per goal.
class SampleArena {
 public:
  TermId intern(const BasicTerm& t);
  const BasicTerm& term(TermId id) const { return terms_[id].term; }
  BasicTerm::Kind term_kind(TermId id) const { return terms_[id].term.kind(); }
  /// Operand of a unary term, or first factor of a composition.
  TermId term_head(TermId id) const { return terms_[id].head; }
  /// Remaining factors of a composition.
  TermId term_rest(TermId id) const { return terms_[id].rest; }
  /// Binary reading of a composition a₁⋯aₙ as (a₁⋯aₙ₋₁)·aₙ, which is how
  /// samples take products apart: (a₁⋯aₙ)[α] ⇝ (a₁⋯aₙ₋₁)[aₙ[α]].
  TermId term_left(TermId id) const { return terms_[id].left; }
  TermId term_right(TermId id) const { return terms_[id].right; }
  std::size_t term_count() const { return terms_.size(); }

  SampleId kappa() { return get({SampleKind::Kappa}); }
  SampleId app(TermId t, SampleId a) { return get({SampleKind::App, t, a}); }
  SampleId suc(SampleId a) { return get({SampleKind::Suc, kNoId, a}); }
  SampleId pre(SampleId a) { return get({SampleKind::Pre, kNoId, a}); }
  SampleId last(TermId t) { return get({SampleKind::Last, t, kNoId}); }

  /// Lookup without creating.
  std::optional<SampleId> find(const SampleNode& n) const;

  const SampleNode& node(SampleId id) const { return samples_[id]; }
  std::size_t size() const { return samples_.size(); }

  std::string print(SampleId id) const;

 private:
  struct TermEntry {
    BasicTerm term;
    TermId head;
    TermId rest;
    TermId left;
    TermId right;
  };
  struct NodeHash {
    std::size_t operator()(const SampleNode& n) const noexcept {
      return (std::size_t{n.term} * 0x9e3779b97f4a7c15ULL) ^ (std::size_t{n.child} << 3) ^
             static_cast<std::size_t>(n.kind);
    }
  };

  SampleId get(const SampleNode& n);

  std::vector<TermEntry> terms_;
  std::unordered_map<BasicTerm, TermId> term_ids_;
  std::vector<SampleNode> samples_;
  std::unordered_map<SampleNode, SampleId, NodeHash> sample_ids_;
};

/// A set of samples over a shared arena.
class SampleSet {
 public:
  explicit SampleSet(std::shared_ptr<SampleArena> arena) : arena_(std::move(arena)) {}

  SampleArena& arena() { return *arena_; }
  const SampleArena& arena() const { return *arena_; }
  std::shared_ptr<SampleArena> arena_ptr() const { return arena_; }

  bool insert(SampleId id);
  bool contains(SampleId id) const { return id < member_.size() && member_[id]; }
  /// Members in insertion order.
  const std::vector<SampleId>& members() const { return order_; }
  std::size_t size() const { return order_.size(); }
  bool saturated() const { return saturated_; }
  void mark_saturated() { saturated_ = true; }

  /// Member lookups; nullopt when the sample is absent from the arena or the
  /// set.
  std::optional<SampleId> find_app(TermId t, SampleId a) const;
  std::optional<SampleId> find_suc(SampleId a) const;
  std::optional<SampleId> find_pre(SampleId a) const;
  std::optional<SampleId> find_last(TermId t) const;
  std::optional<SampleId> find_kappa() const;

  /// Printed members, sorted; handy for comparing sets across arenas.
  std::vector<std::string> printed() const;

 private:
  std::optional<SampleId> member(const SampleNode& n) const;

  std::shared_ptr<SampleArena> arena_;
  std::vector<bool> member_;
  std::vector<SampleId> order_;
  bool saturated_ = false;
};

struct SaturateOptions {
  std::size_t sample_budget = 2'000'000;
};

/// One-step successors under ⇝.
std::vector<SampleId> step(SampleArena& arena, SampleId a);

/// Least ⇝-closed superset of `roots`. Throws BudgetExceeded when the sample
/// budget is hit.
SampleSet saturate(const SampleSet& roots, const SaturateOptions& opts = {});

/// Fresh arena, roots t₁[κ], …, tₙ[κ], saturated. The goal sample ids are
/// written to `goal_samples` when given.
SampleSet saturate_goals(const std::vector<BasicTerm>& goals, const SaturateOptions& opts = {},
                         std::vector<SampleId>* goal_samples = nullptr);

/// (6·c)^c, as a double so that large complexities do not overflow.
double saturation_bound(std::size_t c);

}  // namespace timewarp
