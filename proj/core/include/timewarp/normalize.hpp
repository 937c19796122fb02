#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "timewarp/term.hpp"

namespace timewarp {

struct NormalizeOptions {
  /// Upper bound on the total size of a normal form (and of any intermediate
  /// one). Exceeding it throws BudgetExceeded.
  std::size_t node_budget = 200000;
};

/// A join of basic terms, sorted and without duplicates.
using Clause = std::vector<BasicTerm>;
/// A meet of clauses, sorted, without duplicates or subsumed clauses.
using NormalForm = std::vector<Clause>;

/// Rewrites residuals into the unary operations, and ⊤ into ⊥^ℓ:
///   f\g ↦ f^r g ∨ (⊥^ℓ f)^r ∨ g^o,   g/f ↦ g f^ℓ ∨ (f^ℓ)^o.
/// The patterns id/t, t\id and ⊤\t become unary nodes directly.
Term elim_residuals(const Term& t);

/// Pushes meets and joins outward. The input must be free of residuals
/// (the output of elim_residuals).
NormalForm distribute(const Term& t, const NormalizeOptions& opts = {});

/// A meet of joins of basic terms denoting the same warp as t. Closed
/// subterms are replaced by the smallest closed term with the same value.
/// An empty normal form stands for ⊤.
NormalForm normal_form(const Term& t, const NormalizeOptions& opts = {});

/// One unit goal per conjunct of the normal form: id ≤ t holds iff every
/// goal holds. Conjuncts with a constant member above id are left out.
std::vector<Query> unit_goals(const Term& t, const NormalizeOptions& opts = {});

/// Composition with the unit laws id·t = t·id = t and t·⊥ = ⊥·t = ⊥
/// applied, and adjacent closed factors folded where possible.
BasicTerm compose_basic(const BasicTerm& a, const BasicTerm& b);

Term to_term(const NormalForm& nf);
std::string print(const NormalForm& nf);

}  // namespace timewarp
