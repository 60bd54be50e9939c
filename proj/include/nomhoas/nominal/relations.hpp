#pragma once

#include <set>

#include "nomhoas/nominal/syntax.hpp"

namespace nomhoas::nominal {

// Swapping.  On terms, variables are fixed ((a b).X = X) and Swap nodes with
// name arguments are evaluated.  On goals, new-binders that clash with the
// permutation are renamed first.
Term swap_apply(const Permutation& pi, const Term& t);
Goal swap_apply(const Permutation& pi, const Goal& g);

// |= a # t.  Throws TypeError when t is not ground.
bool freshness_check(const Name& a, const Term& t);
// |= t ~ u.  Throws TypeError when the terms are not ground.
bool alpha_eq(const Term& t, const Term& u);
// supp(t) = { a | not a # t }.
std::set<Name> support(const Term& t);

// Variants tolerant of variables (bound by an enclosing exists).  A variable
// is equal only to itself, and counts as containing no names.
bool alpha_eq_open(const Term& t, const Term& u);
bool fresh_open(const Name& a, const Term& t);
// a is semantically fresh for every term of the goal.
bool fresh_for_goal(const Name& a, const Goal& g);
// Alpha-equivalence of goals: term equality is ~, and exists/new binders are
// compared up to renaming.
bool goal_alpha_eq(const Goal& g, const Goal& h);

// Simultaneous substitution.  Abstraction does not avoid capture; exists and
// new do (binders are renamed away from the names and variables of the range).
Term substitute(const Term& t, const NSubst& theta);
Goal substitute(const Goal& g, const NSubst& theta);

// Evaluates name-argument Swap nodes away.
Term push_swaps(const Term& t);

// A name not occurring in `avoid`, with the same type and stem as `like`.
Name fresh_name_like(const Name& like, const std::set<Name>& avoid);

}  // namespace nomhoas::nominal
