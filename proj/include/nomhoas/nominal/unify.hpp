#pragma once

#include <map>
#include <string>
#include <vector>

#include "nomhoas/nominal/syntax.hpp"

namespace nomhoas::nominal {

// Nominal unification with suspended permutations and freshness constraints.
// Logic variables are Var nodes whose susp field holds the suspension.
struct UnifState {
  std::map<std::string, Term> bind;
  // a # X for unbound X
  std::vector<std::pair<Name, std::string>> fresh;
};

enum class UStatus { Ok, Fail, Split };

// Split: a name-typed variable sits where a concrete name is needed (a
// swapping or abstraction binder, or the left of #).  The caller picks a
// name for `var` and retries.
struct UResult {
  UStatus status = UStatus::Ok;
  std::string var;
  Type type;
  static UResult ok() { return {}; }
  static UResult fail() { return {UStatus::Fail, {}, {}}; }
};

// pi . t with variables suspended rather than fixed.
Term perm_apply(const Permutation& pi, const Term& t);

// Head-normalises: follows bindings and evaluates swappings with name
// arguments at the root.
Term head_norm(const UnifState& s, const Term& t);
// Applies all bindings.
Term resolve(const UnifState& s, const Term& t);

UResult unify_eq(UnifState& s, const Term& t, const Term& u);
UResult unify_fresh(UnifState& s, const Term& a, const Term& t);

// Logic variables (unbound after resolution) occurring in a term.
void unbound_vars(const UnifState& s, const Term& t, std::map<std::string, Type>& out);

}  // namespace nomhoas::nominal
