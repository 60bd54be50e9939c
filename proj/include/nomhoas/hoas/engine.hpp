#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "nomhoas/common/limits.hpp"
#include "nomhoas/hoas/formula.hpp"

namespace nomhoas::hoas {

enum class GRule { Top, Eq, And, OrLeft, OrRight, Exists, Nabla, Def };

const char* grule_name(GRule r);
std::optional<GRule> grule_from_name(const std::string& s);

struct GDerivation {
  GRule rule = GRule::Top;
  Formula goal;
  HTerm witness;                  // Exists
  std::string nom;                // Nabla: the constant replacing the bound variable
  int clause = -1;                // Def
  std::vector<std::string> zs;    // Def: constants chosen for the head's nabla variables
  HSubst theta;                   // Def: universals
  std::vector<GDerivation> children;

  // Def nodes on the longest branch, not counting predicates in `uncounted`.
  int depth(const std::set<std::string>& uncounted = {}) const;
  std::string skeleton() const;
  // Largest ground term chosen by Exists (below its lambda prefix).
  int max_witness_size() const;
};

struct GOptions {
  // Unfolding these predicates does not consume depth (used for the
  // distinguished fresh/swap/abst clauses).
  std::set<std::string> uncounted;
};

struct GSolveResult {
  std::optional<GDerivation> derivation;
  SearchStatus status = SearchStatus::Exhausted;
  int depth = -1;
};

// Pattern-unification search with iterative deepening on defR count.
GSolveResult gprove(const Definition& defs, const Formula& goal, const SearchLimits& lim, const GOptions& opt = {});

// Validates every node against the ground rules.
bool gcheck(const Definition& defs, const GDerivation& d, std::string* why = nullptr);

// Enumeration search: Exists witnesses and clause instances drawn from
// bounded term enumeration over a finite pool of nominal constants.
GSolveResult goracle_solve(const Definition& defs, const Formula& goal, const SearchLimits& lim,
                           const GOptions& opt = {});

// Body instances of a clause against a closed atom.  Universals that only
// occur in the body are left free.
std::vector<Formula> def_unfold(const Definition& defs, int clause, const std::string& pred,
                                const std::vector<HTerm>& args);

nlohmann::json to_json(const GDerivation& d);
GDerivation gderivation_from_json(const Definition& defs, const nlohmann::json& j);

// Instantiates the clause's type variables against concrete argument types.
std::optional<DefClause> instantiate_clause_types(const Definition& defs, const DefClause& c,
                                                  const std::vector<HTerm>& args);

}  // namespace nomhoas::hoas
