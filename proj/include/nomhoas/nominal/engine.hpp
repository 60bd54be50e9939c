#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nomhoas/common/limits.hpp"
#include "nomhoas/nominal/syntax.hpp"
#include "json.hpp"

namespace nomhoas::nominal {

enum class NRule { True, Fresh, Equal, And, OrLeft, OrRight, Exists, New, Backchain };

const char* rule_name(NRule r);
std::optional<NRule> rule_from_name(const std::string& s);

struct NDerivation {
  NRule rule = NRule::True;
  Goal goal;
  Term witness;      // Exists
  Name new_name;     // New: the name the bound name was renamed to
  int clause = -1;   // Backchain
  Permutation pi;    // Backchain
  NSubst theta;      // Backchain
  std::vector<NDerivation> children;

  // Number of backchain nodes on the longest branch.
  int depth() const;
  // Rule labels in preorder, e.g. "BACKCHAIN(AND(FRESH,BACKCHAIN(...)))".
  std::string skeleton() const;
  // Largest term chosen by an EXISTS step.
  int max_witness_size() const;
};

struct NSolveResult {
  std::optional<NDerivation> derivation;
  SearchStatus status = SearchStatus::Exhausted;
  int depth = -1;  // unfolding bound at which the proof was found
};

// Unification-based search with iterative deepening on the unfolding count.
NSolveResult solve(const Program& prog, const Goal& g, const SearchLimits& lim);

// Node-by-node validation against the ground proof rules.
bool check_derivation(const Program& prog, const NDerivation& d, std::string* why = nullptr);

// Enumeration oracle: finite name pool, bounded instantiation terms.
NSolveResult oracle_solve(const Program& prog, const Goal& g, const SearchLimits& lim);

// Pairs (pi, theta) with args ~ pi.(head theta), theta ground.  The callback
// returns true to stop the enumeration.  `pool` is the name set permutations
// range over; names of the clause missing from it are mapped to the pool only.
using MatchCallback = std::function<bool(const Permutation&, const NSubst&)>;
void equivariant_match(const Signature& sig, const std::vector<Term>& args, const ProgramClause& clause,
                       const std::vector<Name>& pool, const SearchLimits& lim, const MatchCallback& k);
// Convenience: pool = names of args and clause plus fresh_name_budget new names per type.
std::vector<std::pair<Permutation, NSubst>> equivariant_match(const Signature& sig, const std::vector<Term>& args,
                                                              const ProgramClause& clause,
                                                              const SearchLimits& lim);

nlohmann::json to_json(const NDerivation& d);
// Throws std::runtime_error on malformed input.
NDerivation derivation_from_json(const Program& prog, const nlohmann::json& j);

}  // namespace nomhoas::nominal
