#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nomhoas/hoas/term.hpp"

namespace nomhoas::hoas {

// A logic variable may mention a nominal constant c only when c is older
// than the variable (stamp order) and not in its forbidden set.  Constants
// absent from nom_stamp have stamp 0 and are usable everywhere.
struct VarInfo {
  TyP ty;
  int stamp = 0;
  std::set<std::string> forbidden;
};

struct HUnifState {
  std::map<std::string, HTerm> bind;
  std::map<std::string, VarInfo> vars;
  std::map<std::string, int> nom_stamp;
  // Non-pattern equations waiting for more instantiation.
  std::vector<std::pair<HTerm, HTerm>> postponed;
  int clock = 0;
  unsigned long long counter = 0;

  HTerm new_var(const std::string& stem, const TyP& ty, int stamp, std::set<std::string> forbidden = {});
  bool permitted(const std::string& var, const std::string& nom) const;
  bool is_var(const std::string& name) const { return vars.count(name) > 0; }
};

enum class HUStatus { Ok, Fail, NonPattern };

// Instantiates bound logic variables and renormalises.
HTerm hresolve(const HUnifState& s, const HTerm& t);

// Unifies two closed (up to logic variables) terms of equal type.  Pattern
// problems are solved completely; others are queued in `postponed` and
// retried when later bindings make them patterns.  NonPattern is returned
// only by the single-equation entry point below.
HUStatus pattern_unify(HUnifState& s, const HTerm& a, const HTerm& b);

// Re-examines postponed equations; Fail if one became unsolvable.
HUStatus retry_postponed(HUnifState& s);

// Unbound logic variables of t (after resolution), with their types.
void open_vars(const HUnifState& s, const HTerm& t, std::map<std::string, TyP>& out);

}  // namespace nomhoas::hoas
