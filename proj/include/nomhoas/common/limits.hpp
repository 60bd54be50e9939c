#pragma once

namespace nomhoas {

struct SearchLimits {
  int max_unfoldings = 6;    // backchain / defR applications per branch
  int term_size_bound = 4;   // instantiation size in enumeration mode
  int fresh_name_budget = 2; // new names per name type in enumeration mode
};

// Why a search stopped.  CutOff means some branch hit the unfolding limit, so
// a negative answer is only "not provable within the limits".
enum class SearchStatus { Proved, Exhausted, CutOff };

inline const char* status_str(SearchStatus s) {
  switch (s) {
    case SearchStatus::Proved: return "proved";
    case SearchStatus::Exhausted: return "exhausted";
    case SearchStatus::CutOff: return "cut-off";
  }
  return "?";
}

}  // namespace nomhoas
