#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nomhoas/common/limits.hpp"
#include "nomhoas/hoas/engine.hpp"

namespace nomhoas::seq {

// Second-order lambda Prolog encoded as data of type obj (goals) and atm
// (atomic formulas), interpreted by the member/seq definition.
//
// Object syntax: tt, and, or, imp (atomic antecedent), all, atom <A>,
// and lists nil / cons of atm.  Object predicates p : t1 -> .. -> o of the
// source become constants p : t1 -> .. -> atm.
struct LpDb {
  hoas::Definition def;                  // object signature, prog clauses, then the seq clauses
  std::vector<hoas::DefClause> prog;     // the encoded source clauses
  std::map<std::string, std::string> all_consts;  // binder type -> its "all" constant
  hoas::HSignature parse_sig;            // same as def.sig but with a polymorphic "all"
};

class SeqError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads .lp2 text: kind/type declarations as in .gm, then clauses
// "H :- B." or "H." with bodies built from true, ",", ";", "=>", "pi x\".
LpDb encode_lprolog(std::string_view text);

// member (2 clauses) and seq (6 clauses plus one per binder type).
std::vector<hoas::DefClause> seq_prelude(const hoas::HSignature& sig, const std::map<std::string, std::string>& alls);

// A goal in .lp2 body syntax as an obj term.  Lowercase undeclared
// identifiers are nominal constants.
hoas::HTerm parse_obj_goal(const LpDb& db, std::string_view text);
// An atomic formula as an atm term.
hoas::HTerm parse_atm(const LpDb& db, std::string_view text);
hoas::HTerm atm_list(const LpDb& db, const std::vector<hoas::HTerm>& atoms);
hoas::HTerm obj_atom(const LpDb& db, const hoas::HTerm& a);
hoas::Formula seq_formula(const LpDb& db, const std::vector<hoas::HTerm>& hyps, const hoas::HTerm& goal);

// Depth-bounded regression checks of the meta-theory of seq.  `premises`
// reports whether the hypotheses were derivable; `holds` is meaningful only
// when they were.
struct LemmaCheck {
  bool premises = false;
  bool holds = false;
  int premise_depth = -1;
  int depth = -1;
  int bound = -1;
};

// seq L G  implies  seq L[t/c] G[t/c]   (bound: premise depth + slack)
LemmaCheck check_instantiation(const LpDb& db, const std::vector<hoas::HTerm>& hyps, const hoas::HTerm& goal,
                               const std::string& c, const hoas::HTerm& t, const SearchLimits& lim, int slack = 2);
// seq (A::L) G and seq L <A>  imply  seq L G   (bound: sum of the two depths)
LemmaCheck check_cut(const LpDb& db, const std::vector<hoas::HTerm>& hyps, const hoas::HTerm& a,
                     const hoas::HTerm& goal, const SearchLimits& lim);
// seq L G and L contained in K  imply  seq K G   (bound: depth + |K|)
LemmaCheck check_monotonicity(const LpDb& db, const std::vector<hoas::HTerm>& hyps,
                              const std::vector<hoas::HTerm>& bigger, const hoas::HTerm& goal,
                              const SearchLimits& lim);

// Replaces the nominal constant c by t and normalises.
hoas::HTerm replace_nom(const hoas::HTerm& u, const std::string& c, const hoas::HTerm& t);

}  // namespace nomhoas::seq
