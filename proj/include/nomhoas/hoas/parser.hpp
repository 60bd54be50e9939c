#pragma once

#include <string>
#include <string_view>

#include "nomhoas/hoas/formula.hpp"

namespace nomhoas::hoas {

// Reader for the .gm format:
//
//   kind tm.   nominal vname.
//   type lam (vname -> tm) -> tm.
//   type tc ctx -> tm -> ty -> o.
//   tc G (lam x\ E x) (arr T U) := nabla x, tc (bind x T G) (E x) U.
//   nabla x, fresh x X.
//
// Uppercase identifiers in clauses are universals; in type declarations they
// are type variables.  Errors throw nominal::SyntaxError or HTypeError.
Definition parse_definition(std::string_view text, bool allow_generated = false);

// Clauses only, against a signature built elsewhere.  Constants of that
// signature may have polymorphic types; each occurrence is instantiated.
std::vector<DefClause> parse_clauses(std::string_view text, const HSignature& sig, bool allow_generated = false);
// A closed goal.  Undeclared lowercase identifiers denote nominal constants.
Formula parse_formula(std::string_view text, const HSignature& sig, bool allow_generated = false);
HTerm parse_hterm(std::string_view text, const HSignature& sig, const TyP& expected, bool allow_generated = false);
TyP parse_type(std::string_view text);

std::string print_hsignature(const HSignature& sig);
std::string print_definition(const Definition& d);
bool same_signature(const HSignature& a, const HSignature& b);
bool same_definition(const Definition& a, const Definition& b);

}  // namespace nomhoas::hoas
