#pragma once

#include <string>
#include <string_view>

#include "nomhoas/nominal/syntax.hpp"

namespace nomhoas::nominal {

// Reads a .apl program.  Free lowercase identifiers of a clause that are not
// function constants become new-bound names; free uppercase identifiers become
// universals, both in order of first occurrence.  A clause may instead list
// its binders explicitly with "new a." / "forall X." prefixes, in which case
// every free symbol must be listed.
Program parse_program(std::string_view text);

// Reads a goal against a signature.  Free uppercase identifiers are left as
// free variables (the caller decides whether that is acceptable); free
// lowercase identifiers are names whose type is inferred.
Goal parse_goal(std::string_view text, const Signature& sig, bool allow_generated = false);

// A single term with an expected type.
Term parse_term(std::string_view text, const Signature& sig, const Type& expected,
                bool allow_generated = false);

std::string print_signature(const Signature& sig);
// Clause text that parse_program reads back to the same clause.
std::string print_clause(const ProgramClause& c);
std::string print_program(const Program& p);

bool operator==(const ProgramClause& a, const ProgramClause& b);
bool same_program(const Program& a, const Program& b);

}  // namespace nomhoas::nominal
