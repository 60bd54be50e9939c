#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nomhoas/hoas/formula.hpp"
#include "nomhoas/nominal/syntax.hpp"

namespace nomhoas::translator {

struct TransConfig {
  bool enable_subordination_pruning = true;
  bool enable_static_freshness = true;
  bool enable_vacuous_nabla_removal = true;
  // Reject swappings/abstractions over non-names instead of hoisting them.
  bool name_restricted_mode = false;

  static TransConfig plain() { return {false, false, false, false}; }
};

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TranslationUnit {
  hoas::HSignature sig;  // without the distinguished predicates
  std::vector<hoas::DefClause> defs;
  std::vector<hoas::DefClause> prelude;
  // One entry per def: what each pass did, and the raising applied.
  std::vector<std::vector<std::string>> pass_log;
  std::vector<std::vector<std::string>> sigma_log;
  // Per def: variable -> number of leading arguments it is raised over
  // (universals and body existentials, which are kept distinctly named).
  std::vector<std::map<std::string, int>> raised;

  // defs plus the prelude clauses needed by them and by `goals`.
  hoas::Definition definition(const std::vector<hoas::Formula>& goals = {}) const;
  std::string report() const;
};

// Predicates of the distinguished clauses; their unfoldings are not counted
// against the search depth.
const std::set<std::string>& prelude_preds();

hoas::TyP translate_type(const nominal::Type& t);
hoas::HSignature translate_signature(const nominal::Signature& sig);

// Variables listed in `raised` are applied to the nominal constants of the
// given names; other variables translate unraised.
hoas::HTerm phi_term(const nominal::Signature& sig, const nominal::Term& t, const std::map<std::string, std::vector<nominal::Name>>& raised = {});
// Goal translation under pending nabla-names.  Free variables stay unraised;
// names not in `names` become nominal constants.
hoas::Formula phi_goal(const nominal::Signature& sig, const std::vector<nominal::Name>& names, const nominal::Goal& g,
                       const std::map<std::string, std::vector<nominal::Name>>& raised = {});

struct TClause {
  hoas::DefClause clause;
  std::map<std::string, int> raised;
  std::vector<std::string> sigma;
  std::vector<std::string> log;
};

TClause phi_clause(const nominal::Signature& sig, const nominal::ProgramClause& c);

// Hoists non-name-restricted swappings and abstractions into =. goals.
nominal::ProgramClause normalize_name_restriction(const nominal::Signature& sig, const nominal::ProgramClause& c);
nominal::Goal normalize_name_restriction(const nominal::Signature& sig, const nominal::Goal& g);

void pass_subordination(TranslationUnit& u);
void pass_static_freshness(TranslationUnit& u);
void pass_vacuous_nabla(TranslationUnit& u);
void emit_prelude(TranslationUnit& u);

// Type -> base types whose nominal constants can occur in its inhabitants.
std::map<std::string, std::set<std::string>> subordination(const hoas::HSignature& sig);

TranslationUnit translate_program(const nominal::Program& prog, const TransConfig& cfg = {});
// A closed query.  Free names become nominal constants.
hoas::Formula translate_goal(const nominal::Signature& sig, const nominal::Goal& g, const TransConfig& cfg = {});

}  // namespace nomhoas::translator
