#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nomhoas/hoas/term.hpp"

namespace nomhoas::hoas {

enum class FKind { Top, Atom, Eq, And, Or, Exists, Nabla };

struct FNode;

// Goal formulas.  Quantifiers bind a named free variable of the body.
class Formula {
 public:
  Formula() = default;
  explicit Formula(std::shared_ptr<const FNode> n) : n_(std::move(n)) {}

  static Formula top();
  static Formula atom(const std::string& pred, std::vector<HTerm> args);
  static Formula eq(const HTerm& l, const HTerm& r);
  static Formula conj(const Formula& l, const Formula& r);
  static Formula disj(const Formula& l, const Formula& r);
  static Formula exists(const std::string& var, TyP ty, const Formula& body);
  static Formula nabla(const std::string& var, TyP ty, const Formula& body);

  bool valid() const { return n_ != nullptr; }
  FKind kind() const;
  const FNode* operator->() const { return n_.get(); }
  // Binder body (Exists/Nabla).
  const Formula& body() const;

  std::string str() const;
  // Canonical print: bound variables renamed by position.
  std::string key() const;

 private:
  std::shared_ptr<const FNode> n_;
};

struct FNode {
  FKind kind;
  std::string pred;          // Atom
  std::vector<HTerm> args;   // Atom arguments; Eq: {l, r}
  Formula left, right;       // And/Or; Exists/Nabla body in left
  std::string var;           // Exists/Nabla
  TyP vty;
};

using HSubst = std::map<std::string, HTerm>;

Formula fsubstitute(const Formula& f, const HSubst& s);
Formula fnormalize(const Formula& f);
Formula f_ty_instantiate(const Formula& f, const std::map<std::string, TyP>& s);
Formula f_nom_rename(const Formula& f, const std::map<std::string, std::string>& m);
std::set<std::string> fsupport(const Formula& f);
void f_collect_noms(const Formula& f, std::map<std::string, TyP>& out);
std::set<std::string> ffree_vars(const Formula& f);
bool formula_alpha_eq(const Formula& a, const Formula& b);
int count_binders(const Formula& f);

// Applies a fresh raised variable to a list of terms.
HTerm raise_var(const std::string& name, const TyP& ty, const std::vector<HTerm>& over);

struct HSignature {
  std::vector<std::string> kinds;
  std::set<std::string> nominal_types;
  std::map<std::string, TyP> consts;
  std::vector<std::string> const_order;
  std::map<std::string, TyP> preds;
  std::vector<std::string> pred_order;

  bool is_nominal(const TyP& t) const { return t->kind == Ty::Base && nominal_types.count(t->name) > 0; }
  bool has_type(const std::string& n) const;
  void declare_kind(const std::string& n);
  void declare_nominal(const std::string& n);
  void declare_const(const std::string& n, TyP t);
  void declare_pred(const std::string& n, TyP t);
};

using TypedName = std::pair<std::string, TyP>;

// (nabla z. p t) := B, universally closed over `universals`.
struct DefClause {
  std::vector<TypedName> universals;
  std::vector<TypedName> nablas;
  std::string pred;
  std::vector<HTerm> head;
  Formula body;

  std::string str() const;
};

struct Definition {
  HSignature sig;
  std::vector<DefClause> clauses;
};

// Structural equality up to renaming of universals and binders.
bool clause_equiv(const DefClause& a, const DefClause& b);

}  // namespace nomhoas::hoas
