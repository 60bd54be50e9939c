#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nomhoas::hoas {

// Simple types.  Var types only appear in the polymorphic distinguished
// clauses and are instantiated before use.
struct Ty;
using TyP = std::shared_ptr<const Ty>;

struct Ty {
  enum Kind { Base, Arrow, Var } kind;
  std::string name;
  TyP dom, cod;
};

TyP base_ty(const std::string& name);
TyP arrow_ty(TyP dom, TyP cod);
TyP var_ty(const std::string& name);
TyP o_ty();
bool ty_equal(const TyP& a, const TyP& b);
std::string ty_str(const TyP& t);
TyP arrows(const std::vector<TyP>& args, TyP result);
std::vector<TyP> arg_types(const TyP& t);
TyP result_type(const TyP& t);
bool ty_has_vars(const TyP& t);
TyP ty_subst(const TyP& t, const std::map<std::string, TyP>& s);
// One-way matching of a pattern type (with Var leaves) against a type.
bool ty_match(const TyP& pat, const TyP& t, std::map<std::string, TyP>& s);

class HTypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class HKind { BVar, FVar, Const, Nom, App, Lam };

struct HNode;

// Simply-typed lambda-term with de Bruijn bound variables.  Every node
// carries its type.  App nodes are kept flat (the head is never an App).
class HTerm {
 public:
  HTerm() = default;
  explicit HTerm(std::shared_ptr<const HNode> n) : n_(std::move(n)) {}

  static HTerm bvar(int index, TyP ty);
  static HTerm fvar(const std::string& name, TyP ty);
  static HTerm con(const std::string& name, TyP ty);
  static HTerm nom(const std::string& name, TyP ty);
  static HTerm app(const HTerm& head, std::vector<HTerm> args);
  static HTerm lam(const std::string& hint, TyP dom, const HTerm& body);

  bool valid() const { return n_ != nullptr; }
  HKind kind() const;
  const HNode* operator->() const { return n_.get(); }
  const HNode& operator*() const { return *n_; }
  const TyP& ty() const;

  // Head symbol and arguments of a spine (for non-App terms: itself, none).
  const HTerm& head() const;
  const std::vector<HTerm>& args() const;

  std::string str() const;
  // Printing with bound variables named by depth, so alpha-equivalent
  // terms print identically.
  std::string key() const;

  friend bool operator==(const HTerm& a, const HTerm& b);
  friend bool operator!=(const HTerm& a, const HTerm& b) { return !(a == b); }

 private:
  std::shared_ptr<const HNode> n_;
};

struct HNode {
  HKind kind;
  std::string name;  // FVar, Const, Nom; Lam hint
  int index = 0;     // BVar
  TyP ty;
  HTerm head;                // App
  std::vector<HTerm> args;   // App arguments; Lam: {body}
};

// Shift loose bound variables >= cutoff by d.
HTerm shift(const HTerm& t, int d, int cutoff = 0);
// Body of a lambda with its bound variable replaced by v (not normalised).
HTerm instantiate(const HTerm& body, const HTerm& v);
// Beta-normal, eta-long form.
HTerm normalize(const HTerm& t);
bool is_normal(const HTerm& t);

// Simultaneous substitution for free variables; result normalised.
HTerm hsubstitute(const HTerm& t, const std::map<std::string, HTerm>& s);
// Type substitution on every node.
HTerm ty_instantiate(const HTerm& t, const std::map<std::string, TyP>& s);

std::set<std::string> hsupport(const HTerm& t);
void collect_noms(const HTerm& t, std::map<std::string, TyP>& out);
std::set<std::string> hfree_vars(const HTerm& t);
bool has_loose_bvars(const HTerm& t, int depth = 0);

HTerm nom_swap(const std::string& a, const std::string& b, const HTerm& t);
// Renames nominal constants by a map (used by permutations of constants).
HTerm nom_rename(const HTerm& t, const std::map<std::string, std::string>& m);
// Replaces every occurrence of nominal constant a with a new bound variable.
HTerm bind_nominal(const std::string& a, const TyP& aty, const HTerm& t);
// Replaces Nom a by BVar(depth) at the current binding depth.
HTerm abstract_nom(const HTerm& t, const std::string& a, int depth);

// Node count with lambdas counted once each.
int hsize(const HTerm& t);
// Size after stripping the leading lambda prefix.
int hsize_unraised(const HTerm& t);

// If t is (an eta-expansion of) a bound variable or nominal constant, that atom.
HTerm eta_atom(const HTerm& t);

}  // namespace nomhoas::hoas
