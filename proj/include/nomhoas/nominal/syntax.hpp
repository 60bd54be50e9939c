#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nomhoas::nominal {

// A monomorphic nominal type: a base or name type identifier, or an
// abstraction type <nu>body.
struct Type {
  std::string id;
  std::shared_ptr<const Type> body;  // non-null iff abstraction type

  static Type atom(std::string id) { return Type{std::move(id), nullptr}; }
  static Type abs(std::string nu, Type body) {
    return Type{std::move(nu), std::make_shared<const Type>(std::move(body))};
  }
  bool is_abs() const { return body != nullptr; }
  std::string str() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
  friend bool operator<(const Type& a, const Type& b);
};

struct FuncSym {
  std::vector<Type> args;
  std::string result;
};

class Signature {
 public:
  std::set<std::string> name_types;
  std::set<std::string> base_types;
  std::map<std::string, FuncSym> funcs;
  std::map<std::string, std::vector<Type>> preds;
  std::vector<std::string> func_order;  // declaration order, for enumeration

  bool is_name_type(const std::string& t) const { return name_types.count(t) != 0; }
  bool is_declared_type(const Type& t) const;
  void declare_name_type(const std::string& id);
  void declare_base_type(const std::string& id);
  void declare_func(const std::string& f, std::vector<Type> args, const std::string& result);
  void declare_pred(const std::string& p, std::vector<Type> args);
};

struct Name {
  std::string id;
  std::string ntype;

  friend bool operator==(const Name& a, const Name& b) { return a.id == b.id && a.ntype == b.ntype; }
  friend bool operator!=(const Name& a, const Name& b) { return !(a == b); }
  friend bool operator<(const Name& a, const Name& b) {
    return a.id != b.id ? a.id < b.id : a.ntype < b.ntype;
  }
};

// Composition of swappings.  pi = [s1, ..., sn] acts as s1 . (s2 . ( ... sn . t)).
class Permutation {
 public:
  std::vector<std::pair<Name, Name>> swaps;

  Permutation() = default;
  explicit Permutation(std::vector<std::pair<Name, Name>> s);
  static Permutation swap(const Name& a, const Name& b) { return Permutation({{a, b}}); }

  Name apply(const Name& n) const;
  Permutation inverse() const;
  // (this o other): apply other first, then this
  Permutation compose(const Permutation& other) const;
  bool empty() const { return swaps.empty(); }
  std::set<Name> support() const;
  // Names on which the two permutations disagree.
  static std::set<Name> disagreement(const Permutation& p, const Permutation& q);
  // A permutation mapping from[i] to to[i]; both lists injective and type-matched.
  static Permutation from_injection(const std::vector<Name>& from, const std::vector<Name>& to);

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.swaps == b.swaps; }
};

enum class TermKind { NameRef, Var, App, Swap, Abs };

class Term;
struct TermNode;

class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}

  static Term name(Name n);
  static Term var(std::string id, Type type, Permutation susp = {});
  static Term app(std::string f, std::vector<Term> args);
  static Term swap(Term l, Term r, Term body);
  static Term abs(Term binder, Term body);

  TermKind kind() const;
  const TermNode& operator*() const { return *node_; }
  const TermNode* operator->() const { return node_.get(); }
  bool valid() const { return node_ != nullptr; }

  bool is_name() const { return kind() == TermKind::NameRef; }
  bool is_var() const { return kind() == TermKind::Var; }
  bool ground() const;
  int size() const;
  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) { return a.str() < b.str(); }

 private:
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  Name name;              // NameRef
  std::string var;        // Var id
  Type type;              // Var type
  Permutation susp;       // Var suspension (unifier internal; empty in source)
  std::string fn;         // App
  std::vector<Term> args; // App args; Swap {l, r, body}; Abs {binder, body}
};

enum class GoalKind { Top, Atom, Fresh, Eq, And, Or, Exists, New, DotEq };

class Goal;
struct GoalNode;

class Goal {
 public:
  Goal() = default;
  explicit Goal(std::shared_ptr<const GoalNode> n) : node_(std::move(n)) {}

  static Goal top();
  static Goal atom(std::string pred, std::vector<Term> args);
  static Goal fresh(Term l, Term r);
  static Goal eq(Term l, Term r);
  static Goal conj(Goal a, Goal b);
  static Goal disj(Goal a, Goal b);
  static Goal exists(std::string var, Type type, Goal body);
  static Goal fresh_name(Name name, Goal body);  // the new-quantifier
  // Distinguished hoisting goal lhs =. rhs (translator IR only).
  static Goal doteq(Term lhs, Term rhs);

  GoalKind kind() const;
  const GoalNode& operator*() const { return *node_; }
  const GoalNode* operator->() const { return node_.get(); }
  bool valid() const { return node_ != nullptr; }
  bool ground() const;
  std::string str() const;

 private:
  std::shared_ptr<const GoalNode> node_;
};

struct GoalNode {
  GoalKind kind;
  std::string pred;        // Atom
  std::vector<Term> args;  // Atom args; Fresh/Eq/DotEq {l, r}
  Goal left, right;        // And/Or
  std::string var;         // Exists
  Type type;               // Exists
  Name name;               // New
  Goal body;               // Exists/New
};

struct TypedVar {
  std::string id;
  Type type;
  friend bool operator==(const TypedVar& a, const TypedVar& b) { return a.id == b.id && a.type == b.type; }
};

struct ProgramClause {
  std::vector<Name> new_names;
  std::vector<TypedVar> universals;
  std::string pred;
  std::vector<Term> head;
  Goal body;

  std::string str() const;
};

struct Program {
  Signature sig;
  std::vector<ProgramClause> clauses;
};

// Ground substitution, variable id -> term.
using NSubst = std::map<std::string, Term>;

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line), col(col) {}
  int line, col;
};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WellFormednessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structural helpers shared by the relations, the engines and the translator.
std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Goal& g);
// Every name occurring syntactically (including under abstractions).
std::set<Name> names_of(const Term& t);
// Names occurring in a goal except those bound by the new-quantifier.
std::set<Name> names_of(const Goal& g);
void collect_names(const ProgramClause& c, std::set<Name>& out);
// Type of a term under a signature; throws TypeError.
Type type_of(const Signature& sig, const Term& t);
// Checks that Swap/Abs binders are names.
bool name_restricted(const Term& t);
bool name_restricted(const Goal& g);
bool name_restricted(const ProgramClause& c);

// For each base or name type, the name types whose names can occur in its
// inhabitants (reflexive-transitive closure over constructor argument types;
// an abstraction type <nu>body contributes nu and whatever body reaches).
std::map<std::string, std::set<std::string>> name_reachability(const Signature& sig);
bool type_reaches(const std::map<std::string, std::set<std::string>>& reach, const Type& t,
                  const std::string& nu);

// Generated identifiers carry '$', which the source lexer rejects.
std::string fresh_id(const std::string& stem, unsigned long long counter);
std::string id_stem(const std::string& id);

}  // namespace nomhoas::nominal
