#include "nomhoas/nominal/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace nomhoas::nominal {

// ---------------------------------------------------------------- types

std::string Type::str() const {
  if (!body) return id;
  return "<" + id + ">" + body->str();
}

bool operator==(const Type& a, const Type& b) {
  if (a.id != b.id) return false;
  if (!a.body || !b.body) return !a.body && !b.body;
  return *a.body == *b.body;
}

bool operator<(const Type& a, const Type& b) { return a.str() < b.str(); }

bool Signature::is_declared_type(const Type& t) const {
  if (t.is_abs()) return is_name_type(t.id) && is_declared_type(*t.body);
  return name_types.count(t.id) || base_types.count(t.id);
}

void Signature::declare_name_type(const std::string& id) {
  if (base_types.count(id) || name_types.count(id))
    throw TypeError("type '" + id + "' declared twice");
  name_types.insert(id);
}

void Signature::declare_base_type(const std::string& id) {
  if (base_types.count(id) || name_types.count(id))
    throw TypeError("type '" + id + "' declared twice");
  base_types.insert(id);
}

void Signature::declare_func(const std::string& f, std::vector<Type> args, const std::string& result) {
  if (funcs.count(f) || preds.count(f)) throw TypeError("symbol '" + f + "' declared twice");
  for (const auto& a : args)
    if (!is_declared_type(a)) throw TypeError("undeclared type '" + a.str() + "' in declaration of '" + f + "'");
  if (is_name_type(result))
    throw TypeError("function symbol '" + f + "' cannot produce name type '" + result + "'");
  if (!base_types.count(result)) throw TypeError("undeclared type '" + result + "' in declaration of '" + f + "'");
  funcs[f] = FuncSym{std::move(args), result};
  func_order.push_back(f);
}

void Signature::declare_pred(const std::string& p, std::vector<Type> args) {
  if (funcs.count(p) || preds.count(p)) throw TypeError("symbol '" + p + "' declared twice");
  for (const auto& a : args)
    if (!is_declared_type(a)) throw TypeError("undeclared type '" + a.str() + "' in declaration of '" + p + "'");
  preds[p] = std::move(args);
}

// ---------------------------------------------------------- permutations

Permutation::Permutation(std::vector<std::pair<Name, Name>> s) : swaps(std::move(s)) {
  for (const auto& [a, b] : swaps)
    if (a.ntype != b.ntype)
      throw TypeError("cannot swap names of different types: " + a.id + " and " + b.id);
}

Name Permutation::apply(const Name& n) const {
  Name r = n;
  for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
    if (r == it->first) r = it->second;
    else if (r == it->second) r = it->first;
  }
  return r;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.swaps.assign(swaps.rbegin(), swaps.rend());
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  Permutation p = *this;
  p.swaps.insert(p.swaps.end(), other.swaps.begin(), other.swaps.end());
  return p;
}

std::set<Name> Permutation::support() const {
  std::set<Name> out;
  for (const auto& [a, b] : swaps) {
    if (apply(a) != a) out.insert(a);
    if (apply(b) != b) out.insert(b);
  }
  return out;
}

std::set<Name> Permutation::disagreement(const Permutation& p, const Permutation& q) {
  std::set<Name> cand;
  for (const auto& [a, b] : p.swaps) { cand.insert(a); cand.insert(b); }
  for (const auto& [a, b] : q.swaps) { cand.insert(a); cand.insert(b); }
  std::set<Name> out;
  for (const auto& n : cand)
    if (p.apply(n) != q.apply(n)) out.insert(n);
  return out;
}

Permutation Permutation::from_injection(const std::vector<Name>& from, const std::vector<Name>& to) {
  // Build the explicit bijection on from u to, then decompose into swaps.
  std::map<Name, Name> f;
  std::set<Name> dom(from.begin(), from.end()), cod(to.begin(), to.end());
  for (size_t i = 0; i < from.size(); ++i) {
    if (from[i].ntype != to[i].ntype) throw TypeError("permutation must preserve name types");
    f[from[i]] = to[i];
  }
  std::set<Name> all = dom;
  all.insert(cod.begin(), cod.end());
  // Leftover domain elements (in to \ from) map onto leftover targets (from \ to), per type.
  std::map<std::string, std::vector<Name>> spare_dom, spare_cod;
  for (const auto& n : all) {
    if (!dom.count(n)) spare_dom[n.ntype].push_back(n);
    if (!cod.count(n)) spare_cod[n.ntype].push_back(n);
  }
  for (auto& [ty, ds] : spare_dom) {
    auto& cs = spare_cod[ty];
    for (size_t i = 0; i < ds.size(); ++i) f[ds[i]] = cs.at(i);
  }
  // Cycle decomposition: (c1 c2 ... ck) = (c1 c2)(c2 c3)...(c_{k-1} c_k) applied right to left.
  Permutation p;
  std::set<Name> seen;
  for (const auto& [start, _] : f) {
    if (seen.count(start)) continue;
    std::vector<Name> cycle;
    Name cur = start;
    while (!seen.count(cur)) {
      seen.insert(cur);
      cycle.push_back(cur);
      cur = f.at(cur);
    }
    // cycle: c0 -> c1 -> ... -> c_{k-1} -> c0.
    // (c0 c1) . (c1 c2) ... applied right-to-left maps c0 to c1 when the
    // rightmost-first list is [(c0 ck-1), ..., (c0 c1)]; build directly.
    for (size_t i = cycle.size(); i-- > 1;) p.swaps.emplace_back(cycle[0], cycle[i]);
  }
  return p;
}

// ---------------------------------------------------------------- terms

Term Term::name(Name n) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::NameRef;
  node->name = std::move(n);
  return Term(node);
}

Term Term::var(std::string id, Type type, Permutation susp) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Var;
  node->var = std::move(id);
  node->type = std::move(type);
  node->susp = std::move(susp);
  return Term(node);
}

Term Term::app(std::string f, std::vector<Term> args) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::App;
  node->fn = std::move(f);
  node->args = std::move(args);
  return Term(node);
}

Term Term::swap(Term l, Term r, Term body) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Swap;
  node->args = {std::move(l), std::move(r), std::move(body)};
  return Term(node);
}

Term Term::abs(Term binder, Term body) {
  auto node = std::make_shared<TermNode>();
  node->kind = TermKind::Abs;
  node->args = {std::move(binder), std::move(body)};
  return Term(node);
}

TermKind Term::kind() const { return node_->kind; }

bool Term::ground() const {
  if (kind() == TermKind::Var) return false;
  for (const auto& a : node_->args)
    if (!a.ground()) return false;
  return true;
}

int Term::size() const {
  int n = 1;
  for (const auto& a : node_->args) n += a.size();
  return n;
}

namespace {

void print_perm(std::ostream& os, const Permutation& p) {
  for (const auto& [a, b] : p.swaps) os << "(" << a.id << " ~ " << b.id << ") * ";
}

void print_term(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::NameRef: os << t->name.id; break;
    case TermKind::Var:
      print_perm(os, t->susp);
      os << t->var;
      break;
    case TermKind::App:
      os << t->fn;
      if (!t->args.empty()) {
        os << "(";
        for (size_t i = 0; i < t->args.size(); ++i) {
          if (i) os << ", ";
          print_term(os, t->args[i]);
        }
        os << ")";
      }
      break;
    case TermKind::Swap:
      os << "(";
      print_term(os, t->args[0]);
      os << " ~ ";
      print_term(os, t->args[1]);
      os << ") * ";
      print_term(os, t->args[2]);
      break;
    case TermKind::Abs:
      os << "<";
      print_term(os, t->args[0]);
      os << "> ";
      print_term(os, t->args[1]);
      break;
  }
}

}  // namespace

std::string Term::str() const {
  std::ostringstream os;
  print_term(os, *this);
  return os.str();
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::NameRef: return a->name == b->name;
    case TermKind::Var: return a->var == b->var && a->susp == b->susp;
    case TermKind::App:
      if (a->fn != b->fn) return false;
      break;
    default: break;
  }
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!(a->args[i] == b->args[i])) return false;
  return true;
}

// ---------------------------------------------------------------- goals

namespace {
std::shared_ptr<GoalNode> goal_node(GoalKind k) {
  auto n = std::make_shared<GoalNode>();
  n->kind = k;
  return n;
}
}  // namespace

Goal Goal::top() { return Goal(goal_node(GoalKind::Top)); }

Goal Goal::atom(std::string pred, std::vector<Term> args) {
  auto n = goal_node(GoalKind::Atom);
  n->pred = std::move(pred);
  n->args = std::move(args);
  return Goal(n);
}

Goal Goal::fresh(Term l, Term r) {
  auto n = goal_node(GoalKind::Fresh);
  n->args = {std::move(l), std::move(r)};
  return Goal(n);
}

Goal Goal::eq(Term l, Term r) {
  auto n = goal_node(GoalKind::Eq);
  n->args = {std::move(l), std::move(r)};
  return Goal(n);
}

Goal Goal::doteq(Term l, Term r) {
  auto n = goal_node(GoalKind::DotEq);
  n->args = {std::move(l), std::move(r)};
  return Goal(n);
}

Goal Goal::conj(Goal a, Goal b) {
  auto n = goal_node(GoalKind::And);
  n->left = std::move(a);
  n->right = std::move(b);
  return Goal(n);
}

Goal Goal::disj(Goal a, Goal b) {
  auto n = goal_node(GoalKind::Or);
  n->left = std::move(a);
  n->right = std::move(b);
  return Goal(n);
}

Goal Goal::exists(std::string var, Type type, Goal body) {
  auto n = goal_node(GoalKind::Exists);
  n->var = std::move(var);
  n->type = std::move(type);
  n->body = std::move(body);
  return Goal(n);
}

Goal Goal::fresh_name(Name name, Goal body) {
  auto n = goal_node(GoalKind::New);
  n->name = std::move(name);
  n->body = std::move(body);
  return Goal(n);
}

GoalKind Goal::kind() const { return node_->kind; }

bool Goal::ground() const { return free_vars(*this).empty(); }

namespace {

// Precedence: 0 = quantifier/or level, 1 = and, 2 = atomic.
int goal_prec(const Goal& g) {
  switch (g.kind()) {
    case GoalKind::Or: return 0;
    case GoalKind::And: return 1;
    case GoalKind::Exists:
    case GoalKind::New: return -1;
    default: return 2;
  }
}

void print_goal(std::ostream& os, const Goal& g);

void print_sub(std::ostream& os, const Goal& g, int min_prec) {
  if (goal_prec(g) < min_prec) {
    os << "(";
    print_goal(os, g);
    os << ")";
  } else {
    print_goal(os, g);
  }
}

void print_goal(std::ostream& os, const Goal& g) {
  switch (g.kind()) {
    case GoalKind::Top: os << "true"; break;
    case GoalKind::Atom:
      os << g->pred;
      if (!g->args.empty()) {
        os << "(";
        for (size_t i = 0; i < g->args.size(); ++i) {
          if (i) os << ", ";
          os << g->args[i].str();
        }
        os << ")";
      }
      break;
    case GoalKind::Fresh: os << g->args[0].str() << " # " << g->args[1].str(); break;
    case GoalKind::Eq: os << g->args[0].str() << " = " << g->args[1].str(); break;
    case GoalKind::DotEq: os << g->args[0].str() << " =. " << g->args[1].str(); break;
    case GoalKind::And:
      print_sub(os, g->left, 2);
      os << ", ";
      print_sub(os, g->right, 1);
      break;
    case GoalKind::Or:
      print_sub(os, g->left, 1);
      os << "; ";
      print_sub(os, g->right, 0);
      break;
    case GoalKind::Exists:
      os << "exists " << g->var << ". ";
      print_goal(os, g->body);
      break;
    case GoalKind::New:
      os << "new " << g->name.id << ". ";
      print_goal(os, g->body);
      break;
  }
}

}  // namespace

std::string Goal::str() const {
  std::ostringstream os;
  print_goal(os, *this);
  return os.str();
}

std::string ProgramClause::str() const {
  std::ostringstream os;
  os << Goal::atom(pred, head).str();
  if (body.kind() != GoalKind::Top) os << " :- " << body.str();
  os << ".";
  return os.str();
}

// ------------------------------------------------------------- helpers

namespace {

void fv_term(const Term& t, std::set<std::string>& out) {
  if (t.kind() == TermKind::Var) out.insert(t->var);
  for (const auto& a : t->args) fv_term(a, out);
}

void fv_goal(const Goal& g, std::set<std::string>& out) {
  switch (g.kind()) {
    case GoalKind::Top: break;
    case GoalKind::Atom:
    case GoalKind::Fresh:
    case GoalKind::Eq:
    case GoalKind::DotEq:
      for (const auto& a : g->args) fv_term(a, out);
      break;
    case GoalKind::And:
    case GoalKind::Or:
      fv_goal(g->left, out);
      fv_goal(g->right, out);
      break;
    case GoalKind::Exists: {
      std::set<std::string> inner;
      fv_goal(g->body, inner);
      inner.erase(g->var);
      out.insert(inner.begin(), inner.end());
      break;
    }
    case GoalKind::New: fv_goal(g->body, out); break;
  }
}

void names_term(const Term& t, std::set<Name>& out) {
  if (t.kind() == TermKind::NameRef) out.insert(t->name);
  if (t.kind() == TermKind::Var)
    for (const auto& [a, b] : t->susp.swaps) { out.insert(a); out.insert(b); }
  for (const auto& a : t->args) names_term(a, out);
}

void names_goal(const Goal& g, std::set<Name>& out) {
  switch (g.kind()) {
    case GoalKind::Top: break;
    case GoalKind::Atom:
    case GoalKind::Fresh:
    case GoalKind::Eq:
    case GoalKind::DotEq:
      for (const auto& a : g->args) names_term(a, out);
      break;
    case GoalKind::And:
    case GoalKind::Or:
      names_goal(g->left, out);
      names_goal(g->right, out);
      break;
    case GoalKind::Exists: names_goal(g->body, out); break;
    case GoalKind::New: {
      std::set<Name> inner;
      names_goal(g->body, inner);
      inner.erase(g->name);
      out.insert(inner.begin(), inner.end());
      break;
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  fv_term(t, out);
  return out;
}

std::set<std::string> free_vars(const Goal& g) {
  std::set<std::string> out;
  fv_goal(g, out);
  return out;
}

std::set<Name> names_of(const Term& t) {
  std::set<Name> out;
  names_term(t, out);
  return out;
}

std::set<Name> names_of(const Goal& g) {
  std::set<Name> out;
  names_goal(g, out);
  return out;
}

void collect_names(const ProgramClause& c, std::set<Name>& out) {
  for (const auto& t : c.head) names_term(t, out);
  names_goal(c.body, out);
}

Type type_of(const Signature& sig, const Term& t) {
  switch (t.kind()) {
    case TermKind::NameRef: return Type::atom(t->name.ntype);
    case TermKind::Var: return t->type;
    case TermKind::App: {
      auto it = sig.funcs.find(t->fn);
      if (it == sig.funcs.end()) throw TypeError("undeclared function symbol '" + t->fn + "'");
      return Type::atom(it->second.result);
    }
    case TermKind::Swap: return type_of(sig, t->args[2]);
    case TermKind::Abs: {
      Type b = type_of(sig, t->args[0]);
      return Type::abs(b.id, type_of(sig, t->args[1]));
    }
  }
  throw TypeError("unreachable");
}

bool name_restricted(const Term& t) {
  if (t.kind() == TermKind::Swap && (!t->args[0].is_name() || !t->args[1].is_name())) return false;
  if (t.kind() == TermKind::Abs && !t->args[0].is_name()) return false;
  for (const auto& a : t->args)
    if (!name_restricted(a)) return false;
  return true;
}

bool name_restricted(const Goal& g) {
  switch (g.kind()) {
    case GoalKind::Top: return true;
    case GoalKind::Fresh:
      if (!g->args[0].is_name()) return false;
      [[fallthrough]];
    case GoalKind::Atom:
    case GoalKind::Eq:
    case GoalKind::DotEq:
      for (const auto& a : g->args)
        if (!name_restricted(a)) return false;
      return true;
    case GoalKind::And:
    case GoalKind::Or: return name_restricted(g->left) && name_restricted(g->right);
    case GoalKind::Exists:
    case GoalKind::New: return name_restricted(g->body);
  }
  return true;
}

bool name_restricted(const ProgramClause& c) {
  for (const auto& t : c.head)
    if (!name_restricted(t)) return false;
  return name_restricted(c.body);
}

std::map<std::string, std::set<std::string>> name_reachability(const Signature& sig) {
  std::map<std::string, std::set<std::string>> reach;
  for (const auto& n : sig.name_types) reach[n] = {n};
  for (const auto& b : sig.base_types) reach[b];
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [f, fs] : sig.funcs) {
      auto& out = reach[fs.result];
      for (const auto& a : fs.args) {
        for (const Type* t = &a; t; t = t->body.get()) {
          for (const auto& nu : reach[t->id])
            if (out.insert(nu).second) changed = true;
        }
      }
    }
  }
  return reach;
}

bool type_reaches(const std::map<std::string, std::set<std::string>>& reach, const Type& t,
                  const std::string& nu) {
  for (const Type* p = &t; p; p = p->body.get()) {
    auto it = reach.find(p->id);
    if (it != reach.end() && it->second.count(nu)) return true;
  }
  return false;
}

std::string fresh_id(const std::string& stem, unsigned long long counter) {
  return id_stem(stem) + "$" + std::to_string(counter);
}

std::string id_stem(const std::string& id) {
  auto pos = id.find('$');
  return pos == std::string::npos ? id : id.substr(0, pos);
}

}  // namespace nomhoas::nominal
