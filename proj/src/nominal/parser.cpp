#include "nomhoas/nominal/parser.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "nomhoas/common/lexer.hpp"

namespace nomhoas::nominal {

namespace {

// ------------------------------------------------------------ raw syntax

struct RTerm {
  enum Kind { Id, App, Swap, Abs } kind;
  Token tok;
  std::vector<RTerm> args;
};

struct RGoal {
  enum Kind { Top, Atom, Fresh, Eq, And, Or, Exists, New } kind;
  Token tok;
  std::vector<RTerm> args;  // Atom: single Id/App term; Fresh/Eq: {l, r}
  std::vector<RGoal> subs;
};

const std::set<std::string> kKeywords = {"true", "exists", "new", "forall", "nametype", "kind", "func", "pred"};

class RawParser {
 public:
  explicit RawParser(TokenStream& ts) : ts_(ts) {}

  RTerm term() {
    const Token& t = ts_.peek();
    if (ts_.is("<")) {
      ts_.next();
      RTerm b = term();
      ts_.expect(">");
      RTerm body = term();
      return RTerm{RTerm::Abs, t, {std::move(b), std::move(body)}};
    }
    if (ts_.is("(")) {
      ts_.next();
      RTerm l = term();
      if (ts_.accept(")")) return l;
      ts_.expect("~");
      RTerm r = term();
      ts_.expect(")");
      ts_.expect("*");
      RTerm body = term();
      return RTerm{RTerm::Swap, t, {std::move(l), std::move(r), std::move(body)}};
    }
    if (!ts_.is_ident()) ts_.fail("expected a term but found '" + t.text + "'");
    if (kKeywords.count(t.text)) ts_.fail("unexpected keyword '" + t.text + "'");
    Token id = ts_.next();
    if (ts_.is("(") && !is_upper_id(id.text)) {
      ts_.next();
      RTerm app{RTerm::App, id, {}};
      app.args.push_back(term());
      while (ts_.accept(",")) app.args.push_back(term());
      ts_.expect(")");
      return app;
    }
    return RTerm{RTerm::Id, id, {}};
  }

  RGoal goal() {
    RGoal l = conj();
    if (ts_.is(";")) {
      Token t = ts_.next();
      RGoal r = goal();
      return RGoal{RGoal::Or, t, {}, {std::move(l), std::move(r)}};
    }
    return l;
  }

  RGoal atom_goal() {
    Token t = ts_.peek();
    RTerm a = term();
    return to_atom(std::move(a), t);
  }

 private:
  RGoal conj() {
    RGoal l = prim();
    if (ts_.is(",")) {
      Token t = ts_.next();
      RGoal r = conj();
      return RGoal{RGoal::And, t, {}, {std::move(l), std::move(r)}};
    }
    return l;
  }

  RGoal prim() {
    Token t = ts_.peek();
    if (ts_.is_keyword("true")) {
      ts_.next();
      return RGoal{RGoal::Top, t, {}, {}};
    }
    if (ts_.is_keyword("exists") || ts_.is_keyword("new")) {
      bool ex = t.text == "exists";
      ts_.next();
      const Token& v = ts_.expect_ident(ex ? "variable" : "name");
      if (ex != is_upper_id(v.text))
        TokenStream::fail_at(v, ex ? "exists binds an uppercase variable" : "new binds a lowercase name");
      RTerm id{RTerm::Id, v, {}};
      ts_.expect(".");
      RGoal body = goal();
      return RGoal{ex ? RGoal::Exists : RGoal::New, t, {std::move(id)}, {std::move(body)}};
    }
    if (ts_.is("(")) {
      // either a parenthesised goal or a relation whose left side is a swapping
      size_t m = ts_.mark();
      try {
        RTerm l = term();
        if (ts_.is("#") || ts_.is("=")) return relation(std::move(l), t);
      } catch (const SyntaxError&) {
      }
      ts_.reset(m);
      ts_.next();
      RGoal g = goal();
      ts_.expect(")");
      return g;
    }
    RTerm l = term();
    if (ts_.is("#") || ts_.is("=")) return relation(std::move(l), t);
    return to_atom(std::move(l), t);
  }

  RGoal relation(RTerm l, const Token& t) {
    bool fresh = ts_.is("#");
    ts_.next();
    RTerm r = term();
    return RGoal{fresh ? RGoal::Fresh : RGoal::Eq, t, {std::move(l), std::move(r)}, {}};
  }

  RGoal to_atom(RTerm a, const Token& t) {
    if ((a.kind != RTerm::Id && a.kind != RTerm::App) || is_upper_id(a.tok.text))
      TokenStream::fail_at(t, "expected an atomic goal");
    return RGoal{RGoal::Atom, t, {std::move(a)}, {}};
  }

  TokenStream& ts_;
};

// ------------------------------------------------------- type inference

class Infer {
 public:
  int meta() { return add({Node::Meta, "", -1, -1}); }
  int base(const std::string& id) { return add({Node::Base, id, -1, -1}); }
  int abs(int nu, int body) { return add({Node::Abs, "", nu, body}); }
  int from_type(const Type& t) {
    if (!t.is_abs()) return base(t.id);
    return abs(base(t.id), from_type(*t.body));
  }

  int find(int i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  bool unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    Node& x = nodes_[a];
    Node& y = nodes_[b];
    if (x.kind == Node::Meta) {
      if (occurs(a, b)) return false;
      parent_[a] = b;
      return true;
    }
    if (y.kind == Node::Meta) {
      if (occurs(b, a)) return false;
      parent_[b] = a;
      return true;
    }
    if (x.kind != y.kind) return false;
    if (x.kind == Node::Base) return x.id == y.id;
    int xn = x.nu, xb = x.body, yn = y.nu, yb = y.body;
    return unify(xn, yn) && unify(xb, yb);
  }

  // Fully resolved type, or nullopt if a metavariable remains.
  std::optional<Type> resolve(int i) {
    i = find(i);
    const Node& n = nodes_[i];
    if (n.kind == Node::Meta) return std::nullopt;
    if (n.kind == Node::Base) return Type::atom(n.id);
    auto nu = resolve(n.nu);
    auto body = resolve(n.body);
    if (!nu || !body || nu->is_abs()) return std::nullopt;
    return Type::abs(nu->id, *body);
  }

  bool is_meta(int i) { return nodes_[find(i)].kind == Node::Meta; }

  std::string show(int i) {
    auto t = resolve(i);
    return t ? t->str() : "?";
  }

 private:
  struct Node {
    enum Kind { Meta, Base, Abs } kind;
    std::string id;
    int nu, body;
  };

  int add(Node n) {
    nodes_.push_back(std::move(n));
    parent_.push_back(static_cast<int>(parent_.size()));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool occurs(int m, int t) {
    t = find(t);
    if (t == m) return true;
    const Node& n = nodes_[t];
    if (n.kind != Node::Abs) return false;
    return occurs(m, n.nu) || occurs(m, n.body);
  }

  std::vector<Node> nodes_;
  std::vector<int> parent_;
};

std::string meta_tag(int m) { return "?" + std::to_string(m); }

// Elaborates raw syntax into terms and goals whose types are placeholders
// "?k" (k an inference node), then rewrites placeholders to real types.
class Elaborator {
 public:
  Elaborator(const Signature& sig, bool explicit_mode, bool allow_free_vars)
      : sig_(sig), explicit_(explicit_mode), allow_free_vars_(allow_free_vars) {}

  struct Binding {
    std::string id;
    int meta;
  };

  std::vector<Binding> free_vars, free_names;
  std::vector<Binding> scope_vars, scope_names;  // innermost last

  void declare_universal(const Token& t) {
    if (find(free_vars, t.text)) TokenStream::fail_at(t, "variable '" + t.text + "' bound twice");
    free_vars.push_back({t.text, infer.meta()});
  }
  void declare_new(const Token& t) {
    if (find(free_names, t.text)) TokenStream::fail_at(t, "name '" + t.text + "' bound twice");
    int m = infer.meta();
    free_names.push_back({t.text, m});
    name_constraints_.push_back({m, t});
  }

  Term term(const RTerm& r, int expected) {
    switch (r.kind) {
      case RTerm::Id: return ident(r.tok, expected);
      case RTerm::App: {
        auto it = sig_.funcs.find(r.tok.text);
        if (it == sig_.funcs.end()) throw TypeError(where(r.tok) + "undeclared function symbol '" + r.tok.text + "'");
        const FuncSym& f = it->second;
        if (f.args.size() != r.args.size())
          throw TypeError(where(r.tok) + "function symbol '" + r.tok.text + "' expects " +
                          std::to_string(f.args.size()) + " arguments");
        unify(expected, infer.base(f.result), r.tok);
        std::vector<Term> args;
        for (size_t i = 0; i < r.args.size(); ++i) args.push_back(term(r.args[i], infer.from_type(f.args[i])));
        return Term::app(r.tok.text, std::move(args));
      }
      case RTerm::Swap: {
        int nu = infer.meta();
        name_constraints_.push_back({nu, r.tok});
        Term l = term(r.args[0], nu);
        Term rr = term(r.args[1], nu);
        Term body = term(r.args[2], expected);
        return Term::swap(std::move(l), std::move(rr), std::move(body));
      }
      case RTerm::Abs: {
        int nu = infer.meta();
        name_constraints_.push_back({nu, r.tok});
        int body_t = infer.meta();
        unify(expected, infer.abs(nu, body_t), r.tok);
        Term b = term(r.args[0], nu);
        Term body = term(r.args[1], body_t);
        return Term::abs(std::move(b), std::move(body));
      }
    }
    return {};
  }

  Goal goal(const RGoal& g) {
    switch (g.kind) {
      case RGoal::Top: return Goal::top();
      case RGoal::Atom: {
        const RTerm& a = g.args[0];
        auto it = sig_.preds.find(a.tok.text);
        if (it == sig_.preds.end()) throw TypeError(where(a.tok) + "undeclared predicate '" + a.tok.text + "'");
        if (it->second.size() != a.args.size())
          throw TypeError(where(a.tok) + "predicate '" + a.tok.text + "' expects " +
                          std::to_string(it->second.size()) + " arguments");
        std::vector<Term> args;
        for (size_t i = 0; i < a.args.size(); ++i) args.push_back(term(a.args[i], infer.from_type(it->second[i])));
        return Goal::atom(a.tok.text, std::move(args));
      }
      case RGoal::Fresh: {
        int nu = infer.meta();
        name_constraints_.push_back({nu, g.tok});
        Term l = term(g.args[0], nu);
        Term r = term(g.args[1], infer.meta());
        return Goal::fresh(std::move(l), std::move(r));
      }
      case RGoal::Eq: {
        int t = infer.meta();
        Term l = term(g.args[0], t);
        Term r = term(g.args[1], t);
        return Goal::eq(std::move(l), std::move(r));
      }
      case RGoal::And: return Goal::conj(goal(g.subs[0]), goal(g.subs[1]));
      case RGoal::Or: return Goal::disj(goal(g.subs[0]), goal(g.subs[1]));
      case RGoal::Exists: {
        int m = infer.meta();
        scope_vars.push_back({g.args[0].tok.text, m});
        Goal body = goal(g.subs[0]);
        scope_vars.pop_back();
        return Goal::exists(g.args[0].tok.text, Type::atom(meta_tag(m)), std::move(body));
      }
      case RGoal::New: {
        int m = infer.meta();
        name_constraints_.push_back({m, g.args[0].tok});
        scope_names.push_back({g.args[0].tok.text, m});
        Goal body = goal(g.subs[0]);
        scope_names.pop_back();
        return Goal::fresh_name(Name{g.args[0].tok.text, meta_tag(m)}, std::move(body));
      }
    }
    return {};
  }

  // Checks name-type constraints and defaults unconstrained name metas to
  // the unique name type when there is exactly one.
  void finish() {
    for (auto& [m, tok] : name_constraints_) {
      if (infer.is_meta(m) && sig_.name_types.size() == 1) infer.unify(m, infer.base(*sig_.name_types.begin()));
      auto t = infer.resolve(m);
      if (!t) throw TypeError(where(tok) + "cannot infer the name type of '" + tok.text + "'");
      if (t->is_abs() || !sig_.is_name_type(t->id))
        throw TypeError(where(tok) + "'" + tok.text + "' must have a name type, not " + t->str());
    }
  }

  Type type_of_meta(int m, const std::string& what) {
    auto t = infer.resolve(m);
    if (!t) throw TypeError("cannot infer the type of '" + what + "'");
    return *t;
  }

  Type fix_type(const Type& t, const std::string& what) {
    if (!t.id.empty() && t.id[0] == '?' && !t.is_abs()) return type_of_meta(std::stoi(t.id.substr(1)), what);
    return t;
  }

  Name fix_name(const Name& n) {
    Type t = fix_type(Type::atom(n.ntype), n.id);
    return Name{n.id, t.id};
  }

  Term fix(const Term& t) {
    switch (t.kind()) {
      case TermKind::NameRef: return Term::name(fix_name(t->name));
      case TermKind::Var: return Term::var(t->var, fix_type(t->type, t->var));
      case TermKind::App: {
        std::vector<Term> args;
        for (const auto& a : t->args) args.push_back(fix(a));
        return Term::app(t->fn, std::move(args));
      }
      case TermKind::Swap: return Term::swap(fix(t->args[0]), fix(t->args[1]), fix(t->args[2]));
      case TermKind::Abs: return Term::abs(fix(t->args[0]), fix(t->args[1]));
    }
    return t;
  }

  Goal fix(const Goal& g) {
    auto fix_args = [&]() {
      std::vector<Term> args;
      for (const auto& a : g->args) args.push_back(fix(a));
      return args;
    };
    switch (g.kind()) {
      case GoalKind::Top: return g;
      case GoalKind::Atom: return Goal::atom(g->pred, fix_args());
      case GoalKind::Fresh: { auto a = fix_args(); return Goal::fresh(a[0], a[1]); }
      case GoalKind::Eq: { auto a = fix_args(); return Goal::eq(a[0], a[1]); }
      case GoalKind::DotEq: { auto a = fix_args(); return Goal::doteq(a[0], a[1]); }
      case GoalKind::And: return Goal::conj(fix(g->left), fix(g->right));
      case GoalKind::Or: return Goal::disj(fix(g->left), fix(g->right));
      case GoalKind::Exists: return Goal::exists(g->var, fix_type(g->type, g->var), fix(g->body));
      case GoalKind::New: return Goal::fresh_name(fix_name(g->name), fix(g->body));
    }
    return g;
  }

  Infer infer;

 private:
  static const Binding* find_rev(const std::vector<Binding>& v, const std::string& id) {
    for (auto it = v.rbegin(); it != v.rend(); ++it)
      if (it->id == id) return &*it;
    return nullptr;
  }
  static const Binding* find(const std::vector<Binding>& v, const std::string& id) { return find_rev(v, id); }

  static std::string where(const Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.col) + ": "; }

  void unify(int a, int b, const Token& t) {
    if (!infer.unify(a, b))
      throw TypeError(where(t) + "type mismatch at '" + t.text + "': " + infer.show(a) + " vs " + infer.show(b));
  }

  Term ident(const Token& t, int expected) {
    const std::string& id = t.text;
    if (is_upper_id(id)) {
      const Binding* b = find_rev(scope_vars, id);
      if (!b) b = find(free_vars, id);
      if (!b) {
        if (explicit_) throw WellFormednessError(where(t) + "variable '" + id + "' is not bound by the clause");
        if (!allow_free_vars_) throw WellFormednessError(where(t) + "free variable '" + id + "'");
        free_vars.push_back({id, infer.meta()});
        b = &free_vars.back();
      }
      unify(expected, b->meta, t);
      return Term::var(id, Type::atom(meta_tag(b->meta)));
    }
    if (const Binding* b = find_rev(scope_names, id)) {
      unify(expected, b->meta, t);
      return Term::name(Name{id, meta_tag(b->meta)});
    }
    auto f = sig_.funcs.find(id);
    if (f != sig_.funcs.end()) {
      if (!f->second.args.empty())
        throw TypeError(where(t) + "function symbol '" + id + "' expects " +
                        std::to_string(f->second.args.size()) + " arguments");
      unify(expected, infer.base(f->second.result), t);
      return Term::app(id, {});
    }
    const Binding* b = find(free_names, id);
    if (!b) {
      if (explicit_) throw WellFormednessError(where(t) + "name '" + id + "' is not bound by the clause");
      int m = infer.meta();
      free_names.push_back({id, m});
      name_constraints_.push_back({m, t});
      b = &free_names.back();
    }
    unify(expected, b->meta, t);
    return Term::name(Name{id, meta_tag(b->meta)});
  }

  const Signature& sig_;
  bool explicit_;
  bool allow_free_vars_;
  std::vector<std::pair<int, Token>> name_constraints_;
};

// ------------------------------------------------------------ declarations

Type parse_type(TokenStream& ts) {
  if (ts.accept("<")) {
    std::string nu = ts.expect_ident("name type").text;
    ts.expect(">");
    return Type::abs(nu, parse_type(ts));
  }
  return Type::atom(ts.expect_ident("type").text);
}

bool is_decl_start(const TokenStream& ts) {
  static const char* kw[] = {"nametype", "kind", "func", "pred"};
  for (const char* k : kw)
    if (ts.is_keyword(k) && ts.peek(1).kind == Tok::Ident) return true;
  return false;
}

void parse_decl(TokenStream& ts, Signature& sig) {
  Token kw = ts.next();
  Token id = ts.expect_ident();
  try {
    if (kw.text == "nametype") {
      sig.declare_name_type(id.text);
    } else if (kw.text == "kind") {
      sig.declare_base_type(id.text);
    } else if (kw.text == "func") {
      ts.expect(":");
      std::vector<Type> tys{parse_type(ts)};
      while (ts.accept(",")) tys.push_back(parse_type(ts));
      if (ts.accept("->")) {
        sig.declare_func(id.text, std::move(tys), ts.expect_ident("result type").text);
      } else {
        if (tys.size() != 1 || tys[0].is_abs()) ts.fail("expected '->'");
        sig.declare_func(id.text, {}, tys[0].id);
      }
    } else {
      std::vector<Type> tys;
      if (ts.accept(":")) {
        tys.push_back(parse_type(ts));
        while (ts.accept(",")) tys.push_back(parse_type(ts));
      }
      sig.declare_pred(id.text, std::move(tys));
    }
  } catch (const TypeError& e) {
    throw TypeError(std::to_string(id.line) + ":" + std::to_string(id.col) + ": " + e.what());
  }
  if (kKeywords.count(id.text)) TokenStream::fail_at(id, "keyword '" + id.text + "' cannot be declared");
  ts.expect(".");
}

ProgramClause parse_clause(TokenStream& ts, const Signature& sig) {
  std::vector<Token> news, foralls;
  bool explicit_mode = false;
  while (ts.is_keyword("new") || ts.is_keyword("forall")) {
    explicit_mode = true;
    bool is_new = ts.next().text == "new";
    do {
      const Token& v = ts.expect_ident();
      if (is_new == is_upper_id(v.text))
        TokenStream::fail_at(v, is_new ? "new binds a lowercase name" : "forall binds an uppercase variable");
      (is_new ? news : foralls).push_back(v);
    } while (ts.accept(","));
    ts.expect(".");
  }
  RawParser rp(ts);
  RGoal head = rp.atom_goal();
  std::optional<RGoal> body;
  if (ts.accept(":-")) body = rp.goal();
  ts.expect(".");

  Elaborator el(sig, explicit_mode, true);
  for (const auto& t : news) el.declare_new(t);
  for (const auto& t : foralls) el.declare_universal(t);
  Goal h = el.goal(head);
  Goal b = body ? el.goal(*body) : Goal::top();
  el.finish();

  ProgramClause c;
  c.pred = h->pred;
  Goal hf = el.fix(h);
  c.head = hf->args;
  c.body = el.fix(b);
  for (const auto& n : el.free_names) c.new_names.push_back(el.fix_name(Name{n.id, meta_tag(n.meta)}));
  for (const auto& v : el.free_vars) c.universals.push_back({v.id, el.type_of_meta(v.meta, v.id)});
  return c;
}

bool goal_struct_eq(const Goal& a, const Goal& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case GoalKind::Top: return true;
    case GoalKind::Atom:
      if (a->pred != b->pred) return false;
      [[fallthrough]];
    case GoalKind::Fresh:
    case GoalKind::Eq:
    case GoalKind::DotEq: return a->args == b->args;
    case GoalKind::And:
    case GoalKind::Or: return goal_struct_eq(a->left, b->left) && goal_struct_eq(a->right, b->right);
    case GoalKind::Exists: return a->var == b->var && a->type == b->type && goal_struct_eq(a->body, b->body);
    case GoalKind::New: return a->name == b->name && goal_struct_eq(a->body, b->body);
  }
  return false;
}

void term_order(const Term& t, std::vector<Name>& names, std::vector<std::string>& vars,
                std::vector<std::string>& bound_vars) {
  switch (t.kind()) {
    case TermKind::NameRef:
      if (std::find(names.begin(), names.end(), t->name) == names.end()) names.push_back(t->name);
      break;
    case TermKind::Var:
      if (std::find(bound_vars.begin(), bound_vars.end(), t->var) == bound_vars.end() &&
          std::find(vars.begin(), vars.end(), t->var) == vars.end())
        vars.push_back(t->var);
      break;
    default:
      for (const auto& a : t->args) term_order(a, names, vars, bound_vars);
  }
}

// First-occurrence order of free names and variables, as the implicit
// convention would assign them.
void goal_order(const Goal& g, std::vector<Name>& names, std::vector<std::string>& vars,
                std::vector<std::string>& bound_vars, std::vector<Name>& bound_names) {
  switch (g.kind()) {
    case GoalKind::Top: break;
    case GoalKind::Atom:
    case GoalKind::Fresh:
    case GoalKind::Eq:
    case GoalKind::DotEq:
      for (const auto& a : g->args) {
        std::vector<Name> ns;
        term_order(a, ns, vars, bound_vars);
        for (const auto& n : ns)
          if (std::find(bound_names.begin(), bound_names.end(), n) == bound_names.end() &&
              std::find(names.begin(), names.end(), n) == names.end())
            names.push_back(n);
      }
      break;
    case GoalKind::And:
    case GoalKind::Or:
      goal_order(g->left, names, vars, bound_vars, bound_names);
      goal_order(g->right, names, vars, bound_vars, bound_names);
      break;
    case GoalKind::Exists:
      bound_vars.push_back(g->var);
      goal_order(g->body, names, vars, bound_vars, bound_names);
      bound_vars.pop_back();
      break;
    case GoalKind::New:
      bound_names.push_back(g->name);
      goal_order(g->body, names, vars, bound_vars, bound_names);
      bound_names.pop_back();
      break;
  }
}

}  // namespace

Program parse_program(std::string_view text) {
  TokenStream ts(tokenize(text));
  Program p;
  while (!ts.at_end()) {
    if (is_decl_start(ts)) parse_decl(ts, p.sig);
    else p.clauses.push_back(parse_clause(ts, p.sig));
  }
  return p;
}

Goal parse_goal(std::string_view text, const Signature& sig, bool allow_generated) {
  TokenStream ts(tokenize(text, allow_generated));
  RawParser rp(ts);
  RGoal g = rp.goal();
  ts.accept(".");
  if (!ts.at_end()) ts.fail("unexpected '" + ts.peek().text + "' after goal");
  Elaborator el(sig, false, true);
  Goal out = el.goal(g);
  el.finish();
  return el.fix(out);
}

Term parse_term(std::string_view text, const Signature& sig, const Type& expected, bool allow_generated) {
  TokenStream ts(tokenize(text, allow_generated));
  RawParser rp(ts);
  RTerm r = rp.term();
  if (!ts.at_end()) ts.fail("unexpected '" + ts.peek().text + "' after term");
  Elaborator el(sig, false, true);
  Term out = el.term(r, el.infer.from_type(expected));
  el.finish();
  return el.fix(out);
}

std::string print_signature(const Signature& sig) {
  std::ostringstream os;
  for (const auto& n : sig.name_types) os << "nametype " << n << ".\n";
  for (const auto& b : sig.base_types) os << "kind " << b << ".\n";
  for (const auto& f : sig.func_order) {
    const FuncSym& fs = sig.funcs.at(f);
    os << "func " << f << " : ";
    for (size_t i = 0; i < fs.args.size(); ++i) os << (i ? ", " : "") << fs.args[i].str();
    os << (fs.args.empty() ? "" : " -> ") << fs.result << ".\n";
  }
  for (const auto& [p, args] : sig.preds) {
    os << "pred " << p;
    for (size_t i = 0; i < args.size(); ++i) os << (i ? ", " : " : ") << args[i].str();
    os << ".\n";
  }
  return os.str();
}

std::string print_clause(const ProgramClause& c) {
  std::vector<Name> names;
  std::vector<std::string> vars, bv;
  std::vector<Name> bn;
  goal_order(Goal::conj(Goal::atom(c.pred, c.head), c.body), names, vars, bv, bn);
  std::vector<std::string> uvars;
  for (const auto& u : c.universals) uvars.push_back(u.id);
  std::string prefix;
  if (names != c.new_names || vars != uvars) {
    if (!c.new_names.empty()) {
      prefix += "new ";
      for (size_t i = 0; i < c.new_names.size(); ++i) prefix += (i ? ", " : "") + c.new_names[i].id;
      prefix += ". ";
    }
    if (!c.universals.empty()) {
      prefix += "forall ";
      for (size_t i = 0; i < c.universals.size(); ++i) prefix += (i ? ", " : "") + c.universals[i].id;
      prefix += ". ";
    }
  }
  return prefix + c.str();
}

std::string print_program(const Program& p) {
  std::string out = print_signature(p.sig);
  if (!p.clauses.empty()) out += "\n";
  for (const auto& c : p.clauses) out += print_clause(c) + "\n";
  return out;
}

bool operator==(const ProgramClause& a, const ProgramClause& b) {
  return a.new_names == b.new_names && a.universals == b.universals && a.pred == b.pred && a.head == b.head &&
         goal_struct_eq(a.body, b.body);
}

bool same_program(const Program& a, const Program& b) {
  const Signature &s = a.sig, &t = b.sig;
  if (s.name_types != t.name_types || s.base_types != t.base_types || s.preds != t.preds) return false;
  if (s.funcs.size() != t.funcs.size()) return false;
  for (const auto& [f, fs] : s.funcs) {
    auto it = t.funcs.find(f);
    if (it == t.funcs.end() || it->second.args != fs.args || it->second.result != fs.result) return false;
  }
  return a.clauses == b.clauses;
}

}  // namespace nomhoas::nominal
