#include "nomhoas/hoas/parser.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <optional>

#include "nomhoas/common/lexer.hpp"
#include "nomhoas/nominal/syntax.hpp"

namespace nomhoas::hoas {

using nominal::SyntaxError;

namespace {

// ------------------------------------------------------------ raw syntax

struct RT {
  enum Kind { Id, App, Lam } kind;
  Token tok;
  std::vector<RT> kids;  // App: head, args...; Lam: body
  // filled in by inference
  enum Res { Unresolved, LamVar, QuantVar, Const, Nom, Univ } res = Unresolved;
  int ity = -1;
};

struct RF {
  enum Kind { Top, Atom, Eq, And, Or, Exists, Nabla } kind;
  Token tok;
  std::vector<RT> terms;                 // Atom: {app}; Eq: {l, r}
  std::vector<RF> subs;
  std::vector<Token> vars;               // Exists/Nabla: binders, outermost first
  std::vector<int> var_ity;
};

const std::set<std::string> kKeywords = {"true", "exists", "nabla", "kind", "nominal", "type"};

class Raw {
 public:
  explicit Raw(TokenStream& ts) : ts_(ts) {}

  TyP type() {
    TyP l = type_atom();
    if (ts_.accept("->")) return arrow_ty(l, type());
    return l;
  }

  RT term() {
    if (ts_.is_ident() && ts_.is("\\", 1)) return lambda();
    RT head = atom();
    std::vector<RT> args;
    while (true) {
      if (ts_.is_ident() && ts_.is("\\", 1)) {
        args.push_back(lambda());
        break;
      }
      if (ts_.is("(") || (ts_.is_ident() && !kKeywords.count(ts_.peek().text))) {
        args.push_back(atom());
        continue;
      }
      break;
    }
    if (args.empty()) return head;
    RT app{RT::App, head.tok, {std::move(head)}};
    for (auto& a : args) app.kids.push_back(std::move(a));
    return app;
  }

  RF formula() {
    RF l = conj();
    if (ts_.is("\\/")) {
      Token t = ts_.next();
      RF r = formula();
      return RF{RF::Or, t, {}, {std::move(l), std::move(r)}, {}, {}};
    }
    return l;
  }

  RF atom_formula() {
    Token t = ts_.peek();
    RT a = term();
    return to_atom(std::move(a), t);
  }

 private:
  TyP type_atom() {
    if (ts_.accept("(")) {
      TyP t = type();
      ts_.expect(")");
      return t;
    }
    const Token& id = ts_.expect_ident("type");
    return is_upper_id(id.text) ? var_ty(id.text) : base_ty(id.text);
  }

  RT lambda() {
    Token v = ts_.next();
    if (kKeywords.count(v.text)) TokenStream::fail_at(v, "unexpected keyword '" + v.text + "'");
    ts_.expect("\\");
    RT body = term();
    return RT{RT::Lam, v, {std::move(body)}};
  }

  RT atom() {
    if (ts_.accept("(")) {
      RT t = term();
      ts_.expect(")");
      return t;
    }
    const Token& id = ts_.expect_ident("term");
    if (kKeywords.count(id.text)) TokenStream::fail_at(id, "unexpected keyword '" + id.text + "'");
    return RT{RT::Id, id, {}};
  }

  RF conj() {
    RF l = prim();
    if (ts_.is("/\\")) {
      Token t = ts_.next();
      RF r = conj();
      return RF{RF::And, t, {}, {std::move(l), std::move(r)}, {}, {}};
    }
    return l;
  }

  RF prim() {
    Token t = ts_.peek();
    if (ts_.is_keyword("true")) {
      ts_.next();
      return RF{RF::Top, t, {}, {}, {}, {}};
    }
    if (ts_.is_keyword("exists") || ts_.is_keyword("nabla")) {
      ts_.next();
      RF q{t.text == "exists" ? RF::Exists : RF::Nabla, t, {}, {}, {}, {}};
      do q.vars.push_back(ts_.expect_ident("variable"));
      while (ts_.is_ident());
      ts_.expect(",");
      q.subs.push_back(formula());
      return q;
    }
    if (ts_.is("(")) {
      size_t m = ts_.mark();
      try {
        RT l = term();
        if (ts_.is("=")) return equation(std::move(l), t);
      } catch (const SyntaxError&) {
      }
      ts_.reset(m);
      ts_.next();
      RF f = formula();
      ts_.expect(")");
      return f;
    }
    RT l = term();
    if (ts_.is("=")) return equation(std::move(l), t);
    return to_atom(std::move(l), t);
  }

  RF equation(RT l, const Token& t) {
    ts_.expect("=");
    RT r = term();
    return RF{RF::Eq, t, {std::move(l), std::move(r)}, {}, {}, {}};
  }

  RF to_atom(RT a, const Token& t) {
    const RT& h = a.kind == RT::App ? a.kids[0] : a;
    if (h.kind != RT::Id) TokenStream::fail_at(t, "expected an atomic formula");
    return RF{RF::Atom, t, {std::move(a)}, {}, {}, {}};
  }

  TokenStream& ts_;
};

// ------------------------------------------------------------ inference

class Infer {
 public:
  int meta() {
    nodes_.push_back({N::Meta, "", -1, -1, static_cast<int>(nodes_.size())});
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Type variables become fresh metas, shared within one instantiation.
  int from(const TyP& t, std::map<std::string, int>& tv) {
    switch (t->kind) {
      case Ty::Var: {
        auto it = tv.find(t->name);
        if (it != tv.end()) return it->second;
        return tv[t->name] = meta();
      }
      case Ty::Base: return add({N::Base, t->name, -1, -1, 0});
      case Ty::Arrow: {
        int a = from(t->dom, tv);
        int b = from(t->cod, tv);
        return add({N::Arrow, "", a, b, 0});
      }
    }
    return meta();
  }

  int arrow(int a, int b) { return add({N::Arrow, "", a, b, 0}); }

  int find(int x) {
    while (nodes_[x].kind == N::Meta && nodes_[x].parent != x) x = nodes_[x].parent;
    return x;
  }

  bool unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (nodes_[a].kind == N::Meta) return link(a, b);
    if (nodes_[b].kind == N::Meta) return link(b, a);
    if (nodes_[a].kind != nodes_[b].kind) return false;
    if (nodes_[a].kind == N::Base) return nodes_[a].name == nodes_[b].name;
    return unify(nodes_[a].a, nodes_[b].a) && unify(nodes_[a].b, nodes_[b].b);
  }

  // Resolved type; remaining metas become type variables via `gen`, or
  // nullptr when gen is null.
  TyP resolve(int x, std::map<int, std::string>* gen) {
    x = find(x);
    const auto& n = nodes_[x];
    switch (n.kind) {
      case N::Base: return base_ty(n.name);
      case N::Arrow: {
        TyP a = resolve(n.a, gen);
        TyP b = resolve(n.b, gen);
        return a && b ? arrow_ty(a, b) : nullptr;
      }
      case N::Meta: {
        if (!gen) return nullptr;
        auto it = gen->find(x);
        if (it != gen->end()) return var_ty(it->second);
        std::string nm(1, static_cast<char>('A' + gen->size() % 26));
        if (gen->size() >= 26) nm += std::to_string(gen->size() / 26);
        (*gen)[x] = nm;
        return var_ty(nm);
      }
    }
    return nullptr;
  }

  std::string show(int x) {
    std::map<int, std::string> g;
    return ty_str(resolve(x, &g));
  }

 private:
  struct Node {
    enum Kind { Meta, Base, Arrow } kind;
    std::string name;
    int a, b;
    int parent;
  };
  using N = Node;

  int add(Node n) {
    nodes_.push_back(std::move(n));
    int i = static_cast<int>(nodes_.size()) - 1;
    nodes_[i].parent = i;
    return i;
  }

  bool occurs(int m, int t) {
    t = find(t);
    if (t == m) return true;
    if (nodes_[t].kind == N::Arrow) return occurs(m, nodes_[t].a) || occurs(m, nodes_[t].b);
    return false;
  }

  bool link(int m, int t) {
    if (occurs(m, t)) return false;
    nodes_[m].parent = t;
    return true;
  }

  std::vector<Node> nodes_;
};

// ------------------------------------------------------------ elaboration

class Elab {
 public:
  enum Mode { Clause, Goal };
  Elab(const HSignature& sig, Mode mode) : sig_(sig), mode_(mode) {}

  void check_formula(RF& f) {
    switch (f.kind) {
      case RF::Top: return;
      case RF::Atom: {
        RT& a = f.terms[0];
        RT& h = a.kind == RT::App ? a.kids[0] : a;
        auto it = sig_.preds.find(h.tok.text);
        if (it == sig_.preds.end()) TokenStream::fail_at(h.tok, "undeclared predicate " + h.tok.text);
        size_t nargs = a.kind == RT::App ? a.kids.size() - 1 : 0;
        if (arg_types(it->second).size() != nargs)
          TokenStream::fail_at(h.tok, "predicate " + h.tok.text + " expects " +
                                          std::to_string(arg_types(it->second).size()) + " arguments");
        std::map<std::string, int> tv;
        h.ity = inf.from(it->second, tv);
        h.res = RT::Const;
        int t = h.ity;
        for (size_t i = 1; i < (a.kind == RT::App ? a.kids.size() : 1); ++i) {
          int ai = check_term(a.kids[i]);
          int r = inf.meta();
          if (!inf.unify(t, inf.arrow(ai, r))) type_error(a.kids[i].tok, "argument of " + h.tok.text, t, ai);
          t = r;
        }
        return;
      }
      case RF::Eq: {
        int l = check_term(f.terms[0]);
        int r = check_term(f.terms[1]);
        if (!inf.unify(l, r)) type_error(f.tok, "equation", l, r);
        return;
      }
      case RF::And:
      case RF::Or:
        check_formula(f.subs[0]);
        check_formula(f.subs[1]);
        return;
      case RF::Exists:
      case RF::Nabla: {
        size_t n0 = scope_.size();
        for (const auto& v : f.vars) {
          int m = inf.meta();
          f.var_ity.push_back(m);
          scope_.push_back({v.text, m, false});
          if (f.kind == RF::Nabla) nominal_checks_.push_back({v, m});
        }
        check_formula(f.subs[0]);
        scope_.resize(n0);
        return;
      }
    }
  }

  int check_term(RT& t) {
    switch (t.kind) {
      case RT::Lam: {
        int m = inf.meta();
        t.ity = m;  // binder type
        scope_.push_back({t.tok.text, m, true});
        int b = check_term(t.kids[0]);
        scope_.pop_back();
        return inf.arrow(m, b);
      }
      case RT::App: {
        int h = check_term(t.kids[0]);
        for (size_t i = 1; i < t.kids.size(); ++i) {
          int a = check_term(t.kids[i]);
          int r = inf.meta();
          if (!inf.unify(h, inf.arrow(a, r))) type_error(t.kids[i].tok, "application", h, a);
          h = r;
        }
        return h;
      }
      case RT::Id: return resolve_id(t);
    }
    return inf.meta();
  }

  int resolve_id(RT& t) {
    const std::string& n = t.tok.text;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == n) {
        t.res = it->lambda ? RT::LamVar : RT::QuantVar;
        return t.ity = it->ity;
      }
    if (auto c = sig_.consts.find(n); c != sig_.consts.end()) {
      std::map<std::string, int> tv;
      t.res = RT::Const;
      return t.ity = inf.from(c->second, tv);
    }
    if (sig_.preds.count(n)) TokenStream::fail_at(t.tok, "predicate " + n + " used as a term");
    if (auto u = clause_vars.find(n); u != clause_vars.end()) {
      t.res = u->second.second ? RT::Nom : RT::Univ;
      return t.ity = u->second.first;
    }
    bool upper = is_upper_id(n);
    if (mode_ == Clause && !upper)
      TokenStream::fail_at(t.tok, "undeclared constant " + n + " (clauses cannot mention nominal constants)");
    if (mode_ == Goal && upper) TokenStream::fail_at(t.tok, "unbound variable " + n + " in a closed goal");
    int m = inf.meta();
    clause_vars[n] = {m, !upper};
    clause_order.push_back(n);
    if (!upper) nominal_checks_.push_back({t.tok, m});
    t.res = upper ? RT::Univ : RT::Nom;
    return t.ity = m;
  }

  void push_quant(const std::string& n, int m) { scope_.push_back({n, m, false}); }

  [[noreturn]] void type_error(const Token& at, const std::string& what, int a, int b) {
    throw HTypeError(std::to_string(at.line) + ":" + std::to_string(at.col) + ": type mismatch in " + what + ": " +
                     inf.show(a) + " vs " + inf.show(b));
  }

  TyP ty_of(int m, const Token& at) {
    TyP t = inf.resolve(m, mode_ == Clause ? &gen_ : nullptr);
    if (!t)
      throw HTypeError(std::to_string(at.line) + ":" + std::to_string(at.col) + ": cannot infer the type of '" +
                       at.text + "'");
    return t;
  }

  void check_nominals() {
    for (auto& [tok, m] : nominal_checks_) {
      if (mode_ == Goal && sig_.nominal_types.size() == 1 && !inf.resolve(m, nullptr)) {
        std::map<std::string, int> tv;
        inf.unify(m, inf.from(base_ty(*sig_.nominal_types.begin()), tv));
      }
      TyP t = ty_of(m, tok);
      if (t->kind == Ty::Var) continue;
      if (!sig_.is_nominal(t))
        throw HTypeError(std::to_string(tok.line) + ":" + std::to_string(tok.col) + ": '" + tok.text +
                         "' must have a nominal type, not " + ty_str(t));
    }
  }

  // Phase two: build typed terms.
  HTerm build(const RT& t, std::vector<std::string>& lams) {
    switch (t.kind) {
      case RT::Lam: {
        TyP dom = ty_of(t.ity, t.tok);
        lams.push_back(t.tok.text);
        HTerm b = build(t.kids[0], lams);
        lams.pop_back();
        return HTerm::lam(t.tok.text, dom, b);
      }
      case RT::App: {
        HTerm h = build(t.kids[0], lams);
        std::vector<HTerm> as;
        for (size_t i = 1; i < t.kids.size(); ++i) as.push_back(build(t.kids[i], lams));
        return HTerm::app(h, std::move(as));
      }
      case RT::Id: {
        TyP ty = ty_of(t.ity, t.tok);
        switch (t.res) {
          case RT::LamVar: {
            for (int i = static_cast<int>(lams.size()) - 1; i >= 0; --i)
              if (lams[i] == t.tok.text) return HTerm::bvar(static_cast<int>(lams.size()) - 1 - i, ty);
            break;
          }
          case RT::QuantVar:
          case RT::Univ: return HTerm::fvar(t.tok.text, ty);
          case RT::Const: return HTerm::con(t.tok.text, ty);
          case RT::Nom: return HTerm::nom(t.tok.text, ty);
          default: break;
        }
        TokenStream::fail_at(t.tok, "unresolved identifier " + t.tok.text);
      }
    }
    return {};
  }

  Formula build(const RF& f) {
    std::vector<std::string> lams;
    switch (f.kind) {
      case RF::Top: return Formula::top();
      case RF::Atom: {
        const RT& a = f.terms[0];
        std::vector<HTerm> args;
        if (a.kind == RT::App)
          for (size_t i = 1; i < a.kids.size(); ++i) args.push_back(normalize(build(a.kids[i], lams)));
        const RT& h = a.kind == RT::App ? a.kids[0] : a;
        return Formula::atom(h.tok.text, std::move(args));
      }
      case RF::Eq: return Formula::eq(normalize(build(f.terms[0], lams)), normalize(build(f.terms[1], lams)));
      case RF::And: return Formula::conj(build(f.subs[0]), build(f.subs[1]));
      case RF::Or: return Formula::disj(build(f.subs[0]), build(f.subs[1]));
      case RF::Exists:
      case RF::Nabla: {
        Formula b = build(f.subs[0]);
        for (int i = static_cast<int>(f.vars.size()) - 1; i >= 0; --i) {
          TyP ty = ty_of(f.var_ity[i], f.vars[i]);
          b = f.kind == RF::Exists ? Formula::exists(f.vars[i].text, ty, b) : Formula::nabla(f.vars[i].text, ty, b);
        }
        return b;
      }
    }
    return Formula::top();
  }

  Infer inf;
  std::map<std::string, std::pair<int, bool>> clause_vars;  // name -> (ity, is nominal constant)
  std::vector<std::string> clause_order;

 private:
  struct Scope {
    std::string name;
    int ity;
    bool lambda;
  };
  const HSignature& sig_;
  Mode mode_;
  std::vector<Scope> scope_;
  std::vector<std::pair<Token, int>> nominal_checks_;
  std::map<int, std::string> gen_;
};

void check_type_wf(const HSignature& sig, const TyP& t, const Token& at, bool allow_vars) {
  switch (t->kind) {
    case Ty::Var:
      if (!allow_vars) TokenStream::fail_at(at, "type variables are only allowed in predicate types");
      return;
    case Ty::Base:
      if (t->name != "o" && !sig.has_type(t->name)) TokenStream::fail_at(at, "undeclared type " + t->name);
      return;
    case Ty::Arrow:
      check_type_wf(sig, t->dom, at, allow_vars);
      check_type_wf(sig, t->cod, at, allow_vars);
      return;
  }
}

bool mentions_o(const TyP& t) {
  if (t->kind == Ty::Base) return t->name == "o";
  if (t->kind == Ty::Arrow) return mentions_o(t->dom) || mentions_o(t->cod);
  return false;
}

DefClause parse_clause(TokenStream& ts, const HSignature& sig) {
  Raw raw(ts);
  std::vector<Token> nablas;
  if (ts.is_keyword("nabla")) {
    ts.next();
    do nablas.push_back(ts.expect_ident("variable"));
    while (ts.is_ident());
    ts.expect(",");
  }
  RF head = raw.atom_formula();
  std::optional<RF> body;
  if (ts.accept(":=")) body = raw.formula();
  ts.expect(".");

  Elab el(sig, Elab::Clause);
  std::vector<int> zity;
  for (const auto& z : nablas) {
    for (const auto& w : nablas)
      if (&w != &z && w.text == z.text) TokenStream::fail_at(z, "repeated nabla variable " + z.text);
    int m = el.inf.meta();
    zity.push_back(m);
    el.push_quant(z.text, m);
  }
  el.check_formula(head);
  if (body) {
    // The body cannot see the head's nabla variables (it may rebind them).
    Elab* e = &el;
    RF& b = *body;
    std::multiset<std::string> bound;
    std::function<void(RT&)> scan = [&](RT& t) {
      if (t.kind == RT::Id && !bound.count(t.tok.text))
        for (const auto& z : nablas)
          if (z.text == t.tok.text) TokenStream::fail_at(t.tok, "nabla variable " + z.text + " used in the body");
      if (t.kind == RT::Lam) bound.insert(t.tok.text);
      for (auto& k : t.kids) scan(k);
      if (t.kind == RT::Lam) bound.erase(bound.find(t.tok.text));
    };
    std::function<void(RF&)> scanf = [&](RF& f) {
      for (const auto& v : f.vars) bound.insert(v.text);
      for (auto& t : f.terms) scan(t);
      for (auto& s : f.subs) scanf(s);
      for (const auto& v : f.vars) bound.erase(bound.find(v.text));
    };
    scanf(b);
    e->check_formula(b);
  }
  DefClause c;
  for (size_t i = 0; i < nablas.size(); ++i) {
    TyP t = el.ty_of(zity[i], nablas[i]);
    if (t->kind != Ty::Var && !sig.is_nominal(t))
      throw HTypeError(std::to_string(nablas[i].line) + ":" + std::to_string(nablas[i].col) + ": nabla variable " +
                       nablas[i].text + " must have a nominal type, not " + ty_str(t));
    c.nablas.push_back({nablas[i].text, t});
  }
  el.check_nominals();
  for (const auto& n : el.clause_order) c.universals.push_back({n, el.ty_of(el.clause_vars[n].first, head.tok)});
  Formula h = el.build(head);
  c.pred = h->pred;
  c.head = h->args;
  c.body = body ? el.build(*body) : Formula::top();
  return c;
}

}  // namespace

TyP parse_type(std::string_view text) {
  TokenStream ts(tokenize(text));
  Raw raw(ts);
  TyP t = raw.type();
  if (!ts.at_end()) ts.fail("trailing input after type");
  return t;
}

Definition parse_definition(std::string_view text, bool allow_generated) {
  TokenStream ts(tokenize(text, allow_generated));
  Definition d;
  Raw raw(ts);
  while (!ts.at_end()) {
    if (ts.is_keyword("kind") || ts.is_keyword("nominal")) {
      bool nominal = ts.next().text == "nominal";
      do {
        const Token& id = ts.expect_ident("type name");
        if (is_upper_id(id.text) || id.text == "o") TokenStream::fail_at(id, "bad type name " + id.text);
        try {
          nominal ? d.sig.declare_nominal(id.text) : d.sig.declare_kind(id.text);
        } catch (const HTypeError& e) {
          TokenStream::fail_at(id, e.what());
        }
      } while (ts.accept(","));
      ts.expect(".");
      continue;
    }
    if (ts.is_keyword("type")) {
      ts.next();
      std::vector<Token> ids;
      do ids.push_back(ts.expect_ident("constant name"));
      while (ts.accept(","));
      Token at = ts.peek();
      TyP t = raw.type();
      ts.expect(".");
      bool pred = result_type(t)->kind == Ty::Base && result_type(t)->name == "o";
      check_type_wf(d.sig, t, at, pred);
      for (const auto& a : arg_types(t))
        if (mentions_o(a)) TokenStream::fail_at(at, "argument types cannot mention o");
      for (const auto& id : ids) {
        if (is_upper_id(id.text) || kKeywords.count(id.text)) TokenStream::fail_at(id, "bad constant name " + id.text);
        try {
          pred ? d.sig.declare_pred(id.text, t) : d.sig.declare_const(id.text, t);
        } catch (const HTypeError& e) {
          TokenStream::fail_at(id, e.what());
        }
      }
      continue;
    }
    d.clauses.push_back(parse_clause(ts, d.sig));
  }
  return d;
}

std::vector<DefClause> parse_clauses(std::string_view text, const HSignature& sig, bool allow_generated) {
  TokenStream ts(tokenize(text, allow_generated));
  std::vector<DefClause> out;
  while (!ts.at_end()) out.push_back(parse_clause(ts, sig));
  return out;
}

Formula parse_formula(std::string_view text, const HSignature& sig, bool allow_generated) {
  TokenStream ts(tokenize(text, allow_generated));
  Raw raw(ts);
  RF f = raw.formula();
  ts.accept(".");
  if (!ts.at_end()) ts.fail("trailing input after goal");
  Elab el(sig, Elab::Goal);
  el.check_formula(f);
  el.check_nominals();
  return el.build(f);
}

HTerm parse_hterm(std::string_view text, const HSignature& sig, const TyP& expected, bool allow_generated) {
  TokenStream ts(tokenize(text, allow_generated));
  Raw raw(ts);
  Token at = ts.peek();
  RT t = raw.term();
  if (!ts.at_end()) ts.fail("trailing input after term");
  Elab el(sig, Elab::Goal);
  int m = el.check_term(t);
  std::map<std::string, int> tv;
  if (!el.inf.unify(m, el.inf.from(expected, tv))) el.type_error(at, "term", m, el.inf.from(expected, tv));
  el.check_nominals();
  std::vector<std::string> lams;
  return normalize(el.build(t, lams));
}

std::string print_hsignature(const HSignature& sig) {
  std::string s;
  for (const auto& k : sig.kinds) s += "kind " + k + ".\n";
  for (const auto& n : sig.nominal_types) s += "nominal " + n + ".\n";
  for (const auto& c : sig.const_order) s += "type " + c + " " + ty_str(sig.consts.at(c)) + ".\n";
  for (const auto& p : sig.pred_order) s += "type " + p + " " + ty_str(sig.preds.at(p)) + ".\n";
  return s;
}

std::string print_definition(const Definition& d) {
  std::string s = print_hsignature(d.sig);
  std::string last;
  for (const auto& c : d.clauses) {
    if (c.pred != last) s += "\n";
    last = c.pred;
    s += c.str() + "\n";
  }
  return s;
}

bool same_signature(const HSignature& a, const HSignature& b) {
  std::set<std::string> ka(a.kinds.begin(), a.kinds.end()), kb(b.kinds.begin(), b.kinds.end());
  if (ka != kb || a.nominal_types != b.nominal_types) return false;
  auto same_map = [](const std::map<std::string, TyP>& x, const std::map<std::string, TyP>& y) {
    if (x.size() != y.size()) return false;
    for (const auto& [k, t] : x) {
      auto it = y.find(k);
      if (it == y.end()) return false;
      // type variables compared up to consistent renaming
      std::map<std::string, TyP> s1, s2;
      if (!ty_match(t, it->second, s1) || !ty_match(it->second, t, s2)) return false;
    }
    return true;
  };
  return same_map(a.consts, b.consts) && same_map(a.preds, b.preds);
}

bool same_definition(const Definition& a, const Definition& b) {
  if (!same_signature(a.sig, b.sig) || a.clauses.size() != b.clauses.size()) return false;
  for (size_t i = 0; i < a.clauses.size(); ++i)
    if (!clause_equiv(a.clauses[i], b.clauses[i])) return false;
  return true;
}

}  // namespace nomhoas::hoas
