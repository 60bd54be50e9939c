#include "nomhoas/seq/seq.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "nomhoas/common/lexer.hpp"
#include "nomhoas/hoas/parser.hpp"

namespace nomhoas::seq {

using hoas::DefClause;
using hoas::Formula;
using hoas::HSignature;
using hoas::HTerm;
using hoas::TyP;

namespace {

const std::set<std::string> kReserved = {"tt", "and", "or", "imp", "all", "atom", "nil", "cons",
                                         "prog", "member", "seq", "atm", "obj", "atmlist"};

// Converts .lp2 goal syntax to .gm term text of type obj.
class Converter {
 public:
  explicit Converter(TokenStream& ts) : ts_(ts) {}

  std::string disj() {
    std::string l = conj();
    while (ts_.accept(";")) l = "(or " + paren(l) + " " + paren(conj()) + ")";
    return l;
  }

  // Tokens of one atomic formula, up to a delimiter at nesting depth 0.
  std::string atom_text() {
    if (!ts_.is_ident()) ts_.fail("expected an atomic formula but found '" + ts_.peek().text + "'");
    std::string out;
    int depth = 0;
    while (!ts_.at_end()) {
      if (depth == 0 && (ts_.is(",") || ts_.is(";") || ts_.is("&") || ts_.is("=>") || ts_.is(".") ||
                         ts_.is(")") || ts_.is(":-")))
        break;
      const Token& t = ts_.next();
      if (t.text == "(") ++depth;
      if (t.text == ")") --depth;
      out += (out.empty() ? "" : " ") + t.text;
    }
    return out;
  }

 private:
  static std::string paren(const std::string& s) { return "(" + s + ")"; }

  std::string conj() {
    std::string l = imp();
    while (ts_.accept(",") || ts_.accept("&")) l = "(and " + paren(l) + " " + paren(imp()) + ")";
    return l;
  }

  std::string imp() {
    bool atomic = ts_.is_ident() && !ts_.is_keyword("true") && !ts_.is_keyword("pi");
    Token at = ts_.peek();
    std::string l = prim();
    if (!ts_.accept("=>")) return l;
    if (!atomic) TokenStream::fail_at(at, "the antecedent of => must be an atomic formula");
    std::string a = last_atom_;
    return "(imp " + paren(a) + " " + paren(imp()) + ")";
  }

  std::string prim() {
    if (ts_.accept("(")) {
      std::string g = disj();
      ts_.expect(")");
      return g;
    }
    if (ts_.is_keyword("true")) {
      ts_.next();
      return "tt";
    }
    if (ts_.is_keyword("pi")) {
      ts_.next();
      const Token& x = ts_.expect_ident("bound variable");
      std::string name = x.text;
      ts_.expect("\\");
      return "(all (" + name + "\\ " + disj() + "))";
    }
    last_atom_ = atom_text();
    return "(atom (" + last_atom_ + "))";
  }

  TokenStream& ts_;
  std::string last_atom_;
};

bool is_decl(const TokenStream& ts) {
  return ts.is_keyword("kind") || ts.is_keyword("type") || ts.is_keyword("nominal");
}

std::string token_text(const Token& t) { return t.text; }

// Pads `out` with newlines so that the next text starts on `line`.
void align(std::string& out, int& cur, int line) {
  while (cur < line) {
    out += "\n";
    ++cur;
  }
}

HSignature object_sig(const HSignature& src, const std::set<std::string>& binder_types) {
  HSignature s;
  for (const auto& k : src.kinds)
    if (!binder_types.count(k)) s.declare_kind(k);
  for (const auto& n : src.nominal_types) s.declare_nominal(n);
  for (const auto& n : binder_types) s.declare_nominal(n);
  for (const auto& k : {"atm", "obj", "atmlist"}) s.declare_kind(k);
  for (const auto& c : src.const_order) s.declare_const(c, src.consts.at(c));
  TyP atm = hoas::base_ty("atm"), obj = hoas::base_ty("obj"), lst = hoas::base_ty("atmlist");
  for (const auto& p : src.pred_order) s.declare_const(p, hoas::arrows(hoas::arg_types(src.preds.at(p)), atm));
  s.declare_const("tt", obj);
  s.declare_const("and", hoas::arrows({obj, obj}, obj));
  s.declare_const("or", hoas::arrows({obj, obj}, obj));
  s.declare_const("imp", hoas::arrows({atm, obj}, obj));
  s.declare_const("atom", hoas::arrow_ty(atm, obj));
  s.declare_const("nil", lst);
  s.declare_const("cons", hoas::arrows({atm, lst}, lst));
  s.declare_pred("prog", hoas::arrows({atm, obj}, hoas::o_ty()));
  s.declare_pred("member", hoas::arrows({atm, lst}, hoas::o_ty()));
  s.declare_pred("seq", hoas::arrows({lst, obj}, hoas::o_ty()));
  return s;
}

HSignature with_poly_all(HSignature s) {
  s.declare_const("all", hoas::arrow_ty(hoas::arrow_ty(hoas::var_ty("A"), hoas::base_ty("obj")), hoas::base_ty("obj")));
  return s;
}

HTerm map_consts(const HTerm& t, const std::function<HTerm(const HTerm&)>& f) {
  switch (t.kind()) {
    case hoas::HKind::Const: return f(t);
    case hoas::HKind::Lam: return HTerm::lam(t->name, t.ty()->dom, map_consts(t->args[0], f));
    case hoas::HKind::App: {
      std::vector<HTerm> as;
      for (const auto& a : t->args) as.push_back(map_consts(a, f));
      return HTerm::app(map_consts(t->head, f), std::move(as));
    }
    default: return t;
  }
}

void each_const(const HTerm& t, const std::function<void(const HTerm&)>& f) {
  map_consts(t, [&](const HTerm& c) {
    f(c);
    return c;
  });
}

// Binder type of an "all" constant occurrence.
TyP binder_type(const HTerm& c) { return c.ty()->dom->dom; }

HTerm rename_all(const HTerm& t, const std::map<std::string, std::string>& alls) {
  return map_consts(t, [&](const HTerm& c) {
    if (c->name != "all") return c;
    auto it = alls.find(hoas::ty_str(binder_type(c)));
    if (it == alls.end()) throw SeqError("no binder constant for type " + hoas::ty_str(binder_type(c)));
    return HTerm::con(it->second, c.ty());
  });
}

std::string gm_of_goal(std::string_view text) {
  TokenStream ts(tokenize(text));
  Converter cv(ts);
  std::string g = cv.disj();
  ts.accept(".");
  if (!ts.at_end()) ts.fail("trailing input after goal");
  return g;
}

}  // namespace

LpDb encode_lprolog(std::string_view text) {
  TokenStream ts(tokenize(text));
  std::string decls, clauses;
  int dline = 1, cline = 1;
  while (!ts.at_end()) {
    if (is_decl(ts)) {
      align(decls, dline, ts.peek().line);
      while (!ts.at_end() && !ts.is(".")) decls += token_text(ts.next()) + " ";
      decls += token_text(ts.expect(".")) + " ";
      continue;
    }
    align(clauses, cline, ts.peek().line);
    Converter cv(ts);
    std::string head = cv.atom_text();
    std::string body = "tt";
    if (ts.accept(":-")) body = cv.disj();
    ts.expect(".");
    clauses += "prog (" + head + ") (" + body + "). ";
  }

  hoas::Definition src = hoas::parse_definition(decls);
  for (const auto& names : {src.sig.kinds, std::vector<std::string>(src.sig.nominal_types.begin(), src.sig.nominal_types.end()),
                            src.sig.const_order, src.sig.pred_order})
    for (const auto& n : names)
      if (kReserved.count(n) || n.rfind("all_", 0) == 0) throw SeqError("'" + n + "' is reserved by the seq encoding");

  // First pass: find the binder types of "pi".
  std::set<std::string> binder_types;
  std::vector<TyP> binder_tys;
  for (const auto& c : hoas::parse_clauses(clauses, with_poly_all(object_sig(src.sig, {})))) {
    for (const auto& h : c.head)
      each_const(h, [&](const HTerm& k) {
        if (k->name != "all") return;
        TyP b = binder_type(k);
        if (b->kind != hoas::Ty::Base)
          throw SeqError("pi must bind a variable of base type, not " + hoas::ty_str(b) + " (clause for " +
                         c.head[0].head()->name + ")");
        if (binder_types.insert(b->name).second) binder_tys.push_back(b);
      });
  }

  LpDb db;
  for (const auto& b : binder_types) db.all_consts[b] = binder_types.size() == 1 ? "all" : "all_" + b;
  HSignature base = object_sig(src.sig, binder_types);
  db.parse_sig = with_poly_all(base);
  HSignature fin = base;
  for (const auto& [b, name] : db.all_consts)
    fin.declare_const(name, hoas::arrow_ty(hoas::arrow_ty(hoas::base_ty(b), hoas::base_ty("obj")), hoas::base_ty("obj")));
  for (auto c : hoas::parse_clauses(clauses, db.parse_sig)) {
    for (auto& h : c.head) h = rename_all(h, db.all_consts);
    db.prog.push_back(c);
  }
  db.def.sig = fin;
  db.def.clauses = db.prog;
  for (const auto& c : seq_prelude(fin, db.all_consts)) db.def.clauses.push_back(c);
  return db;
}

std::vector<DefClause> seq_prelude(const HSignature& sig, const std::map<std::string, std::string>& alls) {
  std::string text =
      "member B (cons B L).\n"
      "member B (cons C L) := member B L.\n"
      "seq L tt.\n"
      "seq L (and B C) := seq L B /\\ seq L C.\n"
      "seq L (or B C) := seq L B \\/ seq L C.\n"
      "seq L (imp A B) := seq (cons A L) B.\n";
  for (const auto& [b, name] : alls) text += "seq L (" + name + " B) := nabla x, seq L (B x).\n";
  text +=
      "seq L (atom A) := member A L.\n"
      "seq L (atom A) := exists B, prog A B /\\ seq L B.\n";
  return hoas::parse_clauses(text, sig);
}

HTerm parse_obj_goal(const LpDb& db, std::string_view text) {
  return rename_all(hoas::parse_hterm(gm_of_goal(text), db.parse_sig, hoas::base_ty("obj")), db.all_consts);
}

HTerm parse_atm(const LpDb& db, std::string_view text) {
  return rename_all(hoas::parse_hterm(text, db.parse_sig, hoas::base_ty("atm")), db.all_consts);
}

HTerm atm_list(const LpDb& db, const std::vector<HTerm>& atoms) {
  const auto& sig = db.def.sig;
  HTerm l = HTerm::con("nil", sig.consts.at("nil"));
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) l = HTerm::app(HTerm::con("cons", sig.consts.at("cons")), {*it, l});
  return l;
}

HTerm obj_atom(const LpDb& db, const HTerm& a) {
  return HTerm::app(HTerm::con("atom", db.def.sig.consts.at("atom")), {a});
}

Formula seq_formula(const LpDb& db, const std::vector<HTerm>& hyps, const HTerm& goal) {
  return Formula::atom("seq", {atm_list(db, hyps), goal});
}

HTerm replace_nom(const HTerm& u, const std::string& c, const HTerm& t) {
  return hoas::normalize(HTerm::app(hoas::bind_nominal(c, t.ty(), u), {t}));
}

namespace {

hoas::GSolveResult run(const LpDb& db, const std::vector<HTerm>& hyps, const HTerm& goal, const SearchLimits& lim) {
  return hoas::gprove(db.def, seq_formula(db, hyps, goal), lim);
}

}  // namespace

LemmaCheck check_instantiation(const LpDb& db, const std::vector<HTerm>& hyps, const HTerm& goal, const std::string& c,
                               const HTerm& t, const SearchLimits& lim, int slack) {
  LemmaCheck r;
  auto p = run(db, hyps, goal, lim);
  if (!p.derivation) return r;
  r.premises = true;
  r.premise_depth = p.depth;
  std::vector<HTerm> hs;
  for (const auto& h : hyps) hs.push_back(replace_nom(h, c, t));
  SearchLimits l2 = lim;
  r.bound = l2.max_unfoldings = p.depth + slack;
  auto q = run(db, hs, replace_nom(goal, c, t), l2);
  r.holds = q.derivation.has_value();
  r.depth = q.depth;
  return r;
}

LemmaCheck check_cut(const LpDb& db, const std::vector<HTerm>& hyps, const HTerm& a, const HTerm& goal,
                     const SearchLimits& lim) {
  LemmaCheck r;
  std::vector<HTerm> ext{a};
  ext.insert(ext.end(), hyps.begin(), hyps.end());
  auto p1 = run(db, ext, goal, lim);
  auto p2 = run(db, hyps, obj_atom(db, a), lim);
  if (!p1.derivation || !p2.derivation) return r;
  r.premises = true;
  r.premise_depth = p1.depth + p2.depth;
  SearchLimits l2 = lim;
  r.bound = l2.max_unfoldings = p1.depth + p2.depth;
  auto q = run(db, hyps, goal, l2);
  r.holds = q.derivation.has_value();
  r.depth = q.depth;
  return r;
}

LemmaCheck check_monotonicity(const LpDb& db, const std::vector<HTerm>& hyps, const std::vector<HTerm>& bigger,
                              const HTerm& goal, const SearchLimits& lim) {
  LemmaCheck r;
  for (const auto& h : hyps)
    if (std::find(bigger.begin(), bigger.end(), h) == bigger.end())
      throw SeqError("monotonicity: " + h.str() + " is missing from the larger context");
  auto p = run(db, hyps, goal, lim);
  if (!p.derivation) return r;
  r.premises = true;
  r.premise_depth = p.depth;
  SearchLimits l2 = lim;
  r.bound = l2.max_unfoldings = p.depth + static_cast<int>(bigger.size());
  auto q = run(db, bigger, goal, l2);
  r.holds = q.derivation.has_value();
  r.depth = q.depth;
  return r;
}

}  // namespace nomhoas::seq
