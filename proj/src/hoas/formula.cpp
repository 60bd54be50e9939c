#include "nomhoas/hoas/formula.hpp"

#include <functional>

namespace nomhoas::hoas {

namespace {
Formula mk(FNode n) { return Formula(std::make_shared<const FNode>(std::move(n))); }
}  // namespace

Formula Formula::top() { return mk(FNode{FKind::Top, "", {}, {}, {}, "", nullptr}); }
Formula Formula::atom(const std::string& pred, std::vector<HTerm> args) {
  return mk(FNode{FKind::Atom, pred, std::move(args), {}, {}, "", nullptr});
}
Formula Formula::eq(const HTerm& l, const HTerm& r) {
  if (!ty_equal(l.ty(), r.ty()))
    throw HTypeError("equation between types " + ty_str(l.ty()) + " and " + ty_str(r.ty()));
  return mk(FNode{FKind::Eq, "", {l, r}, {}, {}, "", nullptr});
}
Formula Formula::conj(const Formula& l, const Formula& r) { return mk(FNode{FKind::And, "", {}, l, r, "", nullptr}); }
Formula Formula::disj(const Formula& l, const Formula& r) { return mk(FNode{FKind::Or, "", {}, l, r, "", nullptr}); }
Formula Formula::exists(const std::string& var, TyP ty, const Formula& body) {
  return mk(FNode{FKind::Exists, "", {}, body, {}, var, std::move(ty)});
}
Formula Formula::nabla(const std::string& var, TyP ty, const Formula& body) {
  return mk(FNode{FKind::Nabla, "", {}, body, {}, var, std::move(ty)});
}

FKind Formula::kind() const { return n_->kind; }
const Formula& Formula::body() const { return n_->left; }

namespace {

Formula map_terms(const Formula& f, const std::function<HTerm(const HTerm&)>& g) {
  switch (f.kind()) {
    case FKind::Top: return f;
    case FKind::Atom: {
      std::vector<HTerm> as;
      for (const auto& a : f->args) as.push_back(g(a));
      return Formula::atom(f->pred, std::move(as));
    }
    case FKind::Eq: return Formula::eq(g(f->args[0]), g(f->args[1]));
    case FKind::And: return Formula::conj(map_terms(f->left, g), map_terms(f->right, g));
    case FKind::Or: return Formula::disj(map_terms(f->left, g), map_terms(f->right, g));
    case FKind::Exists: return Formula::exists(f->var, f->vty, map_terms(f.body(), g));
    case FKind::Nabla: return Formula::nabla(f->var, f->vty, map_terms(f.body(), g));
  }
  return f;
}

void each_term(const Formula& f, const std::function<void(const HTerm&)>& g) {
  switch (f.kind()) {
    case FKind::Top: return;
    case FKind::Atom:
    case FKind::Eq:
      for (const auto& a : f->args) g(a);
      return;
    case FKind::And:
    case FKind::Or:
      each_term(f->left, g);
      each_term(f->right, g);
      return;
    case FKind::Exists:
    case FKind::Nabla: each_term(f.body(), g); return;
  }
}

std::string fresh_binder(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base.substr(0, base.find('$'));
  for (int k = 1;; ++k) {
    std::string n = stem + "$" + std::to_string(k);
    if (!avoid.count(n)) return n;
  }
}

}  // namespace

Formula fsubstitute(const Formula& f, const HSubst& s) {
  if (s.empty()) return f;
  switch (f.kind()) {
    case FKind::Top: return f;
    case FKind::Atom:
    case FKind::Eq: return map_terms(f, [&](const HTerm& t) { return hsubstitute(t, s); });
    case FKind::And: return Formula::conj(fsubstitute(f->left, s), fsubstitute(f->right, s));
    case FKind::Or: return Formula::disj(fsubstitute(f->left, s), fsubstitute(f->right, s));
    case FKind::Exists:
    case FKind::Nabla: {
      HSubst inner = s;
      inner.erase(f->var);
      std::set<std::string> range;
      for (const auto& [k, v] : inner) {
        auto fv = hfree_vars(v);
        range.insert(fv.begin(), fv.end());
      }
      std::string var = f->var;
      Formula body = f.body();
      if (range.count(var)) {
        std::set<std::string> avoid = range;
        auto fv = ffree_vars(body);
        avoid.insert(fv.begin(), fv.end());
        for (const auto& [k, v] : inner) avoid.insert(k);
        std::string nv = fresh_binder(var, avoid);
        body = fsubstitute(body, {{var, HTerm::fvar(nv, f->vty)}});
        var = nv;
      }
      Formula nb = fsubstitute(body, inner);
      return f.kind() == FKind::Exists ? Formula::exists(var, f->vty, nb) : Formula::nabla(var, f->vty, nb);
    }
  }
  return f;
}

Formula fnormalize(const Formula& f) { return map_terms(f, [](const HTerm& t) { return normalize(t); }); }

Formula f_ty_instantiate(const Formula& f, const std::map<std::string, TyP>& s) {
  switch (f.kind()) {
    case FKind::Exists: return Formula::exists(f->var, ty_subst(f->vty, s), f_ty_instantiate(f.body(), s));
    case FKind::Nabla: return Formula::nabla(f->var, ty_subst(f->vty, s), f_ty_instantiate(f.body(), s));
    case FKind::And: return Formula::conj(f_ty_instantiate(f->left, s), f_ty_instantiate(f->right, s));
    case FKind::Or: return Formula::disj(f_ty_instantiate(f->left, s), f_ty_instantiate(f->right, s));
    default: return map_terms(f, [&](const HTerm& t) { return ty_instantiate(t, s); });
  }
}

Formula f_nom_rename(const Formula& f, const std::map<std::string, std::string>& m) {
  if (m.empty()) return f;
  return map_terms(f, [&](const HTerm& t) { return nom_rename(t, m); });
}

std::set<std::string> fsupport(const Formula& f) {
  std::set<std::string> out;
  each_term(f, [&](const HTerm& t) {
    auto s = hsupport(t);
    out.insert(s.begin(), s.end());
  });
  return out;
}

void f_collect_noms(const Formula& f, std::map<std::string, TyP>& out) {
  each_term(f, [&](const HTerm& t) { collect_noms(t, out); });
}

std::set<std::string> ffree_vars(const Formula& f) {
  std::set<std::string> out;
  switch (f.kind()) {
    case FKind::Top: break;
    case FKind::Atom:
    case FKind::Eq:
      for (const auto& a : f->args) {
        auto v = hfree_vars(a);
        out.insert(v.begin(), v.end());
      }
      break;
    case FKind::And:
    case FKind::Or: {
      out = ffree_vars(f->left);
      auto r = ffree_vars(f->right);
      out.insert(r.begin(), r.end());
      break;
    }
    case FKind::Exists:
    case FKind::Nabla:
      out = ffree_vars(f.body());
      out.erase(f->var);
      break;
  }
  return out;
}

int count_binders(const Formula& f) {
  switch (f.kind()) {
    case FKind::And:
    case FKind::Or: return count_binders(f->left) + count_binders(f->right);
    case FKind::Exists:
    case FKind::Nabla: return 1 + count_binders(f.body());
    default: return 0;
  }
}

HTerm raise_var(const std::string& name, const TyP& ty, const std::vector<HTerm>& over) {
  std::vector<TyP> ts;
  for (const auto& o : over) ts.push_back(o.ty());
  return HTerm::app(HTerm::fvar(name, arrows(ts, ty)), over);
}

// ---------------------------------------------------------------------------

namespace {

int prec(const Formula& f) {
  switch (f.kind()) {
    case FKind::Or: return 1;
    case FKind::And: return 2;
    case FKind::Exists:
    case FKind::Nabla: return 0;
    default: return 3;
  }
}

std::string print_f(const Formula& f, bool canonical, int& counter);

std::string wrap(const Formula& f, int need, bool canonical, int& counter) {
  std::string s = print_f(f, canonical, counter);
  return prec(f) < need ? "(" + s + ")" : s;
}

std::string print_f(const Formula& f, bool canonical, int& counter) {
  auto term = [&](const HTerm& t) { return canonical ? t.key() : t.str(); };
  auto arg = [&](const HTerm& t) {
    std::string s = term(t);
    return t.kind() == HKind::App || t.kind() == HKind::Lam ? "(" + s + ")" : s;
  };
  switch (f.kind()) {
    case FKind::Top: return "true";
    case FKind::Atom: {
      std::string s = f->pred;
      for (const auto& a : f->args) s += " " + arg(a);
      return s;
    }
    case FKind::Eq: return term(f->args[0]) + " = " + term(f->args[1]);
    case FKind::And: return wrap(f->left, 3, canonical, counter) + " /\\ " + wrap(f->right, 2, canonical, counter);
    case FKind::Or: return wrap(f->left, 2, canonical, counter) + " \\/ " + wrap(f->right, 1, canonical, counter);
    case FKind::Exists:
    case FKind::Nabla: {
      std::string kw = f.kind() == FKind::Exists ? "exists " : "nabla ";
      if (!canonical) return kw + f->var + ", " + print_f(f.body(), canonical, counter);
      std::string v = "_" + std::to_string(counter++);
      Formula b = fsubstitute(f.body(), {{f->var, HTerm::fvar(v, f->vty)}});
      return kw + v + ":" + ty_str(f->vty) + ", " + print_f(b, canonical, counter);
    }
  }
  return "?";
}

}  // namespace

std::string Formula::str() const {
  int c = 0;
  return print_f(*this, false, c);
}

std::string Formula::key() const {
  int c = 0;
  return print_f(*this, true, c);
}

bool formula_alpha_eq(const Formula& a, const Formula& b) { return a.key() == b.key(); }

bool HSignature::has_type(const std::string& n) const {
  for (const auto& k : kinds)
    if (k == n) return true;
  return nominal_types.count(n) > 0;
}

void HSignature::declare_kind(const std::string& n) {
  if (has_type(n)) throw HTypeError("type " + n + " declared twice");
  kinds.push_back(n);
}

void HSignature::declare_nominal(const std::string& n) {
  if (has_type(n)) throw HTypeError("type " + n + " declared twice");
  nominal_types.insert(n);
}

void HSignature::declare_const(const std::string& n, TyP t) {
  if (consts.count(n) || preds.count(n)) throw HTypeError("symbol " + n + " declared twice");
  consts[n] = std::move(t);
  const_order.push_back(n);
}

void HSignature::declare_pred(const std::string& n, TyP t) {
  if (consts.count(n) || preds.count(n)) throw HTypeError("symbol " + n + " declared twice");
  preds[n] = std::move(t);
  pred_order.push_back(n);
}

std::string DefClause::str() const {
  std::string s;
  if (!nablas.empty()) {
    s = "nabla";
    for (const auto& z : nablas) s += " " + z.first;
    s += ", ";
  }
  int c = 0;
  s += print_f(Formula::atom(pred, head), false, c);
  if (body.kind() != FKind::Top) s += " := " + body.str();
  return s + ".";
}

namespace {

// Renames universals by first occurrence and nablas by position.
std::string canonical_clause(const DefClause& c) {
  HSubst ren;
  std::vector<std::string> order;
  std::set<std::string> univ;
  for (const auto& u : c.universals) univ.insert(u.first);
  std::map<std::string, TyP> types;
  for (const auto& u : c.universals) types[u.first] = u.second;
  auto note = [&](const HTerm& t) {
    std::function<void(const HTerm&)> walk = [&](const HTerm& x) {
      if (x.kind() == HKind::FVar && univ.count(x->name) && !ren.count(x->name)) {
        ren[x->name] = HTerm::fvar("U" + std::to_string(ren.size()), types[x->name]);
      }
      if (x.kind() == HKind::Lam) walk(x->args[0]);
      if (x.kind() == HKind::App) {
        walk(x->head);
        for (const auto& a : x->args) walk(a);
      }
    };
    walk(t);
  };
  for (const auto& h : c.head) note(h);
  each_term(c.body, note);
  for (size_t i = 0; i < c.nablas.size(); ++i)
    ren[c.nablas[i].first] = HTerm::fvar("Z" + std::to_string(i), c.nablas[i].second);
  std::string s = std::to_string(c.nablas.size()) + "|";
  for (const auto& z : c.nablas) s += ty_str(z.second) + ",";
  s += Formula::atom(c.pred, [&] {
         std::vector<HTerm> hs;
         for (const auto& h : c.head) hs.push_back(hsubstitute(h, ren));
         return hs;
       }()).key();
  s += " := " + fsubstitute(c.body, ren).key();
  return s;
}

}  // namespace

bool clause_equiv(const DefClause& a, const DefClause& b) {
  if (a.pred != b.pred || a.head.size() != b.head.size() || a.nablas.size() != b.nablas.size()) return false;
  return canonical_clause(a) == canonical_clause(b);
}

}  // namespace nomhoas::hoas
