#include <algorithm>
#include <functional>
#include <optional>

#include "nomhoas/translator/translator.hpp"

namespace nomhoas::translator {

using hoas::DefClause;
using hoas::Formula;
using hoas::FKind;
using hoas::HTerm;
using hoas::TyP;
using nominal::Goal;
using nominal::GoalKind;
using nominal::Name;
using nominal::Term;
using nominal::TermKind;

const std::set<std::string>& prelude_preds() {
  static const std::set<std::string> p{"fresh", "swap", "abst"};
  return p;
}

TyP translate_type(const nominal::Type& t) {
  if (t.is_abs()) return hoas::arrow_ty(hoas::base_ty(t.id), translate_type(*t.body));
  return hoas::base_ty(t.id);
}

hoas::HSignature translate_signature(const nominal::Signature& sig) {
  hoas::HSignature out;
  for (const auto& k : sig.base_types) out.declare_kind(k);
  for (const auto& n : sig.name_types) out.declare_nominal(n);
  for (const auto& f : sig.func_order) {
    const auto& fs = sig.funcs.at(f);
    std::vector<TyP> args;
    for (const auto& a : fs.args) args.push_back(translate_type(a));
    out.declare_const(f, hoas::arrows(args, hoas::base_ty(fs.result)));
  }
  for (const auto& [p, tys] : sig.preds) {
    if (prelude_preds().count(p)) throw TranslationError("predicate name '" + p + "' is reserved");
    std::vector<TyP> args;
    for (const auto& a : tys) args.push_back(translate_type(a));
    out.declare_pred(p, hoas::arrows(args, hoas::o_ty()));
  }
  return out;
}

namespace {

HTerm nom_of(const std::string& id, const std::string& ntype) { return HTerm::nom(id, hoas::base_ty(ntype)); }

std::vector<TyP> types_of(const std::vector<HTerm>& ts) {
  std::vector<TyP> out;
  for (const auto& t : ts) out.push_back(t.ty());
  return out;
}

HTerm map_noms(const HTerm& t, const std::function<HTerm(const HTerm&)>& f) {
  switch (t.kind()) {
    case hoas::HKind::Nom: return f(t);
    case hoas::HKind::Lam: return HTerm::lam(t->name, t.ty()->dom, map_noms(t->args[0], f));
    case hoas::HKind::App: {
      std::vector<HTerm> as;
      for (const auto& a : t->args) as.push_back(map_noms(a, f));
      return HTerm::app(map_noms(t->head, f), std::move(as));
    }
    default: return t;
  }
}

HTerm nom_to_fvar(const HTerm& t, const std::string& id) {
  return map_noms(t, [&](const HTerm& n) { return n->name == id ? HTerm::fvar(id, n.ty()) : n; });
}

Formula fmap_terms(const Formula& f, const std::function<HTerm(const HTerm&)>& g) {
  switch (f.kind()) {
    case FKind::Top: return f;
    case FKind::Atom: {
      std::vector<HTerm> as;
      for (const auto& a : f->args) as.push_back(g(a));
      return Formula::atom(f->pred, std::move(as));
    }
    case FKind::Eq: return Formula::eq(g(f->args[0]), g(f->args[1]));
    case FKind::And: return Formula::conj(fmap_terms(f->left, g), fmap_terms(f->right, g));
    case FKind::Or: return Formula::disj(fmap_terms(f->left, g), fmap_terms(f->right, g));
    case FKind::Exists: return Formula::exists(f->var, f->vty, fmap_terms(f.body(), g));
    case FKind::Nabla: return Formula::nabla(f->var, f->vty, fmap_terms(f.body(), g));
  }
  return f;
}

void collect_var_ids(const Goal& g, std::set<std::string>& out) {
  switch (g.kind()) {
    case GoalKind::Exists:
      out.insert(g->var);
      collect_var_ids(g->body, out);
      break;
    case GoalKind::New: collect_var_ids(g->body, out); break;
    case GoalKind::And:
    case GoalKind::Or:
      collect_var_ids(g->left, out);
      collect_var_ids(g->right, out);
      break;
    default: break;
  }
  auto fv = nominal::free_vars(g);
  out.insert(fv.begin(), fv.end());
}

std::string unused(const std::string& stem, const std::set<std::string>& taken) {
  if (!taken.count(stem)) return stem;
  for (int k = 1;; ++k) {
    std::string c = stem + std::to_string(k);
    if (!taken.count(c)) return c;
  }
}

struct VarBinding {
  std::string name;
  std::vector<HTerm> over;
};

class Phi {
 public:
  explicit Phi(const nominal::Signature& sig) : sig_(sig) {}

  std::map<std::string, VarBinding> vars;
  std::map<Name, std::string> names;
  std::set<std::string> taken_vars;   // HOAS variable names in use
  std::set<std::string> taken_names;  // nominal constant ids in use
  std::map<std::string, int> raised;

  HTerm term(const Term& t) const { return hoas::normalize(raw(t)); }

  Formula goal(const Goal& g, const std::vector<HTerm>& pending) {
    switch (g.kind()) {
      case GoalKind::Top: return Formula::top();
      case GoalKind::Atom: {
        std::vector<HTerm> as;
        for (const auto& a : g->args) as.push_back(term(a));
        return wrap(pending, Formula::atom(g->pred, std::move(as)));
      }
      case GoalKind::Fresh: return wrap(pending, Formula::atom("fresh", {term(g->args[0]), term(g->args[1])}));
      case GoalKind::Eq: return wrap(pending, Formula::eq(term(g->args[0]), term(g->args[1])));
      case GoalKind::DotEq: {
        const Term& lhs = g->args[0];
        const Term& rhs = g->args[1];
        if (rhs.kind() == TermKind::Swap)
          return wrap(pending, Formula::atom("swap", {term(rhs->args[0]), term(rhs->args[1]), term(rhs->args[2]),
                                                      term(lhs)}));
        if (rhs.kind() == TermKind::Abs)
          return wrap(pending, Formula::atom("abst", {term(rhs->args[0]), term(rhs->args[1]), term(lhs)}));
        throw TranslationError("=. goal without a swapping or abstraction: " + g.str());
      }
      case GoalKind::And: return Formula::conj(goal(g->left, pending), goal(g->right, pending));
      case GoalKind::Or: return Formula::disj(goal(g->left, pending), goal(g->right, pending));
      case GoalKind::Exists: {
        std::string h = unused(g->var, taken_vars);
        taken_vars.insert(h);
        raised[h] = static_cast<int>(pending.size());
        auto saved = vars.find(g->var) == vars.end() ? std::nullopt : std::optional(vars[g->var]);
        vars[g->var] = {h, pending};
        TyP ty = hoas::arrows(types_of(pending), translate_type(g->type));
        Formula body = goal(g->body, pending);
        if (saved) vars[g->var] = *saved; else vars.erase(g->var);
        return Formula::exists(h, ty, body);
      }
      case GoalKind::New: {
        const Name& b = g->name;
        std::string id = unused(b.id, taken_names);
        auto saved = names.find(b) == names.end() ? std::nullopt : std::optional(names[b]);
        names[b] = id;
        taken_names.insert(id);
        auto inner = pending;
        inner.push_back(nom_of(id, b.ntype));
        Formula body = goal(g->body, inner);
        taken_names.erase(id);
        if (saved) names[b] = *saved; else names.erase(b);
        return body;
      }
    }
    throw TranslationError("unknown goal");
  }

  static Formula wrap(const std::vector<HTerm>& pending, Formula f) {
    for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
      std::string id = (*it)->name;
      f = Formula::nabla(id, it->ty(), fmap_terms(f, [&](const HTerm& t) { return nom_to_fvar(t, id); }));
    }
    return f;
  }

 private:
  std::string name_id(const Name& n) const {
    auto it = names.find(n);
    return it == names.end() ? n.id : it->second;
  }

  const Name& need_name(const Term& t) const {
    if (!t.is_name()) throw TranslationError("not name-restricted: " + t.str());
    return t->name;
  }

  HTerm raw(const Term& t) const {
    switch (t.kind()) {
      case TermKind::NameRef: return nom_of(name_id(t->name), t->name.ntype);
      case TermKind::Var: {
        if (!t->susp.empty()) throw TranslationError("suspended permutation in source term: " + t.str());
        TyP ty = translate_type(t->type);
        auto it = vars.find(t->var);
        if (it == vars.end()) return HTerm::fvar(t->var, ty);
        const auto& vb = it->second;
        HTerm h = HTerm::fvar(vb.name, hoas::arrows(types_of(vb.over), ty));
        return vb.over.empty() ? h : HTerm::app(h, vb.over);
      }
      case TermKind::App: {
        auto f = sig_.funcs.find(t->fn);
        if (f == sig_.funcs.end()) throw TranslationError("unknown function symbol " + t->fn);
        std::vector<TyP> argt;
        for (const auto& a : f->second.args) argt.push_back(translate_type(a));
        HTerm c = HTerm::con(t->fn, hoas::arrows(argt, hoas::base_ty(f->second.result)));
        if (t->args.empty()) return c;
        std::vector<HTerm> as;
        for (const auto& a : t->args) as.push_back(raw(a));
        return HTerm::app(c, std::move(as));
      }
      case TermKind::Swap: {
        const Name& a = need_name(t->args[0]);
        const Name& b = need_name(t->args[1]);
        return hoas::nom_swap(name_id(a), name_id(b), hoas::normalize(raw(t->args[2])));
      }
      case TermKind::Abs: {
        const Name& a = need_name(t->args[0]);
        return hoas::bind_nominal(name_id(a), hoas::base_ty(a.ntype), hoas::normalize(raw(t->args[1])));
      }
    }
    throw TranslationError("unknown term");
  }

  const nominal::Signature& sig_;
};

std::vector<HTerm> noms_of(const std::vector<Name>& ns) {
  std::vector<HTerm> out;
  for (const auto& n : ns) out.push_back(nom_of(n.id, n.ntype));
  return out;
}

void seed(Phi& phi, const std::map<std::string, std::vector<Name>>& raised) {
  for (const auto& [x, ns] : raised) {
    phi.vars[x] = {x, noms_of(ns)};
    phi.taken_vars.insert(x);
    for (const auto& n : ns) phi.taken_names.insert(n.id);
  }
}

}  // namespace

HTerm phi_term(const nominal::Signature& sig, const Term& t, const std::map<std::string, std::vector<Name>>& raised) {
  Phi phi(sig);
  seed(phi, raised);
  return phi.term(t);
}

Formula phi_goal(const nominal::Signature& sig, const std::vector<Name>& names, const Goal& g,
                 const std::map<std::string, std::vector<Name>>& raised) {
  Phi phi(sig);
  seed(phi, raised);
  auto fv = nominal::free_vars(g);
  phi.taken_vars.insert(fv.begin(), fv.end());
  for (const auto& n : nominal::names_of(g)) phi.taken_names.insert(n.id);
  for (const auto& n : names) phi.taken_names.insert(n.id);
  return phi.goal(g, noms_of(names));
}

TClause phi_clause(const nominal::Signature& sig, const nominal::ProgramClause& c) {
  Phi phi(sig);
  std::set<Name> all;
  nominal::collect_names(c, all);
  for (const auto& n : all) phi.taken_names.insert(n.id);
  for (const auto& u : c.universals) phi.taken_vars.insert(u.id);

  std::vector<HTerm> over = noms_of(c.new_names);
  std::string over_str;
  for (const auto& n : c.new_names) over_str += " " + n.id;

  TClause out;
  DefClause& d = out.clause;
  d.pred = c.pred;
  for (const auto& n : c.new_names) d.nablas.push_back({n.id, hoas::base_ty(n.ntype)});
  for (const auto& u : c.universals) {
    phi.vars[u.id] = {u.id, over};
    out.raised[u.id] = static_cast<int>(over.size());
    d.universals.push_back({u.id, hoas::arrows(types_of(over), translate_type(u.type))});
    if (!over.empty()) out.sigma.push_back(u.id + " := " + u.id + over_str);
  }
  for (const auto& t : c.head) {
    HTerm h = phi.term(t);
    for (const auto& n : c.new_names) h = nom_to_fvar(h, n.id);
    d.head.push_back(h);
  }
  d.body = phi.goal(c.body, over);
  for (const auto& [x, n] : phi.raised) out.raised[x] = n;
  return out;
}

// ---- hoisting of non-name-restricted swappings and abstractions ----

namespace {

class Hoister {
 public:
  Hoister(const nominal::Signature& sig, std::set<std::string> taken) : sig_(sig), taken_(std::move(taken)) {}

  std::vector<std::pair<nominal::TypedVar, Term>> found;

  Term term(const Term& t) {
    switch (t.kind()) {
      case TermKind::App: {
        std::vector<Term> as;
        for (const auto& a : t->args) as.push_back(term(a));
        return Term::app(t->fn, std::move(as));
      }
      case TermKind::Swap: {
        Term s = Term::swap(term(t->args[0]), term(t->args[1]), term(t->args[2]));
        if (s->args[0].is_name() && s->args[1].is_name()) return s;
        return replace(s);
      }
      case TermKind::Abs: {
        Term s = Term::abs(term(t->args[0]), term(t->args[1]));
        if (s->args[0].is_name()) return s;
        return replace(s);
      }
      default: return t;
    }
  }

  Goal goal(const Goal& g) {
    switch (g.kind()) {
      case GoalKind::Atom:
      case GoalKind::Fresh:
      case GoalKind::Eq: {
        size_t before = found.size();
        std::vector<Term> as;
        for (const auto& a : g->args) as.push_back(term(a));
        Goal core = g.kind() == GoalKind::Atom    ? Goal::atom(g->pred, as)
                    : g.kind() == GoalKind::Fresh ? Goal::fresh(as[0], as[1])
                                                  : Goal::eq(as[0], as[1]);
        if (found.size() == before) return g;
        std::vector<std::pair<nominal::TypedVar, Term>> mine(found.begin() + static_cast<long>(before), found.end());
        found.resize(before);
        for (auto it = mine.rbegin(); it != mine.rend(); ++it) core = Goal::conj(Goal::doteq(Term::var(it->first.id, it->first.type), it->second), core);
        for (auto it = mine.rbegin(); it != mine.rend(); ++it) core = Goal::exists(it->first.id, it->first.type, core);
        return core;
      }
      case GoalKind::And: return Goal::conj(goal(g->left), goal(g->right));
      case GoalKind::Or: return Goal::disj(goal(g->left), goal(g->right));
      case GoalKind::Exists: return Goal::exists(g->var, g->type, goal(g->body));
      case GoalKind::New: return Goal::fresh_name(g->name, goal(g->body));
      default: return g;
    }
  }

 private:
  Term replace(const Term& s) {
    std::string v = unused("S", taken_);
    taken_.insert(v);
    nominal::Type ty = nominal::type_of(sig_, s);
    found.push_back({{v, ty}, s});
    return Term::var(v, ty);
  }

  const nominal::Signature& sig_;
  std::set<std::string> taken_;
};

}  // namespace

nominal::ProgramClause normalize_name_restriction(const nominal::Signature& sig, const nominal::ProgramClause& c) {
  if (nominal::name_restricted(c)) return c;
  std::set<std::string> taken;
  collect_var_ids(c.body, taken);
  for (const auto& u : c.universals) taken.insert(u.id);
  for (const auto& h : c.head) {
    auto fv = nominal::free_vars(h);
    taken.insert(fv.begin(), fv.end());
  }
  Hoister hz(sig, taken);
  nominal::ProgramClause out = c;
  out.head.clear();
  for (const auto& h : c.head) out.head.push_back(hz.term(h));
  auto head_found = hz.found;
  hz.found.clear();
  out.body = hz.goal(c.body);
  for (auto it = head_found.rbegin(); it != head_found.rend(); ++it) {
    Goal eq = Goal::doteq(Term::var(it->first.id, it->first.type), it->second);
    out.body = out.body.kind() == GoalKind::Top ? eq : Goal::conj(eq, out.body);
  }
  for (const auto& [v, _] : head_found) out.universals.push_back(v);
  return out;
}

Goal normalize_name_restriction(const nominal::Signature& sig, const Goal& g) {
  if (nominal::name_restricted(g)) return g;
  std::set<std::string> taken;
  collect_var_ids(g, taken);
  Hoister hz(sig, taken);
  return hz.goal(g);
}

}  // namespace nomhoas::translator
