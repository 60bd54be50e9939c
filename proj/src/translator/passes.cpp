#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "nomhoas/hoas/parser.hpp"
#include "nomhoas/translator/translator.hpp"

namespace nomhoas::translator {

using hoas::DefClause;
using hoas::Formula;
using hoas::FKind;
using hoas::HTerm;
using hoas::TyP;

namespace {

void bases(const TyP& t, std::set<std::string>& out) {
  if (t->kind == hoas::Ty::Base) out.insert(t->name);
  if (t->kind == hoas::Ty::Arrow) {
    bases(t->dom, out);
    bases(t->cod, out);
  }
}

// Replacement for x whose raised arguments at `drop` positions are removed.
HTerm pruned(const std::string& x, const TyP& ty, int n, const std::vector<int>& drop, TyP& new_ty) {
  std::vector<TyP> args = hoas::arg_types(ty);
  std::vector<TyP> kept;
  std::vector<int> keep_idx;
  for (int i = 0; i < n; ++i)
    if (std::find(drop.begin(), drop.end(), i) == drop.end()) {
      kept.push_back(args[i]);
      keep_idx.push_back(i);
    }
  TyP rest = hoas::arrows(std::vector<TyP>(args.begin() + n, args.end()), hoas::result_type(ty));
  new_ty = hoas::arrows(kept, rest);
  HTerm body = HTerm::fvar(x, new_ty);
  if (!keep_idx.empty()) {
    std::vector<HTerm> as;
    for (int i : keep_idx) as.push_back(HTerm::bvar(n - 1 - i, args[i]));
    body = HTerm::app(body, as);
  }
  for (int i = n - 1; i >= 0; --i) body = HTerm::lam("y", args[i], body);
  return hoas::normalize(body);
}

void substitute_clause(DefClause& c, const std::string& x, const HTerm& v) {
  hoas::HSubst s{{x, v}};
  for (auto& h : c.head) h = hoas::hsubstitute(h, s);
  c.body = hoas::fsubstitute(c.body, s);
}

void prune_universal(DefClause& c, std::map<std::string, int>& raised, const std::string& x,
                     const std::vector<int>& drop) {
  for (auto& [name, ty] : c.universals) {
    if (name != x) continue;
    TyP nt;
    HTerm v = pruned(x, ty, raised[x], drop, nt);
    substitute_clause(c, x, v);
    ty = nt;
    raised[x] -= static_cast<int>(drop.size());
    return;
  }
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s;
}

}  // namespace

std::map<std::string, std::set<std::string>> subordination(const hoas::HSignature& sig) {
  std::map<std::string, std::set<std::string>> reach;
  for (const auto& k : sig.kinds) reach[k];
  for (const auto& n : sig.nominal_types) reach[n].insert(n);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [c, ty] : sig.consts) {
      TyP res = hoas::result_type(ty);
      if (res->kind != hoas::Ty::Base) continue;
      std::set<std::string> feeds;
      for (const auto& a : hoas::arg_types(ty)) bases(a, feeds);
      auto& r = reach[res->name];
      for (const auto& f : feeds)
        for (const auto& nu : reach[f])
          if (r.insert(nu).second) changed = true;
    }
  }
  return reach;
}

void pass_subordination(TranslationUnit& u) {
  auto reach = subordination(u.sig);
  // Raised positions whose name type cannot occur in the variable's values.
  auto vacuous = [&](const TyP& ty, int n) {
    std::vector<TyP> args = hoas::arg_types(ty);
    std::set<std::string> bs;
    bases(hoas::arrows(std::vector<TyP>(args.begin() + n, args.end()), hoas::result_type(ty)), bs);
    std::vector<int> drop;
    for (int i = 0; i < n; ++i) {
      bool dep = false;
      for (const auto& b : bs)
        if (reach[b].count(args[i]->name)) dep = true;
      if (!dep) drop.push_back(i);
    }
    return drop;
  };
  for (size_t i = 0; i < u.defs.size(); ++i) {
    DefClause& c = u.defs[i];
    auto& raised = u.raised[i];
    std::vector<std::string> touched;
    for (const auto& [x, ty] : std::vector<hoas::TypedName>(c.universals)) {
      int n = raised.count(x) ? raised[x] : 0;
      auto drop = vacuous(ty, n);
      if (drop.empty()) continue;
      prune_universal(c, raised, x, drop);
      touched.push_back(x);
    }
    std::function<Formula(const Formula&)> walk = [&](const Formula& f) -> Formula {
      switch (f.kind()) {
        case FKind::And: return Formula::conj(walk(f->left), walk(f->right));
        case FKind::Or: return Formula::disj(walk(f->left), walk(f->right));
        case FKind::Nabla: return Formula::nabla(f->var, f->vty, walk(f.body()));
        case FKind::Exists: {
          int n = raised.count(f->var) ? raised[f->var] : 0;
          auto drop = vacuous(f->vty, n);
          if (drop.empty()) return Formula::exists(f->var, f->vty, walk(f.body()));
          TyP nt;
          HTerm v = pruned(f->var, f->vty, n, drop, nt);
          raised[f->var] = n - static_cast<int>(drop.size());
          touched.push_back(f->var);
          return Formula::exists(f->var, nt, walk(hoas::fsubstitute(f.body(), {{f->var, v}})));
        }
        default: return f;
      }
    };
    c.body = walk(c.body);
    if (!touched.empty()) u.pass_log[i].push_back("subordination: unraised " + join(touched));
  }
}

void pass_static_freshness(TranslationUnit& u) {
  for (size_t i = 0; i < u.defs.size(); ++i) {
    DefClause& c = u.defs[i];
    auto& raised = u.raised[i];
    auto is_universal = [&](const std::string& x) {
      for (const auto& p : c.universals)
        if (p.first == x) return true;
      return false;
    };
    // nabla v1..vk. fresh vi (X w1..wm), ws distinct among the vs and m the
    // full raising of X.  Returns the pruned position (or -1) through `pos`.
    auto matches = [&](const Formula& f, std::string& x, int& pos) {
      std::vector<std::string> vs;
      Formula g = f;
      while (g.kind() == FKind::Nabla) {
        vs.push_back(g->var);
        g = g.body();
      }
      if (vs.empty() || g.kind() != FKind::Atom || g->pred != "fresh" || g->args.size() != 2) return false;
      const HTerm& a = g->args[0];
      const HTerm& t = g->args[1];
      if (a.kind() != hoas::HKind::FVar || std::find(vs.begin(), vs.end(), a->name) == vs.end()) return false;
      const HTerm& h = t.head();
      if (h.kind() != hoas::HKind::FVar || !is_universal(h->name)) return false;
      int n = raised.count(h->name) ? raised[h->name] : 0;
      if (static_cast<int>(t.args().size()) != n) return false;
      std::set<std::string> seen;
      pos = -1;
      for (int k = 0; k < n; ++k) {
        const HTerm& w = t.args()[k];
        if (w.kind() != hoas::HKind::FVar || std::find(vs.begin(), vs.end(), w->name) == vs.end()) return false;
        if (!seen.insert(w->name).second) return false;
        if (w->name == a->name) pos = k;
      }
      x = h->name;
      return true;
    };
    for (bool again = true; again;) {
      again = false;
      std::string x;
      int pos = -1;
      std::string removed;
      // Removes the first matching conjunct of the top-level conjunction.
      std::function<std::optional<Formula>(const Formula&)> strip = [&](const Formula& f) -> std::optional<Formula> {
        if (f.kind() != FKind::And) return std::nullopt;
        for (int side = 0; side < 2; ++side) {
          const Formula& here = side ? f->right : f->left;
          const Formula& other = side ? f->left : f->right;
          if (matches(here, x, pos)) {
            removed = here.str();
            return other;
          }
          if (auto r = strip(here)) return side ? Formula::conj(other, *r) : Formula::conj(*r, other);
        }
        return std::nullopt;
      };
      std::optional<Formula> nb = strip(c.body);
      if (!nb && matches(c.body, x, pos)) {
        removed = c.body.str();
        nb = Formula::top();
      }
      if (!nb) break;
      c.body = *nb;
      if (pos >= 0) prune_universal(c, raised, x, {pos});
      u.pass_log[i].push_back("static freshness: removed " + removed);
      again = true;
    }
  }
}

void pass_vacuous_nabla(TranslationUnit& u) {
  for (size_t i = 0; i < u.defs.size(); ++i) {
    DefClause& c = u.defs[i];
    std::set<std::string> used;
    for (const auto& h : c.head) {
      auto fv = hoas::hfree_vars(h);
      used.insert(fv.begin(), fv.end());
    }
    std::vector<std::string> dropped;
    std::vector<hoas::TypedName> keep;
    for (const auto& z : c.nablas) {
      if (used.count(z.first)) keep.push_back(z);
      else dropped.push_back(z.first);
    }
    c.nablas = keep;
    int body_dropped = 0;
    std::function<Formula(const Formula&)> walk = [&](const Formula& f) -> Formula {
      switch (f.kind()) {
        case FKind::And: return Formula::conj(walk(f->left), walk(f->right));
        case FKind::Or: return Formula::disj(walk(f->left), walk(f->right));
        case FKind::Exists: return Formula::exists(f->var, f->vty, walk(f.body()));
        case FKind::Nabla: {
          Formula b = walk(f.body());
          if (hoas::ffree_vars(b).count(f->var)) return Formula::nabla(f->var, f->vty, b);
          ++body_dropped;
          return b;
        }
        default: return f;
      }
    };
    c.body = walk(c.body);
    if (!dropped.empty()) u.pass_log[i].push_back("vacuous nabla: dropped head " + join(dropped));
    if (body_dropped) u.pass_log[i].push_back("vacuous nabla: dropped " + std::to_string(body_dropped) + " in body");
  }
}

namespace {

const hoas::Definition& prelude_definition() {
  static const hoas::Definition d = hoas::parse_definition(
      "type fresh A -> B -> o.\n"
      "type swap A -> A -> B -> B -> o.\n"
      "type abst A -> B -> (A -> B) -> o.\n"
      "nabla z, fresh z X.\n"
      "nabla x y, swap x y (E x y) (E y x).\n"
      "nabla x, swap x x (E x) (E x).\n"
      "nabla x, abst x (E x) (y\\ E y).\n");
  return d;
}

void referenced(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FKind::Atom:
      if (prelude_preds().count(f->pred)) out.insert(f->pred);
      break;
    case FKind::And:
    case FKind::Or:
      referenced(f->left, out);
      referenced(f->right, out);
      break;
    case FKind::Exists:
    case FKind::Nabla: referenced(f.body(), out); break;
    default: break;
  }
}

std::vector<DefClause> prelude_for(const std::set<std::string>& preds) {
  std::vector<DefClause> out;
  for (const auto& c : prelude_definition().clauses)
    if (preds.count(c.pred)) out.push_back(c);
  return out;
}

}  // namespace

void emit_prelude(TranslationUnit& u) {
  std::set<std::string> preds;
  for (const auto& c : u.defs) referenced(c.body, preds);
  u.prelude = prelude_for(preds);
}

hoas::Definition TranslationUnit::definition(const std::vector<Formula>& goals) const {
  std::set<std::string> preds;
  for (const auto& c : defs) referenced(c.body, preds);
  for (const auto& g : goals) referenced(g, preds);
  hoas::Definition d;
  d.sig = sig;
  for (const auto& p : prelude_definition().sig.pred_order)
    if (preds.count(p)) d.sig.declare_pred(p, prelude_definition().sig.preds.at(p));
  d.clauses = defs;
  for (const auto& c : prelude_for(preds)) d.clauses.push_back(c);
  return d;
}

std::string TranslationUnit::report() const {
  std::ostringstream os;
  for (size_t i = 0; i < defs.size(); ++i) {
    os << "clause " << i + 1 << ": " << defs[i].str() << "\n";
    for (const auto& s : sigma_log[i]) os << "  raise " << s << "\n";
    for (const auto& s : pass_log[i]) os << "  " << s << "\n";
  }
  if (!prelude.empty()) {
    os << "prelude:\n";
    for (const auto& c : prelude) os << "  " << c.str() << "\n";
  }
  return os.str();
}

TranslationUnit translate_program(const nominal::Program& prog, const TransConfig& cfg) {
  TranslationUnit u;
  u.sig = translate_signature(prog.sig);
  for (const auto& c0 : prog.clauses) {
    nominal::ProgramClause c = c0;
    if (!nominal::name_restricted(c)) {
      if (cfg.name_restricted_mode) throw TranslationError("clause is not name-restricted: " + c.str());
      c = normalize_name_restriction(prog.sig, c);
    }
    TClause t = phi_clause(prog.sig, c);
    u.defs.push_back(t.clause);
    u.raised.push_back(t.raised);
    u.sigma_log.push_back(t.sigma);
    u.pass_log.push_back(t.log);
  }
  if (cfg.enable_subordination_pruning) pass_subordination(u);
  if (cfg.enable_static_freshness) pass_static_freshness(u);
  if (cfg.enable_vacuous_nabla_removal) pass_vacuous_nabla(u);
  emit_prelude(u);
  return u;
}

Formula translate_goal(const nominal::Signature& sig, const nominal::Goal& g, const TransConfig& cfg) {
  nominal::Goal h = g;
  if (!nominal::name_restricted(h)) {
    if (cfg.name_restricted_mode) throw TranslationError("goal is not name-restricted: " + g.str());
    h = normalize_name_restriction(sig, h);
  }
  return phi_goal(sig, {}, h);
}

}  // namespace nomhoas::translator
