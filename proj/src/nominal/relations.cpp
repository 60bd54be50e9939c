#include "nomhoas/nominal/relations.hpp"

namespace nomhoas::nominal {

namespace {

Term swap_term(const Permutation& pi, const Term& t) {
  switch (t.kind()) {
    case TermKind::NameRef: return Term::name(pi.apply(t->name));
    case TermKind::Var: return t;
    case TermKind::App: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(swap_term(pi, a));
      return Term::app(t->fn, std::move(args));
    }
    case TermKind::Swap: {
      Term l = swap_term(pi, t->args[0]);
      Term r = swap_term(pi, t->args[1]);
      Term body = swap_term(pi, t->args[2]);
      if (l.is_name() && r.is_name()) return swap_term(Permutation::swap(l->name, r->name), body);
      return Term::swap(l, r, body);
    }
    case TermKind::Abs: return Term::abs(swap_term(pi, t->args[0]), swap_term(pi, t->args[1]));
  }
  return t;
}

void require_ground(const Term& t, const char* what) {
  if (!t.ground()) throw TypeError(std::string(what) + " requires a ground term, got " + t.str());
}

// Freshness of a name for a term, with a policy for variables.
bool fresh_core(const Name& a, const Term& t, bool var_fresh) {
  switch (t.kind()) {
    case TermKind::NameRef: return t->name != a;
    case TermKind::Var: return var_fresh;
    case TermKind::App:
      for (const auto& x : t->args)
        if (!fresh_core(a, x, var_fresh)) return false;
      return true;
    case TermKind::Swap: {
      Term p = push_swaps(t);
      if (p.kind() == TermKind::Swap) return false;
      return fresh_core(a, p, var_fresh);
    }
    case TermKind::Abs: {
      const Term& b = t->args[0];
      if (!b.is_name()) return false;
      if (b->name == a) return true;
      return fresh_core(a, t->args[1], var_fresh);
    }
  }
  return false;
}

bool alpha_core(const Term& t0, const Term& u0) {
  Term t = push_swaps(t0), u = push_swaps(u0);
  if (t.kind() != u.kind()) return false;
  switch (t.kind()) {
    case TermKind::NameRef: return t->name == u->name;
    case TermKind::Var: return t->var == u->var && t->susp == u->susp;
    case TermKind::App:
      if (t->fn != u->fn || t->args.size() != u->args.size()) return false;
      for (size_t i = 0; i < t->args.size(); ++i)
        if (!alpha_core(t->args[i], u->args[i])) return false;
      return true;
    case TermKind::Swap: return t == u;
    case TermKind::Abs: {
      const Term &bt = t->args[0], &bu = u->args[0];
      if (!bt.is_name() || !bu.is_name()) return t == u;
      if (bt->name == bu->name) return alpha_core(t->args[1], u->args[1]);
      const Name &a = bt->name, &b = bu->name;
      return fresh_core(a, u->args[1], false) &&
             alpha_core(t->args[1], swap_term(Permutation::swap(a, b), u->args[1]));
    }
  }
  return false;
}

std::set<Name> avoid_set_for(const Permutation& pi) {
  std::set<Name> s;
  for (const auto& [a, b] : pi.swaps) { s.insert(a); s.insert(b); }
  return s;
}

Goal swap_goal(const Permutation& pi, const Goal& g) {
  switch (g.kind()) {
    case GoalKind::Top: return g;
    case GoalKind::Atom: {
      std::vector<Term> args;
      for (const auto& a : g->args) args.push_back(swap_term(pi, a));
      return Goal::atom(g->pred, std::move(args));
    }
    case GoalKind::Fresh: return Goal::fresh(swap_term(pi, g->args[0]), swap_term(pi, g->args[1]));
    case GoalKind::Eq: return Goal::eq(swap_term(pi, g->args[0]), swap_term(pi, g->args[1]));
    case GoalKind::DotEq: return Goal::doteq(swap_term(pi, g->args[0]), swap_term(pi, g->args[1]));
    case GoalKind::And: return Goal::conj(swap_goal(pi, g->left), swap_goal(pi, g->right));
    case GoalKind::Or: return Goal::disj(swap_goal(pi, g->left), swap_goal(pi, g->right));
    case GoalKind::Exists: return Goal::exists(g->var, g->type, swap_goal(pi, g->body));
    case GoalKind::New: {
      auto avoid = avoid_set_for(pi);
      if (!avoid.count(g->name)) return Goal::fresh_name(g->name, swap_goal(pi, g->body));
      std::set<Name> all = names_of(g->body);
      all.insert(avoid.begin(), avoid.end());
      Name fresh = fresh_name_like(g->name, all);
      Goal renamed = swap_goal(Permutation::swap(g->name, fresh), g->body);
      return Goal::fresh_name(fresh, swap_goal(pi, renamed));
    }
  }
  return g;
}

unsigned long long& rename_counter() {
  thread_local unsigned long long c = 0;
  return c;
}

std::string fresh_var_id(const std::string& stem, const std::set<std::string>& avoid) {
  for (;;) {
    std::string id = fresh_id(stem, ++rename_counter());
    if (!avoid.count(id)) return id;
  }
}

Term subst_term(const Term& t, const NSubst& theta) {
  switch (t.kind()) {
    case TermKind::NameRef: return t;
    case TermKind::Var: {
      auto it = theta.find(t->var);
      if (it == theta.end()) return t;
      if (t->susp.empty()) return it->second;
      return swap_term(t->susp, it->second);
    }
    case TermKind::App: {
      std::vector<Term> args;
      for (const auto& a : t->args) args.push_back(subst_term(a, theta));
      return Term::app(t->fn, std::move(args));
    }
    case TermKind::Swap:
      return Term::swap(subst_term(t->args[0], theta), subst_term(t->args[1], theta),
                        subst_term(t->args[2], theta));
    case TermKind::Abs: return Term::abs(subst_term(t->args[0], theta), subst_term(t->args[1], theta));
  }
  return t;
}

Goal subst_goal(const Goal& g, const NSubst& theta) {
  switch (g.kind()) {
    case GoalKind::Top: return g;
    case GoalKind::Atom: {
      std::vector<Term> args;
      for (const auto& a : g->args) args.push_back(subst_term(a, theta));
      return Goal::atom(g->pred, std::move(args));
    }
    case GoalKind::Fresh: return Goal::fresh(subst_term(g->args[0], theta), subst_term(g->args[1], theta));
    case GoalKind::Eq: return Goal::eq(subst_term(g->args[0], theta), subst_term(g->args[1], theta));
    case GoalKind::DotEq: return Goal::doteq(subst_term(g->args[0], theta), subst_term(g->args[1], theta));
    case GoalKind::And: return Goal::conj(subst_goal(g->left, theta), subst_goal(g->right, theta));
    case GoalKind::Or: return Goal::disj(subst_goal(g->left, theta), subst_goal(g->right, theta));
    case GoalKind::Exists: {
      NSubst inner = theta;
      inner.erase(g->var);
      if (inner.empty()) return g;
      std::set<std::string> range_vars;
      for (const auto& [_, v] : inner) {
        auto fv = free_vars(v);
        range_vars.insert(fv.begin(), fv.end());
      }
      if (!range_vars.count(g->var)) return Goal::exists(g->var, g->type, subst_goal(g->body, inner));
      auto avoid = range_vars;
      auto fvb = free_vars(g->body);
      avoid.insert(fvb.begin(), fvb.end());
      std::string nv = fresh_var_id(g->var, avoid);
      NSubst ren{{g->var, Term::var(nv, g->type)}};
      return Goal::exists(nv, g->type, subst_goal(subst_goal(g->body, ren), inner));
    }
    case GoalKind::New: {
      std::set<Name> range_names;
      for (const auto& [_, v] : theta) {
        auto ns = names_of(v);
        range_names.insert(ns.begin(), ns.end());
      }
      if (!range_names.count(g->name)) return Goal::fresh_name(g->name, subst_goal(g->body, theta));
      auto avoid = range_names;
      auto nb = names_of(g->body);
      avoid.insert(nb.begin(), nb.end());
      avoid.insert(g->name);
      Name fresh = fresh_name_like(g->name, avoid);
      Goal renamed = swap_goal(Permutation::swap(g->name, fresh), g->body);
      return Goal::fresh_name(fresh, subst_goal(renamed, theta));
    }
  }
  return g;
}

bool goal_eq_core(const Goal& g, const Goal& h) {
  if (g.kind() != h.kind()) return false;
  switch (g.kind()) {
    case GoalKind::Top: return true;
    case GoalKind::Atom:
      if (g->pred != h->pred) return false;
      [[fallthrough]];
    case GoalKind::Fresh:
    case GoalKind::Eq:
    case GoalKind::DotEq:
      if (g->args.size() != h->args.size()) return false;
      for (size_t i = 0; i < g->args.size(); ++i)
        if (!alpha_eq_open(g->args[i], h->args[i])) return false;
      return true;
    case GoalKind::And:
    case GoalKind::Or: return goal_eq_core(g->left, h->left) && goal_eq_core(g->right, h->right);
    case GoalKind::Exists: {
      if (g->type != h->type) return false;
      if (g->var == h->var) return goal_eq_core(g->body, h->body);
      auto avoid = free_vars(g->body);
      auto fh = free_vars(h->body);
      avoid.insert(fh.begin(), fh.end());
      std::string z = fresh_var_id(g->var, avoid);
      Term zt = Term::var(z, g->type);
      return goal_eq_core(subst_goal(g->body, {{g->var, zt}}), subst_goal(h->body, {{h->var, zt}}));
    }
    case GoalKind::New: {
      if (g->name.ntype != h->name.ntype) return false;
      if (g->name == h->name) return goal_eq_core(g->body, h->body);
      auto avoid = names_of(g->body);
      auto nh = names_of(h->body);
      avoid.insert(nh.begin(), nh.end());
      avoid.insert(g->name);
      avoid.insert(h->name);
      Name c = fresh_name_like(g->name, avoid);
      return goal_eq_core(swap_goal(Permutation::swap(g->name, c), g->body),
                          swap_goal(Permutation::swap(h->name, c), h->body));
    }
  }
  return false;
}

bool fresh_goal_core(const Name& a, const Goal& g) {
  switch (g.kind()) {
    case GoalKind::Top: return true;
    case GoalKind::Atom:
    case GoalKind::Fresh:
    case GoalKind::Eq:
    case GoalKind::DotEq:
      for (const auto& t : g->args)
        if (!fresh_core(a, t, true)) return false;
      return true;
    case GoalKind::And:
    case GoalKind::Or: return fresh_goal_core(a, g->left) && fresh_goal_core(a, g->right);
    case GoalKind::Exists: return fresh_goal_core(a, g->body);
    case GoalKind::New: return g->name == a || fresh_goal_core(a, g->body);
  }
  return true;
}

}  // namespace

Term push_swaps(const Term& t) {
  if (t.kind() != TermKind::Swap) return t;
  Term l = push_swaps(t->args[0]), r = push_swaps(t->args[1]);
  if (l.is_name() && r.is_name()) return push_swaps(swap_term(Permutation::swap(l->name, r->name), t->args[2]));
  return t;
}

Term swap_apply(const Permutation& pi, const Term& t) { return swap_term(pi, t); }
Goal swap_apply(const Permutation& pi, const Goal& g) { return swap_goal(pi, g); }

bool freshness_check(const Name& a, const Term& t) {
  require_ground(t, "freshness_check");
  return fresh_core(a, t, false);
}

bool alpha_eq(const Term& t, const Term& u) {
  require_ground(t, "alpha_eq");
  require_ground(u, "alpha_eq");
  return alpha_core(t, u);
}

std::set<Name> support(const Term& t) {
  require_ground(t, "support");
  std::set<Name> out;
  for (const auto& a : names_of(t))
    if (!fresh_core(a, t, false)) out.insert(a);
  return out;
}

bool alpha_eq_open(const Term& t, const Term& u) { return alpha_core(t, u); }
bool fresh_open(const Name& a, const Term& t) { return fresh_core(a, t, true); }
bool fresh_for_goal(const Name& a, const Goal& g) { return fresh_goal_core(a, g); }
bool goal_alpha_eq(const Goal& g, const Goal& h) { return goal_eq_core(g, h); }

Term substitute(const Term& t, const NSubst& theta) { return subst_term(t, theta); }
Goal substitute(const Goal& g, const NSubst& theta) { return subst_goal(g, theta); }

Name fresh_name_like(const Name& like, const std::set<Name>& avoid) {
  for (;;) {
    Name n{fresh_id(like.id, ++rename_counter()), like.ntype};
    if (!avoid.count(n)) return n;
  }
}

}  // namespace nomhoas::nominal
