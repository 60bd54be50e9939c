#include "nomhoas/nominal/unify.hpp"

#include <algorithm>

namespace nomhoas::nominal {

namespace {

// Drops trivial swaps so suspensions stay short.
Permutation tidy(const Permutation& p) {
  Permutation out;
  for (const auto& s : p.swaps) {
    if (s.first == s.second) continue;
    if (!out.swaps.empty()) {
      const auto& last = out.swaps.back();
      if ((last.first == s.first && last.second == s.second) || (last.first == s.second && last.second == s.first)) {
        out.swaps.pop_back();
        continue;
      }
    }
    out.swaps.push_back(s);
  }
  return out;
}

UResult split_on(const Term& v) {
  UResult r;
  r.status = UStatus::Split;
  r.var = v->var;
  r.type = v->type;
  return r;
}

bool occurs(const UnifState& s, const std::string& x, const Term& t) {
  Term h = head_norm(s, t);
  if (h.is_var()) return h->var == x;
  for (const auto& a : h->args)
    if (occurs(s, x, a)) return true;
  return false;
}

void add_constraint(UnifState& s, const Name& a, const std::string& x) {
  std::pair<Name, std::string> c{a, x};
  if (std::find(s.fresh.begin(), s.fresh.end(), c) == s.fresh.end()) s.fresh.push_back(c);
}

UResult bind_var(UnifState& s, const std::string& x, const Term& v) {
  if (occurs(s, x, v)) return UResult::fail();
  s.bind[x] = v;
  std::vector<Name> pending;
  auto it = s.fresh.begin();
  while (it != s.fresh.end()) {
    if (it->second == x) {
      pending.push_back(it->first);
      it = s.fresh.erase(it);
    } else {
      ++it;
    }
  }
  for (const auto& a : pending) {
    UResult r = unify_fresh(s, Term::name(a), v);
    if (r.status != UStatus::Ok) return r;
  }
  return UResult::ok();
}

}  // namespace

Term perm_apply(const Permutation& pi, const Term& t) {
  if (pi.empty()) return t;
  switch (t.kind()) {
    case TermKind::NameRef: return Term::name(pi.apply(t->name));
    case TermKind::Var: return Term::var(t->var, t->type, tidy(pi.compose(t->susp)));
    case TermKind::App: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(perm_apply(pi, a));
      return Term::app(t->fn, std::move(args));
    }
    case TermKind::Swap:
      return Term::swap(perm_apply(pi, t->args[0]), perm_apply(pi, t->args[1]), perm_apply(pi, t->args[2]));
    case TermKind::Abs: return Term::abs(perm_apply(pi, t->args[0]), perm_apply(pi, t->args[1]));
  }
  return t;
}

Term head_norm(const UnifState& s, const Term& t0) {
  Term t = t0;
  for (;;) {
    if (t.is_var()) {
      auto it = s.bind.find(t->var);
      if (it == s.bind.end()) return t;
      t = perm_apply(t->susp, it->second);
      continue;
    }
    if (t.kind() == TermKind::Swap) {
      Term l = head_norm(s, t->args[0]);
      Term r = head_norm(s, t->args[1]);
      if (!l.is_name() || !r.is_name()) return Term::swap(l, r, t->args[2]);
      t = perm_apply(Permutation::swap(l->name, r->name), t->args[2]);
      continue;
    }
    return t;
  }
}

Term resolve(const UnifState& s, const Term& t) {
  Term h = head_norm(s, t);
  switch (h.kind()) {
    case TermKind::NameRef:
    case TermKind::Var: return h;
    case TermKind::App: {
      std::vector<Term> args;
      for (const auto& a : h->args) args.push_back(resolve(s, a));
      return Term::app(h->fn, std::move(args));
    }
    case TermKind::Swap: return Term::swap(resolve(s, h->args[0]), resolve(s, h->args[1]), resolve(s, h->args[2]));
    case TermKind::Abs: return Term::abs(resolve(s, h->args[0]), resolve(s, h->args[1]));
  }
  return h;
}

UResult unify_eq(UnifState& s, const Term& t0, const Term& u0) {
  Term t = head_norm(s, t0), u = head_norm(s, u0);
  if (t.is_var() && u.is_var() && t->var == u->var) {
    for (const auto& a : Permutation::disagreement(t->susp, u->susp)) add_constraint(s, a, t->var);
    return UResult::ok();
  }
  if (t.is_var()) return bind_var(s, t->var, perm_apply(t->susp.inverse(), u));
  if (u.is_var()) return bind_var(s, u->var, perm_apply(u->susp.inverse(), t));
  if (t.kind() == TermKind::Swap) return split_on(t->args[0].is_var() ? t->args[0] : t->args[1]);
  if (u.kind() == TermKind::Swap) return split_on(u->args[0].is_var() ? u->args[0] : u->args[1]);
  if (t.kind() != u.kind()) return UResult::fail();
  switch (t.kind()) {
    case TermKind::NameRef: return t->name == u->name ? UResult::ok() : UResult::fail();
    case TermKind::App: {
      if (t->fn != u->fn || t->args.size() != u->args.size()) return UResult::fail();
      for (size_t i = 0; i < t->args.size(); ++i) {
        UResult r = unify_eq(s, t->args[i], u->args[i]);
        if (r.status != UStatus::Ok) return r;
      }
      return UResult::ok();
    }
    case TermKind::Abs: {
      Term a = head_norm(s, t->args[0]), b = head_norm(s, u->args[0]);
      if (a.is_var()) return split_on(a);
      if (b.is_var()) return split_on(b);
      if (a->name == b->name) return unify_eq(s, t->args[1], u->args[1]);
      UResult r = unify_fresh(s, a, u->args[1]);
      if (r.status != UStatus::Ok) return r;
      return unify_eq(s, t->args[1], perm_apply(Permutation::swap(a->name, b->name), u->args[1]));
    }
    default: return UResult::fail();
  }
}

UResult unify_fresh(UnifState& s, const Term& a0, const Term& t0) {
  Term a = head_norm(s, a0);
  if (a.is_var()) return split_on(a);
  if (!a.is_name()) return UResult::fail();
  const Name& n = a->name;
  Term t = head_norm(s, t0);
  switch (t.kind()) {
    case TermKind::NameRef: return t->name != n ? UResult::ok() : UResult::fail();
    case TermKind::Var: add_constraint(s, t->susp.inverse().apply(n), t->var); return UResult::ok();
    case TermKind::App:
      for (const auto& x : t->args) {
        UResult r = unify_fresh(s, a, x);
        if (r.status != UStatus::Ok) return r;
      }
      return UResult::ok();
    case TermKind::Swap: return split_on(t->args[0].is_var() ? t->args[0] : t->args[1]);
    case TermKind::Abs: {
      Term b = head_norm(s, t->args[0]);
      if (b.is_var()) return split_on(b);
      if (b->name == n) return UResult::ok();
      return unify_fresh(s, a, t->args[1]);
    }
  }
  return UResult::fail();
}

void unbound_vars(const UnifState& s, const Term& t, std::map<std::string, Type>& out) {
  Term h = head_norm(s, t);
  if (h.is_var()) {
    out.emplace(h->var, h->type);
    return;
  }
  for (const auto& a : h->args) unbound_vars(s, a, out);
}

}  // namespace nomhoas::nominal
