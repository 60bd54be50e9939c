#include <algorithm>
#include <unordered_map>

#include "nomhoas/nominal/engine.hpp"
#include "nomhoas/nominal/enumerate.hpp"
#include "nomhoas/nominal/relations.hpp"

namespace nomhoas::nominal {

namespace {

class Matcher {
 public:
  Matcher(const ProgramClause& c, const std::vector<Name>& pool, TermEnumerator& en, const SearchLimits& lim)
      : c_(c), pool_(pool), en_(en), lim_(lim) {}

  // args already carried back through pi^-1
  bool run(const std::vector<Term>& targs, const std::function<bool(const NSubst&)>& k) {
    NSubst theta;
    return match_list(targs, 0, theta, k);
  }

 private:
  bool match_list(const std::vector<Term>& targs, size_t i, NSubst& theta,
                  const std::function<bool(const NSubst&)>& k) {
    if (i == targs.size()) return body_only(0, theta, k);
    return match(c_.head[i], targs[i], theta, [&](NSubst& th) { return match_list(targs, i + 1, th, k); });
  }

  // Universals not fixed by the head range over all small ground terms.
  bool body_only(size_t i, NSubst& theta, const std::function<bool(const NSubst&)>& k) {
    if (i == c_.universals.size()) return k(theta);
    const TypedVar& u = c_.universals[i];
    if (theta.count(u.id)) return body_only(i + 1, theta, k);
    for (const auto& t : en_.up_to(u.type, lim_.term_size_bound)) {
      theta[u.id] = t;
      if (body_only(i + 1, theta, k)) return true;
    }
    theta.erase(u.id);
    return false;
  }

  using K = std::function<bool(NSubst&)>;

  // Resolves a binder position to a name, enumerating when it is an
  // unbound name-typed variable.
  bool as_name(const Term& p, NSubst& theta, const std::function<bool(const Name&, NSubst&)>& k) {
    Term q = push_swaps(substitute(p, theta));
    if (q.is_name()) return k(q->name, theta);
    if (!q.is_var()) return false;
    for (const auto& n : pool_) {
      if (n.ntype != q->type.id) continue;
      NSubst th = theta;
      th[q->var] = Term::name(n);
      if (k(n, th)) return true;
    }
    return false;
  }

  bool match(const Term& p, const Term& t, NSubst& theta, const K& k) {
    switch (p.kind()) {
      case TermKind::Var: {
        auto it = theta.find(p->var);
        if (it != theta.end()) return alpha_eq(it->second, t) && k(theta);
        theta[p->var] = t;
        if (k(theta)) return true;
        theta.erase(p->var);
        return false;
      }
      case TermKind::NameRef: return t.is_name() && t->name == p->name && k(theta);
      case TermKind::App: {
        if (t.kind() != TermKind::App || t->fn != p->fn || t->args.size() != p->args.size()) return false;
        return match_args(p, t, 0, theta, k);
      }
      case TermKind::Abs: {
        if (t.kind() != TermKind::Abs) return false;
        return as_name(p->args[0], theta, [&](const Name& b, NSubst& th) {
          const Name& c = t->args[0]->name;
          if (b == c) return match(p->args[1], t->args[1], th, k);
          if (!freshness_check(b, t->args[1])) return false;
          return match(p->args[1], swap_apply(Permutation::swap(b, c), t->args[1]), th, k);
        });
      }
      case TermKind::Swap: {
        return as_name(p->args[0], theta, [&](const Name& l, NSubst& th) {
          return as_name(p->args[1], th, [&](const Name& r, NSubst& th2) {
            return match(p->args[2], swap_apply(Permutation::swap(l, r), t), th2, k);
          });
        });
      }
    }
    return false;
  }

  bool match_args(const Term& p, const Term& t, size_t i, NSubst& theta, const K& k) {
    if (i == p->args.size()) return k(theta);
    return match(p->args[i], t->args[i], theta, [&](NSubst& th) { return match_args(p, t, i + 1, th, k); });
  }

  const ProgramClause& c_;
  const std::vector<Name>& pool_;
  TermEnumerator& en_;
  const SearchLimits& lim_;
};

void injections(const std::vector<Name>& from, const std::vector<Name>& pool, std::vector<Name>& cur,
                const std::function<bool(const std::vector<Name>&)>& k, bool& stop) {
  if (stop) return;
  if (cur.size() == from.size()) {
    stop = k(cur);
    return;
  }
  const Name& a = from[cur.size()];
  for (const auto& n : pool) {
    if (n.ntype != a.ntype || std::find(cur.begin(), cur.end(), n) != cur.end()) continue;
    cur.push_back(n);
    injections(from, pool, cur, k, stop);
    cur.pop_back();
    if (stop) return;
  }
}

void match_in_pool(const std::vector<Term>& args, const ProgramClause& clause, const std::vector<Name>& pool,
                   TermEnumerator& en, const SearchLimits& lim, const MatchCallback& k) {
  if (args.size() != clause.head.size()) return;
  std::vector<Name> cur;
  bool stop = false;
  injections(clause.new_names, pool, cur, [&](const std::vector<Name>& targets) {
    Permutation pi = Permutation::from_injection(clause.new_names, targets);
    Permutation inv = pi.inverse();
    std::vector<Term> targs;
    for (const auto& a : args) targs.push_back(swap_apply(inv, a));
    Matcher m(clause, pool, en, lim);
    return m.run(targs, [&](const NSubst& theta) {
      for (size_t i = 0; i < args.size(); ++i)
        if (!alpha_eq(args[i], swap_apply(pi, substitute(clause.head[i], theta)))) return false;
      return k(pi, theta);
    });
  }, stop);
}

class Oracle {
 public:
  Oracle(const Program& prog, std::vector<Name> pool, const SearchLimits& lim)
      : prog_(prog), pool_(std::move(pool)), en_(prog.sig, pool_), lim_(lim) {}

  bool cutoff = false;

  std::optional<NDerivation> prove(const Goal& g, int budget) {
    std::string key = std::to_string(budget) + "|" + g.str();
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto r = prove_uncached(g, budget);
    memo_[key] = r;
    return r;
  }

 private:
  static NDerivation node(NRule r, const Goal& g) {
    NDerivation n;
    n.rule = r;
    n.goal = g;
    return n;
  }

  std::optional<NDerivation> prove_uncached(const Goal& g, int budget) {
    switch (g.kind()) {
      case GoalKind::Top: return node(NRule::True, g);
      case GoalKind::Fresh: {
        Term a = push_swaps(g->args[0]);
        if (a.is_name() && freshness_check(a->name, g->args[1])) return node(NRule::Fresh, g);
        return std::nullopt;
      }
      case GoalKind::Eq:
        if (alpha_eq(g->args[0], g->args[1])) return node(NRule::Equal, g);
        return std::nullopt;
      case GoalKind::DotEq: throw TypeError("distinguished =. goals cannot be solved directly");
      case GoalKind::And: {
        auto l = prove(g->left, budget);
        if (!l) return std::nullopt;
        auto r = prove(g->right, budget);
        if (!r) return std::nullopt;
        NDerivation n = node(NRule::And, g);
        n.children = {*l, *r};
        return n;
      }
      case GoalKind::Or: {
        if (auto l = prove(g->left, budget)) {
          NDerivation n = node(NRule::OrLeft, g);
          n.children = {*l};
          return n;
        }
        if (auto r = prove(g->right, budget)) {
          NDerivation n = node(NRule::OrRight, g);
          n.children = {*r};
          return n;
        }
        return std::nullopt;
      }
      case GoalKind::Exists: {
        for (const auto& t : en_.up_to(g->type, lim_.term_size_bound)) {
          if (auto d = prove(substitute(g->body, NSubst{{g->var, t}}), budget)) {
            NDerivation n = node(NRule::Exists, g);
            n.witness = t;
            n.children = {*d};
            return n;
          }
        }
        return std::nullopt;
      }
      case GoalKind::New: {
        auto present = names_of(g);
        for (const auto& n : pool_) {
          if (n.ntype != g->name.ntype || present.count(n) || n == g->name) continue;
          auto d = prove(swap_apply(Permutation::swap(g->name, n), g->body), budget);
          if (!d) return std::nullopt;
          NDerivation out = node(NRule::New, g);
          out.new_name = n;
          out.children = {*d};
          return out;
        }
        cutoff = true;  // name pool exhausted
        return std::nullopt;
      }
      case GoalKind::Atom: {
        for (size_t i = 0; i < prog_.clauses.size(); ++i) {
          const ProgramClause& c = prog_.clauses[i];
          if (c.pred != g->pred) continue;
          if (budget <= 0) {
            cutoff = true;
            return std::nullopt;
          }
          std::optional<NDerivation> found;
          match_in_pool(g->args, c, pool_, en_, lim_, [&](const Permutation& pi, const NSubst& theta) {
            auto d = prove(swap_apply(pi, substitute(c.body, theta)), budget - 1);
            if (!d) return false;
            NDerivation n = node(NRule::Backchain, g);
            n.clause = static_cast<int>(i);
            n.pi = pi;
            n.theta = theta;
            n.children = {*d};
            found = std::move(n);
            return true;
          });
          if (found) return found;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  const Program& prog_;
  std::vector<Name> pool_;
  TermEnumerator en_;
  const SearchLimits& lim_;
  std::unordered_map<std::string, std::optional<NDerivation>> memo_;
};

}  // namespace

void equivariant_match(const Signature& sig, const std::vector<Term>& args, const ProgramClause& clause,
                       const std::vector<Name>& pool, const SearchLimits& lim, const MatchCallback& k) {
  TermEnumerator en(sig, pool);
  match_in_pool(args, clause, pool, en, lim, k);
}

std::vector<std::pair<Permutation, NSubst>> equivariant_match(const Signature& sig, const std::vector<Term>& args,
                                                              const ProgramClause& clause,
                                                              const SearchLimits& lim) {
  std::set<Name> base;
  for (const auto& a : args) {
    auto ns = names_of(a);
    base.insert(ns.begin(), ns.end());
  }
  collect_names(clause, base);
  auto pool = name_pool(sig, base, std::max<int>(lim.fresh_name_budget, static_cast<int>(clause.new_names.size())));
  std::vector<std::pair<Permutation, NSubst>> out;
  equivariant_match(sig, args, clause, pool, lim, [&](const Permutation& pi, const NSubst& theta) {
    out.emplace_back(pi, theta);
    return false;
  });
  return out;
}

NSolveResult oracle_solve(const Program& prog, const Goal& g, const SearchLimits& lim) {
  if (!g.ground()) throw TypeError("oracle_solve requires a ground goal: " + g.str());
  std::set<Name> base = names_of(g);
  for (const auto& c : prog.clauses) collect_names(c, base);
  auto pool = name_pool(prog.sig, base, lim.fresh_name_budget);
  NSolveResult res;
  for (int d = 0; d <= lim.max_unfoldings; ++d) {
    Oracle o(prog, pool, lim);
    auto r = o.prove(g, d);
    if (r) {
      res.derivation = std::move(r);
      res.status = SearchStatus::Proved;
      res.depth = d;
      return res;
    }
    if (!o.cutoff) {
      res.status = SearchStatus::Exhausted;
      return res;
    }
  }
  res.status = SearchStatus::CutOff;
  return res;
}

}  // namespace nomhoas::nominal
