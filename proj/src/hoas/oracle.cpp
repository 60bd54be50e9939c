#include <algorithm>
#include <functional>
#include <unordered_map>

#include "nomhoas/hoas/engine.hpp"
#include "nomhoas/hoas/enumerate.hpp"

namespace nomhoas::hoas {

namespace {

// Replaces the given atoms (loose bound variables relative to depth d, or
// nominal constants) by the variables of a new lambda prefix.
HTerm abstract_atoms(const HTerm& t, const std::vector<HTerm>& atoms, int d, bool& ok) {
  int n = static_cast<int>(atoms.size());
  auto position = [&](const HTerm& a) {
    for (int i = 0; i < n; ++i)
      if (atoms[i] == a) return i;
    return -1;
  };
  std::function<HTerm(const HTerm&, int)> go = [&](const HTerm& s, int e) -> HTerm {
    switch (s.kind()) {
      case HKind::Lam: return HTerm::lam(s->name, s.ty()->dom, go(s->args[0], e + 1));
      case HKind::App: {
        HTerm h = go(s->head, e);
        std::vector<HTerm> as;
        for (const auto& a : s->args) as.push_back(go(a, e));
        return HTerm::app(h, std::move(as));
      }
      case HKind::BVar: {
        if (s->index < e) return s;
        int p = position(HTerm::bvar(s->index - e, s.ty()));
        if (p < 0) {
          ok = false;
          return s;
        }
        return HTerm::bvar(e + n - 1 - p, s.ty());
      }
      case HKind::Nom: {
        int p = position(s);
        return p < 0 ? s : HTerm::bvar(e + n - 1 - p, s.ty());
      }
      default: return s;
    }
  };
  HTerm body = go(t, 0);
  (void)d;
  for (int i = n - 1; i >= 0; --i) body = HTerm::lam("y", atoms[i].ty(), body);
  return normalize(body);
}

class Matcher {
 public:
  Matcher(const DefClause& c, HTermEnumerator& en, const SearchLimits& lim) : c_(c), en_(en), lim_(lim) {}

  using K = std::function<bool(HSubst&)>;

  bool run(const std::vector<HTerm>& pats, const std::vector<HTerm>& args, const K& k) {
    HSubst theta;
    return list(pats, args, 0, theta, k);
  }

 private:
  bool list(const std::vector<HTerm>& pats, const std::vector<HTerm>& args, size_t i, HSubst& theta, const K& k) {
    if (i == pats.size()) return rest(0, theta, k);
    return match(pats[i], args[i], 0, theta, [&](HSubst& th) { return list(pats, args, i + 1, th, k); });
  }

  // Universals not fixed by matching range over small closed terms.
  bool rest(size_t i, HSubst& theta, const K& k) {
    if (i == c_.universals.size()) return k(theta);
    const auto& [x, t] = c_.universals[i];
    if (theta.count(x)) return rest(i + 1, theta, k);
    for (const auto& v : en_.up_to(t, lim_.term_size_bound)) {
      theta[x] = v;
      if (rest(i + 1, theta, k)) return true;
    }
    theta.erase(x);
    return false;
  }

  bool is_universal(const std::string& n) const {
    for (const auto& u : c_.universals)
      if (u.first == n) return true;
    return false;
  }

  bool match(const HTerm& p, const HTerm& t, int d, HSubst& theta, const K& k) {
    if (p.kind() == HKind::Lam) {
      if (t.kind() != HKind::Lam) return false;
      return match(p->args[0], t->args[0], d + 1, theta, k);
    }
    const HTerm& h = p.head();
    if (h.kind() == HKind::FVar && is_universal(h->name)) {
      auto it = theta.find(h->name);
      if (it != theta.end()) return hsubstitute(p, theta) == t && k(theta);
      std::vector<HTerm> atoms;
      bool pattern = true;
      for (const auto& a : p.args()) {
        HTerm at = eta_atom(a);
        if (!at.valid() || std::find(atoms.begin(), atoms.end(), at) != atoms.end()) {
          pattern = false;
          break;
        }
        atoms.push_back(at);
      }
      if (!pattern) return k(theta);  // settled by enumeration and the final check
      bool ok = true;
      HTerm v = abstract_atoms(t, atoms, d, ok);
      if (!ok || has_loose_bvars(v)) return false;
      theta[h->name] = v;
      if (k(theta)) return true;
      theta.erase(h->name);
      return false;
    }
    if (t.kind() == HKind::Lam) return false;
    const HTerm& th = t.head();
    if (h.kind() != th.kind()) return false;
    if (h.kind() == HKind::BVar ? h->index != th->index : h->name != th->name) return false;
    if (p.args().size() != t.args().size()) return false;
    return args(p.args(), t.args(), 0, d, theta, k);
  }

  bool args(const std::vector<HTerm>& ps, const std::vector<HTerm>& ts, size_t i, int d, HSubst& theta, const K& k) {
    if (i == ps.size()) return k(theta);
    return match(ps[i], ts[i], d, theta, [&](HSubst& th) { return args(ps, ts, i + 1, d, th, k); });
  }

  const DefClause& c_;
  HTermEnumerator& en_;
  const SearchLimits& lim_;
};

class Oracle {
 public:
  Oracle(const Definition& defs, std::vector<HTerm> pool, const SearchLimits& lim, const GOptions& opt)
      : defs_(defs), pool_(std::move(pool)), en_(defs.sig, pool_), lim_(lim), opt_(opt) {}

  bool cutoff = false;

  std::optional<GDerivation> prove(const Formula& g, int budget) {
    std::string key = std::to_string(budget) + "|" + g.key();
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto r = uncached(g, budget);
    memo_[key] = r;
    return r;
  }

 private:
  static GDerivation node(GRule r, const Formula& g) {
    GDerivation n;
    n.rule = r;
    n.goal = g;
    return n;
  }

  std::optional<GDerivation> uncached(const Formula& g, int budget) {
    switch (g.kind()) {
      case FKind::Top: return node(GRule::Top, g);
      case FKind::Eq:
        if (normalize(g->args[0]) == normalize(g->args[1])) return node(GRule::Eq, g);
        return std::nullopt;
      case FKind::And: {
        auto l = prove(g->left, budget);
        if (!l) return std::nullopt;
        auto r = prove(g->right, budget);
        if (!r) return std::nullopt;
        GDerivation n = node(GRule::And, g);
        n.children = {*l, *r};
        return n;
      }
      case FKind::Or: {
        if (auto l = prove(g->left, budget)) {
          GDerivation n = node(GRule::OrLeft, g);
          n.children = {*l};
          return n;
        }
        if (auto r = prove(g->right, budget)) {
          GDerivation n = node(GRule::OrRight, g);
          n.children = {*r};
          return n;
        }
        return std::nullopt;
      }
      case FKind::Exists: {
        for (const auto& t : en_.up_to(g->vty, lim_.term_size_bound)) {
          if (auto d = prove(fsubstitute(g.body(), {{g->var, t}}), budget)) {
            GDerivation n = node(GRule::Exists, g);
            n.witness = t;
            n.children = {*d};
            return n;
          }
        }
        return std::nullopt;
      }
      case FKind::Nabla: {
        auto present = fsupport(g);
        for (const auto& c : pool_) {
          if (!ty_equal(c.ty(), g->vty) || present.count(c->name)) continue;
          auto d = prove(fsubstitute(g.body(), {{g->var, c}}), budget);
          if (!d) return std::nullopt;
          GDerivation n = node(GRule::Nabla, g);
          n.nom = c->name;
          n.children = {*d};
          return n;
        }
        cutoff = true;
        return std::nullopt;
      }
      case FKind::Atom: {
        bool counted = !opt_.uncounted.count(g->pred);
        for (size_t i = 0; i < defs_.clauses.size(); ++i) {
          if (defs_.clauses[i].pred != g->pred) continue;
          if (counted && budget <= 0) {
            cutoff = true;
            return std::nullopt;
          }
          auto inst = instantiate_clause_types(defs_, defs_.clauses[i], g->args);
          if (!inst) continue;
          if (auto d = unfold(g, static_cast<int>(i), *inst, counted ? budget - 1 : budget)) return d;
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<GDerivation> unfold(const Formula& g, int ci, const DefClause& c, int budget) {
    std::optional<GDerivation> found;
    std::vector<std::string> zs;
    std::function<bool()> choose = [&]() -> bool {
      if (zs.size() == c.nablas.size()) return try_match(g, ci, c, zs, budget, found);
      for (const auto& p : pool_) {
        if (!ty_equal(p.ty(), c.nablas[zs.size()].second)) continue;
        if (std::find(zs.begin(), zs.end(), p->name) != zs.end()) continue;
        zs.push_back(p->name);
        bool stop = choose();
        zs.pop_back();
        if (stop) return true;
      }
      return false;
    };
    choose();
    return found;
  }

  bool try_match(const Formula& g, int ci, const DefClause& c, const std::vector<std::string>& zs, int budget,
                 std::optional<GDerivation>& found) {
    HSubst zren;
    for (size_t i = 0; i < zs.size(); ++i) zren[c.nablas[i].first] = HTerm::nom(zs[i], c.nablas[i].second);
    std::vector<HTerm> pats;
    for (const auto& h : c.head) pats.push_back(hsubstitute(h, zren));
    Matcher m(c, en_, lim_);
    return m.run(pats, g->args, [&](HSubst& theta) {
      for (const auto& [x, v] : theta)
        for (const auto& n : hsupport(v))
          if (std::find(zs.begin(), zs.end(), n) != zs.end()) return false;
      HSubst full = theta;
      for (const auto& [z, t] : zren) full[z] = t;
      for (size_t i = 0; i < pats.size(); ++i)
        if (hsubstitute(c.head[i], full) != normalize(g->args[i])) return false;
      auto d = prove(fsubstitute(c.body, full), budget);
      if (!d) return false;
      GDerivation n = node(GRule::Def, g);
      n.clause = ci;
      n.zs = zs;
      n.theta = theta;
      n.children = {*d};
      found = std::move(n);
      return true;
    });
  }

  const Definition& defs_;
  std::vector<HTerm> pool_;
  HTermEnumerator en_;
  const SearchLimits& lim_;
  const GOptions& opt_;
  std::unordered_map<std::string, std::optional<GDerivation>> memo_;
};

}  // namespace

GSolveResult goracle_solve(const Definition& defs, const Formula& goal, const SearchLimits& lim,
                           const GOptions& opt) {
  if (!ffree_vars(goal).empty()) throw HTypeError("goracle_solve requires a closed goal: " + goal.str());
  std::map<std::string, TyP> base;
  f_collect_noms(goal, base);
  auto pool = nominal_pool(defs.sig, base, lim.fresh_name_budget);
  GSolveResult res;
  for (int d = 0; d <= lim.max_unfoldings; ++d) {
    Oracle o(defs, pool, lim, opt);
    auto r = o.prove(goal, d);
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

}  // namespace nomhoas::hoas
