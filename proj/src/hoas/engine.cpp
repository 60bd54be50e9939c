#include "nomhoas/hoas/engine.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "nomhoas/hoas/enumerate.hpp"
#include "nomhoas/hoas/parser.hpp"
#include "nomhoas/hoas/unify.hpp"

namespace nomhoas::hoas {

namespace {

constexpr const char* kRuleNames[] = {"topR", "eqR", "andR", "orR-left", "orR-right", "existsR", "nablaR", "defR"};

std::string nom_stem(const std::string& s) {
  std::string b = s.substr(0, s.find('$'));
  if (b.empty() || !std::isalpha(static_cast<unsigned char>(b[0]))) b = "n";
  b[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(b[0])));
  return b;
}

struct GState {
  HUnifState u;
  std::vector<std::pair<std::string, TyP>> known;
  std::set<std::string> used_ids;
  unsigned long long counter = 0;

  HTerm fresh_nom(const std::string& stem, const TyP& ty, int stamp) {
    std::string b = nom_stem(stem);
    for (;;) {
      std::string id = b + "$" + std::to_string(++counter);
      if (used_ids.insert(id).second) {
        if (stamp) u.nom_stamp[id] = stamp;
        known.emplace_back(id, ty);
        return HTerm::nom(id, ty);
      }
    }
  }
};

using Cont = std::function<bool(GState&, GDerivation&&)>;

// Base types whose closed inhabitants may contain constants of another type.
std::map<std::string, std::set<std::string>> type_reach(const HSignature& sig) {
  std::map<std::string, std::set<std::string>> r;
  std::function<void(const TyP&, std::set<std::string>&)> bases = [&](const TyP& t, std::set<std::string>& out) {
    if (t->kind == Ty::Arrow) {
      bases(t->dom, out);
      bases(t->cod, out);
    } else if (t->kind == Ty::Base) {
      out.insert(t->name);
    }
  };
  for (const auto& k : sig.kinds) r[k] = {k};
  for (const auto& n : sig.nominal_types) r[n] = {n};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : sig.const_order) {
      const TyP& t = sig.consts.at(c);
      std::string res = result_type(t)->name;
      std::set<std::string> feeds;
      for (const auto& a : arg_types(t)) bases(a, feeds);
      for (const auto& f : feeds)
        for (const auto& x : std::set<std::string>(r[f]))
          if (r[res].insert(x).second) changed = true;
    }
  }
  return r;
}

bool reaches(const std::map<std::string, std::set<std::string>>& reach, const TyP& t, const std::string& nu) {
  if (t->kind == Ty::Arrow) return reaches(reach, t->dom, nu) || reaches(reach, t->cod, nu);
  if (t->kind == Ty::Var) return true;
  auto it = reach.find(t->name);
  return it != reach.end() && it->second.count(nu);
}

// Smallest closed inhabitants, for grounding variables nothing constrains.
class Inhabitants {
 public:
  explicit Inhabitants(const HSignature& sig) : sig_(sig) {
    for (const auto& n : sig.nominal_types) cost_[n] = 1;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : sig.const_order) {
        const TyP& t = sig.consts.at(c);
        int total = 1;
        for (const auto& a : arg_types(t)) {
          auto it = cost_.find(result_type(a)->name);
          if (it == cost_.end()) {
            total = -1;
            break;
          }
          total += it->second + static_cast<int>(arg_types(a).size());
        }
        if (total < 0) continue;
        std::string res = result_type(t)->name;
        auto it = cost_.find(res);
        if (it == cost_.end() || total < it->second) {
          cost_[res] = total;
          best_[res] = c;
          changed = true;
        }
      }
    }
  }

  std::optional<HTerm> build(const TyP& t, const std::function<HTerm(const TyP&)>& fresh_nom) const {
    std::vector<TyP> pre = arg_types(t);
    TyP base = result_type(t);
    std::optional<HTerm> body;
    for (size_t i = 0; i < pre.size() && !body; ++i)
      if (ty_equal(pre[i], base)) body = HTerm::bvar(static_cast<int>(pre.size() - 1 - i), base);
    if (!body) body = base_term(base, fresh_nom);
    if (!body) return std::nullopt;
    HTerm v = *body;
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) v = HTerm::lam("x", *it, v);
    return normalize(v);
  }

 private:
  std::optional<HTerm> base_term(const TyP& base, const std::function<HTerm(const TyP&)>& fresh_nom) const {
    if (base->kind != Ty::Base) return std::nullopt;
    auto it = best_.find(base->name);
    if (it == best_.end()) {
      if (sig_.is_nominal(base)) return fresh_nom(base);
      return std::nullopt;
    }
    const TyP& ct = sig_.consts.at(it->second);
    std::vector<HTerm> args;
    for (const auto& a : arg_types(ct)) {
      auto x = build(a, fresh_nom);
      if (!x) return std::nullopt;
      args.push_back(*x);
    }
    return HTerm::app(HTerm::con(it->second, ct), args);
  }

  const HSignature& sig_;
  std::map<std::string, int> cost_;
  std::map<std::string, std::string> best_;
};

GDerivation leaf(GRule r, const Formula& g) {
  GDerivation n;
  n.rule = r;
  n.goal = g;
  return n;
}

class Searcher {
 public:
  Searcher(const Definition& defs, const SearchLimits& lim, const GOptions& opt)
      : defs_(defs), lim_(lim), opt_(opt), reach_(type_reach(defs.sig)), inhabitants_(defs.sig) {}

  bool cutoff = false;
  std::optional<GDerivation> result;

  bool prove(const Formula& g, GState& s, int budget, const Cont& k) {
    switch (g.kind()) {
      case FKind::Top: return k(s, leaf(GRule::Top, g));
      case FKind::Eq: {
        GState s1 = s;
        if (pattern_unify(s1.u, g->args[0], g->args[1]) == HUStatus::Fail) return false;
        return k(s1, leaf(GRule::Eq, g));
      }
      case FKind::And:
        return prove(g->left, s, budget, [&](GState& s1, GDerivation&& d1) {
          return prove(g->right, s1, budget, [&](GState& s2, GDerivation&& d2) {
            GDerivation n = leaf(GRule::And, g);
            n.children = {d1, std::move(d2)};
            return k(s2, std::move(n));
          });
        });
      case FKind::Or: {
        GState sl = s;
        if (prove(g->left, sl, budget, [&](GState& s1, GDerivation&& d) {
              GDerivation n = leaf(GRule::OrLeft, g);
              n.children = {std::move(d)};
              return k(s1, std::move(n));
            }))
          return true;
        GState sr = s;
        return prove(g->right, sr, budget, [&](GState& s1, GDerivation&& d) {
          GDerivation n = leaf(GRule::OrRight, g);
          n.children = {std::move(d)};
          return k(s1, std::move(n));
        });
      }
      case FKind::Exists: {
        GState s1 = s;
        HTerm v = s1.u.new_var(g->var, g->vty, ++s1.u.clock);
        Formula body = fsubstitute(g.body(), {{g->var, v}});
        return prove(body, s1, budget, [&](GState& s2, GDerivation&& d) {
          GDerivation n = leaf(GRule::Exists, g);
          n.witness = v;
          n.children = {std::move(d)};
          return k(s2, std::move(n));
        });
      }
      case FKind::Nabla: {
        GState s1 = s;
        HTerm c = s1.fresh_nom(g->var, g->vty, ++s1.u.clock);
        Formula body = fsubstitute(g.body(), {{g->var, c}});
        return prove(body, s1, budget, [&](GState& s2, GDerivation&& d) {
          GDerivation n = leaf(GRule::Nabla, g);
          n.nom = c->name;
          n.children = {std::move(d)};
          return k(s2, std::move(n));
        });
      }
      case FKind::Atom: {
        bool counted = !opt_.uncounted.count(g->pred);
        for (size_t i = 0; i < defs_.clauses.size(); ++i) {
          if (defs_.clauses[i].pred != g->pred) continue;
          if (counted && budget <= 0) {
            cutoff = true;
            return false;
          }
          if (defr(g, static_cast<int>(i), s, counted ? budget - 1 : budget, k)) return true;
        }
        return false;
      }
    }
    return false;
  }

  bool finish(GState& s, GDerivation&& d) {
    if (!s.u.postponed.empty()) return enumerate_postponed(s, d);
    std::map<std::string, TyP> open;
    collect_open(s, d, open);
    for (const auto& [x, ty] : open) {
      if (s.u.bind.count(x)) continue;
      auto v = inhabitants_.build(ty, [&](const TyP& nt) { return s.fresh_nom("n", nt, 0); });
      if (!v) return false;
      s.u.bind[x] = *v;
    }
    HSubst theta;
    for (const auto& [x, info] : s.u.vars) theta[x] = hresolve(s.u, HTerm::fvar(x, info.ty));
    result = ground(d, theta);
    return true;
  }

 private:
  // Non-pattern leftovers: try small closed instances for one variable.
  bool enumerate_postponed(GState& s, GDerivation& d) {
    std::map<std::string, TyP> open;
    for (const auto& [a, b] : s.u.postponed) {
      open_vars(s.u, a, open);
      open_vars(s.u, b, open);
    }
    if (open.empty()) return false;
    const auto& [x, ty] = *open.begin();
    std::vector<HTerm> noms;
    for (const auto& [n, t] : s.known)
      if (s.u.permitted(x, n)) noms.push_back(HTerm::nom(n, t));
    GState base = s;
    std::set<std::string> fresh_types;
    for (const auto& nt : defs_.sig.nominal_types) noms.push_back(base.fresh_nom("n", base_ty(nt), 0));
    HTermEnumerator en(defs_.sig, noms);
    for (const auto& v : en.up_to(ty, lim_.term_size_bound)) {
      GState s2 = base;
      s2.u.bind[x] = v;
      if (retry_postponed(s2.u) == HUStatus::Fail) continue;
      GDerivation copy = d;
      if (finish(s2, std::move(copy))) return true;
    }
    return false;
  }

  bool defr(const Formula& g, int ci, GState& s, int budget, const Cont& k) {
    std::vector<HTerm> args;
    std::map<std::string, TyP> open;
    std::map<std::string, TyP> present;
    for (const auto& a : g->args) {
      args.push_back(hresolve(s.u, a));
      open_vars(s.u, args.back(), open);
      collect_noms(args.back(), present);
    }
    auto inst = instantiate_clause_types(defs_, defs_.clauses[ci], args);
    if (!inst) return false;
    const DefClause& c = *inst;
    std::vector<std::vector<std::string>> cands;
    for (const auto& [z, zt] : c.nablas) {
      bool open_reaches = false;
      for (const auto& [x, t] : open)
        if (zt->kind == Ty::Base && reaches(reach_, t, zt->name)) open_reaches = true;
      std::vector<std::string> cs;
      for (const auto& [n, t] : s.known)
        if (ty_equal(t, zt) && (present.count(n) || open_reaches)) cs.push_back(n);
      for (const auto& [n, t] : present)
        if (ty_equal(t, zt) && std::find(cs.begin(), cs.end(), n) == cs.end()) cs.push_back(n);
      cs.push_back("");  // a constant not yet used anywhere
      cands.push_back(std::move(cs));
    }
    std::vector<std::string> chosen;
    return pick(g, ci, c, s, budget, k, args, cands, chosen);
  }

  bool pick(const Formula& g, int ci, const DefClause& c, GState& s, int budget, const Cont& k,
            const std::vector<HTerm>& args, const std::vector<std::vector<std::string>>& cands,
            std::vector<std::string>& chosen) {
    size_t i = chosen.size();
    if (i == c.nablas.size()) return unfold(g, ci, c, s, budget, k, args, chosen);
    for (const auto& cand : cands[i]) {
      GState s1 = s;
      std::string n = cand.empty() ? s1.fresh_nom(c.nablas[i].first, c.nablas[i].second, 0)->name : cand;
      if (std::find(chosen.begin(), chosen.end(), n) != chosen.end()) continue;
      chosen.push_back(n);
      bool stop = pick(g, ci, c, s1, budget, k, args, cands, chosen);
      chosen.pop_back();
      if (stop) return true;
    }
    return false;
  }

  bool unfold(const Formula& g, int ci, const DefClause& c, GState& s, int budget, const Cont& k,
              const std::vector<HTerm>& args, const std::vector<std::string>& zs) {
    GState s1 = s;
    std::set<std::string> forbidden(zs.begin(), zs.end());
    HSubst ren, theta;
    for (const auto& [x, t] : c.universals) {
      HTerm v = s1.u.new_var(x, t, ++s1.u.clock, forbidden);
      ren[x] = v;
      theta[x] = v;
    }
    for (size_t i = 0; i < zs.size(); ++i) ren[c.nablas[i].first] = HTerm::nom(zs[i], c.nablas[i].second);
    for (size_t i = 0; i < args.size(); ++i)
      if (pattern_unify(s1.u, args[i], hsubstitute(c.head[i], ren)) == HUStatus::Fail) return false;
    Formula body = fsubstitute(c.body, ren);
    return prove(body, s1, budget, [&](GState& s2, GDerivation&& d) {
      GDerivation n = leaf(GRule::Def, g);
      n.clause = ci;
      n.zs = zs;
      n.theta = theta;
      n.children = {std::move(d)};
      return k(s2, std::move(n));
    });
  }

  void collect_open(const GState& s, const GDerivation& d, std::map<std::string, TyP>& open) {
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
      switch (f.kind()) {
        case FKind::Top: break;
        case FKind::And:
        case FKind::Or:
          walk(f->left);
          walk(f->right);
          break;
        case FKind::Exists:
        case FKind::Nabla: walk(f.body()); break;
        default:
          for (const auto& a : f->args) open_vars(s.u, a, open);
      }
    };
    walk(d.goal);
    if (d.witness.valid()) open_vars(s.u, d.witness, open);
    for (const auto& [_, t] : d.theta) open_vars(s.u, t, open);
    for (const auto& c : d.children) collect_open(s, c, open);
  }

  static GDerivation ground(const GDerivation& d, const HSubst& theta) {
    GDerivation out = d;
    out.goal = fsubstitute(d.goal, theta);
    if (!ffree_vars(out.goal).empty()) throw std::logic_error("open goal in derivation: " + out.goal.str());
    if (d.witness.valid()) out.witness = hsubstitute(d.witness, theta);
    for (auto& [x, t] : out.theta) t = hsubstitute(t, theta);
    out.children.clear();
    for (const auto& c : d.children) out.children.push_back(ground(c, theta));
    return out;
  }

  const Definition& defs_;
  const SearchLimits& lim_;
  const GOptions& opt_;
  std::map<std::string, std::set<std::string>> reach_;
  Inhabitants inhabitants_;
};

// ------------------------------------------------------------- checking

bool fail_with(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

bool check_node(const Definition& defs, const GDerivation& d, std::string* why) {
  const Formula& g = d.goal;
  if (!g.valid()) return fail_with(why, "node without a goal");
  if (!ffree_vars(g).empty()) return fail_with(why, "open goal " + g.str());
  auto want = [&](FKind k, size_t nchildren) {
    if (g.kind() != k) return fail_with(why, std::string(grule_name(d.rule)) + " applied to " + g.str());
    if (d.children.size() != nchildren) return fail_with(why, "wrong number of premises at " + g.str());
    return true;
  };
  auto child_is = [&](size_t i, const Formula& expect) {
    if (!formula_alpha_eq(d.children[i].goal, expect))
      return fail_with(why, "premise " + d.children[i].goal.str() + " should be " + expect.str());
    return true;
  };
  try {
    switch (d.rule) {
      case GRule::Top: return want(FKind::Top, 0);
      case GRule::Eq:
        if (!want(FKind::Eq, 0)) return false;
        if (normalize(g->args[0]) != normalize(g->args[1])) return fail_with(why, "sides differ in " + g.str());
        return true;
      case GRule::And: return want(FKind::And, 2) && child_is(0, g->left) && child_is(1, g->right);
      case GRule::OrLeft: return want(FKind::Or, 1) && child_is(0, g->left);
      case GRule::OrRight: return want(FKind::Or, 1) && child_is(0, g->right);
      case GRule::Exists: {
        if (!want(FKind::Exists, 1)) return false;
        if (!d.witness.valid() || !ty_equal(d.witness.ty(), g->vty)) return fail_with(why, "ill-typed witness");
        if (!hfree_vars(d.witness).empty() || has_loose_bvars(d.witness))
          return fail_with(why, "witness " + d.witness.str() + " is not closed");
        return child_is(0, fsubstitute(g.body(), {{g->var, d.witness}}));
      }
      case GRule::Nabla: {
        if (!want(FKind::Nabla, 1)) return false;
        if (d.nom.empty()) return fail_with(why, "nablaR without a constant");
        if (!defs.sig.is_nominal(g->vty)) return fail_with(why, "nabla at a non-nominal type");
        if (fsupport(g).count(d.nom)) return fail_with(why, d.nom + " already occurs in " + g.str());
        return child_is(0, fsubstitute(g.body(), {{g->var, HTerm::nom(d.nom, g->vty)}}));
      }
      case GRule::Def: {
        if (!want(FKind::Atom, 1)) return false;
        if (d.clause < 0 || d.clause >= static_cast<int>(defs.clauses.size()))
          return fail_with(why, "defR names a missing clause");
        const DefClause& c0 = defs.clauses[d.clause];
        if (c0.pred != g->pred || c0.head.size() != g->args.size())
          return fail_with(why, "clause " + std::to_string(d.clause) + " does not define " + g->pred);
        auto inst = instantiate_clause_types(defs, c0, g->args);
        if (!inst) return fail_with(why, "clause types do not match " + g.str());
        const DefClause& c = *inst;
        if (d.zs.size() != c.nablas.size()) return fail_with(why, "wrong number of nabla constants");
        std::set<std::string> zset(d.zs.begin(), d.zs.end());
        if (zset.size() != d.zs.size()) return fail_with(why, "nabla constants are not distinct");
        HSubst ren;
        for (const auto& [x, t] : c.universals) {
          auto it = d.theta.find(x);
          if (it == d.theta.end()) return fail_with(why, "theta misses " + x);
          const HTerm& v = it->second;
          if (!ty_equal(v.ty(), t)) return fail_with(why, "theta(" + x + ") has the wrong type");
          if (!hfree_vars(v).empty() || has_loose_bvars(v)) return fail_with(why, "theta(" + x + ") is not closed");
          for (const auto& n : hsupport(v))
            if (zset.count(n)) return fail_with(why, "nabla constant " + n + " occurs in theta(" + x + ")");
          ren[x] = v;
        }
        if (d.theta.size() != c.universals.size()) return fail_with(why, "theta binds unknown variables");
        for (size_t i = 0; i < d.zs.size(); ++i) ren[c.nablas[i].first] = HTerm::nom(d.zs[i], c.nablas[i].second);
        for (size_t i = 0; i < c.head.size(); ++i)
          if (hsubstitute(c.head[i], ren) != normalize(g->args[i]))
            return fail_with(why, "head does not match argument " + std::to_string(i + 1) + " of " + g.str());
        return child_is(0, fsubstitute(c.body, ren));
      }
    }
  } catch (const std::exception& e) {
    return fail_with(why, e.what());
  }
  return false;
}

nlohmann::json nom_json(const std::string& id, const TyP& t) { return {{"id", id}, {"type", ty_str(t)}}; }

}  // namespace

const char* grule_name(GRule r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<GRule> grule_from_name(const std::string& s) {
  for (int i = 0; i < 8; ++i)
    if (s == kRuleNames[i]) return static_cast<GRule>(i);
  return std::nullopt;
}

int GDerivation::depth(const std::set<std::string>& uncounted) const {
  int m = 0;
  for (const auto& c : children) m = std::max(m, c.depth(uncounted));
  bool counts = rule == GRule::Def && !uncounted.count(goal->pred);
  return m + (counts ? 1 : 0);
}

std::string GDerivation::skeleton() const {
  std::string s = grule_name(rule);
  if (children.empty()) return s;
  s += "(";
  for (size_t i = 0; i < children.size(); ++i) s += (i ? "," : "") + children[i].skeleton();
  return s + ")";
}

int GDerivation::max_witness_size() const {
  int m = rule == GRule::Exists && witness.valid() ? hsize_unraised(witness) : 0;
  for (const auto& c : children) m = std::max(m, c.max_witness_size());
  return m;
}

std::optional<DefClause> instantiate_clause_types(const Definition&, const DefClause& c,
                                                  const std::vector<HTerm>& args) {
  if (args.size() != c.head.size()) return std::nullopt;
  bool poly = false;
  for (const auto& h : c.head) poly = poly || ty_has_vars(h.ty());
  for (const auto& u : c.universals) poly = poly || ty_has_vars(u.second);
  if (!poly) {
    for (size_t i = 0; i < args.size(); ++i)
      if (!ty_equal(c.head[i].ty(), args[i].ty())) return std::nullopt;
    return c;
  }
  std::map<std::string, TyP> s;
  for (size_t i = 0; i < args.size(); ++i)
    if (!ty_match(c.head[i].ty(), args[i].ty(), s)) return std::nullopt;
  DefClause out = c;
  for (auto& u : out.universals) u.second = ty_subst(u.second, s);
  for (auto& z : out.nablas) z.second = ty_subst(z.second, s);
  for (auto& h : out.head) h = ty_instantiate(h, s);
  out.body = f_ty_instantiate(c.body, s);
  for (const auto& u : out.universals)
    if (ty_has_vars(u.second)) return std::nullopt;
  return out;
}

GSolveResult gprove(const Definition& defs, const Formula& goal, const SearchLimits& lim, const GOptions& opt) {
  if (!ffree_vars(goal).empty()) throw HTypeError("gprove requires a closed goal: " + goal.str());
  GState init;
  std::map<std::string, TyP> noms;
  f_collect_noms(goal, noms);
  for (const auto& [n, t] : noms) {
    init.known.emplace_back(n, t);
    init.used_ids.insert(n);
  }
  GSolveResult res;
  for (int d = 0; d <= lim.max_unfoldings; ++d) {
    Searcher s(defs, lim, opt);
    GState st = init;
    bool found = s.prove(goal, st, d, [&](GState& fs, GDerivation&& der) { return s.finish(fs, std::move(der)); });
    if (found) {
      res.derivation = std::move(s.result);
      res.status = SearchStatus::Proved;
      res.depth = d;
      return res;
    }
    if (!s.cutoff) {
      res.status = SearchStatus::Exhausted;
      return res;
    }
  }
  res.status = SearchStatus::CutOff;
  return res;
}

bool gcheck(const Definition& defs, const GDerivation& d, std::string* why) {
  if (!check_node(defs, d, why)) return false;
  for (const auto& c : d.children)
    if (!gcheck(defs, c, why)) return false;
  return true;
}

std::vector<Formula> def_unfold(const Definition& defs, int clause, const std::string& pred,
                                const std::vector<HTerm>& args) {
  std::vector<Formula> out;
  if (clause < 0 || clause >= static_cast<int>(defs.clauses.size())) return out;
  auto inst = instantiate_clause_types(defs, defs.clauses[clause], args);
  if (!inst || inst->pred != pred) return out;
  const DefClause& c = *inst;
  std::map<std::string, TyP> present;
  for (const auto& a : args) collect_noms(a, present);
  std::vector<std::vector<std::string>> cands;
  for (const auto& [z, zt] : c.nablas) {
    std::vector<std::string> cs;
    for (const auto& [n, t] : present)
      if (ty_equal(t, zt)) cs.push_back(n);
    cs.push_back("");
    cands.push_back(cs);
  }
  std::set<std::string> seen;
  std::vector<std::string> chosen;
  int fresh = 0;
  std::function<void()> go = [&] {
    if (chosen.size() == c.nablas.size()) {
      HUnifState u;
      u.clock = 1;
      std::set<std::string> forbidden(chosen.begin(), chosen.end());
      HSubst ren;
      for (const auto& [x, t] : c.universals) ren[x] = u.new_var(x, t, 1, forbidden);
      for (size_t i = 0; i < chosen.size(); ++i) ren[c.nablas[i].first] = HTerm::nom(chosen[i], c.nablas[i].second);
      for (size_t i = 0; i < args.size(); ++i)
        if (pattern_unify(u, args[i], hsubstitute(c.head[i], ren)) != HUStatus::Ok) return;
      HSubst theta;
      for (const auto& [x, t] : c.universals) {
        HTerm v = hresolve(u, ren[x]);
        theta[x] = v.kind() == HKind::FVar && v->name == ren[x]->name ? HTerm::fvar(x, t) : v;
      }
      Formula b = fsubstitute(c.body, theta);
      if (seen.insert(b.key()).second) out.push_back(b);
      return;
    }
    for (const auto& cand : cands[chosen.size()]) {
      std::string n = cand;
      if (n.empty()) {
        for (;;) {
          n = nom_stem(c.nablas[chosen.size()].first) + "$" + std::to_string(++fresh);
          if (!present.count(n)) break;
        }
      }
      if (std::find(chosen.begin(), chosen.end(), n) != chosen.end()) continue;
      chosen.push_back(n);
      go();
      chosen.pop_back();
    }
  };
  go();
  return out;
}

nlohmann::json to_json(const GDerivation& d) {
  nlohmann::json j;
  j["rule"] = grule_name(d.rule);
  j["goal"] = d.goal.str();
  nlohmann::json w = nlohmann::json::object();
  if (d.rule == GRule::Exists) w["term"] = d.witness.str();
  if (d.rule == GRule::Nabla) w["nom"] = nom_json(d.nom, d.goal->vty);
  if (d.rule == GRule::Def) {
    w["clause"] = d.clause;
    w["z"] = d.zs;
    nlohmann::json th = nlohmann::json::object();
    for (const auto& [x, t] : d.theta) th[x] = t.str();
    w["theta"] = th;
  }
  j["witnesses"] = w;
  j["children"] = nlohmann::json::array();
  for (const auto& c : d.children) j["children"].push_back(to_json(c));
  return j;
}

GDerivation gderivation_from_json(const Definition& defs, const nlohmann::json& j) {
  GDerivation d;
  auto rule = grule_from_name(j.at("rule").get<std::string>());
  if (!rule) throw std::runtime_error("unknown rule " + j.at("rule").dump());
  d.rule = *rule;
  d.goal = parse_formula(j.at("goal").get<std::string>(), defs.sig, true);
  const auto& w = j.at("witnesses");
  if (d.rule == GRule::Exists) {
    if (d.goal.kind() != FKind::Exists) throw std::runtime_error("existsR node without an exists goal");
    d.witness = parse_hterm(w.at("term").get<std::string>(), defs.sig, d.goal->vty, true);
  }
  if (d.rule == GRule::Nabla) d.nom = w.at("nom").at("id").get<std::string>();
  if (d.rule == GRule::Def) {
    d.clause = w.at("clause").get<int>();
    d.zs = w.at("z").get<std::vector<std::string>>();
    if (d.clause < 0 || d.clause >= static_cast<int>(defs.clauses.size()))
      throw std::runtime_error("defR node names a missing clause");
    if (d.goal.kind() != FKind::Atom) throw std::runtime_error("defR node without an atomic goal");
    auto inst = instantiate_clause_types(defs, defs.clauses[d.clause], d.goal->args);
    if (!inst) throw std::runtime_error("defR clause does not fit its goal");
    for (const auto& [x, t] : w.at("theta").items()) {
      auto u = std::find_if(inst->universals.begin(), inst->universals.end(),
                            [&](const TypedName& v) { return v.first == x; });
      if (u == inst->universals.end()) throw std::runtime_error("theta binds unknown variable " + x);
      d.theta[x] = parse_hterm(t.get<std::string>(), defs.sig, u->second, true);
    }
  }
  for (const auto& c : j.at("children")) d.children.push_back(gderivation_from_json(defs, c));
  return d;
}

}  // namespace nomhoas::hoas
