#include "nomhoas/nominal/engine.hpp"

#include <algorithm>
#include <sstream>

#include "nomhoas/nominal/parser.hpp"
#include "nomhoas/nominal/relations.hpp"
#include "nomhoas/nominal/unify.hpp"

namespace nomhoas::nominal {

namespace {

constexpr const char* kRuleNames[] = {"TRUE", "FRESH", "EQUAL", "AND", "OR-left", "OR-right", "EXISTS", "NEW",
                                      "BACKCHAIN"};

struct State {
  UnifState u;
  std::map<std::string, Type> vars;  // every logic variable created
  std::vector<Name> known;
  std::set<std::string> used_ids;
  unsigned long long counter = 0;

  Name fresh_name(const std::string& stem, const std::string& ntype) {
    for (;;) {
      std::string id = fresh_id(stem, ++counter);
      if (used_ids.insert(id).second) {
        Name n{id, ntype};
        known.push_back(n);
        return n;
      }
    }
  }
  Term fresh_var(const std::string& stem, const Type& ty) {
    std::string id = "?" + fresh_id(stem, ++counter);
    vars[id] = ty;
    return Term::var(id, ty);
  }
};

using Cont = std::function<bool(State&, NDerivation&&)>;

// Smallest ground inhabitant of each base type, by node count.
class Inhabitants {
 public:
  explicit Inhabitants(const Signature& sig) : sig_(sig) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& f : sig.func_order) {
        const FuncSym& fs = sig.funcs.at(f);
        int total = 1;
        for (const auto& a : fs.args) {
          int s = size_of(a);
          if (s < 0) { total = -1; break; }
          total += s;
        }
        if (total < 0) continue;
        auto it = best_.find(fs.result);
        if (it == best_.end() || total < it->second.first) {
          best_[fs.result] = {total, f};
          changed = true;
        }
      }
    }
  }

  // Builds the smallest term, drawing names from `name_for`.
  std::optional<Term> build(const Type& t, const std::function<Name(const std::string&)>& name_for) const {
    if (t.is_abs()) {
      auto body = build(*t.body, name_for);
      if (!body) return std::nullopt;
      return Term::abs(Term::name(name_for(t.id)), *body);
    }
    if (sig_.is_name_type(t.id)) return Term::name(name_for(t.id));
    auto it = best_.find(t.id);
    if (it == best_.end()) return std::nullopt;
    const FuncSym& fs = sig_.funcs.at(it->second.second);
    std::vector<Term> args;
    for (const auto& a : fs.args) {
      auto x = build(a, name_for);
      if (!x) return std::nullopt;
      args.push_back(*x);
    }
    return Term::app(it->second.second, std::move(args));
  }

 private:
  int size_of(const Type& t) const {
    if (t.is_abs()) {
      int b = size_of(*t.body);
      return b < 0 ? -1 : b + 2;
    }
    if (sig_.is_name_type(t.id)) return 1;
    auto it = best_.find(t.id);
    return it == best_.end() ? -1 : it->second.first;
  }

  const Signature& sig_;
  std::map<std::string, std::pair<int, std::string>> best_;
};

class Searcher {
 public:
  Searcher(const Program& prog) : prog_(prog), reach_(name_reachability(prog.sig)), inhabitants_(prog.sig) {}

  bool cutoff = false;
  std::optional<NDerivation> result;

  bool prove(const Goal& g, State& s, int budget, const Cont& k) {
    switch (g.kind()) {
      case GoalKind::Top: return k(s, leaf(NRule::True, g));
      case GoalKind::Fresh:
        return with_splits(
            s, [&](State& st) { return unify_fresh(st.u, g->args[0], g->args[1]); },
            [&](State& st) { return k(st, leaf(NRule::Fresh, g)); });
      case GoalKind::Eq:
        return with_splits(
            s, [&](State& st) { return unify_eq(st.u, g->args[0], g->args[1]); },
            [&](State& st) { return k(st, leaf(NRule::Equal, g)); });
      case GoalKind::DotEq: throw TypeError("distinguished =. goals cannot be solved directly");
      case GoalKind::And:
        return prove(g->left, s, budget, [&](State& s1, NDerivation&& d1) {
          return prove(g->right, s1, budget, [&](State& s2, NDerivation&& d2) {
            NDerivation n = leaf(NRule::And, g);
            n.children = {d1, std::move(d2)};
            return k(s2, std::move(n));
          });
        });
      case GoalKind::Or: {
        State sl = s;
        if (prove(g->left, sl, budget, [&](State& s1, NDerivation&& d) {
              NDerivation n = leaf(NRule::OrLeft, g);
              n.children = {std::move(d)};
              return k(s1, std::move(n));
            }))
          return true;
        State sr = s;
        return prove(g->right, sr, budget, [&](State& s1, NDerivation&& d) {
          NDerivation n = leaf(NRule::OrRight, g);
          n.children = {std::move(d)};
          return k(s1, std::move(n));
        });
      }
      case GoalKind::Exists: {
        State s1 = s;
        Term v = s1.fresh_var(g->var, g->type);
        Goal body = substitute(g->body, NSubst{{g->var, v}});
        return prove(body, s1, budget, [&](State& s2, NDerivation&& d) {
          NDerivation n = leaf(NRule::Exists, g);
          n.witness = v;
          n.children = {std::move(d)};
          return k(s2, std::move(n));
        });
      }
      case GoalKind::New: {
        State s1 = s;
        Name fresh = s1.fresh_name(g->name.id, g->name.ntype);
        for (const auto& [id, ty] : s1.vars)
          if (!s1.u.bind.count(id)) s1.u.fresh.emplace_back(fresh, id);
        Goal body = swap_apply(Permutation::swap(g->name, fresh), g->body);
        return prove(body, s1, budget, [&](State& s2, NDerivation&& d) {
          NDerivation n = leaf(NRule::New, g);
          n.new_name = fresh;
          n.children = {std::move(d)};
          return k(s2, std::move(n));
        });
      }
      case GoalKind::Atom: {
        for (size_t i = 0; i < prog_.clauses.size(); ++i) {
          const ProgramClause& c = prog_.clauses[i];
          if (c.pred != g->pred) continue;
          if (budget <= 0) {
            cutoff = true;
            return false;
          }
          if (backchain(g, static_cast<int>(i), s, budget, k)) return true;
        }
        return false;
      }
    }
    return false;
  }

  // Grounds what is left, builds the ground derivation, and records it.
  bool finish(State& s, NDerivation&& d) {
    std::map<std::string, Type> open;
    collect_open(s, d, open);
    for (const auto& [id, ty] : open) {
      auto t = inhabitants_.build(ty, [&](const std::string& nt) { return s.fresh_name("n", nt); });
      if (!t) return false;
      if (unify_eq(s.u, Term::var(id, ty), *t).status != UStatus::Ok) return false;
    }
    NSubst theta;
    for (const auto& [id, ty] : s.vars) theta[id] = resolve(s.u, Term::var(id, ty));
    result = ground(d, theta);
    return true;
  }

 private:
  static NDerivation leaf(NRule r, const Goal& g) {
    NDerivation n;
    n.rule = r;
    n.goal = g;
    return n;
  }

  bool with_splits(State& s, const std::function<UResult(State&)>& act, const std::function<bool(State&)>& k) {
    State s1 = s;
    UResult r = act(s1);
    if (r.status == UStatus::Ok) return k(s1);
    if (r.status == UStatus::Fail) return false;
    std::vector<Name> cands;
    for (const auto& n : s.known)
      if (n.ntype == r.type.id) cands.push_back(n);
    cands.push_back(Name{"", r.type.id});  // placeholder for a fresh name
    for (const auto& c : cands) {
      State s2 = s;
      Name n = c.id.empty() ? s2.fresh_name("n", c.ntype) : c;
      if (unify_eq(s2.u, Term::var(r.var, r.type), Term::name(n)).status != UStatus::Ok) continue;
      if (with_splits(s2, act, k)) return true;
    }
    return false;
  }

  bool backchain(const Goal& g, int ci, State& s, int budget, const Cont& k) {
    const ProgramClause& c = prog_.clauses[ci];
    std::vector<Term> args;
    std::map<std::string, Type> open;
    std::set<Name> present;
    for (const auto& a : g->args) {
      args.push_back(resolve(s.u, a));
      unbound_vars(s.u, args.back(), open);
      auto ns = names_of(args.back());
      present.insert(ns.begin(), ns.end());
    }
    // candidate targets for each clause name
    std::vector<std::vector<Name>> cands;
    for (const auto& a : c.new_names) {
      bool open_reaches = false;
      for (const auto& [id, ty] : open)
        if (type_reaches(reach_, ty, a.ntype)) open_reaches = true;
      std::vector<Name> cs;
      for (const auto& n : s.known)
        if (n.ntype == a.ntype && (present.count(n) || open_reaches)) cs.push_back(n);
      for (const auto& n : present)
        if (n.ntype == a.ntype && std::find(cs.begin(), cs.end(), n) == cs.end()) cs.push_back(n);
      cs.push_back(Name{"", a.ntype});
      cands.push_back(std::move(cs));
    }
    std::vector<Name> chosen;
    return pick_names(g, ci, s, budget, k, args, cands, chosen);
  }

  bool pick_names(const Goal& g, int ci, State& s, int budget, const Cont& k, const std::vector<Term>& args,
                  const std::vector<std::vector<Name>>& cands, std::vector<Name>& chosen) {
    const ProgramClause& c = prog_.clauses[ci];
    size_t i = chosen.size();
    if (i == c.new_names.size()) return unfold(g, ci, s, budget, k, args, chosen);
    for (const auto& cand : cands[i]) {
      State s1 = s;
      Name n = cand.id.empty() ? s1.fresh_name(c.new_names[i].id, cand.ntype) : cand;
      if (std::find(chosen.begin(), chosen.end(), n) != chosen.end()) continue;
      chosen.push_back(n);
      bool stop = pick_names(g, ci, s1, budget, k, args, cands, chosen);
      chosen.pop_back();
      if (stop) return true;
    }
    return false;
  }

  bool unfold(const Goal& g, int ci, State& s, int budget, const Cont& k, const std::vector<Term>& args,
              const std::vector<Name>& targets) {
    const ProgramClause& c = prog_.clauses[ci];
    Permutation pi = Permutation::from_injection(c.new_names, targets);
    State s1 = s;
    NSubst ren;
    for (const auto& u : c.universals) ren[u.id] = s1.fresh_var(u.id, u.type);
    std::vector<Term> head;
    for (const auto& h : c.head) head.push_back(substitute(swap_apply(pi, h), ren));
    Goal body = substitute(swap_apply(pi, c.body), ren);
    return with_splits(
        s1,
        [&](State& st) {
          for (size_t i = 0; i < args.size(); ++i) {
            UResult r = unify_eq(st.u, args[i], head[i]);
            if (r.status != UStatus::Ok) return r;
          }
          return UResult::ok();
        },
        [&](State& st) {
          return prove(body, st, budget - 1, [&](State& s2, NDerivation&& d) {
            NDerivation n = leaf(NRule::Backchain, g);
            n.clause = ci;
            n.pi = pi;
            n.theta = ren;
            n.children = {std::move(d)};
            return k(s2, std::move(n));
          });
        });
  }

  void collect_open(const State& s, const NDerivation& d, std::map<std::string, Type>& open) {
    std::function<void(const Goal&)> goal = [&](const Goal& g) {
      switch (g.kind()) {
        case GoalKind::Top: break;
        case GoalKind::And:
        case GoalKind::Or: goal(g->left); goal(g->right); break;
        case GoalKind::Exists:
        case GoalKind::New: goal(g->body); break;
        default:
          for (const auto& a : g->args) unbound_vars(s.u, a, open);
      }
    };
    goal(d.goal);
    if (d.witness.valid()) unbound_vars(s.u, d.witness, open);
    for (const auto& [_, t] : d.theta) unbound_vars(s.u, t, open);
    for (const auto& c : d.children) collect_open(s, c, open);
  }

  static NDerivation ground(const NDerivation& d, const NSubst& theta) {
    NDerivation out = d;
    out.goal = substitute(d.goal, theta);
    if (!out.goal.ground()) throw std::logic_error("non-ground goal in derivation: " + out.goal.str());
    if (d.witness.valid()) out.witness = substitute(d.witness, theta);
    if (d.rule == NRule::Backchain) {
      Permutation inv = d.pi.inverse();
      for (auto& [x, t] : out.theta) t = swap_apply(inv, substitute(t, theta));
    }
    out.children.clear();
    for (const auto& c : d.children) out.children.push_back(ground(c, theta));
    return out;
  }

  const Program& prog_;
  std::map<std::string, std::set<std::string>> reach_;
  Inhabitants inhabitants_;
};

// ------------------------------------------------------------- checking

bool fail_with(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

bool check_node(const Program& prog, const NDerivation& d, std::string* why) {
  const Goal& g = d.goal;
  if (!g.valid()) return fail_with(why, "node without a goal");
  if (!g.ground()) return fail_with(why, "non-ground goal " + g.str());
  auto want = [&](GoalKind k, size_t nchildren) {
    if (g.kind() != k) return fail_with(why, std::string(rule_name(d.rule)) + " does not apply to " + g.str());
    if (d.children.size() != nchildren) return fail_with(why, std::string(rule_name(d.rule)) + ": wrong arity");
    return true;
  };
  auto child_is = [&](size_t i, const Goal& expect) {
    if (!goal_alpha_eq(d.children[i].goal, expect))
      return fail_with(why, std::string(rule_name(d.rule)) + ": premise " + d.children[i].goal.str() +
                                " does not match " + expect.str());
    return true;
  };
  try {
    switch (d.rule) {
      case NRule::True: return want(GoalKind::Top, 0);
      case NRule::Fresh: {
        if (!want(GoalKind::Fresh, 0)) return false;
        Term a = push_swaps(g->args[0]);
        if (!a.is_name() || !freshness_check(a->name, g->args[1])) return fail_with(why, "FRESH fails: " + g.str());
        return true;
      }
      case NRule::Equal:
        if (!want(GoalKind::Eq, 0)) return false;
        if (!alpha_eq(g->args[0], g->args[1])) return fail_with(why, "EQUAL fails: " + g.str());
        return true;
      case NRule::And: return want(GoalKind::And, 2) && child_is(0, g->left) && child_is(1, g->right);
      case NRule::OrLeft: return want(GoalKind::Or, 1) && child_is(0, g->left);
      case NRule::OrRight: return want(GoalKind::Or, 1) && child_is(0, g->right);
      case NRule::Exists: {
        if (!want(GoalKind::Exists, 1)) return false;
        if (!d.witness.valid() || !d.witness.ground()) return fail_with(why, "EXISTS witness must be ground");
        if (type_of(prog.sig, d.witness) != g->type) return fail_with(why, "EXISTS witness has the wrong type");
        return child_is(0, substitute(g->body, NSubst{{g->var, d.witness}}));
      }
      case NRule::New: {
        if (!want(GoalKind::New, 1)) return false;
        const Name& n = d.new_name;
        if (n.ntype != g->name.ntype) return fail_with(why, "NEW name has the wrong type");
        if (!fresh_for_goal(n, g)) return fail_with(why, "NEW name " + n.id + " is not fresh for " + g.str());
        return child_is(0, swap_apply(Permutation::swap(g->name, n), g->body));
      }
      case NRule::Backchain: {
        if (!want(GoalKind::Atom, 1)) return false;
        if (d.clause < 0 || d.clause >= static_cast<int>(prog.clauses.size()))
          return fail_with(why, "BACKCHAIN: no such clause");
        const ProgramClause& c = prog.clauses[d.clause];
        if (c.pred != g->pred || c.head.size() != g->args.size())
          return fail_with(why, "BACKCHAIN: clause head does not match predicate");
        if (d.theta.size() != c.universals.size()) return fail_with(why, "BACKCHAIN: theta has the wrong domain");
        for (const auto& u : c.universals) {
          auto it = d.theta.find(u.id);
          if (it == d.theta.end() || !it->second.ground() || type_of(prog.sig, it->second) != u.type)
            return fail_with(why, "BACKCHAIN: bad instance for " + u.id);
        }
        for (size_t i = 0; i < c.head.size(); ++i) {
          Term inst = swap_apply(d.pi, substitute(c.head[i], d.theta));
          if (!alpha_eq(g->args[i], inst))
            return fail_with(why, "BACKCHAIN: argument " + g->args[i].str() + " is not ~ " + inst.str());
        }
        return child_is(0, swap_apply(d.pi, substitute(c.body, d.theta)));
      }
    }
  } catch (const std::exception& e) {
    return fail_with(why, e.what());
  }
  return false;
}

nlohmann::json name_json(const Name& n) { return {{"id", n.id}, {"type", n.ntype}}; }
Name name_from_json(const nlohmann::json& j) { return Name{j.at("id").get<std::string>(), j.at("type").get<std::string>()}; }

}  // namespace

const char* rule_name(NRule r) { return kRuleNames[static_cast<int>(r)]; }

std::optional<NRule> rule_from_name(const std::string& s) {
  for (int i = 0; i < 9; ++i)
    if (s == kRuleNames[i]) return static_cast<NRule>(i);
  return std::nullopt;
}

int NDerivation::depth() const {
  int m = 0;
  for (const auto& c : children) m = std::max(m, c.depth());
  return m + (rule == NRule::Backchain ? 1 : 0);
}

int NDerivation::max_witness_size() const {
  int m = rule == NRule::Exists ? witness.size() : 0;
  for (const auto& c : children) m = std::max(m, c.max_witness_size());
  return m;
}

std::string NDerivation::skeleton() const {
  std::string s = rule_name(rule);
  if (children.empty()) return s;
  s += "(";
  for (size_t i = 0; i < children.size(); ++i) s += (i ? "," : "") + children[i].skeleton();
  return s + ")";
}

NSolveResult solve(const Program& prog, const Goal& g, const SearchLimits& lim) {
  if (!g.ground()) throw TypeError("solve requires a ground goal: " + g.str());
  NSolveResult res;
  State init;
  for (const auto& n : names_of(g)) {
    init.known.push_back(n);
    init.used_ids.insert(n.id);
  }
  for (const auto& c : prog.clauses) {
    std::set<Name> ns;
    collect_names(c, ns);
    for (const auto& n : ns) init.used_ids.insert(n.id);
  }
  for (int d = 0; d <= lim.max_unfoldings; ++d) {
    Searcher s(prog);
    State st = init;
    bool found = s.prove(g, st, d, [&](State& fs, NDerivation&& der) { return s.finish(fs, std::move(der)); });
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

bool check_derivation(const Program& prog, const NDerivation& d, std::string* why) {
  if (!check_node(prog, d, why)) return false;
  for (const auto& c : d.children)
    if (!check_derivation(prog, c, why)) return false;
  return true;
}

nlohmann::json to_json(const NDerivation& d) {
  nlohmann::json j;
  j["rule"] = rule_name(d.rule);
  j["goal"] = d.goal.str();
  nlohmann::json w = nlohmann::json::object();
  if (d.rule == NRule::Exists) w["term"] = d.witness.str();
  if (d.rule == NRule::New) w["name"] = name_json(d.new_name);
  if (d.rule == NRule::Backchain) {
    w["clause"] = d.clause;
    nlohmann::json pi = nlohmann::json::array();
    for (const auto& [a, b] : d.pi.swaps) pi.push_back({name_json(a), name_json(b)});
    w["pi"] = pi;
    nlohmann::json th = nlohmann::json::object();
    for (const auto& [x, t] : d.theta) th[x] = t.str();
    w["theta"] = th;
  }
  j["witnesses"] = w;
  j["children"] = nlohmann::json::array();
  for (const auto& c : d.children) j["children"].push_back(to_json(c));
  return j;
}

NDerivation derivation_from_json(const Program& prog, const nlohmann::json& j) {
  const Signature& sig = prog.sig;
  NDerivation d;
  auto rule = rule_from_name(j.at("rule").get<std::string>());
  if (!rule) throw std::runtime_error("unknown rule " + j.at("rule").dump());
  d.rule = *rule;
  d.goal = parse_goal(j.at("goal").get<std::string>(), sig, true);
  const auto& w = j.at("witnesses");
  if (d.rule == NRule::Exists) {
    if (d.goal.kind() != GoalKind::Exists) throw std::runtime_error("EXISTS node without an exists goal");
    d.witness = parse_term(w.at("term").get<std::string>(), sig, d.goal->type, true);
  }
  if (d.rule == NRule::New) d.new_name = name_from_json(w.at("name"));
  if (d.rule == NRule::Backchain) {
    d.clause = w.at("clause").get<int>();
    std::vector<std::pair<Name, Name>> swaps;
    for (const auto& p : w.at("pi")) swaps.emplace_back(name_from_json(p.at(0)), name_from_json(p.at(1)));
    d.pi = Permutation(std::move(swaps));
    if (d.clause < 0 || d.clause >= static_cast<int>(prog.clauses.size()))
      throw std::runtime_error("BACKCHAIN node names a missing clause");
    const ProgramClause& c = prog.clauses[d.clause];
    for (const auto& [x, t] : w.at("theta").items()) {
      auto u = std::find_if(c.universals.begin(), c.universals.end(), [&](const TypedVar& v) { return v.id == x; });
      if (u == c.universals.end()) throw std::runtime_error("theta binds unknown variable " + x);
      d.theta[x] = parse_term(t.get<std::string>(), sig, u->type, true);
    }
  }
  for (const auto& c : j.at("children")) d.children.push_back(derivation_from_json(prog, c));
  return d;
}

}  // namespace nomhoas::nominal
