#include "nomhoas/harness/harness.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "nomhoas/nominal/enumerate.hpp"
#include "nomhoas/nominal/relations.hpp"

namespace nomhoas::harness {

using nominal::Goal;
using nominal::Name;
using nominal::Term;
using nominal::Type;

namespace {

std::vector<Name> goal_name_pool(const nominal::Signature& sig, int per_type) {
  static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  std::vector<Name> out;
  size_t next = 0;
  for (const auto& nt : sig.name_types)
    for (int i = 0; i < per_type; ++i) {
      std::string id = next < letters.size() ? std::string(1, letters[next]) : "n" + std::to_string(next);
      ++next;
      out.push_back(Name{id, nt});
    }
  return out;
}

// Tuples whose sizes sum to `total`, each in [1, max].
void tuples(nominal::TermEnumerator& en, const std::vector<Type>& types, size_t i, int total, int max,
            std::vector<Term>& cur, std::vector<std::vector<Term>>& out, size_t cap) {
  if (out.size() >= cap) return;
  if (i == types.size()) {
    if (total == 0) out.push_back(cur);
    return;
  }
  int rest = static_cast<int>(types.size() - i - 1);
  for (int s = 1; s <= std::min(max, total - rest); ++s) {
    if (total - s > rest * max) continue;
    for (const auto& t : en.of_size(types[i], s)) {
      cur.push_back(t);
      tuples(en, types, i + 1, total - s, max, cur, out, cap);
      cur.pop_back();
      if (out.size() >= cap) return;
    }
  }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

bool is_oracle(const std::string& engine) { return engine.find("oracle") != std::string::npos; }

}  // namespace

std::vector<Goal> enumerate_goals(const nominal::Program& prog, const EnumSpec& spec, const SearchLimits& lim) {
  auto it = prog.sig.preds.find(spec.pred);
  if (it == prog.sig.preds.end()) throw std::invalid_argument("unknown predicate " + spec.pred);
  const std::vector<Type>& types = it->second;
  if (types.empty()) return {Goal::atom(spec.pred, {})};

  nominal::TermEnumerator en(prog.sig, goal_name_pool(prog.sig, spec.names_per_type));
  std::vector<std::vector<Term>> all;
  size_t cap = std::max<size_t>(static_cast<size_t>(spec.count) * 20, 2000);
  std::vector<Term> cur;
  int n = static_cast<int>(types.size());
  for (int total = n; total <= n * spec.arg_size && all.size() < cap; ++total)
    tuples(en, types, 0, total, spec.arg_size, cur, all, cap);

  std::mt19937_64 rng(spec.seed);
  std::shuffle(all.begin(), all.end(), rng);

  std::vector<Goal> out;
  std::set<std::string> seen;
  for (size_t i = 0; i < all.size() && out.size() < static_cast<size_t>(spec.count); ++i) {
    std::vector<Term> args = all[i];
    if (spec.complete && i % 2 == 0) {
      std::vector<Term> open(args.begin(), args.end() - 1);
      open.push_back(Term::var("Y", types.back()));
      auto r = nominal::solve(prog, Goal::exists("Y", types.back(), Goal::atom(spec.pred, open)), lim);
      if (r.derivation && r.derivation->witness.valid()) args.back() = r.derivation->witness;
    }
    Goal g = Goal::atom(spec.pred, args);
    if (seen.insert(g.str()).second) out.push_back(g);
  }
  return out;
}

bool GoalRecord::agree() const {
  std::optional<bool> v;
  for (const auto& r : runs) {
    if (is_oracle(r.engine)) continue;
    if (v && *v != r.provable) return false;
    v = r.provable;
  }
  return true;
}

std::optional<bool> GoalRecord::oracle_agree(int term_size) const {
  bool any_oracle = false;
  for (const auto& r : runs) {
    if (r.provable && r.witness_size > term_size) return std::nullopt;
    any_oracle = any_oracle || is_oracle(r.engine);
  }
  if (!any_oracle) return std::nullopt;
  for (const auto& r : runs)
    if (r.provable != runs.front().provable) return false;
  return true;
}

int RunReport::provable(const std::string& engine) const {
  int n = 0;
  for (const auto& rec : records)
    for (const auto& r : rec.runs)
      if (r.engine == engine && r.provable) ++n;
  return n;
}

int RunReport::disagreements() const {
  int n = 0;
  for (const auto& rec : records) n += rec.agree() ? 0 : 1;
  return n;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  std::set<std::string> engines;
  for (const auto& rec : records) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : rec.runs) {
      engines.insert(r.engine);
      nlohmann::json j = {{"engine", r.engine},  {"provable", r.provable}, {"status", status_str(r.status)},
                          {"depth", r.depth},    {"ms", r.ms}};
      if (!r.derivation_file.empty()) j["derivation"] = r.derivation_file;
      runs.push_back(j);
    }
    nlohmann::json j = {{"goal", rec.goal}, {"runs", runs}, {"agree", rec.agree()}};
    if (!rec.translated.empty()) j["translated"] = rec.translated;
    recs.push_back(j);
  }
  nlohmann::json summary = {{"goals", records.size()}, {"disagreements", disagreements()}};
  for (const auto& e : engines) summary["provable_" + e] = provable(e);
  return {{"records", recs}, {"summary", summary}};
}

EquivContext::EquivContext(const nominal::Program& p, const EquivConfig& c)
    : prog(p), unit(translator::translate_program(p, c.trans)), cfg(c) {}

EngineRun run_nominal(const nominal::Program& prog, const Goal& g, const SearchLimits& lim, bool oracle) {
  EngineRun r;
  r.engine = oracle ? "nominal-oracle" : "nominal";
  auto t0 = std::chrono::steady_clock::now();
  auto res = oracle ? nominal::oracle_solve(prog, g, lim) : nominal::solve(prog, g, lim);
  r.ms = ms_since(t0);
  r.status = res.status;
  r.provable = res.derivation.has_value();
  r.depth = res.depth;
  if (res.derivation) r.witness_size = res.derivation->max_witness_size();
  return r;
}

EngineRun run_hoas(const hoas::Definition& d, const hoas::Formula& f, const SearchLimits& lim, bool oracle) {
  EngineRun r;
  r.engine = oracle ? "hoas-oracle" : "hoas";
  hoas::GOptions opt;
  opt.uncounted = translator::prelude_preds();
  auto t0 = std::chrono::steady_clock::now();
  auto res = oracle ? hoas::goracle_solve(d, f, lim, opt) : hoas::gprove(d, f, lim, opt);
  r.ms = ms_since(t0);
  r.status = res.status;
  r.provable = res.derivation.has_value();
  r.depth = res.depth;
  if (res.derivation) r.witness_size = res.derivation->max_witness_size();
  return r;
}

GoalRecord equiv_one(const EquivContext& cx, const Goal& g) {
  GoalRecord rec;
  rec.goal = g.str();
  hoas::Formula f = translator::translate_goal(cx.prog.sig, g, cx.cfg.trans);
  rec.translated = f.str();
  hoas::Definition d = cx.unit.definition({f});
  rec.runs.push_back(run_nominal(cx.prog, g, cx.cfg.lim, false));
  rec.runs.push_back(run_hoas(d, f, cx.cfg.lim, false));
  if (cx.cfg.oracle) {
    rec.runs.push_back(run_nominal(cx.prog, g, cx.cfg.lim, true));
    rec.runs.push_back(run_hoas(d, f, cx.cfg.lim, true));
  }
  return rec;
}

RunReport run_equiv_serial(const EquivContext& cx, const std::vector<Goal>& goals) {
  RunReport rep;
  for (const auto& g : goals) rep.records.push_back(equiv_one(cx, g));
  return rep;
}

RunReport run_equiv_parallel(const EquivContext& cx, const std::vector<Goal>& goals) {
  RunReport rep;
  rep.records.resize(goals.size());
  const long n = static_cast<long>(goals.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) rep.records[i] = equiv_one(cx, goals[i]);
  return rep;
}

namespace {

void subterms(const Term& t, std::vector<Term>& out) {
  switch (t.kind()) {
    case nominal::TermKind::App:
    case nominal::TermKind::Swap:
    case nominal::TermKind::Abs:
      for (const auto& a : t->args) {
        out.push_back(a);
        subterms(a, out);
      }
      break;
    default: break;
  }
}

}  // namespace

Goal shrink(const EquivContext& cx, const Goal& g) {
  if (g.kind() != nominal::GoalKind::Atom) return g;
  std::set<Name> names = nominal::names_of(g);
  std::vector<Name> pool(names.begin(), names.end());
  if (pool.empty()) pool = goal_name_pool(cx.prog.sig, 1);
  nominal::TermEnumerator en(cx.prog.sig, pool);

  std::vector<Term> args = g->args;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < args.size() && !changed; ++i) {
      Type ty = nominal::type_of(cx.prog.sig, args[i]);
      std::vector<Term> cands;
      subterms(args[i], cands);
      for (int s = 1; s <= 3; ++s) {
        const auto& small = en.of_size(ty, s);
        cands.insert(cands.end(), small.begin(), small.begin() + std::min<size_t>(small.size(), 3));
      }
      std::stable_sort(cands.begin(), cands.end(), [](const Term& a, const Term& b) { return a.size() < b.size(); });
      for (const auto& c : cands) {
        if (c.size() >= args[i].size()) continue;
        Type ct;
        try {
          ct = nominal::type_of(cx.prog.sig, c);
        } catch (const std::exception&) {
          continue;
        }
        if (ct != ty) continue;
        std::vector<Term> trial = args;
        trial[i] = c;
        if (!equiv_one(cx, Goal::atom(g->pred, trial)).agree()) {
          args = std::move(trial);
          changed = true;
          break;
        }
      }
    }
  }
  return Goal::atom(g->pred, args);
}

nominal::Permutation random_permutation(const std::vector<Name>& pool, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<std::string, std::vector<Name>> by_type;
  for (const auto& n : pool) by_type[n.ntype].push_back(n);
  std::vector<Name> from, to;
  for (auto& [_, ns] : by_type) {
    std::vector<Name> img = ns;
    std::shuffle(img.begin(), img.end(), rng);
    from.insert(from.end(), ns.begin(), ns.end());
    to.insert(to.end(), img.begin(), img.end());
  }
  return nominal::Permutation::from_injection(from, to);
}

}  // namespace nomhoas::harness
