#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nomhoas/cli/commands.hpp"
#include "nomhoas/harness/harness.hpp"
#include "nomhoas/nominal/relations.hpp"
#include "support.hpp"

using namespace nomhoas;
using testsupport::corpus_program;

namespace {

std::string corpus_path(const std::string& f) { return std::string(NOMHOAS_CORPUS_DIR) + "/" + f; }

std::filesystem::path scratch(const std::string& f) {
  auto dir = std::filesystem::temp_directory_path() / "nomhoas_test_harness";
  std::filesystem::create_directories(dir);
  return dir / f;
}

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream f(p);
  return nlohmann::json::parse(f);
}

std::vector<nominal::Goal> tc_goals(std::uint64_t seed, int count = 30) {
  static const auto prog = corpus_program("tc.apl");
  harness::EnumSpec spec;
  spec.pred = "tc";
  spec.count = count;
  spec.seed = seed;
  return harness::enumerate_goals(prog, spec, SearchLimits{});
}

std::vector<std::string> strs(const std::vector<nominal::Goal>& gs) {
  std::vector<std::string> out;
  for (const auto& g : gs) out.push_back(g.str());
  return out;
}

int goal_size(const nominal::Goal& g) {
  int n = 0;
  for (const auto& a : g->args) n += a.size();
  return n;
}

}  // namespace

TEST_CASE("goal enumeration is deterministic per seed") {
  auto a = tc_goals(1), b = tc_goals(1), c = tc_goals(2);
  CHECK(a.size() == 30);
  CHECK(strs(a) == strs(b));
  CHECK(strs(a) != strs(c));
  std::set<std::string> uniq;
  for (const auto& g : a) {
    CHECK(g.ground());
    CHECK(g->pred == "tc");
    uniq.insert(g.str());
  }
  CHECK(uniq.size() == a.size());
}

TEST_CASE("completion biases toward provable goals") {
  auto prog = corpus_program("tc.apl");
  harness::EnumSpec spec;
  spec.pred = "tc";
  spec.count = 40;
  int with = 0, without = 0;
  for (const auto& g : harness::enumerate_goals(prog, spec, SearchLimits{}))
    with += nominal::solve(prog, g, SearchLimits{}).derivation.has_value();
  spec.complete = false;
  for (const auto& g : harness::enumerate_goals(prog, spec, SearchLimits{}))
    without += nominal::solve(prog, g, SearchLimits{}).derivation.has_value();
  CHECK(with > without);
}

TEST_CASE("serial and parallel runs produce the same records") {
  auto prog = corpus_program("tc.apl");
  harness::EquivContext cx(prog, harness::EquivConfig{});
  auto goals = tc_goals(3, 24);
  auto s = harness::run_equiv_serial(cx, goals);
  auto p = harness::run_equiv_parallel(cx, goals);
  REQUIRE(s.records.size() == p.records.size());
  for (size_t i = 0; i < s.records.size(); ++i) {
    CHECK(s.records[i].goal == p.records[i].goal);
    CHECK(s.records[i].translated == p.records[i].translated);
    REQUIRE(s.records[i].runs.size() == p.records[i].runs.size());
    for (size_t k = 0; k < s.records[i].runs.size(); ++k) {
      CHECK(s.records[i].runs[k].provable == p.records[i].runs[k].provable);
      CHECK(s.records[i].runs[k].depth == p.records[i].runs[k].depth);
    }
  }
  CHECK(s.disagreements() == 0);
  CHECK(s.provable("nominal") == s.provable("hoas"));
  CHECK(s.provable("nominal") > 0);

  auto j = s.to_json();
  CHECK(j["records"].size() == goals.size());
}

TEST_CASE("oracle agreement is reported only when witnesses fit") {
  harness::GoalRecord r;
  r.runs = {{"nominal", true, SearchStatus::Proved, 2, 3}, {"hoas", true, SearchStatus::Proved, 2, 3}};
  CHECK(r.agree());
  CHECK(!r.oracle_agree(4));
  r.runs.push_back({"nominal-oracle", true, SearchStatus::Proved, 2, 3});
  r.runs.push_back({"hoas-oracle", false, SearchStatus::CutOff, -1, 0});
  CHECK(r.oracle_agree(4) == std::optional<bool>(false));
  CHECK(!r.oracle_agree(2));
  r.runs[3].provable = true;
  CHECK(r.oracle_agree(4) == std::optional<bool>(true));
  r.runs[1].provable = false;
  CHECK(!r.agree());
}

TEST_CASE("shrinking a disagreement caused by a broken translation") {
  auto prog = corpus_program("tc.apl");
  harness::EquivContext cx(prog, harness::EquivConfig{});
  // drop the application clause from the translated program
  cx.unit.defs.erase(cx.unit.defs.begin() + 3);
  auto g = nominal::parse_goal(
      "tc(nil, app(lam(<x> var(x)), app(lam(<y> var(y)), lam(<z> var(z)))), arr(alpha, alpha))", prog.sig);
  auto before = harness::equiv_one(cx, g);
  REQUIRE(!before.agree());
  auto small = harness::shrink(cx, g);
  CHECK(!harness::equiv_one(cx, small).agree());
  CHECK(goal_size(small) < goal_size(g));

  // agreeing goals are returned unchanged
  harness::EquivContext ok(prog, harness::EquivConfig{});
  CHECK(harness::shrink(ok, g).str() == g.str());
}

TEST_CASE("random permutations are deterministic and type-preserving") {
  std::vector<nominal::Name> pool = {{"a", "vname"}, {"b", "vname"}, {"c", "vname"}, {"u", "tname"}, {"v", "tname"}};
  auto p = harness::random_permutation(pool, 5);
  auto q = harness::random_permutation(pool, 5);
  CHECK(p == q);
  std::set<nominal::Name> image;
  for (const auto& n : pool) {
    auto m = p.apply(n);
    CHECK(m.ntype == n.ntype);
    image.insert(m);
  }
  CHECK(image.size() == pool.size());
}

TEST_CASE("solve command exit codes and derivation output") {
  cli::CmdOptions o;
  std::ostringstream out, err;
  auto tc = corpus_path("tc.apl");
  auto json = scratch("k.json");
  o.json = json.string();
  CHECK(cli::cmd_solve(tc, "tc(nil, lam(<a> lam(<b> var(a))), arr(alpha, arr(beta, alpha)))", o, out, err) ==
        cli::kProvable);
  CHECK(out.str().find("BACKCHAIN") != std::string::npos);
  auto prog = corpus_program("tc.apl");
  auto d = nominal::derivation_from_json(prog, read_json(json));
  CHECK(nominal::check_derivation(prog, d));

  CHECK(cli::cmd_solve(tc, "tc(nil, lam(<a> lam(<b> var(a))), arr(alpha, arr(beta, beta)))", o, out, err) ==
        cli::kNotProvable);
  CHECK(cli::cmd_solve(tc, "tc((", o, out, err) == cli::kInputError);
  CHECK(cli::cmd_solve(tc, "tc(nil, var(a), alpha", o, out, err) == cli::kInputError);
  CHECK(cli::cmd_solve(corpus_path("missing.apl"), "true", o, out, err) == cli::kInputError);
  CHECK(cli::cmd_solve(corpus_path("tc.expected.gm"), "tc nil (lam x\\ var x) (arr alpha alpha)", o, out, err) ==
        cli::kInputError);

  o.engine = "hoas";
  auto hjson = scratch("h.json");
  o.json = hjson.string();
  CHECK(cli::cmd_solve(tc, "tc(nil, lam(<a> lam(<b> var(a))), arr(alpha, arr(beta, alpha)))", o, out, err) ==
        cli::kProvable);
  auto u = translator::translate_program(prog);
  auto goal = translator::translate_goal(
      prog.sig, nominal::parse_goal("tc(nil, lam(<a> lam(<b> var(a))), arr(alpha, arr(beta, alpha)))", prog.sig));
  auto def = u.definition({goal});
  CHECK(hoas::gcheck(def, hoas::gderivation_from_json(def, read_json(hjson))));
  CHECK(cli::cmd_solve(corpus_path("tc.expected.gm"), "tc nil (lam x\\ var x) (arr alpha alpha)", o, out, err) ==
        cli::kProvable);
  o.engine = "other";
  CHECK(cli::cmd_solve(tc, "tc(nil, var(a), alpha)", o, out, err) == cli::kInputError);
}

TEST_CASE("translate, equiv and seq commands") {
  cli::CmdOptions o;
  std::ostringstream out, err;
  CHECK(cli::cmd_translate(corpus_path("tc.apl"), o, out, err) == cli::kProvable);
  CHECK(out.str().find("tc G (lam (x\\ E x)) (arr T T')") != std::string::npos);
  o.restricted = true;
  CHECK(cli::cmd_translate(corpus_path("ext.apl"), o, out, err) == cli::kInputError);
  o.restricted = false;
  o.passes = "sub,bogus";
  CHECK(cli::cmd_translate(corpus_path("tc.apl"), o, out, err) == cli::kInputError);
  o.passes.reset();

  auto goals = scratch("goals.txt");
  {
    std::ofstream f(goals);
    f << "% typing goals\n"
      << "tc(nil, lam(<a> var(a)), arr(alpha, alpha))\n"
      << "tc(nil, lam(<a> var(a)), arr(alpha, beta))\n";
  }
  cli::GoalSet gs;
  gs.goals_file = goals.string();
  harness::RunReport rep;
  std::ostringstream eout;
  CHECK(cli::cmd_equiv(corpus_path("tc.apl"), gs, o, eout, err, &rep) == cli::kProvable);
  CHECK(rep.records.size() == 2);
  CHECK(eout.str().find("2 goals, 1 provable (nominal), 1 provable (hoas), 0 disagreements") != std::string::npos);

  {
    std::ofstream f(goals);
    f << "tc(nil, X, alpha)\n";
  }
  CHECK(cli::cmd_equiv(corpus_path("tc.apl"), gs, o, eout, err) == cli::kInputError);

  cli::GoalSet en;
  en.pred = "subst";
  en.count = 15;
  o.oracle = true;
  std::ostringstream oout;
  CHECK(cli::cmd_equiv(corpus_path("subst.apl"), en, o, oout, err) == cli::kProvable);
  CHECK(oout.str().find("oracle:") != std::string::npos);
  o.oracle = false;

  o.lim.max_unfoldings = 16;
  CHECK(cli::cmd_seq(corpus_path("tc.lp2"), "tc (lam x\\ x) (arr alpha alpha)", {}, o, out, err) == cli::kProvable);
  CHECK(cli::cmd_seq(corpus_path("tc.lp2"), "tc x alpha", {"tc x alpha"}, o, out, err) == cli::kProvable);
  CHECK(cli::cmd_seq(corpus_path("tc.lp2"), "tc x beta", {"tc x alpha"}, o, out, err) == cli::kNotProvable);
  CHECK(cli::cmd_seq(corpus_path("tc.apl"), "tc x beta", {}, o, out, err) == cli::kInputError);
}
