#include <iostream>

#include "CLI11.hpp"
#include "nomhoas/cli/commands.hpp"

using namespace nomhoas;

namespace {

void limit_flags(CLI::App* sub, cli::CmdOptions& o) {
  sub->add_option("--depth", o.lim.max_unfoldings, "unfolding bound per branch");
  sub->add_option("--term-size", o.lim.term_size_bound, "term size bound of the enumeration oracles");
  sub->add_option("--fresh-budget", o.lim.fresh_name_budget, "new names per name type in oracle mode");
  sub->add_flag("--oracle", o.oracle, "use the enumeration oracle");
}

void trans_flags(CLI::App* sub, cli::CmdOptions& o) {
  sub->add_flag("--no-simplify", o.no_simplify, "skip the simplification passes");
  sub->add_option("--passes", o.passes, "comma list of passes to run: sub,fresh,nabla");
  sub->add_flag("--restricted", o.restricted, "reject non-name-restricted swaps and abstractions");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nominal logic programs and their higher-order abstract syntax translation"};
  app.require_subcommand(1);
  cli::CmdOptions o;
  std::string file, goal;

  auto* solve = app.add_subcommand("solve", "prove a goal");
  solve->add_option("file", file, ".apl program or .gm definition")->required();
  solve->add_option("goal", goal)->required();
  solve->add_option("--engine", o.engine, "nominal or hoas")->check(CLI::IsMember({"nominal", "hoas"}));
  solve->add_option("--json", o.json, "write the derivation here");
  limit_flags(solve, o);
  trans_flags(solve, o);

  auto* translate = app.add_subcommand("translate", "print the translated definition");
  translate->add_option("file", file)->required();
  translate->add_flag("--report", o.report, "print what each pass did");
  trans_flags(translate, o);

  cli::GoalSet gs;
  auto* equiv = app.add_subcommand("equiv", "compare both engines on a goal set");
  equiv->add_option("file", file)->required();
  equiv->add_option("--goals", gs.goals_file, "file with one ground goal per line");
  equiv->add_option("--pred", gs.pred, "predicate to enumerate goals for");
  equiv->add_option("--size", gs.size, "argument size bound (node count)");
  equiv->add_option("--count", gs.count, "number of goals");
  equiv->add_option("--seed", o.seed);
  equiv->add_flag("--serial", gs.serial, "run on one thread");
  equiv->add_option("--json", o.json, "write the run report here");
  limit_flags(equiv, o);
  trans_flags(equiv, o);

  std::vector<std::string> hyps;
  auto* seqc = app.add_subcommand("seq", "prove a goal of a second-order lambda Prolog program");
  seqc->add_option("file", file, ".lp2 program")->required();
  seqc->add_option("goal", goal)->required();
  seqc->add_option("--hyp", hyps, "hypothesis (atomic formula) in the initial context");
  seqc->add_option("--json", o.json, "write the derivation here");
  seqc->add_flag("--report", o.report, "print the encoded definition");
  limit_flags(seqc, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kInputError;
  }

  if (*solve) return cli::cmd_solve(file, goal, o, std::cout, std::cerr);
  if (*translate) return cli::cmd_translate(file, o, std::cout, std::cerr);
  if (*equiv) return cli::cmd_equiv(file, gs, o, std::cout, std::cerr);
  // interpreter steps count as unfoldings, so seq needs a deeper default
  if (seqc->count("--depth") == 0) o.lim.max_unfoldings = 16;
  return cli::cmd_seq(file, goal, hyps, o, std::cout, std::cerr);
}
