#include "nomhoas/cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nomhoas/hoas/parser.hpp"
#include "nomhoas/nominal/parser.hpp"
#include "nomhoas/seq/seq.hpp"

namespace nomhoas::cli {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << j.dump(2) << "\n";
}

// Runs `body`, mapping input problems to exit code 2.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const nominal::SyntaxError& e) {
    err << "syntax error: " << e.what() << "\n";
  } catch (const nominal::TypeError& e) {
    err << "type error: " << e.what() << "\n";
  } catch (const nominal::WellFormednessError& e) {
    err << "ill-formed: " << e.what() << "\n";
  } catch (const hoas::HTypeError& e) {
    err << "type error: " << e.what() << "\n";
  } catch (const translator::TranslationError& e) {
    err << "translation error: " << e.what() << "\n";
  } catch (const seq::SeqError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInputError;
}

void print_run(std::ostream& out, const harness::EngineRun& r, const std::string& skeleton) {
  if (r.provable)
    out << r.engine << ": provable at depth " << r.depth << "\n  " << skeleton << "\n";
  else
    out << r.engine << ": not provable (" << status_str(r.status) << ")\n";
}

int solve_hoas(const hoas::Definition& d, const hoas::Formula& f, const CmdOptions& o, std::ostream& out,
               harness::RunReport* rep, const std::string& goal_text, const std::string& translated) {
  hoas::GOptions opt;
  opt.uncounted = translator::prelude_preds();
  auto t0 = std::chrono::steady_clock::now();
  auto res = o.oracle ? hoas::goracle_solve(d, f, o.lim, opt) : hoas::gprove(d, f, o.lim, opt);
  harness::EngineRun r;
  r.engine = o.oracle ? "hoas-oracle" : "hoas";
  r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.provable = res.derivation.has_value();
  r.status = res.status;
  r.depth = res.depth;
  if (res.derivation && !o.json.empty()) {
    write_json(o.json, hoas::to_json(*res.derivation));
    r.derivation_file = o.json;
  }
  print_run(out, r, res.derivation ? res.derivation->skeleton() : "");
  if (rep) rep->records.push_back({goal_text, translated, {r}});
  return r.provable ? kProvable : kNotProvable;
}

}  // namespace

translator::TransConfig trans_config(const CmdOptions& o) {
  translator::TransConfig c;
  if (o.no_simplify) c = translator::TransConfig::plain();
  if (o.passes && !o.no_simplify) {
    c = translator::TransConfig::plain();
    std::stringstream ss(*o.passes);
    std::string p;
    while (std::getline(ss, p, ',')) {
      if (p == "sub") c.enable_subordination_pruning = true;
      else if (p == "fresh") c.enable_static_freshness = true;
      else if (p == "nabla") c.enable_vacuous_nabla_removal = true;
      else if (!p.empty()) throw std::invalid_argument("unknown pass '" + p + "' (expected sub, fresh, nabla)");
    }
  }
  c.name_restricted_mode = o.restricted;
  return c;
}

int cmd_solve(const std::string& file, const std::string& goal, const CmdOptions& o, std::ostream& out,
              std::ostream& err, harness::RunReport* rep) {
  return guarded(err, [&]() -> int {
    std::string text = slurp(file);
    if (ends_with(file, ".gm")) {
      if (o.engine != "hoas") throw InputError(file + " is a .gm definition; use --engine hoas");
      hoas::Definition d = hoas::parse_definition(text);
      hoas::Formula f = hoas::parse_formula(goal, d.sig);
      return solve_hoas(d, f, o, out, rep, goal, "");
    }
    nominal::Program prog = nominal::parse_program(text);
    nominal::Goal g = nominal::parse_goal(goal, prog.sig);
    if (o.engine == "hoas") {
      auto cfg = trans_config(o);
      auto unit = translator::translate_program(prog, cfg);
      hoas::Formula f = translator::translate_goal(prog.sig, g, cfg);
      out << "translated goal: " << f.str() << "\n";
      return solve_hoas(unit.definition({f}), f, o, out, rep, g.str(), f.str());
    }
    if (o.engine != "nominal") throw InputError("unknown engine " + o.engine);
    if (!free_vars(g).empty()) throw InputError("the nominal engine needs a closed goal");
    auto t0 = std::chrono::steady_clock::now();
    auto res = o.oracle ? nominal::oracle_solve(prog, g, o.lim) : nominal::solve(prog, g, o.lim);
    harness::EngineRun r;
    r.engine = o.oracle ? "nominal-oracle" : "nominal";
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.provable = res.derivation.has_value();
    r.status = res.status;
    r.depth = res.depth;
    if (res.derivation && !o.json.empty()) {
      write_json(o.json, nominal::to_json(*res.derivation));
      r.derivation_file = o.json;
    }
    print_run(out, r, res.derivation ? res.derivation->skeleton() : "");
    if (rep) rep->records.push_back({g.str(), "", {r}});
    return r.provable ? kProvable : kNotProvable;
  });
}

int cmd_translate(const std::string& file, const CmdOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    nominal::Program prog = nominal::parse_program(slurp(file));
    auto unit = translator::translate_program(prog, trans_config(o));
    out << hoas::print_definition(unit.definition());
    if (o.report) out << "\n" << unit.report();
    return kProvable;
  });
}

namespace {

std::vector<nominal::Goal> read_goals(const std::string& path, const nominal::Signature& sig) {
  std::vector<nominal::Goal> out;
  std::stringstream ss(slurp(path));
  std::string line;
  while (std::getline(ss, line)) {
    auto p = line.find_first_not_of(" \t");
    if (p == std::string::npos || line[p] == '%') continue;
    out.push_back(nominal::parse_goal(line, sig, true));
  }
  return out;
}

}  // namespace

int cmd_equiv(const std::string& file, const GoalSet& gs, const CmdOptions& o, std::ostream& out, std::ostream& err,
              harness::RunReport* rep) {
  return guarded(err, [&]() -> int {
    nominal::Program prog = nominal::parse_program(slurp(file));
    harness::EquivConfig cfg;
    cfg.lim = o.lim;
    cfg.trans = trans_config(o);
    cfg.oracle = o.oracle;
    std::vector<nominal::Goal> goals;
    if (!gs.goals_file.empty()) {
      goals = read_goals(gs.goals_file, prog.sig);
    } else {
      harness::EnumSpec spec;
      spec.pred = gs.pred.empty() ? (prog.clauses.empty() ? "" : prog.clauses.back().pred) : gs.pred;
      spec.arg_size = gs.size;
      spec.count = gs.count;
      spec.seed = o.seed;
      goals = harness::enumerate_goals(prog, spec, o.lim);
    }
    for (const auto& g : goals)
      if (!g.ground()) throw InputError("equiv goals must be ground: " + g.str());
    harness::EquivContext cx(prog, cfg);
    auto t0 = std::chrono::steady_clock::now();
    harness::RunReport r = gs.serial ? harness::run_equiv_serial(cx, goals) : harness::run_equiv_parallel(cx, goals);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.json.empty()) write_json(o.json, r.to_json());
    out << goals.size() << " goals, " << r.provable("nominal") << " provable (nominal), " << r.provable("hoas")
        << " provable (hoas), " << r.disagreements() << " disagreements, " << secs << " s\n";
    int code = kProvable;
    if (o.oracle) {
      int checked = 0, bad = 0;
      for (const auto& rec : r.records)
        if (auto a = rec.oracle_agree(o.lim.term_size_bound)) {
          ++checked;
          if (!*a) {
            ++bad;
            out << "oracle disagreement: " << rec.goal << "\n";
          }
        }
      out << "oracle: " << checked << " goals compared, " << bad << " disagreements\n";
      if (bad) code = kDisagreement;
    }
    for (size_t i = 0; i < r.records.size(); ++i) {
      if (r.records[i].agree()) continue;
      nominal::Goal small = harness::shrink(cx, goals[i]);
      auto rec = harness::equiv_one(cx, small);
      out << "disagreement: " << r.records[i].goal << "\nminimized: " << rec.goal << "\n  translated: " << rec.translated
          << "\n";
      for (const auto& run : rec.runs) out << "  " << run.engine << ": " << (run.provable ? "provable" : "not provable") << "\n";
      code = kDisagreement;
      break;
    }
    if (rep) *rep = std::move(r);
    return code;
  });
}

int cmd_seq(const std::string& file, const std::string& goal, const std::vector<std::string>& hyps,
            const CmdOptions& o, std::ostream& out, std::ostream& err, harness::RunReport* rep) {
  return guarded(err, [&]() -> int {
    seq::LpDb db = seq::encode_lprolog(slurp(file));
    hoas::HTerm g = seq::parse_obj_goal(db, goal);
    std::vector<hoas::HTerm> hs;
    for (const auto& h : hyps) hs.push_back(seq::parse_atm(db, h));
    hoas::Formula f = seq::seq_formula(db, hs, g);
    out << "goal: " << f.str() << "\n";
    if (o.report) out << hoas::print_definition(db.def) << "\n";
    return solve_hoas(db.def, f, o, out, rep, goal, f.str());
  });
}

}  // namespace nomhoas::cli
