#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nomhoas/common/limits.hpp"
#include "nomhoas/harness/harness.hpp"

namespace nomhoas::cli {

enum Exit { kProvable = 0, kNotProvable = 1, kInputError = 2, kDisagreement = 3 };

struct CmdOptions {
  std::string engine = "nominal";  // solve on .apl files; .gm files always use hoas
  SearchLimits lim;
  std::string json;                // derivation (solve, seq) or report (equiv) output
  std::optional<std::string> passes;  // comma list of sub,fresh,nabla; unset = all
  bool no_simplify = false;
  bool restricted = false;
  bool oracle = false;
  bool report = false;             // translate: print the pass log
  std::uint64_t seed = 1;
};

translator::TransConfig trans_config(const CmdOptions& o);

int cmd_solve(const std::string& file, const std::string& goal, const CmdOptions& o, std::ostream& out,
              std::ostream& err, harness::RunReport* rep = nullptr);
int cmd_translate(const std::string& file, const CmdOptions& o, std::ostream& out, std::ostream& err);

struct GoalSet {
  std::string goals_file;  // one goal per line; takes precedence
  std::string pred;        // otherwise enumerate goals for this predicate
  int size = 5;
  int count = 200;
  bool serial = false;
};

int cmd_equiv(const std::string& file, const GoalSet& gs, const CmdOptions& o, std::ostream& out, std::ostream& err,
              harness::RunReport* rep = nullptr);
int cmd_seq(const std::string& file, const std::string& goal, const std::vector<std::string>& hyps,
            const CmdOptions& o, std::ostream& out, std::ostream& err, harness::RunReport* rep = nullptr);

}  // namespace nomhoas::cli
