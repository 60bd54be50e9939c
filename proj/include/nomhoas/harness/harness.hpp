#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nomhoas/common/limits.hpp"
#include "nomhoas/hoas/engine.hpp"
#include "nomhoas/nominal/engine.hpp"
#include "nomhoas/translator/translator.hpp"

namespace nomhoas::harness {

// Ground goals p(t1, .., tn) drawn breadth-first (by total node count) from
// the well-typed terms of each argument type, then sampled with a seeded
// shuffle.  With `complete` set, about half of the sampled goals have their
// last argument replaced by a witness found for  exists Y. p(t1, .., Y),
// which biases the set toward provable goals.
struct EnumSpec {
  std::string pred;
  int arg_size = 5;
  int count = 200;
  std::uint64_t seed = 1;
  bool complete = true;
  int names_per_type = 2;
};

std::vector<nominal::Goal> enumerate_goals(const nominal::Program& prog, const EnumSpec& spec,
                                           const SearchLimits& lim);

struct EngineRun {
  std::string engine;  // "nominal", "hoas", "nominal-oracle", "hoas-oracle"
  bool provable = false;
  SearchStatus status = SearchStatus::Exhausted;
  int depth = -1;
  int witness_size = 0;  // largest existential witness of the derivation found
  double ms = 0;
  std::string derivation_file;
};

struct GoalRecord {
  std::string goal;
  std::string translated;
  std::vector<EngineRun> runs;

  // Unification-based engines only.
  bool agree() const;
  // All runs, oracles included; empty when no oracle ran or some proof
  // needed a witness larger than term_size.
  std::optional<bool> oracle_agree(int term_size) const;
};

struct RunReport {
  std::vector<GoalRecord> records;

  int provable(const std::string& engine) const;
  int disagreements() const;
  nlohmann::json to_json() const;
};

struct EquivConfig {
  SearchLimits lim;
  translator::TransConfig trans;
  bool oracle = false;  // also run both enumeration oracles
};

// The translated program for a configuration, shared by all goals.
struct EquivContext {
  const nominal::Program& prog;
  translator::TranslationUnit unit;
  EquivConfig cfg;

  EquivContext(const nominal::Program& p, const EquivConfig& c);
};

EngineRun run_nominal(const nominal::Program& prog, const nominal::Goal& g, const SearchLimits& lim, bool oracle);
EngineRun run_hoas(const hoas::Definition& d, const hoas::Formula& f, const SearchLimits& lim, bool oracle);

GoalRecord equiv_one(const EquivContext& cx, const nominal::Goal& g);
RunReport run_equiv_serial(const EquivContext& cx, const std::vector<nominal::Goal>& goals);
// Same records in the same order; goals are spread over OpenMP threads.
RunReport run_equiv_parallel(const EquivContext& cx, const std::vector<nominal::Goal>& goals);

// Greedy shrinking of a disagreeing atomic goal: an argument subterm is
// replaced by one of its own subterms of the same type, or by a smallest
// inhabitant, as long as the engines still disagree.
nominal::Goal shrink(const EquivContext& cx, const nominal::Goal& g);

// Random permutation of the names of the given types drawn from `pool`.
nominal::Permutation random_permutation(const std::vector<nominal::Name>& pool, std::uint64_t seed);

}  // namespace nomhoas::harness
