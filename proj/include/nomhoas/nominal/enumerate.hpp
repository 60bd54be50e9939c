#pragma once

#include <map>
#include <string>
#include <vector>

#include "nomhoas/nominal/syntax.hpp"

namespace nomhoas::nominal {

// All ground terms of a type, by exact node count, over a fixed name pool.
// Results are memoised and returned in a deterministic order.
class TermEnumerator {
 public:
  TermEnumerator(const Signature& sig, std::vector<Name> pool) : sig_(sig), pool_(std::move(pool)) {}

  const std::vector<Term>& of_size(const Type& t, int size);
  std::vector<Term> up_to(const Type& t, int max_size);
  const std::vector<Name>& pool() const { return pool_; }

 private:
  void compositions(const std::vector<Type>& args, size_t i, int left, std::vector<Term>& cur,
                    const std::string& f, std::vector<Term>& out);

  const Signature& sig_;
  std::vector<Name> pool_;
  std::map<std::pair<std::string, int>, std::vector<Term>> memo_;
};

// Names of the given terms/goals plus `per_type` generated names for every
// name type of the signature.
std::vector<Name> name_pool(const Signature& sig, const std::set<Name>& base, int per_type);

}  // namespace nomhoas::nominal
