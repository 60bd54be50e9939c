#pragma once

#include <map>
#include <string>
#include <vector>

#include "nomhoas/hoas/formula.hpp"

namespace nomhoas::hoas {

// Closed beta-normal eta-long terms of a type over the signature's
// constants and a fixed set of nominal constants.  Size is hsize of the
// body below the term's own lambda prefix.
class HTermEnumerator {
 public:
  HTermEnumerator(const HSignature& sig, std::vector<HTerm> noms) : sig_(sig), noms_(std::move(noms)) {}

  std::vector<HTerm> of_size(const TyP& t, int size);
  std::vector<HTerm> up_to(const TyP& t, int max_size);

 private:
  // Bodies of base type `base` in a context of bound variable types
  // (innermost last), of exact size.
  const std::vector<HTerm>& bodies(const std::vector<TyP>& ctx, const TyP& base, int size);
  // Terms of arbitrary type in ctx: lambda prefix plus body, total hsize.
  std::vector<HTerm> terms(const std::vector<TyP>& ctx, const TyP& t, int size);
  void spread(const std::vector<TyP>& ctx, const HTerm& head, const std::vector<TyP>& args, size_t i, int left,
              std::vector<HTerm>& cur, std::vector<HTerm>& out);

  const HSignature& sig_;
  std::vector<HTerm> noms_;
  std::map<std::string, std::vector<HTerm>> memo_;
};

// Nominal constants of `base` plus per_type generated ones ("o$k") for each
// nominal type.
std::vector<HTerm> nominal_pool(const HSignature& sig, const std::map<std::string, TyP>& base, int per_type);

}  // namespace nomhoas::hoas
