#include "nomhoas/nominal/enumerate.hpp"

namespace nomhoas::nominal {

const std::vector<Term>& TermEnumerator::of_size(const Type& t, int size) {
  auto key = std::make_pair(t.str(), size);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::vector<Term> out;
  if (size >= 1) {
    if (t.is_abs()) {
      if (size >= 3)
        for (const auto& n : pool_) {
          if (n.ntype != t.id) continue;
          for (const auto& b : of_size(*t.body, size - 2)) out.push_back(Term::abs(Term::name(n), b));
        }
    } else if (sig_.is_name_type(t.id)) {
      if (size == 1)
        for (const auto& n : pool_)
          if (n.ntype == t.id) out.push_back(Term::name(n));
    } else {
      for (const auto& f : sig_.func_order) {
        const FuncSym& fs = sig_.funcs.at(f);
        if (fs.result != t.id) continue;
        if (fs.args.empty()) {
          if (size == 1) out.push_back(Term::app(f, {}));
          continue;
        }
        std::vector<Term> cur;
        compositions(fs.args, 0, size - 1, cur, f, out);
      }
    }
  }
  return memo_[key] = std::move(out);
}

void TermEnumerator::compositions(const std::vector<Type>& args, size_t i, int left, std::vector<Term>& cur,
                                  const std::string& f, std::vector<Term>& out) {
  if (i == args.size()) {
    if (left == 0) out.push_back(Term::app(f, cur));
    return;
  }
  int rest = static_cast<int>(args.size() - i - 1);
  for (int s = 1; s <= left - rest; ++s) {
    // copy: of_size may rehash the memo while we recurse
    std::vector<Term> choices = of_size(args[i], s);
    for (const auto& c : choices) {
      cur.push_back(c);
      compositions(args, i + 1, left - s, cur, f, out);
      cur.pop_back();
    }
  }
}

std::vector<Term> TermEnumerator::up_to(const Type& t, int max_size) {
  std::vector<Term> out;
  for (int s = 1; s <= max_size; ++s) {
    const auto& v = of_size(t, s);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::vector<Name> name_pool(const Signature& sig, const std::set<Name>& base, int per_type) {
  std::vector<Name> pool(base.begin(), base.end());
  std::set<std::string> ids;
  for (const auto& n : base) ids.insert(n.id);
  for (const auto& nt : sig.name_types) {
    int made = 0;
    for (unsigned long long k = 1; made < per_type; ++k) {
      std::string id = fresh_id("o", k);
      if (ids.insert(id).second) {
        pool.push_back(Name{id, nt});
        ++made;
      }
    }
  }
  return pool;
}

}  // namespace nomhoas::nominal
