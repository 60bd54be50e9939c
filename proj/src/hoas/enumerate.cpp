#include "nomhoas/hoas/enumerate.hpp"

#include <set>

namespace nomhoas::hoas {

const std::vector<HTerm>& HTermEnumerator::bodies(const std::vector<TyP>& ctx, const TyP& base, int size) {
  std::string key = ty_str(base) + "#" + std::to_string(size) + "|";
  for (const auto& c : ctx) key += ty_str(c) + ";";
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::vector<HTerm> out;
  if (size >= 1) {
    std::vector<HTerm> heads;
    for (const auto& c : sig_.const_order) heads.push_back(HTerm::con(c, sig_.consts.at(c)));
    for (size_t i = 0; i < ctx.size(); ++i) heads.push_back(HTerm::bvar(static_cast<int>(ctx.size() - 1 - i), ctx[i]));
    for (const auto& n : noms_) heads.push_back(n);
    for (const auto& h : heads) {
      if (!ty_equal(result_type(h.ty()), base)) continue;
      std::vector<TyP> args = arg_types(h.ty());
      if (args.empty()) {
        if (size == 1) out.push_back(h);
        continue;
      }
      std::vector<HTerm> cur;
      spread(ctx, h, args, 0, size - 1, cur, out);
    }
  }
  return memo_[key] = std::move(out);
}

void HTermEnumerator::spread(const std::vector<TyP>& ctx, const HTerm& head, const std::vector<TyP>& args, size_t i,
                             int left, std::vector<HTerm>& cur, std::vector<HTerm>& out) {
  if (i == args.size()) {
    if (left == 0) out.push_back(HTerm::app(head, cur));
    return;
  }
  int rest = static_cast<int>(args.size() - i - 1);
  for (int s = 1; s <= left - rest; ++s) {
    for (const auto& a : terms(ctx, args[i], s)) {
      cur.push_back(a);
      spread(ctx, head, args, i + 1, left - s, cur, out);
      cur.pop_back();
    }
  }
}

std::vector<HTerm> HTermEnumerator::terms(const std::vector<TyP>& ctx, const TyP& t, int size) {
  std::vector<TyP> pre = arg_types(t);
  int body = size - static_cast<int>(pre.size());
  if (body < 1) return {};
  std::vector<TyP> inner = ctx;
  inner.insert(inner.end(), pre.begin(), pre.end());
  std::vector<HTerm> out;
  for (HTerm b : bodies(inner, result_type(t), body)) {
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) b = HTerm::lam("x", *it, b);
    out.push_back(b);
  }
  return out;
}

std::vector<HTerm> HTermEnumerator::of_size(const TyP& t, int size) {
  std::vector<TyP> pre = arg_types(t);
  std::vector<HTerm> out;
  for (HTerm b : bodies(pre, result_type(t), size)) {
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) b = HTerm::lam("x", *it, b);
    out.push_back(b);
  }
  return out;
}

std::vector<HTerm> HTermEnumerator::up_to(const TyP& t, int max_size) {
  std::vector<HTerm> out;
  for (int s = 1; s <= max_size; ++s) {
    auto v = of_size(t, s);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

std::vector<HTerm> nominal_pool(const HSignature& sig, const std::map<std::string, TyP>& base, int per_type) {
  std::vector<HTerm> pool;
  std::set<std::string> ids;
  for (const auto& [n, t] : base) {
    pool.push_back(HTerm::nom(n, t));
    ids.insert(n);
  }
  for (const auto& nt : sig.nominal_types) {
    int made = 0;
    for (int k = 1; made < per_type; ++k) {
      std::string id = "o$" + std::to_string(k);
      if (ids.insert(id).second) {
        pool.push_back(HTerm::nom(id, base_ty(nt)));
        ++made;
      }
    }
  }
  return pool;
}

}  // namespace nomhoas::hoas
