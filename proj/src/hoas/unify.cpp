#include "nomhoas/hoas/unify.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

namespace nomhoas::hoas {

HTerm HUnifState::new_var(const std::string& stem, const TyP& ty, int stamp, std::set<std::string> forbidden) {
  std::string base = stem.substr(0, stem.find('$'));
  if (base.empty() || !std::isalpha(static_cast<unsigned char>(base[0]))) base = "X";
  base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
  std::string name;
  do name = base + "$" + std::to_string(++counter);
  while (vars.count(name));
  vars[name] = VarInfo{ty, stamp, std::move(forbidden)};
  return HTerm::fvar(name, ty);
}

bool HUnifState::permitted(const std::string& var, const std::string& nom) const {
  const VarInfo& v = vars.at(var);
  auto it = nom_stamp.find(nom);
  int st = it == nom_stamp.end() ? 0 : it->second;
  return st < v.stamp && !v.forbidden.count(nom);
}

HTerm hresolve(const HUnifState& s, const HTerm& t) {
  HTerm cur = t;
  for (;;) {
    std::map<std::string, HTerm> sub;
    for (const auto& v : hfree_vars(cur)) {
      auto it = s.bind.find(v);
      if (it != s.bind.end()) sub.emplace(v, it->second);
    }
    if (sub.empty()) return cur;
    cur = hsubstitute(cur, sub);
  }
}

void open_vars(const HUnifState& s, const HTerm& t, std::map<std::string, TyP>& out) {
  for (const auto& v : hfree_vars(hresolve(s, t)))
    if (s.is_var(v) && !s.bind.count(v)) out.emplace(v, s.vars.at(v).ty);
}

namespace {

class Unifier {
 public:
  explicit Unifier(HUnifState& s) : s_(s) {}

  HUStatus eq(const HTerm& a0, const HTerm& b0, std::vector<TyP>& ctx) {
    HTerm a = hresolve(s_, a0);
    HTerm b = hresolve(s_, b0);
    if (a == b) return HUStatus::Ok;
    if (a.kind() == HKind::Lam || b.kind() == HKind::Lam) {
      if (a.kind() != HKind::Lam || b.kind() != HKind::Lam) return HUStatus::Fail;
      ctx.push_back(a.ty()->dom);
      HUStatus r = eq(a->args[0], b->args[0], ctx);
      ctx.pop_back();
      return r;
    }
    bool fa = flex(a), fb = flex(b);
    if (fa && fb && a.head()->name == b.head()->name) return flex_same(a, b, ctx);
    if (fa && pattern(a)) return solve(a, b, ctx);
    if (fb && pattern(b)) return solve(b, a, ctx);
    if (fa || fb) {
      postpone(a, b, ctx);
      return HUStatus::NonPattern;
    }
    const HTerm& ha = a.head();
    const HTerm& hb = b.head();
    if (ha.kind() != hb.kind()) return HUStatus::Fail;
    if (ha.kind() == HKind::BVar ? ha->index != hb->index : ha->name != hb->name) return HUStatus::Fail;
    const auto& as = a.args();
    const auto& bs = b.args();
    if (as.size() != bs.size()) return HUStatus::Fail;
    HUStatus out = HUStatus::Ok;
    for (size_t i = 0; i < as.size(); ++i) {
      HUStatus r = eq(as[i], bs[i], ctx);
      if (r == HUStatus::Fail) return r;
      if (r == HUStatus::NonPattern) out = r;
    }
    return out;
  }

 private:
  bool flex(const HTerm& t) const {
    const HTerm& h = t.head();
    return h.kind() == HKind::FVar && s_.is_var(h->name) && !s_.bind.count(h->name);
  }

  // Arguments as atoms when t is a pattern: distinct bound variables or
  // nominal constants the variable may not mention directly.
  std::optional<std::vector<HTerm>> atoms_of(const HTerm& t) const {
    std::vector<HTerm> out;
    const std::string& x = t.head()->name;
    for (const auto& a : t.args()) {
      HTerm at = eta_atom(a);
      if (!at.valid()) return std::nullopt;
      if (at.kind() == HKind::Nom && s_.permitted(x, at->name)) return std::nullopt;
      for (const auto& o : out)
        if (o == at) return std::nullopt;
      out.push_back(at);
    }
    return out;
  }

  bool pattern(const HTerm& t) const { return atoms_of(t).has_value(); }

  void postpone(const HTerm& a, const HTerm& b, const std::vector<TyP>& ctx) {
    HTerm la = a, lb = b;
    for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
      la = HTerm::lam("x", *it, la);
      lb = HTerm::lam("x", *it, lb);
    }
    s_.postponed.emplace_back(la, lb);
  }

  void bind(const std::string& x, const HTerm& v) { s_.bind[x] = normalize(v); }

  static HTerm abstract_over(const std::vector<HTerm>& atoms, const HTerm& body) {
    HTerm v = body;
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) v = HTerm::lam("y", it->ty(), v);
    return v;
  }

  HUStatus flex_same(const HTerm& a, const HTerm& b, const std::vector<TyP>& ctx) {
    auto aa = atoms_of(a), bb = atoms_of(b);
    if (!aa || !bb) {
      postpone(a, b, ctx);
      return HUStatus::NonPattern;
    }
    const std::string& x = a.head()->name;
    size_t n = aa->size();
    std::vector<HTerm> keep;
    for (size_t i = 0; i < n; ++i)
      if ((*aa)[i] == (*bb)[i]) keep.push_back(HTerm::bvar(static_cast<int>(n - 1 - i), (*aa)[i].ty()));
    if (keep.size() == n) return HUStatus::Ok;
    const VarInfo& xi = s_.vars.at(x);
    std::vector<TyP> kt;
    for (const auto& k : keep) kt.push_back(k.ty());
    HTerm nv = s_.new_var(x, arrows(kt, result_type(xi.ty)), xi.stamp, xi.forbidden);
    bind(x, abstract_over(*aa, HTerm::app(nv, keep)));
    return HUStatus::Ok;
  }

  struct Copier {
    Unifier& u;
    const std::string& x;
    const std::vector<HTerm>& atoms;
    bool nonpattern = false;

    int position(const HTerm& at) const {
      for (size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == at) return static_cast<int>(i);
      return -1;
    }

    HTerm mapped_atom(const HTerm& at, int d) const {
      int n = static_cast<int>(atoms.size());
      if (at.kind() == HKind::BVar) {
        if (at->index < d) return at;
        int p = position(HTerm::bvar(at->index - d, at.ty()));
        return p < 0 ? HTerm() : HTerm::bvar(d + n - 1 - p, at.ty());
      }
      int p = position(at);
      if (p >= 0) return HTerm::bvar(d + n - 1 - p, at.ty());
      return u.s_.permitted(x, at->name) ? at : HTerm();
    }

    HTerm fail(bool under_flex) {
      if (under_flex) nonpattern = true;
      return {};
    }

    HTerm copy(const HTerm& t, int d, bool under_flex) {
      if (t.kind() == HKind::Lam) {
        HTerm b = copy(t->args[0], d + 1, under_flex);
        return b.valid() ? HTerm::lam(t->name, t.ty()->dom, b) : b;
      }
      const HTerm& h = t.head();
      HTerm nh;
      switch (h.kind()) {
        case HKind::BVar:
        case HKind::Nom:
          nh = mapped_atom(h, d);
          if (!nh.valid()) return fail(under_flex);
          break;
        case HKind::Const: nh = h; break;
        case HKind::FVar:
          if (!u.s_.is_var(h->name)) {
            nh = h;
            break;
          }
          if (h->name == x) return fail(under_flex);
          // copy_flex may have bound it at an earlier occurrence
          if (u.s_.bind.count(h->name)) return copy(hresolve(u.s_, t), d, under_flex);
          return copy_flex(t, d);
        default: return fail(under_flex);
      }
      std::vector<HTerm> as;
      for (const auto& a : t.args()) {
        HTerm c = copy(a, d, under_flex);
        if (!c.valid()) return c;
        as.push_back(c);
      }
      return HTerm::app(nh, std::move(as));
    }

    // Y b inside the value of x: prune arguments x cannot express and raise
    // Y over the atoms of x it could otherwise mention.
    HTerm copy_flex(const HTerm& t, int d) {
      const std::string y = t.head()->name;
      const VarInfo yi = u.s_.vars.at(y);
      const VarInfo& xi = u.s_.vars.at(x);
      const auto& bs = t.args();
      std::vector<bool> keep(bs.size(), true);
      std::vector<HTerm> copied(bs.size());
      bool pruned = false;
      for (size_t j = 0; j < bs.size(); ++j) {
        HTerm at = eta_atom(bs[j]);
        if (at.valid()) {
          HTerm m = mapped_atom(at, d);
          if (!m.valid()) {
            keep[j] = false;
            pruned = true;
            continue;
          }
        }
        copied[j] = copy(bs[j], d, true);
        if (!copied[j].valid()) {
          nonpattern = true;
          return {};
        }
      }
      std::vector<HTerm> extras;
      for (const auto& a : atoms)
        if (a.kind() == HKind::Nom && u.s_.permitted(y, a->name) && !u.s_.permitted(x, a->name))
          extras.push_back(a);
      bool narrower = yi.stamp <= xi.stamp &&
                      std::includes(yi.forbidden.begin(), yi.forbidden.end(), xi.forbidden.begin(),
                                    xi.forbidden.end());
      if (!pruned && extras.empty() && narrower) {
        std::vector<HTerm> as;
        for (const auto& c : copied) as.push_back(c);
        return HTerm::app(t.head(), std::move(as));
      }
      // Y := \z. Y'(kept z, extras)
      size_t m = bs.size();
      std::vector<TyP> nt;
      std::vector<HTerm> inner, outer;
      std::vector<TyP> yargs = arg_types(yi.ty);
      for (size_t j = 0; j < m; ++j)
        if (keep[j]) {
          nt.push_back(yargs[j]);
          inner.push_back(normalize(HTerm::bvar(static_cast<int>(m - 1 - j), yargs[j])));
          outer.push_back(copied[j]);
        }
      for (const auto& e : extras) {
        nt.push_back(e.ty());
        inner.push_back(e);
        outer.push_back(mapped_atom(e, d));
      }
      std::set<std::string> forb = yi.forbidden;
      forb.insert(xi.forbidden.begin(), xi.forbidden.end());
      HTerm yp = u.s_.new_var(y, arrows(nt, result_type(yi.ty)), std::min(yi.stamp, xi.stamp), forb);
      HTerm val = HTerm::app(yp, inner);
      for (size_t j = m; j-- > 0;) val = HTerm::lam("z", yargs[j], val);
      u.bind(y, val);
      return normalize(HTerm::app(yp, outer));
    }
  };

  HUStatus solve(const HTerm& f, const HTerm& t, const std::vector<TyP>& ctx) {
    auto atoms = atoms_of(f);
    const std::string x = f.head()->name;
    Copier c{*this, x, *atoms};
    HTerm body = c.copy(t, 0, false);
    if (!body.valid()) {
      if (!c.nonpattern) return HUStatus::Fail;
      postpone(f, t, ctx);
      return HUStatus::NonPattern;
    }
    HTerm v = abstract_over(*atoms, body);
    if (has_loose_bvars(v)) return HUStatus::Fail;
    bind(x, v);
    return HUStatus::Ok;
  }

  HUnifState& s_;
};

}  // namespace

HUStatus retry_postponed(HUnifState& s) {
  bool changed = true;
  while (changed && !s.postponed.empty()) {
    changed = false;
    auto work = std::move(s.postponed);
    s.postponed.clear();
    for (const auto& [a, b] : work) {
      size_t before = s.bind.size();
      std::vector<TyP> ctx;
      HUStatus r = Unifier(s).eq(a, b, ctx);
      if (r == HUStatus::Fail) return r;
      if (s.bind.size() != before) changed = true;
    }
  }
  return s.postponed.empty() ? HUStatus::Ok : HUStatus::NonPattern;
}

HUStatus pattern_unify(HUnifState& s, const HTerm& a, const HTerm& b) {
  if (!ty_equal(a.ty(), b.ty())) return HUStatus::Fail;
  std::vector<TyP> ctx;
  HUStatus r = Unifier(s).eq(a, b, ctx);
  if (r == HUStatus::Fail) return r;
  return retry_postponed(s);
}

}  // namespace nomhoas::hoas
