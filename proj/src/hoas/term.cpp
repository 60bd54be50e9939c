#include "nomhoas/hoas/term.hpp"

#include <cctype>
#include <functional>

namespace nomhoas::hoas {

TyP base_ty(const std::string& name) { return std::make_shared<const Ty>(Ty{Ty::Base, name, nullptr, nullptr}); }
TyP arrow_ty(TyP dom, TyP cod) { return std::make_shared<const Ty>(Ty{Ty::Arrow, "", std::move(dom), std::move(cod)}); }
TyP var_ty(const std::string& name) { return std::make_shared<const Ty>(Ty{Ty::Var, name, nullptr, nullptr}); }
TyP o_ty() {
  static TyP o = base_ty("o");
  return o;
}

bool ty_equal(const TyP& a, const TyP& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  if (a->kind == Ty::Arrow) return ty_equal(a->dom, b->dom) && ty_equal(a->cod, b->cod);
  return a->name == b->name;
}

std::string ty_str(const TyP& t) {
  if (!t) return "?";
  if (t->kind != Ty::Arrow) return t->name;
  std::string d = ty_str(t->dom);
  if (t->dom->kind == Ty::Arrow) d = "(" + d + ")";
  return d + " -> " + ty_str(t->cod);
}

TyP arrows(const std::vector<TyP>& args, TyP result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow_ty(*it, result);
  return result;
}

std::vector<TyP> arg_types(const TyP& t) {
  std::vector<TyP> out;
  for (TyP c = t; c->kind == Ty::Arrow; c = c->cod) out.push_back(c->dom);
  return out;
}

TyP result_type(const TyP& t) {
  TyP c = t;
  while (c->kind == Ty::Arrow) c = c->cod;
  return c;
}

bool ty_has_vars(const TyP& t) {
  if (t->kind == Ty::Var) return true;
  if (t->kind == Ty::Arrow) return ty_has_vars(t->dom) || ty_has_vars(t->cod);
  return false;
}

TyP ty_subst(const TyP& t, const std::map<std::string, TyP>& s) {
  if (t->kind == Ty::Var) {
    auto it = s.find(t->name);
    return it == s.end() ? t : it->second;
  }
  if (t->kind == Ty::Arrow) return arrow_ty(ty_subst(t->dom, s), ty_subst(t->cod, s));
  return t;
}

bool ty_match(const TyP& pat, const TyP& t, std::map<std::string, TyP>& s) {
  if (pat->kind == Ty::Var) {
    auto it = s.find(pat->name);
    if (it != s.end()) return ty_equal(it->second, t);
    s[pat->name] = t;
    return true;
  }
  if (pat->kind != t->kind) return false;
  if (pat->kind == Ty::Arrow) return ty_match(pat->dom, t->dom, s) && ty_match(pat->cod, t->cod, s);
  return pat->name == t->name;
}

// ---------------------------------------------------------------------------

namespace {
HTerm mk(HNode n) { return HTerm(std::make_shared<const HNode>(std::move(n))); }
}  // namespace

HTerm HTerm::bvar(int index, TyP ty) { return mk(HNode{HKind::BVar, "", index, std::move(ty), {}, {}}); }
HTerm HTerm::fvar(const std::string& name, TyP ty) { return mk(HNode{HKind::FVar, name, 0, std::move(ty), {}, {}}); }
HTerm HTerm::con(const std::string& name, TyP ty) { return mk(HNode{HKind::Const, name, 0, std::move(ty), {}, {}}); }
HTerm HTerm::nom(const std::string& name, TyP ty) { return mk(HNode{HKind::Nom, name, 0, std::move(ty), {}, {}}); }

HTerm HTerm::app(const HTerm& head, std::vector<HTerm> args) {
  if (args.empty()) return head;
  TyP t = head.ty();
  for (const auto& a : args) {
    if (t->kind != Ty::Arrow) throw HTypeError("applying a term of non-function type " + ty_str(t));
    if (!ty_equal(t->dom, a.ty()))
      throw HTypeError("argument type mismatch: expected " + ty_str(t->dom) + ", got " + ty_str(a.ty()));
    t = t->cod;
  }
  HTerm h = head;
  if (head.kind() == HKind::App) {
    std::vector<HTerm> all = head->args;
    all.insert(all.end(), args.begin(), args.end());
    args = std::move(all);
    h = head->head;
  }
  return mk(HNode{HKind::App, "", 0, t, h, std::move(args)});
}

HTerm HTerm::lam(const std::string& hint, TyP dom, const HTerm& body) {
  TyP t = arrow_ty(std::move(dom), body.ty());
  return mk(HNode{HKind::Lam, hint, 0, t, {}, {body}});
}

HKind HTerm::kind() const { return n_->kind; }
const TyP& HTerm::ty() const { return n_->ty; }
const HTerm& HTerm::head() const { return n_->kind == HKind::App ? n_->head : *this; }
const std::vector<HTerm>& HTerm::args() const {
  static const std::vector<HTerm> none;
  return n_->kind == HKind::App ? n_->args : none;
}

bool operator==(const HTerm& a, const HTerm& b) {
  if (a.n_ == b.n_) return true;
  if (!a.n_ || !b.n_ || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case HKind::BVar: return a->index == b->index;
    case HKind::FVar:
    case HKind::Const:
    case HKind::Nom: return a->name == b->name;
    case HKind::Lam: return ty_equal(a.ty()->dom, b.ty()->dom) && a->args[0] == b->args[0];
    case HKind::App:
      if (a->head != b->head || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (a->args[i] != b->args[i]) return false;
      return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

namespace {

// Generic bottom-up rebuild; f returns an invalid term to fall through.
HTerm map_term(const HTerm& t, int depth, const std::function<HTerm(const HTerm&, int)>& f) {
  if (HTerm r = f(t, depth); r.valid()) return r;
  switch (t.kind()) {
    case HKind::Lam: {
      HTerm b = map_term(t->args[0], depth + 1, f);
      if (b == t->args[0] && b.ty() == t->args[0].ty()) return t;
      return HTerm::lam(t->name, t.ty()->dom, b);
    }
    case HKind::App: {
      HTerm h = map_term(t->head, depth, f);
      std::vector<HTerm> as;
      as.reserve(t->args.size());
      for (const auto& a : t->args) as.push_back(map_term(a, depth, f));
      return HTerm::app(h, std::move(as));
    }
    default: return t;
  }
}

}  // namespace

HTerm shift(const HTerm& t, int d, int cutoff) {
  if (d == 0) return t;
  return map_term(t, cutoff, [d](const HTerm& s, int c) -> HTerm {
    if (s.kind() == HKind::BVar) return s->index >= c ? HTerm::bvar(s->index + d, s.ty()) : s;
    return {};
  });
}

namespace {
HTerm subst_bvar(const HTerm& t, int j, const HTerm& v) {
  return map_term(t, j, [&](const HTerm& s, int c) -> HTerm {
    if (s.kind() != HKind::BVar) return {};
    if (s->index == c) return shift(v, c);
    if (s->index > c) return HTerm::bvar(s->index - 1, s.ty());
    return s;
  });
}

HTerm beta(const HTerm& t);

HTerm apply_norm(const HTerm& h, const std::vector<HTerm>& args, size_t from) {
  if (from == args.size()) return h;
  if (h.kind() == HKind::Lam) return apply_norm(beta(instantiate(h->args[0], args[from])), args, from + 1);
  return HTerm::app(h, std::vector<HTerm>(args.begin() + from, args.end()));
}

HTerm beta(const HTerm& t) {
  switch (t.kind()) {
    case HKind::Lam: return HTerm::lam(t->name, t.ty()->dom, beta(t->args[0]));
    case HKind::App: {
      std::vector<HTerm> as;
      for (const auto& a : t->args) as.push_back(beta(a));
      return apply_norm(beta(t->head), as, 0);
    }
    default: return t;
  }
}

HTerm eta_long(const HTerm& t) {
  if (t.kind() == HKind::Lam) return HTerm::lam(t->name, t.ty()->dom, eta_long(t->args[0]));
  if (t.ty()->kind == Ty::Arrow) {
    TyP dom = t.ty()->dom;
    HTerm body = HTerm::app(shift(t, 1), {HTerm::bvar(0, dom)});
    return HTerm::lam("x", dom, eta_long(body));
  }
  if (t.kind() != HKind::App) return t;
  std::vector<HTerm> as;
  for (const auto& a : t->args) as.push_back(eta_long(a));
  return HTerm::app(t->head, std::move(as));
}
}  // namespace

HTerm instantiate(const HTerm& body, const HTerm& v) { return subst_bvar(body, 0, v); }

HTerm normalize(const HTerm& t) { return eta_long(beta(t)); }

bool is_normal(const HTerm& t) { return normalize(t) == t; }

HTerm hsubstitute(const HTerm& t, const std::map<std::string, HTerm>& s) {
  if (s.empty()) return t;
  HTerm r = map_term(t, 0, [&](const HTerm& x, int) -> HTerm {
    if (x.kind() != HKind::FVar) return {};
    auto it = s.find(x->name);
    return it == s.end() ? x : it->second;
  });
  return normalize(r);
}

HTerm ty_instantiate(const HTerm& t, const std::map<std::string, TyP>& s) {
  switch (t.kind()) {
    case HKind::BVar: return HTerm::bvar(t->index, ty_subst(t.ty(), s));
    case HKind::FVar: return HTerm::fvar(t->name, ty_subst(t.ty(), s));
    case HKind::Const: return HTerm::con(t->name, ty_subst(t.ty(), s));
    case HKind::Nom: return HTerm::nom(t->name, ty_subst(t.ty(), s));
    case HKind::Lam: return HTerm::lam(t->name, ty_subst(t.ty()->dom, s), ty_instantiate(t->args[0], s));
    case HKind::App: {
      std::vector<HTerm> as;
      for (const auto& a : t->args) as.push_back(ty_instantiate(a, s));
      return HTerm::app(ty_instantiate(t->head, s), std::move(as));
    }
  }
  return t;
}

namespace {
void visit(const HTerm& t, int depth, const std::function<void(const HTerm&, int)>& f) {
  f(t, depth);
  if (t.kind() == HKind::Lam) visit(t->args[0], depth + 1, f);
  if (t.kind() == HKind::App) {
    visit(t->head, depth, f);
    for (const auto& a : t->args) visit(a, depth, f);
  }
}
}  // namespace

std::set<std::string> hsupport(const HTerm& t) {
  std::set<std::string> out;
  visit(t, 0, [&](const HTerm& s, int) {
    if (s.kind() == HKind::Nom) out.insert(s->name);
  });
  return out;
}

void collect_noms(const HTerm& t, std::map<std::string, TyP>& out) {
  visit(t, 0, [&](const HTerm& s, int) {
    if (s.kind() == HKind::Nom) out.emplace(s->name, s.ty());
  });
}

std::set<std::string> hfree_vars(const HTerm& t) {
  std::set<std::string> out;
  visit(t, 0, [&](const HTerm& s, int) {
    if (s.kind() == HKind::FVar) out.insert(s->name);
  });
  return out;
}

bool has_loose_bvars(const HTerm& t, int depth) {
  bool found = false;
  visit(t, depth, [&](const HTerm& s, int d) {
    if (s.kind() == HKind::BVar && s->index >= d) found = true;
  });
  return found;
}

HTerm nom_swap(const std::string& a, const std::string& b, const HTerm& t) {
  return nom_rename(t, {{a, b}, {b, a}});
}

HTerm nom_rename(const HTerm& t, const std::map<std::string, std::string>& m) {
  if (m.empty()) return t;
  return map_term(t, 0, [&](const HTerm& s, int) -> HTerm {
    if (s.kind() != HKind::Nom) return {};
    auto it = m.find(s->name);
    return it == m.end() ? s : HTerm::nom(it->second, s.ty());
  });
}

HTerm abstract_nom(const HTerm& t, const std::string& a, int depth) {
  return map_term(t, depth, [&](const HTerm& s, int c) -> HTerm {
    if (s.kind() == HKind::BVar) return s->index >= c ? HTerm::bvar(s->index + 1, s.ty()) : s;
    if (s.kind() == HKind::Nom && s->name == a) return HTerm::bvar(c, s.ty());
    return {};
  });
}

HTerm bind_nominal(const std::string& a, const TyP& aty, const HTerm& t) {
  return normalize(HTerm::lam(a, aty, abstract_nom(t, a, 0)));
}

int hsize(const HTerm& t) {
  int n = 0;
  visit(t, 0, [&](const HTerm& s, int) {
    if (s.kind() != HKind::App) ++n;
  });
  return n;
}

int hsize_unraised(const HTerm& t) {
  HTerm c = t;
  while (c.kind() == HKind::Lam) c = c->args[0];
  return hsize(c);
}

HTerm eta_atom(const HTerm& t) {
  int k = 0;
  HTerm c = t;
  while (c.kind() == HKind::Lam) {
    c = c->args[0];
    ++k;
  }
  HTerm h = c.head();
  const auto& as = c.args();
  if (static_cast<int>(as.size()) != k) return {};
  for (int i = 0; i < k; ++i) {
    HTerm ai = eta_atom(as[i]);
    if (!ai.valid() || ai.kind() != HKind::BVar || ai->index != k - 1 - i) return {};
  }
  if (h.kind() == HKind::BVar) {
    if (h->index < k) return {};
    return HTerm::bvar(h->index - k, t.ty());
  }
  if (h.kind() == HKind::Nom) return HTerm::nom(h->name, t.ty());
  return {};
}

// ---------------------------------------------------------------------------

namespace {

bool is_atomic(const HTerm& t) { return t.kind() != HKind::App && t.kind() != HKind::Lam; }

std::string print(const HTerm& t, std::vector<std::string>& ctx, bool canonical, const std::set<std::string>& avoid) {
  switch (t.kind()) {
    case HKind::BVar: {
      int i = static_cast<int>(ctx.size()) - 1 - t->index;
      if (i < 0) return "#" + std::to_string(t->index);
      return ctx[i];
    }
    case HKind::FVar:
    case HKind::Const:
    case HKind::Nom: return t->name;
    case HKind::Lam: {
      std::string n;
      if (canonical) {
        n = "x" + std::to_string(ctx.size());
      } else {
        std::string base = t->name.empty() ? "x" : t->name;
        if (auto d = base.find('$'); d != std::string::npos) base = base.substr(0, d);
        if (base.empty() || !std::islower(static_cast<unsigned char>(base[0]))) {
          base[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(base[0])));
          if (!std::islower(static_cast<unsigned char>(base[0]))) base = "x";
        }
        n = base;
        for (int k = 1;; ++k) {
          bool clash = avoid.count(n) > 0;
          for (const auto& c : ctx) clash = clash || c == n;
          if (!clash) break;
          n = base + std::to_string(k);
        }
      }
      ctx.push_back(n);
      std::string b = print(t->args[0], ctx, canonical, avoid);
      ctx.pop_back();
      return n + "\\ " + b;
    }
    case HKind::App: {
      std::string s = print(t->head, ctx, canonical, avoid);
      for (const auto& a : t->args) {
        std::string as = print(a, ctx, canonical, avoid);
        s += " " + (is_atomic(a) ? as : "(" + as + ")");
      }
      return s;
    }
  }
  return "?";
}

void names_in(const HTerm& t, std::set<std::string>& out) {
  visit(t, 0, [&](const HTerm& s, int) {
    if (s.kind() == HKind::FVar || s.kind() == HKind::Const || s.kind() == HKind::Nom) out.insert(s->name);
  });
}

}  // namespace

std::string HTerm::str() const {
  std::vector<std::string> ctx;
  std::set<std::string> avoid;
  names_in(*this, avoid);
  return print(*this, ctx, false, avoid);
}

std::string HTerm::key() const {
  std::vector<std::string> ctx;
  return print(*this, ctx, true, {});
}

}  // namespace nomhoas::hoas
