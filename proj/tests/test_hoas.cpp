#include <functional>

#include "doctest.h"
#include "nomhoas/hoas/engine.hpp"
#include "nomhoas/hoas/enumerate.hpp"
#include "nomhoas/hoas/unify.hpp"
#include "support.hpp"

using namespace nomhoas;
using namespace nomhoas::hoas;

namespace {

TyP i_ty() { return base_ty("i"); }
TyP nm_ty() { return base_ty("nm"); }

Definition def(const std::string& file) { return parse_definition(testsupport::corpus_file(file)); }

const HSignature& small_sig() {
  static const HSignature s = parse_definition(
                                  "kind i. nominal nm.\n"
                                  "type c i.\n"
                                  "type f i -> i -> i.\n"
                                  "type v nm -> i.\n"
                                  "type lam (nm -> i) -> i.\n")
                                  .sig;
  return s;
}

HTerm nom(const std::string& n) { return HTerm::nom(n, nm_ty()); }

// Ground terms of type i over nominal constants a and b, size <= 5.
std::vector<HTerm> small_terms() {
  HTermEnumerator en(small_sig(), {nom("a"), nom("b")});
  return en.up_to(i_ty(), 5);
}

}  // namespace

TEST_CASE("normalize") {
  HTerm c = HTerm::con("c", i_ty());
  HTerm id = HTerm::lam("x", i_ty(), HTerm::bvar(0, i_ty()));
  CHECK(normalize(HTerm::app(id, {c})) == c);

  TyP ii = arrow_ty(i_ty(), i_ty());
  HTerm f = HTerm::lam("f", ii, HTerm::bvar(0, ii));
  HTerm eta = normalize(f);
  REQUIRE(eta.kind() == HKind::Lam);
  CHECK(eta->args[0].kind() == HKind::Lam);
  CHECK(is_normal(eta));
  CHECK(normalize(eta) == eta);
  for (const auto& t : small_terms()) CHECK(normalize(t) == t);
}

TEST_CASE("hsubstitute") {
  HTerm x = HTerm::fvar("X", i_ty());
  CHECK(hsubstitute(x, {{"X", HTerm::con("c", i_ty())}}) == HTerm::con("c", i_ty()));

  // (\y. X)[a/X]: the value is not captured by the binder
  HTerm under = HTerm::lam("y", nm_ty(), HTerm::fvar("N", nm_ty()));
  HTerm s = hsubstitute(under, {{"N", nom("a")}});
  REQUIRE(s.kind() == HKind::Lam);
  CHECK(s->args[0] == nom("a"));

  // (X a)[\z.z / X] = a
  TyP nn = arrow_ty(nm_ty(), nm_ty());
  HTerm xa = HTerm::app(HTerm::fvar("X", nn), {nom("a")});
  CHECK(hsubstitute(xa, {{"X", HTerm::lam("z", nm_ty(), HTerm::bvar(0, nm_ty()))}}) == nom("a"));
}

TEST_CASE("support, swapping and abstraction of nominal constants") {
  const auto& sig = small_sig();
  CHECK(hsupport(nom("a")) == std::set<std::string>{"a"});
  CHECK(hsupport(HTerm::lam("x", nm_ty(), HTerm::bvar(0, nm_ty()))).empty());

  TyP xab = arrows({nm_ty(), nm_ty()}, i_ty());
  HTerm t = HTerm::app(HTerm::fvar("X", xab), {nom("a"), nom("b")});
  CHECK(nom_swap("a", "b", t) == HTerm::app(HTerm::fvar("X", xab), {nom("b"), nom("a")}));
  CHECK(nom_swap("a", "b", HTerm::con("c", i_ty())) == HTerm::con("c", i_ty()));

  HTerm va = HTerm::app(HTerm::con("v", sig.consts.at("v")), {nom("a")});
  HTerm lv = bind_nominal("a", nm_ty(), va);
  REQUIRE(lv.kind() == HKind::Lam);
  CHECK(lv->args[0] == HTerm::app(HTerm::con("v", sig.consts.at("v")), {HTerm::bvar(0, nm_ty())}));
  CHECK(bind_nominal("a", nm_ty(), HTerm::con("c", i_ty()))->args[0] == HTerm::con("c", i_ty()));

  for (const auto& u : small_terms()) {
    CHECK(nom_swap("a", "b", nom_swap("a", "b", u)) == u);
    CHECK(normalize(nom_swap("a", "b", u)) == nom_swap("a", "b", normalize(u)));
    HTerm b = bind_nominal("a", nm_ty(), u);
    CHECK_FALSE(hsupport(b).count("a"));
    CHECK(normalize(HTerm::app(b, {nom("a")})) == u);
  }
}

TEST_CASE("raising lets an existential depend on a nabla constant") {
  Definition d{small_sig(), {}};
  // exists X. (\a. X a) = (\b. b): solved by X = \z. z after raising
  TyP nn = arrow_ty(nm_ty(), nm_ty());
  HTerm lhs = HTerm::lam("a", nm_ty(), HTerm::app(HTerm::fvar("X", nn), {HTerm::bvar(0, nm_ty())}));
  HTerm rhs = HTerm::lam("b", nm_ty(), HTerm::bvar(0, nm_ty()));
  auto r = gprove(d, Formula::exists("X", nn, Formula::eq(lhs, rhs)), SearchLimits{});
  REQUIRE(r.derivation);
  CHECK(r.derivation->witness == rhs);

  HTerm raised = raise_var("X", i_ty(), {});
  CHECK(raised == HTerm::fvar("X", i_ty()));
}

TEST_CASE("nabla: fresh constants are distinct and not in scope of outer existentials") {
  Definition d{small_sig(), {}};
  auto x = HTerm::fvar("x", nm_ty()), y = HTerm::fvar("y", nm_ty()), Y = HTerm::fvar("Y", nm_ty());
  auto prove = [&](const Formula& f) { return gprove(d, f, SearchLimits{}).derivation.has_value(); };
  CHECK_FALSE(prove(Formula::nabla("x", nm_ty(), Formula::nabla("y", nm_ty(), Formula::eq(x, y)))));
  CHECK(prove(Formula::nabla("x", nm_ty(), Formula::exists("Y", nm_ty(), Formula::eq(Y, x)))));
  CHECK_FALSE(prove(Formula::exists("Y", nm_ty(), Formula::nabla("x", nm_ty(), Formula::eq(Y, x)))));
}

TEST_CASE("pattern unification binds a repeated variable once") {
  const auto& sig = small_sig();
  HUnifState s;
  HTerm X = s.new_var("X", i_ty(), 1);
  HTerm A = s.new_var("A", i_ty(), 5);
  HTerm f = HTerm::con("f", sig.consts.at("f"));
  s.nom_stamp["k"] = 3;
  REQUIRE(pattern_unify(s, X, HTerm::app(f, {A, A})) == HUStatus::Ok);
  REQUIRE(pattern_unify(s, A, HTerm::con("c", i_ty())) == HUStatus::Ok);
  HTerm c = HTerm::con("c", i_ty());
  CHECK(hresolve(s, X) == HTerm::app(f, {c, c}));
}

TEST_CASE("pattern unification respects constant stamps") {
  HUnifState s;
  s.nom_stamp["a"] = 2;
  HTerm old = s.new_var("X", nm_ty(), 1);
  CHECK(pattern_unify(s, old, nom("a")) == HUStatus::Fail);
  HTerm young = s.new_var("Y", nm_ty(), 3);
  CHECK(pattern_unify(s, young, nom("a")) == HUStatus::Ok);
}

TEST_CASE("explicit-context typing definition") {
  Definition d = def("tc.expected.gm");
  Formula k = parse_formula("tc nil (lam x\\ lam y\\ var x) (arr alpha (arr beta alpha))", d.sig);
  auto r = gprove(d, k, SearchLimits{});
  REQUIRE(r.derivation);
  CHECK(gcheck(d, *r.derivation));
  CHECK(r.derivation->skeleton().rfind("defR(nablaR(defR(nablaR(defR(", 0) == 0);

  Formula bad = parse_formula("tc nil (lam x\\ lam y\\ var x) (arr alpha (arr beta beta))", d.sig);
  SearchLimits deep;
  deep.max_unfoldings = 8;
  auto r2 = gprove(d, bad, deep);
  CHECK_FALSE(r2.derivation);
  CHECK(r2.status == SearchStatus::Exhausted);

  auto o1 = goracle_solve(d, k, SearchLimits{});
  auto o2 = goracle_solve(d, bad, SearchLimits{});
  CHECK(o1.derivation);
  CHECK_FALSE(o2.derivation);
  if (o1.derivation) CHECK(gcheck(d, *o1.derivation));
}

TEST_CASE("gcheck rejects mutated derivations and JSON round-trips") {
  Definition d = def("tc.expected.gm");
  Formula g = parse_formula("exists T, tc nil (lam x\\ var x) T", d.sig);
  GDerivation der = *gprove(d, g, SearchLimits{}).derivation;

  GDerivation back = gderivation_from_json(d, to_json(der));
  CHECK(gcheck(d, back));
  CHECK(back.skeleton() == der.skeleton());

  GDerivation m = der;
  m.witness = parse_hterm("alpha", d.sig, base_ty("ty"));
  CHECK_FALSE(gcheck(d, m));

  GDerivation leaf = der;
  std::function<bool(GDerivation&)> topify = [&](GDerivation& n) {
    if (n.rule == GRule::Def && n.children.size() == 1 && n.children[0].rule == GRule::Def) {
      n.children[0].rule = GRule::Top;
      n.children[0].children.clear();
      return true;
    }
    for (auto& c : n.children)
      if (topify(c)) return true;
    return false;
  };
  if (topify(leaf)) CHECK_FALSE(gcheck(d, leaf));
}

TEST_CASE("full higher-order abstract syntax with a nominal term type") {
  Definition d = def("tc_full.gm");
  auto prove = [&](const char* s) { return gprove(d, parse_formula(s, d.sig), SearchLimits{}); };
  auto k = prove("tc nil (lam x\\ lam y\\ x) (arr alpha (arr beta alpha))");
  REQUIRE(k.derivation);
  CHECK(k.depth == 5);
  CHECK(gcheck(d, *k.derivation));
  CHECK_FALSE(prove("exists T, tc nil (lam x\\ app x x) T").derivation);
  CHECK(prove("name a").derivation);
  CHECK_FALSE(prove("name (lam x\\ x)").derivation);
  CHECK_FALSE(prove("name (app a a)").derivation);

  // name holds exactly of the nominal constants, over small terms
  HTermEnumerator en(d.sig, {HTerm::nom("a", base_ty("tm")), HTerm::nom("b", base_ty("tm"))});
  for (const auto& t : en.up_to(base_ty("tm"), 4)) {
    bool is_nom = t.kind() == HKind::Nom;
    CHECK(gprove(d, Formula::atom("name", {t}), SearchLimits{}).derivation.has_value() == is_nom);
  }
}

TEST_CASE("call-by-name evaluation uses meta-level beta") {
  Definition d = def("eval.gm");
  auto r = gprove(d, parse_formula("exists V, eval (app (lam x\\ x) (lam y\\ y)) V", d.sig), SearchLimits{});
  REQUIRE(r.derivation);
  CHECK(r.derivation->witness == parse_hterm("lam y\\ y", d.sig, base_ty("tm")));
  auto k = gprove(d, parse_formula("exists V, eval (app (app (lam x\\ lam y\\ x) (lam z\\ z)) (lam w\\ app w w)) V", d.sig),
                  SearchLimits{});
  REQUIRE(k.derivation);
  CHECK(k.derivation->witness == parse_hterm("lam z\\ z", d.sig, base_ty("tm")));
}

TEST_CASE("provability and depth are invariant under renaming nominal constants") {
  Definition d = def("tc.expected.gm");
  Formula g = parse_formula("tc (bind a alpha (bind b beta nil)) (app (lam x\\ var x) (var b)) beta", d.sig);
  auto r = gprove(d, g, SearchLimits{});
  REQUIRE(r.derivation);
  for (const auto& m : std::vector<std::map<std::string, std::string>>{{{"a", "b"}, {"b", "a"}}, {{"a", "c"}, {"c", "a"}}}) {
    auto rp = gprove(d, f_nom_rename(g, m), SearchLimits{});
    REQUIRE(rp.derivation);
    CHECK(rp.depth == r.depth);
  }
}

TEST_CASE("parser rejects ill-formed definitions") {
  CHECK_THROWS(parse_definition("kind i. type p i -> o. p X := q X."));
  CHECK_THROWS(parse_definition("kind i. type c i. type p i -> o. p (c c)."));
  CHECK_THROWS(parse_definition("kind i. nominal nm. type p nm -> o. p x := p x."));
  Definition d = def("tc.expected.gm");
  CHECK(same_definition(parse_definition(print_definition(d)), d));
}
