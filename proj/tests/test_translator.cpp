#include <random>

#include "doctest.h"
#include "nomhoas/hoas/engine.hpp"
#include "nomhoas/nominal/engine.hpp"
#include "nomhoas/nominal/enumerate.hpp"
#include "nomhoas/nominal/relations.hpp"
#include "nomhoas/translator/translator.hpp"
#include "support.hpp"

using namespace nomhoas;
using nominal::Name;
using nominal::Term;
using nominal::TermKind;
using nominal::Type;
using translator::TransConfig;
using testsupport::corpus_file;
using testsupport::corpus_program;

namespace {

const nominal::Program& small() {
  static const nominal::Program p =
      nominal::parse_program(std::string(testsupport::kSmallSig) + "pred p : d, e.\npred q : d.\n");
  return p;
}

Name nm(const std::string& id) { return Name{id, "nm"}; }

std::vector<Term> terms_of(const Type& ty, int max_size, std::vector<Name> pool = {nm("a"), nm("b")}) {
  nominal::TermEnumerator en(small().sig, std::move(pool));
  return en.up_to(ty, max_size);
}

// Independent reference for the expected answers of the prelude clauses:
// naive swapping and a nameless rendering for alpha-equivalence.
Name swap_name(const Name& a, const Name& b, const Name& n) { return n == a ? b : n == b ? a : n; }

Term naive_swap(const Name& a, const Name& b, const Term& t) {
  switch (t.kind()) {
    case TermKind::NameRef: return Term::name(swap_name(a, b, t->name));
    case TermKind::Abs: return Term::abs(naive_swap(a, b, t->args[0]), naive_swap(a, b, t->args[1]));
    case TermKind::App: {
      std::vector<Term> args;
      for (const auto& x : t->args) args.push_back(naive_swap(a, b, x));
      return Term::app(t->fn, args);
    }
    default: throw std::logic_error("ground terms only");
  }
}

std::string nameless(const Term& t, std::vector<Name>& env) {
  switch (t.kind()) {
    case TermKind::NameRef:
      for (size_t i = env.size(); i-- > 0;)
        if (env[i] == t->name) return "#" + std::to_string(env.size() - 1 - i);
      return t->name.id;
    case TermKind::Abs: {
      env.push_back(t->args[0]->name);
      std::string s = "<>" + nameless(t->args[1], env);
      env.pop_back();
      return s;
    }
    case TermKind::App: {
      std::string s = t->fn + "(";
      for (const auto& x : t->args) s += nameless(x, env) + ",";
      return s + ")";
    }
    default: throw std::logic_error("ground terms only");
  }
}

bool same_alpha(const Term& t, const Term& u) {
  std::vector<Name> e1, e2;
  return nameless(t, e1) == nameless(u, e2);
}

hoas::HTerm phi(const Term& t) { return translator::phi_term(small().sig, t); }

bool hprovable(const translator::TranslationUnit& u, const hoas::Formula& f, int depth = 2) {
  SearchLimits lim;
  lim.max_unfoldings = depth;
  hoas::GOptions opt;
  opt.uncounted = translator::prelude_preds();
  return hoas::gprove(u.definition({f}), f, lim, opt).derivation.has_value();
}

translator::TranslationUnit small_unit() {
  return translator::translate_program(small());
}

bool nprovable(const nominal::Program& p, const std::string& goal, int depth = 6) {
  SearchLimits lim;
  lim.max_unfoldings = depth;
  return nominal::solve(p, nominal::parse_goal(goal, p.sig), lim).derivation.has_value();
}

bool tprovable(const nominal::Program& p, const std::string& goal, const TransConfig& cfg = {}, int depth = 7) {
  auto u = translator::translate_program(p, cfg);
  auto f = translator::translate_goal(p.sig, nominal::parse_goal(goal, p.sig), cfg);
  return hprovable(u, f, depth);
}

bool same_defs(const std::vector<hoas::DefClause>& a, const std::vector<hoas::DefClause>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!hoas::clause_equiv(a[i], b[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("corpus programs translate to the expected definitions") {
  for (const char* base : {"tc", "spec", "subst"}) {
    CAPTURE(base);
    auto u = translator::translate_program(corpus_program(std::string(base) + ".apl"));
    auto want = hoas::parse_definition(corpus_file(std::string(base) + ".expected.gm"));
    CHECK(u.prelude.empty());
    CHECK(hoas::same_definition(u.definition(), want));
  }
}

TEST_CASE("without simplification the typing clause keeps its freshness goal") {
  auto u = translator::translate_program(corpus_program("tc.apl"), TransConfig::plain());
  REQUIRE(u.defs.size() == 5);
  const auto& lam = u.defs[4];
  REQUIRE(lam.nablas.size() == 1);
  std::string s = lam.str();
  CHECK(s.find("fresh x (G x)") != std::string::npos);
  CHECK(s.find("(T x)") != std::string::npos);
  REQUIRE(u.prelude.size() == 1);
  CHECK(u.prelude[0].pred == "fresh");
  CHECK(hoas::print_definition(u.definition()).find("type fresh") != std::string::npos);
}

TEST_CASE("each pass matches its worked example") {
  auto tc = corpus_program("tc.apl");
  TransConfig sub = TransConfig::plain();
  sub.enable_subordination_pruning = true;
  std::string s = translator::translate_program(tc, sub).defs[4].str();
  CHECK(s.find("(T x)") == std::string::npos);
  CHECK(s.find("fresh x (G x)") != std::string::npos);

  TransConfig fr = sub;
  fr.enable_static_freshness = true;
  auto u = translator::translate_program(tc, fr);
  CHECK(u.defs[4].str().find("fresh") == std::string::npos);
  CHECK(u.defs[4].nablas.size() == 1);
  CHECK(u.prelude.empty());

  // spec keeps T raised over the bound type name
  std::string sp = translator::translate_program(corpus_program("spec.apl")).defs[1].str();
  CHECK(sp.find("(T a)") != std::string::npos);
  CHECK(sp.find("(cons a L)") != std::string::npos);

  // a freshness goal over a compound term stays dynamic
  auto p = nominal::parse_program(std::string(testsupport::kSmallSig) +
                                  "pred r : e.\nr(lam(<a> X)) :- a # lam(<a> X).\n");
  auto ur = translator::translate_program(p);
  CHECK(ur.defs[0].str().find("fresh") != std::string::npos);
  CHECK(ur.prelude.size() == 1);
}

TEST_CASE("phi on terms") {
  const auto& sig = small().sig;
  Term va = nominal::parse_term("<a> v(a)", sig, Type::abs("nm", Type::atom("d")));
  hoas::HTerm h = phi(va);
  REQUIRE(h.kind() == hoas::HKind::Lam);
  CHECK(h->args[0] == hoas::HTerm::app(hoas::HTerm::con("v", hoas::arrow_ty(hoas::base_ty("nm"), hoas::base_ty("d"))),
                                       {hoas::HTerm::bvar(0, hoas::base_ty("nm"))}));
  CHECK(phi(Term::name(nm("a"))) == hoas::HTerm::nom("a", hoas::base_ty("nm")));

  // (a b).(X a b) = X b a
  Term x = Term::var("X", Type::atom("d"));
  hoas::HTerm sw = translator::phi_term(sig, Term::swap(Term::name(nm("a")), Term::name(nm("b")), x),
                                        {{"X", {nm("a"), nm("b")}}});
  hoas::HTerm xab = translator::phi_term(sig, x, {{"X", {nm("b"), nm("a")}}});
  CHECK(sw == xab);
  CHECK(hoas::nom_swap("a", "b", sw) == translator::phi_term(sig, x, {{"X", {nm("a"), nm("b")}}}));
}

TEST_CASE("phi on goals") {
  const auto& sig = small().sig;
  CHECK(translator::phi_goal(sig, {}, nominal::Goal::top()).kind() == hoas::FKind::Top);

  // new a. exists X. <a>X = <b>b  becomes  exists X. nabla a. (\x. X a) = (\y. y)
  Term a = Term::name(nm("a")), b = Term::name(nm("b"));
  auto g = nominal::Goal::fresh_name(
      nm("a"), nominal::Goal::exists("X", Type::atom("nm"),
                                     nominal::Goal::eq(Term::abs(a, Term::var("X", Type::atom("nm"))), Term::abs(b, b))));
  hoas::Formula f = translator::phi_goal(sig, {}, g);
  REQUIRE(f.kind() == hoas::FKind::Exists);
  CHECK(f.body().kind() == hoas::FKind::Nabla);
  CHECK(f.body().body().kind() == hoas::FKind::Eq);
  SearchLimits lim;
  CHECK(hoas::gprove(hoas::Definition{translator::translate_signature(sig), {}}, f, lim).derivation.has_value());

  // x # G under a pending name
  auto fr = nominal::Goal::fresh(a, Term::var("X", Type::atom("d")));
  hoas::Formula h = translator::phi_goal(sig, {nm("a")}, fr, {{"X", {nm("a")}}});
  REQUIRE(h.kind() == hoas::FKind::Nabla);
  REQUIRE(h.body().kind() == hoas::FKind::Atom);
  CHECK(h.body()->pred == "fresh");
}

TEST_CASE("support commutes with phi, exhaustive size <= 4") {
  int n = 0;
  for (const auto& ty : {Type::atom("nm"), Type::atom("d"), Type::atom("e"), Type::abs("nm", Type::atom("d"))})
    for (const auto& t : terms_of(ty, 4, {nm("a"), nm("b"), nm("c")})) {
      std::set<std::string> want;
      for (const auto& a : nominal::support(t)) want.insert(a.id);
      CHECK_MESSAGE(hoas::hsupport(phi(t)) == want, t.str());
      ++n;
    }
  CHECK(n == 22);
}

TEST_CASE("fresh, swap and abst clauses are adequate, exhaustive size <= 4") {
  auto u = small_unit();
  const auto nmt = hoas::base_ty("nm");
  hoas::HTerm ha = hoas::HTerm::nom("a", nmt), hb = hoas::HTerm::nom("b", nmt);

  int checked = 0;
  for (const auto& ty : {Type::atom("d"), Type::atom("e")}) {
    auto ts = terms_of(ty, 4);
    for (const auto& t : ts) {
      auto supp = nominal::support(t);
      for (const auto& [name, hn] : {std::pair{nm("a"), ha}, std::pair{nm("b"), hb}})
        CHECK(hprovable(u, hoas::Formula::atom("fresh", {hn, phi(t)})) == !supp.count(name));
      for (const auto& t2 : ts) {
        for (const auto& [n2, h2] : {std::pair{nm("a"), ha}, std::pair{nm("b"), hb}}) {
          bool want = same_alpha(t2, naive_swap(nm("a"), n2, t));
          CHECK_MESSAGE(hprovable(u, hoas::Formula::atom("swap", {ha, h2, phi(t), phi(t2)})) == want,
                        std::string(t.str() + " / " + t2.str()));
          ++checked;
        }
      }
    }
  }
  // abst a t t' with t : d and t' : <nm>d
  auto bodies = terms_of(Type::atom("d"), 4);
  auto abss = terms_of(Type::abs("nm", Type::atom("d")), 4);
  for (const auto& t : bodies)
    for (const auto& t2 : abss) {
      bool want = same_alpha(t2, Term::abs(Term::name(nm("a")), t));
      CHECK_MESSAGE(hprovable(u, hoas::Formula::atom("abst", {ha, phi(t), phi(t2)})) == want,
                    std::string(t.str() + " / " + t2.str()));
      ++checked;
    }
  CHECK(checked == 44);
}

TEST_CASE("substitution commutes with phi on random goals") {
  const auto& sig = small().sig;
  const char* templates[] = {
      "p(X, lam(<a> v(a)))",
      "q(X), a # X",
      "X = v(a) ; q(z)",
      "exists Y. p(Y, lam(<b> X))",
      "new b. p(X, lam(<b> v(b)))",
      "q((a ~ b) * X)",
  };
  // values avoid the names of the templates, which nominal substitution would capture
  auto vals = terms_of(Type::atom("d"), 3, {nm("w")});
  std::mt19937_64 rng(7);
  const auto nmt = hoas::base_ty("nm");
  for (int it = 0; it < 60; ++it) {
    std::string tmpl = templates[rng() % std::size(templates)];
    CAPTURE(tmpl);
    auto g = nominal::parse_goal(tmpl, sig);
    Term v = vals[rng() % vals.size()];
    CAPTURE(v.str());
    auto gt = nominal::substitute(g, {{"X", v}});

    // no pending names
    auto lhs = translator::phi_goal(sig, {}, gt);
    auto rhs = hoas::fnormalize(hoas::fsubstitute(translator::phi_goal(sig, {}, g), {{"X", phi(v)}}));
    CHECK(hoas::formula_alpha_eq(lhs, rhs));

    // pending name c, which the value avoids
    auto lhs2 = translator::phi_goal(sig, {nm("c")}, gt);
    hoas::HTerm lam = hoas::HTerm::lam("c", nmt, phi(v));
    auto rhs2 = hoas::fnormalize(
        hoas::fsubstitute(translator::phi_goal(sig, {nm("c")}, g, {{"X", {nm("c")}}}), {{"X", lam}}));
    CHECK(hoas::formula_alpha_eq(lhs2, rhs2));
  }
}

TEST_CASE("passes are idempotent") {
  for (const char* file : {"tc.apl", "spec.apl", "subst.apl", "ext.apl", "aneq.apl"}) {
    CAPTURE(file);
    auto prog = corpus_program(file);
    auto plain = translator::translate_program(prog, TransConfig::plain());
    for (auto pass : {translator::pass_subordination, translator::pass_static_freshness,
                      translator::pass_vacuous_nabla}) {
      auto once = plain;
      pass(once);
      auto twice = once;
      pass(twice);
      CHECK(same_defs(once.defs, twice.defs));
    }
    auto full = translator::translate_program(prog);
    auto again = full;
    translator::pass_subordination(again);
    translator::pass_static_freshness(again);
    translator::pass_vacuous_nabla(again);
    CHECK(same_defs(full.defs, again.defs));
  }
}

TEST_CASE("toggling passes does not change provability") {
  auto tc = corpus_program("tc.apl");
  const char* goals[] = {
      "tc(nil, lam(<x> var(x)), arr(alpha, alpha))",
      "tc(nil, lam(<x> var(x)), arr(alpha, beta))",
      "tc(nil, lam(<x> lam(<y> var(x))), arr(alpha, arr(beta, alpha)))",
      "tc(nil, lam(<x> lam(<y> var(x))), arr(alpha, arr(beta, beta)))",
      "tc(bind(a, alpha, nil), var(a), alpha)",
      "tc(nil, var(a), alpha)",
  };
  std::vector<TransConfig> cfgs = {TransConfig{}, TransConfig::plain()};
  for (int i = 0; i < 3; ++i) {
    TransConfig c;
    (i == 0 ? c.enable_subordination_pruning : i == 1 ? c.enable_static_freshness : c.enable_vacuous_nabla_removal) =
        false;
    cfgs.push_back(c);
  }
  for (const char* g : goals) {
    CAPTURE(g);
    bool want = nprovable(tc, g);
    for (const auto& c : cfgs) CHECK(tprovable(tc, g, c) == want);
  }
}

TEST_CASE("non-name-restricted clauses are hoisted through swap and abst") {
  auto ext = corpus_program("ext.apl");
  CHECK_THROWS_AS(translator::translate_program(ext, TransConfig{false, false, false, true}),
                  translator::TranslationError);

  for (const auto& c : ext.clauses) {
    auto n = translator::normalize_name_restriction(ext.sig, c);
    CHECK(n.body.valid());
  }
  auto u = translator::translate_program(ext);
  std::set<std::string> pre;
  for (const auto& c : u.prelude) pre.insert(c.pred);
  CHECK(pre == std::set<std::string>{"swap", "abst"});

  const char* goals[] = {
      "mklam(a, var(a), lam(<b> var(b)))",
      "mklam(a, var(b), lam(<b> var(b)))",
      "mklam(a, var(b), lam(<c> var(b)))",
      "rename(a, b, app(var(a), var(c)), app(var(b), var(c)))",
      "rename(a, b, app(var(a), var(c)), app(var(a), var(c)))",
      "rename(a, a, var(a), var(a))",
      "close(a, app(var(a), var(b)), lam(<c> app(var(c), var(b))))",
      "close(a, var(a), lam(<c> var(b)))",
  };
  for (const char* g : goals) {
    CAPTURE(g);
    CHECK(tprovable(ext, g) == nprovable(ext, g));
  }
  CHECK(nprovable(ext, goals[0]));
  CHECK(!nprovable(ext, goals[1]));
}

TEST_CASE("name-restricted clauses are left alone by hoisting") {
  auto tc = corpus_program("tc.apl");
  for (const auto& c : tc.clauses) CHECK(translator::normalize_name_restriction(tc.sig, c) == c);
}

TEST_CASE("reserved predicate names are rejected") {
  auto p = nominal::parse_program(std::string(testsupport::kSmallSig) + "pred swap : d.\nswap(z).\n");
  CHECK_THROWS_AS(translator::translate_program(p), translator::TranslationError);
}

TEST_CASE("translation is deterministic") {
  auto prog = corpus_program("subst.apl");
  auto a = translator::translate_program(prog);
  auto b = translator::translate_program(prog);
  CHECK(hoas::print_definition(a.definition()) == hoas::print_definition(b.definition()));
  CHECK(a.report() == b.report());
}
