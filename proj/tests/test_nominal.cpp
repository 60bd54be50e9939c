#include <functional>

#include "doctest.h"
#include "nomhoas/nominal/engine.hpp"
#include "nomhoas/nominal/enumerate.hpp"
#include "nomhoas/nominal/relations.hpp"
#include "support.hpp"

using namespace nomhoas;
using namespace nomhoas::nominal;
using testsupport::corpus_program;

namespace {

Name nm(const std::string& id, const std::string& ty = "nm") { return Name{id, ty}; }

const Program& small() {
  static const Program p = parse_program(testsupport::kSmallSig);
  return p;
}

Term term(const std::string& s, const std::string& ty, const Program& p = small()) {
  return parse_term(s, p.sig, Type::atom(ty));
}

// Nameless rendering: bound names become binder depths.  Two ground terms
// are alpha-equivalent iff their renderings coincide.
std::string nameless(const Term& t, std::vector<Name>& env) {
  switch (t.kind()) {
    case TermKind::NameRef:
      for (size_t i = env.size(); i-- > 0;)
        if (env[i] == t->name) return "#" + std::to_string(env.size() - 1 - i);
      return t->name.id;
    case TermKind::Abs: {
      env.push_back(t->args[0]->name);
      std::string b = "<>" + nameless(t->args[1], env);
      env.pop_back();
      return b;
    }
    case TermKind::App: {
      std::string s = t->fn + "(";
      for (const auto& a : t->args) s += nameless(a, env) + ",";
      return s + ")";
    }
    default: throw std::logic_error("unexpected term");
  }
}

std::string nameless(const Term& t) {
  std::vector<Name> env;
  return nameless(t, env);
}

// Free names by direct recursion.
void free_names(const Term& t, std::set<Name>& bound, std::set<Name>& out) {
  switch (t.kind()) {
    case TermKind::NameRef:
      if (!bound.count(t->name)) out.insert(t->name);
      break;
    case TermKind::Abs: {
      Name a = t->args[0]->name;
      bool had = bound.count(a);
      bound.insert(a);
      free_names(t->args[1], bound, out);
      if (!had) bound.erase(a);
      break;
    }
    default:
      for (const auto& a : t->args) free_names(a, bound, out);
  }
}

std::set<Name> free_names(const Term& t) {
  std::set<Name> b, out;
  free_names(t, b, out);
  return out;
}

// All ground terms of size <= 4 of every type the small signature mentions.
std::vector<Term> small_terms() {
  std::vector<Name> pool = {nm("a"), nm("b"), nm("c")};
  TermEnumerator en(small().sig, pool);
  std::vector<Term> out;
  for (const auto& ty : {Type::atom("nm"), Type::atom("d"), Type::atom("e"), Type::abs("nm", Type::atom("d"))})
    for (const auto& t : en.up_to(ty, 4)) out.push_back(t);
  return out;
}

std::vector<Permutation> all_perms() {
  Name a = nm("a"), b = nm("b"), c = nm("c");
  return {Permutation(),           Permutation::swap(a, b), Permutation::swap(a, c),
          Permutation::swap(b, c), Permutation({{a, b}, {b, c}}), Permutation({{b, c}, {a, b}})};
}

}  // namespace

TEST_CASE("parse_program") {
  Program tc = corpus_program("tc.apl");
  int n = 0;
  for (const auto& c : tc.clauses) n += c.pred == "tc" ? 1 : 0;
  CHECK(n == 3);
  CHECK(tc.sig.preds.at("tc").size() == 3);
  CHECK(parse_program("").clauses.empty());
  CHECK_THROWS(parse_program("kind d. func z : d. p(z)."));
}

TEST_CASE("parser round trip on the corpus") {
  for (const char* f : {"tc.apl", "spec.apl", "subst.apl", "ext.apl", "aneq.apl"}) {
    Program p = corpus_program(f);
    CHECK_MESSAGE(same_program(parse_program(print_program(p)), p), f);
  }
}

TEST_CASE("swap_apply") {
  Name a = nm("a"), b = nm("b");
  auto s = Permutation::swap(a, b);
  CHECK(swap_apply(s, Term::name(a)) == Term::name(b));
  CHECK(swap_apply(s, Term::name(nm("c"))) == Term::name(nm("c")));
  Program tc = corpus_program("tc.apl");
  Term t = parse_term("lam(<a> app(var(a), var(c)))", tc.sig, Type::atom("tm"));
  Term u = parse_term("lam(<b> app(var(b), var(c)))", tc.sig, Type::atom("tm"));
  CHECK(swap_apply(Permutation::swap(Name{"a", "vname"}, Name{"b", "vname"}), t) == u);
}

TEST_CASE("freshness, alpha-equivalence and support") {
  Name a = nm("a");
  CHECK(freshness_check(a, Term::name(nm("b"))));
  CHECK(freshness_check(a, parse_term("<a> a", small().sig, Type::abs("nm", Type::atom("nm")))));
  CHECK_FALSE(freshness_check(a, term("v(a)", "d")));

  Type nd = Type::abs("nm", Type::atom("d"));
  Type nn = Type::abs("nm", Type::atom("nm"));
  auto abs = [&](const char* s, const Type& t) { return parse_term(s, small().sig, t); };
  CHECK(alpha_eq(abs("<a> a", nn), abs("<b> b", nn)));
  CHECK(alpha_eq(term("v(a)", "d"), term("v(a)", "d")));
  CHECK_FALSE(alpha_eq(abs("<a> b", nn), abs("<b> a", nn)));

  CHECK(support(abs("<a> a", nn)).empty());
  CHECK(support(abs("<a> b", nn)) == std::set<Name>{nm("b")});
  CHECK(support(abs("<a> v(b)", nd)) == std::set<Name>{nm("b")});
  CHECK_THROWS_AS(freshness_check(a, Term::var("X", Type::atom("d"))), TypeError);
}

TEST_CASE("substitution") {
  Term x = Term::var("X", Type::atom("nm"));
  Term t = Term::abs(Term::name(nm("a")), x);
  CHECK(substitute(t, {{"X", Term::name(nm("a"))}}) == Term::abs(Term::name(nm("a")), Term::name(nm("a"))));
  CHECK(substitute(x, {{"Y", Term::name(nm("b"))}}) == x);

  // new b. X = b  with b for X: the binder must move away from b
  Goal g = Goal::fresh_name(nm("b"), Goal::eq(x, Term::name(nm("b"))));
  Goal h = substitute(g, {{"X", Term::name(nm("b"))}});
  REQUIRE(h.kind() == GoalKind::New);
  CHECK(h->name != nm("b"));
  CHECK(h->body->args[0] == Term::name(nm("b")));
  CHECK(h->body->args[1] == Term::name(h->name));
  CHECK(fresh_for_goal(nm("b"), Goal::fresh_name(h->name, Goal::eq(Term::name(h->name), Term::name(h->name)))));
}

TEST_CASE("relations match independent oracles, exhaustive size <= 4") {
  auto ts = small_terms();
  REQUIRE(ts.size() > 20);
  std::vector<Name> names = {nm("a"), nm("b"), nm("c")};
  for (const auto& t : ts) {
    std::set<Name> fn = free_names(t);
    CHECK(support(t) == fn);
    for (const auto& a : names) CHECK(freshness_check(a, t) == !fn.count(a));
    for (const auto& u : ts)
      if (type_of(small().sig, t) == type_of(small().sig, u)) CHECK(alpha_eq(t, u) == (nameless(t) == nameless(u)));
  }
}

TEST_CASE("swapping is an involution and the relations are equivariant") {
  auto ts = small_terms();
  std::vector<Name> names = {nm("a"), nm("b"), nm("c")};
  for (const auto& t : ts) {
    for (const auto& s : {Permutation::swap(nm("a"), nm("b")), Permutation::swap(nm("b"), nm("c"))})
      CHECK(swap_apply(s, swap_apply(s, t)) == t);
    for (const auto& p : all_perms()) {
      Term pt = swap_apply(p, t);
      for (const auto& a : names) CHECK(freshness_check(p.apply(a), pt) == freshness_check(a, t));
      for (const auto& u : ts)
        if (type_of(small().sig, t) == type_of(small().sig, u))
          CHECK(alpha_eq(pt, swap_apply(p, u)) == alpha_eq(t, u));
    }
    if (support(t).empty())
      for (const auto& a : names) CHECK(freshness_check(a, t));
  }
}

TEST_CASE("alpha-equivalence is an equivalence relation on small terms") {
  auto ts = small_terms();
  std::map<std::string, std::vector<Term>> by_type;
  for (const auto& t : ts) by_type[type_of(small().sig, t).str()].push_back(t);
  for (const auto& [_, xs] : by_type)
    for (const auto& t : xs) {
      CHECK(alpha_eq(t, t));
      for (const auto& u : xs) {
        CHECK(alpha_eq(t, u) == alpha_eq(u, t));
        if (!alpha_eq(t, u)) continue;
        for (const auto& w : xs)
          if (alpha_eq(u, w)) CHECK(alpha_eq(t, w));
      }
    }
}

TEST_CASE("solve reproduces the typing derivation") {
  Program tc = corpus_program("tc.apl");
  Goal g = parse_goal("tc(nil, lam(<a> lam(<a> var(a))), arr(alpha, arr(beta, beta)))", tc.sig);
  auto r = solve(tc, g, SearchLimits{});
  REQUIRE(r.derivation);
  CHECK(r.derivation->skeleton() == "BACKCHAIN(AND(FRESH,BACKCHAIN(AND(FRESH,BACKCHAIN(BACKCHAIN(TRUE))))))");
  CHECK(check_derivation(tc, *r.derivation));

  Goal bad = parse_goal("tc(nil, lam(<a> lam(<a> var(a))), arr(alpha, arr(beta, alpha)))", tc.sig);
  SearchLimits deep;
  deep.max_unfoldings = 8;
  auto r2 = solve(tc, bad, deep);
  CHECK_FALSE(r2.derivation);
  CHECK(r2.status == SearchStatus::Exhausted);

  auto top = solve(tc, Goal::top(), SearchLimits{});
  REQUIRE(top.derivation);
  CHECK(top.derivation->rule == NRule::True);
}

TEST_CASE("check_derivation rejects mutated derivations") {
  Program tc = corpus_program("tc.apl");
  Goal g = parse_goal("tc(nil, lam(<a> lam(<a> var(a))), arr(alpha, arr(beta, beta)))", tc.sig);
  NDerivation d = *solve(tc, g, SearchLimits{}).derivation;

  // first FRESH node becomes TRUE
  NDerivation m = d;
  std::function<bool(NDerivation&)> kill_fresh = [&](NDerivation& n) {
    if (n.rule == NRule::Fresh) {
      n.rule = NRule::True;
      return true;
    }
    for (auto& c : n.children)
      if (kill_fresh(c)) return true;
    return false;
  };
  REQUIRE(kill_fresh(m));
  CHECK_FALSE(check_derivation(tc, m));

  // break the permutation of the root backchain
  NDerivation p = d;
  p.pi = p.pi.compose(Permutation::swap(Name{"a", "vname"}, Name{"zz", "vname"}));
  p.theta["E"] = parse_term("var(q)", tc.sig, Type::atom("tm"));
  CHECK_FALSE(check_derivation(tc, p));
}

TEST_CASE("derivation JSON round trip") {
  Program tc = corpus_program("tc.apl");
  Goal g = parse_goal("exists T. tc(nil, lam(<a> var(a)), T)", tc.sig);
  NDerivation d = *solve(tc, g, SearchLimits{}).derivation;
  NDerivation back = derivation_from_json(tc, to_json(d));
  CHECK(back.skeleton() == d.skeleton());
  CHECK(check_derivation(tc, back));
  CHECK_THROWS(derivation_from_json(tc, nlohmann::json{{"rule", "NOPE"}}));
}

TEST_CASE("equivariant_match") {
  Program tc = corpus_program("tc.apl");
  Goal g = parse_goal("tc(nil, lam(<b> var(b)), arr(beta, beta))", tc.sig);
  const ProgramClause* lam = nullptr;
  for (const auto& c : tc.clauses)
    if (c.pred == "tc" && !c.new_names.empty()) lam = &c;
  REQUIRE(lam);
  auto ms = equivariant_match(tc.sig, g->args, *lam, SearchLimits{});
  REQUIRE_FALSE(ms.empty());
  for (const auto& [pi, theta] : ms)
    for (size_t i = 0; i < g->args.size(); ++i)
      CHECK(alpha_eq(g->args[i], swap_apply(pi, substitute(lam->head[i], theta))));

  Program p = parse_program("nametype nm. kind d. func f : nm -> d. func g : nm -> d. pred p : d. p(f(a)).");
  auto same = equivariant_match(p.sig, {parse_term("f(a)", p.sig, Type::atom("d"))}, p.clauses[0], SearchLimits{});
  CHECK_FALSE(same.empty());
  auto none = equivariant_match(p.sig, {parse_term("g(a)", p.sig, Type::atom("d"))}, p.clauses[0], SearchLimits{});
  CHECK(none.empty());
}

TEST_CASE("oracle_solve") {
  Program p = parse_program("nametype nm. kind d. func v : nm -> d.");
  auto r = oracle_solve(p, parse_goal("exists X. X = a", p.sig), SearchLimits{});
  REQUIRE(r.derivation);
  CHECK(r.derivation->witness == Term::name(Name{"a", "nm"}));

  Goal g = parse_goal("new a. exists X. <a> X = <b> b", p.sig);
  auto o = oracle_solve(p, g, SearchLimits{});
  auto u = solve(p, g, SearchLimits{});
  REQUIRE(o.derivation);
  REQUIRE(u.derivation);
  CHECK(check_derivation(p, *o.derivation));
  // the witness is the name chosen for a
  const NDerivation& ex = o.derivation->children.at(0);
  CHECK(ex.witness == Term::name(o.derivation->new_name));
}

TEST_CASE("solve and oracle agree and derivations check on corpus goals") {
  struct Case {
    const char* file;
    std::vector<const char*> goals;
  };
  std::vector<Case> cases = {
      {"tc.apl",
       {"tc(nil, lam(<a> var(a)), arr(alpha, alpha))", "tc(bind(a, alpha, nil), var(a), alpha)",
        "tc(nil, app(lam(<a> var(a)), lam(<b> var(b))), arr(beta, beta))", "tc(nil, var(a), alpha)"}},
      {"subst.apl",
       {"subst(var(a), var(b), a, var(b))", "subst(lam(<a> var(b)), var(a), b, lam(<c> var(a)))",
        "subst(lam(<a> var(b)), var(a), b, lam(<a> var(a)))"}},
      {"spec.apl", {"spec(polyTy(<a> monoTy(tvar(a))), cons(b, nil), tvar(b))", "spec(monoTy(int), nil, int)"}},
      {"aneq.apl", {"aneq(var(a), var(b))", "aneq(var(a), var(a))", "aneq(lam(<a> var(a)), lam(<b> var(b)))"}},
  };
  for (const auto& c : cases) {
    Program p = corpus_program(c.file);
    for (const char* gs : c.goals) {
      Goal g = parse_goal(gs, p.sig);
      auto u = solve(p, g, SearchLimits{});
      auto o = oracle_solve(p, g, SearchLimits{});
      CHECK_MESSAGE(u.derivation.has_value() == o.derivation.has_value(), gs);
      if (u.derivation) CHECK_MESSAGE(check_derivation(p, *u.derivation), gs);
      if (o.derivation) CHECK_MESSAGE(check_derivation(p, *o.derivation), gs);
    }
  }
}

TEST_CASE("provability and depth are invariant under name permutations") {
  Program tc = corpus_program("tc.apl");
  Name a{"a", "vname"}, b{"b", "vname"}, c{"c", "vname"};
  for (const char* gs : {"tc(bind(a, alpha, bind(b, beta, nil)), app(lam(<c> var(c)), var(b)), beta)",
                         "tc(bind(a, alpha, nil), lam(<b> var(a)), arr(beta, alpha))"}) {
    Goal g = parse_goal(gs, tc.sig);
    auto r = solve(tc, g, SearchLimits{});
    REQUIRE(r.derivation);
    for (const auto& p : {Permutation::swap(a, b), Permutation::swap(a, c), Permutation({{a, b}, {b, c}})}) {
      auto rp = solve(tc, swap_apply(p, g), SearchLimits{});
      REQUIRE(rp.derivation);
      CHECK(rp.depth == r.depth);
    }
  }
}
