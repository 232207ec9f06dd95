#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atemp/equivalence.hpp"
#include "atemp/freesmc.hpp"
#include "atemp/generators.hpp"
#include "atemp/semantics.hpp"

using namespace atemp;
using namespace atemp::freesmc;

namespace {

Signature abc_sig() {
  Signature s;
  s.add_object("a");
  s.add_object("b");
  s.add_object("c");
  s.add_morphism("f", {"a"}, {"b"});
  s.add_morphism("g", {"b"}, {"c"});
  s.add_morphism("h", {"a", "b"}, {"c"});
  s.add_morphism("k", {"a"}, {"a"});
  s.add_morphism("m", {"b"}, {"b"});
  s.add_morphism("st", {}, {"a"});
  return s;
}

Interp random_interp(Rng& rng, const Signature& sig, int max_size) {
  Interp in;
  for (const auto& o : sig.objects())
    in.objects[o] = FinSet::canonical(o + "_", rand_int(rng, 1, max_size));
  for (const auto& [name, decl] : sig.morphisms()) {
    FinSet dom = word_carrier(decl.dom, in);
    FinSet cod = word_carrier(decl.cod, in);
    in.morphisms[name] = rand_finfun(rng, dom, cod);
  }
  return in;
}

}  // namespace

TEST_CASE("parsing and printing") {
  Signature sig = abc_sig();
  TermPtr t = parse_term("f ; g", sig);
  CHECK(t->kind == Term::Kind::seq);
  CHECK(t->lhs->gen == "f");

  TermPtr t2 = parse_term("id[a] * f", sig);
  CHECK(t2->kind == Term::Kind::par);
  CHECK(t2->lhs->kind == Term::Kind::id);

  // printing re-parses to a structurally equal term
  TermPtr t3 = parse_term("f ; (sym[a|b] * id[c])", sig);
  (void)typecheck(t3, sig);
  TermPtr t4 = parse_term(print_term(t3), sig);
  CHECK(structural_eq(t3, t4, sig));

  CHECK_THROWS_AS(parse_term("f ; unknown", sig), ParseError);
  CHECK_THROWS_AS(parse_term("f ; (g", sig), ParseError);
  CHECK_THROWS_AS(parse_term("", sig), ParseError);
}

TEST_CASE("typechecking") {
  Signature sig = abc_sig();
  auto [d1, c1] = typecheck(parse_term("id[a b c]", sig), sig);
  CHECK(d1 == Word{"a", "b", "c"});
  CHECK(c1 == Word{"a", "b", "c"});

  auto [d2, c2] = typecheck(parse_term("sym[a|b]", sig), sig);
  CHECK(d2 == Word{"a", "b"});
  CHECK(c2 == Word{"b", "a"});

  try {
    typecheck(parse_term("f ; f", sig), sig);
    FAIL("expected a type error");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("b") != std::string::npos);
    CHECK(msg.find("a") != std::string::npos);
  }
}

TEST_CASE("structural equality decides the axioms") {
  Signature sig = abc_sig();
  auto eq = [&](const char* s1, const char* s2) {
    return structural_eq(parse_term(s1, sig), parse_term(s2, sig), sig);
  };

  // interchange
  CHECK(eq("(f * id[b]) ; (id[b] * m)", "(id[a] * m) ; (f * id[b])"));
  // symmetry squares to the identity
  CHECK(eq("sym[a|b] ; sym[b|a]", "id[a b]"));
  // naturality of the symmetry
  CHECK(eq("(f * id[a]) ; sym[b|a]", "sym[a|a] ; (id[a] * f)"));
  CHECK(eq("(k * m) ; sym[a|b]", "sym[a|b] ; (m * k)"));
  // sliding along composition is not an identification
  CHECK_FALSE(eq("f ; g", "f ; m ; g"));
  CHECK_FALSE(eq("k", "id[a]"));
  // associativity of the tensor is silent
  CHECK(eq("(f * g) * h", "f * (g * h)"));
  CHECK(eq("(f * (g * h)) ; sym[b c|c]", "((f * g) * h) ; sym[b c|c]"));

  CHECK_THROWS_AS(eq("f", "g"), BoundaryMismatch);
}

TEST_CASE("canonical form is stable under reassociation and idempotent") {
  Signature sig = abc_sig();
  TermPtr t1 = parse_term("(f * g) * (h ; id[c])", sig);
  TermPtr t2 = parse_term("f * (g * h)", sig);
  std::string c1 = hypergraph_canonical(to_hypergraph(t1, sig));
  std::string c2 = hypergraph_canonical(to_hypergraph(t2, sig));
  CHECK(c1 == c2);

  // states (generators with empty domain) are anchored too
  TermPtr s1 = parse_term("(st * st) ; (f * k)", sig);
  TermPtr s2 = parse_term("(st * st) ; sym[a|a] ; (f * k)", sig);
  TermPtr s3 = parse_term("(st * st) ; (k * f) ; sym[a|b]", sig);
  CHECK(structural_eq(s1, s3, sig));
  CHECK(structural_eq(s2, s3, sig));
}

TEST_CASE("evaluation is strict monoidal and respects structural equality") {
  Signature sig = abc_sig();
  Rng rng(501);

  CHECK(eval(parse_term("id[a b]", sig), sig, random_interp(rng, sig, 3)).is_bijective());

  std::vector<std::pair<std::string, std::string>> equal_pairs = {
      {"(f * id[b]) ; (id[b] * m)", "(id[a] * m) ; (f * id[b])"},
      {"sym[a|b] ; sym[b|a]", "id[a b]"},
      {"(k * m) ; sym[a|b]", "sym[a|b] ; (m * k)"},
      {"(f * g) * h", "f * (g * h)"},
  };
  for (int it = 0; it < 50; ++it) {
    Interp in = random_interp(rng, sig, 3);
    for (const auto& [s1, s2] : equal_pairs) {
      TermPtr t1 = parse_term(s1, sig), t2 = parse_term(s2, sig);
      REQUIRE(structural_eq(t1, t2, sig));
      CHECK(eval(t1, sig, in) == eval(t2, sig, in));
    }
  }

  Interp missing;  // no carriers at all
  CHECK_THROWS_AS(eval(parse_term("f", sig), sig, missing), Error);
}

TEST_CASE("formal learners evaluate to representatives") {
  Signature sig;
  sig.add_object("a");
  FormalLearner snake{{"a"}, {}, {"a"}, {}, {"a"}, {"a"},
                      parse_term("sym[a|a]", sig), parse_term("id[a]", sig)};
  typecheck(snake, sig);
  FormalLearner ident{{"a"}, {}, {"a"}, {}, {}, {},
                      parse_term("id[a]", sig), parse_term("id[]", sig)};
  typecheck(ident, sig);

  Interp in;
  in.objects["a"] = FinSet::canonical("v", 2);
  Learner s = eval_learner(snake, sig, in);
  CHECK(s.param.size() == 2);
  CHECK(int_equiv(s, snake_composite(in.objects["a"], FinSet::unit())).has_value());
  Learner id = eval_learner(ident, sig, in);
  CHECK(int_equiv(id, identity_learner(in.objects["a"], FinSet::unit())).has_value());
}

TEST_CASE("semantic comparison of formal learners") {
  Signature sig;
  sig.add_object("a");
  sig.add_morphism("f", {"a"}, {"a"});
  sig.add_morphism("g", {"a"}, {"a"});

  FormalLearner snake{{"a"}, {}, {"a"}, {}, {"a"}, {"a"},
                      parse_term("sym[a|a]", sig), parse_term("id[a]", sig)};
  FormalLearner ident{{"a"}, {}, {"a"}, {}, {}, {},
                      parse_term("id[a]", sig), parse_term("id[]", sig)};

  Rng rng(521);
  std::vector<Interp> interps;
  for (int k = 0; k < 5; ++k) interps.push_back(random_interp(rng, sig, 3));
  CHECK(atemp_check_formal(snake, ident, sig, interps) == FormalVerdict::consistent);

  FormalLearner ff{{"a"}, {}, {"a"}, {}, {}, {}, parse_term("f", sig), parse_term("id[]", sig)};
  FormalLearner gg{{"a"}, {}, {"a"}, {}, {}, {}, parse_term("g", sig), parse_term("id[]", sig)};
  // a separating interpretation: f is the identity, g is constant
  Interp sep;
  sep.objects["a"] = FinSet::canonical("v", 2);
  sep.morphisms["f"] = FinFun::identity(sep.objects["a"]);
  sep.morphisms["g"] = FinFun::constant(sep.objects["a"], sep.objects["a"], 0);
  std::vector<Interp> seps{sep};
  CHECK(atemp_check_formal(ff, gg, sig, seps) == FormalVerdict::distinguished);

  // a formal learner is consistent with its table-level double dual
  for (const Interp& in : interps) {
    Learner l = eval_learner(snake, sig, in);
    CHECK(fhat_rel(to_coend(double_dual_int(to_int(l)))) == fhat_rel(l));
  }
}

TEST_CASE("signature files") {
  std::string text =
      "# a small signature\n"
      "obj a b\n"
      "gen f : a -> b\n"
      "gen e : -> a\n"
      "term t1 = f\n"
      "term t2 = e ; f\n";
  SigFile sf = parse_sig_file(text);
  CHECK(sf.sig.has_object("a"));
  REQUIRE(sf.term("t2") != nullptr);
  auto [d, c] = typecheck(*sf.term("t2"), sf.sig);
  CHECK(d.empty());
  CHECK(c == Word{"b"});

  CHECK_THROWS_AS(parse_sig_file("obj a\nnonsense x\n"), Error);
  CHECK_THROWS_AS(parse_sig_file("gen f : a -> b\n"), Error);  // unknown objects
}
