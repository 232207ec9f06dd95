#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atemp/equivalence.hpp"
#include "atemp/generators.hpp"
#include "atemp/semantics.hpp"

using namespace atemp;

namespace {

bool int_equivalent(const Learner& a, const Learner& b) {
  return int_equiv(a, b).has_value();
}

Learner rand_endo(Rng& rng, const Obj& src, const Obj& dst, int hidden) {
  return rand_learner(rng, src, dst, hidden);
}

}  // namespace

TEST_CASE("identity learner") {
  FinSet a({"0", "1"});
  Learner id = identity_learner(a, FinSet::unit());
  CHECK(id.forward.apply_label("(*,0)") == "(*,0)");
  CHECK(fhat_rel(id) == FinRel::identity(fhat_object(id.src)));
  CHECK(int_equiv(to_int(id), identity_int(a, FinSet::unit())).has_value());
}

TEST_CASE("learner constructor checks boundaries") {
  FinSet a({"0", "1"});
  const FinSet& i = FinSet::unit();
  CHECK_THROWS_AS(Learner(Obj{a, i}, Obj{a, i}, i, i, FinFun::identity(a),
                          FinFun::identity(product(i, i))),
                  BoundaryMismatch);
}

TEST_CASE("composition unit laws via the unitor bijection") {
  Rng rng(21);
  for (int it = 0; it < 10; ++it) {
    Obj src = rand_obj(rng, 3, "a");
    Obj dst = rand_obj(rng, 3, "b");
    Learner m = rand_learner(rng, src, dst, 3);

    Learner left = compose(identity_learner(src), m);
    Witness w{WitnessKind::bijection, right_unitor(m.param), std::nullopt, std::nullopt};
    CHECK(validate(w, to_int(left), to_int(m)));

    Learner right = compose(m, identity_learner(dst));
    Witness w2{WitnessKind::bijection, left_unitor(m.param), std::nullopt, std::nullopt};
    CHECK(validate(w2, to_int(right), to_int(m)));
  }
}

TEST_CASE("composition of embedded functions") {
  FinSet a({"0", "1"}), b({"x", "y"}), c({"s", "t"});
  Rng rng(5);
  for (int it = 0; it < 10; ++it) {
    FinFun f = rand_finfun(rng, a, b), g = rand_finfun(rng, b, c);
    CHECK(int_equivalent(compose(iota_fun(f), iota_fun(g)), iota_fun(f.then(g))));
  }
}

TEST_CASE("composition boundary mismatch") {
  FinSet a({"0", "1"}), b({"x", "y", "z"});
  CHECK_THROWS_AS(compose(iota_fun(id_fun(a)), iota_fun(id_fun(b))), BoundaryMismatch);
}

TEST_CASE("tensor object shape") {
  Obj x{FinSet({"0", "1"}), FinSet({"u"})};
  Obj y{FinSet({"p", "q"}), FinSet({"v", "w"})};
  Obj t = obj_tensor(x, y);
  CHECK(t.fwd == product(x.fwd, y.fwd));
  CHECK(t.bwd == product(y.bwd, x.bwd));
}

TEST_CASE("tensor of identities") {
  Obj x{FinSet({"0", "1"}), FinSet({"u"})};
  Obj y{FinSet({"p"}), FinSet({"v", "w"})};
  CHECK(int_equivalent(tensor(identity_learner(x), identity_learner(y)),
                       identity_learner(obj_tensor(x, y))));
}

TEST_CASE("tensor interchange on small random instances") {
  Rng rng(31);
  for (int it = 0; it < 8; ++it) {
    Obj x = rand_obj(rng, 2, "x"), y = rand_obj(rng, 2, "y"), z = rand_obj(rng, 2, "z");
    Obj u = rand_obj(rng, 2, "u"), v = rand_obj(rng, 2, "v"), w = rand_obj(rng, 2, "w");
    Learner a = rand_learner(rng, x, y, 2), b = rand_learner(rng, y, z, 2);
    Learner c = rand_learner(rng, u, v, 2), d = rand_learner(rng, v, w, 2);
    CHECK(int_equivalent(tensor(compose(a, b), compose(c, d)),
                         compose(tensor(a, c), tensor(b, d))));
  }
}

TEST_CASE("dual is a strict involution") {
  Rng rng(41);
  for (int it = 0; it < 20; ++it) {
    Learner m = rand_learner(rng, rand_obj(rng, 3, "a"), rand_obj(rng, 3, "b"), 3);
    CHECK(dual(dual(m)) == m);
  }
}

TEST_CASE("duality distributes strictly over composition") {
  Rng rng(43);
  for (int it = 0; it < 10; ++it) {
    Obj x = rand_obj(rng, 3, "x"), y = rand_obj(rng, 3, "y"), z = rand_obj(rng, 3, "z");
    Learner m1 = rand_learner(rng, x, y, 3), m2 = rand_learner(rng, y, z, 3);
    CHECK(dual(compose(m1, m2)) == compose(dual(m2), dual(m1)));
  }
}

TEST_CASE("dual of tensor matches tensor of duals up to a relabel") {
  Rng rng(47);
  for (int it = 0; it < 8; ++it) {
    Learner l = rand_learner(rng, rand_obj(rng, 2, "x"), rand_obj(rng, 2, "y"), 2);
    Learner r = rand_learner(rng, rand_obj(rng, 2, "u"), rand_obj(rng, 2, "v"), 2);
    auto w = learner_iso(dual(tensor(l, r)), tensor(dual(r), dual(l)));
    REQUIRE(w.has_value());
    CHECK(validate_slide(*w, dual(tensor(l, r)), tensor(dual(r), dual(l))));
  }
}

TEST_CASE("cup and cap are dual to each other on the nose") {
  for (int na = 1; na <= 3; ++na)
    for (int nb = 1; nb <= 3; ++nb) {
      FinSet a = FinSet::canonical("a", na), ab = FinSet::canonical("ab", nb);
      CHECK(dual(cup(a, ab)) == cap(ab, a));
      CHECK(dual(cap(a, ab)) == cup(ab, a));
    }
}

TEST_CASE("cup singleton instance") {
  FinSet a({"0"});
  Learner c = cup(a, FinSet::unit());
  CHECK(c.param == product(a, FinSet::unit()));
  CHECK(c.forward.apply_label("((0,*),*)") == "(*,(0,*))");
}

TEST_CASE("symmetry against the cup") {
  for (int na = 1; na <= 2; ++na)
    for (int nb = 1; nb <= 2; ++nb) {
      FinSet a = FinSet::canonical("a", na), ab = FinSet::canonical("b", nb);
      Obj x{a, ab};
      Learner lhs = compose(cup(a, ab), symmetry_learner(x, x.dual()));
      Learner rhs = cup(ab, a);
      CHECK(int_equivalent(lhs, rhs));

      Learner lhs2 = compose(symmetry_learner(x, x.dual()), cap(a, ab));
      Learner rhs2 = cap(ab, a);
      CHECK(int_equivalent(lhs2, rhs2));
    }
}

TEST_CASE("embedding plain functions and optics") {
  FinSet a({"0", "1"});
  CHECK(int_equivalent(iota_fun(id_fun(a)), identity_learner(a, FinSet::unit())));

  Rng rng(51);
  for (int it = 0; it < 10; ++it) {
    FinSet x = rand_finset(rng, 2, "x"), y = rand_finset(rng, 2, "y");
    FinSet xb = rand_finset(rng, 2, "xb"), yb = rand_finset(rng, 2, "yb");
    FinFun f = rand_finfun(rng, x, y), g = rand_finfun(rng, yb, xb);
    CHECK(dual(iota_pair(f, g)) == iota_pair(g, f));
  }
}

TEST_CASE("optic embedding has a trivial parameter set") {
  FinSet a({"0", "1"}), ab({"u"});
  Learner opt = from_optic(FinSet::unit(), a, ab, left_unitor_inv(a), left_unitor(ab));
  CHECK(opt.param == FinSet::unit());
  CHECK(int_equivalent(opt, identity_learner(a, ab)));
}

TEST_CASE("optic composition matches learner composition") {
  Rng rng(61);
  for (int it = 0; it < 6; ++it) {
    FinSet a = rand_finset(rng, 2, "a"), b = rand_finset(rng, 2, "b"),
           c = rand_finset(rng, 2, "c");
    FinSet ab = rand_finset(rng, 2, "ab"), bb = rand_finset(rng, 2, "bb"),
           cb = rand_finset(rng, 2, "cb");
    FinSet m = rand_finset(rng, 2, "m"), n = rand_finset(rng, 2, "n");
    FinFun l1 = rand_finfun(rng, a, product(m, b));
    FinFun r1 = rand_finfun(rng, product(m, bb), ab);
    FinFun l2 = rand_finfun(rng, b, product(n, c));
    FinFun r2 = rand_finfun(rng, product(n, cb), bb);

    // composite optic with residual m×n
    FinFun lc = l1.then(fun_tensor(id_fun(m), l2)).then(assoc_left(m, n, c));
    FinFun rc = assoc_right(m, n, cb).then(fun_tensor(id_fun(m), r2)).then(r1);
    Learner direct = from_optic(product(m, n), c, cb, lc, rc);
    Learner composed = compose(from_optic(m, b, bb, l1, r1), from_optic(n, c, cb, l2, r2));
    CHECK(int_equivalent(direct, composed));
  }
}

TEST_CASE("snake composite") {
  // singleton carrier: forced to be the identity
  FinSet one({"x"});
  CHECK(int_equivalent(snake_composite(one, FinSet::unit()),
                       identity_learner(one, FinSet::unit())));

  // the image under the relational semantics is always the identity
  for (int na = 1; na <= 3; ++na)
    for (int nb = 1; nb <= 2; ++nb) {
      FinSet a = FinSet::canonical("a", na), ab = FinSet::canonical("b", nb);
      Learner s = snake_composite(a, ab);
      CHECK(fhat_rel(s) == FinRel::identity(fhat_object(Obj{a, ab})));
    }

  // but for |A| >= 2 there is no one-step witness to the identity
  FinSet two = FinSet::canonical("a", 2);
  Learner snake2 = snake_composite(two, FinSet::unit());
  Learner id2 = identity_learner(two, FinSet::unit());
  CHECK_FALSE(ext_onestep(to_int(snake2), to_int(id2)).has_value());
  CHECK_FALSE(ext_onestep(to_int(id2), to_int(snake2)).has_value());
}

TEST_CASE("extranaturality of cup and cap against embedded pairs") {
  Rng rng(71);
  for (int it = 0; it < 6; ++it) {
    FinSet a = rand_finset(rng, 2, "a"), b = rand_finset(rng, 2, "b");
    FinSet ab = rand_finset(rng, 2, "ab"), bb = rand_finset(rng, 2, "bb");
    Obj x{a, ab}, y{b, bb};
    FinFun f = rand_finfun(rng, a, b);
    FinFun fb = rand_finfun(rng, bb, ab);
    Learner emb = iota_pair(f, fb);
    Learner emb_dual = iota_pair(fb, f);

    Learner lhs = compose(tensor(identity_learner(y.dual()), emb), cap(b, bb));
    Learner rhs = compose(tensor(emb_dual, identity_learner(x)), cap(a, ab));
    CHECK(int_equivalent(lhs, rhs));

    Learner lhs2 = compose(cup(a, ab), tensor(emb, identity_learner(x.dual())));
    Learner rhs2 = compose(cup(b, bb), tensor(identity_learner(y), emb_dual));
    CHECK(int_equivalent(lhs2, rhs2));
  }
}

TEST_CASE("decomposition rebuilds the learner up to extensional equivalence") {
  Rng rng(81);
  // the identity first
  Learner id = identity_learner(FinSet({"0", "1"}), FinSet({"u"}));
  Learner d0 = decompose(id);
  CHECK(fhat_rel(d0) == fhat_rel(id));
  bool related0 = ext_onestep(to_int(d0), to_int(id)).has_value() ||
                  ext_onestep(to_int(id), to_int(d0)).has_value();
  CHECK(related0);

  for (int it = 0; it < 10; ++it) {
    Obj src = rand_obj(rng, 2, "s"), dst = rand_obj(rng, 2, "a");
    Learner m = rand_learner(rng, src, dst, 2);
    Learner d = decompose(m);
    CHECK(d.src == m.src);
    CHECK(d.dst == m.dst);
    CHECK(fhat_rel(d) == fhat_rel(m));
    bool related = ext_onestep(to_int(d), to_int(m)).has_value() ||
                   ext_onestep(to_int(m), to_int(d)).has_value();
    CHECK(related);
  }
}

TEST_CASE("symmetry learner squares to the identity") {
  Obj x{FinSet({"0", "1"}), FinSet({"u"})};
  Obj y{FinSet({"p"}), FinSet({"v", "w"})};
  Learner s = symmetry_learner(x, y);
  Learner s2 = symmetry_learner(y, x);
  CHECK(int_equivalent(compose(s, s2), identity_learner(obj_tensor(x, y))));
}

TEST_CASE("symmetry learner is natural against embedded pairs") {
  Rng rng(91);
  for (int it = 0; it < 6; ++it) {
    FinSet a = rand_finset(rng, 2, "a"), b = rand_finset(rng, 2, "b");
    FinSet ab = rand_finset(rng, 2, "ab"), bb = rand_finset(rng, 2, "bb");
    FinSet c = rand_finset(rng, 2, "c"), cb = rand_finset(rng, 2, "cb");
    FinSet d = rand_finset(rng, 2, "d"), db = rand_finset(rng, 2, "db");
    Obj x{a, ab}, y{b, bb}, u{c, cb}, v{d, db};
    Learner f = iota_pair(rand_finfun(rng, a, b), rand_finfun(rng, bb, ab));
    Learner g = iota_pair(rand_finfun(rng, c, d), rand_finfun(rng, db, cb));
    Learner lhs = compose(tensor(f, g), symmetry_learner(y, v));
    Learner rhs = compose(symmetry_learner(x, u), tensor(g, f));
    CHECK(int_equivalent(lhs, rhs));
  }
}
