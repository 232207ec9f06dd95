#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "atemp/equivalence.hpp"
#include "atemp/generators.hpp"
#include "atemp/semantics.hpp"

using namespace atemp;

namespace {

IntLearner relabel_param(const IntLearner& m, const std::vector<int>& sigma,
                         std::string_view stem) {
  FinSet p2 = FinSet::canonical(stem, m.param.size());
  const int as = m.src.fwd.size(), bbs = m.dst.bwd.size();
  std::vector<int> imp(m.implement.table().size()), upd(m.update.table().size()),
      req(m.request.table().size());
  for (int p = 0; p < m.param.size(); ++p)
    for (int a = 0; a < as; ++a) {
      imp[sigma[p] * as + a] = m.apply_implement(p, a);
      for (int bb = 0; bb < bbs; ++bb) {
        int to = (sigma[p] * as + a) * bbs + bb;
        upd[to] = sigma[m.apply_update(p, a, bb)];
        req[to] = m.apply_request(p, a, bb);
      }
    }
  FinSet pa = product(p2, m.src.fwd);
  FinSet pab = product(pa, m.dst.bwd);
  return IntLearner(m.src, m.dst, p2, FinFun(pa, m.dst.fwd, imp), FinFun(pab, p2, upd),
                    FinFun(pab, m.src.bwd, req));
}

// Exhaustive reference for the bijection relation.
bool int_equiv_oracle(const IntLearner& m1, const IntLearner& m2) {
  if (m1.param.size() != m2.param.size()) return false;
  std::vector<int> f(m1.param.size());
  std::iota(f.begin(), f.end(), 0);
  const int as = m1.src.fwd.size(), bbs = m1.dst.bwd.size();
  do {
    bool ok = true;
    for (int p = 0; p < m1.param.size() && ok; ++p)
      for (int a = 0; a < as && ok; ++a) {
        if (m2.apply_implement(f[p], a) != m1.apply_implement(p, a)) ok = false;
        for (int bb = 0; bb < bbs && ok; ++bb) {
          if (m2.apply_request(f[p], a, bb) != m1.apply_request(p, a, bb)) ok = false;
          if (m2.apply_update(f[p], a, bb) != f[m1.apply_update(p, a, bb)]) ok = false;
        }
      }
    if (ok) return true;
  } while (std::next_permutation(f.begin(), f.end()));
  return false;
}

// Exhaustive reference for the one-step relation: all maps and all fillers.
bool ext_onestep_oracle(const IntLearner& m1, const IntLearner& m2) {
  const int n1 = m1.param.size(), n2 = m2.param.size();
  const int as = m1.src.fwd.size(), bbs = m1.dst.bwd.size();
  bool found = false;
  enumerate_funs(m1.param, m2.param, [&](const FinFun& f) {
    enumerate_funs(product(product(m2.param, m2.src.fwd), m2.dst.bwd), m1.param,
                   [&](const FinFun& uh) {
                     for (int p = 0; p < n1; ++p)
                       for (int a = 0; a < as; ++a) {
                         if (m2.apply_implement(f(p), a) != m1.apply_implement(p, a))
                           return true;
                         for (int bb = 0; bb < bbs; ++bb) {
                           if (m2.apply_request(f(p), a, bb) != m1.apply_request(p, a, bb))
                             return true;
                           if (uh((f(p) * as + a) * bbs + bb) != m1.apply_update(p, a, bb))
                             return true;
                         }
                       }
                     for (int v = 0; v < n2; ++v)
                       for (int a = 0; a < as; ++a)
                         for (int bb = 0; bb < bbs; ++bb)
                           if (m2.apply_update(v, a, bb) != f(uh((v * as + a) * bbs + bb)))
                             return true;
                     found = true;
                     return false;
                   });
    return !found;
  });
  return found;
}

IntLearner trivial_endo(int n, const std::vector<int>& update) {
  const FinSet& i = FinSet::unit();
  FinSet p = FinSet::canonical("p", n);
  Obj boundary{i, i};
  FinSet pa = product(p, i);
  FinSet pab = product(pa, i);
  std::vector<int> upd(n);
  for (int k = 0; k < n; ++k) upd[k] = update[k];
  return IntLearner(boundary, boundary, p, FinFun::constant(pa, i, 0), FinFun(pab, p, upd),
                    FinFun::constant(pab, i, 0));
}

}  // namespace

TEST_CASE("bijection equivalence basics") {
  Rng rng(201);
  for (int it = 0; it < 15; ++it) {
    Obj src = rand_obj(rng, 3, "a"), dst = rand_obj(rng, 3, "b");
    IntLearner m = rand_intlearner(rng, src, dst, 3);

    auto self = int_equiv(m, m);
    REQUIRE(self.has_value());
    CHECK(self->map == FinFun::identity(m.param));

    std::vector<int> sigma(m.param.size());
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    IntLearner m2 = relabel_param(m, sigma, "r");
    auto w = int_equiv(m, m2);
    REQUIRE(w.has_value());
    CHECK(validate(*w, m, m2));
  }
}

TEST_CASE("bijection equivalence needs equal parameter sizes") {
  const FinSet& i = FinSet::unit();
  Obj b{i, i};
  IntLearner one = trivial_endo(1, {0});
  IntLearner two = trivial_endo(2, {0, 1});
  CHECK_FALSE(int_equiv(one, two).has_value());
  (void)b;
}

TEST_CASE("boundary mismatch is an error") {
  FinSet a({"0", "1"});
  IntLearner m1 = identity_int(a, a);
  IntLearner m2 = identity_int(a, FinSet::unit());
  CHECK_THROWS_AS(int_equiv(m1, m2), BoundaryMismatch);
  CHECK_THROWS_AS(ext_onestep(m1, m2), BoundaryMismatch);
}

TEST_CASE("search agrees with the exhaustive bijection oracle") {
  Rng rng(211);
  for (int it = 0; it < 40; ++it) {
    Obj src{rand_finset(rng, 2, "a"), rand_finset(rng, 2, "ab")};
    Obj dst{rand_finset(rng, 2, "b"), rand_finset(rng, 2, "bb")};
    IntLearner m1 = rand_intlearner(rng, src, dst, 3);
    IntLearner m2 = rand_intlearner(rng, src, dst, m1.param.size());
    if (m2.param.size() != m1.param.size()) continue;
    CHECK(int_equiv(m1, m2).has_value() == int_equiv_oracle(m1, m2));
  }
}

TEST_CASE("one-step search agrees with the exhaustive filler oracle") {
  Rng rng(223);
  int positives = 0;
  for (int it = 0; it < 60; ++it) {
    Obj src{rand_finset(rng, 2, "a"), rand_finset(rng, 1, "ab")};
    Obj dst{rand_finset(rng, 2, "b"), rand_finset(rng, 2, "bb")};
    IntLearner m1 = rand_intlearner(rng, src, dst, 2);
    IntLearner m2 = rand_intlearner(rng, src, dst, 2);
    bool fast = ext_onestep(m1, m2).has_value();
    CHECK(fast == ext_onestep_oracle(m1, m2));
    positives += fast ? 1 : 0;
  }
  // quotients are one-step related: exercise a guaranteed positive too
  FinSet a({"0", "1"});
  IntLearner dup = [&] {
    FinSet p = FinSet::canonical("p", 2);
    FinSet pa = product(p, a);
    FinSet pab = product(pa, FinSet::unit());
    // both states behave identically
    std::vector<int> imp{0, 1, 0, 1}, upd(pab.size(), 0), req(pab.size(), 0);
    return IntLearner(Obj{a, FinSet::unit()}, Obj{a, FinSet::unit()}, p,
                      FinFun(pa, a, imp), FinFun(pab, p, upd),
                      FinFun(pab, FinSet::unit(), req));
  }();
  IntLearner collapsed = identity_int(a, FinSet::unit());
  auto w = ext_onestep(dup, collapsed);
  REQUIRE(w.has_value());
  CHECK(validate(*w, dup, collapsed));
  (void)positives;
}

TEST_CASE("intensional equivalence gives the canonical filler") {
  Rng rng(227);
  for (int it = 0; it < 20; ++it) {
    Obj src = rand_obj(rng, 3, "a"), dst = rand_obj(rng, 3, "b");
    IntLearner m = rand_intlearner(rng, src, dst, 3);
    std::vector<int> sigma(m.param.size());
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    IntLearner m2 = relabel_param(m, sigma, "r");

    auto w = ext_onestep(m, m2);
    REQUIRE(w.has_value());
    CHECK(validate(*w, m, m2));
    REQUIRE(w->filler.has_value());
    // the filler must satisfy filler(f(p),a,b) = update(p,a,b); with f a
    // bijection that pins it down completely
    const FinFun& f = w->map;
    const int as = src.fwd.size(), bbs = dst.bwd.size();
    for (int p = 0; p < m.param.size(); ++p)
      for (int a = 0; a < as; ++a)
        for (int bb = 0; bb < bbs; ++bb)
          CHECK((*w->filler)((f(p) * as + a) * bbs + bb) == m.apply_update(p, a, bb));
  }
}

TEST_CASE("monotonicity of the relations") {
  Rng rng(229);
  for (int it = 0; it < 30; ++it) {
    Obj src{rand_finset(rng, 2, "a"), rand_finset(rng, 2, "ab")};
    Obj dst{rand_finset(rng, 2, "b"), rand_finset(rng, 2, "bb")};
    IntLearner m1 = rand_intlearner(rng, src, dst, 2);
    IntLearner m2 = rand_intlearner(rng, src, dst, 2);
    if (int_equiv(m1, m2)) CHECK(ext_onestep(m1, m2).has_value());
    if (ext_onestep(m1, m2)) CHECK(two_morphism(m1, m2).has_value());
    if (surj_onestep(m1, m2)) CHECK(two_morphism(m1, m2).has_value());
  }
}

TEST_CASE("collapsing junk states: weaker relations diverge") {
  // one state, and a two-state variant where the extra state is junk
  FinSet a({"0", "1"});
  Obj boundary{a, FinSet::unit()};
  IntLearner small = identity_int(a, FinSet::unit());
  IntLearner big = [&] {
    FinSet p = FinSet::canonical("p", 2);
    FinSet pa = product(p, a);
    FinSet pab = product(pa, FinSet::unit());
    // state 0 behaves as the identity; state 1 is unreachable junk with a
    // different implement row
    std::vector<int> imp{0, 1, 1, 1};
    std::vector<int> upd(pab.size(), 0);
    std::vector<int> req(pab.size(), 0);
    return IntLearner(boundary, boundary, p, FinFun(pa, a, imp), FinFun(pab, p, upd),
                      FinFun(pab, FinSet::unit(), req));
  }();
  auto w = two_morphism(small, big);
  REQUIRE(w.has_value());
  CHECK_FALSE(w->map.is_surjective());
  CHECK_FALSE(surj_onestep(small, big).has_value());
}

TEST_CASE("trivial-boundary learners are surjectively related in two steps") {
  IntLearner twisted = trivial_endo(2, {1, 0});
  IntLearner straight = trivial_endo(2, {0, 1});
  IntLearner point = trivial_endo(1, {0});
  auto w1 = surj_onestep(twisted, point);
  auto w2 = surj_onestep(straight, point);
  REQUIRE(w1.has_value());
  REQUIRE(w2.has_value());
  CHECK(validate(*w1, twisted, point));
  CHECK(validate(*w2, straight, point));
  // no direct surjective one-step between the two-state learners
  CHECK_FALSE(surj_onestep(twisted, straight).has_value());
}

TEST_CASE("closure: one-step pairs close immediately") {
  Rng rng(233);
  Obj src{FinSet({"0", "1"}), FinSet::unit()};
  Obj dst{FinSet({"x", "y"}), FinSet::unit()};
  IntLearner m = rand_intlearner(rng, src, dst, 2);
  std::vector<int> sigma(m.param.size());
  std::iota(sigma.begin(), sigma.end(), 0);
  std::reverse(sigma.begin(), sigma.end());
  IntLearner m2 = relabel_param(m, sigma, "r");
  auto c = ext_equiv(m, m2, 4);
  CHECK(c.verdict == Tri::yes);
  REQUIRE(c.links.size() == 1);
  CHECK(validate(c.links[0], m, m2));
}

TEST_CASE("closure: double dual chains through the single dual") {
  Rng rng(239);
  Obj src{FinSet({"0", "1"}), FinSet::unit()};
  Obj dst{FinSet({"x"}), FinSet({"u"})};
  IntLearner m = rand_intlearner(rng, src, dst, 2);
  IntLearner dd = double_dual_int(m);
  IntLearner dddd = double_dual_int(dd);
  auto w1 = ext_onestep(dddd, dd);
  auto w2 = ext_onestep(dd, m);
  REQUIRE(w1.has_value());
  REQUIRE(w2.has_value());
  CHECK(validate(*w1, dddd, dd));
  CHECK(validate(*w2, dd, m));
}

TEST_CASE("closure: snake against identity stays separated within bound 4") {
  FinSet a = FinSet::canonical("a", 2);
  IntLearner snake = to_int(snake_composite(a, FinSet::unit()));
  IntLearner id = to_int(identity_learner(a, FinSet::unit()));
  auto c = ext_equiv(snake, id, 4, 500000);
  CHECK(c.verdict == Tri::no_within_bound);
}

TEST_CASE("closure: bound must cover both parameter sets") {
  FinSet a = FinSet::canonical("a", 3);
  IntLearner snake = to_int(snake_composite(a, FinSet::unit()));
  IntLearner id = to_int(identity_learner(a, FinSet::unit()));
  CHECK_THROWS_AS(ext_equiv(snake, id, 2), Error);
}

TEST_CASE("closure chains validate link by link") {
  Rng rng(241);
  Obj src{FinSet({"0", "1"}), FinSet::unit()};
  Obj dst{FinSet({"x", "y"}), FinSet::unit()};
  IntLearner m = rand_intlearner(rng, src, dst, 2);
  IntLearner dd = double_dual_int(m);
  auto c = ext_equiv(dd, m, 8, 200000);
  REQUIRE(c.verdict == Tri::yes);
  REQUIRE(c.nodes.size() == c.links.size() + 1);
  for (size_t i = 0; i < c.links.size(); ++i) {
    const Witness& w = c.links[i];
    if (w.reversed)
      CHECK(validate(w, c.nodes[i + 1], c.nodes[i]));
    else
      CHECK(validate(w, c.nodes[i], c.nodes[i + 1]));
  }
}

TEST_CASE("coend slides") {
  Rng rng(251);
  for (int it = 0; it < 10; ++it) {
    Obj src = rand_obj(rng, 3, "a"), dst = rand_obj(rng, 3, "b");
    Learner m = rand_learner(rng, src, dst, 3);

    // bijective relabel of the param set slides
    std::vector<int> sigma(m.param.size());
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    FinSet p2 = FinSet::canonical("r", m.param.size());
    std::vector<int> fwd(m.forward.table().size()), bwd(m.backward.table().size());
    const int as = src.fwd.size(), abs_ = src.bwd.size();
    for (int p = 0; p < m.param.size(); ++p)
      for (int a = 0; a < as; ++a) fwd[sigma[p] * as + a] = m.forward(p * as + a);
    for (int q = 0; q < m.residual.size(); ++q)
      for (int bb = 0; bb < dst.bwd.size(); ++bb) {
        int v = m.backward(q * dst.bwd.size() + bb);
        bwd[q * dst.bwd.size() + bb] = sigma[v / abs_] * abs_ + v % abs_;
      }
    Learner m2(src, dst, p2, m.residual, FinFun(product(p2, src.fwd), m.forward.cod(), fwd),
               FinFun(m.backward.dom(), product(p2, src.bwd), bwd));
    auto w = coend_slide(m, m2);
    REQUIRE(w.has_value());
    CHECK(validate_slide(*w, m, m2));
    CHECK(fhat_rel(m) == fhat_rel(m2));

    auto closure = coend_equiv(m, m2, std::max(m.param.size(), m.residual.size()));
    CHECK(closure.verdict == Tri::yes);
    CHECK(closure.links.size() == 1);
  }
}

TEST_CASE("unit padding of the param set is a slide") {
  Rng rng(257);
  Obj src = rand_obj(rng, 2, "a"), dst = rand_obj(rng, 2, "b");
  Learner m = rand_learner(rng, src, dst, 3);
  // pad the param set to I×P via the unitor bijection
  FinSet padded = product(FinSet::unit(), m.param);
  FinFun u = left_unitor_inv(m.param);
  const int as = src.fwd.size(), abs_ = src.bwd.size();
  std::vector<int> fwd(m.forward.table().size()), bwd(m.backward.table().size());
  for (int p = 0; p < m.param.size(); ++p)
    for (int a = 0; a < as; ++a) fwd[u(p) * as + a] = m.forward(p * as + a);
  for (int q = 0; q < m.residual.size(); ++q)
    for (int bb = 0; bb < dst.bwd.size(); ++bb) {
      int v = m.backward(q * dst.bwd.size() + bb);
      bwd[q * dst.bwd.size() + bb] = u(v / abs_) * abs_ + v % abs_;
    }
  Learner m2(src, dst, padded, m.residual, FinFun(product(padded, src.fwd), m.forward.cod(), fwd),
             FinFun(m.backward.dom(), product(padded, src.bwd), bwd));
  auto w = coend_slide(m, m2);
  REQUIRE(w.has_value());
  CHECK(validate_slide(*w, m, m2));
  CHECK(fhat_rel(m) == fhat_rel(m2));
}

TEST_CASE("semantics image is constant along generated slide chains") {
  Rng rng(263);
  for (int it = 0; it < 10; ++it) {
    Obj src = rand_obj(rng, 2, "a"), dst = rand_obj(rng, 2, "b");
    Learner m = rand_learner(rng, src, dst, 2);
    // a genuine non-bijective param slide: collapse onto the row quotient
    // by duplicating a state
    FinSet bigger = FinSet::canonical("dp", m.param.size() + 1);
    std::vector<int> u_table(bigger.size());
    for (int i = 0; i < bigger.size(); ++i) u_table[i] = std::min(i, m.param.size() - 1);
    FinFun u(bigger, m.param, u_table);
    const int as = src.fwd.size(), abs_ = src.bwd.size();
    // l_z = l∘(u×A); r stays on the small side: r_z must satisfy
    // r = (u×A')∘r_z: lift each backward value to its least preimage
    std::vector<int> fwd(bigger.size() * as), bwd(m.backward.table().size());
    for (int p = 0; p < bigger.size(); ++p)
      for (int a = 0; a < as; ++a) fwd[p * as + a] = m.forward(u(p) * as + a);
    for (size_t i = 0; i < bwd.size(); ++i) {
      int v = m.backward(static_cast<int>(i));
      bwd[i] = (v / abs_) * abs_ + v % abs_;  // least preimage of p is p itself
    }
    Learner z(src, dst, bigger, m.residual, FinFun(product(bigger, src.fwd), m.forward.cod(), fwd),
              FinFun(m.backward.dom(), product(bigger, src.bwd), bwd));
    auto w = coend_slide(z, m);
    REQUIRE(w.has_value());
    CHECK(validate_slide(*w, z, m));
    CHECK(fhat_rel(z) == fhat_rel(m));
  }
}
