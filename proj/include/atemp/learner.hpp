#pragma once

#include "atemp/fin.hpp"
#include "atemp/shape.hpp"

namespace atemp {

/// An object of the learner category: a pair of finite sets, one flowing
/// forward and one flowing backward.
struct Obj {
  FinSet fwd;
  FinSet bwd;

  Obj dual() const { return Obj{bwd, fwd}; }
  bool operator==(const Obj& o) const { return fwd == o.fwd && bwd == o.bwd; }
  bool operator!=(const Obj& o) const { return !(*this == o); }
};

Obj obj_unit();
/// (A,A') ⊗ (B,B') = (A×B, B'×A'). The backward components swap so that
/// dualization is strictly monoidal.
Obj obj_tensor(const Obj& x, const Obj& y);

/// A learner between objects: hidden sets P (param) and Q (residual), a
/// forward map P×A -> Q×B and a backward map Q×B' -> P×A'. Stored as one
/// concrete representative; the equivalence procedures live elsewhere.
struct Learner {
  Obj src, dst;
  FinSet param;
  FinSet residual;
  FinFun forward;
  FinFun backward;

  Learner(Obj src, Obj dst, FinSet param, FinSet residual, FinFun forward, FinFun backward);

  bool operator==(const Learner& o) const {
    return src == o.src && dst == o.dst && param == o.param && residual == o.residual &&
           forward == o.forward && backward == o.backward;
  }
  bool operator!=(const Learner& o) const { return !(*this == o); }
};

Learner identity_learner(const FinSet& a, const FinSet& a_back);
Learner identity_learner(const Obj& x);

/// Sequential composition. The composite has param P2×P1 and residual Q1×Q2;
/// this order makes dual(compose(m1,m2)) == compose(dual(m2), dual(m1)) on
/// the nose.
Learner compose(const Learner& m1, const Learner& m2);

Learner tensor(const Learner& ml, const Learner& mr);

/// Swaps the two components. A strict involution at the representative level.
Learner dual(const Learner& m);

/// cup(A,A'): (I,I) -> (A×A', A×A') with param A×A' and trivial residual.
Learner cup(const FinSet& a, const FinSet& a_back);
/// cap(A,A'): (A'×A, A'×A) -> (I,I) with trivial param and residual A'×A.
Learner cap(const FinSet& a, const FinSet& a_back);

/// Embeds a plain function as a learner (A,I) -> (B,I).
Learner iota_fun(const FinFun& f);
/// Embeds a forward/backward function pair as a learner with trivial hidden
/// sets: (dom f, cod g) -> (cod f, dom g).
Learner iota_pair(const FinFun& f, const FinFun& g);

/// Embeds an optic with residual M: forward A -> M×B, backward M×B' -> A'.
/// The resulting param set is trivial.
Learner from_optic(const FinSet& m, const FinSet& b, const FinSet& b_back,
                   const FinFun& forward, const FinFun& backward);

/// The zig-zag composite (id ⊗ cup); rebracket; (cap ⊗ id) on (A,A'),
/// padded with unit relabelings. Not the identity: its behaviour lags one
/// step behind.
Learner snake_composite(const FinSet& a, const FinSet& a_back);

Learner symmetry_learner(const Obj& x, const Obj& y);

/// Rebuilds m as a composite of a cup on its param set, the embedded
/// forward/backward pair, structural relabelings, and a closing cap. The
/// result is extensionally equivalent to m and has the same image under the
/// relational semantics.
Learner decompose(const Learner& m);

}  // namespace atemp
