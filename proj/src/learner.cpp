#include "atemp/learner.hpp"

namespace atemp {

Obj obj_unit() { return Obj{FinSet::unit(), FinSet::unit()}; }

Obj obj_tensor(const Obj& x, const Obj& y) {
  return Obj{product(x.fwd, y.fwd), product(y.bwd, x.bwd)};
}

Learner::Learner(Obj src_, Obj dst_, FinSet param_, FinSet residual_, FinFun forward_,
                 FinFun backward_)
    : src(std::move(src_)),
      dst(std::move(dst_)),
      param(std::move(param_)),
      residual(std::move(residual_)),
      forward(std::move(forward_)),
      backward(std::move(backward_)) {
  if (forward.dom() != product(param, src.fwd) || forward.cod() != product(residual, dst.fwd))
    throw BoundaryMismatch("Learner: forward map boundary mismatch");
  if (backward.dom() != product(residual, dst.bwd) || backward.cod() != product(param, src.bwd))
    throw BoundaryMismatch("Learner: backward map boundary mismatch");
}

Learner identity_learner(const FinSet& a, const FinSet& a_back) {
  return identity_learner(Obj{a, a_back});
}

Learner identity_learner(const Obj& x) {
  const FinSet& i = FinSet::unit();
  return Learner(x, x, i, i, FinFun::identity(product(i, x.fwd)),
                 FinFun::identity(product(i, x.bwd)));
}

namespace {

// X×(Y×Z) -> Y×(X×Z)
FinFun exchange(const FinSet& x, const FinSet& y, const FinSet& z) {
  auto s0 = Shape::slot(0), s1 = Shape::slot(1), s2 = Shape::slot(2);
  return wiring({x, y, z}, Shape::pair(s0, Shape::pair(s1, s2)),
                Shape::pair(s1, Shape::pair(s0, s2)));
}

// (W×X)×(Y×Z) -> (W×Y)×(X×Z)
FinFun interleave(const FinSet& w, const FinSet& x, const FinSet& y, const FinSet& z) {
  auto s0 = Shape::slot(0), s1 = Shape::slot(1), s2 = Shape::slot(2), s3 = Shape::slot(3);
  return wiring({w, x, y, z}, Shape::pair(Shape::pair(s0, s1), Shape::pair(s2, s3)),
                Shape::pair(Shape::pair(s0, s2), Shape::pair(s1, s3)));
}

// (W×X)×(Y×Z) -> (X×Y)×(W×Z)
FinFun interleave_twist(const FinSet& w, const FinSet& x, const FinSet& y, const FinSet& z) {
  auto s0 = Shape::slot(0), s1 = Shape::slot(1), s2 = Shape::slot(2), s3 = Shape::slot(3);
  return wiring({w, x, y, z}, Shape::pair(Shape::pair(s0, s1), Shape::pair(s2, s3)),
                Shape::pair(Shape::pair(s1, s2), Shape::pair(s0, s3)));
}

// (W×X)×(Y×Z) -> (Z×W)×(X×Y)
FinFun interleave_untwist(const FinSet& w, const FinSet& x, const FinSet& y, const FinSet& z) {
  auto s0 = Shape::slot(0), s1 = Shape::slot(1), s2 = Shape::slot(2), s3 = Shape::slot(3);
  return wiring({w, x, y, z}, Shape::pair(Shape::pair(s0, s1), Shape::pair(s2, s3)),
                Shape::pair(Shape::pair(s3, s0), Shape::pair(s1, s2)));
}

}  // namespace

Learner compose(const Learner& m1, const Learner& m2) {
  if (m1.dst != m2.src)
    throw BoundaryMismatch("compose: middle boundary does not match");
  const FinSet &p1 = m1.param, &p2 = m2.param, &q1 = m1.residual, &q2 = m2.residual;
  const FinSet &a = m1.src.fwd, &b = m1.dst.fwd, &c = m2.dst.fwd;
  const FinSet &ab = m1.src.bwd, &bb = m1.dst.bwd, &cb = m2.dst.bwd;

  FinFun fwd = assoc_right(p2, p1, a)
                   .then(fun_tensor(id_fun(p2), m1.forward))
                   .then(exchange(p2, q1, b))
                   .then(fun_tensor(id_fun(q1), m2.forward))
                   .then(assoc_left(q1, q2, c));
  FinFun bwd = assoc_right(q1, q2, cb)
                   .then(fun_tensor(id_fun(q1), m2.backward))
                   .then(exchange(q1, p2, bb))
                   .then(fun_tensor(id_fun(p2), m1.backward))
                   .then(assoc_left(p2, p1, ab));
  return Learner(m1.src, m2.dst, product(p2, p1), product(q1, q2), std::move(fwd),
                 std::move(bwd));
}

Learner tensor(const Learner& ml, const Learner& mr) {
  Obj src = obj_tensor(ml.src, mr.src);
  Obj dst = obj_tensor(ml.dst, mr.dst);
  const FinSet &pl = ml.param, &pr = mr.param, &ql = ml.residual, &qr = mr.residual;

  FinFun fwd = interleave(pl, pr, ml.src.fwd, mr.src.fwd)
                   .then(fun_tensor(ml.forward, mr.forward))
                   .then(interleave(ql, ml.dst.fwd, qr, mr.dst.fwd));
  FinFun bwd = interleave_twist(ql, qr, mr.dst.bwd, ml.dst.bwd)
                   .then(fun_tensor(mr.backward, ml.backward))
                   .then(interleave_untwist(pr, mr.src.bwd, pl, ml.src.bwd));
  return Learner(std::move(src), std::move(dst), product(pl, pr), product(ql, qr),
                 std::move(fwd), std::move(bwd));
}

Learner dual(const Learner& m) {
  return Learner(m.dst.dual(), m.src.dual(), m.residual, m.param, m.backward, m.forward);
}

Learner cup(const FinSet& a, const FinSet& a_back) {
  FinSet p = product(a, a_back);
  const FinSet& i = FinSet::unit();
  auto s0 = Shape::slot(0);
  FinFun fwd = wiring({p}, Shape::pair(s0, Shape::unit()), Shape::pair(Shape::unit(), s0));
  FinFun bwd = wiring({p}, Shape::pair(Shape::unit(), s0), Shape::pair(s0, Shape::unit()));
  return Learner(obj_unit(), Obj{p, p}, p, i, std::move(fwd), std::move(bwd));
}

Learner cap(const FinSet& a, const FinSet& a_back) {
  FinSet q = product(a_back, a);
  const FinSet& i = FinSet::unit();
  auto s0 = Shape::slot(0);
  FinFun fwd = wiring({q}, Shape::pair(Shape::unit(), s0), Shape::pair(s0, Shape::unit()));
  FinFun bwd = wiring({q}, Shape::pair(s0, Shape::unit()), Shape::pair(Shape::unit(), s0));
  return Learner(Obj{q, q}, obj_unit(), i, q, std::move(fwd), std::move(bwd));
}

Learner iota_pair(const FinFun& f, const FinFun& g) {
  const FinSet& i = FinSet::unit();
  Obj src{f.dom(), g.cod()};
  Obj dst{f.cod(), g.dom()};
  return Learner(std::move(src), std::move(dst), i, i, fun_tensor(id_fun(i), f),
                 fun_tensor(id_fun(i), g));
}

Learner iota_fun(const FinFun& f) {
  return iota_pair(f, FinFun::identity(FinSet::unit()));
}

Learner from_optic(const FinSet& m, const FinSet& b, const FinSet& b_back,
                   const FinFun& forward, const FinFun& backward) {
  if (forward.cod() != product(m, b))
    throw BoundaryMismatch("from_optic: forward codomain is not M×B");
  if (backward.dom() != product(m, b_back))
    throw BoundaryMismatch("from_optic: backward domain is not M×B'");
  const FinSet& i = FinSet::unit();
  const FinSet& a = forward.dom();
  const FinSet& a_back = backward.cod();
  FinFun fwd = left_unitor(a).then(forward);
  FinFun bwd = backward.then(left_unitor_inv(a_back));
  return Learner(Obj{a, a_back}, Obj{b, b_back}, i, m, std::move(fwd), std::move(bwd));
}

Learner snake_composite(const FinSet& a, const FinSet& a_back) {
  const FinSet& i = FinSet::unit();
  Obj x{a, a_back};
  // x -> x⊗(I,I)
  Learner u1 = iota_pair(right_unitor_inv(a), left_unitor(a_back));
  // x⊗(I,I) -> x⊗(x*⊗x)
  Learner t1 = tensor(identity_learner(x), cup(a_back, a));
  // x⊗(x*⊗x) -> (x⊗x*)⊗x
  Learner a1 = iota_pair(assoc_left(a, a_back, a), assoc_left(a_back, a, a_back));
  // (x⊗x*)⊗x -> (I,I)⊗x
  Learner t2 = tensor(cap(a_back, a), identity_learner(x));
  // (I,I)⊗x -> x
  Learner u2 = iota_pair(left_unitor(a), right_unitor_inv(a_back));
  (void)i;
  return compose(compose(compose(compose(u1, t1), a1), t2), u2);
}

Learner symmetry_learner(const Obj& x, const Obj& y) {
  return iota_pair(symmetry(x.fwd, y.fwd), symmetry(x.bwd, y.bwd));
}

Learner decompose(const Learner& m) {
  const FinSet &s = m.src.fwd, &sb = m.src.bwd, &a = m.dst.fwd, &ab = m.dst.bwd;
  const FinSet &p = m.param, &q = m.residual;
  Obj x{s, sb};

  // x -> (I,I)⊗x
  Learner w1 = iota_pair(left_unitor_inv(s), right_unitor(sb));
  // (I,I)⊗x -> (P,P)⊗(P,P)⊗x (still grouped as ((P×P)×S, S'×(P×P)))
  Learner w2 = tensor(cup(p, p), identity_learner(x));
  // regroup to (P,P)⊗((P,P)⊗x)
  Learner w3 = iota_pair(assoc_right(p, p, s), assoc_right(sb, p, p));

  // the embedded pair, conjugated so its boundary is (P,P)⊗x -> (Q,Q)⊗(A,A')
  Learner sig_in = iota_pair(FinFun::identity(product(p, s)), symmetry(p, sb));
  Learner sig_out = iota_pair(FinFun::identity(product(q, a)), symmetry(ab, q));
  Learner core = compose(compose(sig_in, iota_pair(m.forward, m.backward)), sig_out);

  Learner w4 = tensor(identity_learner(p, p), core);
  // regroup to ((P,P)⊗(Q,Q))⊗(A,A')
  Learner w5 = iota_pair(assoc_left(p, q, a), assoc_left(ab, q, p));
  // close the hidden wires: (P,P)⊗(Q,Q) -> (I,I)
  Learner sig_k = iota_pair(FinFun::identity(product(p, q)), symmetry(p, q));
  Learner close = compose(sig_k, cap(q, p));
  Learner w6 = tensor(close, identity_learner(a, ab));
  // (I,I)⊗(A,A') -> (A,A')
  Learner w7 = iota_pair(left_unitor(a), right_unitor_inv(ab));

  Learner out = compose(w1, w2);
  out = compose(out, w3);
  out = compose(out, w4);
  out = compose(out, w5);
  out = compose(out, w6);
  return compose(out, w7);
}

}  // namespace atemp
