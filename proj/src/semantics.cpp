#include "atemp/semantics.hpp"

#include "atemp/shape.hpp"

namespace atemp {

FinRel CompactClosedModel::structure_iso(const FinSet& x, const FinSet& y) const {
  // For models with lift_object(x×y) == lift_object(x)×lift_object(y) the
  // structure map is the identity relation.
  FinSet lhs = lift_object(product(x, y));
  FinSet rhs = product(lift_object(x), lift_object(y));
  if (lhs.size() != rhs.size())
    throw Error("CompactClosedModel: structure iso must be overridden");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(lhs.size());
  for (int i = 0; i < lhs.size(); ++i) pairs.emplace_back(i, i);
  return FinRel(std::move(lhs), std::move(rhs), std::move(pairs));
}

FinRel CompactClosedModel::unit_iso() const {
  FinSet fi = lift_object(FinSet::unit());
  if (fi.size() != 1) throw Error("CompactClosedModel: unit iso must be overridden");
  return FinRel(std::move(fi), FinSet::unit(), {{0, 0}});
}

FinRel CompactClosedModel::cup(const FinSet& carrier) const { return rel_cup(carrier); }
FinRel CompactClosedModel::cap(const FinSet& carrier) const { return rel_cap(carrier); }

FinRel CompactClosedModel::dual_morphism(const FinRel& r) const {
  const FinSet& x = r.dom();
  const FinSet& y = r.cod();
  // Y ≅ I×Y -> (X×X)×Y -> X×(X×Y) -> X×(Y×Y) -> X×I ≅ X
  FinRel out = graph_rel(left_unitor_inv(y));
  out = rel_compose(out, rel_tensor(cup(x), FinRel::identity(y)));
  out = rel_compose(out, graph_rel(assoc_right(x, x, y)));
  out = rel_compose(out, rel_tensor(FinRel::identity(x), rel_tensor(r, FinRel::identity(y))));
  out = rel_compose(out, rel_tensor(FinRel::identity(x), cap(y)));
  out = rel_compose(out, graph_rel(right_unitor(x)));
  return out;
}

void CompactClosedModel::check_snake(const FinSet& x) const {
  // X ≅ X×I -> X×(X×X) -> (X×X)×X -> I×X ≅ X must be the identity,
  // and the mirrored composite likewise.
  FinRel lhs = graph_rel(right_unitor_inv(x));
  lhs = rel_compose(lhs, rel_tensor(FinRel::identity(x), cup(x)));
  lhs = rel_compose(lhs, graph_rel(assoc_left(x, x, x)));
  lhs = rel_compose(lhs, rel_tensor(cap(x), FinRel::identity(x)));
  lhs = rel_compose(lhs, graph_rel(left_unitor(x)));
  if (lhs != FinRel::identity(x)) throw Error("model: first snake identity fails");

  FinRel rhs = graph_rel(left_unitor_inv(x));
  rhs = rel_compose(rhs, rel_tensor(cup(x), FinRel::identity(x)));
  rhs = rel_compose(rhs, graph_rel(assoc_right(x, x, x)));
  rhs = rel_compose(rhs, rel_tensor(FinRel::identity(x), cap(x)));
  rhs = rel_compose(rhs, graph_rel(right_unitor(x)));
  if (rhs != FinRel::identity(x)) throw Error("model: second snake identity fails");
}

FinRel DoubledRelModel::structure_iso(const FinSet& x, const FinSet& y) const {
  // (X×Y)×(X×Y) -> (X×X)×(Y×Y)
  auto s0 = Shape::slot(0), s1 = Shape::slot(1), s2 = Shape::slot(2), s3 = Shape::slot(3);
  FinFun w = wiring({x, y, x, y}, Shape::pair(Shape::pair(s0, s1), Shape::pair(s2, s3)),
                    Shape::pair(Shape::pair(s0, s2), Shape::pair(s1, s3)));
  return graph_rel(w);
}

FinRel DoubledRelModel::unit_iso() const {
  return graph_rel(left_unitor(FinSet::unit()));
}

const CompactClosedModel& rel_model() {
  static const RelModel m;
  return m;
}

const CompactClosedModel& doubled_rel_model() {
  static const DoubledRelModel m;
  return m;
}

const CompactClosedModel* find_model(const std::string& name) {
  if (name == "rel") return &rel_model();
  if (name == "rel2") return &doubled_rel_model();
  return nullptr;
}

FinSet fhat_object(const Obj& x) { return product(x.bwd, x.fwd); }

FinRel fhat_rel(const Learner& m) {
  const int as = m.src.fwd.size(), bs = m.dst.fwd.size();
  const int abs_ = m.src.bwd.size(), bbs = m.dst.bwd.size();
  FinSet dom = fhat_object(m.src);
  FinSet cod = fhat_object(m.dst);
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < m.param.size(); ++p)
    for (int a = 0; a < as; ++a) {
      int out = m.forward(p * as + a);
      int q = out / bs, b = out % bs;
      for (int bb = 0; bb < bbs; ++bb) {
        int back = m.backward(q * bbs + bb);
        if (back / abs_ != p) continue;
        int ab = back % abs_;
        pairs.emplace_back(ab * as + a, bb * bs + b);
      }
    }
  return FinRel(std::move(dom), std::move(cod), std::move(pairs));
}

FinRel fhat_rel_model(const Learner& m, const CompactClosedModel& model) {
  const FinSet &a = m.src.fwd, &ab = m.src.bwd, &b = m.dst.fwd, &bb = m.dst.bwd;
  const FinSet &p = m.param, &q = m.residual;
  FinSet fa = model.lift_object(a), fab = model.lift_object(ab);
  FinSet fb = model.lift_object(b), fbb = model.lift_object(bb);
  FinSet fp = model.lift_object(p), fq = model.lift_object(q);

  // conjugate the lifted components so they run between product carriers
  auto conjugate = [&](const FinRel& rel, const FinSet& x, const FinSet& y, const FinSet& z,
                       const FinSet& w) {
    // F(x×y) -> F(z×w) becomes F(x)×F(y) -> F(z)×F(w)
    FinRel out = rel_converse(model.structure_iso(x, y));
    out = rel_compose(out, rel);
    return rel_compose(out, model.structure_iso(z, w));
  };
  FinRel flc = conjugate(model.lift_fun(m.forward), p, a, q, b);
  FinRel frc = conjugate(model.lift_fun(m.backward), q, bb, p, ab);
  FinRel frc_dual = model.dual_morphism(frc);  // F(P)×F(A') -> F(Q)×F(B')

  FinSet dom = product(fab, fa);
  FinRel out = graph_rel(left_unitor_inv(dom));
  out = rel_compose(out, rel_tensor(model.cup(fp), FinRel::identity(dom)));
  {
    auto s0 = Shape::slot(0), s1 = Shape::slot(1), s2 = Shape::slot(2), s3 = Shape::slot(3);
    FinFun regroup =
        wiring({fp, fp, fab, fa}, Shape::pair(Shape::pair(s0, s1), Shape::pair(s2, s3)),
               Shape::pair(Shape::pair(s0, s2), Shape::pair(s1, s3)));
    out = rel_compose(out, graph_rel(regroup));
  }
  out = rel_compose(out, rel_tensor(frc_dual, flc));
  {
    auto s0 = Shape::slot(0), s1 = Shape::slot(1), s2 = Shape::slot(2), s3 = Shape::slot(3);
    FinFun regroup =
        wiring({fq, fbb, fq, fb}, Shape::pair(Shape::pair(s0, s1), Shape::pair(s2, s3)),
               Shape::pair(Shape::pair(s0, s2), Shape::pair(s1, s3)));
    out = rel_compose(out, graph_rel(regroup));
  }
  out = rel_compose(out, rel_tensor(model.cap(fq), FinRel::identity(product(fbb, fb))));
  out = rel_compose(out, graph_rel(left_unitor(product(fbb, fb))));
  return out;
}

AtempVerdict atemp_compare(const Learner& m1, const Learner& m2,
                           const std::vector<const CompactClosedModel*>& models) {
  if (m1.src != m2.src || m1.dst != m2.dst)
    throw BoundaryMismatch("atemp_compare: boundaries differ");
  std::vector<const CompactClosedModel*> use = models;
  if (use.empty()) use.push_back(&rel_model());

  AtempVerdict v;
  bool first = true;
  for (const CompactClosedModel* model : use) {
    FinRel r1 = model == &rel_model() ? fhat_rel(m1) : fhat_rel_model(m1, *model);
    FinRel r2 = model == &rel_model() ? fhat_rel(m2) : fhat_rel_model(m2, *model);
    bool eq = r1 == r2;
    if (first || !eq) {
      v.relation1 = r1;
      v.relation2 = r2;
      v.equal = eq;
      v.model = model->name();
      first = false;
    }
    if (!eq) break;
  }
  return v;
}

}  // namespace atemp
