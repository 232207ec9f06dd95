#pragma once

#include <memory>
#include <string>
#include <vector>

#include "atemp/learner.hpp"

namespace atemp {

/// A compact closed target for the relational semantics. Objects are finite
/// carriers, morphisms are relations, and every object is self-dual. The
/// snake identities are checked on demand via check_snake.
class CompactClosedModel {
 public:
  virtual ~CompactClosedModel() = default;

  virtual std::string name() const = 0;
  virtual FinSet lift_object(const FinSet& a) const = 0;
  virtual FinRel lift_fun(const FinFun& f) const = 0;

  /// Structure bijection F(X×Y) -> F(X)×F(Y), as a graph relation.
  virtual FinRel structure_iso(const FinSet& x, const FinSet& y) const;
  /// Unit bijection F(I) -> I.
  virtual FinRel unit_iso() const;

  virtual FinRel cup(const FinSet& carrier) const;
  virtual FinRel cap(const FinSet& carrier) const;

  /// Dual morphism of r : X -> Y, built from the cup/cap wiring.
  FinRel dual_morphism(const FinRel& r) const;

  /// Throws if a snake composite on the carrier is not the identity.
  void check_snake(const FinSet& carrier) const;
};

/// Finite relations with product tensor; base functions map to their graphs.
class RelModel : public CompactClosedModel {
 public:
  std::string name() const override { return "rel"; }
  FinSet lift_object(const FinSet& a) const override { return a; }
  FinRel lift_fun(const FinFun& f) const override { return graph_rel(f); }
};

/// A registered example of a second model: objects double to A×A and
/// functions act diagonally.
class DoubledRelModel : public CompactClosedModel {
 public:
  std::string name() const override { return "rel2"; }
  FinSet lift_object(const FinSet& a) const override { return product(a, a); }
  FinRel lift_fun(const FinFun& f) const override { return graph_rel(fun_tensor(f, f)); }
  FinRel structure_iso(const FinSet& x, const FinSet& y) const override;
  FinRel unit_iso() const override;
};

const CompactClosedModel& rel_model();
const CompactClosedModel& doubled_rel_model();
const CompactClosedModel* find_model(const std::string& name);

/// Image of a boundary object: A'×A.
FinSet fhat_object(const Obj& x);

/// The semantics relation, evaluated directly: (a',a) ~ (b',b) iff some
/// hidden pair (p,q) has forward(p,a) = (q,b) and backward(q,b') = (p,a').
FinRel fhat_rel(const Learner& m);

/// The same morphism built through the model's cup/cap wiring. Agrees with
/// fhat_rel on the relation model.
FinRel fhat_rel_model(const Learner& m, const CompactClosedModel& model);

struct AtempVerdict {
  FinRel relation1, relation2;  // images under the reported model
  bool equal = true;
  std::string model;  // separating model, or the first model checked
  const char* meaning() const { return equal ? "consistent-with-equality" : "distinguished"; }
};

/// Compares two learners under the given models (default: the relation
/// model). A difference under any model separates them; agreement is only
/// ever reported as consistent.
AtempVerdict atemp_compare(const Learner& m1, const Learner& m2,
                           const std::vector<const CompactClosedModel*>& models = {});

}  // namespace atemp
