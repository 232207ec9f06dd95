#pragma once

#include "atemp/learner.hpp"

namespace atemp {

/// A learner in implement/update/request presentation with an explicit
/// parameter set. The boundary is fully general; the classical case is
/// src.bwd == src.fwd and dst.bwd == dst.fwd.
struct IntLearner {
  Obj src, dst;
  FinSet param;
  FinFun implement;  // product(param, src.fwd) -> dst.fwd
  FinFun update;     // product(product(param, src.fwd), dst.bwd) -> param
  FinFun request;    // product(product(param, src.fwd), dst.bwd) -> src.bwd

  IntLearner(Obj src, Obj dst, FinSet param, FinFun implement, FinFun update, FinFun request);

  bool operator==(const IntLearner& o) const {
    return src == o.src && dst == o.dst && param == o.param && implement == o.implement &&
           update == o.update && request == o.request;
  }
  bool operator!=(const IntLearner& o) const { return !(*this == o); }

  int apply_implement(int p, int a) const;
  int apply_update(int p, int a, int bb) const;
  int apply_request(int p, int a, int bb) const;
};

/// Rolls the three maps into one representative: residual Q := P×A,
/// forward (p,a) -> ((p,a), implement), backward ((p,a),b') ->
/// (update, request).
Learner to_coend(const IntLearner& m);

/// Reads a representative back into implement/update/request form over the
/// same parameter set, threading the forward residual into the backward map.
IntLearner to_int(const Learner& m);

/// The dual presentation: parameter set P×A; implement is the old request,
/// update stores the incoming value, request replays implement after an
/// update.
IntLearner dual_int(const IntLearner& m);

/// dual_int twice; parameter set (P×A)×B'.
IntLearner double_dual_int(const IntLearner& m);

/// The identity delayed one step: param A, implement emits the stored value,
/// update stores the incoming one. Boundary (A,I) -> (A,I).
IntLearner delayed_identity(const FinSet& a);

/// identity as an IntLearner: trivial param, implement (·,a) -> a.
IntLearner identity_int(const FinSet& a, const FinSet& a_back);

/// Streams data through the learner: returns the implement outputs and the
/// parameter trajectory (p_0 .. p_n).
struct StreamStep {
  int output;
  int state_after;
};
std::vector<StreamStep> run_stream(const IntLearner& m, int p0,
                                   const std::vector<std::pair<int, int>>& data);

}  // namespace atemp
