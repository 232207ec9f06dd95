#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "atemp/intensional.hpp"
#include "atemp/learner.hpp"
#include "atemp/search.hpp"

namespace atemp {

enum class WitnessKind {
  bijection,        // parameter bijection satisfying all three equations
  diagonal_filler,  // map + filler (one-step extensional)
  outer_square,     // map with commuting outer square only
  surjective,       // outer_square with a surjective map
  coend_slide,      // representative slide (u on param and/or v on residual)
};

/// A checked certificate for one of the relations. `map` is the parameter
/// map (f, or u for slides); `filler` the diagonal filler; `comap` the
/// residual map v for slides. `reversed` marks a link that relates the pair
/// in the m2 -> m1 direction inside a chain.
struct Witness {
  WitnessKind kind;
  FinFun map;
  std::optional<FinFun> filler;
  std::optional<FinFun> comap;
  bool reversed = false;
};

const char* witness_kind_name(WitnessKind k);

// One-step decision procedures. All are exhaustive over their search space,
// deterministic (first witness in canonical order), and throw
// BoundaryMismatch when the boundaries disagree. The search::Options toggle
// only affects wall-clock time, never the result.

/// Parameter-set bijection f with implement/update/request transported.
std::optional<Witness> int_equiv(const IntLearner& m1, const IntLearner& m2,
                                 const search::Options& opt = {});

/// f : P1 -> P2 plus a diagonal filler for the update square.
std::optional<Witness> ext_onestep(const IntLearner& m1, const IntLearner& m2,
                                   const search::Options& opt = {});

/// f with the outer update square commuting (no filler required).
std::optional<Witness> two_morphism(const IntLearner& m1, const IntLearner& m2,
                                    const search::Options& opt = {});

/// two_morphism restricted to surjective f.
std::optional<Witness> surj_onestep(const IntLearner& m1, const IntLearner& m2,
                                    const search::Options& opt = {});

// Representative-level relations on Learner.

/// One-step coend slide: a param slide along u (residuals equal), a residual
/// slide along v (params equal), or a simultaneous bijective relabel (u,v).
std::optional<Witness> coend_slide(const Learner& l1, const Learner& l2,
                                   const search::Options& opt = {});

/// Simultaneous bijective relabel of param and residual.
std::optional<Witness> learner_iso(const Learner& l1, const Learner& l2,
                                   const search::Options& opt = {});

// Convenience overloads routing representatives through to_int.
std::optional<Witness> int_equiv(const Learner& l1, const Learner& l2,
                                 const search::Options& opt = {});
std::optional<Witness> ext_onestep(const Learner& l1, const Learner& l2,
                                   const search::Options& opt = {});

/// Re-evaluates a witness's defining equations pointwise.
bool validate(const Witness& w, const IntLearner& m1, const IntLearner& m2);
bool validate_slide(const Witness& w, const Learner& l1, const Learner& l2);

enum class Tri { yes, no_within_bound, unknown };
const char* tri_name(Tri t);

template <typename Node>
struct Closure {
  Tri verdict;
  std::vector<Node> nodes;      // chain endpoints and intermediates (yes only)
  std::vector<Witness> links;   // links[i] relates nodes[i], nodes[i+1]
  std::uint64_t explored = 0;   // canonical states visited
};

/// Symmetric-transitive closure of ext_onestep through intermediate learners
/// with parameter sets of size <= bound. Bidirectional breadth-first search
/// over canonical forms; sound "yes", exhaustive "no_within_bound", and
/// "unknown" when the node budget trips first.
Closure<IntLearner> ext_equiv(const IntLearner& m1, const IntLearner& m2, int bound,
                              std::uint64_t node_budget = 2'000'000,
                              const search::Options& opt = {});

/// Closure of coend_slide through representatives with param/residual sizes
/// <= bound.
Closure<Learner> coend_equiv(const Learner& l1, const Learner& l2, int bound,
                             std::uint64_t node_budget = 500'000,
                             const search::Options& opt = {});

namespace detail {
/// Least diagonal filler for a given one-step map, if one exists.
std::optional<FinFun> ext_filler(const IntLearner& from, const IntLearner& to,
                                 const std::vector<int>& f);
}  // namespace detail

}  // namespace atemp
