#pragma once

#include <functional>
#include <random>

#include "atemp/intensional.hpp"
#include "atemp/learner.hpp"

namespace atemp {

using Rng = std::mt19937_64;

int rand_int(Rng& rng, int lo, int hi);  // inclusive

FinSet rand_finset(Rng& rng, int max_size, std::string_view stem);
FinFun rand_finfun(Rng& rng, const FinSet& dom, const FinSet& cod);
Obj rand_obj(Rng& rng, int max_size, std::string_view stem);

Learner rand_learner(Rng& rng, const Obj& src, const Obj& dst, int max_hidden);
IntLearner rand_intlearner(Rng& rng, const Obj& src, const Obj& dst, int max_param);

/// Visits every function table dom -> cod; stops early if the visitor
/// returns false. Returns false on early stop.
bool enumerate_funs(const FinSet& dom, const FinSet& cod,
                    const std::function<bool(const FinFun&)>& visit);

}  // namespace atemp
