#pragma once

#include <functional>
#include <string>
#include <vector>

#include "atemp/fin.hpp"

namespace atemp::smooth {

using Vec = std::vector<double>;

/// A real-vector learner: deterministic implement/update/request maps with
/// pinned dimensions. The request output has the input dimension.
struct SmoothLearner {
  int param_dim = 0;
  int input_dim = 0;
  int output_dim = 0;
  std::function<Vec(const Vec&, const Vec&)> implement;              // (p,a) -> b
  std::function<Vec(const Vec&, const Vec&, const Vec&)> update;     // (p,a,b') -> p
  std::function<Vec(const Vec&, const Vec&, const Vec&)> request;    // (p,a,b') -> a'
};

enum class Activation { identity, logistic };

/// A single neuron under squared loss: p = (w, c), implement is
/// act(<w,a> + c), update takes one gradient step of size step on (w, c),
/// request takes one gradient step of size input_step on the input.
/// input_step defaults to the update step.
SmoothLearner neuron(int input_dim, double step, Activation act, double input_step = -1.0);

/// The dual learner: state (p, a); implement replays request, update stores
/// the incoming pair, request replays implement after an update. Every output
/// reuses the original maps, so equalities hold bitwise.
SmoothLearner dual_smooth(const SmoothLearner& sl);

struct SmoothStep {
  Vec output;
  Vec state_after;
};

/// Feeds (a,b') pairs: emits implement(p_t, a_t) then steps the state.
std::vector<SmoothStep> run_stream(const SmoothLearner& sl, const Vec& p0,
                                   const std::vector<std::pair<Vec, Vec>>& data);

Vec concat(const Vec& x, const Vec& y);
std::pair<Vec, Vec> split(const Vec& xy, int first_dim);

}  // namespace atemp::smooth
