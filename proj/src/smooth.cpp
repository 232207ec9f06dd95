#include "atemp/smooth.hpp"

#include <cmath>

namespace atemp::smooth {

Vec concat(const Vec& x, const Vec& y) {
  Vec out;
  out.reserve(x.size() + y.size());
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

std::pair<Vec, Vec> split(const Vec& xy, int first_dim) {
  if (static_cast<int>(xy.size()) < first_dim) throw Error("split: vector too short");
  return {Vec(xy.begin(), xy.begin() + first_dim), Vec(xy.begin() + first_dim, xy.end())};
}

namespace {

void check_dim(const Vec& v, int want, const char* who) {
  if (static_cast<int>(v.size()) != want)
    throw Error(std::string(who) + ": dimension mismatch");
}

}  // namespace

SmoothLearner neuron(int input_dim, double step, Activation act, double input_step) {
  if (step < 0.0) throw Error("neuron: step must be nonnegative");
  if (input_step < 0.0) input_step = step;
  const int d = input_dim;

  auto pre = [d](const Vec& p, const Vec& a) {
    double z = p[d];  // bias
    for (int i = 0; i < d; ++i) z += p[i] * a[i];
    return z;
  };
  auto act_val = [act](double z) {
    return act == Activation::identity ? z : 1.0 / (1.0 + std::exp(-z));
  };
  auto act_deriv = [act](double z) {
    if (act == Activation::identity) return 1.0;
    double s = 1.0 / (1.0 + std::exp(-z));
    return s * (1.0 - s);
  };

  SmoothLearner sl;
  sl.param_dim = d + 1;
  sl.input_dim = d;
  sl.output_dim = 1;
  sl.implement = [=](const Vec& p, const Vec& a) {
    check_dim(p, d + 1, "neuron implement");
    check_dim(a, d, "neuron implement");
    return Vec{act_val(pre(p, a))};
  };
  // one gradient step on L(p) = (act(<w,a>+c) - b')^2 / 2
  sl.update = [=](const Vec& p, const Vec& a, const Vec& bp) {
    check_dim(p, d + 1, "neuron update");
    check_dim(a, d, "neuron update");
    check_dim(bp, 1, "neuron update");
    double z = pre(p, a);
    double g = (act_val(z) - bp[0]) * act_deriv(z);
    Vec out(d + 1);
    for (int i = 0; i < d; ++i) out[i] = p[i] - step * g * a[i];
    out[d] = p[d] - step * g;
    return out;
  };
  // gradient step on the input with its own step size
  sl.request = [=](const Vec& p, const Vec& a, const Vec& bp) {
    check_dim(p, d + 1, "neuron request");
    check_dim(a, d, "neuron request");
    check_dim(bp, 1, "neuron request");
    double z = pre(p, a);
    double g = (act_val(z) - bp[0]) * act_deriv(z);
    Vec out(d);
    for (int i = 0; i < d; ++i) out[i] = a[i] - input_step * g * p[i];
    return out;
  };
  return sl;
}

SmoothLearner dual_smooth(const SmoothLearner& sl) {
  const int pd = sl.param_dim, ad = sl.input_dim, bd = sl.output_dim;
  SmoothLearner out;
  out.param_dim = pd + ad;
  out.input_dim = bd;   // consumes the old feedback
  out.output_dim = ad;  // emits the old request
  out.implement = [=](const Vec& pp, const Vec& bp) {
    auto [p, pa] = split(pp, pd);
    return sl.request(p, pa, bp);
  };
  out.update = [=](const Vec& pp, const Vec& bp, const Vec& a) {
    auto [p, pa] = split(pp, pd);
    return concat(sl.update(p, pa, bp), a);
  };
  out.request = [=](const Vec& pp, const Vec& bp, const Vec& a) {
    auto [p, pa] = split(pp, pd);
    return sl.implement(sl.update(p, pa, bp), a);
  };
  return out;
}

std::vector<SmoothStep> run_stream(const SmoothLearner& sl, const Vec& p0,
                                   const std::vector<std::pair<Vec, Vec>>& data) {
  check_dim(p0, sl.param_dim, "run_stream");
  std::vector<SmoothStep> out;
  out.reserve(data.size());
  Vec p = p0;
  for (const auto& [a, bp] : data) {
    check_dim(a, sl.input_dim, "run_stream");
    Vec y = sl.implement(p, a);
    p = sl.update(p, a, bp);
    out.push_back(SmoothStep{std::move(y), p});
  }
  return out;
}

}  // namespace atemp::smooth
