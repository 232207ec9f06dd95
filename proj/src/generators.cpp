#include "atemp/generators.hpp"

namespace atemp {

int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

FinSet rand_finset(Rng& rng, int max_size, std::string_view stem) {
  return FinSet::canonical(stem, rand_int(rng, 1, max_size));
}

FinFun rand_finfun(Rng& rng, const FinSet& dom, const FinSet& cod) {
  std::vector<int> t(dom.size());
  for (int i = 0; i < dom.size(); ++i) t[i] = rand_int(rng, 0, cod.size() - 1);
  return FinFun(dom, cod, std::move(t));
}

Obj rand_obj(Rng& rng, int max_size, std::string_view stem) {
  FinSet fwd = FinSet::canonical(std::string(stem), rand_int(rng, 1, max_size));
  FinSet bwd = FinSet::canonical(std::string(stem) + "b", rand_int(rng, 1, max_size));
  return Obj{std::move(fwd), std::move(bwd)};
}

Learner rand_learner(Rng& rng, const Obj& src, const Obj& dst, int max_hidden) {
  FinSet p = rand_finset(rng, max_hidden, "p");
  FinSet q = rand_finset(rng, max_hidden, "q");
  FinFun fwd = rand_finfun(rng, product(p, src.fwd), product(q, dst.fwd));
  FinFun bwd = rand_finfun(rng, product(q, dst.bwd), product(p, src.bwd));
  return Learner(src, dst, std::move(p), std::move(q), std::move(fwd), std::move(bwd));
}

IntLearner rand_intlearner(Rng& rng, const Obj& src, const Obj& dst, int max_param) {
  FinSet p = rand_finset(rng, max_param, "p");
  FinSet pa = product(p, src.fwd);
  FinSet pab = product(pa, dst.bwd);
  FinFun imp = rand_finfun(rng, pa, dst.fwd);
  FinFun upd = rand_finfun(rng, pab, p);
  FinFun req = rand_finfun(rng, pab, src.bwd);
  return IntLearner(src, dst, std::move(p), std::move(imp), std::move(upd), std::move(req));
}

bool enumerate_funs(const FinSet& dom, const FinSet& cod,
                    const std::function<bool(const FinFun&)>& visit) {
  if (cod.size() == 0 && dom.size() > 0) return true;  // no functions exist
  std::vector<int> t(dom.size(), 0);
  while (true) {
    if (!visit(FinFun(dom, cod, t))) return false;
    int i = 0;
    for (; i < dom.size(); ++i) {
      if (++t[i] < cod.size()) break;
      t[i] = 0;
    }
    if (i == dom.size()) return true;
  }
}

}  // namespace atemp
