#include "atemp/equivalence.hpp"

#include <algorithm>

namespace atemp {

const char* witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::bijection: return "bijection";
    case WitnessKind::diagonal_filler: return "diagonal-filler";
    case WitnessKind::outer_square: return "outer-square";
    case WitnessKind::surjective: return "surjective";
    case WitnessKind::coend_slide: return "coend-slide";
  }
  return "?";
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no_within_bound: return "no-within-bound";
    case Tri::unknown: return "unknown";
  }
  return "?";
}

namespace {

void require_same_boundary(const IntLearner& m1, const IntLearner& m2) {
  if (m1.src != m2.src || m1.dst != m2.dst)
    throw BoundaryMismatch("equivalence: boundaries differ");
}

// Per-state candidate targets: p' qualifies for p when the implement and
// request rows agree pointwise.
std::vector<std::vector<int>> row_candidates(const IntLearner& m1, const IntLearner& m2) {
  const int n1 = m1.param.size(), n2 = m2.param.size();
  const int as = m1.src.fwd.size(), bbs = m1.dst.bwd.size();
  std::vector<std::vector<int>> cand(n1);
  for (int p = 0; p < n1; ++p) {
    for (int v = 0; v < n2; ++v) {
      bool ok = true;
      for (int a = 0; a < as && ok; ++a) {
        if (m2.apply_implement(v, a) != m1.apply_implement(p, a)) ok = false;
        for (int bb = 0; bb < bbs && ok; ++bb)
          if (m2.apply_request(v, a, bb) != m1.apply_request(p, a, bb)) ok = false;
      }
      if (ok) cand[p].push_back(v);
    }
  }
  return cand;
}

// Identifier per state of m's full update row (used for fiber merging).
std::vector<int> update_row_ids(const IntLearner& m) {
  const int n = m.param.size();
  const int as = m.src.fwd.size(), bbs = m.dst.bwd.size();
  std::vector<std::vector<int>> rows(n);
  for (int p = 0; p < n; ++p) {
    rows[p].reserve(as * bbs);
    for (int a = 0; a < as; ++a)
      for (int bb = 0; bb < bbs; ++bb) rows[p].push_back(m.apply_update(p, a, bb));
  }
  std::vector<int> ids(n, -1);
  int next = 0;
  for (int p = 0; p < n; ++p) {
    if (ids[p] >= 0) continue;
    ids[p] = next;
    for (int q = p + 1; q < n; ++q)
      if (ids[q] < 0 && rows[q] == rows[p]) ids[q] = next;
    ++next;
  }
  return ids;
}

// Checks the update constraints touching state p against the partial map.
// mode 0: transported update (bijection), requires f[t] when assigned.
// mode 1: outer square only.
bool update_consistent(const IntLearner& m1, const IntLearner& m2, const std::vector<int>& f,
                       int p) {
  const int n1 = m1.param.size();
  const int as = m1.src.fwd.size(), bbs = m1.dst.bwd.size();
  for (int a = 0; a < as; ++a)
    for (int bb = 0; bb < bbs; ++bb) {
      int t = m1.apply_update(p, a, bb);
      if (f[t] >= 0 && m2.apply_update(f[p], a, bb) != f[t]) return false;
    }
  for (int q = 0; q < n1; ++q) {
    if (f[q] < 0 || q == p) continue;
    for (int a = 0; a < as; ++a)
      for (int bb = 0; bb < bbs; ++bb)
        if (m1.apply_update(q, a, bb) == p && m2.apply_update(f[q], a, bb) != f[p]) return false;
  }
  return true;
}

std::optional<FinFun> build_filler(const IntLearner& m1, const IntLearner& m2,
                                   const std::vector<int>& f);

struct MapSearch {
  const IntLearner& m1;
  const IntLearner& m2;
  const std::vector<std::vector<int>>& cand;
  const std::vector<int>* row_ids = nullptr;  // update rows of m1 (filler mode)
  bool bijective = false;
  bool surjective = false;
  bool need_filler = false;
  std::vector<int> f;
  std::vector<char> used;
  int covered = 0;

  MapSearch(const IntLearner& a, const IntLearner& b, const std::vector<std::vector<int>>& c)
      : m1(a), m2(b), cand(c), f(a.param.size(), -1), used(b.param.size(), 0) {}

  bool admissible(int p, int v) {
    if (bijective && used[v]) return false;
    if (row_ids && used[v]) {
      // merging onto an occupied target needs identical update rows
      for (int q = 0; q < (int)f.size(); ++q)
        if (f[q] == v && (*row_ids)[q] != (*row_ids)[p]) return false;
    }
    return true;
  }

  bool leaf_ok() {
    if (surjective && covered != m2.param.size()) return false;
    if (need_filler && !build_filler(m1, m2, f)) return false;
    return true;
  }

  bool search(int p) {
    const int n1 = m1.param.size(), n2 = m2.param.size();
    if (p == n1) return leaf_ok();
    if (surjective && n2 - covered > n1 - p) return false;
    for (int v : cand[p]) {
      if (!admissible(p, v)) continue;
      f[p] = v;
      bool fresh = !used[v];
      used[v] = 1;
      if (fresh) ++covered;
      if (update_consistent(m1, m2, f, p) && search(p + 1)) return true;
      f[p] = -1;
      if (fresh) {
        used[v] = 0;
        --covered;
      }
    }
    return false;
  }
};

// Builds the least diagonal filler for a complete f, or fails.
std::optional<FinFun> build_filler(const IntLearner& m1, const IntLearner& m2,
                                   const std::vector<int>& f) {
  const int n1 = m1.param.size(), n2 = m2.param.size();
  const int as = m1.src.fwd.size(), bbs = m1.dst.bwd.size();
  std::vector<int> least_preimage(n2, -1);
  for (int p = n1 - 1; p >= 0; --p) least_preimage[f[p]] = p;
  FinSet dom = product(product(m2.param, m2.src.fwd), m2.dst.bwd);
  std::vector<int> table(dom.size(), -1);
  for (int v = 0; v < n2; ++v)
    for (int a = 0; a < as; ++a)
      for (int bb = 0; bb < bbs; ++bb) {
        int idx = (v * as + a) * bbs + bb;
        int pre = least_preimage[v];
        if (pre >= 0) {
          table[idx] = m1.apply_update(pre, a, bb);
        } else {
          int want = m2.apply_update(v, a, bb);
          int got = least_preimage[want];
          if (got < 0) return std::nullopt;  // no preimage for an off-image update
          table[idx] = got;
        }
      }
  return FinFun(std::move(dom), m1.param, std::move(table));
}

std::optional<std::vector<int>> run_map_search(const IntLearner& m1, const IntLearner& m2,
                                               const std::vector<std::vector<int>>& cand,
                                               const std::vector<int>* row_ids, bool bijective,
                                               bool surjective, const search::Options& opt,
                                               bool need_filler) {
  const int n1 = m1.param.size();
  auto probe_with_first = [&](int first) -> std::optional<std::vector<int>> {
    MapSearch s(m1, m2, cand);
    s.row_ids = row_ids;
    s.bijective = bijective;
    s.surjective = surjective;
    s.need_filler = need_filler;
    if (n1 == 0) {
      if (!s.leaf_ok()) return std::nullopt;
      return s.f;
    }
    int v = cand[0][first];
    if (!s.admissible(0, v)) return std::nullopt;
    s.f[0] = v;
    s.used[v] = 1;
    s.covered = 1;
    if (!update_consistent(m1, m2, s.f, 0)) return std::nullopt;
    if (!s.search(1)) return std::nullopt;
    return s.f;
  };
  if (n1 == 0) return probe_with_first(0);
  if (cand[0].empty()) return std::nullopt;
  auto hit = search::first_success<std::vector<int>>(static_cast<int>(cand[0].size()),
                                                     probe_with_first, opt);
  if (!hit) return std::nullopt;
  return hit->second;
}

FinFun map_to_finfun(const IntLearner& m1, const IntLearner& m2, const std::vector<int>& f) {
  return FinFun(m1.param, m2.param, f);
}

}  // namespace

std::optional<Witness> int_equiv(const IntLearner& m1, const IntLearner& m2,
                                 const search::Options& opt) {
  require_same_boundary(m1, m2);
  if (m1.param.size() != m2.param.size()) return std::nullopt;
  auto cand = row_candidates(m1, m2);
  auto f = run_map_search(m1, m2, cand, nullptr, /*bijective=*/true, /*surjective=*/false, opt,
                          /*need_filler=*/false);
  if (!f) return std::nullopt;
  return Witness{WitnessKind::bijection, map_to_finfun(m1, m2, *f), std::nullopt, std::nullopt};
}

std::optional<Witness> ext_onestep(const IntLearner& m1, const IntLearner& m2,
                                   const search::Options& opt) {
  require_same_boundary(m1, m2);
  auto cand = row_candidates(m1, m2);
  auto rows = update_row_ids(m1);
  auto f = run_map_search(m1, m2, cand, &rows, /*bijective=*/false, /*surjective=*/false, opt,
                          /*need_filler=*/true);
  if (!f) return std::nullopt;
  auto filler = build_filler(m1, m2, *f);
  return Witness{WitnessKind::diagonal_filler, map_to_finfun(m1, m2, *f), std::move(filler),
                 std::nullopt};
}

std::optional<Witness> two_morphism(const IntLearner& m1, const IntLearner& m2,
                                    const search::Options& opt) {
  require_same_boundary(m1, m2);
  auto cand = row_candidates(m1, m2);
  auto f = run_map_search(m1, m2, cand, nullptr, /*bijective=*/false, /*surjective=*/false, opt,
                          /*need_filler=*/false);
  if (!f) return std::nullopt;
  return Witness{WitnessKind::outer_square, map_to_finfun(m1, m2, *f), std::nullopt, std::nullopt};
}

std::optional<Witness> surj_onestep(const IntLearner& m1, const IntLearner& m2,
                                    const search::Options& opt) {
  require_same_boundary(m1, m2);
  auto cand = row_candidates(m1, m2);
  auto f = run_map_search(m1, m2, cand, nullptr, /*bijective=*/false, /*surjective=*/true, opt,
                          /*need_filler=*/false);
  if (!f) return std::nullopt;
  return Witness{WitnessKind::surjective, map_to_finfun(m1, m2, *f), std::nullopt, std::nullopt};
}

namespace detail {
std::optional<FinFun> ext_filler(const IntLearner& from, const IntLearner& to,
                                 const std::vector<int>& f) {
  return build_filler(from, to, f);
}
}  // namespace detail

std::optional<Witness> int_equiv(const Learner& l1, const Learner& l2,
                                 const search::Options& opt) {
  return int_equiv(to_int(l1), to_int(l2), opt);
}

std::optional<Witness> ext_onestep(const Learner& l1, const Learner& l2,
                                   const search::Options& opt) {
  return ext_onestep(to_int(l1), to_int(l2), opt);
}

bool validate(const Witness& w, const IntLearner& m1_in, const IntLearner& m2_in) {
  const IntLearner& m1 = w.reversed ? m2_in : m1_in;
  const IntLearner& m2 = w.reversed ? m1_in : m2_in;
  if (m1.src != m2.src || m1.dst != m2.dst) return false;
  const FinFun& f = w.map;
  if (f.dom() != m1.param || f.cod() != m2.param) return false;
  const int n1 = m1.param.size(), n2 = m2.param.size();
  const int as = m1.src.fwd.size(), bbs = m1.dst.bwd.size();

  for (int p = 0; p < n1; ++p)
    for (int a = 0; a < as; ++a) {
      if (m2.apply_implement(f(p), a) != m1.apply_implement(p, a)) return false;
      for (int bb = 0; bb < bbs; ++bb)
        if (m2.apply_request(f(p), a, bb) != m1.apply_request(p, a, bb)) return false;
    }

  switch (w.kind) {
    case WitnessKind::bijection: {
      if (!f.is_bijective()) return false;
      for (int p = 0; p < n1; ++p)
        for (int a = 0; a < as; ++a)
          for (int bb = 0; bb < bbs; ++bb)
            if (m2.apply_update(f(p), a, bb) != f(m1.apply_update(p, a, bb))) return false;
      return true;
    }
    case WitnessKind::diagonal_filler: {
      if (!w.filler) return false;
      const FinFun& uh = *w.filler;
      if (uh.dom() != product(product(m2.param, m2.src.fwd), m2.dst.bwd) ||
          uh.cod() != m1.param)
        return false;
      for (int p = 0; p < n1; ++p)
        for (int a = 0; a < as; ++a)
          for (int bb = 0; bb < bbs; ++bb)
            if (uh((f(p) * as + a) * bbs + bb) != m1.apply_update(p, a, bb)) return false;
      for (int v = 0; v < n2; ++v)
        for (int a = 0; a < as; ++a)
          for (int bb = 0; bb < bbs; ++bb)
            if (m2.apply_update(v, a, bb) != f(uh((v * as + a) * bbs + bb))) return false;
      return true;
    }
    case WitnessKind::outer_square:
    case WitnessKind::surjective: {
      if (w.kind == WitnessKind::surjective && !f.is_surjective()) return false;
      for (int p = 0; p < n1; ++p)
        for (int a = 0; a < as; ++a)
          for (int bb = 0; bb < bbs; ++bb)
            if (m2.apply_update(f(p), a, bb) != f(m1.apply_update(p, a, bb))) return false;
      return true;
    }
    case WitnessKind::coend_slide: return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Representative-level slides.

namespace {

void require_same_boundary(const Learner& l1, const Learner& l2) {
  if (l1.src != l2.src || l1.dst != l2.dst)
    throw BoundaryMismatch("equivalence: boundaries differ");
}

// Param slide a -> b along u: l_a = l_b∘(u×A) and r_b = (u×A')∘r_a.
// The map is forced pointwise; free states take the least candidate.
std::optional<FinFun> param_slide(const Learner& a, const Learner& b) {
  if (a.residual != b.residual) return std::nullopt;
  const int n1 = a.param.size(), n2 = b.param.size();
  const int as = a.src.fwd.size(), abs_ = a.src.bwd.size();
  const int qs = a.residual.size(), bbs = a.dst.bwd.size();
  std::vector<int> u(n1, -1);
  for (int q = 0; q < qs; ++q)
    for (int bb = 0; bb < bbs; ++bb) {
      int va = a.backward(q * bbs + bb), vb = b.backward(q * bbs + bb);
      if (va % abs_ != vb % abs_) return std::nullopt;
      int p = va / abs_, target = vb / abs_;
      if (u[p] >= 0 && u[p] != target) return std::nullopt;
      u[p] = target;
    }
  auto l_matches = [&](int p, int v) {
    for (int x = 0; x < as; ++x)
      if (a.forward(p * as + x) != b.forward(v * as + x)) return false;
    return true;
  };
  for (int p = 0; p < n1; ++p) {
    if (u[p] >= 0) {
      if (!l_matches(p, u[p])) return std::nullopt;
    } else {
      for (int v = 0; v < n2; ++v)
        if (l_matches(p, v)) {
          u[p] = v;
          break;
        }
      if (u[p] < 0) return std::nullopt;
    }
  }
  return FinFun(a.param, b.param, std::move(u));
}

// Residual slide a -> b along v: l_b = (v×B)∘l_a and r_a = r_b∘(v×B').
std::optional<FinFun> residual_slide(const Learner& a, const Learner& b) {
  if (a.param != b.param) return std::nullopt;
  const int ps = a.param.size(), as = a.src.fwd.size();
  const int n1 = a.residual.size(), n2 = b.residual.size();
  const int bs = a.dst.fwd.size(), bbs = a.dst.bwd.size();
  std::vector<int> v(n1, -1);
  for (int p = 0; p < ps; ++p)
    for (int x = 0; x < as; ++x) {
      int va = a.forward(p * as + x), vb = b.forward(p * as + x);
      if (va % bs != vb % bs) return std::nullopt;
      int q = va / bs, target = vb / bs;
      if (v[q] >= 0 && v[q] != target) return std::nullopt;
      v[q] = target;
    }
  auto r_matches = [&](int q, int w) {
    for (int bb = 0; bb < bbs; ++bb)
      if (a.backward(q * bbs + bb) != b.backward(w * bbs + bb)) return false;
    return true;
  };
  for (int q = 0; q < n1; ++q) {
    if (v[q] >= 0) {
      if (!r_matches(q, v[q])) return std::nullopt;
    } else {
      for (int w = 0; w < n2; ++w)
        if (r_matches(q, w)) {
          v[q] = w;
          break;
        }
      if (v[q] < 0) return std::nullopt;
    }
  }
  return FinFun(a.residual, b.residual, std::move(v));
}

// Simultaneous bijective relabel: forced propagation with backtracking over
// the param assignment.
struct IsoSearch {
  const Learner& a;
  const Learner& b;
  int np, nq, as, bs, abs_, bbs;
  std::vector<int> u, v;
  std::vector<char> used_u, used_v;

  IsoSearch(const Learner& a_, const Learner& b_)
      : a(a_),
        b(b_),
        np(a_.param.size()),
        nq(a_.residual.size()),
        as(a_.src.fwd.size()),
        bs(a_.dst.fwd.size()),
        abs_(a_.src.bwd.size()),
        bbs(a_.dst.bwd.size()),
        u(np, -1),
        v(nq, -1),
        used_u(np, 0),
        used_v(nq, 0) {}

  struct Trail {
    std::vector<int> us, vs;
  };

  bool set_u(int p, int val, Trail& t);
  bool set_v(int q, int val, Trail& t);

  void undo(const Trail& t) {
    for (int p : t.us) {
      used_u[u[p]] = 0;
      u[p] = -1;
    }
    for (int q : t.vs) {
      used_v[v[q]] = 0;
      v[q] = -1;
    }
  }

  bool search(int p) {
    while (p < np && u[p] >= 0) ++p;
    if (p == np) {
      std::vector<int> free_qs;
      for (int q = 0; q < nq; ++q)
        if (v[q] < 0) free_qs.push_back(q);
      return match_free_residuals(free_qs, 0);
    }
    for (int val = 0; val < np; ++val) {
      if (used_u[val]) continue;
      Trail t;
      if (set_u(p, val, t) && search(p + 1)) return true;
      undo(t);
    }
    return false;
  }

  // residual states never hit by a forward row still need a (backtracked)
  // assignment; this is a small bipartite matching
  bool match_free_residuals(const std::vector<int>& free_qs, size_t k) {
    if (k == free_qs.size()) return true;
    int q = free_qs[k];
    for (int val = 0; val < nq; ++val) {
      if (used_v[val]) continue;
      Trail t;
      if (set_v(q, val, t) && match_free_residuals(free_qs, k + 1)) return true;
      undo(t);
    }
    return false;
  }
};

bool IsoSearch::set_u(int p, int val, Trail& t) {
  if (u[p] >= 0) return u[p] == val;
  if (used_u[val]) return false;
  u[p] = val;
  used_u[val] = 1;
  t.us.push_back(p);
  for (int x = 0; x < as; ++x) {
    int fa = a.forward(p * as + x), fb = b.forward(val * as + x);
    if (fa % bs != fb % bs) return false;
    if (!set_v(fa / bs, fb / bs, t)) return false;
  }
  return true;
}

bool IsoSearch::set_v(int q, int val, Trail& t) {
  if (v[q] >= 0) return v[q] == val;
  if (used_v[val]) return false;
  v[q] = val;
  used_v[val] = 1;
  t.vs.push_back(q);
  for (int bb = 0; bb < bbs; ++bb) {
    int ra = a.backward(q * bbs + bb), rb = b.backward(val * bbs + bb);
    if (ra % abs_ != rb % abs_) return false;
    if (!set_u(ra / abs_, rb / abs_, t)) return false;
  }
  return true;
}

}  // namespace

std::optional<Witness> learner_iso(const Learner& l1, const Learner& l2,
                                   const search::Options& opt) {
  require_same_boundary(l1, l2);
  if (l1.param.size() != l2.param.size() || l1.residual.size() != l2.residual.size())
    return std::nullopt;
  const int np = l1.param.size();
  auto probe = [&](int first) -> std::optional<std::pair<std::vector<int>, std::vector<int>>> {
    IsoSearch s(l1, l2);
    if (np > 0) {
      IsoSearch::Trail t;
      if (!s.set_u(0, first, t)) return std::nullopt;
      if (!s.search(1)) return std::nullopt;
    } else if (!s.search(0)) {
      return std::nullopt;
    }
    return std::make_pair(s.u, s.v);
  };
  std::optional<std::pair<int, std::pair<std::vector<int>, std::vector<int>>>> hit;
  if (np == 0) {
    auto r = probe(0);
    if (r) hit = std::make_pair(0, *r);
  } else {
    hit = search::first_success<std::pair<std::vector<int>, std::vector<int>>>(np, probe, opt);
  }
  if (!hit) return std::nullopt;
  return Witness{WitnessKind::coend_slide, FinFun(l1.param, l2.param, hit->second.first),
                 std::nullopt, FinFun(l1.residual, l2.residual, hit->second.second)};
}

std::optional<Witness> coend_slide(const Learner& l1, const Learner& l2,
                                   const search::Options& opt) {
  require_same_boundary(l1, l2);
  if (auto u = param_slide(l1, l2))
    return Witness{WitnessKind::coend_slide, std::move(*u), std::nullopt,
                   FinFun::identity(l1.residual)};
  if (auto u = param_slide(l2, l1))
    return Witness{WitnessKind::coend_slide, std::move(*u), std::nullopt,
                   FinFun::identity(l2.residual), /*reversed=*/true};
  if (auto v = residual_slide(l1, l2))
    return Witness{WitnessKind::coend_slide, FinFun::identity(l1.param), std::nullopt,
                   std::move(*v)};
  if (auto v = residual_slide(l2, l1))
    return Witness{WitnessKind::coend_slide, FinFun::identity(l2.param), std::nullopt,
                   std::move(*v), /*reversed=*/true};
  return learner_iso(l1, l2, opt);
}

bool validate_slide(const Witness& w, const Learner& l1_in, const Learner& l2_in) {
  if (w.kind != WitnessKind::coend_slide || !w.comap) return false;
  const Learner& l1 = w.reversed ? l2_in : l1_in;
  const Learner& l2 = w.reversed ? l1_in : l2_in;
  if (l1.src != l2.src || l1.dst != l2.dst) return false;
  const FinFun& u = w.map;
  const FinFun& v = *w.comap;
  if (u.dom() != l1.param || u.cod() != l2.param) return false;
  if (v.dom() != l1.residual || v.cod() != l2.residual) return false;

  bool u_id = l1.param == l2.param && u == FinFun::identity(l1.param);
  bool v_id = l1.residual == l2.residual && v == FinFun::identity(l1.residual);
  bool both_bij = u.is_bijective() && v.is_bijective();
  if (!u_id && !v_id && !both_bij) return false;

  const int as = l1.src.fwd.size(), bs = l1.dst.fwd.size();
  const int abs_ = l1.src.bwd.size(), bbs = l1.dst.bwd.size();
  for (int p = 0; p < l1.param.size(); ++p)
    for (int x = 0; x < as; ++x) {
      int lhs = l2.forward(u(p) * as + x);
      int rhs_raw = l1.forward(p * as + x);
      int rhs = v(rhs_raw / bs) * bs + rhs_raw % bs;
      if (lhs != rhs) return false;
    }
  for (int q = 0; q < l1.residual.size(); ++q)
    for (int bb = 0; bb < bbs; ++bb) {
      int lhs = l2.backward(v(q) * bbs + bb);
      int rhs_raw = l1.backward(q * bbs + bb);
      int rhs = u(rhs_raw / abs_) * abs_ + rhs_raw % abs_;
      if (lhs != rhs) return false;
    }
  return true;
}

}  // namespace atemp
