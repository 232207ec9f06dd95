#include <algorithm>
#include <cstring>
#include <deque>
#include <string>
#include <unordered_map>

#include "atemp/equivalence.hpp"

namespace atemp {

namespace {

// ---------------------------------------------------------------------------
// Shared enumeration helpers.

// All set partitions of [0,n) whose blocks stay inside the given classes,
// as restricted-growth strings (block ids by first use). Calls sink(blocks,
// block_count); returns false if the sink aborts.
bool partitions_refining(const std::vector<int>& cls, int n,
                         const std::function<bool(const std::vector<int>&, int)>& sink) {
  std::vector<int> block(n, -1);
  std::vector<int> block_cls;
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) return sink(block, static_cast<int>(block_cls.size()));
    for (int b = 0; b < static_cast<int>(block_cls.size()); ++b) {
      if (block_cls[b] != cls[i]) continue;
      block[i] = b;
      if (!rec(i + 1)) return false;
    }
    block[i] = static_cast<int>(block_cls.size());
    block_cls.push_back(cls[i]);
    if (!rec(i + 1)) return false;
    block_cls.pop_back();
    block[i] = -1;
    return true;
  };
  return rec(0);
}

// Mixed-radix odometer; sink receives the digit vector. Returns false if the
// sink aborts.
bool odometer(const std::vector<int>& radix,
              const std::function<bool(const std::vector<int>&)>& sink) {
  std::vector<int> digits(radix.size(), 0);
  for (int r : radix)
    if (r <= 0) return true;  // empty choice space
  while (true) {
    if (!sink(digits)) return false;
    size_t i = 0;
    for (; i < radix.size(); ++i) {
      if (++digits[i] < radix[i]) break;
      digits[i] = 0;
    }
    if (i == radix.size()) return true;
  }
}

std::string key_of(int n, const std::vector<int>& a, const std::vector<int>& b,
                   const std::vector<int>& c) {
  std::string k;
  k.reserve(4 + a.size() + b.size() + c.size());
  k.push_back(static_cast<char>(n));
  k.push_back('|');
  for (int x : a) k.push_back(static_cast<char>(x + 1));
  k.push_back('|');
  for (int x : b) k.push_back(static_cast<char>(x + 1));
  k.push_back('|');
  for (int x : c) k.push_back(static_cast<char>(x + 1));
  return k;
}

// ---------------------------------------------------------------------------
// ext_equiv: closure of the one-step (f, filler) relation.

// Tables of an IntLearner over a fixed boundary.
struct Tab {
  int n = 0;
  std::vector<int> imp, upd, req;
  bool operator==(const Tab& o) const {
    return n == o.n && imp == o.imp && upd == o.upd && req == o.req;
  }
};

struct ExtCtx {
  Obj src, dst;
  int as, bs, abs_, bbs;

  Tab to_tab(const IntLearner& m) const {
    return Tab{m.param.size(), m.implement.table(), m.update.table(), m.request.table()};
  }

  IntLearner to_learner(const Tab& t) const {
    FinSet p = FinSet::canonical("s", t.n);
    FinSet pa = product(p, src.fwd);
    FinSet pab = product(pa, dst.bwd);
    return IntLearner(src, dst, p, FinFun(pa, dst.fwd, t.imp), FinFun(pab, p, t.upd),
                      FinFun(std::move(pab), src.bwd, t.req));
  }

  Tab relabel(const Tab& t, const std::vector<int>& sigma) const {
    Tab out;
    out.n = t.n;
    out.imp.resize(t.imp.size());
    out.upd.resize(t.upd.size());
    out.req.resize(t.req.size());
    for (int p = 0; p < t.n; ++p)
      for (int a = 0; a < as; ++a) {
        out.imp[sigma[p] * as + a] = t.imp[p * as + a];
        for (int bb = 0; bb < bbs; ++bb) {
          int from = (p * as + a) * bbs + bb;
          int to = (sigma[p] * as + a) * bbs + bb;
          out.upd[to] = sigma[t.upd[from]];
          out.req[to] = t.req[from];
        }
      }
    return out;
  }

  // canonical form = lexicographically least relabeling; sigma_out maps the
  // input labeling to the canonical one
  Tab canon(const Tab& t, std::vector<int>& sigma_out) const {
    std::vector<int> sigma(t.n);
    for (int i = 0; i < t.n; ++i) sigma[i] = i;
    Tab best = t;
    sigma_out = sigma;
    auto less_than = [](const Tab& x, const Tab& y) {
      if (x.imp != y.imp) return x.imp < y.imp;
      if (x.upd != y.upd) return x.upd < y.upd;
      return x.req < y.req;
    };
    while (std::next_permutation(sigma.begin(), sigma.end())) {
      Tab cand = relabel(t, sigma);
      if (less_than(cand, best)) {
        best = cand;
        sigma_out = sigma;
      }
    }
    return best;
  }

  std::string key(const Tab& t) const { return key_of(t.n, t.imp, t.upd, t.req); }

  std::vector<int> full_row_classes(const Tab& t) const {
    std::vector<std::vector<int>> rows(t.n);
    for (int p = 0; p < t.n; ++p) {
      auto& r = rows[p];
      for (int a = 0; a < as; ++a) {
        r.push_back(t.imp[p * as + a]);
        for (int bb = 0; bb < bbs; ++bb) {
          r.push_back(t.upd[(p * as + a) * bbs + bb]);
          r.push_back(t.req[(p * as + a) * bbs + bb]);
        }
      }
    }
    std::vector<int> cls(t.n, -1);
    int next = 0;
    for (int p = 0; p < t.n; ++p) {
      if (cls[p] >= 0) continue;
      cls[p] = next;
      for (int q = p + 1; q < t.n; ++q)
        if (cls[q] < 0 && rows[q] == rows[p]) cls[q] = next;
      ++next;
    }
    return cls;
  }
};

struct RawEdge {
  Tab tab;
  std::vector<int> f;  // to_child: P_parent -> P_child; else P_child -> P_parent
  bool to_child;
};

// Successors m -> m': f factors as (block quotient compatible with full
// rows) followed by an embedding; junk states carry free implement/request
// rows and updates into the image.
bool ext_successors(const ExtCtx& cx, const Tab& t, int bound, std::uint64_t cap,
                    std::vector<RawEdge>& out) {
  auto cls = cx.full_row_classes(t);
  std::uint64_t produced = 0;
  bool ok = partitions_refining(cls, t.n, [&](const std::vector<int>& block, int k) -> bool {
    for (int n2 = k; n2 <= bound; ++n2) {
      int junk = n2 - k;
      if (k == t.n && n2 == t.n) continue;  // the identity step
      // per junk state: implement row, request row, update row (into image)
      std::vector<int> radix;
      for (int j = 0; j < junk; ++j) {
        for (int a = 0; a < cx.as; ++a) radix.push_back(cx.bs);
        for (int i = 0; i < cx.as * cx.bbs; ++i) radix.push_back(cx.abs_);
        for (int i = 0; i < cx.as * cx.bbs; ++i) radix.push_back(k);
      }
      bool cont = odometer(radix, [&](const std::vector<int>& d) -> bool {
        Tab nt;
        nt.n = n2;
        nt.imp.assign(n2 * cx.as, 0);
        nt.upd.assign(n2 * cx.as * cx.bbs, 0);
        nt.req.assign(n2 * cx.as * cx.bbs, 0);
        // image part
        for (int p = 0; p < t.n; ++p) {
          int b = block[p];
          for (int a = 0; a < cx.as; ++a) {
            nt.imp[b * cx.as + a] = t.imp[p * cx.as + a];
            for (int bb = 0; bb < cx.bbs; ++bb) {
              int to = (b * cx.as + a) * cx.bbs + bb;
              int from = (p * cx.as + a) * cx.bbs + bb;
              nt.upd[to] = block[t.upd[from]];
              nt.req[to] = t.req[from];
            }
          }
        }
        // junk part
        size_t di = 0;
        for (int j = 0; j < junk; ++j) {
          int s = k + j;
          for (int a = 0; a < cx.as; ++a) nt.imp[s * cx.as + a] = d[di++];
          for (int a = 0; a < cx.as; ++a)
            for (int bb = 0; bb < cx.bbs; ++bb)
              nt.req[(s * cx.as + a) * cx.bbs + bb] = d[di++];
          for (int a = 0; a < cx.as; ++a)
            for (int bb = 0; bb < cx.bbs; ++bb)
              nt.upd[(s * cx.as + a) * cx.bbs + bb] = d[di++];
        }
        out.push_back(RawEdge{std::move(nt), block, true});
        return ++produced < cap;
      });
      if (!cont) return false;
    }
    return true;
  });
  return ok;
}

// Predecessors z -> m: pick f : P_z -> P_m covering the update image, then
// choose a filler value in the fiber at every reachable point.
bool ext_predecessors(const ExtCtx& cx, const Tab& t, int bound, std::uint64_t cap,
                      std::vector<RawEdge>& out) {
  std::uint64_t produced = 0;
  for (int nz = 1; nz <= bound; ++nz) {
    std::vector<int> f(nz, 0);
    while (true) {
      // fibers
      std::vector<std::vector<int>> fiber(t.n);
      for (int p = 0; p < nz; ++p) fiber[f[p]].push_back(p);
      bool covers = true;
      for (int i = 0; i < t.n * cx.as * cx.bbs && covers; ++i)
        if (fiber[t.upd[i]].empty()) covers = false;
      if (covers) {
        // choice points: filler values at (v in im(f), a, bb)
        std::vector<int> im;
        for (int v = 0; v < t.n; ++v)
          if (!fiber[v].empty()) im.push_back(v);
        std::vector<int> radix;
        radix.reserve(im.size() * cx.as * cx.bbs);
        for (int v : im)
          for (int i = 0; i < cx.as * cx.bbs; ++i)
            radix.push_back(static_cast<int>(fiber[t.upd[v * cx.as * cx.bbs + i]].size()));
        bool cont = odometer(radix, [&](const std::vector<int>& d) -> bool {
          Tab nz_tab;
          nz_tab.n = nz;
          nz_tab.imp.assign(nz * cx.as, 0);
          nz_tab.upd.assign(nz * cx.as * cx.bbs, 0);
          nz_tab.req.assign(nz * cx.as * cx.bbs, 0);
          // filler table on im(f) points
          std::vector<int> pos_of(t.n, -1);
          for (size_t i = 0; i < im.size(); ++i) pos_of[im[i]] = static_cast<int>(i);
          auto filler_at = [&](int v, int i) {
            int di = pos_of[v] * cx.as * cx.bbs + i;
            return fiber[t.upd[v * cx.as * cx.bbs + i]][d[di]];
          };
          for (int p = 0; p < nz; ++p) {
            int v = f[p];
            for (int a = 0; a < cx.as; ++a) {
              nz_tab.imp[p * cx.as + a] = t.imp[v * cx.as + a];
              for (int bb = 0; bb < cx.bbs; ++bb) {
                int i = a * cx.bbs + bb;
                nz_tab.req[(p * cx.as + a) * cx.bbs + bb] =
                    t.req[(v * cx.as + a) * cx.bbs + bb];
                nz_tab.upd[(p * cx.as + a) * cx.bbs + bb] = filler_at(v, i);
              }
            }
          }
          out.push_back(RawEdge{std::move(nz_tab), f, false});
          return ++produced < cap;
        });
        if (!cont) return false;
      }
      // next f
      int i = 0;
      for (; i < nz; ++i) {
        if (++f[i] < t.n) break;
        f[i] = 0;
      }
      if (i == nz) break;
    }
  }
  return true;
}

struct ExtSide {
  std::unordered_map<std::string, int> seen;
  std::vector<Tab> tabs;
  std::vector<int> parent;
  std::vector<std::vector<int>> edge_map;
  std::vector<char> edge_to_child;
  std::deque<int> queue;

  int insert(const std::string& key, Tab tab, int par, std::vector<int> fmap, bool to_child) {
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    int id = static_cast<int>(tabs.size());
    seen.emplace(key, id);
    tabs.push_back(std::move(tab));
    parent.push_back(par);
    edge_map.push_back(std::move(fmap));
    edge_to_child.push_back(to_child ? 1 : 0);
    queue.push_back(id);
    return id;
  }
};

Witness make_ext_witness(const ExtCtx& cx, const Tab& from, const Tab& to,
                         const std::vector<int>& f, bool reversed) {
  IntLearner a = cx.to_learner(from);
  IntLearner b = cx.to_learner(to);
  auto filler = detail::ext_filler(a, b, f);
  if (!filler) throw Error("closure: generated edge lost its filler");
  return Witness{WitnessKind::diagonal_filler, FinFun(a.param, b.param, f), std::move(*filler),
                 std::nullopt, reversed};
}

}  // namespace

Closure<IntLearner> ext_equiv(const IntLearner& m1, const IntLearner& m2, int bound,
                              std::uint64_t node_budget, const search::Options& opt) {
  if (m1.src != m2.src || m1.dst != m2.dst)
    throw BoundaryMismatch("ext_equiv: boundaries differ");
  if (bound < std::max(m1.param.size(), m2.param.size()))
    throw Error("ext_equiv: bound is smaller than a parameter set");

  Closure<IntLearner> res;
  res.verdict = Tri::unknown;

  // chains of length one first
  if (auto w = ext_onestep(m1, m2, opt)) {
    res.verdict = Tri::yes;
    res.nodes = {m1, m2};
    res.links = {*w};
    res.explored = 2;
    return res;
  }
  if (auto w = ext_onestep(m2, m1, opt)) {
    w->reversed = true;
    res.verdict = Tri::yes;
    res.nodes = {m1, m2};
    res.links = {*w};
    res.explored = 2;
    return res;
  }

  ExtCtx cx{m1.src, m1.dst, m1.src.fwd.size(), m1.dst.fwd.size(), m1.src.bwd.size(),
            m1.dst.bwd.size()};

  std::vector<int> sigma1, sigma2;
  Tab root1 = cx.canon(cx.to_tab(m1), sigma1);
  Tab root2 = cx.canon(cx.to_tab(m2), sigma2);
  std::string k1 = cx.key(root1), k2 = cx.key(root2);

  ExtSide side[2];
  side[0].insert(k1, root1, -1, {}, true);
  side[1].insert(k2, root2, -1, {}, true);

  std::uint64_t explored = 2;
  int meet[2] = {-1, -1};
  if (k1 == k2) {
    meet[0] = 0;
    meet[1] = 0;
  }

  std::uint64_t gen_cap = node_budget;
  bool budget_ok = true;

  while (meet[0] < 0) {
    int s;
    if (side[0].queue.empty() || side[1].queue.empty()) break;
    s = side[0].queue.size() <= side[1].queue.size() ? 0 : 1;
    int id = side[s].queue.front();
    side[s].queue.pop_front();

    std::vector<RawEdge> raw;
    Tab cur = side[s].tabs[id];
    if (!ext_successors(cx, cur, bound, gen_cap, raw) ||
        !ext_predecessors(cx, cur, bound, gen_cap, raw)) {
      budget_ok = false;
      break;
    }
    if (explored + raw.size() > node_budget) {
      budget_ok = false;
      break;
    }

    // canonicalize in parallel, insert in order
    std::vector<std::pair<Tab, std::vector<int>>> canon(raw.size());
    auto canon_one = [&](int i, std::vector<char>&) {
      std::vector<int> sigma;
      Tab c = cx.canon(raw[i].tab, sigma);
      canon[i] = {std::move(c), std::move(sigma)};
    };
    search::collect<char>(static_cast<int>(raw.size()), canon_one, opt);

    for (size_t i = 0; i < raw.size() && meet[s] < 0; ++i) {
      auto& [ctab, sigma] = canon[i];
      std::vector<int> fmap;
      if (raw[i].to_child) {
        // f : parent -> child(raw); conjugate into the canonical child
        fmap.resize(raw[i].f.size());
        for (size_t p = 0; p < raw[i].f.size(); ++p) fmap[p] = sigma[raw[i].f[p]];
      } else {
        // f : child(raw) -> parent; precompose with sigma^{-1}
        fmap.resize(raw[i].f.size());
        std::vector<int> inv(sigma.size());
        for (size_t p = 0; p < sigma.size(); ++p) inv[sigma[p]] = static_cast<int>(p);
        for (size_t p = 0; p < raw[i].f.size(); ++p) fmap[p] = raw[i].f[inv[p]];
      }
      std::string k = cx.key(ctab);
      int before = static_cast<int>(side[s].tabs.size());
      int nid = side[s].insert(k, ctab, id, std::move(fmap), raw[i].to_child);
      if (nid == before) ++explored;
      auto other = side[1 - s].seen.find(k);
      if (other != side[1 - s].seen.end()) {
        meet[s] = nid;
        meet[1 - s] = other->second;
      }
    }
  }

  if (meet[0] < 0) {
    res.verdict = budget_ok ? Tri::no_within_bound : Tri::unknown;
    res.explored = explored;
    return res;
  }

  // reconstruct: m1 .. root1 path .. meet .. root2 path reversed .. m2
  auto path_to_root = [&](int s, int id) {
    std::vector<int> ids;
    for (int cur = id; cur >= 0; cur = side[s].parent[cur]) ids.push_back(cur);
    return ids;  // meet .. root
  };
  std::vector<int> pa = path_to_root(0, meet[0]);  // meet .. root1
  std::vector<int> pb = path_to_root(1, meet[1]);  // meet .. root2

  res.verdict = Tri::yes;
  res.explored = explored;
  res.nodes.push_back(m1);
  res.links.push_back(Witness{WitnessKind::bijection,
                              FinFun(m1.param, cx.to_learner(root1).param, sigma1), std::nullopt,
                              std::nullopt, false});
  for (auto it = pa.rbegin(); it != pa.rend(); ++it)
    res.nodes.push_back(cx.to_learner(side[0].tabs[*it]));
  // links along side 0 (root1 .. meet)
  for (auto it = pa.rbegin(); it + 1 != pa.rend(); ++it) {
    int child = *(it + 1);
    bool tc = side[0].edge_to_child[child];
    const Tab& par = side[0].tabs[*it];
    const Tab& ch = side[0].tabs[child];
    res.links.push_back(tc ? make_ext_witness(cx, par, ch, side[0].edge_map[child], false)
                           : make_ext_witness(cx, ch, par, side[0].edge_map[child], true));
  }
  // links along side 1 (meet .. root2)
  for (size_t i = 0; i + 1 < pb.size(); ++i) {
    int child = pb[i];
    int par = pb[i + 1];
    bool tc = side[1].edge_to_child[child];
    const Tab& part = side[1].tabs[par];
    const Tab& cht = side[1].tabs[child];
    // edge witness is parent->child; in chain order the child comes first
    res.links.push_back(tc ? make_ext_witness(cx, part, cht, side[1].edge_map[child], true)
                           : make_ext_witness(cx, cht, part, side[1].edge_map[child], false));
    res.nodes.push_back(cx.to_learner(part));
  }
  // canonical root2 -> m2 by the inverse relabeling
  {
    std::vector<int> inv(sigma2.size());
    for (size_t p = 0; p < sigma2.size(); ++p) inv[sigma2[p]] = static_cast<int>(p);
    res.links.push_back(Witness{WitnessKind::bijection,
                                FinFun(cx.to_learner(root2).param, m2.param, inv), std::nullopt,
                                std::nullopt, false});
    res.nodes.push_back(m2);
  }
  return res;
}

// ---------------------------------------------------------------------------
// coend_equiv: closure of one-step representative slides.

namespace {

struct LTab {
  int np = 0, nq = 0;
  std::vector<int> fwd, bwd;
};

struct CoendCtx {
  Obj src, dst;
  int as, bs, abs_, bbs;

  LTab to_tab(const Learner& m) const {
    return LTab{m.param.size(), m.residual.size(), m.forward.table(), m.backward.table()};
  }

  Learner to_learner(const LTab& t) const {
    FinSet p = FinSet::canonical("p", t.np);
    FinSet q = FinSet::canonical("q", t.nq);
    return Learner(src, dst, p, q,
                   FinFun(product(p, src.fwd), product(q, dst.fwd), t.fwd),
                   FinFun(product(q, dst.bwd), product(p, src.bwd), t.bwd));
  }

  LTab relabel(const LTab& t, const std::vector<int>& sp, const std::vector<int>& sq) const {
    LTab out;
    out.np = t.np;
    out.nq = t.nq;
    out.fwd.resize(t.fwd.size());
    out.bwd.resize(t.bwd.size());
    for (int p = 0; p < t.np; ++p)
      for (int a = 0; a < as; ++a) {
        int v = t.fwd[p * as + a];
        out.fwd[sp[p] * as + a] = sq[v / bs] * bs + v % bs;
      }
    for (int q = 0; q < t.nq; ++q)
      for (int bb = 0; bb < bbs; ++bb) {
        int v = t.bwd[q * bbs + bb];
        out.bwd[sq[q] * bbs + bb] = sp[v / abs_] * abs_ + v % abs_;
      }
    return out;
  }

  LTab canon(const LTab& t, std::vector<int>& sp_out, std::vector<int>& sq_out) const {
    std::vector<int> sp(t.np), sq(t.nq);
    for (int i = 0; i < t.np; ++i) sp[i] = i;
    for (int i = 0; i < t.nq; ++i) sq[i] = i;
    LTab best = t;
    sp_out = sp;
    sq_out = sq;
    std::vector<int> sp_try = sp;
    do {
      std::vector<int> sq_try(t.nq);
      for (int i = 0; i < t.nq; ++i) sq_try[i] = i;
      do {
        LTab cand = relabel(t, sp_try, sq_try);
        if (cand.fwd < best.fwd || (cand.fwd == best.fwd && cand.bwd < best.bwd)) {
          best = cand;
          sp_out = sp_try;
          sq_out = sq_try;
        }
      } while (std::next_permutation(sq_try.begin(), sq_try.end()));
    } while (std::next_permutation(sp_try.begin(), sp_try.end()));
    return best;
  }

  std::string key(const LTab& t) const {
    std::vector<int> dims{t.np, t.nq};
    return key_of(t.np * 64 + t.nq, t.fwd, t.bwd, dims);
  }
};

struct SlideEdge {
  LTab tab;
  std::vector<int> map;  // u (param) or v (residual)
  bool on_param;
  bool to_child;
};

// Param-slide successors: u-fibers refine forward rows; junk forward rows
// free; backward fully transported.
bool coend_p_successors(const CoendCtx& cx, const LTab& t, int bound, std::uint64_t cap,
                        std::vector<SlideEdge>& out, std::uint64_t& produced) {
  std::vector<std::vector<int>> rows(t.np);
  for (int p = 0; p < t.np; ++p)
    for (int a = 0; a < cx.as; ++a) rows[p].push_back(t.fwd[p * cx.as + a]);
  std::vector<int> cls(t.np, -1);
  int next = 0;
  for (int p = 0; p < t.np; ++p) {
    if (cls[p] >= 0) continue;
    cls[p] = next;
    for (int q = p + 1; q < t.np; ++q)
      if (cls[q] < 0 && rows[q] == rows[p]) cls[q] = next;
    ++next;
  }
  return partitions_refining(cls, t.np, [&](const std::vector<int>& block, int k) -> bool {
    for (int n2 = k; n2 <= bound; ++n2) {
      int junk = n2 - k;
      if (k == t.np && n2 == t.np) continue;
      std::vector<int> radix;
      for (int j = 0; j < junk; ++j)
        for (int a = 0; a < cx.as; ++a) radix.push_back(t.nq * cx.bs);
      bool cont = odometer(radix, [&](const std::vector<int>& d) -> bool {
        LTab nt;
        nt.np = n2;
        nt.nq = t.nq;
        nt.fwd.assign(n2 * cx.as, 0);
        nt.bwd.resize(t.bwd.size());
        for (int p = 0; p < t.np; ++p)
          for (int a = 0; a < cx.as; ++a) nt.fwd[block[p] * cx.as + a] = t.fwd[p * cx.as + a];
        size_t di = 0;
        for (int j = 0; j < junk; ++j)
          for (int a = 0; a < cx.as; ++a) nt.fwd[(k + j) * cx.as + a] = d[di++];
        for (int q = 0; q < t.nq; ++q)
          for (int bb = 0; bb < cx.bbs; ++bb) {
            int v = t.bwd[q * cx.bbs + bb];
            nt.bwd[q * cx.bbs + bb] = block[v / cx.abs_] * cx.abs_ + v % cx.abs_;
          }
        out.push_back(SlideEdge{std::move(nt), block, true, true});
        return ++produced < cap;
      });
      if (!cont) return false;
    }
    return true;
  });
}

// Param-slide predecessors: forward transported, backward param part lifted
// through the chosen fibers.
bool coend_p_predecessors(const CoendCtx& cx, const LTab& t, int bound, std::uint64_t cap,
                          std::vector<SlideEdge>& out, std::uint64_t& produced) {
  for (int nz = 1; nz <= bound; ++nz) {
    std::vector<int> u(nz, 0);
    while (true) {
      std::vector<std::vector<int>> fiber(t.np);
      for (int p = 0; p < nz; ++p) fiber[u[p]].push_back(p);
      bool covers = true;
      for (int i = 0; i < t.nq * cx.bbs && covers; ++i)
        if (fiber[t.bwd[i] / cx.abs_].empty()) covers = false;
      if (covers) {
        std::vector<int> radix;
        radix.reserve(t.nq * cx.bbs);
        for (int i = 0; i < t.nq * cx.bbs; ++i)
          radix.push_back(static_cast<int>(fiber[t.bwd[i] / cx.abs_].size()));
        bool cont = odometer(radix, [&](const std::vector<int>& d) -> bool {
          LTab nt;
          nt.np = nz;
          nt.nq = t.nq;
          nt.fwd.assign(nz * cx.as, 0);
          nt.bwd.resize(t.bwd.size());
          for (int p = 0; p < nz; ++p)
            for (int a = 0; a < cx.as; ++a) nt.fwd[p * cx.as + a] = t.fwd[u[p] * cx.as + a];
          for (int i = 0; i < t.nq * cx.bbs; ++i) {
            int v = t.bwd[i];
            nt.bwd[i] = fiber[v / cx.abs_][d[i]] * cx.abs_ + v % cx.abs_;
          }
          out.push_back(SlideEdge{std::move(nt), u, true, false});
          return ++produced < cap;
        });
        if (!cont) return false;
      }
      int i = 0;
      for (; i < nz; ++i) {
        if (++u[i] < t.np) break;
        u[i] = 0;
      }
      if (i == nz) break;
    }
  }
  return true;
}

// Residual slides, mirrored.
bool coend_q_successors(const CoendCtx& cx, const LTab& t, int bound, std::uint64_t cap,
                        std::vector<SlideEdge>& out, std::uint64_t& produced) {
  std::vector<std::vector<int>> rows(t.nq);
  for (int q = 0; q < t.nq; ++q)
    for (int bb = 0; bb < cx.bbs; ++bb) rows[q].push_back(t.bwd[q * cx.bbs + bb]);
  std::vector<int> cls(t.nq, -1);
  int next = 0;
  for (int q = 0; q < t.nq; ++q) {
    if (cls[q] >= 0) continue;
    cls[q] = next;
    for (int w = q + 1; w < t.nq; ++w)
      if (cls[w] < 0 && rows[w] == rows[q]) cls[w] = next;
    ++next;
  }
  return partitions_refining(cls, t.nq, [&](const std::vector<int>& block, int k) -> bool {
    for (int n2 = k; n2 <= bound; ++n2) {
      int junk = n2 - k;
      if (k == t.nq && n2 == t.nq) continue;
      std::vector<int> radix;
      for (int j = 0; j < junk; ++j)
        for (int bb = 0; bb < cx.bbs; ++bb) radix.push_back(t.np * cx.abs_);
      bool cont = odometer(radix, [&](const std::vector<int>& d) -> bool {
        LTab nt;
        nt.np = t.np;
        nt.nq = n2;
        nt.fwd.resize(t.fwd.size());
        nt.bwd.assign(n2 * cx.bbs, 0);
        for (int q = 0; q < t.nq; ++q)
          for (int bb = 0; bb < cx.bbs; ++bb) nt.bwd[block[q] * cx.bbs + bb] = t.bwd[q * cx.bbs + bb];
        size_t di = 0;
        for (int j = 0; j < junk; ++j)
          for (int bb = 0; bb < cx.bbs; ++bb) nt.bwd[(k + j) * cx.bbs + bb] = d[di++];
        for (int i = 0; i < t.np * cx.as; ++i) {
          int v = t.fwd[i];
          nt.fwd[i] = block[v / cx.bs] * cx.bs + v % cx.bs;
        }
        out.push_back(SlideEdge{std::move(nt), block, false, true});
        return ++produced < cap;
      });
      if (!cont) return false;
    }
    return true;
  });
}

bool coend_q_predecessors(const CoendCtx& cx, const LTab& t, int bound, std::uint64_t cap,
                          std::vector<SlideEdge>& out, std::uint64_t& produced) {
  for (int nz = 1; nz <= bound; ++nz) {
    std::vector<int> v(nz, 0);
    while (true) {
      std::vector<std::vector<int>> fiber(t.nq);
      for (int q = 0; q < nz; ++q) fiber[v[q]].push_back(q);
      bool covers = true;
      for (int i = 0; i < t.np * cx.as && covers; ++i)
        if (fiber[t.fwd[i] / cx.bs].empty()) covers = false;
      if (covers) {
        std::vector<int> radix;
        radix.reserve(t.np * cx.as);
        for (int i = 0; i < t.np * cx.as; ++i)
          radix.push_back(static_cast<int>(fiber[t.fwd[i] / cx.bs].size()));
        bool cont = odometer(radix, [&](const std::vector<int>& d) -> bool {
          LTab nt;
          nt.np = t.np;
          nt.nq = nz;
          nt.fwd.resize(t.fwd.size());
          nt.bwd.assign(nz * cx.bbs, 0);
          for (int i = 0; i < t.np * cx.as; ++i) {
            int w = t.fwd[i];
            nt.fwd[i] = fiber[w / cx.bs][d[i]] * cx.bs + w % cx.bs;
          }
          for (int q = 0; q < nz; ++q)
            for (int bb = 0; bb < cx.bbs; ++bb) nt.bwd[q * cx.bbs + bb] = t.bwd[v[q] * cx.bbs + bb];
          out.push_back(SlideEdge{std::move(nt), v, false, false});
          return ++produced < cap;
        });
        if (!cont) return false;
      }
      int i = 0;
      for (; i < nz; ++i) {
        if (++v[i] < t.nq) break;
        v[i] = 0;
      }
      if (i == nz) break;
    }
  }
  return true;
}

struct CoendSide {
  std::unordered_map<std::string, int> seen;
  std::vector<LTab> tabs;
  std::vector<int> parent;
  std::vector<std::vector<int>> edge_map;
  std::vector<char> edge_on_param;
  std::vector<char> edge_to_child;
  std::deque<int> queue;
};

Witness make_slide_witness(const CoendCtx& cx, const LTab& from, const LTab& to,
                           const std::vector<int>& map, bool on_param, bool reversed) {
  Learner a = cx.to_learner(from);
  Learner b = cx.to_learner(to);
  if (on_param)
    return Witness{WitnessKind::coend_slide, FinFun(a.param, b.param, map), std::nullopt,
                   FinFun::identity(a.residual), reversed};
  return Witness{WitnessKind::coend_slide, FinFun::identity(a.param), std::nullopt,
                 FinFun(a.residual, b.residual, map), reversed};
}

}  // namespace

Closure<Learner> coend_equiv(const Learner& m1, const Learner& m2, int bound,
                             std::uint64_t node_budget, const search::Options& opt) {
  if (m1.src != m2.src || m1.dst != m2.dst)
    throw BoundaryMismatch("coend_equiv: boundaries differ");
  if (bound < std::max({m1.param.size(), m2.param.size(), m1.residual.size(),
                        m2.residual.size()}))
    throw Error("coend_equiv: bound is smaller than a hidden set");

  Closure<Learner> res;
  res.verdict = Tri::unknown;
  if (auto w = coend_slide(m1, m2, opt)) {
    res.verdict = Tri::yes;
    res.nodes = {m1, m2};
    res.links = {*w};
    res.explored = 2;
    return res;
  }

  CoendCtx cx{m1.src, m1.dst, m1.src.fwd.size(), m1.dst.fwd.size(), m1.src.bwd.size(),
              m1.dst.bwd.size()};
  std::vector<int> sp1, sq1, sp2, sq2;
  LTab root1 = cx.canon(cx.to_tab(m1), sp1, sq1);
  LTab root2 = cx.canon(cx.to_tab(m2), sp2, sq2);
  std::string k1 = cx.key(root1), k2 = cx.key(root2);

  CoendSide side[2];
  auto insert = [&](int s, const std::string& key, LTab tab, int par, std::vector<int> map,
                    bool on_param, bool to_child) {
    auto it = side[s].seen.find(key);
    if (it != side[s].seen.end()) return std::make_pair(it->second, false);
    int id = static_cast<int>(side[s].tabs.size());
    side[s].seen.emplace(key, id);
    side[s].tabs.push_back(std::move(tab));
    side[s].parent.push_back(par);
    side[s].edge_map.push_back(std::move(map));
    side[s].edge_on_param.push_back(on_param ? 1 : 0);
    side[s].edge_to_child.push_back(to_child ? 1 : 0);
    side[s].queue.push_back(id);
    return std::make_pair(id, true);
  };
  insert(0, k1, root1, -1, {}, true, true);
  insert(1, k2, root2, -1, {}, true, true);

  std::uint64_t explored = 2;
  int meet[2] = {-1, -1};
  if (k1 == k2) meet[0] = meet[1] = 0;
  bool budget_ok = true;

  while (meet[0] < 0) {
    if (side[0].queue.empty() || side[1].queue.empty()) break;
    int s = side[0].queue.size() <= side[1].queue.size() ? 0 : 1;
    int id = side[s].queue.front();
    side[s].queue.pop_front();

    std::vector<SlideEdge> raw;
    std::uint64_t produced = 0;
    LTab cur = side[s].tabs[id];
    if (!coend_p_successors(cx, cur, bound, node_budget, raw, produced) ||
        !coend_p_predecessors(cx, cur, bound, node_budget, raw, produced) ||
        !coend_q_successors(cx, cur, bound, node_budget, raw, produced) ||
        !coend_q_predecessors(cx, cur, bound, node_budget, raw, produced) ||
        explored + raw.size() > node_budget) {
      budget_ok = false;
      break;
    }

    std::vector<std::pair<LTab, std::pair<std::vector<int>, std::vector<int>>>> canon(raw.size());
    auto canon_one = [&](int i, std::vector<char>&) {
      std::vector<int> sp, sq;
      LTab c = cx.canon(raw[i].tab, sp, sq);
      canon[i] = {std::move(c), {std::move(sp), std::move(sq)}};
    };
    search::collect<char>(static_cast<int>(raw.size()), canon_one, opt);

    for (size_t i = 0; i < raw.size() && meet[s] < 0; ++i) {
      auto& [ctab, sigmas] = canon[i];
      const std::vector<int>& sp = sigmas.first;
      const std::vector<int>& sq = sigmas.second;
      const std::vector<int>& relevant = raw[i].on_param ? sp : sq;
      std::vector<int> map;
      if (raw[i].to_child) {
        map.resize(raw[i].map.size());
        for (size_t p = 0; p < raw[i].map.size(); ++p) map[p] = relevant[raw[i].map[p]];
      } else {
        std::vector<int> inv(relevant.size());
        for (size_t p = 0; p < relevant.size(); ++p) inv[relevant[p]] = static_cast<int>(p);
        map.resize(raw[i].map.size());
        for (size_t p = 0; p < raw[i].map.size(); ++p) map[p] = raw[i].map[inv[p]];
      }
      std::string k = cx.key(ctab);
      auto [nid, fresh] = insert(s, k, ctab, id, std::move(map), raw[i].on_param,
                                 raw[i].to_child);
      if (fresh) ++explored;
      auto other = side[1 - s].seen.find(k);
      if (other != side[1 - s].seen.end()) {
        meet[s] = nid;
        meet[1 - s] = other->second;
      }
    }
  }

  if (meet[0] < 0) {
    res.verdict = budget_ok ? Tri::no_within_bound : Tri::unknown;
    res.explored = explored;
    return res;
  }

  auto path_to_root = [&](int s, int id) {
    std::vector<int> ids;
    for (int cur = id; cur >= 0; cur = side[s].parent[cur]) ids.push_back(cur);
    return ids;
  };
  std::vector<int> pa = path_to_root(0, meet[0]);
  std::vector<int> pb = path_to_root(1, meet[1]);

  res.verdict = Tri::yes;
  res.explored = explored;
  res.nodes.push_back(m1);
  res.links.push_back(Witness{WitnessKind::coend_slide,
                              FinFun(m1.param, cx.to_learner(root1).param, sp1), std::nullopt,
                              FinFun(m1.residual, cx.to_learner(root1).residual, sq1), false});
  for (auto it = pa.rbegin(); it != pa.rend(); ++it)
    res.nodes.push_back(cx.to_learner(side[0].tabs[*it]));
  for (auto it = pa.rbegin(); it + 1 != pa.rend(); ++it) {
    int child = *(it + 1);
    bool tc = side[0].edge_to_child[child];
    const LTab& par = side[0].tabs[*it];
    const LTab& ch = side[0].tabs[child];
    res.links.push_back(
        tc ? make_slide_witness(cx, par, ch, side[0].edge_map[child], side[0].edge_on_param[child],
                                false)
           : make_slide_witness(cx, ch, par, side[0].edge_map[child], side[0].edge_on_param[child],
                                true));
  }
  for (size_t i = 0; i + 1 < pb.size(); ++i) {
    int child = pb[i];
    int par = pb[i + 1];
    bool tc = side[1].edge_to_child[child];
    const LTab& part = side[1].tabs[par];
    const LTab& cht = side[1].tabs[child];
    res.links.push_back(
        tc ? make_slide_witness(cx, part, cht, side[1].edge_map[child],
                                side[1].edge_on_param[child], true)
           : make_slide_witness(cx, cht, part, side[1].edge_map[child],
                                side[1].edge_on_param[child], false));
    res.nodes.push_back(cx.to_learner(part));
  }
  {
    std::vector<int> invp(sp2.size()), invq(sq2.size());
    for (size_t p = 0; p < sp2.size(); ++p) invp[sp2[p]] = static_cast<int>(p);
    for (size_t q = 0; q < sq2.size(); ++q) invq[sq2[q]] = static_cast<int>(q);
    res.links.push_back(Witness{WitnessKind::coend_slide,
                                FinFun(cx.to_learner(root2).param, m2.param, invp), std::nullopt,
                                FinFun(cx.to_learner(root2).residual, m2.residual, invq), false});
    res.nodes.push_back(m2);
  }
  return res;
}

}  // namespace atemp
