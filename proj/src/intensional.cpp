#include "atemp/intensional.hpp"

namespace atemp {

IntLearner::IntLearner(Obj src_, Obj dst_, FinSet param_, FinFun implement_, FinFun update_,
                       FinFun request_)
    : src(std::move(src_)),
      dst(std::move(dst_)),
      param(std::move(param_)),
      implement(std::move(implement_)),
      update(std::move(update_)),
      request(std::move(request_)) {
  FinSet pa = product(param, src.fwd);
  FinSet pab = product(pa, dst.bwd);
  if (implement.dom() != pa || implement.cod() != dst.fwd)
    throw BoundaryMismatch("IntLearner: implement boundary mismatch");
  if (update.dom() != pab || update.cod() != param)
    throw BoundaryMismatch("IntLearner: update boundary mismatch");
  if (request.dom() != pab || request.cod() != src.bwd)
    throw BoundaryMismatch("IntLearner: request boundary mismatch");
}

int IntLearner::apply_implement(int p, int a) const {
  return implement(p * src.fwd.size() + a);
}

int IntLearner::apply_update(int p, int a, int bb) const {
  return update((p * src.fwd.size() + a) * dst.bwd.size() + bb);
}

int IntLearner::apply_request(int p, int a, int bb) const {
  return request((p * src.fwd.size() + a) * dst.bwd.size() + bb);
}

Learner to_coend(const IntLearner& m) {
  const FinSet& p = m.param;
  const FinSet& a = m.src.fwd;
  const FinSet& bb = m.dst.bwd;
  FinSet q = product(p, a);

  FinSet fwd_cod = product(q, m.dst.fwd);
  std::vector<int> fwd_table(q.size());
  for (int pa = 0; pa < q.size(); ++pa)
    fwd_table[pa] = pa * m.dst.fwd.size() + m.implement(pa);

  FinSet bwd_dom = product(q, bb);
  FinSet bwd_cod = product(p, m.src.bwd);
  std::vector<int> bwd_table(bwd_dom.size());
  for (int i = 0; i < bwd_dom.size(); ++i)
    bwd_table[i] = m.update(i) * m.src.bwd.size() + m.request(i);

  return Learner(m.src, m.dst, p, q, FinFun(q /* == product(p,a) */, std::move(fwd_cod), std::move(fwd_table)),
                 FinFun(std::move(bwd_dom), std::move(bwd_cod), std::move(bwd_table)));
}

IntLearner to_int(const Learner& m) {
  const FinSet& p = m.param;
  const FinSet& a = m.src.fwd;
  const FinSet& bb = m.dst.bwd;
  const int bs = m.dst.fwd.size();
  const int abs_ = m.src.bwd.size();

  FinSet pa = product(p, a);
  FinSet pab = product(pa, bb);
  std::vector<int> imp(pa.size()), upd(pab.size()), req(pab.size());
  for (int ip = 0; ip < p.size(); ++ip)
    for (int ia = 0; ia < a.size(); ++ia) {
      int out = m.forward(ip * a.size() + ia);
      int q = out / bs, b = out % bs;
      imp[ip * a.size() + ia] = b;
      for (int ibb = 0; ibb < bb.size(); ++ibb) {
        int back = m.backward(q * bb.size() + ibb);
        int idx = (ip * a.size() + ia) * bb.size() + ibb;
        upd[idx] = back / abs_;
        req[idx] = back % abs_;
      }
    }
  return IntLearner(m.src, m.dst, p, FinFun(pa, m.dst.fwd, std::move(imp)),
                    FinFun(pab, p, std::move(upd)), FinFun(std::move(pab), m.src.bwd, std::move(req)));
}

IntLearner dual_int(const IntLearner& m) {
  const FinSet& p = m.param;
  const FinSet& a = m.src.fwd;
  const FinSet& bb = m.dst.bwd;
  FinSet pstar = product(p, a);
  Obj src{m.dst.bwd, m.dst.fwd};
  Obj dst{m.src.bwd, m.src.fwd};

  // implement* = request, literally the same table.
  FinFun implement = m.request;

  FinSet dom = product(product(pstar, bb), a);
  const int as = a.size(), bbs = bb.size();
  std::vector<int> upd(dom.size()), req(dom.size());
  for (int ipa = 0; ipa < pstar.size(); ++ipa)
    for (int ibb = 0; ibb < bbs; ++ibb)
      for (int ia = 0; ia < as; ++ia) {
        int idx = (ipa * bbs + ibb) * as + ia;
        int next = m.update(ipa * bbs + ibb);
        upd[idx] = next * as + ia;
        req[idx] = m.implement(next * as + ia);
      }
  return IntLearner(std::move(src), std::move(dst), pstar, std::move(implement),
                    FinFun(dom, pstar, std::move(upd)),
                    FinFun(std::move(dom), m.dst.fwd, std::move(req)));
}

IntLearner double_dual_int(const IntLearner& m) { return dual_int(dual_int(m)); }

IntLearner delayed_identity(const FinSet& a) {
  const FinSet& i = FinSet::unit();
  Obj boundary{a, i};
  FinSet pa = product(a, a);
  FinSet pab = product(pa, i);
  std::vector<int> imp(pa.size()), upd(pab.size()), req(pab.size(), 0);
  for (int p = 0; p < a.size(); ++p)
    for (int x = 0; x < a.size(); ++x) {
      imp[p * a.size() + x] = p;
      upd[p * a.size() + x] = x;
    }
  return IntLearner(boundary, boundary, a, FinFun(pa, a, std::move(imp)),
                    FinFun(pab, a, std::move(upd)), FinFun(std::move(pab), i, std::move(req)));
}

IntLearner identity_int(const FinSet& a, const FinSet& a_back) {
  const FinSet& i = FinSet::unit();
  Obj boundary{a, a_back};
  FinSet pa = product(i, a);
  FinSet pab = product(pa, a_back);
  std::vector<int> imp(pa.size()), upd(pab.size(), 0), req(pab.size());
  for (int x = 0; x < a.size(); ++x) imp[x] = x;
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a_back.size(); ++y) req[x * a_back.size() + y] = y;
  return IntLearner(boundary, boundary, i, FinFun(pa, a, std::move(imp)),
                    FinFun(pab, i, std::move(upd)), FinFun(std::move(pab), a_back, std::move(req)));
}

std::vector<StreamStep> run_stream(const IntLearner& m, int p0,
                                   const std::vector<std::pair<int, int>>& data) {
  std::vector<StreamStep> out;
  out.reserve(data.size());
  int p = p0;
  for (auto [a, bb] : data) {
    int y = m.apply_implement(p, a);
    p = m.apply_update(p, a, bb);
    out.push_back(StreamStep{y, p});
  }
  return out;
}

}  // namespace atemp
