#include "atemp/fin.hpp"

#include <algorithm>

namespace atemp {

FinSet::FinSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  pos_.reserve(labels_.size());
  for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
    auto [it, fresh] = pos_.emplace(labels_[i], i);
    (void)it;
    if (!fresh) throw Error("FinSet: duplicate label '" + labels_[i] + "'");
  }
}

const FinSet& FinSet::unit() {
  static const FinSet i(std::vector<std::string>{"*"});
  return i;
}

FinSet FinSet::canonical(std::string_view stem, int n) {
  if (n < 0) throw Error("FinSet::canonical: negative size");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back(std::string(stem) + std::to_string(i));
  return FinSet(std::move(labels));
}

int FinSet::find(const std::string& label) const {
  auto it = pos_.find(label);
  return it == pos_.end() ? -1 : it->second;
}

int FinSet::index(const std::string& label) const {
  int i = find(label);
  if (i < 0) throw Error("FinSet: no element '" + label + "'");
  return i;
}

std::string pair_label(const std::string& x, const std::string& y) {
  return "(" + x + "," + y + ")";
}

FinSet product(const FinSet& x, const FinSet& y) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(x.size()) * y.size());
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j)
      labels.push_back(pair_label(x.label(i), y.label(j)));
  return FinSet(std::move(labels));
}

FinFun::FinFun(FinSet dom, FinSet cod, std::vector<int> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != dom_.size())
    throw Error("FinFun: table size does not match domain");
  for (int v : table_)
    if (v < 0 || v >= cod_.size())
      throw Error("FinFun: image index out of codomain range");
}

FinFun FinFun::identity(const FinSet& x) {
  std::vector<int> t(x.size());
  for (int i = 0; i < x.size(); ++i) t[i] = i;
  return FinFun(x, x, std::move(t));
}

FinFun FinFun::constant(const FinSet& dom, const FinSet& cod, int target) {
  if (target < 0 || target >= cod.size()) throw Error("FinFun::constant: bad target");
  return FinFun(dom, cod, std::vector<int>(dom.size(), target));
}

FinFun FinFun::from_labels(FinSet dom, FinSet cod,
                           const std::unordered_map<std::string, std::string>& map) {
  std::vector<int> t(dom.size(), -1);
  for (const auto& [k, v] : map) {
    int i = dom.find(k);
    if (i < 0) throw Error("FinFun::from_labels: '" + k + "' not in domain");
    t[i] = cod.index(v);
  }
  for (int i = 0; i < dom.size(); ++i)
    if (t[i] < 0) throw Error("FinFun::from_labels: no image for '" + dom.label(i) + "'");
  return FinFun(std::move(dom), std::move(cod), std::move(t));
}

const std::string& FinFun::apply_label(const std::string& x) const {
  return cod_.label(table_.at(dom_.index(x)));
}

bool FinFun::is_injective() const {
  std::vector<char> seen(cod_.size(), 0);
  for (int v : table_) {
    if (seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

bool FinFun::is_surjective() const {
  std::vector<char> seen(cod_.size(), 0);
  for (int v : table_) seen[v] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

FinFun FinFun::then(const FinFun& g) const {
  if (cod_ != g.dom_)
    throw BoundaryMismatch("FinFun::then: codomain does not match next domain");
  std::vector<int> t(table_.size());
  for (size_t i = 0; i < table_.size(); ++i) t[i] = g.table_[table_[i]];
  return FinFun(dom_, g.cod_, std::move(t));
}

FinFun FinFun::inverse() const {
  if (dom_.size() != cod_.size() || !is_injective())
    throw Error("FinFun::inverse: not a bijection");
  std::vector<int> t(cod_.size());
  for (int i = 0; i < dom_.size(); ++i) t[table_[i]] = i;
  return FinFun(cod_, dom_, std::move(t));
}

FinFun compose_fun(const FinFun& f, const FinFun& g) { return f.then(g); }

FinFun id_fun(const FinSet& x) { return FinFun::identity(x); }

FinFun fun_tensor(const FinFun& f, const FinFun& g) {
  FinSet dom = product(f.dom(), g.dom());
  FinSet cod = product(f.cod(), g.cod());
  const int gn = g.dom().size(), gc = g.cod().size();
  std::vector<int> t(dom.size());
  for (int i = 0; i < f.dom().size(); ++i)
    for (int j = 0; j < gn; ++j) t[i * gn + j] = f(i) * gc + g(j);
  return FinFun(std::move(dom), std::move(cod), std::move(t));
}

FinFun symmetry(const FinSet& x, const FinSet& y) {
  FinSet dom = product(x, y);
  FinSet cod = product(y, x);
  std::vector<int> t(dom.size());
  for (int i = 0; i < x.size(); ++i)
    for (int j = 0; j < y.size(); ++j) t[i * y.size() + j] = j * x.size() + i;
  return FinFun(std::move(dom), std::move(cod), std::move(t));
}

namespace {
// All unit and associativity maps are the identity on flat indices; only the
// labels change.
FinFun relabel_identity(FinSet dom, FinSet cod) {
  if (dom.size() != cod.size()) throw Error("relabel: size mismatch");
  std::vector<int> t(dom.size());
  for (int i = 0; i < dom.size(); ++i) t[i] = i;
  return FinFun(std::move(dom), std::move(cod), std::move(t));
}
}  // namespace

FinFun left_unitor(const FinSet& a) { return relabel_identity(product(FinSet::unit(), a), a); }
FinFun left_unitor_inv(const FinSet& a) { return relabel_identity(a, product(FinSet::unit(), a)); }
FinFun right_unitor(const FinSet& a) { return relabel_identity(product(a, FinSet::unit()), a); }
FinFun right_unitor_inv(const FinSet& a) { return relabel_identity(a, product(a, FinSet::unit())); }

FinFun assoc_right(const FinSet& x, const FinSet& y, const FinSet& z) {
  return relabel_identity(product(product(x, y), z), product(x, product(y, z)));
}

FinFun assoc_left(const FinSet& x, const FinSet& y, const FinSet& z) {
  return relabel_identity(product(x, product(y, z)), product(product(x, y), z));
}

FinRel::FinRel(FinSet dom, FinSet cod, std::vector<std::pair<int, int>> pairs)
    : dom_(std::move(dom)), cod_(std::move(cod)), pairs_(std::move(pairs)) {
  for (auto [i, j] : pairs_)
    if (i < 0 || i >= dom_.size() || j < 0 || j >= cod_.size())
      throw Error("FinRel: pair out of range");
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

FinRel FinRel::identity(const FinSet& x) {
  std::vector<std::pair<int, int>> p;
  p.reserve(x.size());
  for (int i = 0; i < x.size(); ++i) p.emplace_back(i, i);
  return FinRel(x, x, std::move(p));
}

FinRel FinRel::empty(const FinSet& dom, const FinSet& cod) { return FinRel(dom, cod, {}); }

FinRel FinRel::full(const FinSet& dom, const FinSet& cod) {
  std::vector<std::pair<int, int>> p;
  p.reserve(static_cast<size_t>(dom.size()) * cod.size());
  for (int i = 0; i < dom.size(); ++i)
    for (int j = 0; j < cod.size(); ++j) p.emplace_back(i, j);
  return FinRel(dom, cod, std::move(p));
}

bool FinRel::contains(int i, int j) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(i, j));
}

bool FinRel::contains_labels(const std::string& x, const std::string& y) const {
  int i = dom_.find(x), j = cod_.find(y);
  return i >= 0 && j >= 0 && contains(i, j);
}

std::vector<std::pair<std::string, std::string>> FinRel::sorted_label_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(pairs_.size());
  for (auto [i, j] : pairs_) out.emplace_back(dom_.label(i), cod_.label(j));
  std::sort(out.begin(), out.end());
  return out;
}

FinRel graph_rel(const FinFun& f) {
  std::vector<std::pair<int, int>> p;
  p.reserve(f.dom().size());
  for (int i = 0; i < f.dom().size(); ++i) p.emplace_back(i, f(i));
  return FinRel(f.dom(), f.cod(), std::move(p));
}

FinRel rel_compose(const FinRel& r, const FinRel& s) {
  if (r.cod() != s.dom())
    throw BoundaryMismatch("rel_compose: middle sets do not match");
  std::vector<std::vector<int>> out_of(r.cod().size());
  for (auto [k, j] : s.pairs()) out_of[k].push_back(j);
  std::vector<std::pair<int, int>> p;
  for (auto [i, k] : r.pairs())
    for (int j : out_of[k]) p.emplace_back(i, j);
  return FinRel(r.dom(), s.cod(), std::move(p));
}

FinRel rel_tensor(const FinRel& r, const FinRel& s) {
  FinSet dom = product(r.dom(), s.dom());
  FinSet cod = product(r.cod(), s.cod());
  const int sd = s.dom().size(), sc = s.cod().size();
  std::vector<std::pair<int, int>> p;
  p.reserve(r.pairs().size() * s.pairs().size());
  for (auto [i, j] : r.pairs())
    for (auto [k, l] : s.pairs()) p.emplace_back(i * sd + k, j * sc + l);
  return FinRel(std::move(dom), std::move(cod), std::move(p));
}

FinRel rel_converse(const FinRel& r) {
  std::vector<std::pair<int, int>> p;
  p.reserve(r.pairs().size());
  for (auto [i, j] : r.pairs()) p.emplace_back(j, i);
  return FinRel(r.cod(), r.dom(), std::move(p));
}

FinRel rel_cup(const FinSet& x) {
  std::vector<std::pair<int, int>> p;
  p.reserve(x.size());
  for (int i = 0; i < x.size(); ++i) p.emplace_back(0, i * x.size() + i);
  return FinRel(FinSet::unit(), product(x, x), std::move(p));
}

FinRel rel_cap(const FinSet& x) {
  std::vector<std::pair<int, int>> p;
  p.reserve(x.size());
  for (int i = 0; i < x.size(); ++i) p.emplace_back(i * x.size() + i, 0);
  return FinRel(product(x, x), FinSet::unit(), std::move(p));
}

}  // namespace atemp
