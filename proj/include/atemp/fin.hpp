#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace atemp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when composing or comparing values whose boundaries disagree.
struct BoundaryMismatch : Error {
  using Error::Error;
};

/// A finite set: an ordered list of distinct string labels.
/// Product sets use canonical "(x,y)" labels in row-major order over the
/// factor orders; the monoidal unit is the one-element set {"*"}.
class FinSet {
 public:
  FinSet() = default;
  explicit FinSet(std::vector<std::string> labels);

  static const FinSet& unit();
  /// {stem0, stem1, ..., stem<n-1>}
  static FinSet canonical(std::string_view stem, int n);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Position of a label, or -1.
  int find(const std::string& label) const;
  /// Position of a label; throws Error if absent.
  int index(const std::string& label) const;
  bool contains(const std::string& label) const { return find(label) >= 0; }
  bool is_unit() const { return labels_.size() == 1 && labels_[0] == "*"; }

  bool operator==(const FinSet& o) const { return labels_ == o.labels_; }
  bool operator!=(const FinSet& o) const { return !(*this == o); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> pos_;
};

std::string pair_label(const std::string& x, const std::string& y);

/// Cartesian product with canonical pair labels; element (i,j) sits at
/// index i*|Y|+j, so iterated products flatten to mixed-radix coordinates.
FinSet product(const FinSet& x, const FinSet& y);

/// A total function between finite sets, stored as an index table.
class FinFun {
 public:
  FinFun() = default;
  FinFun(FinSet dom, FinSet cod, std::vector<int> table);

  static FinFun identity(const FinSet& x);
  static FinFun constant(const FinSet& dom, const FinSet& cod, int target);
  /// Builds from a label-to-label mapping; must be total on dom.
  static FinFun from_labels(
      FinSet dom, FinSet cod,
      const std::unordered_map<std::string, std::string>& map);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  const std::vector<int>& table() const { return table_; }

  int operator()(int i) const { return table_.at(i); }
  const std::string& apply_label(const std::string& x) const;

  bool is_injective() const;
  bool is_surjective() const;
  bool is_bijective() const { return is_injective() && is_surjective(); }

  /// Diagrammatic composition: (this.then(g))(x) = g(this(x)).
  FinFun then(const FinFun& g) const;
  /// Inverse of a bijection.
  FinFun inverse() const;

  bool operator==(const FinFun& o) const {
    return dom_ == o.dom_ && cod_ == o.cod_ && table_ == o.table_;
  }
  bool operator!=(const FinFun& o) const { return !(*this == o); }

 private:
  FinSet dom_, cod_;
  std::vector<int> table_;
};

/// compose_fun(f, g) = g after f.
FinFun compose_fun(const FinFun& f, const FinFun& g);
FinFun id_fun(const FinSet& x);
/// f x g : dom(f)×dom(g) -> cod(f)×cod(g) on canonical pair labels.
FinFun fun_tensor(const FinFun& f, const FinFun& g);
/// s_{X,Y}(x,y) = (y,x).
FinFun symmetry(const FinSet& x, const FinSet& y);

// Canonical structural bijections. All are explicit relabelings; none of the
// unit or associativity maps are identities at the label level.
FinFun left_unitor(const FinSet& a);        // I×A -> A
FinFun left_unitor_inv(const FinSet& a);    // A -> I×A
FinFun right_unitor(const FinSet& a);       // A×I -> A
FinFun right_unitor_inv(const FinSet& a);   // A -> A×I
FinFun assoc_right(const FinSet& x, const FinSet& y, const FinSet& z);  // (X×Y)×Z -> X×(Y×Z)
FinFun assoc_left(const FinSet& x, const FinSet& y, const FinSet& z);   // X×(Y×Z) -> (X×Y)×Z

/// A relation between finite sets: a deduplicated, index-sorted pair list.
class FinRel {
 public:
  FinRel() = default;
  FinRel(FinSet dom, FinSet cod, std::vector<std::pair<int, int>> pairs);

  static FinRel identity(const FinSet& x);
  static FinRel empty(const FinSet& dom, const FinSet& cod);
  static FinRel full(const FinSet& dom, const FinSet& cod);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  bool contains(int i, int j) const;
  bool contains_labels(const std::string& x, const std::string& y) const;

  /// Pairs as label pairs, sorted lexicographically by (dom label, cod label).
  std::vector<std::pair<std::string, std::string>> sorted_label_pairs() const;

  bool operator==(const FinRel& o) const {
    return dom_ == o.dom_ && cod_ == o.cod_ && pairs_ == o.pairs_;
  }
  bool operator!=(const FinRel& o) const { return !(*this == o); }

 private:
  FinSet dom_, cod_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Graph of a function: {(x, f(x))}.
FinRel graph_rel(const FinFun& f);
/// Relational composition (diagrammatic: dom(r) -> cod(s)).
FinRel rel_compose(const FinRel& r, const FinRel& s);
FinRel rel_tensor(const FinRel& r, const FinRel& s);
FinRel rel_converse(const FinRel& r);
/// rel_cup(X): I -> X×X, the diagonal {(*, (x,x))}.
FinRel rel_cup(const FinSet& x);
/// rel_cap(X): X×X -> I, the diagonal {((x,x), *)}.
FinRel rel_cap(const FinSet& x);

}  // namespace atemp
