#pragma once

#include <memory>
#include <vector>

#include "atemp/fin.hpp"

namespace atemp {

/// A binary-product shape over a list of factor sets. Leaves are either a
/// slot id (an index into the factor list) or the monoidal unit. Shapes with
/// the same slot multiset denote sets of equal size, and `wiring` produces
/// the canonical bijection between any two such shapes: the unique structural
/// map built from associators, unitors and symmetries.
class Shape {
 public:
  static Shape slot(int id);
  static Shape unit();
  static Shape pair(Shape left, Shape right);

  FinSet realize(const std::vector<FinSet>& slots) const;

  /// Slot ids in left-to-right leaf order (units skipped).
  std::vector<int> slot_order() const;

  /// Decodes a flat element index into per-slot coordinates (indexed by slot
  /// id; slots absent from the shape are left untouched).
  void decode(const std::vector<FinSet>& slots, int index, std::vector<int>& coords) const;
  /// Inverse of decode.
  int encode(const std::vector<FinSet>& slots, const std::vector<int>& coords) const;

 private:
  struct Node;
  explicit Shape(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// The structural bijection from one grouping of the factors to another.
/// Every slot used by exactly one side must have size 1 (unit introduction
/// or elimination); slots used by both sides are carried across.
FinFun wiring(const std::vector<FinSet>& slots, const Shape& from, const Shape& to);

}  // namespace atemp
