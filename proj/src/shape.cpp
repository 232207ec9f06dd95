#include "atemp/shape.hpp"

#include <algorithm>

namespace atemp {

struct Shape::Node {
  // kind: 0 = slot leaf, 1 = unit leaf, 2 = pair
  int kind = 1;
  int slot = -1;
  std::shared_ptr<const Node> left, right;

  int size_of(const std::vector<FinSet>& slots) const {
    switch (kind) {
      case 0: return slots.at(slot).size();
      case 1: return 1;
      default: return left->size_of(slots) * right->size_of(slots);
    }
  }

  FinSet realize(const std::vector<FinSet>& slots) const {
    switch (kind) {
      case 0: return slots.at(slot);
      case 1: return FinSet::unit();
      default: return product(left->realize(slots), right->realize(slots));
    }
  }

  void collect(std::vector<int>& out) const {
    switch (kind) {
      case 0: out.push_back(slot); break;
      case 1: break;
      default:
        left->collect(out);
        right->collect(out);
    }
  }

  void decode(const std::vector<FinSet>& slots, int index, std::vector<int>& coords) const {
    switch (kind) {
      case 0: coords.at(slot) = index; return;
      case 1: return;
      default: {
        int rs = right->size_of(slots);
        left->decode(slots, index / rs, coords);
        right->decode(slots, index % rs, coords);
      }
    }
  }

  int encode(const std::vector<FinSet>& slots, const std::vector<int>& coords) const {
    switch (kind) {
      case 0: return coords.at(slot);
      case 1: return 0;
      default: {
        int rs = right->size_of(slots);
        return left->encode(slots, coords) * rs + right->encode(slots, coords);
      }
    }
  }
};

Shape Shape::slot(int id) {
  auto n = std::make_shared<Node>();
  n->kind = 0;
  n->slot = id;
  return Shape(std::move(n));
}

Shape Shape::unit() {
  auto n = std::make_shared<Node>();
  n->kind = 1;
  return Shape(std::move(n));
}

Shape Shape::pair(Shape left, Shape right) {
  auto n = std::make_shared<Node>();
  n->kind = 2;
  n->left = left.node_;
  n->right = right.node_;
  return Shape(std::move(n));
}

FinSet Shape::realize(const std::vector<FinSet>& slots) const { return node_->realize(slots); }

std::vector<int> Shape::slot_order() const {
  std::vector<int> out;
  node_->collect(out);
  return out;
}

void Shape::decode(const std::vector<FinSet>& slots, int index, std::vector<int>& coords) const {
  node_->decode(slots, index, coords);
}

int Shape::encode(const std::vector<FinSet>& slots, const std::vector<int>& coords) const {
  return node_->encode(slots, coords);
}

FinFun wiring(const std::vector<FinSet>& slots, const Shape& from, const Shape& to) {
  std::vector<int> fs = from.slot_order();
  std::vector<int> ts = to.slot_order();
  std::sort(fs.begin(), fs.end());
  std::sort(ts.begin(), ts.end());
  if (std::adjacent_find(fs.begin(), fs.end()) != fs.end() ||
      std::adjacent_find(ts.begin(), ts.end()) != ts.end())
    throw Error("wiring: a slot is used twice on one side");
  std::vector<int> only_from, only_to;
  std::set_difference(fs.begin(), fs.end(), ts.begin(), ts.end(), std::back_inserter(only_from));
  std::set_difference(ts.begin(), ts.end(), fs.begin(), fs.end(), std::back_inserter(only_to));
  for (int s : only_from)
    if (slots.at(s).size() != 1) throw Error("wiring: dropped slot is not unit-sized");
  for (int s : only_to)
    if (slots.at(s).size() != 1) throw Error("wiring: introduced slot is not unit-sized");

  FinSet dom = from.realize(slots);
  FinSet cod = to.realize(slots);
  std::vector<int> coords(slots.size(), 0);
  std::vector<int> table(dom.size());
  for (int i = 0; i < dom.size(); ++i) {
    std::fill(coords.begin(), coords.end(), 0);
    from.decode(slots, i, coords);
    table[i] = to.encode(slots, coords);
  }
  return FinFun(std::move(dom), std::move(cod), std::move(table));
}

}  // namespace atemp
