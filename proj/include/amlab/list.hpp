#pragma once

#include <cstddef>
#include <memory>
#include <utility>

namespace amlab {

// Persistent singly-linked list. Copies share structure, so machine
// configurations can be snapshotted into traces at O(1) per step.
template <typename T>
class List {
  struct Node {
    T head;
    std::shared_ptr<const Node> tail;
  };
  std::shared_ptr<const Node> node_;

  explicit List(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 public:
  List() = default;

  [[nodiscard]] bool empty() const { return node_ == nullptr; }
  [[nodiscard]] const T& head() const { return node_->head; }
  [[nodiscard]] List tail() const { return List(node_->tail); }

  [[nodiscard]] List push(T value) const {
    return List(std::make_shared<const Node>(Node{std::move(value), node_}));
  }

  [[nodiscard]] std::size_t size() const {
    std::size_t n = 0;
    for (auto p = node_.get(); p != nullptr; p = p->tail.get()) ++n;
    return n;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (auto p = node_.get(); p != nullptr; p = p->tail.get()) f(p->head);
  }

  friend bool operator==(const List& a, const List& b) {
    auto* pa = a.node_.get();
    auto* pb = b.node_.get();
    while (pa != nullptr && pb != nullptr) {
      if (pa == pb) return true;  // shared tail
      if (!(pa->head == pb->head)) return false;
      pa = pa->tail.get();
      pb = pb->tail.get();
    }
    return pa == pb;
  }
};

}  // namespace amlab
