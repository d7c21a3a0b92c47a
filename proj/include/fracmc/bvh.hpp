#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fracmc/vec.hpp"

namespace fracmc::detail {

// Static median-split AABB tree over facets.  Queries enumerate facets whose
// box intersects a segment; crossing tests against long sample segments
// dominate the Monte Carlo inner loop, so this has to stay lean.
template <std::size_t N>
class Bvh {
 public:
  void build(const std::vector<Box<N>>& boxes) {
    const int n = static_cast<int>(boxes.size());
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    centers_.resize(n);
    for (int i = 0; i < n; ++i) centers_[i] = boxes[i].center();
    nodes_.clear();
    nodes_.reserve(2 * n);
    if (n > 0) build_node(boxes, 0, n);
  }

  // Calls f(facet_index) for every facet whose box the segment [a,b] hits.
  template <typename F>
  void visit_segment(const Vec<N>& a, const Vec<N>& b, const F& f) const {
    if (nodes_.empty()) return;
    Vec<N> dir = b - a;
    Vec<N> inv_dir;
    for (std::size_t i = 0; i < N; ++i)
      inv_dir[i] = dir[i] != 0.0 ? 1.0 / dir[i] : 0.0;
    int stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!segment_hits_box(a, dir, inv_dir, node.box)) continue;
      if (node.count > 0) {
        for (int i = 0; i < node.count; ++i) f(order_[node.first + i]);
      } else {
        stack[top++] = node.right;
        stack[top++] = node.left;
      }
    }
  }

 private:
  struct Node {
    Box<N> box;
    int left = -1, right = -1;
    int first = 0, count = 0;  // leaf when count > 0
  };

  static bool segment_hits_box(const Vec<N>& a, const Vec<N>& dir,
                               const Vec<N>& inv_dir, const Box<N>& box) {
    double t0 = 0.0, t1 = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      if (dir[i] == 0.0) {
        if (a[i] < box.lo[i] || a[i] > box.hi[i]) return false;
        continue;
      }
      double ta = (box.lo[i] - a[i]) * inv_dir[i];
      double tb = (box.hi[i] - a[i]) * inv_dir[i];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return false;
    }
    return true;
  }

  int build_node(const std::vector<Box<N>>& boxes, int begin, int end) {
    const int idx = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    Box<N> box = Box<N>::empty();
    for (int i = begin; i < end; ++i) {
      box.expand(boxes[order_[i]].lo);
      box.expand(boxes[order_[i]].hi);
    }
    // Widen slightly so exact-plane facets are never missed by the slab test.
    const double pad = 1e-12 * (1.0 + box.diameter());
    for (std::size_t d = 0; d < N; ++d) {
      box.lo[d] -= pad;
      box.hi[d] += pad;
    }
    nodes_[idx].box = box;
    const int count = end - begin;
    if (count <= 4) {
      nodes_[idx].first = begin;
      nodes_[idx].count = count;
      return idx;
    }
    int axis = 0;
    double extent = -1;
    for (std::size_t d = 0; d < N; ++d) {
      const double e = box.hi[d] - box.lo[d];
      if (e > extent) {
        extent = e;
        axis = d;
      }
    }
    const int mid = begin + count / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int lhs, int rhs) {
                       return centers_[lhs][axis] < centers_[rhs][axis];
                     });
    const int left = build_node(boxes, begin, mid);
    const int right = build_node(boxes, mid, end);
    nodes_[idx].left = left;
    nodes_[idx].right = right;
    return idx;
  }

  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<Vec<N>> centers_;
};

}  // namespace fracmc::detail
