#include "first/neighbors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "first/error.hpp"

namespace first {

NeighborIndex::NeighborIndex(const EncodedMatrix& matrix, std::span<const std::size_t> factors,
                             std::size_t leaf_size)
    : leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (factors.empty()) throw InputError("neighbour index needs a non-empty factor set");
  std::set<std::size_t> seen;
  for (std::size_t f : factors) {
    if (f >= matrix.factors()) throw InputError("factor index out of range");
    if (!seen.insert(f).second) throw InputError("duplicate factor in neighbour index");
  }
  if (matrix.rows() >= std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("too many rows for the neighbour index");
  }
  columns_ = matrix.columns_for(factors);
  dim_ = columns_.size();

  const std::size_t n = matrix.rows();
  std::vector<double> coords(n * dim_);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = matrix.row(r);
    for (std::size_t d = 0; d < dim_; ++d) coords[r * dim_ + d] = row[columns_[d]];
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  nodes_.reserve(2 * (n / leaf_size_ + 1));
  build(0, static_cast<std::uint32_t>(n), order, coords);

  points_.resize(n * dim_);
  ids_.resize(n);
  position_.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t r = order[pos];
    std::copy_n(coords.begin() + static_cast<std::ptrdiff_t>(r * dim_), dim_,
                points_.begin() + static_cast<std::ptrdiff_t>(pos * dim_));
    ids_[pos] = r;
    position_[r] = pos;
  }
}

std::int32_t NeighborIndex::build(std::uint32_t begin, std::uint32_t end,
                                  std::vector<std::uint32_t>& order,
                                  const std::vector<double>& coords) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0, 0.0});
  if (end - begin <= leaf_size_) return id;

  // Split on the dimension of widest spread.
  std::size_t best_dim = 0;
  double best_spread = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::uint32_t i = begin; i < end; ++i) {
      const double v = coords[order[i] * dim_ + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = d;
    }
  }
  if (best_spread == 0.0) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return coords[a * dim_ + best_dim] < coords[b * dim_ + best_dim];
                   });
  const double split = coords[order[mid] * dim_ + best_dim];

  const std::int32_t left = build(begin, mid, order, coords);
  const std::int32_t right = build(mid, end, order, coords);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.dim = static_cast<std::uint32_t>(best_dim);
  node.split = split;
  return id;
}

double NeighborIndex::distance2(const double* a, const double* b) const noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

// Max-heap of the k smallest squared distances seen so far.
void NeighborIndex::search_kth(std::int32_t id, const double* query, std::size_t k,
                               std::vector<double>& heap) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::uint32_t pos = node.begin; pos < node.end; ++pos) {
      const double d2 = distance2(query, points_.data() + pos * dim_);
      if (heap.size() < k) {
        heap.push_back(d2);
        std::push_heap(heap.begin(), heap.end());
      } else if (d2 < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = d2;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }
  const double diff = query[node.dim] - node.split;
  const std::int32_t near = diff <= 0.0 ? node.left : node.right;
  const std::int32_t far = diff <= 0.0 ? node.right : node.left;
  search_kth(near, query, k, heap);
  // Points across the plane are at least |diff| away along node.dim.
  if (heap.size() < k || diff * diff < heap.front()) search_kth(far, query, k, heap);
}

void NeighborIndex::collect(std::int32_t id, const double* query, double radius2,
                            std::vector<Neighbor>& out) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::uint32_t pos = node.begin; pos < node.end; ++pos) {
      const double d2 = distance2(query, points_.data() + pos * dim_);
      if (d2 <= radius2) out.push_back(Neighbor{d2, ids_[pos]});
    }
    return;
  }
  const double diff = query[node.dim] - node.split;
  const std::int32_t near = diff <= 0.0 ? node.left : node.right;
  const std::int32_t far = diff <= 0.0 ? node.right : node.left;
  collect(near, query, radius2, out);
  if (diff * diff <= radius2) collect(far, query, radius2, out);
}

double NeighborIndex::kth_distance2(std::size_t query_row, std::size_t k, Scratch& scratch) const {
  if (query_row >= size()) throw InputError("query row out of range");
  if (k == 0 || k > size()) throw InputError("k must lie in [1, N]");
  const double* query = points_.data() + position_[query_row] * dim_;
  scratch.heap.clear();
  search_kth(0, query, k, scratch.heap);
  return scratch.heap.front();
}

void NeighborIndex::within_kth(std::size_t query_row, std::size_t k, Scratch& scratch,
                               std::vector<Neighbor>& out) const {
  const double radius2 = kth_distance2(query_row, k, scratch);
  const double* query = points_.data() + position_[query_row] * dim_;
  out.clear();
  collect(0, query, radius2, out);
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.row < b.row);
  });
}

std::vector<std::size_t> NeighborIndex::within_kth(std::size_t query_row, std::size_t k) const {
  Scratch scratch;
  std::vector<Neighbor> hits;
  within_kth(query_row, k, scratch, hits);
  std::vector<std::size_t> rows;
  rows.reserve(hits.size());
  for (const auto& h : hits) rows.push_back(h.row);
  return rows;
}

}  // namespace first
