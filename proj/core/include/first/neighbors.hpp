#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "first/dataset.hpp"

namespace first {

struct Neighbor {
  double dist2 = 0.0;  // squared Euclidean distance to the query row
  std::size_t row = 0;
};

/// Exact k-d tree over the projection of every row of an EncodedMatrix onto
/// the encoded columns of a factor subset.
///
/// within_kth() returns every row whose distance to the query row is no
/// larger than the distance of the k-th nearest row, the query row itself
/// counting as the first neighbour at distance 0. Ties at the k-th distance
/// are all included, so the result may hold more than k rows. Results are
/// ordered by (distance, row id) and do not depend on row insertion order.
///
/// The index is immutable after construction; concurrent queries are safe as
/// long as each thread uses its own Scratch.
class NeighborIndex {
 public:
  struct Scratch {
    std::vector<double> heap;
  };

  NeighborIndex(const EncodedMatrix& matrix, std::span<const std::size_t> factors,
                std::size_t leaf_size = 12);

  [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
  [[nodiscard]] const std::vector<std::size_t>& columns() const noexcept { return columns_; }

  [[nodiscard]] std::vector<std::size_t> within_kth(std::size_t query_row, std::size_t k) const;

  /// Allocation-free variant for hot loops; fills `out` (cleared first).
  void within_kth(std::size_t query_row, std::size_t k, Scratch& scratch,
                  std::vector<Neighbor>& out) const;

  /// Distance of the k-th nearest row (self included) to the query row.
  [[nodiscard]] double kth_distance2(std::size_t query_row, std::size_t k, Scratch& scratch) const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;  // -1 marks a leaf
    std::int32_t right = -1;
    std::uint32_t dim = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::vector<std::uint32_t>& order,
                     const std::vector<double>& coords);
  void search_kth(std::int32_t node, const double* query, std::size_t k,
                  std::vector<double>& heap) const;
  void collect(std::int32_t node, const double* query, double radius2,
               std::vector<Neighbor>& out) const;
  [[nodiscard]] double distance2(const double* a, const double* b) const noexcept;

  std::size_t dim_ = 0;
  std::size_t leaf_size_ = 12;
  std::vector<std::size_t> columns_;
  std::vector<double> points_;          // tree order, row-major
  std::vector<std::size_t> ids_;        // tree position -> original row
  std::vector<std::size_t> position_;   // original row -> tree position
  std::vector<Node> nodes_;
};

}  // namespace first
