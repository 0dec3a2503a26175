#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hgut {

using Symbol = int;
/// A point of the hypergrid: coords[i] in {0, ..., m_i - 1}.
using Point = std::vector<Symbol>;

/// The vector M = (m_1, ..., m_n) defining the hypergrid Z_M.
///
/// Symbols are 0-based everywhere: coordinate i takes values {0, ..., m_i-1},
/// matching the Fourier characters omega_i^{a x_i}.
class GridShape {
 public:
  explicit GridShape(std::vector<int> dims);

  int n() const { return static_cast<int>(dims_.size()); }
  int side(int i) const { return dims_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& dims() const { return dims_; }
  int max_side() const { return max_side_; }
  /// Product of the sides, saturating at kSaturatedSize for huge grids (such
  /// grids support product-form work but cannot be indexed densely).
  std::int64_t total_size() const { return total_size_; }
  bool indexable() const { return !saturated_; }
  static constexpr std::int64_t kSaturatedSize = std::int64_t{1} << 62;

  /// Row-major mixed-radix index of a point (last coordinate fastest).
  std::int64_t index_of(const Point& p) const;
  Point point_at(std::int64_t index) const;
  void decode_into(std::int64_t index, Point& out) const;

  /// Shape restricted to a sorted list of coordinates.
  GridShape sub_shape(const std::vector<int>& coords) const;

  bool contains(const Point& p) const;
  void require_point(const Point& p) const;

  bool operator==(const GridShape& other) const { return dims_ == other.dims_; }
  bool operator!=(const GridShape& other) const { return !(*this == other); }

  std::string to_string() const;  // e.g. "(3,3,2)"

 private:
  std::vector<int> dims_;
  std::vector<std::int64_t> strides_;
  std::int64_t total_size_ = 1;
  int max_side_ = 0;
  bool saturated_ = false;
};

/// A partial assignment rho: entries[i] is either a fixed symbol or a star.
class Restriction {
 public:
  static constexpr int kStar = -1;

  /// All-star restriction of dimension n.
  static Restriction all_stars(int n);
  /// Fix every coordinate to the given point.
  static Restriction fix_all(const Point& p);

  explicit Restriction(std::vector<int> entries);  // kStar marks a star

  int n() const { return static_cast<int>(entries_.size()); }
  bool is_star(int i) const { return entries_[static_cast<std::size_t>(i)] == kStar; }
  int fixed_value(int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }

  /// Sorted indices of the star coordinates.
  std::vector<int> stars() const;
  int num_stars() const;

  void validate_against(const GridShape& shape) const;

  std::string to_string() const;  // e.g. "(*,1,*)"

  bool operator==(const Restriction& other) const { return entries_ == other.entries_; }

 private:
  std::vector<int> entries_;
};

/// x^{(i)->a}: copy of x with coordinate i set to a.
Point with_coordinate(const Point& x, int i, Symbol a);

/// All points of the shape in row-major index order (total_size must be small).
std::vector<Point> enumerate_points(const GridShape& shape);

/// All subsets of {0,...,n-1} as sorted index lists (n <= 24).
std::vector<std::vector<int>> enumerate_subsets(int n);

/// All size-t subsets of {0,...,n-1} as sorted index lists.
std::vector<std::vector<int>> enumerate_subsets_of_size(int n, int t);

/// Complement of a sorted index subset within [0, n).
std::vector<int> complement_of(const std::vector<int>& subset, int n);

}  // namespace hgut
