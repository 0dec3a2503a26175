#include "hgut/grid.hpp"

#include <algorithm>
#include <sstream>

#include "hgut/errors.hpp"

namespace hgut {

GridShape::GridShape(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ArgumentError("GridShape: need n >= 1 coordinates");
  for (int m : dims_) {
    if (m < 2) throw ArgumentError("GridShape: every side m_i must be >= 2");
  }
  total_size_ = 1;
  max_side_ = 0;
  for (int m : dims_) {
    if (total_size_ > kSaturatedSize / m) {
      total_size_ = kSaturatedSize;
      saturated_ = true;
      break;
    }
    total_size_ *= m;
    max_side_ = std::max(max_side_, m);
  }
  for (int m : dims_) max_side_ = std::max(max_side_, m);
  strides_.assign(dims_.size(), 1);
  if (!saturated_) {
    for (int i = n() - 2; i >= 0; --i) {
      strides_[static_cast<std::size_t>(i)] =
          strides_[static_cast<std::size_t>(i + 1)] * dims_[static_cast<std::size_t>(i + 1)];
    }
  }
}

std::int64_t GridShape::index_of(const Point& p) const {
  if (saturated_) throw CapacityError("GridShape: grid too large to index densely");
  require_point(p);
  std::int64_t idx = 0;
  for (int i = 0; i < n(); ++i) {
    idx += strides_[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
  }
  return idx;
}

Point GridShape::point_at(std::int64_t index) const {
  Point p(static_cast<std::size_t>(n()));
  decode_into(index, p);
  return p;
}

void GridShape::decode_into(std::int64_t index, Point& out) const {
  if (saturated_) throw CapacityError("GridShape: grid too large to index densely");
  if (index < 0 || index >= total_size_) throw ArgumentError("GridShape: index out of range");
  out.resize(static_cast<std::size_t>(n()));
  for (int i = 0; i < n(); ++i) {
    const std::int64_t s = strides_[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = static_cast<int>(index / s);
    index %= s;
  }
}

GridShape GridShape::sub_shape(const std::vector<int>& coords) const {
  if (coords.empty()) throw ArgumentError("GridShape::sub_shape: empty coordinate set");
  std::vector<int> d;
  d.reserve(coords.size());
  int prev = -1;
  for (int c : coords) {
    if (c < 0 || c >= n()) throw ArgumentError("GridShape::sub_shape: coordinate out of range");
    if (c <= prev) throw ArgumentError("GridShape::sub_shape: coordinates must be sorted unique");
    prev = c;
    d.push_back(side(c));
  }
  return GridShape(std::move(d));
}

bool GridShape::contains(const Point& p) const {
  if (static_cast<int>(p.size()) != n()) return false;
  for (int i = 0; i < n(); ++i) {
    const int v = p[static_cast<std::size_t>(i)];
    if (v < 0 || v >= side(i)) return false;
  }
  return true;
}

void GridShape::require_point(const Point& p) const {
  if (!contains(p)) throw ArgumentError("point does not lie in the grid " + to_string());
}

std::string GridShape::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < n(); ++i) {
    if (i) os << ',';
    os << side(i);
  }
  os << ')';
  return os.str();
}

Restriction Restriction::all_stars(int n) {
  return Restriction(std::vector<int>(static_cast<std::size_t>(n), kStar));
}

Restriction Restriction::fix_all(const Point& p) {
  return Restriction(std::vector<int>(p.begin(), p.end()));
}

Restriction::Restriction(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ArgumentError("Restriction: need n >= 1 entries");
  for (int e : entries_) {
    if (e < kStar) throw ArgumentError("Restriction: invalid entry");
  }
}

std::vector<int> Restriction::stars() const {
  std::vector<int> s;
  for (int i = 0; i < n(); ++i) {
    if (is_star(i)) s.push_back(i);
  }
  return s;
}

int Restriction::num_stars() const {
  int c = 0;
  for (int e : entries_) c += (e == kStar);
  return c;
}

void Restriction::validate_against(const GridShape& shape) const {
  if (n() != shape.n()) throw ArgumentError("Restriction: dimension mismatch");
  for (int i = 0; i < n(); ++i) {
    if (!is_star(i) && (fixed_value(i) < 0 || fixed_value(i) >= shape.side(i))) {
      throw ArgumentError("Restriction: fixed value out of range at coordinate " +
                          std::to_string(i));
    }
  }
}

std::string Restriction::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < n(); ++i) {
    if (i) os << ',';
    if (is_star(i)) {
      os << '*';
    } else {
      os << fixed_value(i);
    }
  }
  os << ')';
  return os.str();
}

Point with_coordinate(const Point& x, int i, Symbol a) {
  Point y = x;
  y[static_cast<std::size_t>(i)] = a;
  return y;
}

std::vector<Point> enumerate_points(const GridShape& shape) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(shape.total_size()));
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    pts.push_back(shape.point_at(idx));
  }
  return pts;
}

std::vector<std::vector<int>> enumerate_subsets(int n) {
  if (n < 0 || n > 24) throw CapacityError("enumerate_subsets: n out of range");
  std::vector<std::vector<int>> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<int>> enumerate_subsets_of_size(int n, int t) {
  if (t < 0 || t > n) throw ArgumentError("enumerate_subsets_of_size: t out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  cur.reserve(static_cast<std::size_t>(t));
  // Iterative combination walk.
  std::vector<int> idx(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (t == 0) {
    out.push_back({});
    return out;
  }
  for (;;) {
    out.emplace_back(idx.begin(), idx.end());
    int i = t - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - t + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < t; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::vector<int> complement_of(const std::vector<int>& subset, int n) {
  std::vector<int> out;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (k < subset.size() && subset[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace hgut
