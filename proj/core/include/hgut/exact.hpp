#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "hgut/grid.hpp"

namespace hgut::exact {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

/// Exact-rational dense distribution, for identity cross-checks of the
/// floating-point paths on small grids (<= 10^4 cells).
class RationalTable {
 public:
  /// Build from nonnegative integer weights (normalized internally).
  RationalTable(GridShape shape, const std::vector<std::int64_t>& weights);
  RationalTable(GridShape shape, std::vector<Rational> mass);

  const GridShape& shape() const { return shape_; }
  const Rational& mass_at_index(std::int64_t idx) const {
    return mass_[static_cast<std::size_t>(idx)];
  }

  std::vector<double> to_doubles() const;

 private:
  GridShape shape_;
  std::vector<Rational> mass_;
};

Rational tv_to_uniform(const RationalTable& p);
RationalTable project(const RationalTable& p, const std::vector<int>& coords);
RationalTable restricted(const RationalTable& p, const Restriction& rho);
Rational bias(const RationalTable& p, int i, Symbol c, Symbol d);

double to_double(const Rational& r);

}  // namespace hgut::exact
