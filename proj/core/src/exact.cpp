#include "hgut/exact.hpp"

#include "hgut/errors.hpp"

namespace hgut::exact {

namespace {
constexpr std::int64_t kExactCap = 10'000;
}

RationalTable::RationalTable(GridShape shape, const std::vector<std::int64_t>& weights)
    : shape_(std::move(shape)) {
  if (shape_.total_size() > kExactCap) throw CapacityError("RationalTable: too many cells");
  if (static_cast<std::int64_t>(weights.size()) != shape_.total_size()) {
    throw ArgumentError("RationalTable: weight count mismatch");
  }
  BigInt total = 0;
  for (std::int64_t w : weights) {
    if (w < 0) throw ArgumentError("RationalTable: negative weight");
    total += w;
  }
  if (total == 0) throw ArgumentError("RationalTable: all weights zero");
  mass_.reserve(weights.size());
  for (std::int64_t w : weights) mass_.emplace_back(BigInt(w), total);
}

RationalTable::RationalTable(GridShape shape, std::vector<Rational> mass)
    : shape_(std::move(shape)), mass_(std::move(mass)) {
  if (shape_.total_size() > kExactCap) throw CapacityError("RationalTable: too many cells");
  if (static_cast<std::int64_t>(mass_.size()) != shape_.total_size()) {
    throw ArgumentError("RationalTable: mass count mismatch");
  }
}

std::vector<double> RationalTable::to_doubles() const {
  std::vector<double> out;
  out.reserve(mass_.size());
  for (const auto& r : mass_) out.push_back(to_double(r));
  return out;
}

Rational tv_to_uniform(const RationalTable& p) {
  const Rational u(BigInt(1), BigInt(p.shape().total_size()));
  Rational acc(0);
  for (std::int64_t idx = 0; idx < p.shape().total_size(); ++idx) {
    Rational d = p.mass_at_index(idx) - u;
    if (d < Rational(0)) d = -d;
    acc += d;
  }
  return acc / Rational(2);
}

RationalTable project(const RationalTable& p, const std::vector<int>& coords) {
  if (coords.empty()) throw ArgumentError("exact::project: empty coordinate set");
  const GridShape sub = p.shape().sub_shape(coords);
  std::vector<Rational> table(static_cast<std::size_t>(sub.total_size()), Rational(0));
  Point pt, sp(coords.size());
  for (std::int64_t idx = 0; idx < p.shape().total_size(); ++idx) {
    p.shape().decode_into(idx, pt);
    for (std::size_t j = 0; j < coords.size(); ++j) {
      sp[j] = pt[static_cast<std::size_t>(coords[j])];
    }
    table[static_cast<std::size_t>(sub.index_of(sp))] += p.mass_at_index(idx);
  }
  return RationalTable(sub, std::move(table));
}

RationalTable restricted(const RationalTable& p, const Restriction& rho) {
  rho.validate_against(p.shape());
  const std::vector<int> stars = rho.stars();
  if (stars.empty()) throw ArgumentError("exact::restricted: rho has no stars");
  const GridShape sub = p.shape().sub_shape(stars);
  std::vector<Rational> table(static_cast<std::size_t>(sub.total_size()), Rational(0));
  Rational total(0);
  Point full(static_cast<std::size_t>(p.shape().n())), sp;
  for (int i = 0; i < rho.n(); ++i) {
    if (!rho.is_star(i)) full[static_cast<std::size_t>(i)] = rho.fixed_value(i);
  }
  for (std::int64_t sidx = 0; sidx < sub.total_size(); ++sidx) {
    sub.decode_into(sidx, sp);
    for (std::size_t j = 0; j < stars.size(); ++j) {
      full[static_cast<std::size_t>(stars[j])] = sp[j];
    }
    const Rational m = p.mass_at_index(p.shape().index_of(full));
    table[static_cast<std::size_t>(sidx)] = m;
    total += m;
  }
  if (total == Rational(0)) throw ZeroMassSubcubeError("exact::restricted: zero-mass subcube");
  for (auto& v : table) v /= total;
  return RationalTable(sub, std::move(table));
}

Rational bias(const RationalTable& p, int i, Symbol c, Symbol d) {
  if (i < 0 || i >= p.shape().n()) throw ArgumentError("exact::bias: coordinate out of range");
  const int m = p.shape().side(i);
  if (c < 0 || c >= m || d < 0 || d >= m) throw ArgumentError("exact::bias: symbol out of range");
  if (c == d) return Rational(0);
  Rational pc(0), pd(0);
  Point pt;
  for (std::int64_t idx = 0; idx < p.shape().total_size(); ++idx) {
    p.shape().decode_into(idx, pt);
    const int v = pt[static_cast<std::size_t>(i)];
    if (v == c) pc += p.mass_at_index(idx);
    if (v == d) pd += p.mass_at_index(idx);
  }
  if (pc + pd == Rational(0)) return Rational(0);
  return (pc - pd) / (pc + pd);
}

double to_double(const Rational& r) {
  return boost::multiprecision::cpp_rational(r.numerator(), r.denominator())
      .convert_to<double>();
}

}  // namespace hgut::exact
