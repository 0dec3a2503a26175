#include "hgut/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hgut/errors.hpp"

namespace hgut {

namespace {

double checked_sum(const std::vector<double>& w, const char* what) {
  double sum = 0.0, comp = 0.0;  // Kahan
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ArgumentError(std::string(what) + ": masses must be finite and >= 0");
    }
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ArgumentError(std::string(what) + ": total mass deviates from 1 by more than 1e-9");
  }
  return sum;
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    c[i] = acc;
  }
  if (!c.empty()) c.back() = 1.0;
  return c;
}

std::size_t cdf_pick(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace

Distribution::Distribution(GridShape shape, Body body) : shape_(std::move(shape)), body_(body) {}

Distribution Distribution::dense(GridShape shape, std::vector<double> mass, std::int64_t cap) {
  if (shape.total_size() > cap) {
    throw CapacityError("Distribution::dense: total_size " + std::to_string(shape.total_size()) +
                        " exceeds cap " + std::to_string(cap));
  }
  if (static_cast<std::int64_t>(mass.size()) != shape.total_size()) {
    throw ArgumentError("Distribution::dense: table size does not match shape");
  }
  const double sum = checked_sum(mass, "Distribution::dense");
  for (double& v : mass) v /= sum;
  Distribution d(std::move(shape), Body::Dense);
  d.cdf_ = cumulative(mass);
  d.table_ = std::move(mass);
  return d;
}

Distribution Distribution::product(GridShape shape, std::vector<std::vector<double>> marginals) {
  if (static_cast<int>(marginals.size()) != shape.n()) {
    throw ArgumentError("Distribution::product: need one marginal per coordinate");
  }
  for (int i = 0; i < shape.n(); ++i) {
    auto& q = marginals[static_cast<std::size_t>(i)];
    if (static_cast<int>(q.size()) != shape.side(i)) {
      throw ArgumentError("Distribution::product: marginal length mismatch at coordinate " +
                          std::to_string(i));
    }
    const double sum = checked_sum(q, "Distribution::product");
    for (double& v : q) v /= sum;
  }
  Distribution d(std::move(shape), Body::Product);
  d.marginal_cdfs_.reserve(marginals.size());
  for (const auto& q : marginals) d.marginal_cdfs_.push_back(cumulative(q));
  d.marginals_ = std::move(marginals);
  return d;
}

Distribution Distribution::uniform(GridShape shape) {
  std::vector<std::vector<double>> marginals;
  marginals.reserve(static_cast<std::size_t>(shape.n()));
  for (int i = 0; i < shape.n(); ++i) {
    marginals.emplace_back(static_cast<std::size_t>(shape.side(i)),
                           1.0 / static_cast<double>(shape.side(i)));
  }
  return product(std::move(shape), std::move(marginals));
}

double Distribution::mass_at(const Point& p) const {
  if (is_dense()) return table_[static_cast<std::size_t>(shape_.index_of(p))];
  shape_.require_point(p);
  double m = 1.0;
  for (int i = 0; i < shape_.n(); ++i) {
    m *= marginals_[static_cast<std::size_t>(i)][static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
  }
  return m;
}

double Distribution::mass_at_index(std::int64_t idx) const {
  if (!is_dense()) throw ArgumentError("mass_at_index: dense body required");
  if (idx < 0 || idx >= shape_.total_size()) throw ArgumentError("mass_at_index: out of range");
  return table_[static_cast<std::size_t>(idx)];
}

const std::vector<double>& Distribution::dense_table() const {
  if (!is_dense()) throw ArgumentError("dense_table: dense body required");
  return table_;
}

const std::vector<double>& Distribution::marginal_weights(int i) const {
  if (is_dense()) throw ArgumentError("marginal_weights: product body required");
  if (i < 0 || i >= shape_.n()) throw ArgumentError("marginal_weights: coordinate out of range");
  return marginals_[static_cast<std::size_t>(i)];
}

double Distribution::coordinate_marginal(int i, Symbol a) const {
  if (i < 0 || i >= shape_.n() || a < 0 || a >= shape_.side(i)) {
    throw ArgumentError("coordinate_marginal: index out of range");
  }
  if (!is_dense()) return marginals_[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
  double sum = 0.0;
  Point pt;
  for (std::int64_t idx = 0; idx < shape_.total_size(); ++idx) {
    shape_.decode_into(idx, pt);
    if (pt[static_cast<std::size_t>(i)] == a) sum += table_[static_cast<std::size_t>(idx)];
  }
  return sum;
}

Distribution Distribution::to_dense(std::int64_t cap) const {
  if (is_dense()) return *this;
  if (shape_.total_size() > cap) {
    throw CapacityError("to_dense: total_size exceeds cap");
  }
  std::vector<double> table(static_cast<std::size_t>(shape_.total_size()));
  Point pt;
  for (std::int64_t idx = 0; idx < shape_.total_size(); ++idx) {
    shape_.decode_into(idx, pt);
    table[static_cast<std::size_t>(idx)] = mass_at(pt);
  }
  return dense(shape_, std::move(table), cap);
}

Point Distribution::sample(Rng& rng) const {
  if (is_dense()) {
    const double u = rng.canonical();
    return shape_.point_at(static_cast<std::int64_t>(cdf_pick(cdf_, u)));
  }
  Point p(static_cast<std::size_t>(shape_.n()));
  for (int i = 0; i < shape_.n(); ++i) {
    const double u = rng.canonical();
    p[static_cast<std::size_t>(i)] =
        static_cast<int>(cdf_pick(marginal_cdfs_[static_cast<std::size_t>(i)], u));
  }
  return p;
}

double tv_to_uniform(const Distribution& p, std::int64_t cap) {
  const Distribution d = p.to_dense(cap);
  const double u = 1.0 / static_cast<double>(d.shape().total_size());
  double sum = 0.0, comp = 0.0;
  for (double v : d.dense_table()) {
    const double y = std::abs(v - u) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return 0.5 * sum;
}

Distribution project(const Distribution& p, const std::vector<int>& coords) {
  if (coords.empty()) throw ArgumentError("project: coordinate set must be nonempty");
  const GridShape sub = p.shape().sub_shape(coords);
  if (!p.is_dense()) {
    std::vector<std::vector<double>> marginals;
    marginals.reserve(coords.size());
    for (int c : coords) marginals.push_back(p.marginal_weights(c));
    return Distribution::product(sub, std::move(marginals));
  }
  std::vector<double> table(static_cast<std::size_t>(sub.total_size()), 0.0);
  const GridShape& shape = p.shape();
  Point pt, sp(coords.size());
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, pt);
    for (std::size_t j = 0; j < coords.size(); ++j) {
      sp[j] = pt[static_cast<std::size_t>(coords[j])];
    }
    table[static_cast<std::size_t>(sub.index_of(sp))] += p.mass_at_index(idx);
  }
  return Distribution::dense(sub, std::move(table));
}

Distribution restricted(const Distribution& p, const Restriction& rho) {
  rho.validate_against(p.shape());
  const std::vector<int> stars = rho.stars();
  if (stars.empty()) {
    throw ArgumentError("restricted: rho has no stars (0-dimensional result)");
  }
  const GridShape sub = p.shape().sub_shape(stars);
  if (!p.is_dense()) {
    for (int i = 0; i < rho.n(); ++i) {
      if (!rho.is_star(i) &&
          p.marginal_weights(i)[static_cast<std::size_t>(rho.fixed_value(i))] <= 0.0) {
        throw ZeroMassSubcubeError("restricted: subcube " + rho.to_string() + " has zero mass");
      }
    }
    std::vector<std::vector<double>> marginals;
    marginals.reserve(stars.size());
    for (int s : stars) marginals.push_back(p.marginal_weights(s));
    return Distribution::product(sub, std::move(marginals));
  }
  // Dense: walk the subcube with an odometer over the star coordinates.
  std::vector<double> table(static_cast<std::size_t>(sub.total_size()), 0.0);
  Point full(static_cast<std::size_t>(p.shape().n()));
  for (int i = 0; i < rho.n(); ++i) {
    if (!rho.is_star(i)) full[static_cast<std::size_t>(i)] = rho.fixed_value(i);
  }
  double total = 0.0;
  Point sp;
  for (std::int64_t sidx = 0; sidx < sub.total_size(); ++sidx) {
    sub.decode_into(sidx, sp);
    for (std::size_t j = 0; j < stars.size(); ++j) {
      full[static_cast<std::size_t>(stars[j])] = sp[j];
    }
    const double m = p.mass_at(full);
    table[static_cast<std::size_t>(sidx)] = m;
    total += m;
  }
  if (total <= 0.0) {
    throw ZeroMassSubcubeError("restricted: subcube " + rho.to_string() + " has zero mass");
  }
  for (double& v : table) v /= total;
  return Distribution::dense(sub, std::move(table));
}

double bias(const Distribution& p, int i, Symbol c, Symbol d) {
  if (i < 0 || i >= p.shape().n()) throw ArgumentError("bias: coordinate out of range");
  const int m = p.shape().side(i);
  if (c < 0 || c >= m || d < 0 || d >= m) throw ArgumentError("bias: symbol out of range");
  if (c == d) return 0.0;
  const double pc = p.coordinate_marginal(i, c);
  const double pd = p.coordinate_marginal(i, d);
  if (pc + pd <= 0.0) return 0.0;
  return (pc - pd) / (pc + pd);
}

BiasVector BiasVector::of(const Distribution& p) {
  const GridShape& shape = p.shape();
  // One pass for all coordinate marginals, then the pair loops.
  std::vector<std::vector<double>> marg(static_cast<std::size_t>(shape.n()));
  for (int i = 0; i < shape.n(); ++i) {
    marg[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(shape.side(i)), 0.0);
  }
  if (p.is_dense()) {
    Point pt;
    for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
      shape.decode_into(idx, pt);
      const double m = p.mass_at_index(idx);
      for (int i = 0; i < shape.n(); ++i) {
        marg[static_cast<std::size_t>(i)][static_cast<std::size_t>(pt[static_cast<std::size_t>(i)])] += m;
      }
    }
  } else {
    for (int i = 0; i < shape.n(); ++i) marg[static_cast<std::size_t>(i)] = p.marginal_weights(i);
  }
  BiasVector bv(shape);
  bv.matrices_.resize(static_cast<std::size_t>(shape.n()));
  for (int i = 0; i < shape.n(); ++i) {
    const auto& q = marg[static_cast<std::size_t>(i)];
    const std::size_t m = q.size();
    auto& mat = bv.matrices_[static_cast<std::size_t>(i)];
    mat.assign(m * m, 0.0);
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t d = 0; d < m; ++d) {
        if (c == d) continue;
        const double denom = q[c] + q[d];
        if (denom <= 0.0) continue;
        mat[c * m + d] = (q[c] - q[d]) / denom;
      }
    }
  }
  return bv;
}

double BiasVector::entry(int i, Symbol c, Symbol d) const {
  if (i < 0 || i >= shape_.n()) throw ArgumentError("BiasVector::entry: coordinate out of range");
  const int m = shape_.side(i);
  if (c < 0 || c >= m || d < 0 || d >= m) throw ArgumentError("BiasVector::entry: symbol range");
  return matrices_[static_cast<std::size_t>(i)][static_cast<std::size_t>(c) * m + d];
}

const std::vector<double>& BiasVector::matrix(int i) const {
  if (i < 0 || i >= shape_.n()) throw ArgumentError("BiasVector::matrix: coordinate out of range");
  return matrices_[static_cast<std::size_t>(i)];
}

double BiasVector::l2_norm() const {
  double sq = 0.0;
  for (const auto& mat : matrices_) {
    for (double mu : mat) sq += mu * mu;
  }
  return std::sqrt(sq);
}

double bias_norm(const Distribution& p) { return BiasVector::of(p).l2_norm(); }

Restriction draw_restriction_sigma(const Distribution& p, double sigma, Rng& rng) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw ArgumentError("draw_restriction_sigma: sigma in [0,1]");
  const int n = p.shape().n();
  const std::vector<int> stars = rng.bernoulli_subset(n, sigma);
  const Point x = p.sample(rng);
  std::vector<int> entries(x.begin(), x.end());
  for (int s : stars) entries[static_cast<std::size_t>(s)] = Restriction::kStar;
  return Restriction(std::move(entries));
}

Restriction draw_restriction_t(const Distribution& p, int t, Rng& rng) {
  const int n = p.shape().n();
  if (t < 0 || t > n) throw ArgumentError("draw_restriction_t: t out of range");
  const std::vector<int> stars = rng.uniform_subset(n, t);
  const Point y = p.sample(rng);
  std::vector<int> entries(y.begin(), y.end());
  for (int s : stars) entries[static_cast<std::size_t>(s)] = Restriction::kStar;
  return Restriction(std::move(entries));
}

std::pair<Symbol, Symbol> projection_pair(int k, int side) {
  if (k < 1) throw ArgumentError("projection_pair: k must be >= 1");
  const int kk = std::min<std::int64_t>(k, static_cast<std::int64_t>(side) * side) - 1;
  return {kk / side, kk % side};
}

Distribution hypercube_projection(const Distribution& p, int k) {
  const GridShape& shape = p.shape();
  const int m = shape.max_side();
  if (k < 1 || static_cast<std::int64_t>(k) > static_cast<std::int64_t>(m) * m) {
    throw ArgumentError("hypercube_projection: k out of [1, m^2]");
  }
  const int n = shape.n();
  const GridShape cube(std::vector<int>(static_cast<std::size_t>(n), 2));

  if (!p.is_dense()) {
    std::vector<std::vector<double>> marginals;
    marginals.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto [c, d] = projection_pair(k, shape.side(i));
      const auto& q = p.marginal_weights(i);
      double plus, minus;
      if (c == d) {
        plus = minus = 0.5;
      } else {
        const double rest = std::max(0.0, 1.0 - q[static_cast<std::size_t>(c)] - q[static_cast<std::size_t>(d)]);
        plus = q[static_cast<std::size_t>(c)] + 0.5 * rest;
        minus = q[static_cast<std::size_t>(d)] + 0.5 * rest;
      }
      marginals.push_back({plus, minus});
    }
    return Distribution::product(cube, std::move(marginals));
  }

  if (n > 20) throw CapacityError("hypercube_projection: dense pushforward needs n <= 20");
  std::vector<std::pair<Symbol, Symbol>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pairs.push_back(projection_pair(k, shape.side(i)));

  std::vector<double> out(std::size_t{1} << n, 0.0);
  Point pt;
  std::vector<int> fixed_bits(static_cast<std::size_t>(n));  // 0 -> +1, 1 -> -1, -1 -> free
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, pt);
    const double mass = p.mass_at_index(idx);
    if (mass == 0.0) continue;
    std::vector<int> free_coords;
    std::size_t base = 0;
    for (int i = 0; i < n; ++i) {
      const auto [c, d] = pairs[static_cast<std::size_t>(i)];
      const int xi = pt[static_cast<std::size_t>(i)];
      if (c != d && xi == c) {
        fixed_bits[static_cast<std::size_t>(i)] = 0;
      } else if (c != d && xi == d) {
        fixed_bits[static_cast<std::size_t>(i)] = 1;
      } else {
        fixed_bits[static_cast<std::size_t>(i)] = -1;
        free_coords.push_back(i);
      }
      if (fixed_bits[static_cast<std::size_t>(i)] == 1) {
        base |= std::size_t{1} << (n - 1 - i);  // row-major bit layout
      }
    }
    const double share = mass / static_cast<double>(std::size_t{1} << free_coords.size());
    const std::size_t combos = std::size_t{1} << free_coords.size();
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t cell = base;
      for (std::size_t j = 0; j < free_coords.size(); ++j) {
        if (c & (std::size_t{1} << j)) {
          cell |= std::size_t{1} << (n - 1 - free_coords[j]);
        }
      }
      out[cell] += share;
    }
  }
  return Distribution::dense(cube, std::move(out), std::int64_t{1} << 20);
}

std::vector<double> hypercube_mean_vector(const Distribution& p) {
  const GridShape& shape = p.shape();
  for (int i = 0; i < shape.n(); ++i) {
    if (shape.side(i) != 2) throw ArgumentError("hypercube_mean_vector: shape must be (2,...,2)");
  }
  std::vector<double> mu(static_cast<std::size_t>(shape.n()));
  for (int i = 0; i < shape.n(); ++i) {
    mu[static_cast<std::size_t>(i)] = p.coordinate_marginal(i, 0) - p.coordinate_marginal(i, 1);
  }
  return mu;
}

TvDecompositionReport tv_decomposition_check(const Distribution& p, double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) throw ArgumentError("tv_decomposition_check: sigma in [0,1]");
  const Distribution d = p.to_dense();
  const GridShape& shape = d.shape();
  const int n = shape.n();
  const std::int64_t size = shape.total_size();
  if (n > 16 || (static_cast<double>(size) * std::pow(2.0, n)) > 2e7) {
    throw CapacityError("tv_decomposition_check: enumeration infeasible for this shape");
  }

  TvDecompositionReport rep;
  rep.lhs = tv_to_uniform(d);

  Point pt;
  for (const auto& stars : enumerate_subsets(n)) {
    const int s = static_cast<int>(stars.size());
    const double weight = std::pow(sigma, s) * std::pow(1.0 - sigma, n - s);
    if (weight == 0.0) continue;
    const std::vector<int> fixed = complement_of(stars, n);

    // Projection term uses the complement of the star set.
    if (!fixed.empty()) {
      rep.projection_term += weight * tv_to_uniform(project(d, fixed));
    }
    // Restriction term: group the table by the fixed-coordinate assignment.
    if (!stars.empty()) {
      const std::int64_t star_cells = shape.sub_shape(stars).total_size();
      const double u_cell = 1.0 / static_cast<double>(star_cells);
      GridShape fix_shape = fixed.empty() ? GridShape({2}) : shape.sub_shape(fixed);
      const std::int64_t groups = fixed.empty() ? 1 : fix_shape.total_size();
      std::vector<double> group_mass(static_cast<std::size_t>(groups), 0.0);
      Point fp(fixed.size());
      for (std::int64_t idx = 0; idx < size; ++idx) {
        shape.decode_into(idx, pt);
        std::int64_t g = 0;
        if (!fixed.empty()) {
          for (std::size_t j = 0; j < fixed.size(); ++j) {
            fp[j] = pt[static_cast<std::size_t>(fixed[j])];
          }
          g = fix_shape.index_of(fp);
        }
        group_mass[static_cast<std::size_t>(g)] += d.mass_at_index(idx);
      }
      double acc = 0.0;
      for (std::int64_t idx = 0; idx < size; ++idx) {
        shape.decode_into(idx, pt);
        std::int64_t g = 0;
        if (!fixed.empty()) {
          for (std::size_t j = 0; j < fixed.size(); ++j) {
            fp[j] = pt[static_cast<std::size_t>(fixed[j])];
          }
          g = fix_shape.index_of(fp);
        }
        const double q = group_mass[static_cast<std::size_t>(g)];
        if (q <= 0.0) continue;  // zero-mass subcube: zero weight
        // q * d_TV(p_|rho, U) accumulates as (1/2)|p(x) - q/star_cells|.
        acc += 0.5 * std::abs(d.mass_at_index(idx) - q * u_cell);
      }
      rep.restriction_term += weight * acc;
    }
    // stars empty: the restriction fixes everything; d_TV over the empty
    // star set is 0 by convention.
  }
  rep.rhs = rep.projection_term + rep.restriction_term;
  rep.holds = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

}  // namespace hgut
