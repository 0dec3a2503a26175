#include "hgut/oracle.hpp"

#include <algorithm>
#include <sstream>

#include "hgut/errors.hpp"

namespace hgut {

std::string LedgerSnapshot::to_json() const {
  std::ostringstream os;
  os << "{\"total\":" << total << ",\"by_depth\":[";
  for (std::size_t i = 0; i < by_depth.size(); ++i) {
    if (i) os << ',';
    os << by_depth[i];
  }
  os << "],\"by_phase\":{\"coarse\":" << coarse << ",\"mean\":" << mean
     << ",\"recurse\":" << recurse << "}}";
  return os.str();
}

void QueryLedger::record(Phase phase, int depth) {
  by_phase_[static_cast<std::size_t>(phase)].fetch_add(1, std::memory_order_relaxed);
  const int d = std::min(depth, kMaxDepth - 1);
  by_depth_[static_cast<std::size_t>(d)].fetch_add(1, std::memory_order_relaxed);
}

std::uint64_t QueryLedger::total() const {
  std::uint64_t t = 0;
  for (const auto& c : by_phase_) t += c.load(std::memory_order_relaxed);
  return t;
}

std::uint64_t QueryLedger::phase_total(Phase phase) const {
  return by_phase_[static_cast<std::size_t>(phase)].load(std::memory_order_relaxed);
}

LedgerSnapshot QueryLedger::snapshot() const {
  LedgerSnapshot s;
  s.coarse = phase_total(Phase::Coarse);
  s.mean = phase_total(Phase::Mean);
  s.recurse = phase_total(Phase::Recurse);
  s.total = s.coarse + s.mean + s.recurse;
  int deepest = 0;
  for (int d = 0; d < kMaxDepth; ++d) {
    if (by_depth_[static_cast<std::size_t>(d)].load(std::memory_order_relaxed) > 0) deepest = d;
  }
  s.by_depth.resize(static_cast<std::size_t>(deepest) + 1);
  for (int d = 0; d <= deepest; ++d) {
    s.by_depth[static_cast<std::size_t>(d)] =
        by_depth_[static_cast<std::size_t>(d)].load(std::memory_order_relaxed);
  }
  return s;
}

SubcubeOracle::SubcubeOracle(GridShape shape, std::shared_ptr<QueryLedger> ledger,
                             std::shared_ptr<Rng> rng)
    : shape_(std::move(shape)), ledger_(std::move(ledger)), rng_(std::move(rng)) {}

Point SubcubeOracle::sample(const Restriction& rho) {
  rho.validate_against(shape_);
  ledger_->record(phase_, depth_);
  return do_sample(rho);
}

Point SubcubeOracle::sample_all_stars() { return sample(Restriction::all_stars(shape_.n())); }

std::unique_ptr<SubcubeOracle> SubcubeOracle::restricted_view(const Restriction& rho) const {
  rho.validate_against(shape_);
  if (rho.num_stars() == 0) {
    throw ArgumentError("restricted_view: rho must keep at least one star");
  }
  auto view = do_restricted_view(rho);
  view->set_attribution(phase_, depth_);
  return view;
}

namespace {

class DistributionOracle final : public SubcubeOracle {
 public:
  DistributionOracle(Distribution dist, std::shared_ptr<QueryLedger> ledger,
                     std::shared_ptr<Rng> rng)
      : SubcubeOracle(dist.shape(), std::move(ledger), std::move(rng)),
        dist_(std::make_shared<Distribution>(std::move(dist))) {}

 protected:
  Point do_sample(const Restriction& rho) override {
    if (rho.num_stars() == rho.n()) return dist_->sample(*rng_);
    if (rho.num_stars() == 0) {
      // Degenerate subcube: a single point. Mass must still be positive.
      Point p(rho.entries().begin(), rho.entries().end());
      if (dist_->mass_at(p) <= 0.0) {
        throw ZeroMassSubcubeError("sample: fixed point " + rho.to_string() + " has zero mass");
      }
      return p;
    }
    // One-shot conditional: draw from the restricted distribution and embed.
    const Distribution cond = hgut::restricted(*dist_, rho);
    const Point sub = cond.sample(*rng_);
    return embed(rho, sub);
  }

  std::unique_ptr<SubcubeOracle> do_restricted_view(const Restriction& rho) const override {
    return std::unique_ptr<SubcubeOracle>(
        new DistributionOracle(hgut::restricted(*dist_, rho), ledger_, rng_));
  }

 private:
  Point embed(const Restriction& rho, const Point& sub) const {
    Point full(rho.entries().begin(), rho.entries().end());
    const auto stars = rho.stars();
    for (std::size_t j = 0; j < stars.size(); ++j) {
      full[static_cast<std::size_t>(stars[j])] = sub[j];
    }
    return full;
  }

  std::shared_ptr<Distribution> dist_;
};

}  // namespace

std::unique_ptr<SubcubeOracle> make_oracle(Distribution dist, std::uint64_t seed) {
  auto ledger = std::make_shared<QueryLedger>();
  auto rng = std::make_shared<Rng>(seed);
  return std::unique_ptr<SubcubeOracle>(
      new DistributionOracle(std::move(dist), std::move(ledger), std::move(rng)));
}

ProjectedSampleStream::ProjectedSampleStream(SubcubeOracle& oracle, int k)
    : oracle_(oracle), all_stars_(Restriction::all_stars(oracle.shape().n())) {
  const GridShape& shape = oracle.shape();
  const int m = shape.max_side();
  if (k < 1 || static_cast<std::int64_t>(k) > static_cast<std::int64_t>(m) * m) {
    throw ArgumentError("ProjectedSampleStream: k out of [1, m^2]");
  }
  pairs_.reserve(static_cast<std::size_t>(shape.n()));
  for (int i = 0; i < shape.n(); ++i) pairs_.push_back(projection_pair(k, shape.side(i)));
}

std::vector<int8_t> ProjectedSampleStream::next() {
  const Point x = oracle_.sample(all_stars_);
  std::vector<int8_t> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto [c, d] = pairs_[i];
    if (c != d && x[i] == c) {
      z[i] = 1;
    } else if (c != d && x[i] == d) {
      z[i] = -1;
    } else {
      z[i] = static_cast<int8_t>(oracle_.rng().sign());
    }
  }
  return z;
}

}  // namespace hgut
