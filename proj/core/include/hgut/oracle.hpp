#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hgut/distribution.hpp"
#include "hgut/grid.hpp"
#include "hgut/rng.hpp"

namespace hgut {

/// Which stage of the testing stack a query is billed to. The oracle's own
/// machinery (restriction draws, the small-domain base case) bills to Recurse.
enum class Phase : int { Coarse = 0, Mean = 1, Recurse = 2 };

struct LedgerSnapshot {
  std::uint64_t total = 0;
  std::uint64_t coarse = 0;
  std::uint64_t mean = 0;
  std::uint64_t recurse = 0;
  std::vector<std::uint64_t> by_depth;

  bool operator==(const LedgerSnapshot& other) const = default;
  std::string to_json() const;
};

/// Query accounting shared by an oracle and all of its restricted views.
/// Increments are atomic so independent trials may share nothing but still
/// run concurrently against their own ledgers.
class QueryLedger {
 public:
  static constexpr int kMaxDepth = 32;

  void record(Phase phase, int depth);
  std::uint64_t total() const;
  std::uint64_t phase_total(Phase phase) const;
  LedgerSnapshot snapshot() const;
  std::string to_json() const { return snapshot().to_json(); }

 private:
  std::array<std::atomic<std::uint64_t>, 3> by_phase_{};
  std::array<std::atomic<std::uint64_t>, kMaxDepth> by_depth_{};
};

/// Subcube conditional sampling oracle over Z_M.
///
/// Every sample() bills exactly one query to the shared ledger. Returned
/// points are full-dimensional for the oracle's own shape (fixed coordinates
/// echo the restriction). A restricted view is itself an oracle over the
/// star coordinates; its queries compose restrictions and bill to the same
/// ledger. Instances are single-owner with respect to the generator.
class SubcubeOracle {
 public:
  virtual ~SubcubeOracle() = default;

  const GridShape& shape() const { return shape_; }
  QueryLedger& ledger() { return *ledger_; }
  const QueryLedger& ledger() const { return *ledger_; }
  Rng& rng() { return *rng_; }

  Point sample(const Restriction& rho);
  Point sample_all_stars();

  std::unique_ptr<SubcubeOracle> restricted_view(const Restriction& rho) const;

  void set_attribution(Phase phase, int depth) {
    phase_ = phase;
    depth_ = depth;
  }
  Phase phase() const { return phase_; }
  int depth() const { return depth_; }

 protected:
  SubcubeOracle(GridShape shape, std::shared_ptr<QueryLedger> ledger, std::shared_ptr<Rng> rng);
  virtual Point do_sample(const Restriction& rho) = 0;
  virtual std::unique_ptr<SubcubeOracle> do_restricted_view(const Restriction& rho) const = 0;

  GridShape shape_;
  std::shared_ptr<QueryLedger> ledger_;
  std::shared_ptr<Rng> rng_;
  Phase phase_ = Phase::Recurse;
  int depth_ = 0;
};

/// Restores the oracle's (phase, depth) attribution on scope exit.
class ScopedAttribution {
 public:
  ScopedAttribution(SubcubeOracle& oracle, Phase phase, int depth)
      : oracle_(oracle), prev_phase_(oracle.phase()), prev_depth_(oracle.depth()) {
    oracle_.set_attribution(phase, depth);
  }
  ~ScopedAttribution() { oracle_.set_attribution(prev_phase_, prev_depth_); }
  ScopedAttribution(const ScopedAttribution&) = delete;
  ScopedAttribution& operator=(const ScopedAttribution&) = delete;

 private:
  SubcubeOracle& oracle_;
  Phase prev_phase_;
  int prev_depth_;
};

/// Exact simulator backed by a Distribution (dense or product form).
/// Product forms condition coordinate-wise in O(n); dense forms materialize
/// conditional tables per view.
std::unique_ptr<SubcubeOracle> make_oracle(Distribution dist, std::uint64_t seed);

/// Sampler of {-1,+1}^n points from the k-th hypercube projection of the
/// oracle's distribution. Each emitted point consumes exactly one all-stars
/// query; symbols outside the projection pair map to fresh random bits.
class ProjectedSampleStream {
 public:
  ProjectedSampleStream(SubcubeOracle& oracle, int k);

  int n() const { return oracle_.shape().n(); }
  /// One sample of {-1,+1}^n (values are +1/-1).
  std::vector<int8_t> next();

 private:
  SubcubeOracle& oracle_;
  std::vector<std::pair<Symbol, Symbol>> pairs_;
  Restriction all_stars_;
};

}  // namespace hgut
