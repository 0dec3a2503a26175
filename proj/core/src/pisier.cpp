#include "hgut/pisier.hpp"

#include <cmath>

#include "hgut/errors.hpp"

namespace hgut::pisier {

using fourier::FourierCoefficients;
using fourier::RootTable;
using verify::VerificationReport;

namespace {

constexpr std::int64_t kPairExpectationCap = 200;

void require_pair_capacity(const GridShape& shape, const char* what) {
  if (shape.total_size() > kPairExpectationCap) {
    throw CapacityError(std::string(what) + ": O(N^2) pair expectation needs total_size <= " +
                        std::to_string(kPairExpectationCap));
  }
}

void require_mean_zero(const ComplexField& f, const char* what) {
  double scale = 0.0;
  for (const auto& v : f.values()) scale = std::max(scale, std::abs(v));
  if (std::abs(f.mean()) > 1e-9 * std::max(1.0, scale)) {
    throw ArgumentError(std::string(what) + ": f must have zero mean");
  }
}

/// Per-point, per-coordinate, per-frequency coefficients C[x][i][a-1] such
/// that the inner sum at (x, y) is sum_i sum_a w_i^{-a y_i} C[x][i][a-1].
using CoeffTable = std::vector<std::vector<std::vector<Cplx>>>;

double pair_expectation_lp(const GridShape& shape, const CoeffTable& coeff, double s) {
  const RootTable roots(shape);
  const std::int64_t size = shape.total_size();
  const auto pts = enumerate_points(shape);
  double acc = 0.0;
  for (std::int64_t xi = 0; xi < size; ++xi) {
    for (std::int64_t yi = 0; yi < size; ++yi) {
      const Point& y = pts[static_cast<std::size_t>(yi)];
      Cplx inner(0, 0);
      for (int i = 0; i < shape.n(); ++i) {
        const auto& ci = coeff[static_cast<std::size_t>(xi)][static_cast<std::size_t>(i)];
        for (int a = 1; a < shape.side(i); ++a) {
          inner += roots.root(i, -static_cast<long long>(a) * y[static_cast<std::size_t>(i)]) *
                   ci[static_cast<std::size_t>(a - 1)];
        }
      }
      acc += std::pow(std::abs(inner), s);
    }
  }
  acc /= static_cast<double>(size) * static_cast<double>(size);
  return std::pow(acc, 1.0 / s);
}

}  // namespace

Orientation::Orientation(GridShape shape) : shape_(std::move(shape)) {
  out_.resize(static_cast<std::size_t>(shape_.total_size()));
}

Orientation Orientation::from_edge_set(const graphs::OrientedEdgeSet& g) {
  Orientation o(g.shape());
  for (std::int64_t x = 0; x < g.shape().total_size(); ++x) {
    o.out_[static_cast<std::size_t>(x)] = g.outgoing(x);
  }
  return o;
}

Orientation Orientation::random(const GridShape& shape, Rng& rng) {
  Orientation o(shape);
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    for (int i = 0; i < shape.n(); ++i) {
      for (Symbol b = x[static_cast<std::size_t>(i)] + 1; b < shape.side(i); ++b) {
        const std::int64_t other = shape.index_of(with_coordinate(x, i, b));
        if (rng.bernoulli(0.5)) {
          o.out_[static_cast<std::size_t>(idx)].push_back({i, b});
        } else {
          o.out_[static_cast<std::size_t>(other)].push_back({i, x[static_cast<std::size_t>(i)]});
        }
      }
    }
  }
  return o;
}

std::int64_t Orientation::num_edges() const {
  std::int64_t n = 0;
  for (const auto& v : out_) n += static_cast<std::int64_t>(v.size());
  return n;
}

double plain_rhs(const ComplexField& f, double s) {
  const GridShape& shape = f.shape();
  require_pair_capacity(shape, "plain_rhs");
  if (!(s >= 1.0)) throw ArgumentError("plain_rhs: s must be >= 1");
  const RootTable roots(shape);
  const std::int64_t size = shape.total_size();
  const auto pts = enumerate_points(shape);

  std::vector<ComplexField> lap;
  lap.reserve(static_cast<std::size_t>(shape.n()));
  for (int i = 0; i < shape.n(); ++i) lap.push_back(fourier::laplacian(f, i));

  CoeffTable coeff(static_cast<std::size_t>(size));
  for (std::int64_t xi = 0; xi < size; ++xi) {
    const Point& x = pts[static_cast<std::size_t>(xi)];
    coeff[static_cast<std::size_t>(xi)].resize(static_cast<std::size_t>(shape.n()));
    for (int i = 0; i < shape.n(); ++i) {
      auto& ci = coeff[static_cast<std::size_t>(xi)][static_cast<std::size_t>(i)];
      ci.resize(static_cast<std::size_t>(shape.side(i) - 1));
      for (int a = 1; a < shape.side(i); ++a) {
        ci[static_cast<std::size_t>(a - 1)] =
            roots.root(i, static_cast<long long>(a) * x[static_cast<std::size_t>(i)]) *
            lap[static_cast<std::size_t>(i)][xi];
      }
    }
  }
  return pair_expectation_lp(shape, coeff, s);
}

namespace {

/// Builds the robust inner-sum coefficients for field F and orientation G:
/// C[x][i][a-1] = w^{a x_i} * sum_{d: (x,x^{(i)->x_i+d}) in G}
///                 (1 - w^{ad}) * (F(x) - F(x^{(i)->x_i+d})) / m_i.
CoeffTable robust_coeffs(const ComplexField& F, const Orientation& G) {
  const GridShape& shape = F.shape();
  const RootTable roots(shape);
  const std::int64_t size = shape.total_size();
  const auto pts = enumerate_points(shape);
  CoeffTable coeff(static_cast<std::size_t>(size));
  for (std::int64_t xi = 0; xi < size; ++xi) {
    const Point& x = pts[static_cast<std::size_t>(xi)];
    coeff[static_cast<std::size_t>(xi)].assign(static_cast<std::size_t>(shape.n()), {});
    for (int i = 0; i < shape.n(); ++i) {
      coeff[static_cast<std::size_t>(xi)][static_cast<std::size_t>(i)].assign(
          static_cast<std::size_t>(shape.side(i) - 1), Cplx(0, 0));
    }
    for (const auto& [i, b] : G.outgoing(xi)) {
      const int m = shape.side(i);
      const int d = ((b - x[static_cast<std::size_t>(i)]) % m + m) % m;
      const Cplx part =
          (F[xi] - F.at(with_coordinate(x, i, b))) / static_cast<double>(m);
      auto& ci = coeff[static_cast<std::size_t>(xi)][static_cast<std::size_t>(i)];
      for (int a = 1; a < m; ++a) {
        const Cplx factor = Cplx(1, 0) - roots.root(i, static_cast<long long>(a) * d);
        ci[static_cast<std::size_t>(a - 1)] +=
            roots.root(i, static_cast<long long>(a) * x[static_cast<std::size_t>(i)]) * factor *
            part;
      }
    }
  }
  return coeff;
}

/// E_{x,y}[ conj(g_{t,1-t}(x,y)) * sum_i sum_a w^{-a y_i} C[x][i][a-1] ],
/// with the smoothing evaluated by the exhaustive 2^n mixture.
Cplx smoothed_pair_expectation(const ComplexField& g, double t, const CoeffTable& coeff,
                               const GridShape& shape) {
  const RootTable roots(shape);
  const std::int64_t size = shape.total_size();
  const auto pts = enumerate_points(shape);
  Cplx acc(0, 0);
  for (std::int64_t xi = 0; xi < size; ++xi) {
    const Point& x = pts[static_cast<std::size_t>(xi)];
    for (std::int64_t yi = 0; yi < size; ++yi) {
      const Point& y = pts[static_cast<std::size_t>(yi)];
      Cplx inner(0, 0);
      for (int i = 0; i < shape.n(); ++i) {
        const auto& ci = coeff[static_cast<std::size_t>(xi)][static_cast<std::size_t>(i)];
        for (int a = 1; a < shape.side(i); ++a) {
          inner += roots.root(i, -static_cast<long long>(a) * y[static_cast<std::size_t>(i)]) *
                   ci[static_cast<std::size_t>(a - 1)];
        }
      }
      acc += std::conj(fourier::two_point_smooth(g, t, x, y)) * inner;
    }
  }
  return acc / (static_cast<double>(size) * static_cast<double>(size));
}

}  // namespace

double robust_rhs(const ComplexField& f, double s, const Orientation& G) {
  const GridShape& shape = f.shape();
  require_pair_capacity(shape, "robust_rhs");
  if (!(s >= 1.0)) throw ArgumentError("robust_rhs: s must be >= 1");
  if (G.shape() != shape) throw ArgumentError("robust_rhs: orientation shape mismatch");
  return pair_expectation_lp(shape, robust_coeffs(f, G), s);
}

VerificationReport check_smoothing_identity(const ComplexField& f, const ComplexField& g,
                                            double t, double gamma, double tol) {
  const GridShape& shape = f.shape();
  require_pair_capacity(shape, "check_smoothing_identity");
  require_mean_zero(f, "check_smoothing_identity");
  if (!(t > 0.0 && t < 1.0)) throw ArgumentError("check_smoothing_identity: t in (0,1)");
  if (g.shape() != shape) throw ArgumentError("check_smoothing_identity: g shape mismatch");

  const FourierCoefficients fhat = fourier::dft(f);
  const FourierCoefficients ghat = fourier::dft(g);
  Cplx lhs(0, 0);
  for (std::int64_t ui = 0; ui < shape.total_size(); ++ui) {
    const int su = fourier::support_size(shape, ui);
    if (su == 0) continue;
    lhs += std::pow(t, su - 1) * std::pow(static_cast<double>(su), gamma + 1.0) * fhat[ui] *
           std::conj(ghat[ui]);
  }

  // C[x][i][a-1] = w^{a x_i} * (L_i Delta^gamma f)(x).
  const ComplexField dgf = fourier::delta_gamma(f, gamma);
  const RootTable roots(shape);
  const auto pts = enumerate_points(shape);
  CoeffTable coeff(static_cast<std::size_t>(shape.total_size()));
  std::vector<ComplexField> lap;
  for (int i = 0; i < shape.n(); ++i) lap.push_back(fourier::laplacian(dgf, i));
  for (std::int64_t xi = 0; xi < shape.total_size(); ++xi) {
    const Point& x = pts[static_cast<std::size_t>(xi)];
    coeff[static_cast<std::size_t>(xi)].resize(static_cast<std::size_t>(shape.n()));
    for (int i = 0; i < shape.n(); ++i) {
      auto& ci = coeff[static_cast<std::size_t>(xi)][static_cast<std::size_t>(i)];
      ci.resize(static_cast<std::size_t>(shape.side(i) - 1));
      for (int a = 1; a < shape.side(i); ++a) {
        ci[static_cast<std::size_t>(a - 1)] =
            roots.root(i, static_cast<long long>(a) * x[static_cast<std::size_t>(i)]) *
            lap[static_cast<std::size_t>(i)][xi];
      }
    }
  }
  const Cplx rhs = smoothed_pair_expectation(g, t, coeff, shape) / (1.0 - t);

  VerificationReport rep;
  rep.name = "smoothing_spectral_identity";
  rep.instance = shape.to_string() + " t=" + std::to_string(t) + " gamma=" + std::to_string(gamma);
  rep.is_identity = true;
  rep.lhs = std::abs(lhs);
  rep.rhs = std::abs(rhs);
  rep.deviation = std::abs(lhs - rhs);
  rep.tolerance = tol;
  rep.ratio = VerificationReport::safe_ratio(rep.lhs, rep.rhs);
  rep.holds = rep.deviation <= tol;
  rep.cases_checked = 1;
  return rep;
}

VerificationReport check_orientation_grouping_identity(const ComplexField& f,
                                                       const ComplexField& g, double t,
                                                       double gamma, const Orientation& G,
                                                       double tol) {
  const GridShape& shape = f.shape();
  require_pair_capacity(shape, "check_orientation_grouping_identity");
  require_mean_zero(f, "check_orientation_grouping_identity");
  if (!(t > 0.0 && t < 1.0)) throw ArgumentError("check_orientation_grouping_identity: t in (0,1)");
  if (g.shape() != shape || G.shape() != shape) {
    throw ArgumentError("check_orientation_grouping_identity: shape mismatch");
  }

  const ComplexField dgf = fourier::delta_gamma(f, gamma);
  const RootTable roots(shape);
  const auto pts = enumerate_points(shape);
  const std::int64_t size = shape.total_size();

  // Ungrouped: sum over all b in Z_{m_i} of L_i^b (the b = x_i term is 0).
  CoeffTable ungrouped(static_cast<std::size_t>(size));
  for (std::int64_t xi = 0; xi < size; ++xi) {
    const Point& x = pts[static_cast<std::size_t>(xi)];
    ungrouped[static_cast<std::size_t>(xi)].resize(static_cast<std::size_t>(shape.n()));
    for (int i = 0; i < shape.n(); ++i) {
      const int m = shape.side(i);
      Cplx sum_b(0, 0);
      for (Symbol b = 0; b < m; ++b) {
        sum_b += (dgf[xi] - dgf.at(with_coordinate(x, i, b))) / static_cast<double>(m);
      }
      auto& ci = ungrouped[static_cast<std::size_t>(xi)][static_cast<std::size_t>(i)];
      ci.resize(static_cast<std::size_t>(m - 1));
      for (int a = 1; a < m; ++a) {
        ci[static_cast<std::size_t>(a - 1)] =
            roots.root(i, static_cast<long long>(a) * x[static_cast<std::size_t>(i)]) * sum_b;
      }
    }
  }
  const Cplx lhs = smoothed_pair_expectation(g, t, ungrouped, shape);
  const Cplx rhs = smoothed_pair_expectation(g, t, robust_coeffs(dgf, G), shape);

  VerificationReport rep;
  rep.name = "orientation_grouping_identity";
  rep.instance = shape.to_string() + " t=" + std::to_string(t) + " gamma=" + std::to_string(gamma);
  rep.is_identity = true;
  rep.lhs = std::abs(lhs);
  rep.rhs = std::abs(rhs);
  rep.deviation = std::abs(lhs - rhs);
  rep.tolerance = tol;
  rep.ratio = VerificationReport::safe_ratio(rep.lhs, rep.rhs);
  rep.holds = rep.deviation <= tol;
  rep.cases_checked = 1;
  return rep;
}

}  // namespace hgut::pisier
