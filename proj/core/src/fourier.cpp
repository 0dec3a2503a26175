#include "hgut/fourier.hpp"

#include <cmath>
#include <sstream>

#include "hgut/errors.hpp"

namespace hgut::fourier {

RootTable::RootTable(const GridShape& shape) {
  roots_.resize(static_cast<std::size_t>(shape.n()));
  for (int i = 0; i < shape.n(); ++i) {
    const int m = shape.side(i);
    auto& r = roots_[static_cast<std::size_t>(i)];
    r.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m);
      r[static_cast<std::size_t>(k)] = Cplx(std::cos(theta), std::sin(theta));
    }
  }
}

Cplx RootTable::root(int i, long long power) const {
  const auto& r = roots_[static_cast<std::size_t>(i)];
  const long long m = static_cast<long long>(r.size());
  long long k = power % m;
  if (k < 0) k += m;
  return r[static_cast<std::size_t>(k)];
}

ComplexField::ComplexField(GridShape shape, std::vector<Cplx> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (static_cast<std::int64_t>(values_.size()) != shape_.total_size()) {
    throw ArgumentError("ComplexField: value count does not match shape");
  }
}

ComplexField ComplexField::zero(GridShape shape) {
  std::vector<Cplx> v(static_cast<std::size_t>(shape.total_size()), Cplx(0, 0));
  return ComplexField(std::move(shape), std::move(v));
}

ComplexField ComplexField::constant(GridShape shape, Cplx c) {
  std::vector<Cplx> v(static_cast<std::size_t>(shape.total_size()), c);
  return ComplexField(std::move(shape), std::move(v));
}

ComplexField ComplexField::random(const GridShape& shape, Rng& rng, bool mean_zero) {
  std::vector<Cplx> v(static_cast<std::size_t>(shape.total_size()));
  for (auto& c : v) c = Cplx(rng.normal(), rng.normal());
  if (mean_zero) {
    Cplx mean(0, 0);
    for (const auto& c : v) mean += c;
    mean /= static_cast<double>(v.size());
    for (auto& c : v) c -= mean;
  }
  return ComplexField(shape, std::move(v));
}

ComplexField ComplexField::character(const GridShape& shape, const Point& u) {
  shape.require_point(u);
  const RootTable roots(shape);
  std::vector<Cplx> v(static_cast<std::size_t>(shape.total_size()));
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    Cplx prod(1, 0);
    for (int i = 0; i < shape.n(); ++i) {
      prod *= roots.root(i, static_cast<long long>(u[static_cast<std::size_t>(i)]) *
                                x[static_cast<std::size_t>(i)]);
    }
    v[static_cast<std::size_t>(idx)] = prod;
  }
  return ComplexField(shape, std::move(v));
}

Cplx ComplexField::mean() const {
  Cplx acc(0, 0);
  for (const auto& c : values_) acc += c;
  return acc / static_cast<double>(values_.size());
}

FourierCoefficients::FourierCoefficients(GridShape shape, std::vector<Cplx> coeffs)
    : shape_(std::move(shape)), coeffs_(std::move(coeffs)) {
  if (static_cast<std::int64_t>(coeffs_.size()) != shape_.total_size()) {
    throw ArgumentError("FourierCoefficients: count does not match shape");
  }
}

int support_size(const GridShape& shape, std::int64_t u_idx) {
  Point u;
  shape.decode_into(u_idx, u);
  int c = 0;
  for (int v : u) c += (v != 0);
  return c;
}

FourierCoefficients dft(const ComplexField& f, std::int64_t cap) {
  const GridShape& shape = f.shape();
  const std::int64_t size = shape.total_size();
  if (size > cap) throw CapacityError("dft: total_size exceeds cap");
  const RootTable roots(shape);
  const double inv = 1.0 / static_cast<double>(size);
  std::vector<Cplx> coeffs(static_cast<std::size_t>(size));
  std::vector<Point> pts = enumerate_points(shape);
  Point u;
  for (std::int64_t ui = 0; ui < size; ++ui) {
    shape.decode_into(ui, u);
    Cplx acc(0, 0);
    for (std::int64_t xi = 0; xi < size; ++xi) {
      const Point& x = pts[static_cast<std::size_t>(xi)];
      Cplx chi(1, 0);
      for (int i = 0; i < shape.n(); ++i) {
        chi *= roots.root(i, -static_cast<long long>(u[static_cast<std::size_t>(i)]) *
                                 x[static_cast<std::size_t>(i)]);
      }
      acc += f[xi] * chi;
    }
    coeffs[static_cast<std::size_t>(ui)] = acc * inv;
  }
  return FourierCoefficients(shape, std::move(coeffs));
}

ComplexField idft(const FourierCoefficients& F, std::int64_t cap) {
  const GridShape& shape = F.shape();
  const std::int64_t size = shape.total_size();
  if (size > cap) throw CapacityError("idft: total_size exceeds cap");
  const RootTable roots(shape);
  std::vector<Cplx> values(static_cast<std::size_t>(size));
  std::vector<Point> pts = enumerate_points(shape);
  Point u;
  for (std::int64_t xi = 0; xi < size; ++xi) {
    const Point& x = pts[static_cast<std::size_t>(xi)];
    Cplx acc(0, 0);
    for (std::int64_t ui = 0; ui < size; ++ui) {
      shape.decode_into(ui, u);
      Cplx chi(1, 0);
      for (int i = 0; i < shape.n(); ++i) {
        chi *= roots.root(i, static_cast<long long>(u[static_cast<std::size_t>(i)]) *
                                x[static_cast<std::size_t>(i)]);
      }
      acc += F[ui] * chi;
    }
    values[static_cast<std::size_t>(xi)] = acc;
  }
  return ComplexField(shape, std::move(values));
}

ComplexField laplacian(const ComplexField& f, int i) {
  const GridShape& shape = f.shape();
  if (i < 0 || i >= shape.n()) throw ArgumentError("laplacian: coordinate out of range");
  const int m = shape.side(i);
  std::vector<Cplx> out(static_cast<std::size_t>(shape.total_size()));
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    Cplx avg(0, 0);
    for (int a = 0; a < m; ++a) {
      avg += f.at(with_coordinate(x, i, a));
    }
    out[static_cast<std::size_t>(idx)] = f[idx] - avg / static_cast<double>(m);
  }
  return ComplexField(shape, std::move(out));
}

ComplexField laplacian_spectral(const ComplexField& f, int i) {
  const GridShape& shape = f.shape();
  if (i < 0 || i >= shape.n()) throw ArgumentError("laplacian_spectral: coordinate out of range");
  FourierCoefficients F = dft(f);
  std::vector<Cplx> coeffs = F.values();
  Point u;
  for (std::int64_t ui = 0; ui < shape.total_size(); ++ui) {
    shape.decode_into(ui, u);
    if (u[static_cast<std::size_t>(i)] == 0) coeffs[static_cast<std::size_t>(ui)] = Cplx(0, 0);
  }
  return idft(FourierCoefficients(shape, std::move(coeffs)));
}

ComplexField partial_laplacian(const ComplexField& f, int i, Symbol a) {
  const GridShape& shape = f.shape();
  if (i < 0 || i >= shape.n() || a < 0 || a >= shape.side(i)) {
    throw ArgumentError("partial_laplacian: index out of range");
  }
  const double inv_m = 1.0 / static_cast<double>(shape.side(i));
  std::vector<Cplx> out(static_cast<std::size_t>(shape.total_size()));
  Point x;
  for (std::int64_t idx = 0; idx < shape.total_size(); ++idx) {
    shape.decode_into(idx, x);
    out[static_cast<std::size_t>(idx)] = (f[idx] - f.at(with_coordinate(x, i, a))) * inv_m;
  }
  return ComplexField(shape, std::move(out));
}

ComplexField noise_operator(const ComplexField& f, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("noise_operator: rho in [0,1]");
  const GridShape& shape = f.shape();
  const std::int64_t size = shape.total_size();
  std::vector<Point> pts = enumerate_points(shape);
  std::vector<Cplx> out(static_cast<std::size_t>(size));
  for (std::int64_t xi = 0; xi < size; ++xi) {
    const Point& x = pts[static_cast<std::size_t>(xi)];
    Cplx acc(0, 0);
    for (std::int64_t yi = 0; yi < size; ++yi) {
      const Point& y = pts[static_cast<std::size_t>(yi)];
      double w = 1.0;
      for (int i = 0; i < shape.n(); ++i) {
        const double base = (1.0 - rho) / static_cast<double>(shape.side(i));
        w *= (y[static_cast<std::size_t>(i)] == x[static_cast<std::size_t>(i)]) ? rho + base : base;
      }
      acc += w * f[yi];
    }
    out[static_cast<std::size_t>(xi)] = acc;
  }
  return ComplexField(shape, std::move(out));
}

ComplexField noise_operator_spectral(const ComplexField& f, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("noise_operator_spectral: rho in [0,1]");
  const GridShape& shape = f.shape();
  FourierCoefficients F = dft(f);
  std::vector<Cplx> coeffs = F.values();
  for (std::int64_t ui = 0; ui < shape.total_size(); ++ui) {
    coeffs[static_cast<std::size_t>(ui)] *= std::pow(rho, support_size(shape, ui));
  }
  return idft(FourierCoefficients(shape, std::move(coeffs)));
}

Cplx two_point_smooth(const ComplexField& g, double t, const Point& x, const Point& y) {
  if (!(t >= 0.0 && t <= 1.0)) throw ArgumentError("two_point_smooth: t in [0,1]");
  const GridShape& shape = g.shape();
  shape.require_point(x);
  shape.require_point(y);
  const int n = shape.n();
  if (n > 24) throw CapacityError("two_point_smooth: n too large for exhaustive mixture");
  Cplx acc(0, 0);
  Point z(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const bool takes_x = (mask >> i) & 1u;
      w *= takes_x ? t : (1.0 - t);
      z[static_cast<std::size_t>(i)] =
          takes_x ? x[static_cast<std::size_t>(i)] : y[static_cast<std::size_t>(i)];
    }
    if (w != 0.0) acc += w * g.at(z);
  }
  return acc;
}

Cplx two_point_smooth_spectral(const FourierCoefficients& G, double t, const Point& x,
                               const Point& y) {
  const GridShape& shape = G.shape();
  shape.require_point(x);
  shape.require_point(y);
  const RootTable roots(shape);
  Cplx acc(0, 0);
  Point u;
  for (std::int64_t ui = 0; ui < shape.total_size(); ++ui) {
    shape.decode_into(ui, u);
    Cplx prod(1, 0);
    for (int i = 0; i < shape.n(); ++i) {
      const long long uu = u[static_cast<std::size_t>(i)];
      prod *= t * roots.root(i, uu * x[static_cast<std::size_t>(i)]) +
              (1.0 - t) * roots.root(i, uu * y[static_cast<std::size_t>(i)]);
    }
    acc += G[ui] * prod;
  }
  return acc;
}

ComplexField delta_gamma(const ComplexField& f, double gamma) {
  if (!(gamma >= 0.0)) throw ArgumentError("delta_gamma: gamma must be >= 0");
  const GridShape& shape = f.shape();
  FourierCoefficients F = dft(f);
  std::vector<Cplx> coeffs = F.values();
  for (std::int64_t ui = 0; ui < shape.total_size(); ++ui) {
    const int su = support_size(shape, ui);
    // u = 0 maps to 0 for every gamma, sidestepping 0^0.
    coeffs[static_cast<std::size_t>(ui)] *=
        (su == 0) ? 0.0 : std::pow(static_cast<double>(su), gamma);
  }
  return idft(FourierCoefficients(shape, std::move(coeffs)));
}

double lp_norm(const ComplexField& f, double s) {
  if (!(s >= 1.0)) throw ArgumentError("lp_norm: s must be >= 1");
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::pow(std::abs(v), s);
  acc /= static_cast<double>(f.values().size());
  return std::pow(acc, 1.0 / s);
}

std::string coefficients_to_csv(const FourierCoefficients& F) {
  std::ostringstream os;
  os << "u_index,support,magnitude\n";
  os.precision(17);
  for (std::int64_t u = 0; u < F.shape().total_size(); ++u) {
    os << u << ',' << support_size(F.shape(), u) << ',' << std::abs(F[u]) << '\n';
  }
  return os.str();
}

}  // namespace hgut::fourier
