#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hgut/grid.hpp"
#include "hgut/rng.hpp"

namespace hgut::fourier {

using Cplx = std::complex<double>;

/// Character table: roots[i][k] = exp(2*pi*I * k / m_i).
class RootTable {
 public:
  explicit RootTable(const GridShape& shape);
  /// omega_i^power with power reduced mod m_i (negative powers allowed).
  Cplx root(int i, long long power) const;

 private:
  std::vector<std::vector<Cplx>> roots_;
};

/// A complex-valued function on Z_M, stored densely in row-major order.
class ComplexField {
 public:
  ComplexField(GridShape shape, std::vector<Cplx> values);
  static ComplexField zero(GridShape shape);
  static ComplexField constant(GridShape shape, Cplx c);
  /// Independent standard complex Gaussians per cell; optionally recentred
  /// so the empirical mean is exactly zero.
  static ComplexField random(const GridShape& shape, Rng& rng, bool mean_zero);
  /// The single character x -> prod_i omega_i^{u_i x_i}.
  static ComplexField character(const GridShape& shape, const Point& u);

  const GridShape& shape() const { return shape_; }
  const std::vector<Cplx>& values() const { return values_; }
  Cplx operator[](std::int64_t idx) const { return values_[static_cast<std::size_t>(idx)]; }
  Cplx at(const Point& p) const { return values_[static_cast<std::size_t>(shape_.index_of(p))]; }

  Cplx mean() const;

 private:
  GridShape shape_;
  std::vector<Cplx> values_;
};

/// Fourier coefficients f_hat(u), indexed by u in row-major order over Z_M.
class FourierCoefficients {
 public:
  FourierCoefficients(GridShape shape, std::vector<Cplx> coeffs);
  const GridShape& shape() const { return shape_; }
  const std::vector<Cplx>& values() const { return coeffs_; }
  Cplx operator[](std::int64_t idx) const { return coeffs_[static_cast<std::size_t>(idx)]; }

 private:
  GridShape shape_;
  std::vector<Cplx> coeffs_;
};

/// Number of nonzero coordinates of the frequency u with the given index (#u).
int support_size(const GridShape& shape, std::int64_t u_idx);

/// f_hat(u) = (prod_i 1/m_i) * sum_x f(x) * prod_i omega_i^{-u_i x_i}.
/// Naive quadratic transform; correctness-first at desk scale.
FourierCoefficients dft(const ComplexField& f, std::int64_t cap = 100'000);

/// f(x) = sum_u f_hat(u) * prod_i omega_i^{u_i x_i}.
ComplexField idft(const FourierCoefficients& F, std::int64_t cap = 100'000);

/// L_i f(x) = f(x) - E_{a ~ Z_{m_i}}[f(x^{(i)->a})]  (definitional form).
ComplexField laplacian(const ComplexField& f, int i);
/// Spectral form of L_i (keeps only u with u_i != 0); cross-check path.
ComplexField laplacian_spectral(const ComplexField& f, int i);
/// L_i^a f(x) = (f(x) - f(x^{(i)->a})) / m_i.
ComplexField partial_laplacian(const ComplexField& f, int i, Symbol a);

/// T_rho f(x) = E_{y ~ N_rho(x)}[f(y)], exhaustive expectation over y.
ComplexField noise_operator(const ComplexField& f, double rho);
/// Spectral form: multiplies f_hat(u) by rho^{#u}.
ComplexField noise_operator_spectral(const ComplexField& f, double rho);

/// g_{t,1-t}(x,y): expectation of g(z) with z_i = x_i w.p. t, else y_i.
/// Exhaustive mixture over the 2^n support.
Cplx two_point_smooth(const ComplexField& g, double t, const Point& x, const Point& y);
/// Product-form spectral expression sum_u g_hat(u) prod_i (t w^{u_i x_i} + (1-t) w^{u_i y_i}).
Cplx two_point_smooth_spectral(const FourierCoefficients& g, double t, const Point& x,
                               const Point& y);

/// Delta^gamma f: multiplies f_hat(u) by (#u)^gamma; the u = 0 coefficient
/// maps to 0 for every gamma >= 0 (all intended uses have f_hat(0) = 0).
ComplexField delta_gamma(const ComplexField& f, double gamma);

/// ||f||_s = (E_x |f(x)|^s)^{1/s} under the uniform measure, s >= 1.
double lp_norm(const ComplexField& f, double s);

/// Debug dump: one "u_index,support,magnitude" row per coefficient.
std::string coefficients_to_csv(const FourierCoefficients& F);

}  // namespace hgut::fourier
