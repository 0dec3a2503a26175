#include "hgut/rng.hpp"

#include <cmath>

#include "hgut/errors.hpp"

namespace hgut {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return eng_(); }

double Rng::canonical() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ArgumentError("Rng::below: n must be >= 1");
  const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % n;
  const std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() - rem;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v <= bound) return v % n;
  }
}

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw ArgumentError("Rng::uniform_int: empty range");
  return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

int Rng::sign() { return (next_u64() & 1u) ? 1 : -1; }

double Rng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = canonical();
  while (u1 <= 0.0) u1 = canonical();
  const double u2 = canonical();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_normal_ = true;
  return r * std::cos(theta);
}

double Rng::gamma(double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("Rng::gamma: alpha must be > 0");
  if (alpha < 1.0) {
    // Boost to alpha+1 and scale back.
    const double u = canonical();
    return gamma(alpha + 1.0) * std::pow(u > 0 ? u : 1e-300, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = canonical();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> Rng::dirichlet(double alpha, std::size_t k) {
  std::vector<double> w(k);
  double sum = 0.0;
  for (auto& wi : w) {
    wi = gamma(alpha);
    sum += wi;
  }
  if (sum <= 0.0) sum = 1.0;
  for (auto& wi : w) wi /= sum;
  return w;
}

std::vector<int> Rng::bernoulli_subset(int n, double sigma) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (canonical() < sigma) out.push_back(i);
  }
  return out;
}

std::vector<int> Rng::uniform_subset(int n, int t) {
  if (t < 0 || t > n) throw ArgumentError("Rng::uniform_subset: t out of range");
  // Selection sampling: include i with probability (t - taken)/(n - i).
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(t));
  int taken = 0;
  for (int i = 0; i < n && taken < t; ++i) {
    const double p = static_cast<double>(t - taken) / static_cast<double>(n - i);
    if (canonical() < p) {
      out.push_back(i);
      ++taken;
    }
  }
  return out;
}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x5851f42d4c957f2dULL)));
}

}  // namespace hgut
