#include "fracvar/emfield.hpp"
#include "fracvar/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace fracvar;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
using Span = std::span<const double>;

TensorGrid box(std::size_t n) {
  return TensorGrid(std::vector<UniformGrid1D>(4, UniformGrid1D(0.0, 1.0, n)));
}

std::vector<FracOrder> orders(double a0, double a1, double a2, double a3) {
  return {FracOrder(a0), FracOrder(a1), FracOrder(a2), FracOrder(a3)};
}

std::vector<FracOrder> ones() { return orders(1, 1, 1, 1); }

double max_abs(const GridField &f) {
  double m = 0.0;
  for (double v : f.values())
    m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const GridField &a, const GridField &b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

GridField smooth_scalar(const TensorGrid &g, double phase) {
  return sample_field(
      [phase](Span x) {
        return std::sin(x[0] + 2 * x[1] - x[2] + 0.5 * x[3] + phase) + x[1] * x[3];
      },
      g);
}

// A_j -> partial Caputo of f along axis j, applied to the zero potential.
Potential pure_gauge(const TensorGrid &g, const std::vector<FracOrder> &a, const GridField &f) {
  return gauge_transform(Potential::zero(g, a), f);
}

} // namespace

TEST_CASE("shape checks") {
  const TensorGrid three({UniformGrid1D(0, 1, 4), UniformGrid1D(0, 1, 4), UniformGrid1D(0, 1, 4)});
  const auto a = orders(0.5, 0.5, 0.5, 0.5);
  CHECK_THROWS_AS(frac_grad(GridField::zeros(three), a), GridError);
  CHECK_THROWS_AS(frac_grad(GridField::zeros(box(4)), {FracOrder(0.5)}), OrderError);
  CHECK_THROWS_AS(em_density(orders(0.5, 0.5, 1.5, 0.5)), OrderError);
  CHECK_THROWS_AS(Potential::zero(three, a), GridError);
  CHECK_THROWS_AS(gauge_transform(Potential::zero(box(4), a), GridField::zeros(box(5))),
                  GridError);
}

TEST_CASE("frac_grad") {
  const auto g = box(8);
  const auto a = orders(0.6, 0.7, 0.8, 0.9);
  for (const auto &c : frac_grad(GridField::constant(g, 2.5), a))
    CHECK(max_abs(c) == 0.0);

  const auto x1 = sample_field([](Span x) { return x[1]; }, g);
  const auto gr = frac_grad(x1, a);
  const auto d = left_caputo(sample_1d([](double t) { return t; }, g.axis(1)), FracOrder(0.7));
  for (std::size_t k = 0; k < g.size(); ++k)
    CHECK(gr[0][k] == d[g.unravel(k)[1]]);
  CHECK(max_abs(gr[1]) == 0.0);
  CHECK(max_abs(gr[2]) == 0.0);

  // Classical gradient at order one.
  auto err = [](std::size_t n) {
    const auto gn = box(n);
    const auto f = sample_field([](Span x) { return std::sin(x[1] + 2 * x[2] - x[3]); }, gn);
    const auto G = frac_grad(f, ones());
    const double coef[3] = {1, 2, -1};
    double e = 0.0;
    std::vector<double> x(4);
    for (std::size_t k = 0; k < gn.size(); ++k) {
      gn.coordinates(k, x);
      for (int i = 0; i < 3; ++i)
        e = std::max(e, std::abs(G[i][k] - coef[i] * std::cos(x[1] + 2 * x[2] - x[3])));
    }
    return e;
  };
  CHECK(err(8) / err(16) >= 3.0);
}

TEST_CASE("frac_curl") {
  const auto g = box(6);
  const auto a = orders(0.6, 0.7, 0.8, 0.9);

  SUBCASE("curl of a fractional gradient vanishes") {
    const auto f = smooth_scalar(g, 0.2);
    const auto A = frac_grad(f, a);
    double scale = 0.0;
    for (const auto &c : A)
      scale = std::max(scale, max_abs(c));
    for (const auto &c : frac_curl(A, a))
      CHECK(max_abs(c) <= 8 * kEps * scale);
  }
  SUBCASE("constant field") {
    const auto c = GridField::constant(g, -1.25);
    for (const auto &h : frac_curl({c, c, c}, a))
      CHECK(max_abs(h) == 0.0);
  }
  SUBCASE("classical curl at order one") {
    auto err = [](std::size_t n) {
      const auto gn = box(n);
      // A = (sin x2, cos x3, x1 x2): curl = (x1 + sin x3, -x2, -cos x2).
      const std::array<GridField, 3> A = {
          sample_field([](Span x) { return std::sin(x[2]); }, gn),
          sample_field([](Span x) { return std::cos(x[3]); }, gn),
          sample_field([](Span x) { return x[1] * x[2]; }, gn)};
      const auto H = frac_curl(A, ones());
      double e = 0.0;
      std::vector<double> x(4);
      for (std::size_t k = 0; k < gn.size(); ++k) {
        gn.coordinates(k, x);
        e = std::max({e, std::abs(H[0][k] - (x[1] + std::sin(x[3]))),
                      std::abs(H[1][k] - (-x[2])), std::abs(H[2][k] - (-std::cos(x[2])))});
      }
      return e;
    };
    CHECK(err(8) / err(16) >= 3.0);
  }
}

TEST_CASE("em_fields") {
  const auto g = box(6);
  const auto a = orders(0.6, 0.7, 0.8, 0.9);

  SUBCASE("static scalar potential") {
    const auto A0 = sample_field([](Span x) { return std::cos(x[1] + x[2] * x[3]); }, g);
    const auto z = GridField::zeros(g);
    const auto F = em_fields(Potential(A0, {z, z, z}, a));
    const auto G = frac_grad(A0, a);
    for (int i = 0; i < 3; ++i) {
      CHECK(max_abs_diff(F.E[i], G[i]) == 0.0);
      CHECK(max_abs(F.H[i]) == 0.0);
    }
  }
  SUBCASE("time-constant vector potential") {
    const auto z = GridField::zeros(g);
    const auto A1 = sample_field([](Span x) { return x[2] * x[3] + x[1]; }, g);
    const auto F = em_fields(Potential(z, {A1, A1, A1}, a));
    for (const auto &e : F.E)
      CHECK(max_abs(e) == 0.0);
  }
  SUBCASE("pure gauge") {
    const auto f = smooth_scalar(g, 0.4);
    const auto P = pure_gauge(g, a, f);
    double scale = 0.0;
    for (std::size_t j = 0; j < 4; ++j)
      scale = std::max(scale, max_abs(partial_frac(f, j, OpKind::LeftCaputo, a[j])));
    const auto F = em_fields(P);
    for (int i = 0; i < 3; ++i) {
      CHECK(max_abs(F.E[i]) <= 8 * kEps * scale);
      CHECK(max_abs(F.H[i]) <= 8 * kEps * scale);
    }
  }
}

TEST_CASE("em_lagrangian") {
  const auto g = box(6);
  const auto a = orders(0.6, 0.7, 0.8, 0.9);
  const auto z = GridField::zeros(g);
  CHECK(em_lagrangian(Potential::zero(g, a)) == 0.0);
  CHECK(std::abs(em_lagrangian(pure_gauge(g, a, smooth_scalar(g, 1.0)))) <= 1e-25);

  // E only: static A0 = x1.
  const auto x1 = sample_field([](Span x) { return x[1]; }, g);
  CHECK(em_lagrangian(Potential(x1, {z, z, z}, a)) > 0.0);
  // H only: time-constant A2 = x1 gives H3 = D1 x1.
  CHECK(em_lagrangian(Potential(z, {z, x1, z}, a)) < 0.0);
}

TEST_CASE("gauge_transform") {
  const auto g = box(6);
  const auto a = orders(0.6, 0.7, 0.8, 0.9);
  const auto P = random_potential(g, a, 3);

  auto same = [](const Potential &p, const Potential &q) {
    double m = max_abs_diff(p.A0, q.A0);
    for (int i = 0; i < 3; ++i)
      m = std::max(m, max_abs_diff(p.A[i], q.A[i]));
    return m;
  };
  CHECK(same(gauge_transform(P, GridField::zeros(g)), P) == 0.0);
  CHECK(same(gauge_transform(P, GridField::constant(g, 3.5)), P) == 0.0);

  const auto f1 = smooth_scalar(g, 0.1), f2 = smooth_scalar(g, 2.0);
  const auto twice = gauge_transform(gauge_transform(P, f1), f2);
  const auto once = gauge_transform(P, f1 + f2);
  double scale = max_abs(P.A0);
  for (const auto &c : P.A)
    scale = std::max(scale, max_abs(c));
  for (std::size_t j = 0; j < 4; ++j)
    scale += max_abs(partial_frac(f1, j, OpKind::LeftCaputo, a[j])) +
             max_abs(partial_frac(f2, j, OpKind::LeftCaputo, a[j]));
  CHECK(same(twice, once) <= 8 * kEps * scale);
}

TEST_CASE("gauge invariance of fields and action") {
  const auto g = box(8);
  const auto a = orders(0.6, 0.7, 0.8, 0.9);
  const auto P = random_potential(g, a, 11);
  const auto f = smooth_scalar(g, 0.7);
  const auto Q = gauge_transform(P, f);

  // Rounding unit: the largest partial that enters E or H.
  double unit = 0.0;
  for (const auto *pot : {&P, &Q}) {
    const auto cfg = pot->as_config();
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 4; ++i)
        unit = std::max(unit, max_abs(partial_frac(cfg[j], i, OpKind::LeftCaputo, a[i])));
  }
  unit *= kEps;

  const auto F = em_fields(P), G = em_fields(Q);
  for (int i = 0; i < 3; ++i) {
    CHECK(max_abs_diff(F.E[i], G.E[i]) <= 8 * unit);
    CHECK(max_abs_diff(F.H[i], G.H[i]) <= 8 * unit);
  }
  const double J = em_lagrangian(P);
  CHECK(std::abs(em_lagrangian(Q) - J) <= 1e-12 * (1 + std::abs(J)));
}

TEST_CASE("em noether residual") {
  const auto g = box(6);
  const auto a = orders(0.6, 0.7, 0.8, 0.9);
  CHECK(max_abs(em_noether_residual(Potential::zero(g, a))) == 0.0);
  CHECK(em_noether_report(pure_gauge(g, a, smooth_scalar(g, 0.3))).max_norm() <= 1e-12);

  const auto P = random_potential(g, a, 5);
  CHECK(em_noether_report(P).max_norm() <= 1e-10);
  // A0^2 mass term breaks gauge invariance.
  const double c6 = em_noether_report(P, 0.5).max_norm();
  const double c12 = em_noether_report(random_potential(box(12), a, 5), 0.5).max_norm();
  CHECK(c6 > 1e-2);
  CHECK(c12 > 1e-2);
}
