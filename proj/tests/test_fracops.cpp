#include "fracvar/error.hpp"
#include "fracvar/fracops.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

using namespace fracvar;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs_diff(const GridFn1D &a, const GridFn1D &b, std::size_t from = 0) {
  double m = 0.0;
  for (std::size_t j = from; j < a.size(); ++j)
    m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

double max_abs(const GridFn1D &a) {
  double m = 0.0;
  for (double v : a.values())
    m = std::max(m, std::abs(v));
  return m;
}

GridFn1D reflect(const GridFn1D &f) {
  std::vector<double> v(f.values().rbegin(), f.values().rend());
  return GridFn1D::unchecked(f.grid(), v);
}

const UniformGrid1D unit(std::size_t n) { return UniformGrid1D(0.0, 1.0, n); }

} // namespace

TEST_CASE("gamma") {
  CHECK(fracvar::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fracvar::gamma(4.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(fracvar::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(std::abs(oracle::gamma(0.5) - 1.7724538509) < 1e-10);
  CHECK(std::abs(fracvar::gamma(0.5) - 1.7724538509) < 1e-10);

  double worst = 0.0;
  for (double z = 0.01; z < 30.0; z += 0.0731) {
    const double ref = oracle::gamma(z);
    worst = std::max(worst, std::abs(fracvar::gamma(z) - ref) / ref);
  }
  CHECK(worst <= 1e-13);

  CHECK_THROWS_AS(fracvar::gamma(0.0), PoleError);
  CHECK_THROWS_AS(fracvar::gamma(-3.0), PoleError);
  CHECK(reciprocal_gamma(-2.0) == 0.0);
  CHECK(reciprocal_gamma(2.5) == doctest::Approx(1.0 / oracle::gamma(2.5)));
  CHECK(fracvar::gamma(-0.5) == doctest::Approx(oracle::gamma(-0.5)).epsilon(1e-13));
}

TEST_CASE("orders") {
  CHECK_THROWS_AS(FracOrder(-0.1), OrderError);
  CHECK_THROWS_AS(FracOrder(NAN), OrderError);
  const auto f = sample_1d([](double t) { return t; }, unit(16));
  CHECK_THROWS_AS(left_rl_integral(f, FracOrder(1.2)), OrderError);
  CHECK_THROWS_AS(left_caputo(f, FracOrder(0.0)), OrderError);
  CHECK_THROWS_AS(right_caputo(f, FracOrder(1.5)), OrderError);
  CHECK_THROWS_AS(left_rl_derivative(f, FracOrder(0.0)), OrderError);
  CHECK_THROWS_AS(left_caputo_high(f, FracOrder(1.0)), OrderError);
  CHECK_THROWS_AS(right_caputo_high(f, FracOrder(0.5)), OrderError);
  CHECK_THROWS_AS(left_caputo_high(sample_1d([](double t) { return t; }, unit(6)),
                                   FracOrder(1.5)),
                  GridError);
}

TEST_CASE("rl integrals") {
  const auto g = unit(256);
  const auto one = sample_1d([](double) { return 1.0; }, g);
  const double ref = oracle::left_rl_integral([](double) { return 1.0; }, 0.0, 1.0, 0.5);
  CHECK(std::abs(ref - 1.1283791671) < 1e-10);
  CHECK(std::abs(ref - oracle::right_rl_integral([](double) { return 1.0; }, 0.0, 1.0, 0.5)) <
        1e-14);

  // Constants are piecewise linear, so the product rule is exact.
  CHECK(left_rl_integral(one, FracOrder(0.5))[g.n()] == doctest::Approx(ref).epsilon(1e-13));
  CHECK(right_rl_integral(one, FracOrder(0.5))[0] == doctest::Approx(ref).epsilon(1e-13));
  CHECK(left_rl_integral(one, FracOrder(0.5))[0] == 0.0);
  CHECK(right_rl_integral(one, FracOrder(0.5))[g.n()] == 0.0);

  const auto zero = GridFn1D::zeros(g);
  CHECK(max_abs(left_rl_integral(zero, FracOrder(0.7))) == 0.0);
  CHECK(max_abs(right_rl_integral(zero, FracOrder(0.7))) == 0.0);

  const auto two_t = sample_1d([](double t) { return 2 * t; }, g);
  const auto sq = sample_1d([](double t) { return t * t; }, g);
  CHECK(max_abs_diff(left_rl_integral(two_t, FracOrder(1.0)), sq) <= 10 * g.h() * g.h());

  // Smooth non-polynomial data against the oracle.
  const auto fn = [](double t) { return std::exp(-t) * std::cos(3 * t); };
  const auto f = sample_1d(fn, g);
  const auto I = left_rl_integral(f, FracOrder(0.4));
  const auto J = right_rl_integral(f, FracOrder(0.4));
  for (std::size_t j : {1u, 37u, 128u, 256u}) {
    CHECK(std::abs(I[j] - oracle::left_rl_integral(fn, 0.0, g.node(j), 0.4)) < 1e-4);
    CHECK(std::abs(J[256 - j] - oracle::right_rl_integral(fn, g.node(256 - j), 1.0, 0.4)) <
          1e-4);
  }
}

TEST_CASE("rl integral of order zero is the identity") {
  const auto f = sample_1d([](double t) { return std::sin(7 * t) - t * t; }, unit(33));
  const auto L = left_rl_integral(f, FracOrder(0.0));
  const auto R = right_rl_integral(f, FracOrder(0.0));
  for (std::size_t j = 0; j < f.size(); ++j) {
    CHECK(L[j] == f[j]);
    CHECK(R[j] == f[j]);
  }
}

TEST_CASE("caputo derivatives") {
  const auto g = unit(256);
  const double ref =
      oracle::left_caputo([](double) { return 1.0; }, 0.0, 1.0, 0.5);
  CHECK(std::abs(ref - 1.1283791671) < 1e-10);
  const double rref =
      oracle::right_caputo([](double) { return -1.0; }, 0.0, 1.0, 0.5);
  CHECK(std::abs(rref - 1.1283791671) < 1e-10);

  const auto t = sample_1d([](double s) { return s; }, g);
  const auto one_minus = sample_1d([](double s) { return 1 - s; }, g);
  const double tol15 = 2 * std::pow(g.h(), 1.5);
  CHECK(std::abs(left_caputo(t, FracOrder(0.5))[g.n()] - ref) <= tol15);
  CHECK(std::abs(right_caputo(one_minus, FracOrder(0.5))[0] - rref) <= tol15);

  const auto c = sample_1d([](double) { return 3.25; }, g);
  for (double a : {0.1, 0.5, 0.9, 1.0}) {
    CHECK(max_abs(left_caputo(c, FracOrder(a))) == 0.0);
    CHECK(max_abs(right_caputo(c, FracOrder(a))) == 0.0);
  }

  const auto sq = sample_1d([](double s) { return s * s; }, g);
  const auto two_t = sample_1d([](double s) { return 2 * s; }, g);
  CHECK(max_abs_diff(left_caputo(sq, FracOrder(1.0)), two_t) <= 10 * g.h() * g.h());
  CHECK(max_abs_diff(right_caputo(t, FracOrder(1.0)),
                     sample_1d([](double) { return -1.0; }, g)) <= 10 * g.h() * g.h());
  CHECK(max_abs_diff(left_caputo(sq, FracOrder(1.0)), fd_derivative(sq, 1)) == 0.0);

  // Smooth data against the oracle, interior and right-sided.
  const auto fn = [](double s) { return std::sin(2 * s + 0.3); };
  const auto dfn = [](double s) { return 2 * std::cos(2 * s + 0.3); };
  const auto f = sample_1d(fn, g);
  const auto L = left_caputo(f, FracOrder(0.35));
  const auto R = right_caputo(f, FracOrder(0.35));
  for (std::size_t j : {1u, 50u, 200u, 256u}) {
    CHECK(std::abs(L[j] - oracle::left_caputo(dfn, 0.0, g.node(j), 0.35)) < 1e-4);
    CHECK(std::abs(R[256 - j] - oracle::right_caputo(dfn, g.node(256 - j), 1.0, 0.35)) <
          1e-4);
  }
}

TEST_CASE("rl derivatives") {
  const auto g = unit(256);
  const double ref = 1.0 / oracle::gamma(0.5); // d/dx of x^{1/2}/Gamma(3/2) at 1
  CHECK(std::abs(ref - 0.5641895835) < 1e-10);

  const auto one = sample_1d([](double) { return 1.0; }, g);
  const auto L = left_rl_derivative(one, FracOrder(0.5));
  const auto R = right_rl_derivative(one, FracOrder(0.5));
  CHECK(L[g.n()] == doctest::Approx(ref).epsilon(1e-13));
  CHECK(R[0] == doctest::Approx(ref).epsilon(1e-13));
  CHECK(std::isnan(L[0]));
  CHECK(std::isnan(R[g.n()]));

  const auto t = sample_1d([](double s) { return s; }, g);
  CHECK(max_abs_diff(left_rl_derivative(t, FracOrder(0.5)), left_caputo(t, FracOrder(0.5))) ==
        0.0);
  CHECK(left_rl_derivative(t, FracOrder(0.5)).all_finite());
  const auto vanish_b = sample_1d([](double s) { return (1 - s) * std::exp(s); }, g);
  CHECK(max_abs_diff(right_rl_derivative(vanish_b, FracOrder(0.5)),
                     right_caputo(vanish_b, FracOrder(0.5))) == 0.0);

  const auto sq = sample_1d([](double s) { return s * s; }, g);
  CHECK(max_abs_diff(left_rl_derivative(sq, FracOrder(1.0)),
                     sample_1d([](double s) { return 2 * s; }, g)) <= 10 * g.h() * g.h());
  CHECK(max_abs_diff(right_rl_derivative(t, FracOrder(1.0)),
                     sample_1d([](double) { return -1.0; }, g)) <= 10 * g.h() * g.h());
}

TEST_CASE("high-order caputo") {
  const auto g = unit(256);
  const auto lin = sample_1d([](double s) { return 0.4 - 2 * s; }, g);
  CHECK(max_abs(left_caputo_high(lin, FracOrder(1.5))) <= 1e-9);
  CHECK(max_abs(right_caputo_high(lin, FracOrder(1.5))) <= 1e-9);

  // D^{1.5} of t^2 at 1: Gamma(3)/Gamma(1.5).
  const double ref = 2.0 / oracle::gamma(1.5);
  const double quad = oracle::left_caputo([](double) { return 2.0; }, 0.0, 1.0, 0.5);
  CHECK(std::abs(ref - 2.2567583342) < 1e-10);
  CHECK(std::abs(quad - ref) < 1e-12);
  const auto sq = sample_1d([](double s) { return s * s; }, g);
  const auto msq = sample_1d([](double s) { return (1 - s) * (1 - s); }, g);
  CHECK(left_caputo_high(sq, FracOrder(1.5))[g.n()] == doctest::Approx(ref).epsilon(1e-10));
  CHECK(right_caputo_high(msq, FracOrder(1.5))[0] == doctest::Approx(ref).epsilon(1e-10));

  // Order two: classical second derivative.
  const auto cube = sample_1d([](double s) { return s * s * s; }, g);
  const auto mcube = sample_1d([](double s) { return std::pow(1 - s, 3); }, g);
  CHECK(max_abs_diff(left_caputo_high(cube, FracOrder(2.0)),
                     sample_1d([](double s) { return 6 * s; }, g)) <= 10 * g.h());
  CHECK(max_abs_diff(right_caputo_high(mcube, FracOrder(2.0)),
                     sample_1d([](double s) { return 6 * (1 - s); }, g)) <= 10 * g.h());

  // Approaching order two from below.
  CHECK(max_abs_diff(left_caputo_high(cube, FracOrder(1.999)),
                     sample_1d([](double s) { return 6 * s; }, g), 1) <= 0.05);

  // Smooth data: I^{0.3} of f'' from the oracle.
  const auto fn = [](double s) { return std::exp(s); };
  const auto f = sample_1d(fn, g);
  const auto H = left_caputo_high(f, FracOrder(1.7));
  for (std::size_t j : {64u, 200u, 256u})
    CHECK(std::abs(H[j] - oracle::left_caputo(fn, 0.0, g.node(j), 0.7)) < 1e-3);
}

TEST_CASE("high-order rl derivative adds the trace terms") {
  const auto g = unit(512);
  const auto fn = [](double s) { return 1.0 + 2.0 * s + std::exp(s); };
  const auto f = sample_1d(fn, g);
  const double mu = 1.4;
  const auto D = left_rl_derivative_high(f, FracOrder(mu));
  const auto C = left_caputo_high(f, FracOrder(mu));
  for (std::size_t j : {128u, 300u, 512u}) {
    const double x = g.node(j);
    const double trace = fn(0.0) * std::pow(x, -mu) / oracle::gamma(1 - mu) +
                         3.0 * std::pow(x, 1 - mu) / oracle::gamma(2 - mu);
    CHECK(std::abs(D[j] - C[j] - trace) < 1e-3);
  }
  CHECK(std::isnan(D[0]));
  CHECK(apply_1d(f, OpKind::LeftRLDerivative, FracOrder(mu))[300] == D[300]);
  CHECK(apply_1d(f, OpKind::LeftCaputo, FracOrder(mu))[300] == C[300]);
}

TEST_CASE("right-sided operators are reflections of left-sided ones") {
  const auto g = UniformGrid1D(-0.5, 1.5, 40);
  const auto f = sample_1d([](double s) { return std::cos(2 * s) + s; }, g);
  const auto fr = reflect(f);
  const std::pair<OpKind, OpKind> pairs[] = {
      {OpKind::RightRLIntegral, OpKind::LeftRLIntegral},
      {OpKind::RightCaputo, OpKind::LeftCaputo},
      {OpKind::RightRLDerivative, OpKind::LeftRLDerivative},
  };
  for (auto [right, left] : pairs)
    for (double mu : {0.3, 0.8, 1.0, 1.6}) {
      if (right == OpKind::RightRLIntegral && mu > 1.0)
        continue;
      const auto R = apply_1d(f, right, FracOrder(mu));
      const auto L = reflect(apply_1d(fr, left, FracOrder(mu)));
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (std::isnan(R[j]))
          CHECK(std::isnan(L[j]));
        else
          CHECK(R[j] == L[j]);
      }
    }
}

TEST_CASE("linearity to rounding") {
  const auto g = unit(128);
  // Dyadic data and coefficients make c1 f + c2 h exact, so any discrepancy
  // comes from the operator itself and not from rounding the input.
  const auto q = [](double v) { return std::round(v * 0x1p20) * 0x1p-20; };
  const auto f = sample_1d([&](double s) { return q(std::exp(s) * s * (1 - s)); }, g);
  const auto h = sample_1d([&](double s) { return q(std::cos(5 * s) + 0.2); }, g);
  const double c1 = 1.75, c2 = -0.375;
  const auto comb = c1 * f + c2 * h;
  const OpKind kinds[] = {OpKind::LeftRLIntegral, OpKind::RightRLIntegral,
                          OpKind::LeftCaputo,     OpKind::RightCaputo,
                          OpKind::LeftRLDerivative, OpKind::RightRLDerivative};
  for (auto kind : kinds)
    for (double mu : {0.25, 0.5, 0.75, 1.0}) {
      const auto Of = apply_1d(f, kind, FracOrder(mu));
      const auto Oh = apply_1d(h, kind, FracOrder(mu));
      const auto Oc = apply_1d(comb, kind, FracOrder(mu));
      // Rounding unit: eps times the largest magnitude the scheme adds up.
      // RL derivatives are a Caputo part plus a boundary part, which may
      // cancel, so both parts count.
      const auto parts = [&](const GridFn1D &u, std::size_t j) {
        if (kind != OpKind::LeftRLDerivative && kind != OpKind::RightRLDerivative)
          return std::abs(apply_1d(u, kind, FracOrder(mu))[j]);
        const auto side = kind == OpKind::LeftRLDerivative ? OpKind::LeftCaputo
                                                           : OpKind::RightCaputo;
        const double c = apply_1d(u, side, FracOrder(mu))[j];
        return std::abs(c) + std::abs(apply_1d(u, kind, FracOrder(mu))[j] - c);
      };
      double scale = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (std::isfinite(Oc[j]))
          scale = std::max(scale, std::abs(c1) * parts(f, j) + std::abs(c2) * parts(h, j));
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (!std::isfinite(Oc[j]))
          continue;
        INFO(std::string(to_string(kind)), " order ", mu, " node ", j);
        CHECK(std::abs(Oc[j] - (c1 * Of[j] + c2 * Oh[j])) <= 4 * kEps * scale);
      }
    }
}

TEST_CASE("order 0.999 is close to the classical derivative") {
  const auto g = unit(256);
  const auto f = sample_1d([](double s) { return std::sin(2 * s + 0.3); }, g);
  const auto d1 = left_caputo(f, FracOrder(1.0));
  const auto d = left_caputo(f, FracOrder(0.999));
  CHECK(max_abs_diff(d, d1, 1) <= 0.02 * max_abs(d1));
  const auto r1 = right_caputo(f, FracOrder(1.0));
  const auto r = right_caputo(f, FracOrder(0.999));
  double m = 0.0;
  for (std::size_t j = 0; j + 1 < g.size(); ++j)
    m = std::max(m, std::abs(r[j] - r1[j]));
  CHECK(m <= 0.02 * max_abs(r1));
}

TEST_CASE("l1 scheme converges with order at least 1.4") {
  auto err = [](std::size_t n) {
    const auto g = unit(n);
    const auto d = left_caputo(sample_1d([](double s) { return s * s; }, g), FracOrder(0.5));
    double e = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      e = std::max(e, std::abs(d[j] - 2 * std::pow(g.node(j), 1.5) / oracle::gamma(2.5)));
    return e;
  };
  const double order = std::log2(err(64) / err(256)) / 2.0;
  CHECK(order >= 1.4);
}

TEST_CASE("partial operators") {
  const UniformGrid1D t(0, 1, 24), x(-1, 1, 20);
  const TensorGrid g({t, x});
  const auto ft = [](double s) { return std::exp(s) - s * s; };
  // Powers of two, so scaling a fibre is exact.
  const auto hx = [](double s) { return std::exp2(std::round(4 * s)); };
  const auto F = sample_field([&](std::span<const double> p) { return ft(p[0]) * hx(p[1]); }, g);

  SUBCASE("separable data gives the outer product") {
    const auto D = partial_frac(F, 0, OpKind::LeftCaputo, FracOrder(0.6));
    const auto d = left_caputo(sample_1d(ft, t), FracOrder(0.6));
    const auto hs = sample_1d(hx, x);
    double m = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j)
        m = std::max(m, std::abs(D[g.ravel(std::vector<std::size_t>{i, j})] - d[i] * hs[j]));
    CHECK(m == 0.0);
  }

  SUBCASE("constants vanish") {
    const auto C = sample_field([](auto) { return -2.5; }, g);
    for (auto kind : {OpKind::LeftCaputo, OpKind::RightCaputo})
      for (std::size_t axis : {0u, 1u})
        for (double v : partial_frac(C, axis, kind, FracOrder(0.4)).values())
          CHECK(v == 0.0);
  }

  SUBCASE("distinct axes commute and match a direct double loop") {
    const auto G = sample_field(
        [](std::span<const double> p) { return std::cos(p[0] + 2 * p[1]) + p[0] * p[1]; }, g);
    const auto ab = partial_frac(partial_frac(G, 0, OpKind::LeftCaputo, FracOrder(0.3)), 1,
                                 OpKind::LeftCaputo, FracOrder(0.7));
    const auto ba = partial_frac(partial_frac(G, 1, OpKind::LeftCaputo, FracOrder(0.7)), 0,
                                 OpKind::LeftCaputo, FracOrder(0.3));
    // Direct loop: 1D operator along x on every t-row of the t-derivative.
    std::vector<double> direct(g.size());
    std::vector<std::vector<double>> dt(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      std::vector<double> col(t.size());
      for (std::size_t i = 0; i < t.size(); ++i)
        col[i] = G[g.ravel(std::vector<std::size_t>{i, j})];
      const auto d = left_caputo(GridFn1D(t, col), FracOrder(0.3));
      dt[j].assign(d.values().begin(), d.values().end());
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<double> row(x.size());
      for (std::size_t j = 0; j < x.size(); ++j)
        row[j] = dt[j][i];
      const auto d = left_caputo(GridFn1D(x, row), FracOrder(0.7));
      for (std::size_t j = 0; j < x.size(); ++j)
        direct[g.ravel(std::vector<std::size_t>{i, j})] = d[j];
    }
    double scale = 0.0;
    for (double v : direct)
      scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(ab[k] == direct[k]);
      CHECK(std::abs(ab[k] - ba[k]) <= kEps * scale * 4);
    }
  }

  SUBCASE("axis out of range") {
    CHECK_THROWS_AS(partial_frac(F, 2, OpKind::LeftCaputo, FracOrder(0.5)), GridError);
  }
}

TEST_CASE("non-finite terminal node is dropped and stays NaN") {
  const auto g = unit(32);
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    v[j] = std::cos(g.node(j));
  std::vector<double> marked = v;
  marked.back() = NAN;
  const FiberOperator op(OpKind::RightCaputo, FracOrder(0.5), g);
  std::vector<double> out(g.size());
  op.apply(marked, out);
  CHECK(std::isnan(out.back()));
  // The operator then acts on [a, b - h] as its own grid.
  const UniformGrid1D shorter(0.0, g.node(31), 31);
  const auto ref = right_caputo(GridFn1D(shorter, {v.begin(), v.end() - 1}), FracOrder(0.5));
  for (std::size_t j = 0; j < 31; ++j)
    CHECK(out[j] == doctest::Approx(ref[j]).epsilon(1e-13));
}
