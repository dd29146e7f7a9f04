#include "fracvar/variational.hpp"

#include "fracvar/error.hpp"
#include "fracvar/random.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace fracvar {

namespace {

void check_orders(std::span<const FracOrder> alphas, std::size_t expected) {
  if (alphas.size() != expected)
    throw OrderError("expected " + std::to_string(expected) + " orders, got " +
                     std::to_string(alphas.size()));
  for (const auto &a : alphas)
    if (a.value() <= 0.0 || a.value() > 1.0)
      throw OrderError("Lagrangian orders must lie in (0, 1]");
}

void validate(const Lagrangian1D &L) {
  check_orders(L.alphas, L.n);
  if (!L.eval || !L.d_dx || !L.d_dv)
    throw Error("Lagrangian1D is missing a callback");
}

void validate(const LagrangianDensity &L) {
  check_orders(L.alphas, L.m + 1);
  if (!L.eval || !L.d_du || !L.d_dgrad)
    throw Error("LagrangianDensity is missing a callback");
}

double fd_step(double value) { return 1e-6 * (1.0 + std::abs(value)); }

// Central difference of f with respect to args[i].
template <class F>
double central(F &&f, std::vector<double> &args, std::size_t i) {
  const double saved = args[i];
  const double step = fd_step(saved);
  args[i] = saved + step;
  const double up = f(args);
  args[i] = saved - step;
  const double down = f(args);
  args[i] = saved;
  return (up - down) / (2.0 * step);
}

double discrepancy(std::span<const double> analytic,
                   std::span<const double> numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i)
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) /
                                (1.0 + std::abs(analytic[i])));
  return worst;
}

// Left Caputo derivatives of every component, one vector per component.
std::vector<GridFn1D> caputo_components(const Lagrangian1D &L,
                                        const Trajectory &x) {
  std::vector<GridFn1D> v;
  v.reserve(L.n);
  for (std::size_t k = 0; k < L.n; ++k)
    v.push_back(left_caputo(x[k], L.alphas[k]));
  return v;
}

std::vector<GridField> caputo_gradient(const LagrangianDensity &L,
                                       const FieldConfig &u) {
  const std::size_t axes = L.m + 1;
  std::vector<GridField> grad;
  grad.reserve(L.n * axes);
  for (std::size_t j = 0; j < L.n; ++j)
    for (std::size_t i = 0; i < axes; ++i)
      grad.push_back(partial_frac(u[j], i, OpKind::LeftCaputo, L.alphas[i]));
  return grad;
}

void check_shape(const Lagrangian1D &L, const Trajectory &x) {
  validate(L);
  if (x.size() != L.n)
    throw GridError("trajectory has " + std::to_string(x.size()) +
                    " components, Lagrangian expects " + std::to_string(L.n));
}

void check_shape(const LagrangianDensity &L, const FieldConfig &u) {
  validate(L);
  if (u.size() != L.n)
    throw GridError("field has " + std::to_string(u.size()) +
                    " components, density expects " + std::to_string(L.n));
  if (u.grid().rank() != L.m + 1)
    throw GridError("field grid rank does not match the density");
}

} // namespace

// ---------------------------------------------------------------------------

Lagrangian1D with_numeric_partials(std::size_t n, std::vector<FracOrder> alphas,
                                   Lagrangian1D::Eval eval) {
  Lagrangian1D L;
  L.n = n;
  L.alphas = std::move(alphas);
  L.eval = eval;
  // Argument layout for the differencing: [x..., v...].
  auto packed = [eval, n](double t) {
    return [eval, n, t](const std::vector<double> &args) {
      return eval(t, std::span(args).first(n), std::span(args).subspan(n));
    };
  };
  L.d_dx = [packed, n](double t, std::span<const double> x,
                       std::span<const double> v, std::span<double> out) {
    std::vector<double> args(x.begin(), x.end());
    args.insert(args.end(), v.begin(), v.end());
    for (std::size_t k = 0; k < n; ++k)
      out[k] = central(packed(t), args, k);
  };
  L.d_dv = [packed, n](double t, std::span<const double> x,
                       std::span<const double> v, std::span<double> out) {
    std::vector<double> args(x.begin(), x.end());
    args.insert(args.end(), v.begin(), v.end());
    for (std::size_t k = 0; k < n; ++k)
      out[k] = central(packed(t), args, n + k);
  };
  return L;
}

double partials_discrepancy(const Lagrangian1D &L, std::uint64_t seed,
                            std::size_t probes) {
  validate(L);
  std::mt19937_64 rng(seed);
  const std::size_t n = L.n;
  std::vector<double> args(2 * n), analytic(n), numeric(n);
  double worst = 0.0;
  for (std::size_t p = 0; p < probes; ++p) {
    const double t = uniform(rng, -1.0, 1.0);
    for (double &a : args)
      a = uniform(rng, -1.0, 1.0);
    auto f = [&](const std::vector<double> &z) {
      return L.eval(t, std::span(z).first(n), std::span(z).subspan(n));
    };
    const auto x = std::span<const double>(args).first(n);
    const auto v = std::span<const double>(args).subspan(n);

    L.d_dx(t, x, v, analytic);
    for (std::size_t k = 0; k < n; ++k)
      numeric[k] = central(f, args, k);
    worst = std::max(worst, discrepancy(analytic, numeric));

    L.d_dv(t, x, v, analytic);
    for (std::size_t k = 0; k < n; ++k)
      numeric[k] = central(f, args, n + k);
    worst = std::max(worst, discrepancy(analytic, numeric));
  }
  return worst;
}

Lagrangian1D scaled(const Lagrangian1D &L, double c) {
  Lagrangian1D out = L;
  out.eval = [e = L.eval, c](double t, std::span<const double> x,
                             std::span<const double> v) { return c * e(t, x, v); };
  auto scale = [c](Lagrangian1D::Partials p) {
    return [p, c](double t, std::span<const double> x, std::span<const double> v,
                  std::span<double> o) {
      p(t, x, v, o);
      for (double &value : o)
        value *= c;
    };
  };
  out.d_dx = scale(L.d_dx);
  out.d_dv = scale(L.d_dv);
  return out;
}

Lagrangian1D operator+(const Lagrangian1D &lhs, const Lagrangian1D &rhs) {
  if (lhs.n != rhs.n || lhs.alphas != rhs.alphas)
    throw Error("Lagrangians must share component count and orders");
  Lagrangian1D out = lhs;
  out.eval = [a = lhs.eval, b = rhs.eval](double t, std::span<const double> x,
                                          std::span<const double> v) {
    return a(t, x, v) + b(t, x, v);
  };
  auto add = [n = lhs.n](Lagrangian1D::Partials a, Lagrangian1D::Partials b) {
    return [a, b, n](double t, std::span<const double> x,
                     std::span<const double> v, std::span<double> o) {
      std::vector<double> tmp(n);
      a(t, x, v, o);
      b(t, x, v, tmp);
      for (std::size_t k = 0; k < n; ++k)
        o[k] += tmp[k];
    };
  };
  out.d_dx = add(lhs.d_dx, rhs.d_dx);
  out.d_dv = add(lhs.d_dv, rhs.d_dv);
  return out;
}

double partials_discrepancy(const LagrangianDensity &L, std::uint64_t seed,
                            std::size_t probes) {
  validate(L);
  std::mt19937_64 rng(seed);
  const std::size_t n = L.n;
  const std::size_t g = n * (L.m + 1);
  std::vector<double> x(L.m + 1), args(n + g), du(n), dg(g), numeric(n + g);
  double worst = 0.0;
  for (std::size_t p = 0; p < probes; ++p) {
    for (double &c : x)
      c = uniform(rng, -1.0, 1.0);
    for (double &a : args)
      a = uniform(rng, -1.0, 1.0);
    auto f = [&](const std::vector<double> &z) {
      return L.eval(x, std::span(z).first(n), std::span(z).subspan(n));
    };
    const auto u = std::span<const double>(args).first(n);
    const auto grad = std::span<const double>(args).subspan(n);
    L.d_du(x, u, grad, du);
    L.d_dgrad(x, u, grad, dg);
    for (std::size_t i = 0; i < n + g; ++i)
      numeric[i] = central(f, args, i);
    worst = std::max(worst, discrepancy(du, std::span(numeric).first(n)));
    worst = std::max(worst, discrepancy(dg, std::span(numeric).subspan(n)));
  }
  return worst;
}

LagrangianDensity scaled(const LagrangianDensity &L, double c) {
  LagrangianDensity out = L;
  out.eval = [e = L.eval, c](std::span<const double> x, std::span<const double> u,
                             std::span<const double> g) { return c * e(x, u, g); };
  auto scale = [c](LagrangianDensity::Partials p) {
    return [p, c](std::span<const double> x, std::span<const double> u,
                  std::span<const double> g, std::span<double> o) {
      p(x, u, g, o);
      for (double &value : o)
        value *= c;
    };
  };
  out.d_du = scale(L.d_du);
  out.d_dgrad = scale(L.d_dgrad);
  return out;
}

LagrangianDensity operator+(const LagrangianDensity &lhs,
                            const LagrangianDensity &rhs) {
  if (lhs.n != rhs.n || lhs.m != rhs.m || lhs.alphas != rhs.alphas)
    throw Error("densities must share shape and orders");
  LagrangianDensity out = lhs;
  out.eval = [a = lhs.eval, b = rhs.eval](std::span<const double> x,
                                          std::span<const double> u,
                                          std::span<const double> g) {
    return a(x, u, g) + b(x, u, g);
  };
  auto add = [](LagrangianDensity::Partials a, LagrangianDensity::Partials b) {
    return [a, b](std::span<const double> x, std::span<const double> u,
                  std::span<const double> g, std::span<double> o) {
      std::vector<double> tmp(o.size());
      a(x, u, g, o);
      b(x, u, g, tmp);
      for (std::size_t k = 0; k < o.size(); ++k)
        o[k] += tmp[k];
    };
  };
  out.d_du = add(lhs.d_du, rhs.d_du);
  out.d_dgrad = add(lhs.d_dgrad, rhs.d_dgrad);
  return out;
}

// ---------------------------------------------------------------------------

Trajectory::Trajectory(std::vector<GridFn1D> components)
    : components_(std::move(components)) {
  if (components_.empty())
    throw GridError("trajectory needs at least one component");
  for (const auto &c : components_)
    if (!(c.grid() == components_.front().grid()))
      throw GridError("trajectory components live on different grids");
}

FieldConfig::FieldConfig(std::vector<GridField> components)
    : components_(std::move(components)) {
  if (components_.empty())
    throw GridError("field configuration needs at least one component");
  for (const auto &c : components_)
    if (!(c.grid() == components_.front().grid()))
      throw GridError("field components live on different grids");
}

double action_1d(const Lagrangian1D &L, const Trajectory &x) {
  check_shape(L, x);
  const auto v = caputo_components(L, x);
  const UniformGrid1D &grid = x.grid();
  std::vector<double> xs(L.n), vs(L.n), density(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t k = 0; k < L.n; ++k) {
      xs[k] = x[k][j];
      vs[k] = v[k][j];
    }
    density[j] = L.eval(grid.node(j), xs, vs);
  }
  return trapezoid(GridFn1D(grid, std::move(density)));
}

std::vector<GridFn1D> euler_lagrange_1d(const Lagrangian1D &L,
                                        const Trajectory &x) {
  check_shape(L, x);
#ifndef NDEBUG
  assert(partials_discrepancy(L, 0x5eed, 4) <= 1e-5 &&
         "Lagrangian partials disagree with finite differences of eval");
#endif
  const auto v = caputo_components(L, x);
  const UniformGrid1D &grid = x.grid();
  const std::size_t n = L.n;

  std::vector<std::vector<double>> dx(n, std::vector<double>(grid.size()));
  std::vector<std::vector<double>> dv(n, std::vector<double>(grid.size()));
  std::vector<double> xs(n), vs(n), ox(n), ov(n);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      xs[k] = x[k][j];
      vs[k] = v[k][j];
    }
    const double t = grid.node(j);
    L.d_dx(t, xs, vs, ox);
    L.d_dv(t, xs, vs, ov);
    for (std::size_t k = 0; k < n; ++k) {
      dx[k][j] = ox[k];
      dv[k][j] = ov[k];
    }
  }

  std::vector<GridFn1D> E;
  E.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const GridFn1D momentum(grid, std::move(dv[k]));
    E.push_back(GridFn1D(grid, std::move(dx[k])) +
                right_rl_derivative(momentum, L.alphas[k]));
  }
  return E;
}

double action_md(const LagrangianDensity &L, const FieldConfig &u) {
  check_shape(L, u);
  const auto grad = caputo_gradient(L, u);
  const TensorGrid &grid = u.grid();
  const std::size_t g = grad.size();
  std::vector<double> x(grid.rank()), us(L.n), gs(g), density(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.coordinates(p, x);
    for (std::size_t j = 0; j < L.n; ++j)
      us[j] = u[j][p];
    for (std::size_t i = 0; i < g; ++i)
      gs[i] = grad[i][p];
    density[p] = L.eval(x, us, gs);
  }
  return trapezoid(GridField(grid, std::move(density)));
}

std::vector<GridField> euler_lagrange_md(const LagrangianDensity &L,
                                         const FieldConfig &u) {
  check_shape(L, u);
#ifndef NDEBUG
  assert(partials_discrepancy(L, 0x5eed, 4) <= 1e-5 &&
         "density partials disagree with finite differences of eval");
#endif
  const auto grad = caputo_gradient(L, u);
  const TensorGrid &grid = u.grid();
  const std::size_t axes = L.m + 1;
  const std::size_t g = grad.size();

  std::vector<std::vector<double>> du(L.n, std::vector<double>(grid.size()));
  std::vector<std::vector<double>> flux(g, std::vector<double>(grid.size()));
  std::vector<double> x(grid.rank()), us(L.n), gs(g), odu(L.n), odg(g);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.coordinates(p, x);
    for (std::size_t j = 0; j < L.n; ++j)
      us[j] = u[j][p];
    for (std::size_t i = 0; i < g; ++i)
      gs[i] = grad[i][p];
    L.d_du(x, us, gs, odu);
    L.d_dgrad(x, us, gs, odg);
    for (std::size_t j = 0; j < L.n; ++j)
      du[j][p] = odu[j];
    for (std::size_t i = 0; i < g; ++i)
      flux[i][p] = odg[i];
  }

  std::vector<GridField> E;
  E.reserve(L.n);
  for (std::size_t j = 0; j < L.n; ++j) {
    GridField e(grid, std::move(du[j]));
    for (std::size_t i = 0; i < axes; ++i) {
      const GridField f(grid, std::move(flux[j * axes + i]));
      e = e + partial_frac(f, i, OpKind::RightRLDerivative, L.alphas[i]);
    }
    E.push_back(std::move(e));
  }
  return E;
}

} // namespace fracvar
