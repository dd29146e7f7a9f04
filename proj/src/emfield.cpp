#include "fracvar/emfield.hpp"

#include "fracvar/error.hpp"
#include "fracvar/opalgebra.hpp"

#include <algorithm>
#include <numbers>

namespace fracvar {

namespace {

constexpr std::size_t kAxes = 4;
constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_orders(const std::vector<FracOrder> &alphas) {
  if (alphas.size() != kAxes)
    throw OrderError("the field example needs four orders");
  for (const auto &a : alphas)
    if (a.value() <= 0.0 || a.value() > 1.0)
      throw OrderError("field orders must lie in (0, 1]");
}

void check_grid(const TensorGrid &grid) {
  if (grid.rank() != kAxes)
    throw GridError("the field example needs a four-axis grid");
}

GridField caputo(const GridField &f, std::size_t axis,
                 const std::vector<FracOrder> &alphas) {
  return partial_frac(f, axis, OpKind::LeftCaputo, alphas[axis]);
}

// grad[j*4 + i]: derivative of u^j along axis i.
constexpr std::size_t g(std::size_t j, std::size_t i) { return j * kAxes + i; }

double e_comp(std::span<const double> grad, std::size_t k) {
  return grad[g(0, k)] - grad[g(k, 0)];
}

// H_k = D_b A_c - D_c A_b for (k, b, c) cyclic.
constexpr std::size_t kCyc[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};

double h_comp(std::span<const double> grad, std::size_t k) {
  const auto [_, b, c] = kCyc[k - 1];
  return grad[g(c, b)] - grad[g(b, c)];
}

} // namespace

Potential::Potential(GridField a0, std::array<GridField, 3> a,
                     std::vector<FracOrder> orders)
    : A0(std::move(a0)), A(std::move(a)), alphas(std::move(orders)) {
  check_grid(A0.grid());
  check_orders(alphas);
  for (const auto &c : A)
    if (!(c.grid() == A0.grid()))
      throw GridError("potential components live on different grids");
}

FieldConfig Potential::as_config() const { return FieldConfig({A0, A[0], A[1], A[2]}); }

Potential Potential::from_config(const FieldConfig &u, std::vector<FracOrder> orders) {
  if (u.size() != kAxes)
    throw Error("a potential has four components");
  return Potential(u[0], {u[1], u[2], u[3]}, std::move(orders));
}

Potential Potential::zero(const TensorGrid &grid, std::vector<FracOrder> orders) {
  const GridField z = GridField::zeros(grid);
  return Potential(z, {z, z, z}, std::move(orders));
}

std::array<GridField, 3> frac_grad(const GridField &A0,
                                   const std::vector<FracOrder> &alphas) {
  check_grid(A0.grid());
  check_orders(alphas);
  return {caputo(A0, 1, alphas), caputo(A0, 2, alphas), caputo(A0, 3, alphas)};
}

std::array<GridField, 3> frac_curl(const std::array<GridField, 3> &A,
                                   const std::vector<FracOrder> &alphas) {
  check_orders(alphas);
  for (const auto &c : A) {
    check_grid(c.grid());
    if (!(c.grid() == A[0].grid()))
      throw GridError("vector potential components live on different grids");
  }
  auto component = [&](std::size_t k) {
    const auto [_, b, c] = kCyc[k - 1];
    return caputo(A[c - 1], b, alphas) - caputo(A[b - 1], c, alphas);
  };
  return {component(1), component(2), component(3)};
}

EMFields em_fields(const Potential &P) {
  const auto grad = frac_grad(P.A0, P.alphas);
  EMFields out{grad, frac_curl(P.A, P.alphas)};
  for (std::size_t k = 0; k < 3; ++k)
    out.E[k] = grad[k] - caputo(P.A[k], 0, P.alphas);
  return out;
}

LagrangianDensity em_density(const std::vector<FracOrder> &alphas, double mass) {
  check_orders(alphas);
  LagrangianDensity L;
  L.n = kAxes;
  L.m = kAxes - 1;
  L.alphas = alphas;
  L.eval = [mass](std::span<const double>, std::span<const double> u,
                  std::span<const double> grad) {
    double e2 = 0.0, h2 = 0.0;
    for (std::size_t k = 1; k <= 3; ++k) {
      const double e = e_comp(grad, k);
      const double h = h_comp(grad, k);
      e2 += e * e;
      h2 += h * h;
    }
    return (e2 - h2) / (2.0 * kFourPi) + mass * u[0] * u[0];
  };
  L.d_du = [mass](std::span<const double>, std::span<const double> u,
                  std::span<const double>, std::span<double> out) {
    out[0] = 2.0 * mass * u[0];
    out[1] = out[2] = out[3] = 0.0;
  };
  L.d_dgrad = [](std::span<const double>, std::span<const double>,
                 std::span<const double> grad, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 1; k <= 3; ++k) {
      const double e = e_comp(grad, k) / kFourPi;
      out[g(0, k)] = e;
      out[g(k, 0)] = -e;
      const auto [_, b, c] = kCyc[k - 1];
      const double h = h_comp(grad, k) / kFourPi;
      out[g(c, b)] = -h;
      out[g(b, c)] = h;
    }
  };
  return L;
}

double em_lagrangian(const Potential &P, double mass) {
  return action_md(em_density(P.alphas, mass), P.as_config());
}

Potential gauge_transform(const Potential &P, const GridField &f) {
  if (!(f.grid() == P.grid()))
    throw GridError("gauge function is not on the potential grid");
  return Potential::from_config(
      transform(P.as_config(), gauge_transformation(P.grid(), P.alphas),
                ParamFunctions({f})),
      P.alphas);
}

Transformation gauge_transformation(const TensorGrid &grid,
                                    const std::vector<FracOrder> &alphas) {
  check_grid(grid);
  check_orders(alphas);
  std::vector<std::vector<FracOperator>> rows;
  for (std::size_t j = 0; j < kAxes; ++j)
    rows.push_back({FracOperator(
        grid, {caputo_term(grid, TermKind::LeftCaputo, 1.0, alphas[j], j)})});
  return Transformation(std::move(rows));
}

IdentityReport em_noether_report(const Potential &P, double mass) {
  return noether_residual(em_density(P.alphas, mass), P.as_config(),
                          gauge_transformation(P.grid(), P.alphas));
}

GridField em_noether_residual(const Potential &P, double mass) {
  return em_noether_report(P, mass).residuals.front();
}

Potential random_potential(const TensorGrid &grid, std::vector<FracOrder> alphas,
                           std::uint64_t seed) {
  check_grid(grid);
  return Potential::from_config(random_field(grid, kAxes, seed), std::move(alphas));
}

} // namespace fracvar
