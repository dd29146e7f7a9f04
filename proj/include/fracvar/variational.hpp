#pragma once

#include "fracvar/fracops.hpp"
#include "fracvar/grid.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fracvar {

/// L(t, x, v) where v_k stands for the left Caputo derivative of order
/// alpha_k of x^k. Callbacks must be stateless (safe to call concurrently).
struct Lagrangian1D {
  using Eval = std::function<double(double t, std::span<const double> x,
                                    std::span<const double> v)>;
  using Partials = std::function<void(double t, std::span<const double> x,
                                      std::span<const double> v,
                                      std::span<double> out)>;

  std::size_t n = 0;
  std::vector<FracOrder> alphas;
  Eval eval;
  Partials d_dx; // dL/dx^k
  Partials d_dv; // dL/dv^k
};

/// Fills d_dx and d_dv with central differences of eval, step
/// 1e-6 * (1 + |argument|). For prototyping only.
Lagrangian1D with_numeric_partials(std::size_t n, std::vector<FracOrder> alphas,
                                   Lagrangian1D::Eval eval);

/// Largest |analytic - central difference| / (1 + |analytic|) over `probes`
/// random points (t, x, v) in [-1, 1], drawn from `seed`.
double partials_discrepancy(const Lagrangian1D &L, std::uint64_t seed,
                            std::size_t probes = 16);

Lagrangian1D scaled(const Lagrangian1D &L, double c);
Lagrangian1D operator+(const Lagrangian1D &lhs, const Lagrangian1D &rhs);

/// Density L(x, u, grad) on an (m+1)-axis domain; grad[j*(m+1) + i] is the
/// partial left Caputo derivative of u^j along axis i with order alpha_i.
struct LagrangianDensity {
  using Eval = std::function<double(std::span<const double> x,
                                    std::span<const double> u,
                                    std::span<const double> grad)>;
  using Partials = std::function<void(std::span<const double> x,
                                      std::span<const double> u,
                                      std::span<const double> grad,
                                      std::span<double> out)>;

  std::size_t n = 0; // field components
  std::size_t m = 0; // spatial axes
  std::vector<FracOrder> alphas; // m+1 entries, axis 0 first
  Eval eval;
  Partials d_du;    // n entries
  Partials d_dgrad; // n*(m+1) entries, row-major [j][i]
};

double partials_discrepancy(const LagrangianDensity &L, std::uint64_t seed,
                            std::size_t probes = 16);

LagrangianDensity scaled(const LagrangianDensity &L, double c);
LagrangianDensity operator+(const LagrangianDensity &lhs,
                            const LagrangianDensity &rhs);

/// Components x^1..x^n sampled on one grid.
class Trajectory {
public:
  explicit Trajectory(std::vector<GridFn1D> components);
  std::size_t size() const { return components_.size(); }
  const GridFn1D &operator[](std::size_t k) const { return components_[k]; }
  const std::vector<GridFn1D> &components() const { return components_; }
  const UniformGrid1D &grid() const { return components_.front().grid(); }

private:
  std::vector<GridFn1D> components_;
};

/// Field components u^1..u^n sampled on one tensor grid.
class FieldConfig {
public:
  explicit FieldConfig(std::vector<GridField> components);
  std::size_t size() const { return components_.size(); }
  const GridField &operator[](std::size_t j) const { return components_[j]; }
  const std::vector<GridField> &components() const { return components_; }
  const TensorGrid &grid() const { return components_.front().grid(); }

private:
  std::vector<GridField> components_;
};

/// Trapezoidal quadrature of L(t, x, C D^alpha x) over the grid.
double action_1d(const Lagrangian1D &L, const Trajectory &x);

/// Fractional Lagrange expressions E_k = dL/dx^k + (right RL derivative of
/// order alpha_k of t -> dL/dv^k along x). The last node is NaN whenever
/// dL/dv^k does not vanish at the right endpoint.
std::vector<GridFn1D> euler_lagrange_1d(const Lagrangian1D &L,
                                        const Trajectory &x);

double action_md(const LagrangianDensity &L, const FieldConfig &u);

/// E_j = dL/du^j + sum_{i=0..m} (right RL partial derivative of order
/// alpha_i along axis i of dL/d(grad_i u^j)).
std::vector<GridField> euler_lagrange_md(const LagrangianDensity &L,
                                         const FieldConfig &u);

} // namespace fracvar
