#pragma once

#include "fracvar/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fracvar {

/// Order of a fractional integral or derivative (mu >= 0).
class FracOrder {
public:
  explicit FracOrder(double mu);
  double value() const { return mu_; }
  bool operator==(const FracOrder &) const = default;

private:
  double mu_;
};

enum class OpKind {
  LeftRLIntegral,
  RightRLIntegral,
  LeftRLDerivative,
  RightRLDerivative,
  LeftCaputo,
  RightCaputo,
};

bool is_left(OpKind kind);
const char *to_string(OpKind kind);

/// Lanczos approximation (g = 7, 9 coefficients) with reflection below 1/2.
/// Throws PoleError at non-positive integers.
double gamma(double z);
/// 1/Gamma(z), zero at the poles.
double reciprocal_gamma(double z);

// Riemann-Liouville integrals, 0 <= alpha <= 1. Product-trapezoidal rule:
// f is piecewise linear between nodes and the kernel is integrated exactly.
GridFn1D left_rl_integral(const GridFn1D &f, FracOrder alpha);
GridFn1D right_rl_integral(const GridFn1D &f, FracOrder alpha);

// Caputo derivatives, 0 < alpha <= 1. L1 scheme for alpha < 1, second-order
// finite differences at alpha = 1 (right-sided: -d/dx).
GridFn1D left_caputo(const GridFn1D &f, FracOrder alpha);
GridFn1D right_caputo(const GridFn1D &f, FracOrder alpha);

// Riemann-Liouville derivatives, 0 < alpha <= 1, computed as the Caputo
// derivative plus the boundary term f(a)(x-a)^{-alpha}/Gamma(1-alpha).
// The terminal node is NaN when that term is singular there.
GridFn1D left_rl_derivative(const GridFn1D &f, FracOrder alpha);
GridFn1D right_rl_derivative(const GridFn1D &f, FracOrder alpha);

// Orders mu > 1: I^{ceil(mu)-mu} applied to the ceil(mu)-th finite
// difference derivative. Needs n >= 4*ceil(mu).
GridFn1D left_caputo_high(const GridFn1D &f, FracOrder mu);
GridFn1D right_caputo_high(const GridFn1D &f, FracOrder mu);

// RL derivatives of order mu > 1: the Caputo value plus
// sum_k f^{(k)}(a) (x-a)^{k-mu} / Gamma(k+1-mu), k < ceil(mu), with the
// traces taken by one-sided finite differences.
GridFn1D left_rl_derivative_high(const GridFn1D &f, FracOrder mu);
GridFn1D right_rl_derivative_high(const GridFn1D &f, FracOrder mu);

/// Any of the six kinds; derivative kinds accept mu > 1 and route to the
/// high-order variants.
GridFn1D apply_1d(const GridFn1D &f, OpKind kind, FracOrder mu);

/// Second-order accurate m-th derivative: (m+2)-point stencils, as centred
/// as the grid allows.
GridFn1D fd_derivative(const GridFn1D &f, unsigned order);

/// One discrete operator precomputed for a given kind, order and axis grid.
///
/// `apply` works on any contiguous fibre of that grid. Right-sided kinds are
/// evaluated as the left-sided kind on the reflected fibre. If the fibre's
/// terminal node (first node for left kinds, last for right kinds) is not
/// finite, the operator acts on the fibre with that node removed and the
/// terminal output stays NaN.
class FiberOperator {
public:
  FiberOperator(OpKind kind, FracOrder mu, const UniformGrid1D &grid);

  OpKind kind() const { return kind_; }
  double order() const { return mu_; }

  void apply(std::span<const double> in, std::span<double> out) const;

private:
  enum class Scheme { Identity, RLIntegral, CaputoL1, FiniteDifference,
                      CaputoHigh, RLDerivative, RLDerivativeHigh };

  void apply_left(std::span<const double> in, std::span<double> out) const;
  void rl_integral(std::span<const double> in, double nu,
                   std::span<double> out) const;
  void caputo_l1(std::span<const double> in, std::span<double> out) const;
  void finite_difference(std::span<const double> in, unsigned m,
                         std::span<double> out) const;
  double trace(std::span<const double> in, unsigned k) const;

  OpKind kind_;
  double mu_;
  double h_;
  std::size_t nodes_;
  Scheme scheme_;
  unsigned int_order_ = 0;   // ceil(mu) for the high-order schemes
  double nu_ = 0.0;          // integral order applied after differencing

  // Product-trapezoid weights: start_[j] for node 0, interior_[m] for offset m.
  std::vector<double> start_;
  std::vector<double> interior_;
  double integral_scale_ = 0.0;

  // L1 weights b_m = (m+1)^{1-a} - m^{1-a}.
  std::vector<double> l1_;
  double l1_scale_ = 0.0;

  // fd_[k][p][i]: k-th derivative stencil with (k+2) points, evaluation
  // point at position p of the window.
  std::vector<std::vector<std::vector<double>>> fd_;
};

/// Applies a 1D operator along one axis of a field, fibre by fibre.
GridField partial_frac(const GridField &field, std::size_t axis, OpKind kind,
                       FracOrder mu);

} // namespace fracvar
