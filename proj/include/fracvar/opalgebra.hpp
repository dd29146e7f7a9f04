#pragma once

#include "fracvar/fracops.hpp"
#include "fracvar/grid.hpp"

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fracvar {

/// Coefficient of an operator term: a constant or a function of the node
/// coordinates. Sampled once when the term is built.
class Coefficient {
public:
  Coefficient(double value);
  Coefficient(std::function<double(std::span<const double>)> fn);
  // Function of the first coordinate only (time in 1D problems).
  static Coefficient of_t(std::function<double(double)> fn);

  GridField sample(const TensorGrid &grid) const;

private:
  std::function<double(std::span<const double>)> fn_;
};

enum class TermKind { Identity, LeftCaputo, RightCaputo };

struct OperatorTerm {
  TermKind kind;
  std::optional<FracOrder> order; // empty for Identity
  std::size_t axis = 0;
  GridField coeff;
};

OperatorTerm identity_term(const TensorGrid &domain, const Coefficient &c);
OperatorTerm caputo_term(const TensorGrid &domain, TermKind side,
                         const Coefficient &c, FracOrder order,
                         std::size_t axis = 0);

/// Linear fractional differential operator: sum of coefficient times
/// (identity | left Caputo | right Caputo along an axis).
class FracOperator {
public:
  // Advisory tag; operators may be freely combined.
  enum class Kind { First, Second, Third, Fourth, Mixed };

  FracOperator(TensorGrid domain, std::vector<OperatorTerm> terms);

  static FracOperator identity(const TensorGrid &domain, const Coefficient &c = 1.0);
  static FracOperator zero(const TensorGrid &domain);

  const TensorGrid &domain() const { return domain_; }
  const std::vector<OperatorTerm> &terms() const { return terms_; }
  Kind kind() const { return kind_; }

private:
  TensorGrid domain_;
  std::vector<OperatorTerm> terms_;
  Kind kind_;
};

FracOperator operator+(const FracOperator &lhs, const FracOperator &rhs);

// 1D builders for the four operator families.
// a0 + sum_i a_i * C(left) D^{beta_i}, 0 < beta_i <= 1.
FracOperator kind_one(const UniformGrid1D &grid, const Coefficient &a0,
                      const std::vector<std::pair<Coefficient, FracOrder>> &terms);
// a0 + sum_i a_i * C(right) D^{beta_i}, 0 < beta_i <= 1.
FracOperator kind_two(const UniformGrid1D &grid, const Coefficient &a0,
                      const std::vector<std::pair<Coefficient, FracOrder>> &terms);
// a0 + a_1 D^{beta} + a_2 D^{1+beta} + ... + a_l D^{l-1+beta}, left Caputo.
FracOperator kind_three(const UniformGrid1D &grid, const Coefficient &a0,
                        FracOrder beta, const std::vector<Coefficient> &a);
// Right-Caputo mirror of kind_three.
FracOperator kind_four(const UniformGrid1D &grid, const Coefficient &a0,
                       FracOrder beta, const std::vector<Coefficient> &a);

struct AxisTerm {
  std::size_t axis;
  Coefficient coeff;
  FracOrder order;
};

// Multi-dimensional families: c + sum_i c_i * partial Caputo along axis i.
FracOperator partial_kind_one(const TensorGrid &domain, const Coefficient &c,
                              const std::vector<AxisTerm> &terms);
FracOperator partial_kind_two(const TensorGrid &domain, const Coefficient &c,
                              const std::vector<AxisTerm> &terms);

struct AdjointTerm {
  GridField coeff;
  OpKind kind; // LeftRLDerivative or RightRLDerivative
  FracOrder order;
  std::size_t axis;
};

/// Formal adjoint q -> identity_coeff*q + sum RL-derivative(coeff*q).
struct AdjointOperator {
  TensorGrid domain;
  GridField identity_coeff;
  std::vector<AdjointTerm> terms;
};

GridField apply(const FracOperator &op, const GridField &p);
GridFn1D apply(const FracOperator &op, const GridFn1D &p);

/// Term by term: a left Caputo term becomes a right RL derivative of the
/// same order applied to coeff*q, and vice versa.
AdjointOperator adjoint(const FracOperator &op);

GridField apply_adjoint(const AdjointOperator &adj, const GridField &q);
GridFn1D apply_adjoint(const AdjointOperator &adj, const GridFn1D &q);

/// |int q T(p) - int p T~(q)| by trapezoidal quadrature. Only meaningful
/// when p makes the boundary terms vanish.
double duality_residual(const FracOperator &op, const GridField &p,
                        const GridField &q);
double duality_residual(const FracOperator &op, const GridFn1D &p,
                        const GridFn1D &q);

/// |int g I^a f - int f I_b^a g| for RL integrals of order alpha.
double ibp_integral_check(const GridFn1D &f, const GridFn1D &g, FracOrder alpha);

/// Residual of int g C(left)D^a f = [f I_b^{1-a} g]_a^b + int f D_b^a g.
double caputo_ibp_check(const GridFn1D &f, const GridFn1D &g, FracOrder alpha);

} // namespace fracvar
