#pragma once

#include "fracvar/grid.hpp"
#include "fracvar/opalgebra.hpp"
#include "fracvar/variational.hpp"

#include <cstdint>
#include <vector>

namespace fracvar {

/// Local transformation x^k -> x^k + sum_s T[k][s](p_s), an n x r matrix of
/// operators on one domain.
class Transformation {
public:
  explicit Transformation(std::vector<std::vector<FracOperator>> ops);

  std::size_t components() const { return ops_.size(); }
  std::size_t params() const { return ops_.front().size(); }
  const FracOperator &op(std::size_t k, std::size_t s) const { return ops_[k][s]; }
  const TensorGrid &domain() const { return ops_.front().front().domain(); }

private:
  std::vector<std::vector<FracOperator>> ops_;
};

/// Every component shifted by the same single parameter function, through
/// `op` (r = 1).
Transformation same_shift(const FracOperator &op, std::size_t components);

/// The arbitrary functions p_1..p_r. `boundary_vanishing` records that p and
/// the derivative traces it needs are zero on the boundary.
struct ParamFunctions {
  std::vector<GridField> p;
  bool boundary_vanishing = false;

  ParamFunctions(std::vector<GridField> fields, bool vanishing = false);
  ParamFunctions(const std::vector<GridFn1D> &fns, bool vanishing = false);
};

/// Per-parameter identity residuals with max-norms over interior nodes.
/// Interior excludes the first and last node of every axis; non-finite
/// interior nodes (singular cells next to the boundary) are skipped and
/// counted in `flagged`.
struct IdentityReport {
  TensorGrid grid;
  std::vector<GridField> residuals;
  std::vector<double> norms;
  std::vector<std::size_t> flagged;

  double max_norm() const;
};

/// Max |f| over interior nodes, skipping non-finite ones.
double interior_max_norm(const GridField &f, std::size_t *flagged = nullptr);

Trajectory transform(const Trajectory &x, const Transformation &T,
                     const ParamFunctions &p);
FieldConfig transform(const FieldConfig &u, const Transformation &T,
                      const ParamFunctions &p);

/// Max over samples of |J(transformed x) - J(x)|. A falsifier of invariance
/// on a finite sample set, not a proof.
double invariance_gap(const Lagrangian1D &L, const Trajectory &x,
                      const Transformation &T,
                      const std::vector<ParamFunctions> &samples);
double invariance_gap(const LagrangianDensity &L, const FieldConfig &u,
                      const Transformation &T,
                      const std::vector<ParamFunctions> &samples);

/// For each s, sum_k (adjoint of T[k][s]) applied to the k-th Lagrange
/// expression.
IdentityReport noether_residual(const Lagrangian1D &L, const Trajectory &x,
                                const Transformation &T);
IdentityReport noether_residual(const LagrangianDensity &L, const FieldConfig &u,
                                const Transformation &T);

/// Integer-order transformation x^k -> x^k + sum_s sum_i b[k][s][i] d^i p_s.
struct ClassicalTransformation {
  std::vector<std::vector<std::vector<Coefficient>>> b; // [k][s][i]

  std::size_t components() const { return b.size(); }
  std::size_t params() const { return b.front().size(); }
  /// The same transformation as left Caputo operators of orders 1, 2, ...
  Transformation to_fractional(const UniformGrid1D &grid) const;
};

/// Classical identity sum_k b0 E_k + sum_k sum_i (-1)^i d^i(b_i E_k), with
/// E_k = dL/dx^k - d/dt dL/dv^k, all derivatives by three-point stencils
/// (second-order one-sided at the ends, higher orders by repetition).
/// Requires every Lagrangian order to be 1.
std::vector<GridFn1D> classical_identity_residual(const Lagrangian1D &L,
                                                  const Trajectory &x,
                                                  const ClassicalTransformation &C);
/// Max over s of the interior max-norm of classical_identity_residual.
double classical_identity_check(const Lagrangian1D &L, const Trajectory &x,
                                const ClassicalTransformation &C);

// Seeded sample families. The same seed always gives the same samples.

/// n components, each a cubic times a Gaussian bump with random centre.
Trajectory random_trajectory(const UniformGrid1D &grid, std::size_t n,
                             std::uint64_t seed);
FieldConfig random_field(const TensorGrid &grid, std::size_t n,
                         std::uint64_t seed);
/// r functions prod_i s_i^2 (1 - s_i)^2 * (quadratic), s_i the normalised
/// coordinate on axis i; zero with first derivative on the boundary.
ParamFunctions random_params(const TensorGrid &grid, std::size_t r,
                             std::uint64_t seed);
std::vector<ParamFunctions> random_param_samples(const TensorGrid &grid,
                                                 std::size_t r,
                                                 std::size_t count,
                                                 std::uint64_t seed);

} // namespace fracvar
