#pragma once

#include "fracvar/grid.hpp"
#include "fracvar/noether.hpp"
#include "fracvar/variational.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace fracvar {

/// Scalar potential A0 and vector potential A1..A3 on a four-axis grid
/// (axis 0 is time), with one derivative order per axis.
struct Potential {
  GridField A0;
  std::array<GridField, 3> A;
  std::vector<FracOrder> alphas; // alpha_0..alpha_3

  Potential(GridField a0, std::array<GridField, 3> a, std::vector<FracOrder> orders);

  const TensorGrid &grid() const { return A0.grid(); }
  /// (A0, A1, A2, A3) as field components u^0..u^3.
  FieldConfig as_config() const;
  static Potential from_config(const FieldConfig &u, std::vector<FracOrder> orders);
  static Potential zero(const TensorGrid &grid, std::vector<FracOrder> orders);
};

struct EMFields {
  std::array<GridField, 3> E;
  std::array<GridField, 3> H;
};

/// Component i-1 is the left Caputo partial of A0 along axis i, i = 1..3.
std::array<GridField, 3> frac_grad(const GridField &A0,
                                   const std::vector<FracOrder> &alphas);
/// H1 = D2 A3 - D3 A2 and cyclic, with left Caputo partials.
std::array<GridField, 3> frac_curl(const std::array<GridField, 3> &A,
                                   const std::vector<FracOrder> &alphas);
/// E = grad A0 - D0 A, H = curl A.
EMFields em_fields(const Potential &P);

/// (E^2 - H^2) / 8 pi in terms of (A0..A3) and their Caputo gradient, plus
/// `mass` * A0^2. Any nonzero `mass` breaks gauge invariance.
LagrangianDensity em_density(const std::vector<FracOrder> &alphas, double mass = 0.0);

/// Action of em_density over the grid box.
double em_lagrangian(const Potential &P, double mass = 0.0);

/// A_j -> A_j + left Caputo partial of f of order alpha_j along axis j.
Potential gauge_transform(const Potential &P, const GridField &f);

/// The gauge transformation as a one-parameter local transformation: row j
/// is the unit left Caputo partial along axis j.
Transformation gauge_transformation(const TensorGrid &grid,
                                    const std::vector<FracOrder> &alphas);

/// sum_j right RL partial along axis j (order alpha_j) of the j-th Lagrange
/// expression of em_density, through the generic Noether machinery.
IdentityReport em_noether_report(const Potential &P, double mass = 0.0);
GridField em_noether_residual(const Potential &P, double mass = 0.0);

/// Smooth seeded potential: each component a polynomial times a Gaussian.
Potential random_potential(const TensorGrid &grid, std::vector<FracOrder> alphas,
                           std::uint64_t seed);

} // namespace fracvar
