#include "fracvar/noether.hpp"

#include "fracvar/error.hpp"
#include "fracvar/random.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace fracvar {

namespace {

void check_params(const Transformation &T, const ParamFunctions &p) {
  if (p.p.size() != T.params())
    throw Error("transformation has " + std::to_string(T.params()) +
                " parameters, got " + std::to_string(p.p.size()) + " functions");
  for (const auto &f : p.p)
    if (!(f.grid() == T.domain()))
      throw GridError("parameter function is not on the transformation domain");
}

GridField shift(const Transformation &T, const ParamFunctions &p, std::size_t k) {
  GridField out = GridField::zeros(T.domain());
  for (std::size_t s = 0; s < T.params(); ++s)
    out = out + apply(T.op(k, s), p.p[s]);
  return out;
}

IdentityReport assemble(const Transformation &T,
                        const std::vector<GridField> &expressions) {
  if (expressions.size() != T.components())
    throw Error("transformation has " + std::to_string(T.components()) +
                " rows, Lagrangian has " + std::to_string(expressions.size()) +
                " components");
  IdentityReport report{T.domain(), {}, {}, {}};
  for (std::size_t s = 0; s < T.params(); ++s) {
    GridField r = GridField::zeros(T.domain());
    for (std::size_t k = 0; k < T.components(); ++k)
      r = r + apply_adjoint(adjoint(T.op(k, s)), expressions[k]);
    std::size_t flagged = 0;
    report.norms.push_back(interior_max_norm(r, &flagged));
    report.flagged.push_back(flagged);
    report.residuals.push_back(std::move(r));
  }
  return report;
}

// Three-point first derivative, second-order one-sided at both ends.
std::vector<double> classical_d(std::span<const double> f, double h) {
  const std::size_t n = f.size() - 1;
  std::vector<double> d(f.size());
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t j = 1; j < n; ++j)
    d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  d[n] = (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * h);
  return d;
}

// Cubic in the first normalised coordinate plus linear terms in the rest,
// times an anisotropic Gaussian.
struct BumpCoefficients {
  std::vector<double> poly; // 4 + (rank - 1)
  std::vector<double> centre, width;
};

BumpCoefficients draw_bump(std::mt19937_64 &rng, std::size_t rank) {
  BumpCoefficients c;
  for (std::size_t i = 0; i < 4 + (rank - 1); ++i)
    c.poly.push_back(uniform(rng, -1.0, 1.0));
  for (std::size_t i = 0; i < rank; ++i) {
    c.centre.push_back(uniform(rng, 0.0, 1.0));
    c.width.push_back(uniform(rng, 0.35, 0.7));
  }
  return c;
}

double eval_bump(const BumpCoefficients &c, std::span<const double> s) {
  double poly = c.poly[0] + s[0] * (c.poly[1] + s[0] * (c.poly[2] + s[0] * c.poly[3]));
  for (std::size_t i = 1; i < s.size(); ++i)
    poly += c.poly[3 + i] * s[i];
  double exponent = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double z = (s[i] - c.centre[i]) / c.width[i];
    exponent += z * z;
  }
  return poly * std::exp(-exponent);
}

GridField sample_normalised(const TensorGrid &grid,
                            const std::function<double(std::span<const double>)> &f) {
  std::vector<double> s(grid.rank());
  return sample_field(
      [&](std::span<const double> x) {
        for (std::size_t i = 0; i < grid.rank(); ++i) {
          const auto &ax = grid.axis(i);
          s[i] = (x[i] - ax.a()) / (ax.b() - ax.a());
        }
        return f(s);
      },
      grid);
}

} // namespace

// ---------------------------------------------------------------------------

Transformation::Transformation(std::vector<std::vector<FracOperator>> ops)
    : ops_(std::move(ops)) {
  if (ops_.empty() || ops_.front().empty())
    throw Error("a transformation needs at least one row and one parameter");
  for (const auto &row : ops_) {
    if (row.size() != ops_.front().size())
      throw Error("transformation rows have different lengths");
    for (const auto &op : row)
      if (!(op.domain() == domain()))
        throw GridError("transformation operators live on different domains");
  }
}

Transformation same_shift(const FracOperator &op, std::size_t components) {
  return Transformation(std::vector<std::vector<FracOperator>>(components, {op}));
}

ParamFunctions::ParamFunctions(std::vector<GridField> fields, bool vanishing)
    : p(std::move(fields)), boundary_vanishing(vanishing) {}

ParamFunctions::ParamFunctions(const std::vector<GridFn1D> &fns, bool vanishing)
    : boundary_vanishing(vanishing) {
  for (const auto &f : fns)
    p.push_back(as_field(f));
}

double IdentityReport::max_norm() const {
  double worst = 0.0;
  for (double v : norms)
    worst = std::max(worst, v);
  return worst;
}

double interior_max_norm(const GridField &f, std::size_t *flagged) {
  const TensorGrid &grid = f.grid();
  std::size_t skipped = 0;
  double worst = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto index = grid.unravel(p);
    bool interior = true;
    for (std::size_t i = 0; i < grid.rank(); ++i)
      if (index[i] == 0 || index[i] == grid.axis(i).n())
        interior = false;
    if (!interior)
      continue;
    if (!std::isfinite(f[p])) {
      ++skipped;
      continue;
    }
    worst = std::max(worst, std::abs(f[p]));
  }
  if (flagged)
    *flagged = skipped;
  return worst;
}

Trajectory transform(const Trajectory &x, const Transformation &T,
                     const ParamFunctions &p) {
  check_params(T, p);
  if (x.size() != T.components())
    throw Error("trajectory and transformation disagree on component count");
  if (!(TensorGrid({x.grid()}) == T.domain()))
    throw GridError("trajectory is not on the transformation domain");
  std::vector<GridFn1D> out;
  for (std::size_t k = 0; k < x.size(); ++k)
    out.push_back(x[k] + as_fn1d(shift(T, p, k)));
  return Trajectory(std::move(out));
}

FieldConfig transform(const FieldConfig &u, const Transformation &T,
                      const ParamFunctions &p) {
  check_params(T, p);
  if (u.size() != T.components())
    throw Error("field and transformation disagree on component count");
  if (!(u.grid() == T.domain()))
    throw GridError("field is not on the transformation domain");
  std::vector<GridField> out;
  for (std::size_t k = 0; k < u.size(); ++k)
    out.push_back(u[k] + shift(T, p, k));
  return FieldConfig(std::move(out));
}

double invariance_gap(const Lagrangian1D &L, const Trajectory &x,
                      const Transformation &T,
                      const std::vector<ParamFunctions> &samples) {
  const double base = action_1d(L, x);
  double gap = 0.0;
  for (const auto &p : samples)
    gap = std::max(gap, std::abs(action_1d(L, transform(x, T, p)) - base));
  return gap;
}

double invariance_gap(const LagrangianDensity &L, const FieldConfig &u,
                      const Transformation &T,
                      const std::vector<ParamFunctions> &samples) {
  const double base = action_md(L, u);
  double gap = 0.0;
  for (const auto &p : samples)
    gap = std::max(gap, std::abs(action_md(L, transform(u, T, p)) - base));
  return gap;
}

IdentityReport noether_residual(const Lagrangian1D &L, const Trajectory &x,
                                const Transformation &T) {
  if (!(TensorGrid({x.grid()}) == T.domain()))
    throw GridError("trajectory is not on the transformation domain");
  std::vector<GridField> expressions;
  for (const auto &e : euler_lagrange_1d(L, x))
    expressions.push_back(as_field(e));
  return assemble(T, expressions);
}

IdentityReport noether_residual(const LagrangianDensity &L, const FieldConfig &u,
                                const Transformation &T) {
  if (!(u.grid() == T.domain()))
    throw GridError("field is not on the transformation domain");
  return assemble(T, euler_lagrange_md(L, u));
}

// ---------------------------------------------------------------------------

Transformation ClassicalTransformation::to_fractional(const UniformGrid1D &grid) const {
  std::vector<std::vector<FracOperator>> ops;
  for (const auto &row : b) {
    std::vector<FracOperator> out;
    for (const auto &coeffs : row) {
      if (coeffs.empty())
        throw Error("classical transformation entry needs a b0 coefficient");
      out.push_back(kind_three(grid, coeffs.front(), FracOrder(1.0),
                               {coeffs.begin() + 1, coeffs.end()}));
    }
    ops.push_back(std::move(out));
  }
  return Transformation(std::move(ops));
}

std::vector<GridFn1D> classical_identity_residual(const Lagrangian1D &L,
                                                  const Trajectory &x,
                                                  const ClassicalTransformation &C) {
  for (const auto &a : L.alphas)
    if (a.value() != 1.0)
      throw OrderError("classical identities need every Lagrangian order equal to 1");
  if (x.size() != L.n || C.components() != L.n)
    throw Error("Lagrangian, trajectory and transformation disagree on components");
  for (const auto &row : C.b)
    if (row.size() != C.params())
      throw Error("classical transformation rows have different lengths");

  const UniformGrid1D &grid = x.grid();
  if (grid.n() < 2)
    throw GridError("classical stencils need at least three nodes");
  const std::size_t n = L.n;
  const std::size_t size = grid.size();
  const double h = grid.h();
  const TensorGrid domain({grid});

  std::vector<std::vector<double>> v(n);
  for (std::size_t k = 0; k < n; ++k)
    v[k] = classical_d(x[k].values(), h);

  std::vector<std::vector<double>> dx(n, std::vector<double>(size));
  std::vector<std::vector<double>> dv(n, std::vector<double>(size));
  std::vector<double> xs(n), vs(n), ox(n), ov(n);
  for (std::size_t j = 0; j < size; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      xs[k] = x[k][j];
      vs[k] = v[k][j];
    }
    L.d_dx(grid.node(j), xs, vs, ox);
    L.d_dv(grid.node(j), xs, vs, ov);
    for (std::size_t k = 0; k < n; ++k) {
      dx[k][j] = ox[k];
      dv[k][j] = ov[k];
    }
  }

  std::vector<std::vector<double>> E(n, std::vector<double>(size));
  for (std::size_t k = 0; k < n; ++k) {
    const auto ddv = classical_d(dv[k], h);
    for (std::size_t j = 0; j < size; ++j)
      E[k][j] = dx[k][j] - ddv[j];
  }

  std::vector<GridFn1D> out;
  for (std::size_t s = 0; s < C.params(); ++s) {
    std::vector<double> r(size, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const auto &coeffs = C.b[k][s];
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const GridField c = coeffs[i].sample(domain);
        std::vector<double> term(size);
        for (std::size_t j = 0; j < size; ++j)
          term[j] = c[j] * E[k][j];
        for (std::size_t d = 0; d < i; ++d)
          term = classical_d(term, h);
        const double sign = i % 2 == 0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < size; ++j)
          r[j] += sign * term[j];
      }
    }
    out.push_back(GridFn1D::unchecked(grid, std::move(r)));
  }
  return out;
}

double classical_identity_check(const Lagrangian1D &L, const Trajectory &x,
                                const ClassicalTransformation &C) {
  double worst = 0.0;
  for (const auto &r : classical_identity_residual(L, x, C))
    worst = std::max(worst, interior_max_norm(as_field(r)));
  return worst;
}

// ---------------------------------------------------------------------------

Trajectory random_trajectory(const UniformGrid1D &grid, std::size_t n,
                             std::uint64_t seed) {
  if (n == 0)
    throw Error("random_trajectory needs at least one component");
  std::mt19937_64 rng(seed);
  const TensorGrid domain({grid});
  std::vector<GridFn1D> components;
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = draw_bump(rng, 1);
    components.push_back(as_fn1d(sample_normalised(
        domain, [&c](std::span<const double> s) { return eval_bump(c, s); })));
  }
  return Trajectory(std::move(components));
}

FieldConfig random_field(const TensorGrid &grid, std::size_t n,
                         std::uint64_t seed) {
  if (n == 0)
    throw Error("random_field needs at least one component");
  std::mt19937_64 rng(seed);
  std::vector<GridField> components;
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = draw_bump(rng, grid.rank());
    components.push_back(sample_normalised(
        grid, [&c](std::span<const double> s) { return eval_bump(c, s); }));
  }
  return FieldConfig(std::move(components));
}

ParamFunctions random_params(const TensorGrid &grid, std::size_t r,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GridField> p;
  for (std::size_t s = 0; s < r; ++s) {
    std::vector<double> c(1 + 2 * grid.rank());
    for (double &ci : c)
      ci = uniform(rng, -1.0, 1.0);
    p.push_back(sample_normalised(grid, [&c](std::span<const double> z) {
      double envelope = 1.0, poly = c[0];
      for (std::size_t i = 0; i < z.size(); ++i) {
        envelope *= z[i] * z[i] * (1.0 - z[i]) * (1.0 - z[i]);
        poly += c[1 + 2 * i] * z[i] + c[2 + 2 * i] * z[i] * z[i];
      }
      return envelope * poly;
    }));
  }
  return ParamFunctions(std::move(p), true);
}

std::vector<ParamFunctions> random_param_samples(const TensorGrid &grid,
                                                 std::size_t r,
                                                 std::size_t count,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ParamFunctions> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(random_params(grid, r, rng()));
  return out;
}

} // namespace fracvar
