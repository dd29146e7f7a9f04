#include "fracvar/scenarios.hpp"

#include "fracvar/emfield.hpp"
#include "fracvar/error.hpp"
#include "fracvar/noether.hpp"
#include "fracvar/opalgebra.hpp"
#include "fracvar/variational.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <tuple>

namespace fracvar {

namespace {

using Rows = std::vector<ReportRow>;

std::string format_order(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join_orders(const std::vector<FracOrder> &orders) {
  std::string out;
  for (const auto &o : orders) {
    if (!out.empty())
      out += ';';
    out += format_order(o.value());
  }
  return out;
}

std::vector<FracOrder> orders_or(const ScenarioConfig &c,
                                 std::vector<double> fallback) {
  if (!c.orders.empty())
    return c.orders;
  std::vector<FracOrder> out;
  for (double v : fallback)
    out.emplace_back(v);
  return out;
}

void require_unit_orders(const std::vector<FracOrder> &orders) {
  for (const auto &o : orders)
    if (o.value() <= 0.0 || o.value() > 1.0)
      throw UsageError("orders for this scenario must lie in (0, 1], got " +
                       format_order(o.value()));
}

std::size_t level_n(const ScenarioConfig &c, std::size_t level) {
  return c.n << level;
}

UniformGrid1D line(const ScenarioConfig &c, std::size_t n) {
  return UniformGrid1D(c.interval.first, c.interval.second, n);
}

TensorGrid box(const ScenarioConfig &c, std::size_t n, std::size_t rank) {
  return TensorGrid(std::vector<UniformGrid1D>(rank, line(c, n)));
}

// Normalised coordinate on the configured interval.
std::function<double(double)> unit(const ScenarioConfig &c) {
  const double a = c.interval.first, len = c.interval.second - c.interval.first;
  return [a, len](double t) { return (t - a) / len; };
}

// Sub-seeds for independent sample families of one run.
std::vector<std::uint64_t> seeds(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> out(count);
  for (auto &s : out)
    s = rng();
  return out;
}

// ---------------------------------------------------------------------------
// Left Caputo of (t - a)^2 against 2 (t - a)^{2-alpha} / Gamma(3 - alpha).

Rows run_convergence(const ScenarioConfig &c) {
  const auto orders = orders_or(c, {0.5});
  require_unit_orders(orders);
  Rows rows;
  for (const auto &alpha : orders) {
    for (std::size_t l = 0; l < c.levels; ++l) {
      const auto grid = line(c, level_n(c, l));
      const double a = grid.a(), mu = alpha.value();
      const auto f = sample_1d([a](double t) { return (t - a) * (t - a); }, grid);
      const auto d = left_caputo(f, alpha);
      double err = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double exact =
            2.0 * std::pow(grid.node(j) - a, 2.0 - mu) / std::tgamma(3.0 - mu);
        err = std::max(err, std::abs(d[j] - exact));
      }
      rows.push_back({c.scenario, grid.n(), join_orders({alpha}), "max-error", err,
                      Expect::Decreasing});
    }
  }
  return rows;
}

Rows run_ibp(const ScenarioConfig &c) {
  const auto orders = orders_or(c, {0.25, 0.5, 0.75});
  require_unit_orders(orders);
  const auto s = unit(c);
  Rows rows;
  for (const auto &alpha : orders) {
    for (std::size_t l = 0; l < c.levels; ++l) {
      const auto grid = line(c, level_n(c, l));
      const auto f = sample_1d(
          [s](double t) {
            const double z = s(t);
            return z * z * (1 - z) * (1 - z) * (1 + z);
          },
          grid);
      const auto g = sample_1d(
          [s](double t) { return 2.0 - s(t) + 0.3 * std::cos(3.0 * s(t)); }, grid);
      const auto tag = join_orders({alpha});
      rows.push_back({c.scenario, grid.n(), tag, "integral-ibp",
                      ibp_integral_check(f, g, alpha), Expect::Decreasing});
      rows.push_back({c.scenario, grid.n(), tag, "caputo-ibp",
                      caputo_ibp_check(f, g, alpha), Expect::Decreasing});
    }
  }
  return rows;
}

Rows run_duality(const ScenarioConfig &c) {
  const auto orders = orders_or(c, {0.3});
  require_unit_orders(orders);
  const auto s = unit(c);
  const Coefficient a0 = 0.7;
  const Coefficient a1 = Coefficient::of_t([s](double t) { return 1.0 + 0.5 * s(t); });
  const Coefficient a2 = Coefficient::of_t([s](double t) { return 2.0 - s(t) * s(t); });
  const std::vector<std::function<double(double)>> qs = {
      [s](double t) { return 1.0 + s(t); },
      [s](double t) { return 2.0 - s(t); },
      [s](double t) { return 1.0 + s(t) + std::cos(2.0 * s(t)); },
  };
  Rows rows;
  for (const auto &beta : orders) {
    const std::string tag =
        join_orders({beta}) + ";" + format_order(1.0 + beta.value());
    for (std::size_t l = 0; l < c.levels; ++l) {
      const auto grid = line(c, level_n(c, l));
      const auto p = sample_1d(
          [s](double t) {
            const double z = s(t);
            return std::pow(z * (1.0 - z), 3);
          },
          grid);
      const FracOperator ops[4] = {
          kind_one(grid, a0, {{a1, beta}}),
          kind_two(grid, a0, {{a1, beta}}),
          kind_three(grid, a0, beta, {a1, a2}),
          kind_four(grid, a0, beta, {a1, a2}),
      };
      for (int k = 0; k < 4; ++k) {
        double worst = 0.0;
        for (const auto &q : qs)
          worst = std::max(worst, duality_residual(ops[k], p, sample_1d(q, grid)));
        rows.push_back({c.scenario, grid.n(), tag,
                        "kind-" + std::to_string(k + 1) + "-duality", worst,
                        Expect::Decreasing});
      }
    }
  }
  return rows;
}

// L = 1/2 (v1 - v2)^2, invariant under a common shift of both components.
Lagrangian1D difference_lagrangian(FracOrder alpha) {
  Lagrangian1D L;
  L.n = 2;
  L.alphas = {alpha, alpha};
  L.eval = [](double, std::span<const double>, std::span<const double> v) {
    const double d = v[0] - v[1];
    return 0.5 * d * d;
  };
  L.d_dx = [](double, std::span<const double>, std::span<const double>,
              std::span<double> out) { out[0] = out[1] = 0.0; };
  L.d_dv = [](double, std::span<const double>, std::span<const double> v,
              std::span<double> out) {
    out[0] = v[0] - v[1];
    out[1] = -out[0];
  };
  return L;
}

// L = 1/2 v1^2, not invariant under the common shift.
Lagrangian1D control_lagrangian(FracOrder alpha) {
  Lagrangian1D L = difference_lagrangian(alpha);
  L.eval = [](double, std::span<const double>, std::span<const double> v) {
    return 0.5 * v[0] * v[0];
  };
  L.d_dv = [](double, std::span<const double>, std::span<const double> v,
              std::span<double> out) {
    out[0] = v[0];
    out[1] = 0.0;
  };
  return L;
}

// Sum over axes of 1/2 (D_i u1 - D_i u2)^2, or 1/2 (D_i u1)^2 for the control.
LagrangianDensity difference_density(std::size_t axes, FracOrder alpha,
                                     bool control) {
  LagrangianDensity L;
  L.n = 2;
  L.m = axes - 1;
  L.alphas.assign(axes, alpha);
  L.eval = [axes, control](std::span<const double>, std::span<const double>,
                           std::span<const double> g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < axes; ++i) {
      const double d = control ? g[i] : g[i] - g[axes + i];
      sum += 0.5 * d * d;
    }
    return sum;
  };
  L.d_du = [](std::span<const double>, std::span<const double>,
              std::span<const double>, std::span<double> out) {
    out[0] = out[1] = 0.0;
  };
  L.d_dgrad = [axes, control](std::span<const double>, std::span<const double>,
                              std::span<const double> g, std::span<double> out) {
    for (std::size_t i = 0; i < axes; ++i) {
      const double d = control ? g[i] : g[i] - g[axes + i];
      out[i] = d;
      out[axes + i] = control ? 0.0 : -d;
    }
  };
  return L;
}

constexpr std::size_t kTrajectories = 5;
constexpr std::size_t kParamSamples = 10;

Rows run_noether_1d(const ScenarioConfig &c) {
  const auto orders = orders_or(c, {0.5});
  require_unit_orders(orders);
  const auto sub = seeds(c.seed, kTrajectories + 1);
  Rows rows;
  for (const auto &alpha : orders) {
    const auto inv = difference_lagrangian(alpha);
    const auto ctl = control_lagrangian(alpha);
    const auto tag = join_orders({alpha});
    for (std::size_t l = 0; l < c.levels; ++l) {
      const auto grid = line(c, level_n(c, l));
      const TensorGrid domain({grid});
      const auto shift = same_shift(FracOperator::identity(domain), 2);
      const auto dshift = same_shift(
          FracOperator(domain, {caputo_term(domain, TermKind::LeftCaputo, 1.0, alpha)}),
          2);
      const auto samples = random_param_samples(domain, 1, kParamSamples, sub.back());
      double res = 0, dres = 0, gap = 0, cres = 0, cgap = 0;
      for (std::size_t i = 0; i < kTrajectories; ++i) {
        const auto x = random_trajectory(grid, 2, sub[i]);
        res = std::max(res, noether_residual(inv, x, shift).max_norm());
        dres = std::max(dres, noether_residual(inv, x, dshift).max_norm());
        gap = std::max(gap, invariance_gap(inv, x, shift, samples));
        cres = std::max(cres, noether_residual(ctl, x, shift).max_norm());
        cgap = std::max(cgap, invariance_gap(ctl, x, shift, samples));
      }
      rows.push_back({c.scenario, grid.n(), tag, "shift-residual", res, Expect::MachineZero});
      rows.push_back({c.scenario, grid.n(), tag, "derivative-shift-residual", dres,
                      Expect::MachineZero});
      rows.push_back({c.scenario, grid.n(), tag, "shift-gap", gap, Expect::MachineZero});
      rows.push_back({c.scenario, grid.n(), tag, "control-residual", cres,
                      Expect::BoundedAway});
      rows.push_back({c.scenario, grid.n(), tag, "control-gap", cgap, Expect::BoundedAway});
    }
  }
  return rows;
}

Rows run_noether_md(const ScenarioConfig &c) {
  const auto orders = orders_or(c, {0.5});
  require_unit_orders(orders);
  const auto sub = seeds(c.seed, kTrajectories + 1);
  constexpr std::size_t axes = 2;
  Rows rows;
  for (const auto &alpha : orders) {
    const auto inv = difference_density(axes, alpha, false);
    const auto ctl = difference_density(axes, alpha, true);
    const auto tag = join_orders({alpha});
    for (std::size_t l = 0; l < c.levels; ++l) {
      const std::size_t n = level_n(c, l);
      const auto domain = box(c, n, axes);
      const auto shift = same_shift(FracOperator::identity(domain), 2);
      const auto samples = random_param_samples(domain, 1, kParamSamples, sub.back());
      double res = 0, gap = 0, cres = 0, cgap = 0;
      for (std::size_t i = 0; i < kTrajectories; ++i) {
        const auto u = random_field(domain, 2, sub[i]);
        res = std::max(res, noether_residual(inv, u, shift).max_norm());
        gap = std::max(gap, invariance_gap(inv, u, shift, samples));
        cres = std::max(cres, noether_residual(ctl, u, shift).max_norm());
        cgap = std::max(cgap, invariance_gap(ctl, u, shift, samples));
      }
      rows.push_back({c.scenario, n, tag, "shift-residual", res, Expect::MachineZero});
      rows.push_back({c.scenario, n, tag, "shift-gap", gap, Expect::MachineZero});
      rows.push_back({c.scenario, n, tag, "control-residual", cres, Expect::BoundedAway});
      rows.push_back({c.scenario, n, tag, "control-gap", cgap, Expect::BoundedAway});
    }
  }
  return rows;
}

std::vector<FracOrder> field_orders(const ScenarioConfig &c) {
  auto orders = orders_or(c, {0.6, 0.7, 0.8, 0.9});
  require_unit_orders(orders);
  if (orders.size() == 1)
    orders.assign(4, orders.front());
  if (orders.size() != 4)
    throw UsageError("field scenarios take one order or four (one per axis)");
  return orders;
}

constexpr std::size_t kGaugeSamples = 10;
constexpr double kControlMass = 0.5;

Rows run_em_gauge(const ScenarioConfig &c) {
  const auto orders = field_orders(c);
  const auto tag = join_orders(orders);
  const auto sub = seeds(c.seed, kGaugeSamples + 1);
  Rows rows;
  for (std::size_t l = 0; l < c.levels; ++l) {
    const std::size_t n = level_n(c, l);
    const auto grid = box(c, n, 4);
    const auto P = random_potential(grid, orders, sub.back());
    const auto F = em_fields(P);
    const double J = em_lagrangian(P);
    double field = 0.0, action = 0.0;
    for (std::size_t i = 0; i < kGaugeSamples; ++i) {
      const auto f = random_field(grid, 1, sub[i])[0];
      const auto Pg = gauge_transform(P, f);
      const auto G = em_fields(Pg);
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t p = 0; p < grid.size(); ++p)
          field = std::max({field, std::abs(G.E[k][p] - F.E[k][p]),
                            std::abs(G.H[k][p] - F.H[k][p])});
      action = std::max(action, std::abs(em_lagrangian(Pg) - J) / (1.0 + std::abs(J)));
    }
    rows.push_back({c.scenario, n, tag, "field-change", field, Expect::MachineZero});
    rows.push_back({c.scenario, n, tag, "action-change", action, Expect::MachineZero});
  }
  return rows;
}

Rows run_em_identity(const ScenarioConfig &c) {
  const auto orders = field_orders(c);
  const auto tag = join_orders(orders);
  Rows rows;
  for (std::size_t l = 0; l < c.levels; ++l) {
    const std::size_t n = level_n(c, l);
    const auto P = random_potential(box(c, n, 4), orders, c.seed);
    rows.push_back({c.scenario, n, tag, "identity-residual",
                    em_noether_report(P).max_norm(), Expect::MachineZero});
    rows.push_back({c.scenario, n, tag, "control-residual",
                    em_noether_report(P, kControlMass).max_norm(),
                    Expect::BoundedAway});
  }
  return rows;
}

// Unit-order operators against exact derivatives, and the fractional Noether
// residual against its classical counterpart.
Rows run_classical(const ScenarioConfig &c) {
  if (!c.orders.empty())
    for (const auto &o : c.orders)
      if (o.value() != 1.0)
        throw UsageError("classical-limit runs with every order equal to 1");
  const FracOrder one(1.0);
  const auto s = unit(c);
  const double len = c.interval.second - c.interval.first;
  const auto f = [s](double t) { return std::sin(2.0 * s(t) + 0.3); };
  const auto df = [s, len](double t) { return 2.0 / len * std::cos(2.0 * s(t) + 0.3); };

  Lagrangian1D L;
  L.n = 2;
  L.alphas = {one, one};
  L.eval = [](double t, std::span<const double> x, std::span<const double> v) {
    return 0.5 * (v[0] * v[0] + v[1] * v[1]) - std::sin(x[0]) * x[1] + t * x[0] * v[1];
  };
  L.d_dx = [](double t, std::span<const double> x, std::span<const double> v,
              std::span<double> out) {
    out[0] = -std::cos(x[0]) * x[1] + t * v[1];
    out[1] = -std::sin(x[0]);
  };
  L.d_dv = [](double t, std::span<const double> x, std::span<const double> v,
              std::span<double> out) {
    out[0] = v[0];
    out[1] = v[1] + t * x[0];
  };
  ClassicalTransformation C;
  const Coefficient b0 = Coefficient::of_t([s](double t) { return 1.0 + s(t); });
  const Coefficient b1 = Coefficient::of_t([s](double t) { return 0.5 - s(t) * s(t); });
  const Coefficient b2 = Coefficient::of_t([s](double t) { return 0.3 * std::cos(s(t)); });
  C.b = {{{b0, b1, b2}}, {{Coefficient(2.0), b2}}};

  Rows rows;
  for (std::size_t l = 0; l < c.levels; ++l) {
    const auto grid = line(c, level_n(c, l));
    const auto fs = sample_1d(f, grid);
    const std::pair<const char *, GridFn1D> ops[] = {
        {"left-caputo-error", left_caputo(fs, one)},
        {"right-caputo-error", -1.0 * right_caputo(fs, one)},
        {"left-rl-error", left_rl_derivative(fs, one)},
        {"right-rl-error", -1.0 * right_rl_derivative(fs, one)},
    };
    for (const auto &[name, d] : ops) {
      double err = 0.0;
      for (std::size_t j = 0; j < grid.size(); ++j)
        err = std::max(err, std::abs(d[j] - df(grid.node(j))));
      rows.push_back({c.scenario, grid.n(), "1", name, err, Expect::Decreasing});
    }

    const auto x = random_trajectory(grid, 2, c.seed);
    const auto frac = noether_residual(L, x, C.to_fractional(grid));
    const auto classical = classical_identity_residual(L, x, C);
    double gap = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double z = s(grid.node(j));
      if (z >= 0.1 && z <= 0.9)
        gap = std::max(gap, std::abs(frac.residuals[0][j] - classical[0][j]));
    }
    rows.push_back({c.scenario, grid.n(), "1", "noether-classical-gap", gap,
                    Expect::Decreasing});
  }
  return rows;
}

using Runner = Rows (*)(const ScenarioConfig &);

struct Entry {
  ScenarioInfo info;
  Runner run;
};

const std::vector<Entry> &registry() {
  static const std::vector<Entry> entries = {
      {{"convergence",
        "left Caputo derivative of a quadratic against its closed form", 64},
       run_convergence},
      {{"ibp-check",
        "integration by parts for fractional integrals and Caputo derivatives", 64},
       run_ibp},
      {{"adjoint-duality",
        "formal adjoints of the four operator families under quadrature", 64},
       run_duality},
      {{"noether-1d",
        "identities among Lagrange expressions for a shift-invariant 1D Lagrangian",
        64},
       run_noether_1d},
      {{"noether-md",
        "identities among Lagrange expressions for a shift-invariant 2D density", 32},
       run_noether_md},
      {{"em-gauge",
        "gauge invariance of fractional electromagnetic fields and action", 8},
       run_em_gauge},
      {{"em-identity",
        "divergence identity of the fractional electromagnetic Lagrange expressions",
        8},
       run_em_identity},
      {{"classical-limit",
        "unit-order operators and Noether identities against classical stencils", 64},
       run_classical},
  };
  return entries;
}

const Entry *find_entry(const std::string &name) {
  for (const auto &e : registry())
    if (e.info.name == name)
      return &e;
  return nullptr;
}

} // namespace

const char *to_string(Expect tag) {
  switch (tag) {
  case Expect::MachineZero:
    return "machine-zero";
  case Expect::Decreasing:
    return "decreasing";
  case Expect::BoundedAway:
    return "bounded-away";
  }
  return "?";
}

const std::vector<ScenarioInfo> &scenarios() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> out;
    for (const auto &e : registry())
      out.push_back(e.info);
    return out;
  }();
  return infos;
}

const ScenarioInfo *find_scenario(const std::string &name) {
  const Entry *e = find_entry(name);
  return e ? &e->info : nullptr;
}

void validate(const ScenarioConfig &config) {
  if (!find_entry(config.scenario))
    throw UsageError("unknown scenario '" + config.scenario + "'");
  if (config.n != 0 && config.n < 8)
    throw UsageError("n must be at least 8");
  if (config.levels < 1)
    throw UsageError("levels must be at least 1");
  const auto [a, b] = config.interval;
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw UsageError("interval must be finite with a < b");
}

std::vector<ReportRow> run_scenario(const ScenarioConfig &config) {
  ScenarioConfig c = config;
  if (const auto *info = find_scenario(c.scenario); info && c.n == 0)
    c.n = info->default_n;
  validate(c);
  try {
    return find_entry(c.scenario)->run(c);
  } catch (const GridError &e) {
    throw UsageError(e.what());
  } catch (const OrderError &e) {
    throw UsageError(e.what());
  }
}

void write_report(const std::vector<ReportRow> &rows, std::ostream &out) {
  out << "scenario,n,orders,residual,value,tag\n";
  char value[40];
  for (const auto &r : rows) {
    std::snprintf(value, sizeof value, "%.17e", r.value);
    out << r.scenario << ',' << r.n << ',' << r.orders << ',' << r.residual << ','
        << value << ',' << to_string(r.tag) << '\n';
  }
}

void write_report(const std::vector<ReportRow> &rows,
                  const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  write_report(rows, out);
  out.flush();
  if (!out)
    throw IoError("failed writing '" + path.string() + "'");
}

Verdict verdict(const std::vector<ReportRow> &rows) {
  Verdict v;
  auto fail = [&v](const ReportRow &r, const std::string &why) {
    v.pass = false;
    char value[40];
    std::snprintf(value, sizeof value, "%.6e", r.value);
    v.failures.push_back(r.scenario + " n=" + std::to_string(r.n) + " orders=" +
                         r.orders + " " + r.residual + "=" + value + ": " + why);
  };

  // Series in first-appearance order.
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::vector<const ReportRow *>> series;
  std::vector<Key> order;
  for (const auto &r : rows) {
    if (!std::isfinite(r.value) || r.value < 0.0) {
      fail(r, "not a finite non-negative residual");
      continue;
    }
    const Key key{r.scenario, r.orders, r.residual};
    auto [it, inserted] = series.try_emplace(key);
    if (inserted)
      order.push_back(key);
    it->second.push_back(&r);
  }

  for (const auto &key : order) {
    const auto &s = series[key];
    switch (s.front()->tag) {
    case Expect::MachineZero:
      for (const auto *r : s)
        if (r->value > kMachineZero)
          fail(*r, "above machine-zero threshold");
      break;
    case Expect::Decreasing:
      for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i - 1]->value >= kMinRatio * s[i]->value))
          fail(*s[i], "ratio to previous level below 1.3");
      break;
    case Expect::BoundedAway:
      if (s.back()->value < kBoundedAway)
        fail(*s.back(), "not bounded away from zero");
      break;
    }
  }
  return v;
}

} // namespace fracvar
