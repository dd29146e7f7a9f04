#include "fracvar/fracops.hpp"

#include "fracvar/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fracvar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_integer(double x) { return x == std::floor(x); }

// Finite-difference weights for derivatives 0..max_order at z from nodes x
// (Fornberg's recursion).
std::vector<std::vector<double>> fornberg(double z, std::span<const double> x,
                                          unsigned max_order) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> c(max_order + 1,
                                     std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const unsigned mn = std::min<unsigned>(static_cast<unsigned>(i), max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (unsigned k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (unsigned k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

void check_unit_order(FracOrder alpha, const char *what) {
  if (alpha.value() <= 0.0 || alpha.value() > 1.0)
    throw OrderError(std::string(what) + " needs 0 < order <= 1, got " +
                     std::to_string(alpha.value()));
}

void check_high_order(FracOrder mu, const char *what) {
  if (mu.value() <= 1.0)
    throw OrderError(std::string(what) + " needs order > 1, got " +
                     std::to_string(mu.value()));
}

GridFn1D run(const GridFn1D &f, OpKind kind, FracOrder mu) {
  const FiberOperator op(kind, mu, f.grid());
  std::vector<double> out(f.size());
  op.apply(f.values(), out);
  return GridFn1D::unchecked(f.grid(), std::move(out));
}

} // namespace

FracOrder::FracOrder(double mu) : mu_(mu) {
  if (!std::isfinite(mu) || mu < 0.0)
    throw OrderError("fractional order must be finite and >= 0, got " +
                     std::to_string(mu));
}

bool is_left(OpKind kind) {
  return kind == OpKind::LeftRLIntegral || kind == OpKind::LeftRLDerivative ||
         kind == OpKind::LeftCaputo;
}

const char *to_string(OpKind kind) {
  switch (kind) {
  case OpKind::LeftRLIntegral: return "LeftRLIntegral";
  case OpKind::RightRLIntegral: return "RightRLIntegral";
  case OpKind::LeftRLDerivative: return "LeftRLDerivative";
  case OpKind::RightRLDerivative: return "RightRLDerivative";
  case OpKind::LeftCaputo: return "LeftCaputo";
  case OpKind::RightCaputo: return "RightCaputo";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Gamma

double gamma(double z) {
  static constexpr double g = 7.0;
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

  if (!std::isfinite(z))
    throw PoleError("gamma of a non-finite argument");
  if (z <= 0.0 && is_integer(z))
    throw PoleError("gamma has a pole at " + std::to_string(z));
  if (z < 0.5)
    return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma(1.0 - z));

  z -= 1.0;
  double x = p[0];
  for (std::size_t i = 1; i < p.size(); ++i)
    x += p[i] / (z + static_cast<double>(i));
  const double t = z + g + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) *
         std::exp(-t) * x;
}

double reciprocal_gamma(double z) {
  if (z <= 0.0 && is_integer(z))
    return 0.0;
  return 1.0 / gamma(z);
}

// ---------------------------------------------------------------------------
// FiberOperator

FiberOperator::FiberOperator(OpKind kind, FracOrder mu,
                             const UniformGrid1D &grid)
    : kind_(kind), mu_(mu.value()), h_(grid.h()), nodes_(grid.size()) {
  const bool integral =
      kind == OpKind::LeftRLIntegral || kind == OpKind::RightRLIntegral;
  const bool caputo =
      kind == OpKind::LeftCaputo || kind == OpKind::RightCaputo;

  if (integral) {
    if (mu_ > 1.0)
      throw OrderError("RL integral needs 0 <= order <= 1, got " +
                       std::to_string(mu_));
    scheme_ = mu_ == 0.0 ? Scheme::Identity : Scheme::RLIntegral;
    nu_ = mu_;
  } else {
    if (mu_ <= 0.0)
      throw OrderError(std::string(to_string(kind)) +
                       " needs a positive order");
    if (mu_ < 1.0) {
      scheme_ = caputo ? Scheme::CaputoL1 : Scheme::RLDerivative;
    } else if (is_integer(mu_)) {
      scheme_ = Scheme::FiniteDifference;
      int_order_ = static_cast<unsigned>(mu_);
    } else {
      scheme_ = caputo ? Scheme::CaputoHigh : Scheme::RLDerivativeHigh;
      int_order_ = static_cast<unsigned>(std::ceil(mu_));
      nu_ = int_order_ - mu_;
    }
  }

  if (int_order_ > 1 && grid.n() < 4 * int_order_)
    throw GridError("order " + std::to_string(mu_) + " needs at least " +
                    std::to_string(4 * int_order_) + " subintervals");

  const std::size_t n = nodes_ - 1;

  if (nu_ > 0.0) {
    const double p = nu_ + 1.0;
    start_.assign(nodes_, 0.0);
    interior_.assign(nodes_, 0.0);
    if (n >= 1)
      start_[1] = nu_;
    for (std::size_t j = 2; j <= n; ++j) {
      const double jd = static_cast<double>(j);
      // (j-1)^{p} - (j-1-nu) j^{nu}, rearranged to avoid cancellation.
      start_[j] = std::pow(jd, p) *
                  (std::expm1(p * std::log1p(-1.0 / jd)) + p / jd);
    }
    for (std::size_t m = 1; m <= n; ++m) {
      const double md = static_cast<double>(m);
      // (m+1)^p - 2 m^p + (m-1)^p
      interior_[m] = std::pow(md, p) * (std::expm1(p * std::log1p(1.0 / md)) +
                                        std::expm1(p * std::log1p(-1.0 / md)));
    }
    integral_scale_ = std::pow(h_, nu_) * reciprocal_gamma(nu_ + 2.0);
  }

  if (scheme_ == Scheme::CaputoL1 || scheme_ == Scheme::RLDerivative) {
    const double e = 1.0 - mu_;
    l1_.assign(nodes_, 0.0);
    l1_[0] = 1.0;
    for (std::size_t m = 1; m < nodes_; ++m) {
      const double md = static_cast<double>(m);
      l1_[m] = std::pow(md, e) * std::expm1(e * std::log1p(1.0 / md));
    }
    l1_scale_ = std::pow(h_, -mu_) * reciprocal_gamma(2.0 - mu_);
  }

  if (int_order_ > 0) {
    fd_.resize(int_order_ + 1);
    for (unsigned k = 1; k <= int_order_; ++k) {
      const std::size_t width = k + 2;
      if (width > nodes_)
        throw GridError("grid too coarse for a derivative of order " +
                        std::to_string(k));
      std::vector<double> x(width);
      for (std::size_t i = 0; i < width; ++i)
        x[i] = static_cast<double>(i);
      fd_[k].resize(width);
      for (std::size_t pos = 0; pos < width; ++pos)
        fd_[k][pos] = fornberg(static_cast<double>(pos), x, k)[k];
    }
  }
}

void FiberOperator::apply(std::span<const double> in,
                          std::span<double> out) const {
  if (in.size() != out.size() || in.size() > nodes_)
    throw GridError("fibre length does not match the operator grid");

  auto left = [&](std::span<const double> src, std::span<double> dst) {
    if (src.size() > 2 && !std::isfinite(src[0])) {
      apply_left(src.subspan(1), dst.subspan(1));
      dst[0] = kNaN;
    } else {
      apply_left(src, dst);
    }
  };

  if (is_left(kind_)) {
    left(in, out);
    return;
  }
  std::vector<double> rin(in.rbegin(), in.rend());
  std::vector<double> rout(in.size());
  left(rin, rout);
  std::reverse_copy(rout.begin(), rout.end(), out.begin());
}

void FiberOperator::rl_integral(std::span<const double> in, double nu,
                                std::span<double> out) const {
  if (nu == 0.0) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  out[0] = 0.0;
  for (std::size_t j = 1; j < in.size(); ++j) {
    double sum = start_[j] * in[0];
    for (std::size_t k = 1; k < j; ++k)
      sum += interior_[j - k] * in[k];
    sum += in[j];
    out[j] = integral_scale_ * sum;
  }
}

void FiberOperator::caputo_l1(std::span<const double> in,
                              std::span<double> out) const {
  out[0] = 0.0;
  for (std::size_t j = 1; j < in.size(); ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < j; ++k)
      sum += l1_[j - 1 - k] * (in[k + 1] - in[k]);
    out[j] = l1_scale_ * sum;
  }
}

void FiberOperator::finite_difference(std::span<const double> in, unsigned m,
                                      std::span<double> out) const {
  const std::size_t width = m + 2;
  const std::size_t len = in.size();
  if (len < width)
    throw GridError("fibre too short for the finite-difference stencil");
  const double scale = std::pow(h_, -static_cast<double>(m));
  const auto half = static_cast<std::ptrdiff_t>((width - 1) / 2);
  const auto last = static_cast<std::ptrdiff_t>(len - width);
  for (std::size_t j = 0; j < len; ++j) {
    const std::ptrdiff_t s =
        std::clamp(static_cast<std::ptrdiff_t>(j) - half, std::ptrdiff_t{0}, last);
    const auto &w = fd_[m][j - static_cast<std::size_t>(s)];
    // Difference form: exact zero on constant data.
    double sum = 0.0;
    for (std::size_t i = 0; i < width; ++i)
      sum += w[i] * (in[static_cast<std::size_t>(s) + i] - in[j]);
    out[j] = scale * sum;
  }
}

double FiberOperator::trace(std::span<const double> in, unsigned k) const {
  if (k == 0)
    return in[0];
  const auto &w = fd_[k][0];
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    sum += w[i] * (in[i] - in[0]);
  return sum * std::pow(h_, -static_cast<double>(k));
}

void FiberOperator::apply_left(std::span<const double> in,
                               std::span<double> out) const {
  switch (scheme_) {
  case Scheme::Identity:
    std::copy(in.begin(), in.end(), out.begin());
    return;
  case Scheme::RLIntegral:
    rl_integral(in, nu_, out);
    return;
  case Scheme::CaputoL1:
    caputo_l1(in, out);
    return;
  case Scheme::FiniteDifference:
    finite_difference(in, int_order_, out);
    return;
  case Scheme::CaputoHigh: {
    std::vector<double> d(in.size());
    finite_difference(in, int_order_, d);
    rl_integral(d, nu_, out);
    return;
  }
  case Scheme::RLDerivative: {
    caputo_l1(in, out);
    const double c = in[0] * reciprocal_gamma(1.0 - mu_);
    for (std::size_t j = 1; j < in.size(); ++j)
      out[j] += c * std::pow(static_cast<double>(j) * h_, -mu_);
    out[0] = in[0] != 0.0 ? kNaN : 0.0;
    return;
  }
  case Scheme::RLDerivativeHigh: {
    std::vector<double> d(in.size());
    finite_difference(in, int_order_, d);
    rl_integral(d, nu_, out);
    bool singular = false;
    for (unsigned k = 0; k < int_order_; ++k) {
      const double c = trace(in, k) * reciprocal_gamma(k + 1.0 - mu_);
      if (c == 0.0)
        continue;
      singular = true;
      for (std::size_t j = 1; j < in.size(); ++j)
        out[j] += c * std::pow(static_cast<double>(j) * h_, k - mu_);
    }
    if (singular)
      out[0] = kNaN;
    return;
  }
  }
}

// ---------------------------------------------------------------------------
// 1D entry points

GridFn1D left_rl_integral(const GridFn1D &f, FracOrder alpha) {
  return run(f, OpKind::LeftRLIntegral, alpha);
}

GridFn1D right_rl_integral(const GridFn1D &f, FracOrder alpha) {
  return run(f, OpKind::RightRLIntegral, alpha);
}

GridFn1D left_caputo(const GridFn1D &f, FracOrder alpha) {
  check_unit_order(alpha, "left_caputo");
  return run(f, OpKind::LeftCaputo, alpha);
}

GridFn1D right_caputo(const GridFn1D &f, FracOrder alpha) {
  check_unit_order(alpha, "right_caputo");
  return run(f, OpKind::RightCaputo, alpha);
}

GridFn1D left_rl_derivative(const GridFn1D &f, FracOrder alpha) {
  check_unit_order(alpha, "left_rl_derivative");
  return run(f, OpKind::LeftRLDerivative, alpha);
}

GridFn1D right_rl_derivative(const GridFn1D &f, FracOrder alpha) {
  check_unit_order(alpha, "right_rl_derivative");
  return run(f, OpKind::RightRLDerivative, alpha);
}

GridFn1D left_caputo_high(const GridFn1D &f, FracOrder mu) {
  check_high_order(mu, "left_caputo_high");
  return run(f, OpKind::LeftCaputo, mu);
}

GridFn1D right_caputo_high(const GridFn1D &f, FracOrder mu) {
  check_high_order(mu, "right_caputo_high");
  return run(f, OpKind::RightCaputo, mu);
}

GridFn1D left_rl_derivative_high(const GridFn1D &f, FracOrder mu) {
  check_high_order(mu, "left_rl_derivative_high");
  return run(f, OpKind::LeftRLDerivative, mu);
}

GridFn1D right_rl_derivative_high(const GridFn1D &f, FracOrder mu) {
  check_high_order(mu, "right_rl_derivative_high");
  return run(f, OpKind::RightRLDerivative, mu);
}

GridFn1D apply_1d(const GridFn1D &f, OpKind kind, FracOrder mu) {
  return run(f, kind, mu);
}

GridFn1D fd_derivative(const GridFn1D &f, unsigned order) {
  if (order == 0)
    throw OrderError("fd_derivative needs order >= 1");
  return run(f, OpKind::LeftCaputo, FracOrder(order));
}

GridField partial_frac(const GridField &field, std::size_t axis, OpKind kind,
                       FracOrder mu) {
  const TensorGrid &grid = field.grid();
  if (axis >= grid.rank())
    throw GridError("axis " + std::to_string(axis) + " out of range for rank " +
                    std::to_string(grid.rank()));
  const UniformGrid1D &line = grid.axis(axis);
  const FiberOperator op(kind, mu, line);

  const std::size_t len = line.size();
  const std::size_t stride = grid.stride(axis);
  const std::size_t block = len * stride;
  const std::size_t outer = grid.size() / block;

  const auto in = field.values();
  std::vector<double> out(in.size());
  std::vector<double> fibre(len), result(len);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < stride; ++i) {
      const std::size_t base = o * block + i;
      for (std::size_t k = 0; k < len; ++k)
        fibre[k] = in[base + k * stride];
      op.apply(fibre, result);
      for (std::size_t k = 0; k < len; ++k)
        out[base + k * stride] = result[k];
    }
  }
  return GridField::unchecked(grid, std::move(out));
}

} // namespace fracvar
