#include "fracvar/opalgebra.hpp"

#include "fracvar/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracvar {

namespace {

void check_order_unit(FracOrder order) {
  if (order.value() <= 0.0 || order.value() > 1.0)
    throw OrderError("operator term order must lie in (0, 1], got " +
                     std::to_string(order.value()));
}

bool is_derivative(const OperatorTerm &t) { return t.kind != TermKind::Identity; }

FracOperator::Kind classify(const std::vector<OperatorTerm> &terms) {
  std::vector<double> left, right;
  for (const auto &t : terms) {
    if (t.kind == TermKind::LeftCaputo)
      left.push_back(t.order->value());
    else if (t.kind == TermKind::RightCaputo)
      right.push_back(t.order->value());
  }
  if (!left.empty() && !right.empty())
    return FracOperator::Kind::Mixed;

  const bool is_left = right.empty();
  std::vector<double> &orders = is_left ? left : right;
  if (std::all_of(orders.begin(), orders.end(), [](double o) { return o <= 1.0; }))
    return is_left ? FracOperator::Kind::First : FracOperator::Kind::Second;

  // Orders beta, 1+beta, ..., l-1+beta.
  std::sort(orders.begin(), orders.end());
  const double beta = orders.front();
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (std::abs(orders[i] - (beta + static_cast<double>(i))) > 1e-12)
      return FracOperator::Kind::Mixed;
  return is_left ? FracOperator::Kind::Third : FracOperator::Kind::Fourth;
}

std::vector<OperatorTerm>
unit_terms(const TensorGrid &domain, TermKind side, const Coefficient &a0,
           const std::vector<std::pair<Coefficient, FracOrder>> &terms) {
  std::vector<OperatorTerm> out{identity_term(domain, a0)};
  for (const auto &[c, order] : terms) {
    check_order_unit(order);
    out.push_back(caputo_term(domain, side, c, order));
  }
  return out;
}

std::vector<OperatorTerm> ladder_terms(const TensorGrid &domain, TermKind side,
                                       const Coefficient &a0, FracOrder beta,
                                       const std::vector<Coefficient> &a) {
  check_order_unit(beta);
  std::vector<OperatorTerm> out{identity_term(domain, a0)};
  for (std::size_t i = 0; i < a.size(); ++i)
    out.push_back(caputo_term(domain, side, a[i],
                              FracOrder(beta.value() + static_cast<double>(i))));
  return out;
}

std::vector<OperatorTerm> axis_terms(const TensorGrid &domain, TermKind side,
                                     const Coefficient &c,
                                     const std::vector<AxisTerm> &terms) {
  std::vector<OperatorTerm> out{identity_term(domain, c)};
  for (const auto &t : terms) {
    check_order_unit(t.order);
    out.push_back(caputo_term(domain, side, t.coeff, t.order, t.axis));
  }
  return out;
}

} // namespace

// ---------------------------------------------------------------------------

Coefficient::Coefficient(double value)
    : fn_([value](std::span<const double>) { return value; }) {}

Coefficient::Coefficient(std::function<double(std::span<const double>)> fn)
    : fn_(std::move(fn)) {}

Coefficient Coefficient::of_t(std::function<double(double)> fn) {
  return Coefficient(
      [fn = std::move(fn)](std::span<const double> x) { return fn(x[0]); });
}

GridField Coefficient::sample(const TensorGrid &grid) const {
  return sample_field(fn_, grid);
}

OperatorTerm identity_term(const TensorGrid &domain, const Coefficient &c) {
  return {TermKind::Identity, std::nullopt, 0, c.sample(domain)};
}

OperatorTerm caputo_term(const TensorGrid &domain, TermKind side,
                         const Coefficient &c, FracOrder order,
                         std::size_t axis) {
  if (side == TermKind::Identity)
    throw Error("caputo_term needs a Caputo side");
  if (order.value() <= 0.0)
    throw OrderError("derivative terms need a positive order");
  if (axis >= domain.rank())
    throw GridError("term axis out of range");
  return {side, order, axis, c.sample(domain)};
}

FracOperator::FracOperator(TensorGrid domain, std::vector<OperatorTerm> terms)
    : domain_(std::move(domain)), terms_(std::move(terms)) {
  if (terms_.empty())
    throw Error("an operator needs at least one term");
  for (const auto &t : terms_) {
    if (!(t.coeff.grid() == domain_))
      throw GridError("operator term lives on a different domain");
    if (!t.coeff.all_finite())
      throw ValueError("operator coefficient is not finite");
    if (is_derivative(t) != t.order.has_value())
      throw Error("identity terms carry no order; derivative terms need one");
    if (t.axis >= domain_.rank())
      throw GridError("term axis out of range");
  }
  kind_ = classify(terms_);
}

FracOperator FracOperator::identity(const TensorGrid &domain,
                                    const Coefficient &c) {
  return FracOperator(domain, {identity_term(domain, c)});
}

FracOperator FracOperator::zero(const TensorGrid &domain) {
  return identity(domain, 0.0);
}

FracOperator operator+(const FracOperator &lhs, const FracOperator &rhs) {
  if (!(lhs.domain() == rhs.domain()))
    throw GridError("cannot add operators on different domains");
  std::vector<OperatorTerm> terms = lhs.terms();
  terms.insert(terms.end(), rhs.terms().begin(), rhs.terms().end());
  return FracOperator(lhs.domain(), std::move(terms));
}

FracOperator kind_one(const UniformGrid1D &grid, const Coefficient &a0,
                      const std::vector<std::pair<Coefficient, FracOrder>> &terms) {
  TensorGrid domain({grid});
  return FracOperator(domain, unit_terms(domain, TermKind::LeftCaputo, a0, terms));
}

FracOperator kind_two(const UniformGrid1D &grid, const Coefficient &a0,
                      const std::vector<std::pair<Coefficient, FracOrder>> &terms) {
  TensorGrid domain({grid});
  return FracOperator(domain, unit_terms(domain, TermKind::RightCaputo, a0, terms));
}

FracOperator kind_three(const UniformGrid1D &grid, const Coefficient &a0,
                        FracOrder beta, const std::vector<Coefficient> &a) {
  TensorGrid domain({grid});
  return FracOperator(domain,
                      ladder_terms(domain, TermKind::LeftCaputo, a0, beta, a));
}

FracOperator kind_four(const UniformGrid1D &grid, const Coefficient &a0,
                       FracOrder beta, const std::vector<Coefficient> &a) {
  TensorGrid domain({grid});
  return FracOperator(domain,
                      ladder_terms(domain, TermKind::RightCaputo, a0, beta, a));
}

FracOperator partial_kind_one(const TensorGrid &domain, const Coefficient &c,
                              const std::vector<AxisTerm> &terms) {
  return FracOperator(domain, axis_terms(domain, TermKind::LeftCaputo, c, terms));
}

FracOperator partial_kind_two(const TensorGrid &domain, const Coefficient &c,
                              const std::vector<AxisTerm> &terms) {
  return FracOperator(domain, axis_terms(domain, TermKind::RightCaputo, c, terms));
}

// ---------------------------------------------------------------------------

GridField apply(const FracOperator &op, const GridField &p) {
  if (!(p.grid() == op.domain()))
    throw GridError("argument does not live on the operator domain");
  GridField out = GridField::zeros(op.domain());
  for (const auto &t : op.terms()) {
    if (t.kind == TermKind::Identity) {
      out = out + t.coeff * p;
      continue;
    }
    const OpKind kind =
        t.kind == TermKind::LeftCaputo ? OpKind::LeftCaputo : OpKind::RightCaputo;
    out = out + t.coeff * partial_frac(p, t.axis, kind, *t.order);
  }
  return out;
}

GridFn1D apply(const FracOperator &op, const GridFn1D &p) {
  return as_fn1d(apply(op, as_field(p)));
}

AdjointOperator adjoint(const FracOperator &op) {
  AdjointOperator adj{op.domain(), GridField::zeros(op.domain()), {}};
  for (const auto &t : op.terms()) {
    switch (t.kind) {
    case TermKind::Identity:
      adj.identity_coeff = adj.identity_coeff + t.coeff;
      break;
    case TermKind::LeftCaputo:
      adj.terms.push_back({t.coeff, OpKind::RightRLDerivative, *t.order, t.axis});
      break;
    case TermKind::RightCaputo:
      adj.terms.push_back({t.coeff, OpKind::LeftRLDerivative, *t.order, t.axis});
      break;
    }
  }
  return adj;
}

GridField apply_adjoint(const AdjointOperator &adj, const GridField &q) {
  if (!(q.grid() == adj.domain))
    throw GridError("argument does not live on the adjoint's domain");
  GridField out = adj.identity_coeff * q;
  for (const auto &t : adj.terms)
    out = out + partial_frac(t.coeff * q, t.axis, t.kind, t.order);
  return out;
}

GridFn1D apply_adjoint(const AdjointOperator &adj, const GridFn1D &q) {
  return as_fn1d(apply_adjoint(adj, as_field(q)));
}

double duality_residual(const FracOperator &op, const GridField &p,
                        const GridField &q) {
  const double lhs = trapezoid(q * apply(op, p));
  const double rhs = trapezoid(p * apply_adjoint(adjoint(op), q));
  return std::abs(lhs - rhs);
}

double duality_residual(const FracOperator &op, const GridFn1D &p,
                        const GridFn1D &q) {
  return duality_residual(op, as_field(p), as_field(q));
}

double ibp_integral_check(const GridFn1D &f, const GridFn1D &g, FracOrder alpha) {
  if (alpha.value() <= 0.0 || alpha.value() > 1.0)
    throw OrderError("ibp_integral_check needs 0 < alpha <= 1");
  const double lhs = trapezoid(g * left_rl_integral(f, alpha));
  const double rhs = trapezoid(f * right_rl_integral(g, alpha));
  return std::abs(lhs - rhs);
}

double caputo_ibp_check(const GridFn1D &f, const GridFn1D &g, FracOrder alpha) {
  const double lhs = trapezoid(g * left_caputo(f, alpha));
  const GridFn1D ig = right_rl_integral(g, FracOrder(1.0 - alpha.value()));
  const std::size_t n = f.grid().n();
  const double boundary = f[n] * ig[n] - f[0] * ig[0];
  const double rhs = trapezoid(f * right_rl_derivative(g, alpha));
  return std::abs(lhs - boundary - rhs);
}

} // namespace fracvar
