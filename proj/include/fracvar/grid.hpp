#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracvar {

/// Uniform node-inclusive grid on [a, b] with n subintervals.
///
/// Nodes are a + j*h for j = 0..n; node(n) returns b exactly so that
/// boundary terms are evaluated at the true endpoint.
class UniformGrid1D {
public:
  UniformGrid1D(double a, double b, std::size_t n);

  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t n() const { return n_; }
  double h() const { return h_; }
  std::size_t size() const { return n_ + 1; }

  double node(std::size_t j) const;

  bool operator==(const UniformGrid1D &) const = default;

private:
  double a_;
  double b_;
  std::size_t n_;
  double h_;
};

/// Grid with n*factor subintervals on the same interval.
UniformGrid1D refine(const UniformGrid1D &grid, std::size_t factor);

/// Values sampled at every node of a UniformGrid1D.
///
/// The checked constructor rejects non-finite values. Operators that
/// produce a singular endpoint (a Riemann-Liouville derivative of data
/// that does not vanish at its lower terminal) build their result with
/// `unchecked`, which leaves a quiet NaN at that node as a marker.
class GridFn1D {
public:
  GridFn1D(UniformGrid1D grid, std::vector<double> values);

  static GridFn1D zeros(const UniformGrid1D &grid);
  static GridFn1D unchecked(UniformGrid1D grid, std::vector<double> values);

  const UniformGrid1D &grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }

  bool all_finite() const;

private:
  struct Unchecked {};
  GridFn1D(UniformGrid1D grid, std::vector<double> values, Unchecked);

  UniformGrid1D grid_;
  std::vector<double> values_;
};

GridFn1D operator+(const GridFn1D &lhs, const GridFn1D &rhs);
GridFn1D operator-(const GridFn1D &lhs, const GridFn1D &rhs);
GridFn1D operator*(double c, const GridFn1D &f);
// Pointwise product.
GridFn1D operator*(const GridFn1D &lhs, const GridFn1D &rhs);

GridFn1D sample_1d(const std::function<double(double)> &f,
                   const UniformGrid1D &grid);

/// Node values of `fine` at the nodes of `coarse`. Throws GridError unless
/// `fine` is an exact refinement of `coarse`.
GridFn1D restrict_to(const GridFn1D &fine, const UniformGrid1D &coarse);

/// Composite trapezoidal rule. Cells with a non-finite endpoint value are
/// skipped, which drops the one-cell neighbourhood of a flagged singular
/// node.
double trapezoid(const GridFn1D &f);

/// Tensor-product grid. Axis 0 is time, axes 1..m are spatial.
class TensorGrid {
public:
  explicit TensorGrid(std::vector<UniformGrid1D> axes);

  std::size_t rank() const { return axes_.size(); }
  const UniformGrid1D &axis(std::size_t i) const { return axes_.at(i); }
  const std::vector<UniformGrid1D> &axes() const { return axes_; }

  // Total node count.
  std::size_t size() const { return size_; }
  // Row-major stride of axis i (last axis fastest).
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  std::vector<std::size_t> unravel(std::size_t flat) const;
  std::size_t ravel(std::span<const std::size_t> index) const;
  // Coordinates of the node with the given flat index.
  void coordinates(std::size_t flat, std::span<double> out) const;

  bool operator==(const TensorGrid &other) const { return axes_ == other.axes_; }

private:
  std::vector<UniformGrid1D> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Values on a TensorGrid in row-major node order.
class GridField {
public:
  GridField(TensorGrid grid, std::vector<double> values);

  static GridField zeros(const TensorGrid &grid);
  static GridField constant(const TensorGrid &grid, double value);
  static GridField unchecked(TensorGrid grid, std::vector<double> values);

  const TensorGrid &grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t flat) const { return values_[flat]; }

  bool all_finite() const;

private:
  struct Unchecked {};
  GridField(TensorGrid grid, std::vector<double> values, Unchecked);

  TensorGrid grid_;
  std::vector<double> values_;
};

GridField operator+(const GridField &lhs, const GridField &rhs);
GridField operator-(const GridField &lhs, const GridField &rhs);
GridField operator*(double c, const GridField &f);
GridField operator*(const GridField &lhs, const GridField &rhs);

GridField sample_field(const std::function<double(std::span<const double>)> &f,
                       const TensorGrid &grid);

/// Tensor-product trapezoidal rule; cells touching a non-finite node are
/// skipped.
double trapezoid(const GridField &f);

// One-axis views between the two carriers.
GridField as_field(const GridFn1D &f);
GridFn1D as_fn1d(const GridField &f);

} // namespace fracvar
