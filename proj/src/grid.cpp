#include "fracvar/grid.hpp"

#include "fracvar/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace fracvar {

namespace {

std::string index_string(std::span<const std::size_t> index) {
  std::string s = "(";
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i)
      s += ", ";
    s += std::to_string(index[i]);
  }
  return s + ")";
}

template <class Op>
std::vector<double> zip(std::span<const double> x, std::span<const double> y,
                        Op op) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), y.begin(), out.begin(), op);
  return out;
}

} // namespace

UniformGrid1D::UniformGrid1D(double a, double b, std::size_t n)
    : a_(a), b_(b), n_(n), h_((b - a) / static_cast<double>(n)) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw GridError("grid requires finite a < b");
  if (n < 2)
    throw GridError("grid requires at least 2 subintervals");
}

double UniformGrid1D::node(std::size_t j) const {
  if (j == n_)
    return b_;
  return a_ + static_cast<double>(j) * h_;
}

UniformGrid1D refine(const UniformGrid1D &grid, std::size_t factor) {
  if (factor < 2)
    throw GridError("refinement factor must be at least 2");
  return UniformGrid1D(grid.a(), grid.b(), grid.n() * factor);
}

GridFn1D::GridFn1D(UniformGrid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw GridError("expected " + std::to_string(grid_.size()) +
                    " values, got " + std::to_string(values_.size()));
  for (std::size_t j = 0; j < values_.size(); ++j)
    if (!std::isfinite(values_[j]))
      throw ValueError("non-finite value at node " + std::to_string(j));
}

GridFn1D::GridFn1D(UniformGrid1D grid, std::vector<double> values, Unchecked)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw GridError("expected " + std::to_string(grid_.size()) +
                    " values, got " + std::to_string(values_.size()));
}

GridFn1D GridFn1D::zeros(const UniformGrid1D &grid) {
  return GridFn1D(grid, std::vector<double>(grid.size(), 0.0));
}

GridFn1D GridFn1D::unchecked(UniformGrid1D grid, std::vector<double> values) {
  return GridFn1D(grid, std::move(values), Unchecked{});
}

bool GridFn1D::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

static void require_same(const UniformGrid1D &x, const UniformGrid1D &y) {
  if (!(x == y))
    throw GridError("grid functions live on different grids");
}

GridFn1D operator+(const GridFn1D &lhs, const GridFn1D &rhs) {
  require_same(lhs.grid(), rhs.grid());
  return GridFn1D::unchecked(lhs.grid(),
                             zip(lhs.values(), rhs.values(), std::plus<>{}));
}

GridFn1D operator-(const GridFn1D &lhs, const GridFn1D &rhs) {
  require_same(lhs.grid(), rhs.grid());
  return GridFn1D::unchecked(lhs.grid(),
                             zip(lhs.values(), rhs.values(), std::minus<>{}));
}

GridFn1D operator*(const GridFn1D &lhs, const GridFn1D &rhs) {
  require_same(lhs.grid(), rhs.grid());
  return GridFn1D::unchecked(
      lhs.grid(), zip(lhs.values(), rhs.values(), std::multiplies<>{}));
}

GridFn1D operator*(double c, const GridFn1D &f) {
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double &v : out)
    v *= c;
  return GridFn1D::unchecked(f.grid(), std::move(out));
}

GridFn1D sample_1d(const std::function<double(double)> &f,
                   const UniformGrid1D &grid) {
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    values[j] = f(grid.node(j));
    if (!std::isfinite(values[j]))
      throw ValueError("non-finite sample at node " + std::to_string(j));
  }
  return GridFn1D(grid, std::move(values));
}

GridFn1D restrict_to(const GridFn1D &fine, const UniformGrid1D &coarse) {
  const UniformGrid1D &g = fine.grid();
  if (g.a() != coarse.a() || g.b() != coarse.b() || g.n() % coarse.n() != 0)
    throw GridError("fine grid is not a refinement of the coarse grid");
  const std::size_t step = g.n() / coarse.n();
  std::vector<double> values(coarse.size());
  for (std::size_t j = 0; j < coarse.size(); ++j)
    values[j] = fine[j * step];
  return GridFn1D::unchecked(coarse, std::move(values));
}

double trapezoid(const GridFn1D &f) {
  const auto v = f.values();
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < v.size(); ++j)
    if (std::isfinite(v[j]) && std::isfinite(v[j + 1]))
      sum += 0.5 * (v[j] + v[j + 1]);
  return sum * f.grid().h();
}

// ---------------------------------------------------------------------------

TensorGrid::TensorGrid(std::vector<UniformGrid1D> axes) : axes_(std::move(axes)) {
  if (axes_.empty())
    throw GridError("tensor grid needs at least one axis");
  strides_.assign(axes_.size(), 1);
  size_ = 1;
  for (std::size_t i = axes_.size(); i-- > 0;) {
    strides_[i] = size_;
    size_ *= axes_[i].size();
  }
}

std::vector<std::size_t> TensorGrid::unravel(std::size_t flat) const {
  std::vector<std::size_t> index(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    index[i] = flat / strides_[i];
    flat %= strides_[i];
  }
  return index;
}

std::size_t TensorGrid::ravel(std::span<const std::size_t> index) const {
  if (index.size() != rank())
    throw GridError("multi-index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (index[i] >= axes_[i].size())
      throw GridError("multi-index out of range");
    flat += index[i] * strides_[i];
  }
  return flat;
}

void TensorGrid::coordinates(std::size_t flat, std::span<double> out) const {
  for (std::size_t i = 0; i < rank(); ++i) {
    out[i] = axes_[i].node(flat / strides_[i]);
    flat %= strides_[i];
  }
}

GridField::GridField(TensorGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw GridError("expected " + std::to_string(grid_.size()) +
                    " values, got " + std::to_string(values_.size()));
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!std::isfinite(values_[k]))
      throw ValueError("non-finite value at node " +
                       index_string(grid_.unravel(k)));
}

GridField::GridField(TensorGrid grid, std::vector<double> values, Unchecked)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw GridError("expected " + std::to_string(grid_.size()) +
                    " values, got " + std::to_string(values_.size()));
}

GridField GridField::zeros(const TensorGrid &grid) { return constant(grid, 0.0); }

GridField GridField::constant(const TensorGrid &grid, double value) {
  return GridField(grid, std::vector<double>(grid.size(), value));
}

GridField GridField::unchecked(TensorGrid grid, std::vector<double> values) {
  return GridField(std::move(grid), std::move(values), Unchecked{});
}

bool GridField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

static void require_same(const TensorGrid &x, const TensorGrid &y) {
  if (!(x == y))
    throw GridError("fields live on different grids");
}

GridField operator+(const GridField &lhs, const GridField &rhs) {
  require_same(lhs.grid(), rhs.grid());
  return GridField::unchecked(lhs.grid(),
                              zip(lhs.values(), rhs.values(), std::plus<>{}));
}

GridField operator-(const GridField &lhs, const GridField &rhs) {
  require_same(lhs.grid(), rhs.grid());
  return GridField::unchecked(lhs.grid(),
                              zip(lhs.values(), rhs.values(), std::minus<>{}));
}

GridField operator*(const GridField &lhs, const GridField &rhs) {
  require_same(lhs.grid(), rhs.grid());
  return GridField::unchecked(
      lhs.grid(), zip(lhs.values(), rhs.values(), std::multiplies<>{}));
}

GridField operator*(double c, const GridField &f) {
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double &v : out)
    v *= c;
  return GridField::unchecked(f.grid(), std::move(out));
}

GridField sample_field(const std::function<double(std::span<const double>)> &f,
                       const TensorGrid &grid) {
  std::vector<double> values(grid.size());
  std::vector<double> x(grid.rank());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.coordinates(k, x);
    values[k] = f(x);
    if (!std::isfinite(values[k]))
      throw ValueError("non-finite sample at node " +
                       index_string(grid.unravel(k)));
  }
  return GridField(grid, std::move(values));
}

double trapezoid(const GridField &f) {
  const TensorGrid &grid = f.grid();
  const std::size_t rank = grid.rank();
  const auto v = f.values();

  // Sum over cells: each cell averages its 2^rank corner values.
  std::vector<std::size_t> cell(rank, 0);
  const std::size_t corners = std::size_t{1} << rank;
  double cell_volume = 1.0;
  for (const auto &axis : grid.axes())
    cell_volume *= axis.h();

  double total = 0.0;
  bool done = false;
  while (!done) {
    double sum = 0.0;
    bool finite = true;
    for (std::size_t c = 0; c < corners && finite; ++c) {
      std::size_t flat = 0;
      for (std::size_t i = 0; i < rank; ++i)
        flat += (cell[i] + ((c >> i) & 1u)) * grid.stride(i);
      finite = std::isfinite(v[flat]);
      sum += v[flat];
    }
    if (finite)
      total += sum / static_cast<double>(corners);

    for (std::size_t i = rank; i-- > 0;) {
      if (++cell[i] < grid.axis(i).n())
        break;
      cell[i] = 0;
      if (i == 0)
        done = true;
    }
  }
  return total * cell_volume;
}

GridField as_field(const GridFn1D &f) {
  return GridField::unchecked(TensorGrid({f.grid()}),
                              {f.values().begin(), f.values().end()});
}

GridFn1D as_fn1d(const GridField &f) {
  if (f.grid().rank() != 1)
    throw GridError("field is not one-dimensional");
  return GridFn1D::unchecked(f.grid().axis(0),
                             {f.values().begin(), f.values().end()});
}

} // namespace fracvar
