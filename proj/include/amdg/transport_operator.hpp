#pragma once

#include "amdg/basis.hpp"
#include "amdg/domain.hpp"
#include "amdg/element_table.hpp"
#include "amdg/layout.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace amdg
{

using Function1D = std::function<double(double)>;

/// One separable term c(t) * prod_n f_n(x_n) of a velocity component.
/// Empty functions stand for the constant 1.
struct FieldTerm
{
  Function1D time_factor;
  std::vector<Function1D> factors;  // physical coordinate per dimension
};

/// a(t, x) as a sum of separable terms per component.
struct VelocityField
{
  int dim = 0;
  std::vector<std::vector<FieldTerm>> components;
  // max |a_m| over the box at time t, per direction
  std::function<std::vector<double>(double)> speed_bounds;
  bool time_dependent = false;

  double value(int m, double t, std::span<const double> x) const;

  static VelocityField constant(std::vector<double> const &a);
};

enum class FluxKind
{
  upwind,
  lax_friedrichs
};

FluxKind parse_flux(std::string const &name);
std::string to_string(FluxKind f);

// n = +e_m, u_minus on the lower side
inline double upwind_flux(double a_n, double u_minus, double u_plus)
{
  return 0.5 * a_n * (u_minus + u_plus) + 0.5 * (a_n < 0 ? -a_n : a_n) * (u_minus - u_plus);
}

inline double lax_friedrichs_flux(double au_minus, double au_plus, double alpha, double u_minus, double u_plus)
{
  return 0.5 * (au_minus + au_plus) + 0.5 * alpha * (u_minus - u_plus);
}

/// Value of the adaptive solution at a physical point with one-sided limits.
double eval_solution(ElementTable const &table, Basis1D const &basis, Box const &box, std::span<const double> x,
                     std::span<const Side> side);

/// Sparse matrix over the 1D hierarchy (2^N elements, blocks of (k+1)^2,
/// block entry (test function, trial function)).
class BlockMatrix1D
{
public:
  BlockMatrix1D() = default;
  BlockMatrix1D(int elements, int block);

  int elements() const { return static_cast<int>(row_ptr_.size()) - 1; }
  int block() const { return block_; }

  std::span<const int> row_cols(int row) const
  {
    return {cols_.data() + row_ptr_[row], static_cast<std::size_t>(row_ptr_[row + 1] - row_ptr_[row])};
  }
  double const *row_block(int row, int entry) const
  {
    return blocks_.data() + static_cast<std::size_t>(row_ptr_[row] + entry) * block_ * block_;
  }
  // nullptr when the block is structurally zero
  double const *find(int row, int col) const;

  // keeps blocks whose trial level is <= (lower) or > (upper) the test level
  BlockMatrix1D lower() const;
  BlockMatrix1D upper() const;

  class Builder
  {
  public:
    Builder(int elements, int block);
    double *block(int row, int col);
    BlockMatrix1D finish() const;

  private:
    int elements_, block_;
    std::vector<std::vector<std::pair<int, std::vector<double>>>> rows_;
  };

private:
  BlockMatrix1D filtered(bool lower) const;

  int block_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> blocks_;
};

// 1D reference-interval matrices on the level-N hierarchy; f and g are given
// in the reference coordinate.
//   mass:    int f u v
//   central: int f u v' - sum_faces f {u} [v]
//   jump:    sum_faces g [u] [v]
// [v] = v^- - v^+ with the lower-side trace first.
BlockMatrix1D mass_matrix_1d(Basis1D const &basis, int max_level, Function1D const &f);
BlockMatrix1D central_matrix_1d(Basis1D const &basis, int max_level, Function1D const &f, Boundary boundary);
BlockMatrix1D jump_matrix_1d(Basis1D const &basis, int max_level, Function1D const &g, Boundary boundary);

// y += scale * (M along direction m) x on a hole-free layout
void apply_along(ElementLayout const &layout, int m, BlockMatrix1D const &mat, double scale,
                 std::vector<double> const &x, std::vector<double> &y);

/// Semi-discrete DG right-hand side for u_t + div(a u) = 0.
class DgOperator
{
public:
  DgOperator(Basis1D const &basis, Box box, std::vector<Boundary> boundaries, int max_level, VelocityField field,
             FluxKind flux);
  ~DgOperator();
  DgOperator(DgOperator &&) noexcept;
  DgOperator &operator=(DgOperator &&) noexcept;

  // out = A(u, .) for every active test function
  void apply(ElementLayout const &layout, std::vector<double> const &u, double t, std::vector<double> &out) const;

  VelocityField const &field() const { return field_; }
  Box const &box() const { return box_; }
  FluxKind flux() const { return flux_; }

  struct Matrices;  // assembled 1D factors, defined in the source file

private:

  Box box_;
  std::vector<Boundary> boundaries_;
  int max_level_;
  VelocityField field_;
  FluxKind flux_;
  std::unique_ptr<Matrices> mats_;
};

} // namespace amdg
