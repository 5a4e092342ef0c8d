#pragma once

#include <span>
#include <vector>

namespace amdg
{

// One-sided limit used when a point sits on a jump of a piecewise polynomial.
enum class Side
{
  left,  // limit from below, x -> x0^-
  right  // limit from above, x -> x0^+
};

/// Alpert multiwavelet basis on the unit interval.
///
/// The scaling functions are the orthonormal Legendre polynomials on [0,1].
/// The k+1 mother wavelets are piecewise polynomials on [0,1/2] and [1/2,1],
/// orthonormal and orthogonal to every polynomial of degree <= k. Each piece is
/// stored as coefficients in the orthonormal Legendre basis of its half
/// interval, so evaluation is exact polynomial evaluation.
///
/// Wavelet i (0-based) additionally annihilates Legendre polynomials of degree
/// k+1 .. k+i, which pins it down up to sign; the sign is chosen so that the
/// limit at x -> 1^- is positive.
///
/// All function indices are 0-based: i = 0..k.
class Basis1D
{
public:
  static constexpr int max_degree = 6;

  explicit Basis1D(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }

  // reference functions on [0,1]; no support test
  double scaling(int i, double x) const;
  double wavelet(int i, double x, Side side) const;
  double scaling_derivative(int i, double x) const;
  double wavelet_derivative(int i, double x, Side side) const;

  // Legendre coefficients of wavelet i on the half interval (0 = left, 1 = right)
  std::span<const double> wavelet_piece(int i, int half) const;

  // norms on the reference interval of the scaling (wavelet == false) or mother
  // wavelet functions
  double reference_l1(int i, bool wavelet) const;
  double reference_linf(int i, bool wavelet) const;

  // Values of all k+1 functions v_{i,l}^j at x; out.size() == size().
  void eval_all(int level, int cell, double x, Side side, std::span<double> out) const;
  // same for the derivatives d/dx v_{i,l}^j
  void eval_all_derivative(int level, int cell, double x, Side side, std::span<double> out) const;

private:
  int degree_;
  std::vector<double> left_;   // (k+1) x (k+1), row = wavelet index
  std::vector<double> right_;
  std::vector<double> l1_scaling_, l1_wavelet_, linf_scaling_, linf_wavelet_;
};

Basis1D build_basis(int k);

// v^j_{i,l}(x), one-sided; zero outside the support I^j_{l-1}.
// Throws std::out_of_range when i, l or j are outside their index sets.
double eval_1d(Basis1D const &basis, int i, int l, int j, double x, Side side);

// Tensor-product basis function: product of eval_1d over the dimensions.
double eval_nd(Basis1D const &basis, std::span<const int> i, std::span<const int> l,
               std::span<const int> j, std::span<const double> x, std::span<const Side> side);

struct BasisNorms
{
  double l1   = 0;
  double l2   = 1;
  double linf = 0;
};

// Norms of v^j_{i,l} on the unit cube (independent of j).
BasisNorms basis_norms(Basis1D const &basis, std::span<const int> i, std::span<const int> l);

// number of translations at level l: |B_l| = max(2^{l-1}, 1)
inline int cells_at_level(int l) { return l == 0 ? 1 : 1 << (l - 1); }

// support I^j_{l-1} of v^j_{i,l} in [0,1]
inline double support_lower(int l, int j) { return l == 0 ? 0.0 : double(j) / cells_at_level(l); }
inline double support_upper(int l, int j) { return l == 0 ? 1.0 : double(j + 1) / cells_at_level(l); }

} // namespace amdg
