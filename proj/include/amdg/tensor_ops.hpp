#pragma once

#include <vector>

namespace amdg
{

// Row-major tensors with dimension 0 slowest.
//
// Contracts mode m of `in` (extents `shape`) with the rows x shape[m] matrix
// `mat` (row-major). On return shape[m] == rows.
void contract_mode(std::vector<double> const &in, std::vector<int> &shape, int m, double const *mat, int rows,
                   std::vector<double> &out);

inline int tensor_size(std::vector<int> const &shape)
{
  int n = 1;
  for (int s : shape)
    n *= s;
  return n;
}

} // namespace amdg
