#include "amdg/tensor_ops.hpp"

#include <algorithm>

namespace amdg
{

void contract_mode(std::vector<double> const &in, std::vector<int> &shape, int m, double const *mat, int rows,
                   std::vector<double> &out)
{
  int outer = 1, inner = 1;
  for (int a = 0; a < m; ++a)
    outer *= shape[a];
  for (int a = m + 1; a < static_cast<int>(shape.size()); ++a)
    inner *= shape[a];
  int const cols = shape[m];
  out.assign(static_cast<std::size_t>(outer) * rows * inner, 0.0);
  for (int o = 0; o < outer; ++o)
    for (int r = 0; r < rows; ++r)
    {
      double *dst = out.data() + (static_cast<std::size_t>(o) * rows + r) * inner;
      for (int c = 0; c < cols; ++c)
      {
        double const w = mat[r * cols + c];
        if (w == 0.0)
          continue;
        double const *src = in.data() + (static_cast<std::size_t>(o) * cols + c) * inner;
        for (int i = 0; i < inner; ++i)
          dst[i] += w * src[i];
      }
    }
  shape[m] = rows;
}

} // namespace amdg
