#pragma once

#include "amdg/element_table.hpp"

#include <unordered_map>
#include <vector>

namespace amdg
{

// Position of (l, j) in the 1D hierarchy: 0 for the root, 2^{l-1} + j otherwise.
inline int index_1d(int l, int j) { return l == 0 ? 0 : (1 << (l - 1)) + j; }
inline int level_of_index(int idx)
{
  int l = 0;
  while (idx > 0)
  {
    idx >>= 1;
    ++l;
  }
  return l;
}

/// Flat, sorted view of an active set. Vectors over the set hold one block of
/// (k+1)^d coefficients per element, in canonical key order.
class ElementLayout
{
public:
  struct Fiber
  {
    // members share every coordinate except the fiber direction
    std::vector<int> index;     // 1D index along the direction, ascending
    std::vector<int> position;  // element position in the layout
  };

  explicit ElementLayout(ElementTable const &table);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int max_level() const { return max_level_; }
  int block_size() const { return block_size_; }
  std::size_t size() const { return keys_.size(); }
  std::size_t vector_size() const { return keys_.size() * block_size_; }

  std::vector<ElementKey> const &keys() const { return keys_; }
  int position(ElementKey const &key) const;  // -1 when absent

  std::vector<Fiber> const &fibers(int m) const { return fibers_[m]; }

  std::vector<double> gather(ElementTable const &table) const;
  void scatter(std::vector<double> const &u, ElementTable &table) const;

private:
  int dim_, degree_, max_level_, block_size_;
  std::vector<ElementKey> keys_;
  std::unordered_map<ElementKey, int, ElementKeyHash> position_;
  std::vector<std::vector<Fiber>> fibers_;
};

} // namespace amdg
