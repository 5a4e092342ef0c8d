#include "amdg/layout.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace amdg
{

ElementLayout::ElementLayout(ElementTable const &table)
    : dim_(table.dim()), degree_(table.degree()), max_level_(table.max_level()),
      block_size_(table.block_size()), keys_(table.sorted_keys())
{
  position_.reserve(keys_.size());
  for (std::size_t p = 0; p < keys_.size(); ++p)
    position_.emplace(keys_[p], static_cast<int>(p));

  fibers_.resize(dim_);
  for (int m = 0; m < dim_; ++m)
  {
    // group by the key with direction m blanked out
    std::map<ElementKey, int, CanonicalLess> group;
    for (std::size_t p = 0; p < keys_.size(); ++p)
    {
      ElementKey g = keys_[p];
      g.level[m]   = 0;
      g.cell[m]    = 0;
      auto [it, fresh] = group.emplace(g, static_cast<int>(fibers_[m].size()));
      if (fresh)
        fibers_[m].emplace_back();
      auto &f = fibers_[m][it->second];
      f.index.push_back(index_1d(keys_[p].level[m], keys_[p].cell[m]));
      f.position.push_back(static_cast<int>(p));
    }
    for (auto &f : fibers_[m])
    {
      std::vector<int> order(f.index.size());
      for (std::size_t a = 0; a < order.size(); ++a)
        order[a] = static_cast<int>(a);
      std::sort(order.begin(), order.end(), [&f](int a, int b) { return f.index[a] < f.index[b]; });
      Fiber sorted;
      for (int a : order)
      {
        sorted.index.push_back(f.index[a]);
        sorted.position.push_back(f.position[a]);
      }
      f = std::move(sorted);
    }
  }
}

int ElementLayout::position(ElementKey const &key) const
{
  auto it = position_.find(key);
  return it == position_.end() ? -1 : it->second;
}

std::vector<double> ElementLayout::gather(ElementTable const &table) const
{
  std::vector<double> u(vector_size());
  for (std::size_t p = 0; p < keys_.size(); ++p)
  {
    auto const &c = table.at(keys_[p]).coeffs;
    std::copy(c.begin(), c.end(), u.begin() + p * block_size_);
  }
  return u;
}

void ElementLayout::scatter(std::vector<double> const &u, ElementTable &table) const
{
  if (u.size() != vector_size())
    throw std::invalid_argument("scatter: vector size does not match layout");
  for (std::size_t p = 0; p < keys_.size(); ++p)
  {
    auto &c = table.at(keys_[p]).coeffs;
    std::copy(u.begin() + p * block_size_, u.begin() + (p + 1) * block_size_, c.begin());
  }
}

} // namespace amdg
