#include "amdg/element_table.hpp"
#include "amdg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <ostream>
#include <string_view>

namespace amdg
{

ElementKey::ElementKey(std::vector<int> const &levels, std::vector<int> const &cells)
{
  if (levels.size() != cells.size() || levels.empty() || levels.size() > max_dim)
    throw std::invalid_argument("ElementKey: level and cell vectors must have equal length in [1,"
                                + std::to_string(max_dim) + "]");
  dim = static_cast<std::uint8_t>(levels.size());
  for (std::size_t m = 0; m < levels.size(); ++m)
  {
    if (levels[m] < 0 || levels[m] > 30 || cells[m] < 0 || cells[m] >= cells_at_level(levels[m]))
      throw std::out_of_range("ElementKey: translation " + std::to_string(cells[m]) + " not in B_"
                              + std::to_string(levels[m]));
    level[m] = static_cast<std::uint16_t>(levels[m]);
    cell[m]  = static_cast<std::uint16_t>(cells[m]);
  }
}

ElementKey ElementKey::root(int d)
{
  return ElementKey(std::vector<int>(d, 0), std::vector<int>(d, 0));
}

int ElementKey::level_sum() const
{
  int s = 0;
  for (int m = 0; m < dim; ++m)
    s += level[m];
  return s;
}

int ElementKey::level_max() const
{
  int s = 0;
  for (int m = 0; m < dim; ++m)
    s = std::max(s, int(level[m]));
  return s;
}

std::string ElementKey::encoding() const
{
  std::string bytes;
  bytes.reserve(1 + 4 * dim);
  bytes.push_back(static_cast<char>(dim));
  auto put = [&bytes](std::uint16_t v) {
    bytes.push_back(static_cast<char>(v & 0xff));
    bytes.push_back(static_cast<char>(v >> 8));
  };
  for (int m = 0; m < dim; ++m)
    put(level[m]);
  for (int m = 0; m < dim; ++m)
    put(cell[m]);
  return bytes;
}

bool CanonicalLess::operator()(ElementKey const &a, ElementKey const &b) const
{
  // same result as comparing encoding() strings as unsigned bytes
  if (a.dim != b.dim)
    return a.dim < b.dim;
  auto cmp16 = [](std::uint16_t x, std::uint16_t y) {
    if ((x & 0xff) != (y & 0xff))
      return (x & 0xff) < (y & 0xff) ? -1 : 1;
    if ((x >> 8) != (y >> 8))
      return (x >> 8) < (y >> 8) ? -1 : 1;
    return 0;
  };
  for (int m = 0; m < a.dim; ++m)
    if (int c = cmp16(a.level[m], b.level[m]))
      return c < 0;
  for (int m = 0; m < a.dim; ++m)
    if (int c = cmp16(a.cell[m], b.cell[m]))
      return c < 0;
  return false;
}

std::size_t ElementKeyHash::operator()(ElementKey const &k) const
{
  return std::hash<std::string_view>{}(k.encoding());
}

std::ostream &operator<<(std::ostream &os, ElementKey const &k)
{
  os << "(l=";
  for (int m = 0; m < k.dim; ++m)
    os << (m ? "," : "") << k.level[m];
  os << "; j=";
  for (int m = 0; m < k.dim; ++m)
    os << (m ? "," : "") << k.cell[m];
  return os << ")";
}

std::vector<ElementKey> children(ElementKey const &key, int max_level)
{
  std::vector<ElementKey> out;
  for (int m = 0; m < key.dim; ++m)
  {
    if (key.level[m] + 1 > max_level)
      continue;
    ElementKey c = key;
    c.level[m]   = key.level[m] + 1;
    if (key.level[m] == 0)
    {
      c.cell[m] = 0;
      out.push_back(c);
    }
    else
    {
      c.cell[m] = static_cast<std::uint16_t>(2 * key.cell[m]);
      out.push_back(c);
      c.cell[m] = static_cast<std::uint16_t>(2 * key.cell[m] + 1);
      out.push_back(c);
    }
  }
  return out;
}

std::vector<ElementKey> parents(ElementKey const &key)
{
  std::vector<ElementKey> out;
  for (int m = 0; m < key.dim; ++m)
  {
    if (key.level[m] == 0)
      continue;
    ElementKey p = key;
    p.level[m]   = key.level[m] - 1;
    p.cell[m]    = p.level[m] == 0 ? 0 : key.cell[m] / 2;
    out.push_back(p);
  }
  return out;
}

ElementTable::ElementTable(int dim, int degree, int max_level)
    : dim_(dim), degree_(degree), max_level_(max_level)
{
  if (dim < 1 || dim > max_dim)
    throw std::invalid_argument("ElementTable: dimension must be in [1," + std::to_string(max_dim) + "]");
  if (degree < 0 || degree > Basis1D::max_degree)
    throw std::invalid_argument("ElementTable: unsupported degree " + std::to_string(degree));
  if (max_level < 0 || max_level > 15)
    throw std::invalid_argument("ElementTable: max level must be in [0,15]");
  block_size_ = 1;
  for (int m = 0; m < dim; ++m)
    block_size_ *= degree + 1;
}

void ElementTable::check_key(ElementKey const &key) const
{
  if (key.dim != dim_)
    throw std::invalid_argument("key dimension does not match table");
  if (key.level_max() > max_level_)
    throw StructuralFault("key exceeds the maximum level");
}

Element *ElementTable::find(ElementKey const &key)
{
  auto it = elements_.find(key);
  return it == elements_.end() ? nullptr : &it->second;
}

Element const *ElementTable::find(ElementKey const &key) const
{
  auto it = elements_.find(key);
  return it == elements_.end() ? nullptr : &it->second;
}

Element &ElementTable::at(ElementKey const &key)
{
  auto *e = find(key);
  if (!e)
    throw std::out_of_range("element not in table");
  return *e;
}

Element const &ElementTable::at(ElementKey const &key) const
{
  auto const *e = find(key);
  if (!e)
    throw std::out_of_range("element not in table");
  return *e;
}

Element &ElementTable::insert(ElementKey const &key)
{
  check_key(key);
  if (contains(key))
    throw StructuralFault("element already present");
  auto const ps = parents(key);
  for (auto const &p : ps)
    if (!contains(p))
      throw StructuralFault("insert would create a hole: missing parent");
  for (auto const &p : ps)
  {
    auto &pe = elements_.at(p);
    if (pe.child_count++ == 0)
      leaves_.erase(p);
  }
  auto &e = elements_[key];
  e.key   = key;
  e.coeffs.assign(block_size_, 0.0);
  e.child_count = 0;
  leaves_.insert(key);
  return e;
}

std::vector<ElementKey> ElementTable::insert_with_ancestors(ElementKey const &key)
{
  std::vector<ElementKey> added;
  if (contains(key))
    return added;
  for (auto const &p : parents(key))
  {
    auto sub = insert_with_ancestors(p);
    added.insert(added.end(), sub.begin(), sub.end());
  }
  insert(key);
  added.push_back(key);
  return added;
}

void ElementTable::remove_leaf(ElementKey const &key)
{
  auto it = elements_.find(key);
  if (it == elements_.end())
    throw StructuralFault("remove_leaf: element not present");
  if (!it->second.is_leaf())
    throw StructuralFault("remove_leaf: element has children");
  if (key.is_root())
    throw StructuralFault("remove_leaf: level-0 elements are permanent");
  elements_.erase(it);
  leaves_.erase(key);
  for (auto const &p : parents(key))
  {
    auto &pe = elements_.at(p);
    if (--pe.child_count == 0)
      leaves_.insert(p);
  }
}

std::vector<ElementKey> ElementTable::sorted_keys() const
{
  std::vector<ElementKey> keys;
  keys.reserve(elements_.size());
  for (auto const &[k, e] : elements_)
    keys.push_back(k);
  std::sort(keys.begin(), keys.end(), CanonicalLess{});
  return keys;
}

void ElementTable::audit() const
{
  for (auto const &[k, e] : elements_)
  {
    if (!(e.key == k))
      throw StructuralFault("audit: stored key mismatch");
    if (k.level_max() > max_level_)
      throw StructuralFault("audit: level above maximum");
    if (static_cast<int>(e.coeffs.size()) != block_size_)
      throw StructuralFault("audit: coefficient block has wrong size");
    for (auto const &p : parents(k))
      if (!contains(p))
        throw StructuralFault("audit: hole in table");
    int count = 0;
    for (auto const &c : children(k, max_level_))
      count += contains(c);
    if (count != e.child_count)
      throw StructuralFault("audit: child count mismatch");
    if (e.is_leaf() != (leaves_.count(k) != 0))
      throw StructuralFault("audit: leaf table out of sync");
  }
  for (auto const &k : leaves_)
    if (!contains(k))
      throw StructuralFault("audit: leaf not in table");
}

double ElementTable::squared_norm() const
{
  double s = 0;
  for (auto const &k : sorted_keys())
    for (double c : elements_.at(k).coeffs)
      s += c * c;
  return s;
}

std::vector<int> ElementTable::max_levels() const
{
  std::vector<int> out(dim_, 0);
  for (auto const &[k, e] : elements_)
    for (int m = 0; m < dim_; ++m)
      out[m] = std::max(out[m], int(k.level[m]));
  return out;
}

void ElementTable::write_csv(std::ostream &os) const
{
  for (int m = 0; m < dim_; ++m)
    os << "l" << m + 1 << ",";
  for (int m = 0; m < dim_; ++m)
    os << "j" << m + 1 << ",";
  os << "block_l2\n";
  auto const old = os.precision(17);
  for (auto const &k : sorted_keys())
  {
    for (int m = 0; m < dim_; ++m)
      os << k.level[m] << ",";
    for (int m = 0; m < dim_; ++m)
      os << k.cell[m] << ",";
    double s = 0;
    for (double c : elements_.at(k).coeffs)
      s += c * c;
    os << std::sqrt(s) << "\n";
  }
  os.precision(old);
}

std::vector<ElementKey> enumerate_keys(int dim, int max_level, bool full)
{
  std::vector<ElementKey> out;
  std::vector<int> l(dim, 0);
  while (true)
  {
    int sum = 0;
    for (int v : l)
      sum += v;
    if (full || sum <= max_level)
    {
      std::vector<int> j(dim, 0);
      while (true)
      {
        out.emplace_back(l, j);
        int m = dim - 1;
        for (; m >= 0; --m)
        {
          if (++j[m] < cells_at_level(l[m]))
            break;
          j[m] = 0;
        }
        if (m < 0)
          break;
      }
    }
    int m = dim - 1;
    for (; m >= 0; --m)
    {
      if (++l[m] <= max_level)
        break;
      l[m] = 0;
    }
    if (m < 0)
      break;
  }
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

} // namespace amdg
