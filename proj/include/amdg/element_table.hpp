#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace amdg
{

constexpr int max_dim = 6;

/// Hierarchical index (l, j) of one element.
struct ElementKey
{
  std::uint8_t dim = 0;
  std::array<std::uint16_t, max_dim> level{};
  std::array<std::uint16_t, max_dim> cell{};

  ElementKey() = default;
  ElementKey(std::vector<int> const &levels, std::vector<int> const &cells);
  static ElementKey root(int dim);

  int level_sum() const;
  int level_max() const;
  bool is_root() const { return level_sum() == 0; }

  // d, l_1..l_d, j_1..j_d as unsigned 16-bit little endian (d as one byte)
  std::string encoding() const;

  friend bool operator==(ElementKey const &a, ElementKey const &b)
  {
    return a.dim == b.dim && a.level == b.level && a.cell == b.cell;
  }
};

// strict weak order of the canonical encodings (bytewise)
struct CanonicalLess
{
  bool operator()(ElementKey const &a, ElementKey const &b) const;
};

struct ElementKeyHash
{
  std::size_t operator()(ElementKey const &k) const;
};

std::ostream &operator<<(std::ostream &os, ElementKey const &k);

std::vector<ElementKey> children(ElementKey const &key, int max_level);
std::vector<ElementKey> parents(ElementKey const &key);

struct Element
{
  ElementKey key;
  std::vector<double> coeffs;  // (k+1)^d, dimension 0 slowest
  int child_count = 0;

  bool is_leaf() const { return child_count == 0; }
};

// Raised when an operation would break the hole-free structure of a table.
class StructuralFault : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Active set H with its leaf set L.
class ElementTable
{
public:
  ElementTable(int dim, int degree, int max_level);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int max_level() const { return max_level_; }
  int block_size() const { return block_size_; }

  std::size_t size() const { return elements_.size(); }
  std::size_t dof() const { return elements_.size() * block_size_; }

  bool contains(ElementKey const &key) const { return elements_.count(key) != 0; }
  Element *find(ElementKey const &key);
  Element const *find(ElementKey const &key) const;
  Element &at(ElementKey const &key);
  Element const &at(ElementKey const &key) const;

  // Adds key with zero coefficients. All parents must be present.
  Element &insert(ElementKey const &key);
  // Adds key after adding any missing ancestors (zero coefficients).
  // Returns the keys that were new, ancestors first.
  std::vector<ElementKey> insert_with_ancestors(ElementKey const &key);
  void remove_leaf(ElementKey const &key);

  std::set<ElementKey, CanonicalLess> const &leaves() const { return leaves_; }
  std::vector<ElementKey> sorted_keys() const;

  // Brute-force check of all structural invariants; throws StructuralFault.
  void audit() const;

  // Sum of squared coefficients over the table.
  double squared_norm() const;

  // max level present in each dimension
  std::vector<int> max_levels() const;

  void write_csv(std::ostream &os) const;

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }
  auto begin() { return elements_.begin(); }
  auto end() { return elements_.end(); }

private:
  void check_key(ElementKey const &key) const;

  int dim_;
  int degree_;
  int max_level_;
  int block_size_;
  std::unordered_map<ElementKey, Element, ElementKeyHash> elements_;
  std::set<ElementKey, CanonicalLess> leaves_;
};

// Every key with |l|_inf <= N (full == true) or |l|_1 <= N.
std::vector<ElementKey> enumerate_keys(int dim, int max_level, bool full);

} // namespace amdg
