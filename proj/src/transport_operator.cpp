#include "amdg/transport_operator.hpp"
#include "amdg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace amdg
{

double VelocityField::value(int m, double t, std::span<const double> x) const
{
  double a = 0;
  for (auto const &term : components.at(m))
  {
    double v = term.time_factor ? term.time_factor(t) : 1.0;
    for (std::size_t n = 0; n < term.factors.size(); ++n)
      if (term.factors[n])
        v *= term.factors[n](x[n]);
    a += v;
  }
  return a;
}

VelocityField VelocityField::constant(std::vector<double> const &a)
{
  VelocityField f;
  f.dim = static_cast<int>(a.size());
  f.components.resize(a.size());
  for (std::size_t m = 0; m < a.size(); ++m)
  {
    FieldTerm term;
    term.factors.resize(a.size());
    double const am  = a[m];
    term.time_factor = [am](double) { return am; };
    f.components[m].push_back(term);
  }
  std::vector<double> bounds(a.size());
  for (std::size_t m = 0; m < a.size(); ++m)
    bounds[m] = std::abs(a[m]);
  f.speed_bounds = [bounds](double) { return bounds; };
  return f;
}

FluxKind parse_flux(std::string const &name)
{
  if (name == "upwind")
    return FluxKind::upwind;
  if (name == "lax_friedrichs" || name == "lf")
    return FluxKind::lax_friedrichs;
  throw std::invalid_argument("unknown flux '" + name + "' (expected upwind or lax_friedrichs)");
}

std::string to_string(FluxKind f) { return f == FluxKind::upwind ? "upwind" : "lax_friedrichs"; }

double eval_solution(ElementTable const &table, Basis1D const &basis, Box const &box, std::span<const double> x,
                     std::span<const Side> side)
{
  int const d  = table.dim();
  int const np = basis.size();
  std::vector<double> xi(d);
  for (int m = 0; m < d; ++m)
    xi[m] = box.to_reference(m, x[m]);
  std::vector<std::vector<double>> vals(d, std::vector<double>(np));
  double sum = 0;
  for (auto const &[key, e] : table)
  {
    bool inside = true;
    for (int m = 0; m < d && inside; ++m)
    {
      basis.eval_all(key.level[m], key.cell[m], xi[m], side[m], vals[m]);
      inside = std::any_of(vals[m].begin(), vals[m].end(), [](double v) { return v != 0.0; });
    }
    if (!inside)
      continue;
    std::vector<int> idx(d, 0);
    for (double c : e.coeffs)
    {
      double v = c;
      for (int m = 0; m < d; ++m)
        v *= vals[m][idx[m]];
      sum += v;
      for (int m = d - 1; m >= 0; --m)
      {
        if (++idx[m] < np)
          break;
        idx[m] = 0;
      }
    }
  }
  return sum / std::sqrt(box.volume());
}

BlockMatrix1D::BlockMatrix1D(int elements, int block) : block_(block), row_ptr_(elements + 1, 0) {}

double const *BlockMatrix1D::find(int row, int col) const
{
  auto const cols = row_cols(row);
  auto it         = std::lower_bound(cols.begin(), cols.end(), col);
  if (it == cols.end() || *it != col)
    return nullptr;
  return row_block(row, static_cast<int>(it - cols.begin()));
}

BlockMatrix1D BlockMatrix1D::filtered(bool lower) const
{
  BlockMatrix1D out(elements(), block_);
  std::size_t const bb = static_cast<std::size_t>(block_) * block_;
  for (int r = 0; r < elements(); ++r)
  {
    int const lr = level_of_index(r);
    auto const cols = row_cols(r);
    for (std::size_t e = 0; e < cols.size(); ++e)
    {
      bool const is_lower = level_of_index(cols[e]) <= lr;
      if (is_lower != lower)
        continue;
      out.cols_.push_back(cols[e]);
      double const *b = row_block(r, static_cast<int>(e));
      out.blocks_.insert(out.blocks_.end(), b, b + bb);
    }
    out.row_ptr_[r + 1] = static_cast<int>(out.cols_.size());
  }
  return out;
}

BlockMatrix1D BlockMatrix1D::lower() const { return filtered(true); }
BlockMatrix1D BlockMatrix1D::upper() const { return filtered(false); }

BlockMatrix1D::Builder::Builder(int elements, int block) : elements_(elements), block_(block), rows_(elements) {}

double *BlockMatrix1D::Builder::block(int row, int col)
{
  auto &r = rows_[row];
  for (auto &[c, b] : r)
    if (c == col)
      return b.data();
  r.emplace_back(col, std::vector<double>(static_cast<std::size_t>(block_) * block_, 0.0));
  return r.back().second.data();
}

BlockMatrix1D BlockMatrix1D::Builder::finish() const
{
  BlockMatrix1D out(elements_, block_);
  for (int r = 0; r < elements_; ++r)
  {
    auto row = rows_[r];
    std::sort(row.begin(), row.end(), [](auto const &a, auto const &b) { return a.first < b.first; });
    for (auto const &[c, b] : row)
    {
      out.cols_.push_back(c);
      out.blocks_.insert(out.blocks_.end(), b.begin(), b.end());
    }
    out.row_ptr_[r + 1] = static_cast<int>(out.cols_.size());
  }
  return out;
}

namespace
{

// (level, translation) of the elements whose support contains level-N cell c
std::vector<std::pair<int, int>> cell_elements(int max_level, int c)
{
  std::vector<std::pair<int, int>> out{{0, 0}};
  for (int l = 1; l <= max_level; ++l)
    out.emplace_back(l, c >> (max_level - l + 1));
  return out;
}

struct Trace
{
  int index;
  std::vector<double> minus, plus;
};

// traces of all functions that are nonzero on either side of level-N face c
std::vector<Trace> face_traces(Basis1D const &basis, int max_level, int c, Boundary boundary)
{
  int const cells = 1 << max_level;
  double const h  = 1.0 / cells;
  int const np    = basis.size();
  std::map<int, Trace> traces;
  auto touch = [&](int l, int j) -> Trace & {
    int const idx = index_1d(l, j);
    auto it       = traces.find(idx);
    if (it == traces.end())
      it = traces.emplace(idx, Trace{idx, std::vector<double>(np, 0.0), std::vector<double>(np, 0.0)}).first;
    return it->second;
  };
  std::vector<double> vals(np);

  int minus_cell = c - 1;
  double minus_x = c * h;
  if (c == 0)
  {
    minus_cell = boundary == Boundary::periodic ? cells - 1 : -1;
    minus_x    = 1.0;
  }
  int const plus_cell = c < cells ? c : -1;

  if (minus_cell >= 0)
    for (auto [l, j] : cell_elements(max_level, minus_cell))
    {
      basis.eval_all(l, j, minus_x, Side::left, vals);
      touch(l, j).minus = vals;
    }
  if (plus_cell >= 0)
    for (auto [l, j] : cell_elements(max_level, plus_cell))
    {
      basis.eval_all(l, j, c * h, Side::right, vals);
      touch(l, j).plus = vals;
    }
  std::vector<Trace> out;
  for (auto &[idx, t] : traces)
    out.push_back(std::move(t));
  return out;
}

int face_count(int max_level, Boundary boundary)
{
  return boundary == Boundary::periodic ? (1 << max_level) : (1 << max_level) + 1;
}

// volume part: int f * u * (derivative ? v' : v)
void add_volume(BlockMatrix1D::Builder &builder, Basis1D const &basis, int max_level, Function1D const &f,
                bool derivative)
{
  int const cells = 1 << max_level;
  double const h  = 1.0 / cells;
  int const np    = basis.size();
  auto const gq   = gauss_quadrature(basis.degree() + 2);
  std::vector<double> vals(np), ders(np);
  for (int c = 0; c < cells; ++c)
  {
    auto const elems = cell_elements(max_level, c);
    int const ne     = static_cast<int>(elems.size());
    std::vector<std::vector<double>> u(ne * gq.order), v(ne * gq.order);
    std::vector<double> w(gq.order);
    for (int q = 0; q < gq.order; ++q)
    {
      double const x = (c + gq.nodes[q]) * h;
      w[q]           = gq.weights[q] * h * (f ? f(x) : 1.0);
      for (int e = 0; e < ne; ++e)
      {
        basis.eval_all(elems[e].first, elems[e].second, x, Side::right, vals);
        u[e * gq.order + q] = vals;
        if (derivative)
        {
          basis.eval_all_derivative(elems[e].first, elems[e].second, x, Side::right, ders);
          v[e * gq.order + q] = ders;
        }
        else
          v[e * gq.order + q] = vals;
      }
    }
    for (int ev = 0; ev < ne; ++ev)
      for (int eu = 0; eu < ne; ++eu)
      {
        double *b = builder.block(index_1d(elems[ev].first, elems[ev].second),
                                  index_1d(elems[eu].first, elems[eu].second));
        for (int q = 0; q < gq.order; ++q)
        {
          auto const &vv = v[ev * gq.order + q];
          auto const &uu = u[eu * gq.order + q];
          for (int a = 0; a < np; ++a)
            for (int bcol = 0; bcol < np; ++bcol)
              b[a * np + bcol] += w[q] * vv[a] * uu[bcol];
        }
      }
  }
}

} // namespace

BlockMatrix1D mass_matrix_1d(Basis1D const &basis, int max_level, Function1D const &f)
{
  BlockMatrix1D::Builder builder(1 << max_level, basis.size());
  add_volume(builder, basis, max_level, f, false);
  return builder.finish();
}

BlockMatrix1D central_matrix_1d(Basis1D const &basis, int max_level, Function1D const &f, Boundary boundary)
{
  int const np = basis.size();
  BlockMatrix1D::Builder builder(1 << max_level, np);
  add_volume(builder, basis, max_level, f, true);
  double const h = 1.0 / (1 << max_level);
  for (int c = 0; c < face_count(max_level, boundary); ++c)
  {
    double const fx   = f ? f(c * h) : 1.0;
    auto const traces = face_traces(basis, max_level, c, boundary);
    for (auto const &tv : traces)
      for (auto const &tu : traces)
      {
        double *b = builder.block(tv.index, tu.index);
        for (int a = 0; a < np; ++a)
        {
          double const jump_v = tv.minus[a] - tv.plus[a];
          if (jump_v == 0.0)
            continue;
          for (int bcol = 0; bcol < np; ++bcol)
            b[a * np + bcol] -= fx * 0.5 * (tu.minus[bcol] + tu.plus[bcol]) * jump_v;
        }
      }
  }
  return builder.finish();
}

BlockMatrix1D jump_matrix_1d(Basis1D const &basis, int max_level, Function1D const &g, Boundary boundary)
{
  int const np = basis.size();
  BlockMatrix1D::Builder builder(1 << max_level, np);
  double const h = 1.0 / (1 << max_level);
  for (int c = 0; c < face_count(max_level, boundary); ++c)
  {
    double const gx   = g ? g(c * h) : 1.0;
    auto const traces = face_traces(basis, max_level, c, boundary);
    for (auto const &tv : traces)
      for (auto const &tu : traces)
      {
        double *b = builder.block(tv.index, tu.index);
        for (int a = 0; a < np; ++a)
        {
          double const jump_v = tv.minus[a] - tv.plus[a];
          for (int bcol = 0; bcol < np; ++bcol)
            b[a * np + bcol] += gx * (tu.minus[bcol] - tu.plus[bcol]) * jump_v;
        }
      }
  }
  return builder.finish();
}

void apply_along(ElementLayout const &layout, int m, BlockMatrix1D const &mat, double scale,
                 std::vector<double> const &x, std::vector<double> &y)
{
  int const np     = layout.degree() + 1;
  int const bs     = layout.block_size();
  int stride       = 1;
  for (int a = m + 1; a < layout.dim(); ++a)
    stride *= np;
  int const outer = bs / (np * stride);

  std::vector<int> slot(mat.elements(), -1);
  for (auto const &fiber : layout.fibers(m))
  {
    for (std::size_t a = 0; a < fiber.index.size(); ++a)
      slot[fiber.index[a]] = fiber.position[a];
    for (std::size_t a = 0; a < fiber.index.size(); ++a)
    {
      int const row   = fiber.index[a];
      double *yv      = y.data() + static_cast<std::size_t>(fiber.position[a]) * bs;
      auto const cols = mat.row_cols(row);
      for (std::size_t e = 0; e < cols.size(); ++e)
      {
        int const pu = slot[cols[e]];
        if (pu < 0)
          continue;
        double const *blk = mat.row_block(row, static_cast<int>(e));
        double const *xu  = x.data() + static_cast<std::size_t>(pu) * bs;
        for (int o = 0; o < outer; ++o)
          for (int r = 0; r < stride; ++r)
          {
            int const base = o * np * stride + r;
            for (int i = 0; i < np; ++i)
            {
              double s = 0;
              for (int jj = 0; jj < np; ++jj)
                s += blk[i * np + jj] * xu[base + jj * stride];
              yv[base + i * stride] += scale * s;
            }
          }
      }
    }
    for (int idx : fiber.index)
      slot[idx] = -1;
  }
}

struct DgOperator::Matrices
{
  struct Split
  {
    BlockMatrix1D lower, upper;
  };
  struct Weight
  {
    int dim;
    Split const *split;
  };
  struct Product
  {
    int direction;
    Function1D time_factor;
    bool absolute;  // upwind penalty: uses |c(t)|
    BlockMatrix1D const *neighbor;
    std::vector<Weight> weights;
  };

  std::vector<std::unique_ptr<BlockMatrix1D>> owned;
  std::vector<std::unique_ptr<Split>> splits;
  std::vector<Product> products;
  std::vector<BlockMatrix1D const *> lf_jump;  // per direction
};

namespace
{
// Restricted tensor product on a hole-free set. Each weight direction n is
// split as L + U by trial level; L is applied after the remaining factors and
// U before them, so every intermediate value lives on an active element.
void product_apply(ElementLayout const &layout, std::span<const DgOperator::Matrices::Weight> weights, int m,
                   BlockMatrix1D const &neighbor, double scale, std::vector<double> const &x,
                   std::vector<double> &y)
{
  if (weights.empty())
  {
    apply_along(layout, m, neighbor, scale, x, y);
    return;
  }
  auto const &w    = weights.front();
  auto const rest  = weights.subspan(1);
  std::vector<double> tmp(x.size(), 0.0);
  product_apply(layout, rest, m, neighbor, 1.0, x, tmp);
  apply_along(layout, w.dim, w.split->lower, scale, tmp, y);

  std::fill(tmp.begin(), tmp.end(), 0.0);
  apply_along(layout, w.dim, w.split->upper, 1.0, x, tmp);
  product_apply(layout, rest, m, neighbor, scale, tmp, y);
}
} // namespace

DgOperator::DgOperator(Basis1D const &basis, Box box, std::vector<Boundary> boundaries, int max_level,
                       VelocityField field, FluxKind flux)
    : box_(std::move(box)), boundaries_(std::move(boundaries)), max_level_(max_level), field_(std::move(field)),
      flux_(flux), mats_(std::make_unique<Matrices>())
{
  int const d = box_.dim();
  if (field_.dim != d || static_cast<int>(field_.components.size()) != d)
    throw std::invalid_argument("DgOperator: velocity field dimension does not match the box");
  if (static_cast<int>(boundaries_.size()) != d)
    throw std::invalid_argument("DgOperator: need one boundary kind per dimension");
  if (!field_.speed_bounds)
    throw std::invalid_argument("DgOperator: velocity field lacks speed bounds");

  auto reference = [this](Function1D const &f, int n, bool absolute) -> Function1D {
    if (!f)
      return {};
    double const lo = box_.lower[n], len = box_.extent(n);
    if (absolute)
      return [f, lo, len](double xi) { return std::abs(f(lo + len * xi)); };
    return [f, lo, len](double xi) { return f(lo + len * xi); };
  };
  auto own = [this](BlockMatrix1D &&mat) {
    mats_->owned.push_back(std::make_unique<BlockMatrix1D>(std::move(mat)));
    return mats_->owned.back().get();
  };
  auto split = [this](BlockMatrix1D const &mat) {
    mats_->splits.push_back(std::make_unique<Matrices::Split>(Matrices::Split{mat.lower(), mat.upper()}));
    return mats_->splits.back().get();
  };

  for (int m = 0; m < d; ++m)
  {
    auto const &terms = field_.components[m];
    if (flux_ == FluxKind::upwind && terms.size() > 1)
      throw std::invalid_argument("upwind flux needs a single separable term per velocity component; "
                                  "use lax_friedrichs");
    for (auto const &term : terms)
    {
      auto factor = [&term](int n) { return n < static_cast<int>(term.factors.size()) ? term.factors[n] : Function1D{}; };
      Matrices::Product central{m, term.time_factor, false, nullptr, {}};
      central.neighbor = own(central_matrix_1d(basis, max_level_, reference(factor(m), m, false), boundaries_[m]));
      for (int n = 0; n < d; ++n)
        if (n != m && factor(n))
          central.weights.push_back({n, split(mass_matrix_1d(basis, max_level_, reference(factor(n), n, false)))});
      mats_->products.push_back(std::move(central));

      if (flux_ == FluxKind::upwind)
      {
        Matrices::Product penalty{m, term.time_factor, true, nullptr, {}};
        penalty.neighbor = own(jump_matrix_1d(basis, max_level_, reference(factor(m), m, true), boundaries_[m]));
        for (int n = 0; n < d; ++n)
          if (n != m && factor(n))
            penalty.weights.push_back({n, split(mass_matrix_1d(basis, max_level_, reference(factor(n), n, true)))});
        mats_->products.push_back(std::move(penalty));
      }
    }
    mats_->lf_jump.push_back(flux_ == FluxKind::lax_friedrichs
                                 ? own(jump_matrix_1d(basis, max_level_, Function1D{}, boundaries_[m]))
                                 : nullptr);
  }
}

DgOperator::~DgOperator()                                = default;
DgOperator::DgOperator(DgOperator &&) noexcept            = default;
DgOperator &DgOperator::operator=(DgOperator &&) noexcept = default;

void DgOperator::apply(ElementLayout const &layout, std::vector<double> const &u, double t,
                       std::vector<double> &out) const
{
  if (layout.max_level() != max_level_)
    throw std::invalid_argument("DgOperator: layout max level does not match");
  if (u.size() != layout.vector_size())
    throw std::invalid_argument("DgOperator: coefficient vector does not match layout");
  out.assign(u.size(), 0.0);
  for (auto const &p : mats_->products)
  {
    double c = p.time_factor ? p.time_factor(t) : 1.0;
    if (c == 0.0)
      continue;
    double const inv_h = 1.0 / box_.extent(p.direction);
    double const scale = p.absolute ? -0.5 * std::abs(c) * inv_h : c * inv_h;
    product_apply(layout, p.weights, p.direction, *p.neighbor, scale, u, out);
  }
  if (flux_ == FluxKind::lax_friedrichs)
  {
    auto const alpha = field_.speed_bounds(t);
    for (int m = 0; m < box_.dim(); ++m)
      if (alpha[m] != 0.0)
        apply_along(layout, m, *mats_->lf_jump[m], -0.5 * alpha[m] / box_.extent(m), u, out);
  }
}

} // namespace amdg
