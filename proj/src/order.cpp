#include "msa/order.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "msa/error.hpp"

namespace msa {

std::vector<std::size_t> IndexSet::elements() const {
  std::vector<std::size_t> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
  return out;
}

namespace {

std::vector<std::vector<char>> matrix_from_pairs(
    const std::vector<std::string>& sorted_elems,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  const std::size_t n = sorted_elems.size();
  std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
  auto idx = [&](const std::string& name) {
    auto it = std::lower_bound(sorted_elems.begin(), sorted_elems.end(), name);
    if (it == sorted_elems.end() || *it != name)
      throw Error(ErrorKind::invalid_preorder, "unknown element " + name);
    return static_cast<std::size_t>(it - sorted_elems.begin());
  };
  for (const auto& [a, b] : pairs) m[idx(a)][idx(b)] = 1;
  return m;
}

std::vector<std::string> sorted_unique(std::vector<std::string> elems) {
  std::sort(elems.begin(), elems.end());
  if (std::adjacent_find(elems.begin(), elems.end()) != elems.end())
    throw Error(ErrorKind::invalid_preorder, "duplicate element");
  return elems;
}

}  // namespace

Preorder::Preorder(std::vector<std::string> elems,
                   const std::vector<std::pair<std::string, std::string>>& le)
    : elems_(sorted_unique(std::move(elems))) {
  le_ = matrix_from_pairs(elems_, le);
  validate();
}

Preorder Preorder::closure_of(std::vector<std::string> elems,
                              const std::vector<std::pair<std::string, std::string>>& generators) {
  Preorder p;
  p.elems_ = sorted_unique(std::move(elems));
  p.le_ = matrix_from_pairs(p.elems_, generators);
  const std::size_t n = p.elems_.size();
  for (std::size_t i = 0; i < n; ++i) p.le_[i][i] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (p.le_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (p.le_[k][j]) p.le_[i][j] = 1;
  p.validate();
  return p;
}

Preorder Preorder::from_matrix(std::vector<std::string> elems, std::vector<std::vector<char>> le) {
  const std::size_t n = elems.size();
  if (le.size() != n) throw Error(ErrorKind::invalid_preorder, "matrix size mismatch");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return elems[a] < elems[b]; });
  Preorder p;
  for (auto k : order) p.elems_.push_back(elems[k]);
  sorted_unique(p.elems_);
  p.le_.assign(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (le[order[i]].size() != n) throw Error(ErrorKind::invalid_preorder, "matrix size mismatch");
    for (std::size_t j = 0; j < n; ++j) p.le_[i][j] = le[order[i]][order[j]] ? 1 : 0;
  }
  p.validate();
  return p;
}

void Preorder::validate() const {
  const std::size_t n = elems_.size();
  if (n == 0) throw Error(ErrorKind::invalid_preorder, "index set is empty");
  for (std::size_t i = 0; i < n; ++i)
    if (!le_[i][i]) throw Error(ErrorKind::invalid_preorder, "not reflexive at " + elems_[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (le_[i][j])
        for (std::size_t k = 0; k < n; ++k)
          if (le_[j][k] && !le_[i][k])
            throw Error(ErrorKind::invalid_preorder,
                        "not transitive: " + elems_[i] + " ≤ " + elems_[j] + " ≤ " + elems_[k]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool bounded = false;
      for (std::size_t k = 0; k < n && !bounded; ++k) bounded = le_[i][k] && le_[j][k];
      if (!bounded)
        throw Error(ErrorKind::invalid_preorder,
                    "not directed: " + elems_[i] + " and " + elems_[j] + " have no upper bound");
    }
}

std::optional<std::size_t> Preorder::index_of(std::string_view name) const {
  auto it = std::lower_bound(elems_.begin(), elems_.end(), name);
  if (it == elems_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - elems_.begin());
}

IndexSet Preorder::up(std::size_t i) const {
  if (size() > 64) throw Error(ErrorKind::invalid_argument, "index set too large for a bitset");
  IndexSet out;
  for (std::size_t j = 0; j < size(); ++j)
    if (le(i, j)) out = out.with(j);
  return out;
}

std::vector<std::size_t> Preorder::upper_bounds(std::span<const std::size_t> xs) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < size(); ++k) {
    bool ok = true;
    for (auto x : xs) ok = ok && le(x, k);
    if (ok) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> Preorder::tops() const {
  std::vector<std::size_t> all(size());
  std::iota(all.begin(), all.end(), 0);
  return upper_bounds(all);
}

std::size_t Preorder::canonical_upper_bound(std::span<const std::size_t> xs) const {
  auto ub = upper_bounds(xs);
  for (auto k : ub) {
    bool minimal = true;
    for (auto m : ub) minimal = minimal && !lt(m, k);
    if (minimal) return k;
  }
  // Unreachable for a directed preorder.
  throw Error(ErrorKind::invalid_preorder, "no upper bound");
}

Preorder Preorder::restrict(const std::vector<std::size_t>& subset) const {
  std::vector<std::string> names;
  std::vector<std::vector<char>> m;
  for (auto i : subset) {
    names.push_back(elems_[i]);
    std::vector<char> row;
    for (auto j : subset) row.push_back(le_[i][j]);
    m.push_back(std::move(row));
  }
  return from_matrix(std::move(names), std::move(m));
}

std::vector<std::pair<std::size_t, std::size_t>> Preorder::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (le(i, j)) out.emplace_back(i, j);
  return out;
}

IsotoneMap::IsotoneMap(Preorder source, Preorder target, std::vector<std::size_t> table)
    : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
  if (table_.size() != source_.size())
    throw Error(ErrorKind::invalid_argument, "map is not total on the source");
  for (auto t : table_)
    if (t >= target_.size()) throw Error(ErrorKind::invalid_argument, "map leaves the target");
  for (auto [i, j] : source_.pairs())
    if (!target_.le(table_[i], table_[j]))
      throw Error(ErrorKind::invalid_argument,
                  "map is not isotone at " + source_.name(i) + " ≤ " + source_.name(j));
}

IsotoneMap IsotoneMap::identity(const Preorder& p) {
  std::vector<std::size_t> t(p.size());
  std::iota(t.begin(), t.end(), 0);
  return IsotoneMap(p, p, std::move(t));
}

IsotoneMap IsotoneMap::inclusion(const Preorder& sub, const Preorder& super) {
  std::vector<std::size_t> t;
  for (const auto& name : sub.names()) {
    auto k = super.index_of(name);
    if (!k) throw Error(ErrorKind::invalid_argument, name + " is not an element of the target");
    t.push_back(*k);
  }
  return IsotoneMap(sub, super, std::move(t));
}

bool IsotoneMap::is_injective() const {
  std::set<std::size_t> seen(table_.begin(), table_.end());
  return seen.size() == table_.size();
}

bool IsotoneMap::is_cofinal() const {
  for (std::size_t p = 0; p < target_.size(); ++p) {
    bool below = false;
    for (auto t : table_) below = below || target_.le(p, t);
    if (!below) return false;
  }
  return true;
}

IndexSet IsotoneMap::image(IndexSet j) const {
  IndexSet out;
  for (auto i : j.elements()) out = out.with(table_[i]);
  return out;
}

IsotoneMap compose(const IsotoneMap& psi, const IsotoneMap& phi) {
  if (!(phi.target() == psi.source()))
    throw Error(ErrorKind::source_mismatch, "composite of non-composable index maps");
  std::vector<std::size_t> t;
  for (auto x : phi.table()) t.push_back(psi(x));
  return IsotoneMap(phi.source(), psi.target(), std::move(t));
}

}  // namespace msa
