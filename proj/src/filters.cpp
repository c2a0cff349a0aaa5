#include "msa/filters.hpp"

#include <algorithm>

#include "msa/error.hpp"

namespace msa {

namespace {

void require_ground(std::size_t ground) {
  if (ground == 0 || ground > kMaxFilterGround)
    throw Error(ErrorKind::ground_mismatch,
                "filter ground must have between 1 and " + std::to_string(kMaxFilterGround) + " points");
}

}  // namespace

std::optional<std::string> Filter::defect(std::size_t ground, const std::vector<IndexSet>& members) {
  require_ground(ground);
  const auto full = IndexSet::full(ground);
  std::vector<bool> in(std::size_t{1} << ground, false);
  for (auto j : members) {
    if (!j.subset_of(full)) return "member outside the ground";
    in[j.bits()] = true;
  }
  if (!in[full.bits()]) return "the ground is not a member";
  if (in[0]) return "the empty set is a member";
  for (std::uint64_t j = 0; j < in.size(); ++j) {
    if (!in[j]) continue;
    for (std::uint64_t k = 0; k < in.size(); ++k) {
      if (in[k] && !in[j & k]) return "not closed under intersection";
      if ((j & ~k) == 0 && !in[k]) return "not upward closed";
    }
  }
  return std::nullopt;
}

Filter::Filter(std::size_t ground, std::vector<IndexSet> members) : ground_(ground) {
  require_ground(ground);
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  member_.assign(std::size_t{1} << ground, false);
  const auto full = IndexSet::full(ground);
  for (auto j : members) {
    if (!j.subset_of(full)) throw Error(ErrorKind::ground_mismatch, "member outside the ground");
    member_[j.bits()] = true;
  }
  members_ = std::move(members);
  // Upward closure and intersection are checked against the core: a finite
  // family is a filter iff it is exactly the supersets of a nonempty core.
  IndexSet c = full;
  for (auto j : members_) c = c & j;
  if (members_.empty() || c.empty() || !member_[c.bits()])
    throw Error(ErrorKind::not_a_filter, members_.empty() ? "no members" : "not closed under intersection");
  for (std::uint64_t q = 0; q < member_.size(); ++q)
    if (IndexSet(q).subset_of(full) && c.subset_of(IndexSet(q)) && !member_[q])
      throw Error(ErrorKind::not_a_filter, "not upward closed");
}

IndexSet Filter::core() const {
  IndexSet c = IndexSet::full(ground_);
  for (auto j : members_) c = c & j;
  return c;
}

bool Filter::subset_of(const Filter& other) const {
  if (other.ground_ != ground_) throw Error(ErrorKind::ground_mismatch, "filters on different grounds");
  for (auto j : members_)
    if (!other.contains(j)) return false;
  return true;
}

Ultrafilter::Ultrafilter(Filter f) : filter_(std::move(f)) {
  if (!is_ultrafilter(filter_)) throw Error(ErrorKind::not_a_filter, "filter is not maximal");
  point_ = filter_.core().elements().front();
}

Ultrafilter Ultrafilter::principal(std::size_t ground, std::size_t point) {
  if (point >= ground) throw Error(ErrorKind::ground_mismatch, "point outside the ground");
  return Ultrafilter(principal_filter(ground, IndexSet::single(point)));
}

Filter principal_filter(std::size_t ground, IndexSet core) {
  require_ground(ground);
  if (core.empty()) throw Error(ErrorKind::not_a_filter, "principal filter at the empty set");
  std::vector<IndexSet> members;
  for (std::uint64_t q = 0; q < (std::uint64_t{1} << ground); ++q)
    if (core.subset_of(IndexSet(q))) members.emplace_back(q);
  return Filter(ground, std::move(members));
}

std::vector<IndexSet> final_sections_basis(const Preorder& p) {
  std::vector<IndexSet> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(p.up(i));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Filter filter_from_basis(std::size_t ground, const std::vector<IndexSet>& basis) {
  require_ground(ground);
  if (basis.empty()) throw Error(ErrorKind::not_a_basis, "empty basis");
  const auto full = IndexSet::full(ground);
  for (auto b : basis) {
    if (!b.subset_of(full)) throw Error(ErrorKind::ground_mismatch, "basis member outside the ground");
    if (b.empty()) throw Error(ErrorKind::not_a_basis, "basis contains the empty set");
  }
  for (auto x : basis)
    for (auto y : basis) {
      bool refined = std::any_of(basis.begin(), basis.end(),
                                 [&](IndexSet z) { return z.subset_of(x & y); });
      if (!refined) throw Error(ErrorKind::not_a_basis, "two basis members have no common refinement");
    }
  std::vector<IndexSet> members;
  for (std::uint64_t q = 0; q < (std::uint64_t{1} << ground); ++q)
    if (std::any_of(basis.begin(), basis.end(), [&](IndexSet b) { return b.subset_of(IndexSet(q)); }))
      members.emplace_back(q);
  return Filter(ground, std::move(members));
}

Filter final_sections_filter(const Preorder& p) {
  return filter_from_basis(p.size(), final_sections_basis(p));
}

bool is_ultrafilter(const Filter& f) {
  const std::size_t n = f.ground_size();
  for (std::uint64_t q = 0; q < (std::uint64_t{1} << n); ++q)
    if (!f.contains(IndexSet(q)) && !f.contains(IndexSet(q).complement(n))) return false;
  return true;
}

std::vector<Ultrafilter> ultrafilters_containing(const Filter& f) {
  std::vector<Ultrafilter> out;
  for (auto p : f.core().elements()) out.push_back(Ultrafilter::principal(f.ground_size(), p));
  return out;
}

Filter image_filter(std::size_t target_ground, const std::vector<std::size_t>& phi, const Filter& f) {
  require_ground(target_ground);
  if (phi.size() != f.ground_size())
    throw Error(ErrorKind::ground_mismatch, "map is not defined on the filter's ground");
  for (auto t : phi)
    if (t >= target_ground) throw Error(ErrorKind::ground_mismatch, "map leaves the target ground");
  // φ[J] ⊆ Q iff J ⊆ φ⁻¹[Q], and F is upward closed.
  std::vector<IndexSet> members;
  for (std::uint64_t q = 0; q < (std::uint64_t{1} << target_ground); ++q) {
    IndexSet pre;
    for (std::size_t i = 0; i < phi.size(); ++i)
      if (IndexSet(q).contains(phi[i])) pre = pre.with(i);
    if (f.contains(pre)) members.emplace_back(q);
  }
  return Filter(target_ground, std::move(members));
}

Ultrafilter co_optimal_lift(std::size_t target_ground, const std::vector<std::size_t>& phi,
                            const Ultrafilter& u) {
  return Ultrafilter(image_filter(target_ground, phi, u.filter()));
}

Ultrafilter co_optimal_lift(const IsotoneMap& phi, const Ultrafilter& u) {
  if (u.ground_size() != phi.source().size())
    throw Error(ErrorKind::ground_mismatch, "ultrafilter is not on the source of the map");
  return co_optimal_lift(phi.target().size(), phi.table(), u);
}

bool is_uffs_object(const UffsObject& x) {
  if (x.ultra.ground_size() != x.index.size()) return false;
  return final_sections_filter(x.index).subset_of(x.ultra.filter());
}

bool uffs_morphism_check(const UffsObject& source, const UffsObject& target, const IsotoneMap& phi) {
  if (!(phi.source() == source.index) || !(phi.target() == target.index)) return false;
  if (!phi.is_injective() || !phi.is_cofinal()) return false;
  return co_optimal_lift(phi, source.ultra) == target.ultra;
}

std::string subset_name(const Preorder& p, IndexSet j) {
  std::string out = "[";
  bool first = true;
  for (auto i : j.elements()) {
    if (!first) out += '.';
    out += p.name(i);
    first = false;
  }
  return out + "]";
}

}  // namespace msa
