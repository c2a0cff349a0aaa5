#include "msa/reduced.hpp"

#include <algorithm>

#include "msa/error.hpp"

namespace msa {

IndexedFamily AlgebraFamily::carriers() const {
  IndexedFamily f{sig->sorts(), index, {}};
  for (const auto& a : members) f.members.push_back(a.carrier());
  return f;
}

namespace {

std::string subset_label(const std::vector<std::string>& names, IndexSet j) {
  std::string out = "[";
  bool first = true;
  for (auto i : j.elements()) {
    if (!first) out += '.';
    out += names[i];
    first = false;
  }
  return out + "]";
}

}  // namespace

ProductAlgebra subproduct(const AlgebraFamily& family, IndexSet j) {
  std::vector<std::string> names;
  std::vector<Algebra> members;
  for (auto i : j.elements()) {
    if (i >= family.size()) throw Error(ErrorKind::ground_mismatch, "subset exceeds the family index");
    names.push_back(family.index[i]);
    members.push_back(family.members[i]);
  }
  return product_algebra(family.sig, names, members);
}

std::size_t ReducedProductSystem::position(IndexSet j) const {
  for (std::size_t k = 0; k < members.size(); ++k)
    if (members[k] == j) return k;
  throw Error(ErrorKind::j_not_in_filter, "subset is not a member of the filter");
}

Homomorphism restriction(const ProductAlgebra& from, IndexSet j, const ProductAlgebra& to, IndexSet k) {
  if (!k.subset_of(j)) throw Error(ErrorKind::invalid_argument, "restriction to a non-subset");
  auto js = j.elements();
  std::vector<std::size_t> pick;
  for (auto x : k.elements()) pick.push_back(static_cast<std::size_t>(std::find(js.begin(), js.end(), x) - js.begin()));
  const std::size_t nsorts = from.layout.size();
  SortedTable t(nsorts);
  std::vector<ElemIndex> digits(js.size()), kept(pick.size());
  for (std::size_t s = 0; s < nsorts; ++s)
    for (std::size_t code = 0; code < from.algebra.size(s); ++code) {
      from.layout[s].decode(code, digits);
      for (std::size_t q = 0; q < pick.size(); ++q) kept[q] = digits[pick[q]];
      t[s].push_back(static_cast<ElemIndex>(to.layout[s].encode(kept)));
    }
  return Homomorphism(Homomorphism::Unchecked{}, from.algebra, to.algebra, std::move(t));
}

ReducedProductSystem reduced_product_system(const AlgebraFamily& family, const Filter& f) {
  if (f.ground_size() != family.size())
    throw Error(ErrorKind::ground_mismatch, "filter ground differs from the family index");
  const auto& ms = f.members();
  std::vector<std::string> names;
  std::vector<std::vector<char>> le(ms.size(), std::vector<char>(ms.size(), 0));
  for (std::size_t a = 0; a < ms.size(); ++a) {
    names.push_back(subset_label(family.index, ms[a]));
    for (std::size_t b = 0; b < ms.size(); ++b) le[a][b] = ms[b].subset_of(ms[a]) ? 1 : 0;
  }
  ReducedProductSystem out;
  out.order = Preorder::from_matrix(names, std::move(le));
  for (std::size_t k = 0; k < out.order.size(); ++k) {
    auto it = std::find(names.begin(), names.end(), out.order.name(k));
    out.members.push_back(ms[static_cast<std::size_t>(it - names.begin())]);
  }
  std::vector<Algebra> algebras;
  for (auto j : out.members) {
    out.products.push_back(subproduct(family, j));
    algebras.push_back(out.products.back().algebra);
  }
  InductiveSystem::Transitions t;
  for (auto [a, b] : out.order.pairs())
    t.emplace(std::make_pair(a, b), restriction(out.products[a], out.members[a], out.products[b], out.members[b]));
  out.system = InductiveSystem(out.order, family.sig, std::move(algebras), std::move(t));
  return out;
}

InductiveLimit reduced_product(const ReducedProductSystem& r) { return inductive_limit(r.system); }

IndexSet equalizer_set(const ProductAlgebra& p, SortIndex s, ElemIndex a, ElemIndex b) {
  auto x = p.layout[s].decode(a);
  auto y = p.layout[s].decode(b);
  IndexSet eq;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] == y[i]) eq = eq.with(i);
  return eq;
}

Congruence filter_congruence(const ProductAlgebra& full, const Filter& f) {
  if (full.projections.size() != f.ground_size())
    throw Error(ErrorKind::ground_mismatch, "filter ground differs from the product index");
  const std::size_t nsorts = full.layout.size();
  SortedTable labels(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s) {
    const auto n = static_cast<ElemIndex>(full.algebra.size(s));
    labels[s].resize(n);
    for (ElemIndex x = 0; x < n; ++x) {
      labels[s][x] = x;
      for (ElemIndex y = 0; y < x; ++y)
        if (f.contains(equalizer_set(full, s, x, y))) {
          labels[s][x] = labels[s][y];
          break;
        }
    }
  }
  return Congruence(full.algebra, SortedEquivalence(full.algebra.carrier(), std::move(labels)));
}

IsoCheck compare_algebras(const Algebra& left, const Algebra& right, std::size_t node_cap) {
  IsoCheck out{left, right, std::nullopt, false};
  try {
    out.iso = find_isomorphism(left, right, node_cap);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::cap_exceeded) throw;
    out.cap_exceeded = true;
  }
  return out;
}

EventuallyConsistent eventually_consistent_quotient(const InductiveSystem& d) {
  const auto& p = d.index();
  const std::size_t n = p.size();
  auto family = family_of(d);
  auto product = product_algebra(family.sig, family.index, family.members);
  const std::size_t nsorts = product.layout.size();

  std::vector<std::size_t> maximal;
  for (std::size_t k = 0; k < n; ++k) {
    bool is_max = true;
    for (std::size_t m = 0; m < n; ++m) is_max = is_max && !p.lt(k, m);
    if (is_max) maximal.push_back(k);
  }
  // On a finite directed preorder it is enough to let k range over maximal
  // elements in both ∃k clauses.
  SortedTable members(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s) {
    std::vector<ElemIndex> x(n);
    for (std::size_t code = 0; code < product.algebra.size(s); ++code) {
      product.layout[s].decode(code, x);
      bool in_c = std::any_of(maximal.begin(), maximal.end(), [&](std::size_t k) {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (p.le(k, i) && p.le(i, j) && d.transition(i, j)(s, x[i]) != x[j]) return false;
        return true;
      });
      if (in_c) members[s].push_back(static_cast<ElemIndex>(code));
    }
  }
  auto c = induced_subalgebra(product.algebra, members);

  SortedTable labels(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s) {
    const auto& ms = members[s];
    labels[s].resize(ms.size());
    std::vector<std::vector<ElemIndex>> coords;
    for (auto code : ms) coords.push_back(product.layout[s].decode(code));
    for (std::size_t a = 0; a < ms.size(); ++a) {
      labels[s][a] = static_cast<ElemIndex>(a);
      for (std::size_t b = 0; b < a; ++b) {
        bool agree = std::any_of(maximal.begin(), maximal.end(), [&](std::size_t k) {
          for (std::size_t i = 0; i < n; ++i)
            if (p.le(k, i) && coords[a][i] != coords[b][i]) return false;
          return true;
        });
        if (agree) {
          labels[s][a] = labels[s][b];
          break;
        }
      }
    }
  }
  Congruence agreement(c.algebra, SortedEquivalence(c.algebra.carrier(), std::move(labels)));
  auto q = quotient_algebra(agreement);
  return {std::move(product), std::move(c), std::move(agreement), std::move(q)};
}

Prop25Verdict prop25_check(const InductiveSystem& d, std::size_t node_cap) {
  Prop25Verdict v;
  v.constant_support = constant_support(d.carriers());
  auto ec = eventually_consistent_quotient(d);
  auto lim = inductive_limit(d);
  v.iso = compare_algebras(ec.quotient.algebra, lim.apex, node_cap);
  v.consistent = !v.iso.cap_exceeded && v.constant_support == v.iso.found();
  return v;
}

PrincipalVerdict prop28_check(const AlgebraFamily& family, IndexSet j, std::size_t node_cap) {
  PrincipalVerdict v;
  v.j = j;
  v.constant_support = constant_support(family.carriers());
  auto f = principal_filter(family.size(), j);
  auto full = subproduct(family, IndexSet::full(family.size()));
  auto q = quotient_algebra(filter_congruence(full, f));
  v.iso = compare_algebras(q.algebra, subproduct(family, j).algebra, node_cap);
  v.consistent = !v.iso.cap_exceeded && (!v.constant_support || v.iso.found());
  return v;
}

ReducedVerdict prop29_check(const AlgebraFamily& family, const Filter& f, std::size_t node_cap) {
  ReducedVerdict v;
  v.ultra = is_ultrafilter(f);
  v.constant_support = constant_support(family.carriers());
  v.remark_condition = true;
  for (std::size_t s = 0; s < family.sig->sorts().size(); ++s) {
    IndexSet supported;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (family.members[i].size(s) > 0) supported = supported.with(i);
    v.remark_condition = v.remark_condition && f.contains(supported);
  }
  auto r = reduced_product_system(family, f);
  auto colim = reduced_product(r);
  const auto& full = r.products[r.position(IndexSet::full(family.size()))];
  auto q = quotient_algebra(filter_congruence(full, f));
  v.iso = compare_algebras(colim.apex, q.algebra, node_cap);
  bool forward = !v.constant_support || v.iso.found();
  bool converse = !(v.iso.found() && v.remark_condition) || v.constant_support;
  v.consistent = !v.iso.cap_exceeded && forward && converse;
  return v;
}

ReducedVerdict ultraproduct_check(const AlgebraFamily& family, const Ultrafilter& u, std::size_t node_cap) {
  return prop29_check(family, u.filter(), node_cap);
}

}  // namespace msa
