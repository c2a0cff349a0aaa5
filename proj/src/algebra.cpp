#include "msa/algebra.hpp"

#include <algorithm>
#include <numeric>

#include "msa/error.hpp"

namespace msa {

namespace {

MixedRadix layout_for(const Signature& sig, const SortedSet& carrier, std::size_t op) {
  std::vector<std::size_t> radices;
  for (SortIndex s : sig.op(op).arity.word) radices.push_back(carrier.size(s));
  return MixedRadix(std::move(radices));
}

void require_same_signature(const Algebra& a, const Algebra& b) {
  if (!same_signature(a.signature_ptr(), b.signature_ptr()))
    throw Error(ErrorKind::signature_mismatch, "algebras over different signatures");
}

// First failing equation of f against the operations, or empty.
std::string first_failure(const SortedTable& f, const Algebra& a, const Algebra& b) {
  const auto& sig = a.signature();
  std::vector<ElemIndex> args, image;
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& ar = sig.op(k).arity;
    const auto& lay = a.arg_layout(k);
    args.resize(ar.word.size());
    image.resize(ar.word.size());
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      for (std::size_t p = 0; p < args.size(); ++p) image[p] = f[ar.word[p]][args[p]];
      if (f[ar.result][a.table(k)[code]] != b.apply(k, image))
        return "f ∘ " + sig.op(k).name + " differs at " + render_args(a, k, code);
    }
  }
  return {};
}

void require_shape(const SortedTable& map, const Algebra& a, const Algebra& b) {
  // SortedMapping validates totality and range.
  (void)SortedMapping(a.carrier(), b.carrier(), map);
}

}  // namespace

Algebra::Algebra(SignaturePtr sig, SortedSet carrier,
                 std::vector<std::vector<ElemIndex>> tables) {
  if (!sig) throw Error(ErrorKind::invalid_argument, "algebra without a signature");
  if (carrier.sorts() != sig->sorts())
    throw Error(ErrorKind::carrier_mismatch, "carrier sorts differ from the signature sorts");
  auto d = std::make_shared<Data>();
  d->sig = std::move(sig);
  d->carrier = std::move(carrier);
  d->tables = std::move(tables);
  d->tables.resize(d->sig->op_count());
  for (std::size_t k = 0; k < d->sig->op_count(); ++k)
    d->layouts.push_back(layout_for(*d->sig, d->carrier, k));
  data_ = std::move(d);
}

bool operator==(const Algebra& a, const Algebra& b) {
  if (a.data_ == b.data_) return true;
  if (!a.data_ || !b.data_) return false;
  return same_signature(a.data_->sig, b.data_->sig) && a.data_->carrier == b.data_->carrier &&
         a.data_->tables == b.data_->tables;
}

std::string render_args(const Algebra& a, std::size_t op, std::size_t code) {
  const auto& word = a.signature().op(op).arity.word;
  auto digits = a.arg_layout(op).decode(code);
  std::string out = "(";
  for (std::size_t p = 0; p < digits.size(); ++p) {
    if (p > 0) out += ',';
    out += a.element(word[p], digits[p]).str();
  }
  return out + ")";
}

std::vector<AlgebraDefect> validate_algebra(const Algebra& a) {
  std::vector<AlgebraDefect> out;
  const auto& sig = a.signature();
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& op = sig.op(k);
    const auto& table = a.table(k);
    const auto& lay = a.arg_layout(k);
    if (table.size() != lay.total()) {
      out.push_back({AlgebraDefect::Kind::shape, op.name, "",
                     "table has " + std::to_string(table.size()) + " entries, expected " +
                         std::to_string(lay.total())});
      continue;
    }
    for (std::size_t code = 0; code < table.size(); ++code) {
      if (table[code] == kUnmapped)
        out.push_back({AlgebraDefect::Kind::totality, op.name, render_args(a, k, code),
                       "no value for " + op.name + render_args(a, k, code)});
      else if (table[code] >= a.size(op.arity.result))
        out.push_back({AlgebraDefect::Kind::codomain, op.name, render_args(a, k, code),
                       op.name + render_args(a, k, code) + " lies outside the carrier of " +
                           sig.sorts()[op.arity.result]});
    }
  }
  return out;
}

Algebra checked_algebra(SignaturePtr sig, SortedSet carrier,
                        std::vector<std::vector<ElemIndex>> tables) {
  Algebra a(std::move(sig), std::move(carrier), std::move(tables));
  auto defects = validate_algebra(a);
  if (!defects.empty()) throw Error(ErrorKind::invalid_algebra, defects.front().message);
  return a;
}

Algebra final_algebra(SignaturePtr sig) {
  auto carrier = SortedSet::final(sig->sorts());
  std::vector<std::vector<ElemIndex>> tables(sig->op_count(), std::vector<ElemIndex>{0});
  return Algebra(std::move(sig), std::move(carrier), std::move(tables));
}

bool is_homomorphism(const SortedMapping& f, const Algebra& a, const Algebra& b) {
  if (!(f.source() == a.carrier()) || !(f.target() == b.carrier()))
    throw Error(ErrorKind::carrier_mismatch, "mapping does not go between these carriers");
  require_same_signature(a, b);
  return first_failure(f.tables(), a, b).empty();
}

Homomorphism::Homomorphism(Algebra source, Algebra target, SortedTable map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {
  require_same_signature(source_, target_);
  require_shape(map_, source_, target_);
  if (auto why = first_failure(map_, source_, target_); !why.empty())
    throw Error(ErrorKind::not_a_homomorphism, why);
}

Homomorphism::Homomorphism(Unchecked, Algebra source, Algebra target, SortedTable map)
    : source_(std::move(source)), target_(std::move(target)), map_(std::move(map)) {}

Homomorphism Homomorphism::identity(const Algebra& a) {
  return Homomorphism(Unchecked{}, a, a, SortedMapping::identity(a.carrier()).tables());
}

SortedMapping Homomorphism::mapping() const {
  return SortedMapping(source_.carrier(), target_.carrier(), map_);
}

bool Homomorphism::is_injective() const { return mapping().is_injective(); }
bool Homomorphism::is_surjective() const { return mapping().is_surjective(); }

Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
  if (!(f.target() == g.source()))
    throw Error(ErrorKind::source_mismatch, "composite of non-composable homomorphisms");
  SortedTable t(f.tables().size());
  for (std::size_t s = 0; s < t.size(); ++s) {
    t[s].reserve(f.table(s).size());
    for (ElemIndex y : f.table(s)) t[s].push_back(g(s, y));
  }
  return Homomorphism(Homomorphism::Unchecked{}, f.source(), g.target(), std::move(t));
}

ProductAlgebra product_algebra(SignaturePtr sig, const std::vector<std::string>& index,
                               const std::vector<Algebra>& members) {
  for (const auto& m : members)
    if (!same_signature(m.signature_ptr(), sig))
      throw Error(ErrorKind::signature_mismatch, "product member over a different signature");
  IndexedFamily family{sig->sorts(), index, {}};
  for (const auto& m : members) family.members.push_back(m.carrier());
  auto ps = product(family);
  const std::size_t n = members.size();
  const std::size_t nsorts = sig->sorts().size();

  // coords[s][p * n + i]: coordinate i of product element p.
  std::vector<std::vector<ElemIndex>> coords(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s) {
    coords[s].resize(ps.layout[s].total() * n);
    for (std::size_t p = 0; p < ps.layout[s].total(); ++p)
      ps.layout[s].decode(p, std::span<ElemIndex>(coords[s].data() + p * n, n));
  }

  std::vector<std::vector<ElemIndex>> tables(sig->op_count());
  for (std::size_t k = 0; k < sig->op_count(); ++k) {
    const auto& ar = sig->op(k).arity;
    std::vector<std::size_t> radices;
    for (SortIndex s : ar.word) radices.push_back(ps.set.size(s));
    MixedRadix lay(radices);
    auto& table = tables[k];
    table.resize(lay.total());
    std::vector<ElemIndex> args(ar.word.size()), member_args(ar.word.size()), result(n);
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < args.size(); ++p)
          member_args[p] = coords[ar.word[p]][args[p] * n + i];
        result[i] = members[i].apply(k, member_args);
      }
      table[code] = static_cast<ElemIndex>(n == 0 ? 0 : ps.layout[ar.result].encode(result));
    }
  }

  ProductAlgebra out;
  out.algebra = Algebra(sig, ps.set, std::move(tables));
  out.layout = ps.layout;
  for (std::size_t i = 0; i < n; ++i)
    out.projections.emplace_back(Homomorphism::Unchecked{}, out.algebra, members[i],
                                 ps.projections[i].tables());
  return out;
}

Homomorphism tupling(const ProductAlgebra& p, const Algebra& source,
                     const std::vector<Homomorphism>& legs) {
  if (legs.size() != p.projections.size())
    throw Error(ErrorKind::not_a_cone, "one leg per product factor required");
  for (std::size_t i = 0; i < legs.size(); ++i)
    if (!(legs[i].source() == source) || !(legs[i].target() == p.projections[i].target()))
      throw Error(ErrorKind::not_a_cone, "leg " + std::to_string(i) + " has the wrong ends");
  const std::size_t nsorts = source.carrier().sort_count();
  SortedTable t(nsorts);
  std::vector<ElemIndex> digits(legs.size());
  for (std::size_t s = 0; s < nsorts; ++s)
    for (std::size_t x = 0; x < source.size(s); ++x) {
      for (std::size_t i = 0; i < legs.size(); ++i) digits[i] = legs[i](s, static_cast<ElemIndex>(x));
      t[s].push_back(static_cast<ElemIndex>(legs.empty() ? 0 : p.layout[s].encode(digits)));
    }
  return Homomorphism(Homomorphism::Unchecked{}, source, p.algebra, std::move(t));
}

bool is_subalgebra(const SortedSet& x, const Algebra& a) {
  if (x.sorts() != a.carrier().sorts())
    throw Error(ErrorKind::not_subset, "subset over a different sort set");
  SortedTable members(x.sort_count());
  for (std::size_t s = 0; s < x.sort_count(); ++s)
    for (const auto& e : x.carrier(s)) {
      auto pos = a.carrier().find(s, e);
      if (!pos) throw Error(ErrorKind::not_subset, e.str() + " is not in the carrier");
      members[s].push_back(*pos);
    }
  try {
    induced_subalgebra(a, members);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::not_closed) return false;
    throw;
  }
  return true;
}

Subalgebra induced_subalgebra(const SortedSet& x, const Algebra& a) {
  if (x.sorts() != a.carrier().sorts())
    throw Error(ErrorKind::not_subset, "subset over a different sort set");
  SortedTable members(x.sort_count());
  for (std::size_t s = 0; s < x.sort_count(); ++s)
    for (const auto& e : x.carrier(s)) {
      auto pos = a.carrier().find(s, e);
      if (!pos) throw Error(ErrorKind::not_subset, e.str() + " is not in the carrier");
      members[s].push_back(*pos);
    }
  return induced_subalgebra(a, members);
}

Subalgebra induced_subalgebra(const Algebra& a, const SortedTable& members) {
  const auto& sig = a.signature();
  const std::size_t nsorts = sig.sorts().size();
  std::vector<std::vector<ElemIndex>> local(nsorts);
  std::vector<std::vector<Element>> carriers(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s) {
    local[s].assign(a.size(s), kUnmapped);
    std::vector<ElemIndex> sorted = members[s];
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      if (sorted[j] >= a.size(s)) throw Error(ErrorKind::not_subset, "position outside the carrier");
      local[s][sorted[j]] = static_cast<ElemIndex>(j);
      carriers[s].push_back(a.element(s, sorted[j]));
    }
  }
  SortedSet carrier(sig.sorts(), std::move(carriers));
  std::vector<std::vector<ElemIndex>> tables(sig.op_count());
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& ar = sig.op(k).arity;
    std::vector<std::size_t> radices;
    for (SortIndex s : ar.word) radices.push_back(carrier.size(s));
    MixedRadix lay(radices);
    std::vector<ElemIndex> args(ar.word.size()), outer(ar.word.size());
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      for (std::size_t p = 0; p < args.size(); ++p) {
        const auto& e = carrier.carrier(ar.word[p])[args[p]];
        outer[p] = *a.carrier().find(ar.word[p], e);
      }
      ElemIndex r = local[ar.result][a.apply(k, outer)];
      if (r == kUnmapped)
        throw Error(ErrorKind::not_closed, sig.op(k).name + " leaves the subset at " +
                                               render_args(a, k, a.arg_layout(k).encode(outer)));
      tables[k].push_back(r);
    }
  }
  Subalgebra out;
  out.algebra = Algebra(a.signature_ptr(), std::move(carrier), std::move(tables));
  SortedTable emb(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s)
    for (const auto& e : out.algebra.carrier().carrier(s)) emb[s].push_back(*a.carrier().find(s, e));
  out.embedding = Homomorphism(Homomorphism::Unchecked{}, out.algebra, a, std::move(emb));
  return out;
}

bool is_congruence(const SortedEquivalence& phi, const Algebra& a) {
  if (!(phi.base() == a.carrier()))
    throw Error(ErrorKind::source_mismatch, "equivalence is not on this carrier");
  const auto& sig = a.signature();
  std::vector<std::vector<ElemIndex>> rep(sig.sorts().size());
  for (std::size_t s = 0; s < rep.size(); ++s) {
    rep[s].resize(a.size(s));
    for (const auto& block : phi.blocks(s))
      for (ElemIndex x : block) rep[s][x] = block.front();
  }
  // Each argument is related to its block representative, so comparing with
  // the fully representative tuple covers every pair of related tuples.
  std::vector<ElemIndex> args, reps;
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& ar = sig.op(k).arity;
    if (ar.word.empty()) continue;
    const auto& lay = a.arg_layout(k);
    args.resize(ar.word.size());
    reps.resize(ar.word.size());
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      for (std::size_t p = 0; p < args.size(); ++p) reps[p] = rep[ar.word[p]][args[p]];
      if (!phi.related(ar.result, a.table(k)[code], a.apply(k, reps))) return false;
    }
  }
  return true;
}

Congruence::Congruence(Algebra a, SortedEquivalence phi)
    : algebra_(std::move(a)), relation_(std::move(phi)) {
  if (!is_congruence(relation_, algebra_))
    throw Error(ErrorKind::not_congruence, "relation is not compatible with the operations");
}

QuotientAlgebra quotient_algebra(const Congruence& phi) {
  const auto& a = phi.algebra();
  const auto& rel = phi.relation();
  const auto& sig = a.signature();
  auto qs = quotient(a.carrier(), rel);
  std::vector<std::vector<ElemIndex>> rep(sig.sorts().size());
  for (std::size_t s = 0; s < rep.size(); ++s)
    for (const auto& block : rel.blocks(s)) rep[s].push_back(block.front());
  std::vector<std::vector<ElemIndex>> tables(sig.op_count());
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& ar = sig.op(k).arity;
    std::vector<std::size_t> radices;
    for (SortIndex s : ar.word) radices.push_back(qs.set.size(s));
    MixedRadix lay(radices);
    std::vector<ElemIndex> args(ar.word.size()), outer(ar.word.size());
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      for (std::size_t p = 0; p < args.size(); ++p) outer[p] = rep[ar.word[p]][args[p]];
      tables[k].push_back(rel.block_of(ar.result, a.apply(k, outer)));
    }
  }
  QuotientAlgebra out;
  out.algebra = Algebra(a.signature_ptr(), qs.set, std::move(tables));
  out.projection =
      Homomorphism(Homomorphism::Unchecked{}, a, out.algebra, qs.projection.tables());
  return out;
}

Congruence kernel_congruence(const Homomorphism& f) {
  return Congruence(f.source(), kernel(f.mapping()));
}

Homomorphism factor_hom(const Homomorphism& f, const Congruence& phi) {
  if (!(phi.algebra() == f.source()))
    throw Error(ErrorKind::source_mismatch, "congruence is not on the source of f");
  auto g = factor_through(f.mapping(), phi.relation());
  auto q = quotient_algebra(phi);
  return Homomorphism(Homomorphism::Unchecked{}, q.algebra, f.target(), g.tables());
}

EqualizerAlgebra equalizer_algebra(const Homomorphism& f, const Homomorphism& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw Error(ErrorKind::not_parallel, "equalizer of non-parallel homomorphisms");
  SortedTable members(f.tables().size());
  for (std::size_t s = 0; s < members.size(); ++s)
    for (std::size_t x = 0; x < f.table(s).size(); ++x)
      if (f.table(s)[x] == g.table(s)[x]) members[s].push_back(static_cast<ElemIndex>(x));
  auto sub = induced_subalgebra(f.source(), members);
  return {sub.algebra, sub.embedding};
}

Congruence congruence_generated_by(
    const Algebra& a, const std::vector<std::tuple<SortIndex, ElemIndex, ElemIndex>>& pairs) {
  const auto& sig = a.signature();
  const std::size_t nsorts = sig.sorts().size();
  std::vector<std::vector<ElemIndex>> parent(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s) {
    parent[s].resize(a.size(s));
    std::iota(parent[s].begin(), parent[s].end(), 0);
  }
  auto find = [&](SortIndex s, ElemIndex x) {
    while (parent[s][x] != x) x = parent[s][x] = parent[s][parent[s][x]];
    return x;
  };
  auto unite = [&](SortIndex s, ElemIndex x, ElemIndex y) {
    x = find(s, x);
    y = find(s, y);
    if (x == y) return false;
    if (y < x) std::swap(x, y);
    parent[s][y] = x;
    return true;
  };
  for (auto [s, x, y] : pairs) unite(s, x, y);
  std::vector<ElemIndex> args, roots;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < sig.op_count(); ++k) {
      const auto& ar = sig.op(k).arity;
      if (ar.word.empty()) continue;
      const auto& lay = a.arg_layout(k);
      args.resize(ar.word.size());
      roots.resize(ar.word.size());
      for (std::size_t code = 0; code < lay.total(); ++code) {
        lay.decode(code, args);
        for (std::size_t p = 0; p < args.size(); ++p) roots[p] = find(ar.word[p], args[p]);
        if (unite(ar.result, a.table(k)[code], a.apply(k, roots))) changed = true;
      }
    }
  }
  SortedTable labels(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s)
    for (std::size_t x = 0; x < a.size(s); ++x) labels[s].push_back(find(s, static_cast<ElemIndex>(x)));
  return Congruence(a, SortedEquivalence(a.carrier(), std::move(labels)));
}

Algebra reduct(const SignatureMorphism& d, const Algebra& b) {
  if (!same_signature(b.signature_ptr(), d.target()))
    throw Error(ErrorKind::signature_mismatch, "algebra is not over the target signature");
  const auto& sig = *d.source();
  std::vector<std::vector<Element>> carriers;
  for (std::size_t s = 0; s < sig.sorts().size(); ++s) carriers.push_back(b.carrier().carrier(d.sort(s)));
  std::vector<std::vector<ElemIndex>> tables;
  for (std::size_t k = 0; k < sig.op_count(); ++k) tables.push_back(b.table(d.op(k)));
  return Algebra(d.source(), SortedSet(sig.sorts(), std::move(carriers)), std::move(tables));
}

Homomorphism reduct(const SignatureMorphism& d, const Homomorphism& f) {
  SortedTable t;
  for (std::size_t s = 0; s < d.source()->sorts().size(); ++s) t.push_back(f.table(d.sort(s)));
  return Homomorphism(Homomorphism::Unchecked{}, reduct(d, f.source()), reduct(d, f.target()),
                      std::move(t));
}

}  // namespace msa
