#include "msa/systems.hpp"

#include <algorithm>

#include "msa/error.hpp"

namespace msa {

namespace {

std::string pair_name(const Preorder& p, std::size_t i, std::size_t j) {
  return "(" + p.name(i) + "," + p.name(j) + ")";
}

template <Variance V>
std::vector<SystemDefect> validate_impl(const System<V>& sys) {
  constexpr bool proj = V == Variance::projective;
  std::vector<SystemDefect> out;
  const auto& p = sys.index();
  if (sys.algebras().size() != p.size()) {
    out.push_back({SystemDefect::Kind::shape, {}, "one algebra per index required"});
    return out;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = sys.algebra(i);
    if (!a.valid_handle() || !same_signature(a.signature_ptr(), sys.signature_ptr())) {
      out.push_back({SystemDefect::Kind::algebra, {i}, "algebra at " + p.name(i) + " is over another signature"});
      return out;
    }
    auto defects = validate_algebra(a);
    if (!defects.empty())
      out.push_back({SystemDefect::Kind::algebra, {i}, "algebra at " + p.name(i) + ": " + defects.front().message});
  }
  if (!out.empty()) return out;
  for (const auto& [key, f] : sys.transitions())
    if (key.first >= p.size() || key.second >= p.size() || !p.le(key.first, key.second))
      out.push_back({SystemDefect::Kind::shape, {key.first, key.second}, "transition declared outside ≤"});

  bool complete = true;
  for (auto [i, j] : p.pairs()) {
    if (!sys.has_transition(i, j)) {
      out.push_back({SystemDefect::Kind::missing, {i, j}, "no transition for " + pair_name(p, i, j)});
      complete = false;
      continue;
    }
    const auto& f = sys.transition(i, j);
    const auto& from = sys.algebra(proj ? j : i);
    const auto& to = sys.algebra(proj ? i : j);
    if (!(f.source() == from) || !(f.target() == to)) {
      out.push_back({SystemDefect::Kind::shape, {i, j}, "transition for " + pair_name(p, i, j) + " has the wrong ends"});
      complete = false;
      continue;
    }
    if (!is_homomorphism(f.mapping(), from, to))
      out.push_back({SystemDefect::Kind::hom, {i, j}, "transition for " + pair_name(p, i, j) + " is not a homomorphism"});
    if (i == j && !(f == Homomorphism::identity(from)))
      out.push_back({SystemDefect::Kind::identity, {i, i}, "transition at " + p.name(i) + " is not the identity"});
  }
  if (!complete) return out;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!p.le(i, j)) continue;
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (!p.le(j, k)) continue;
        // projective: f^{j,i} ∘ f^{k,j} = f^{k,i}; inductive: f^{j,k} ∘ f^{i,j} = f^{i,k}.
        auto lhs = proj ? compose(sys.transition(i, j), sys.transition(j, k))
                        : compose(sys.transition(j, k), sys.transition(i, j));
        if (lhs.tables() != sys.transition(i, k).tables())
          out.push_back({SystemDefect::Kind::composition, {i, j, k},
                         "triangle " + p.name(i) + " ≤ " + p.name(j) + " ≤ " + p.name(k) + " does not commute"});
      }
    }
  return out;
}

template <Variance V>
void require_impl(const System<V>& sys) {
  auto defects = validate_system(sys);
  if (!defects.empty()) throw Error(ErrorKind::invalid_system, defects.front().message);
}

template <Variance V>
System<V> restrict_impl(const System<V>& sys, std::vector<std::size_t> subset) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  auto index = sys.index().restrict(subset);
  std::vector<Algebra> algebras;
  for (auto i : subset) algebras.push_back(sys.algebra(i));
  typename System<V>::Transitions t;
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = 0; b < subset.size(); ++b)
      if (sys.index().le(subset[a], subset[b])) t.emplace(std::make_pair(a, b), sys.transition(subset[a], subset[b]));
  return System<V>(std::move(index), sys.signature_ptr(), std::move(algebras), std::move(t));
}

}  // namespace

std::vector<SystemDefect> validate_system(const ProjectiveSystem& p) { return validate_impl(p); }
std::vector<SystemDefect> validate_system(const InductiveSystem& d) { return validate_impl(d); }
void require_valid(const ProjectiveSystem& p) { require_impl(p); }
void require_valid(const InductiveSystem& d) { require_impl(d); }

ProjectiveSystem restrict_system(const ProjectiveSystem& p, const std::vector<std::size_t>& subset) {
  return restrict_impl(p, subset);
}
InductiveSystem restrict_system(const InductiveSystem& d, const std::vector<std::size_t>& subset) {
  return restrict_impl(d, subset);
}

ProjectiveLimit projective_limit(const ProjectiveSystem& p) {
  const auto& sig = *p.signature_ptr();
  const std::size_t n = p.index().size();
  const std::size_t nsorts = sig.sorts().size();
  ProjectiveLimit out;
  out.threads.resize(nsorts);
  std::vector<std::vector<std::size_t>> codes(nsorts);
  std::vector<MixedRadix> layout;
  std::vector<std::vector<Element>> carriers(nsorts);
  auto pairs = p.index().pairs();
  for (std::size_t s = 0; s < nsorts; ++s) {
    std::vector<std::size_t> radices;
    for (const auto& a : p.algebras()) radices.push_back(a.size(s));
    layout.emplace_back(radices);
    std::vector<ElemIndex> x(n);
    for (std::size_t code = 0; code < layout[s].total(); ++code) {
      layout[s].decode(code, x);
      bool thread = true;
      for (auto [i, j] : pairs)
        if (i != j && p.transition(i, j)(s, x[j]) != x[i]) {
          thread = false;
          break;
        }
      if (!thread) continue;
      codes[s].push_back(code);
      out.threads[s].push_back(x);
      std::vector<Element> parts;
      for (std::size_t i = 0; i < n; ++i) parts.push_back(p.algebra(i).element(s, x[i]));
      carriers[s].push_back(Element::tuple(std::move(parts)));
    }
  }
  SortedSet carrier(sig.sorts(), std::move(carriers));
  std::vector<std::vector<ElemIndex>> tables(sig.op_count());
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& ar = sig.op(k).arity;
    std::vector<std::size_t> radices;
    for (SortIndex s : ar.word) radices.push_back(carrier.size(s));
    MixedRadix lay(radices);
    std::vector<ElemIndex> args(ar.word.size()), member_args(ar.word.size()), result(n);
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t q = 0; q < args.size(); ++q) member_args[q] = out.threads[ar.word[q]][args[q]][i];
        result[i] = p.algebra(i).apply(k, member_args);
      }
      const auto& cs = codes[ar.result];
      auto it = std::lower_bound(cs.begin(), cs.end(), layout[ar.result].encode(result));
      tables[k].push_back(static_cast<ElemIndex>(it - cs.begin()));
    }
  }
  out.apex = Algebra(p.signature_ptr(), std::move(carrier), std::move(tables));
  for (std::size_t i = 0; i < n; ++i) {
    SortedTable t(nsorts);
    for (std::size_t s = 0; s < nsorts; ++s)
      for (const auto& x : out.threads[s]) t[s].push_back(x[i]);
    out.legs.emplace_back(Homomorphism::Unchecked{}, out.apex, p.algebra(i), std::move(t));
  }
  return out;
}

Homomorphism mediating_into_limit(const ProjectiveSystem& p, const ProjectiveLimit& lim,
                                  const Algebra& apex, const std::vector<Homomorphism>& legs) {
  const std::size_t n = p.index().size();
  if (legs.size() != n) throw Error(ErrorKind::not_a_cone, "one leg per index required");
  for (std::size_t i = 0; i < n; ++i)
    if (!(legs[i].source() == apex) || !(legs[i].target() == p.algebra(i)))
      throw Error(ErrorKind::not_a_cone, "leg at " + p.index().name(i) + " has the wrong ends");
  for (auto [i, j] : p.index().pairs())
    if (compose(p.transition(i, j), legs[j]).tables() != legs[i].tables())
      throw Error(ErrorKind::not_a_cone, "legs do not commute with " + pair_name(p.index(), i, j));
  const std::size_t nsorts = apex.carrier().sort_count();
  SortedTable t(nsorts);
  std::vector<ElemIndex> x(n);
  for (std::size_t s = 0; s < nsorts; ++s)
    for (std::size_t m = 0; m < apex.size(s); ++m) {
      for (std::size_t i = 0; i < n; ++i) x[i] = legs[i](s, static_cast<ElemIndex>(m));
      auto it = std::lower_bound(lim.threads[s].begin(), lim.threads[s].end(), x);
      t[s].push_back(static_cast<ElemIndex>(it - lim.threads[s].begin()));
    }
  return Homomorphism(apex, lim.apex, std::move(t));
}

InductiveLimit inductive_limit(const InductiveSystem& d, const UpperBoundChooser& choose) {
  const auto& sig = *d.signature_ptr();
  const auto& p = d.index();
  const std::size_t nsorts = sig.sorts().size();
  InductiveLimit out;
  out.coproduct = coproduct(d.carriers());
  const auto& co = out.coproduct;
  // On a finite directed preorder a top element t exists, and (a,i) Φ (b,j)
  // iff f^{i,t}(a) = f^{j,t}(b): any common upper bound k satisfies k ≤ t.
  const std::size_t top = p.tops().front();

  std::vector<std::vector<ElemIndex>> class_of(nsorts);
  std::vector<std::vector<std::pair<std::size_t, ElemIndex>>> rep(nsorts);
  std::vector<std::vector<Element>> carriers(nsorts);
  out.members.resize(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s) {
    std::vector<ElemIndex> class_at_key(d.algebra(top).size(s), kUnmapped);
    for (std::size_t c = 0; c < co.set.size(s); ++c) {
      auto [i, x] = co.origin[s][c];
      ElemIndex key = d.transition(i, top)(s, x);
      if (class_at_key[key] == kUnmapped) {
        class_at_key[key] = static_cast<ElemIndex>(rep[s].size());
        rep[s].push_back({i, x});
        carriers[s].push_back(co.set.carrier(s)[c]);
        out.members[s].emplace_back();
      }
      class_of[s].push_back(class_at_key[key]);
      out.members[s][class_at_key[key]].push_back(static_cast<ElemIndex>(c));
    }
  }
  SortedSet carrier(sig.sorts(), std::move(carriers));

  std::vector<std::vector<ElemIndex>> tables(sig.op_count());
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& ar = sig.op(k).arity;
    std::vector<std::size_t> radices;
    for (SortIndex s : ar.word) radices.push_back(carrier.size(s));
    MixedRadix lay(radices);
    std::vector<ElemIndex> args(ar.word.size()), pushed(ar.word.size());
    std::vector<std::size_t> tags(ar.word.size());
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      for (std::size_t q = 0; q < args.size(); ++q) tags[q] = rep[ar.word[q]][args[q]].first;
      std::size_t at;
      if (choose) {
        auto ub = p.upper_bounds(tags);
        at = choose(ub);
        if (std::find(ub.begin(), ub.end(), at) == ub.end())
          throw Error(ErrorKind::invalid_argument, "chooser returned a non upper bound");
      } else {
        at = p.canonical_upper_bound(tags);
      }
      for (std::size_t q = 0; q < args.size(); ++q) {
        auto [i, x] = rep[ar.word[q]][args[q]];
        pushed[q] = d.transition(i, at)(ar.word[q], x);
      }
      ElemIndex r = d.algebra(at).apply(k, pushed);
      ElemIndex c = co.injections[at](ar.result, r);
      tables[k].push_back(class_of[ar.result][c]);
    }
  }
  out.apex = Algebra(d.signature_ptr(), std::move(carrier), std::move(tables));
  for (std::size_t i = 0; i < p.size(); ++i) {
    SortedTable t(nsorts);
    for (std::size_t s = 0; s < nsorts; ++s)
      for (ElemIndex c : co.injections[i].table(s)) t[s].push_back(class_of[s][c]);
    out.legs.emplace_back(Homomorphism::Unchecked{}, d.algebra(i), out.apex, std::move(t));
  }
  return out;
}

bool eventually_agree(const InductiveSystem& d, const CoproductSet& c, SortIndex s, ElemIndex x,
                      ElemIndex y) {
  auto [i, a] = c.origin[s][x];
  auto [j, b] = c.origin[s][y];
  const auto& p = d.index();
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p.le(i, k) && p.le(j, k) && d.transition(i, k)(s, a) == d.transition(j, k)(s, b)) return true;
  return false;
}

Homomorphism mediating_from_colimit(const InductiveSystem& d, const InductiveLimit& lim,
                                    const Algebra& apex, const std::vector<Homomorphism>& legs) {
  const auto& p = d.index();
  if (legs.size() != p.size()) throw Error(ErrorKind::not_a_cocone, "one leg per index required");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(legs[i].source() == d.algebra(i)) || !(legs[i].target() == apex))
      throw Error(ErrorKind::not_a_cocone, "leg at " + p.name(i) + " has the wrong ends");
  for (auto [i, j] : p.pairs())
    if (compose(legs[j], d.transition(i, j)).tables() != legs[i].tables())
      throw Error(ErrorKind::not_a_cocone, "legs do not commute with " + pair_name(p, i, j));
  const std::size_t nsorts = apex.carrier().sort_count();
  SortedTable t(nsorts);
  for (std::size_t s = 0; s < nsorts; ++s)
    for (const auto& members : lim.members[s]) {
      auto [i, x] = lim.coproduct.origin[s][members.front()];
      ElemIndex value = legs[i](s, x);
      for (ElemIndex c : members) {
        auto [j, y] = lim.coproduct.origin[s][c];
        if (legs[j](s, y) != value)
          throw Error(ErrorKind::not_a_cocone, "legs disagree on a class of the colimit");
      }
      t[s].push_back(value);
    }
  return Homomorphism(lim.apex, apex, std::move(t));
}

PrunedSystem prune_initial(const InductiveSystem& d) {
  PrunedSystem out;
  for (std::size_t i = 0; i < d.index().size(); ++i)
    if (d.algebra(i).carrier().total_size() > 0) out.kept.push_back(i);
  if (out.kept.empty()) {
    out.system = d;
    out.all_initial = true;
    for (std::size_t i = 0; i < d.index().size(); ++i) out.kept.push_back(i);
    return out;
  }
  out.system = restrict_system(d, out.kept);
  return out;
}

}  // namespace msa
