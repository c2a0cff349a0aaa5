#include "msa/retraction.hpp"

#include <algorithm>

namespace msa {

namespace {

const ProductAlgebra& product_at(const RetractionInstance& inst, IndexSet j) {
  return inst.reduced().products[inst.reduced().position(j)];
}

IndexSet full_set(const RetractionInstance& inst) { return IndexSet::full(inst.index().size()); }

}  // namespace

VoteFailure::VoteFailure(std::string reason, const Preorder& p, IndexSet j, std::size_t i, std::string sort,
                         std::string x, std::vector<Tally> tally)
    : Error(ErrorKind::vote_failure, reason),
      j_(j),
      i_(i),
      sort_(std::move(sort)),
      x_(std::move(x)),
      tally_(std::move(tally)) {
  detail_ = reason + " at J=" + subset_name(p, j_) + ", i=" + p.name(i_) + ", sort " + sort_ + ", x=" + x_;
  for (const auto& t : tally_)
    detail_ += "; " + t.candidate + " <- " + subset_name(p, t.votes) + (t.in_filter ? " (in F)" : "");
}

RetractionInstance RetractionInstance::build(ProjectiveSystem system, Ultrafilter ultra, bool require_support) {
  require_valid(system);
  const auto& p = system.index();
  if (ultra.ground_size() != p.size())
    throw Error(ErrorKind::ground_mismatch, "ultrafilter ground differs from the index");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!ultra.contains(p.up(i)))
      throw Error(ErrorKind::hypothesis_violation, "the ultrafilter misses the final section of " + p.name(i));
  auto data = std::make_shared<Data>();
  data->constant_support = msa::constant_support(system.carriers());
  if (require_support && !data->constant_support)
    throw Error(ErrorKind::hypothesis_violation, "the family of algebras does not have constant support");
  data->family = family_of(system);
  data->limit = projective_limit(system);
  data->reduced = reduced_product_system(data->family, ultra.filter());
  data->colimit = reduced_product(data->reduced);
  data->system = std::move(system);
  data->ultra = std::move(ultra);
  RetractionInstance out;
  out.data_ = std::move(data);
  return out;
}

RetractionInstance RetractionInstance::make(ProjectiveSystem system, Ultrafilter ultra) {
  return build(std::move(system), std::move(ultra), true);
}

RetractionInstance RetractionInstance::unchecked(ProjectiveSystem system, Ultrafilter ultra) {
  return build(std::move(system), std::move(ultra), false);
}

IndexSet vote_set(const RetractionInstance& inst, IndexSet j, std::size_t i, SortIndex s, ElemIndex x,
                  ElemIndex y) {
  const auto& sys = inst.system();
  if (sys.algebra(i).size(s) == 0)
    throw Error(ErrorKind::sort_not_supported, "sort " + sys.signature_ptr()->sorts()[s] +
                                                   " is empty at " + inst.index().name(i));
  const auto& prod = product_at(inst, j);
  auto xs = prod.layout[s].decode(x);
  auto js = j.elements();
  IndexSet out;
  for (std::size_t q = 0; q < js.size(); ++q)
    if (inst.index().le(i, js[q]) && sys.transition(i, js[q])(s, xs[q]) == y) out = out.with(js[q]);
  return out;
}

Homomorphism h_Ji(const RetractionInstance& inst, IndexSet j, std::size_t i) {
  const auto& sys = inst.system();
  const auto& p = inst.index();
  const auto& prod = product_at(inst, j);
  const auto& target = sys.algebra(i);
  const auto& sorts = sys.signature_ptr()->sorts();
  const auto& f = inst.ultra().filter();
  auto js = j.elements();
  SortedTable t(sorts.size());
  std::vector<ElemIndex> xs(js.size());
  for (SortIndex s = 0; s < sorts.size(); ++s) {
    const std::size_t nx = prod.algebra.size(s), ny = target.size(s);
    if ((nx == 0) != (ny == 0)) {
      std::string x = nx ? prod.algebra.element(s, 0).str() : "-";
      throw VoteFailure("the supports of A(J) and A^i differ", p, j, i, sorts[s], x, {});
    }
    std::vector<IndexSet> votes(ny);
    for (std::size_t x = 0; x < nx; ++x) {
      prod.layout[s].decode(x, xs);
      std::fill(votes.begin(), votes.end(), IndexSet{});
      for (std::size_t q = 0; q < js.size(); ++q)
        if (p.le(i, js[q])) {
          auto y = sys.transition(i, js[q])(s, xs[q]);
          votes[y] = votes[y].with(js[q]);
        }
      ElemIndex chosen = kUnmapped;
      std::size_t winners = 0;
      for (std::size_t y = 0; y < ny; ++y)
        if (f.contains(votes[y])) {
          chosen = static_cast<ElemIndex>(y);
          ++winners;
        }
      if (winners != 1) {
        std::vector<VoteFailure::Tally> tally;
        for (std::size_t y = 0; y < ny; ++y)
          tally.push_back({target.element(s, static_cast<ElemIndex>(y)).str(), votes[y], f.contains(votes[y])});
        throw VoteFailure(winners ? "several vote sets lie in F" : "no vote set lies in F", p, j, i, sorts[s],
                          prod.algebra.element(s, static_cast<ElemIndex>(x)).str(), std::move(tally));
      }
      t[s].push_back(chosen);
    }
  }
  return Homomorphism(prod.algebra, target, std::move(t));
}

bool h_Ji_compatibility_check(const RetractionInstance& inst, IndexSet j, IndexSet k, std::size_t i) {
  if (!j.subset_of(k)) throw Error(ErrorKind::invalid_argument, "compatibility needs K ⊇ J");
  const auto& r = inst.reduced();
  const auto& pkj = r.system.transition(r.position(k), r.position(j));
  return compose(h_Ji(inst, j, i), pkj).tables() == h_Ji(inst, k, i).tables();
}

Homomorphism h_i(const RetractionInstance& inst, std::size_t i) {
  const auto& r = inst.reduced();
  std::vector<Homomorphism> legs;
  for (auto j : r.members) legs.push_back(h_Ji(inst, j, i));
  return mediating_from_colimit(r.system, inst.colimit(), inst.system().algebra(i), legs);
}

bool transition_coherence_check(const RetractionInstance& inst, std::size_t i, std::size_t k) {
  if (!inst.index().le(i, k)) throw Error(ErrorKind::invalid_argument, "coherence needs i ≤ k");
  return compose(inst.system().transition(i, k), h_i(inst, k)).tables() == h_i(inst, i).tables();
}

Homomorphism retraction_hom(const RetractionInstance& inst) {
  std::vector<Homomorphism> legs;
  for (std::size_t i = 0; i < inst.index().size(); ++i) legs.push_back(h_i(inst, i));
  return mediating_into_limit(inst.system(), inst.limit(), inst.colimit().apex, legs);
}

Homomorphism limit_embedding(const RetractionInstance& inst) {
  return tupling(product_at(inst, full_set(inst)), inst.limit().apex, inst.limit().legs);
}

Homomorphism quotient_to_colimit(const RetractionInstance& inst, const Congruence& eq) {
  const auto& r = inst.reduced();
  return factor_hom(inst.colimit().legs[r.position(full_set(inst))], eq);
}

Verdict retraction_check(const RetractionInstance& inst) {
  Verdict v{"retraction", true, {}};
  const auto& p = inst.index();
  const auto full = full_set(inst);
  try {
    const auto& prod = product_at(inst, full);
    auto eq = filter_congruence(prod, inst.ultra().filter());
    auto q = quotient_algebra(eq);
    auto iso = quotient_to_colimit(inst, eq);
    if (!iso.is_injective() || !iso.is_surjective()) v.fail("∏ A^i/≡F → colim A(F) is not bijective");
    auto h = retraction_hom(inst);
    auto in = limit_embedding(inst);
    auto back = compose(h, compose(iso, compose(q.projection, in)));
    if (auto d = first_difference(back, Homomorphism::identity(inst.limit().apex)))
      v.fail("h∘pr∘in differs from the identity: " + *d);

    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto& fi = inst.limit().legs[i];
      if (auto d = first_difference(compose(h_Ji(inst, full, i), in), fi))
        v.fail("h^{I," + p.name(i) + "}∘in differs from f^" + p.name(i) + ": " + *d);
      if (auto d = first_difference(compose(prod.projections[i], in), fi))
        v.fail("pr^{I," + p.name(i) + "}∘in differs from f^" + p.name(i) + ": " + *d);
    }
    const auto& threads = inst.limit().threads;
    for (SortIndex s = 0; s < threads.size(); ++s)
      for (std::size_t x = 0; x < threads[s].size(); ++x) {
        ElemIndex code = in(s, static_cast<ElemIndex>(x));
        for (std::size_t i = 0; i < p.size(); ++i)
          if (vote_set(inst, full, i, s, code, threads[s][x][i]) != p.up(i))
            v.fail("V^{I," + p.name(i) + "}(in(x), x_i) is not ↑" + p.name(i) + " at thread " +
                   inst.limit().apex.element(s, static_cast<ElemIndex>(x)).str());
      }
  } catch (const VoteFailure& e) {
    v.fail(e.detail());
  } catch (const Error& e) {
    v.fail(e.what());
  }
  return v;
}

Verdict vote_structure_check(const RetractionInstance& inst) {
  Verdict v{"votes", true, {}};
  const auto& p = inst.index();
  const auto& sys = inst.system();
  const auto& r = inst.reduced();
  const auto& f = inst.ultra().filter();
  try {
    for (auto j : r.members)
      for (std::size_t i = 0; i < p.size(); ++i) {
        auto h = h_Ji(inst, j, i);
        if (!is_homomorphism(h.mapping(), h.source(), h.target()))
          v.fail("h^{" + subset_name(p, j) + "," + p.name(i) + "} is not a homomorphism");
        const auto& prod = product_at(inst, j);
        for (SortIndex s = 0; s < sys.signature_ptr()->sorts().size(); ++s) {
          if (sys.algebra(i).size(s) == 0) continue;
          for (std::size_t x = 0; x < prod.algebra.size(s); ++x) {
            IndexSet seen;
            std::size_t in_f = 0;
            ElemIndex winner = kUnmapped;
            bool disjoint = true;
            for (std::size_t y = 0; y < sys.algebra(i).size(s); ++y) {
              auto vs = vote_set(inst, j, i, s, static_cast<ElemIndex>(x), static_cast<ElemIndex>(y));
              disjoint = disjoint && (vs & seen).empty();
              seen = seen | vs;
              if (f.contains(vs)) {
                ++in_f;
                winner = static_cast<ElemIndex>(y);
              }
            }
            std::string at = " at J=" + subset_name(p, j) + ", i=" + p.name(i) + ", x=" +
                             prod.algebra.element(s, static_cast<ElemIndex>(x)).str();
            if (!disjoint || seen != (j & p.up(i))) v.fail("vote sets do not partition J∩↑i" + at);
            if (in_f != 1) v.fail(std::to_string(in_f) + " vote sets lie in F" + at);
            else if (h(s, static_cast<ElemIndex>(x)) != winner) v.fail("h^{J,i} disagrees with the vote" + at);
          }
        }
      }
    for (auto j : r.members)
      for (auto k : r.members)
        if (j.subset_of(k))
          for (std::size_t i = 0; i < p.size(); ++i)
            if (!h_Ji_compatibility_check(inst, j, k, i))
              v.fail("h^{J,i}∘p^{K,J} ≠ h^{K,i} for J=" + subset_name(p, j) + ", K=" + subset_name(p, k) +
                     ", i=" + p.name(i));
    for (auto [i, k] : p.pairs())
      if (!transition_coherence_check(inst, i, k))
        v.fail("f^{k,i}∘h^k ≠ h^i for i=" + p.name(i) + ", k=" + p.name(k));
  } catch (const VoteFailure& e) {
    v.fail(e.detail());
  } catch (const Error& e) {
    v.fail(e.what());
  }
  return v;
}

Verdict degenerate_shape_check(const RetractionInstance& inst) {
  Verdict v{"degenerate-shape", true, {}};
  const auto& p = inst.index();
  const std::size_t pt = inst.ultra().point();
  const auto full = full_set(inst);
  try {
    const auto& prod = product_at(inst, full);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!p.le(i, pt)) {
        v.fail("the principal point " + p.name(pt) + " is not above " + p.name(i));
        continue;
      }
      auto shortcut = compose(inst.system().transition(i, pt), prod.projections[pt]);
      if (auto d = first_difference(h_Ji(inst, full, i), shortcut))
        v.fail("h^{I," + p.name(i) + "} ≠ f^{p,i}∘pr^{I,p}: " + *d);
    }
  } catch (const VoteFailure& e) {
    v.fail(e.detail());
  } catch (const Error& e) {
    v.fail(e.what());
  }
  return v;
}

}  // namespace msa
