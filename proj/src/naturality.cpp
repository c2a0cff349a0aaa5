#include "msa/naturality.hpp"

#include <algorithm>

namespace msa {

namespace {

std::string corner(const Preorder& p, std::size_t i, std::size_t j) { return "(" + p.name(i) + "," + p.name(j) + ")"; }

void check_equal(Verdict& v, const std::string& what, const Homomorphism& f, const Homomorphism& g) {
  if (auto d = first_difference(f, g)) v.fail(what + ": " + *d);
}

template <typename Body>
Verdict guarded(std::string name, Body body) {
  Verdict v{std::move(name), true, {}};
  try {
    body(v);
  } catch (const VoteFailure& e) {
    v.fail(e.detail());
  } catch (const Error& e) {
    v.fail(e.what());
  }
  return v;
}

}  // namespace

std::vector<std::string> system_morphism_defects(const SystemMorphism& u) {
  std::vector<std::string> out;
  const auto& p = u.source.index();
  if (!(p == u.target.index())) return {"source and target systems have different indices"};
  if (u.components.size() != p.size()) return {"one component per index required"};
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(u.components[i].source() == u.source.algebra(i)) || !(u.components[i].target() == u.target.algebra(i)))
      out.push_back("component at " + p.name(i) + " has the wrong ends");
  if (!out.empty()) return out;
  for (auto [i, j] : p.pairs()) {
    auto left = compose(u.target.transition(i, j), u.components[j]);
    auto right = compose(u.components[i], u.source.transition(i, j));
    if (auto d = first_difference(left, right)) out.push_back("square at " + corner(p, i, j) + " fails, " + *d);
  }
  return out;
}

void require_system_morphism(const SystemMorphism& u) {
  auto d = system_morphism_defects(u);
  if (!d.empty()) throw Error(ErrorKind::not_a_system_morphism, d.front());
}

SystemMorphism identity_morphism(const ProjectiveSystem& a) {
  SystemMorphism u{a, a, {}};
  for (const auto& x : a.algebras()) u.components.push_back(Homomorphism::identity(x));
  return u;
}

SystemMorphism diagonal_morphism(const ProjectiveSystem& a) {
  const auto& p = a.index();
  std::vector<ProductAlgebra> squares;
  std::vector<Algebra> members;
  for (const auto& x : a.algebras()) {
    squares.push_back(product_algebra(a.signature_ptr(), {"l", "r"}, {x, x}));
    members.push_back(squares.back().algebra);
  }
  ProjectiveSystem::Transitions t;
  const std::size_t nsorts = a.signature_ptr()->sorts().size();
  for (auto [i, j] : p.pairs()) {
    const auto& f = a.transition(i, j);
    SortedTable m(nsorts);
    for (std::size_t s = 0; s < nsorts; ++s)
      for (std::size_t code = 0; code < members[j].size(s); ++code) {
        auto xy = squares[j].layout[s].decode(code);
        std::vector<ElemIndex> img{f(s, xy[0]), f(s, xy[1])};
        m[s].push_back(static_cast<ElemIndex>(squares[i].layout[s].encode(img)));
      }
    t.emplace(std::make_pair(i, j), Homomorphism(members[j], members[i], std::move(m)));
  }
  SystemMorphism u{a, ProjectiveSystem(p, a.signature_ptr(), members, std::move(t)), {}};
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto id = Homomorphism::identity(a.algebra(i));
    u.components.push_back(tupling(squares[i], a.algebra(i), {id, id}));
  }
  return u;
}

SystemMorphism collapse_morphism(const ProjectiveSystem& a) {
  const auto& p = a.index();
  std::vector<QuotientAlgebra> qs;
  std::vector<Algebra> members;
  for (const auto& x : a.algebras()) {
    qs.push_back(quotient_algebra(Congruence(x, SortedEquivalence::total(x.carrier()))));
    members.push_back(qs.back().algebra);
  }
  ProjectiveSystem::Transitions t;
  const std::size_t nsorts = a.signature_ptr()->sorts().size();
  for (auto [i, j] : p.pairs()) {
    SortedTable m(nsorts);
    for (std::size_t s = 0; s < nsorts; ++s) m[s].assign(members[j].size(s), 0);
    t.emplace(std::make_pair(i, j), Homomorphism(members[j], members[i], std::move(m)));
  }
  SystemMorphism u{a, ProjectiveSystem(p, a.signature_ptr(), members, std::move(t)), {}};
  for (const auto& q : qs) u.components.push_back(q.projection);
  return u;
}

Homomorphism limit_map(const SystemMorphism& u, const ProjectiveLimit& la, const ProjectiveLimit& lb) {
  std::vector<Homomorphism> legs;
  for (std::size_t i = 0; i < u.components.size(); ++i) legs.push_back(compose(u.components[i], la.legs[i]));
  return mediating_into_limit(u.target, lb, la.apex, legs);
}

Homomorphism product_map(const SystemMorphism& u, IndexSet j, const ProductAlgebra& aj, const ProductAlgebra& bj) {
  auto js = j.elements();
  std::vector<Homomorphism> legs;
  for (std::size_t q = 0; q < js.size(); ++q) legs.push_back(compose(u.components[js[q]], aj.projections[q]));
  return tupling(bj, aj.algebra, legs);
}

Homomorphism colimit_map(const SystemMorphism& u, const RetractionInstance& a, const RetractionInstance& b) {
  const auto& ra = a.reduced();
  const auto& rb = b.reduced();
  std::vector<Homomorphism> legs;
  for (std::size_t k = 0; k < ra.members.size(); ++k) {
    auto j = ra.members[k];
    auto kb = rb.position(j);
    legs.push_back(compose(b.colimit().legs[kb], product_map(u, j, ra.products[k], rb.products[kb])));
  }
  return mediating_from_colimit(ra.system, a.colimit(), b.colimit().apex, legs);
}

Verdict naturality_check(const NaturalitySuiteInput& input) {
  require_system_morphism(input.u);
  const auto& a = input.a;
  const auto& b = input.b;
  return guarded("naturality", [&](Verdict& v) {
    if (!(a.ultra() == b.ultra())) {
      v.fail("the two instances use different ultrafilters");
      return;
    }
    auto ha = retraction_hom(a);
    auto hb = retraction_hom(b);
    auto left = compose(limit_map(input.u, a.limit(), b.limit()), ha);
    auto right = compose(hb, colimit_map(input.u, a, b));
    check_equal(v, "lim u ∘ h_A ≠ h_B ∘ colim u(J)", left, right);
    const auto full = IndexSet::full(a.index().size());
    const auto& pI = a.colimit().legs[a.reduced().position(full)];
    check_equal(v, "h ∘ p^I ∘ in ≠ id", compose(ha, compose(pI, limit_embedding(a))),
                Homomorphism::identity(a.limit().apex));
  });
}

ProjectiveSystem reindex_system(const IsotoneMap& phi, const ProjectiveSystem& a) {
  if (!(phi.target() == a.index())) throw Error(ErrorKind::invalid_argument, "map does not land on the system's index");
  const auto& src = phi.source();
  std::vector<Algebra> members;
  for (std::size_t i = 0; i < src.size(); ++i) members.push_back(a.algebra(phi(i)));
  ProjectiveSystem::Transitions t;
  for (auto [i, j] : src.pairs()) t.emplace(std::make_pair(i, j), a.transition(phi(i), phi(j)));
  return ProjectiveSystem(src, a.signature_ptr(), std::move(members), std::move(t));
}

Reindexed reindex(const IsotoneMap& phi, const Ultrafilter& source_ultra, const RetractionInstance& a) {
  UffsObject from{phi.source(), source_ultra};
  UffsObject to{a.index(), a.ultra()};
  if (!is_uffs_object(from) || !uffs_morphism_check(from, to, phi))
    throw Error(ErrorKind::invalid_argument, "not a Uffs morphism onto the instance's ultrafilter");
  auto sys = reindex_system(phi, a.system());
  auto inst = a.constant_support() ? RetractionInstance::make(std::move(sys), source_ultra)
                                   : RetractionInstance::unchecked(std::move(sys), source_ultra);
  return {phi, a, std::move(inst)};
}

Homomorphism p_phi(const Reindexed& r) {
  const auto& lp = r.over_target.limit();
  std::vector<Homomorphism> legs;
  for (std::size_t i = 0; i < r.phi.source().size(); ++i) legs.push_back(lp.legs[r.phi(i)]);
  return mediating_into_limit(r.over_source.system(), r.over_source.limit(), lp.apex, legs);
}

Homomorphism retag(const Reindexed& r, IndexSet j) {
  const auto& from = r.over_source.reduced().products[r.over_source.reduced().position(j)];
  auto image = r.phi.image(j);
  const auto& to = r.over_target.reduced().products[r.over_target.reduced().position(image)];
  auto js = j.elements();
  auto ks = image.elements();
  std::vector<std::size_t> slot(ks.size());
  for (std::size_t q = 0; q < js.size(); ++q)
    slot[static_cast<std::size_t>(std::find(ks.begin(), ks.end(), r.phi(js[q])) - ks.begin())] = q;
  const std::size_t nsorts = from.layout.size();
  SortedTable t(nsorts);
  std::vector<ElemIndex> digits(js.size()), moved(ks.size());
  for (std::size_t s = 0; s < nsorts; ++s)
    for (std::size_t code = 0; code < from.algebra.size(s); ++code) {
      from.layout[s].decode(code, digits);
      for (std::size_t q = 0; q < ks.size(); ++q) moved[q] = digits[slot[q]];
      t[s].push_back(static_cast<ElemIndex>(to.layout[s].encode(moved)));
    }
  return Homomorphism(from.algebra, to.algebra, std::move(t));
}

Homomorphism q_phi(const Reindexed& r) {
  const auto& ri = r.over_source.reduced();
  const auto& rp = r.over_target.reduced();
  std::vector<Homomorphism> legs;
  for (auto j : ri.members)
    legs.push_back(compose(r.over_target.colimit().legs[rp.position(r.phi.image(j))], retag(r, j)));
  return mediating_from_colimit(ri.system, r.over_source.colimit(), r.over_target.colimit().apex, legs);
}

Verdict cylinder_check(const Reindexed& r) {
  return guarded("cylinder", [&](Verdict& v) {
    const auto& src = r.phi.source();
    auto p = p_phi(r);
    auto q = q_phi(r);
    for (std::size_t i = 0; i < src.size(); ++i)
      check_equal(v, "f^{φ," + src.name(i) + "} ∘ 𝔭 ≠ f^{φ(i)}", compose(r.over_source.limit().legs[i], p),
                  r.over_target.limit().legs[r.phi(i)]);
    const auto& ri = r.over_source.reduced();
    const auto& rp = r.over_target.reduced();
    for (std::size_t k = 0; k < ri.members.size(); ++k) {
      auto j = ri.members[k];
      check_equal(v, "𝔮 ∘ p^J ≠ p^{φ[J]} at J=" + subset_name(src, j), compose(q, r.over_source.colimit().legs[k]),
                  compose(r.over_target.colimit().legs[rp.position(r.phi.image(j))], retag(r, j)));
    }
    auto lhs = retraction_hom(r.over_source);
    auto rhs = compose(p, compose(retraction_hom(r.over_target), q));
    check_equal(v, "h^{(I,F_I)} at A^φ ≠ 𝔭 ∘ h^{(P,F_P)} ∘ 𝔮", lhs, rhs);
  });
}

Verdict composition_check(const IsotoneMap& phi, const IsotoneMap& psi, const Ultrafilter& source_ultra,
                          const RetractionInstance& a) {
  return guarded("composition", [&](Verdict& v) {
    auto mid_ultra = co_optimal_lift(phi, source_ultra);
    auto r_psi = reindex(psi, mid_ultra, a);
    auto r_phi = reindex(phi, source_ultra, r_psi.over_source);
    auto r_comp = reindex(compose(psi, phi), source_ultra, a);
    if (!(r_phi.over_source.system() == r_comp.over_source.system()))
      v.fail("(A^ψ)^φ differs from A^{ψ∘φ}");

    auto p_comp = p_phi(r_comp);
    auto q_comp = q_phi(r_comp);
    auto pf = p_phi(r_phi), ps = p_phi(r_psi);
    auto qf = q_phi(r_phi), qs = q_phi(r_psi);
    check_equal(v, "𝔭^{ψ∘φ} ≠ 𝔭^φ_{A^ψ} ∘ 𝔭^ψ", p_comp, compose(pf, ps));
    check_equal(v, "𝔮^{ψ∘φ} ≠ 𝔮^ψ ∘ 𝔮^φ_{A^ψ}", q_comp, compose(qs, qf));

    auto hw = retraction_hom(a);
    auto step1 = compose(p_comp, compose(hw, q_comp));
    auto step2 = compose(pf, compose(compose(ps, compose(hw, qs)), qf));
    auto step3 = compose(pf, compose(retraction_hom(r_psi.over_source), qf));
    auto step4 = retraction_hom(r_comp.over_source);
    check_equal(v, "𝔭^{ψ∘φ}∘h^W∘𝔮^{ψ∘φ} ≠ 𝔭^φ∘(𝔭^ψ∘h^W∘𝔮^ψ)∘𝔮^φ", step1, step2);
    check_equal(v, "𝔭^φ∘(𝔭^ψ∘h^W∘𝔮^ψ)∘𝔮^φ ≠ 𝔭^φ∘h^P∘𝔮^φ at A^ψ", step2, step3);
    check_equal(v, "𝔭^φ∘h^P∘𝔮^φ at A^ψ ≠ h^I at A^{ψ∘φ}", step3, step4);
  });
}

std::vector<IsotoneMap> subset_inclusions(const Preorder& p, std::size_t point) {
  std::vector<IsotoneMap> out{IsotoneMap::identity(p)};
  const std::uint64_t n = p.size();
  for (std::uint64_t bits = 1; bits + 1 < (std::uint64_t{1} << n); ++bits) {
    IndexSet s(bits);
    if (!s.contains(point)) continue;
    auto sub = p.restrict(s.elements());
    out.push_back(IsotoneMap::inclusion(sub, p));
  }
  return out;
}

}  // namespace msa
