#include <doctest.h>

#include "msa/error.hpp"
#include "msa/isomorphism.hpp"
#include "msa/reduced.hpp"
#include "oracles.hpp"

using namespace msa;
using oracle::sset;
using oracle::unary_alg;
using oracle::unary_sig;

namespace {

AlgebraFamily pair_family() {
  auto sig = unary_sig();
  return {sig, {"0", "1"}, {unary_alg(sig, {"0", "1"}, {1, 0}), unary_alg(sig, {"a", "b", "c"}, {0, 1, 1})}};
}

// supports {s} at 0 and {s,t} at 1, no operations
AlgebraFamily uneven_family() {
  auto bare = std::make_shared<Signature>(std::vector<std::string>{"s", "t"}, std::vector<OpSymbol>{});
  return {bare,
          {"0", "1"},
          {checked_algebra(bare, sset({"s", "t"}, {{"a"}, {}}), {}),
           checked_algebra(bare, sset({"s", "t"}, {{"a"}, {"b"}}), {})}};
}

}  // namespace

TEST_CASE("reduced_product_system") {
  auto fam = pair_family();
  auto trivial = reduced_product_system(fam, principal_filter(2, IndexSet::full(2)));
  CHECK(trivial.members.size() == 1);
  CHECK(validate_system(trivial.system).empty());

  auto at1 = reduced_product_system(fam, principal_filter(2, IndexSet::single(1)));
  REQUIRE(at1.members.size() == 2);
  CHECK(validate_system(at1.system).empty());
  auto full = at1.position(IndexSet::full(2));
  auto one = at1.position(IndexSet::single(1));
  CHECK(at1.order.le(full, one));
  const auto& drop = at1.system.transition(full, one);
  const auto& pr1 = at1.products[full].projections[1];
  CHECK(drop.tables() == pr1.tables());
  CHECK(at1.products[one].algebra.size(0) == 3);
  CHECK_THROWS_AS(at1.position(IndexSet::single(0)), Error);

  auto wrong = AlgebraFamily{fam.sig, {"0"}, {fam.members[0]}};
  CHECK_THROWS_AS(reduced_product_system(wrong, principal_filter(2, IndexSet::full(2))), Error);
}

TEST_CASE("filter_congruence") {
  auto fam = pair_family();
  auto full = subproduct(fam, IndexSet::full(2));
  auto eq = filter_congruence(full, principal_filter(2, IndexSet::full(2)));
  CHECK(eq.relation() == SortedEquivalence::discrete(full.algebra.carrier()));

  auto at1 = filter_congruence(full, principal_filter(2, IndexSet::single(1)));
  for (ElemIndex x = 0; x < full.algebra.size(0); ++x)
    for (ElemIndex y = 0; y < full.algebra.size(0); ++y) {
      CHECK(at1.relation().related(0, x, y) == (full.projections[1](0, x) == full.projections[1](0, y)));
      CHECK(equalizer_set(full, 0, x, x) == IndexSet::full(2));
    }
}

TEST_CASE("prop28_check") {
  auto fam = pair_family();
  auto whole = prop28_check(fam, IndexSet::full(2));
  CHECK(whole.constant_support);
  CHECK(whole.iso.found());
  auto one = prop28_check(fam, IndexSet::single(1));
  CHECK(one.iso.found());
  CHECK(find_isomorphism(one.iso.right, fam.members[1]).has_value());
  CHECK(one.consistent);

  // recorded, not asserted
  auto uneven = prop28_check(uneven_family(), IndexSet::single(1));
  CHECK_FALSE(uneven.constant_support);
  CHECK_FALSE(uneven.iso.found());
  CHECK(uneven.consistent);
}

TEST_CASE("prop29_check and ultraproduct_check") {
  auto sig = unary_sig();
  auto a = unary_alg(sig, {"0", "1"}, {1, 0});
  AlgebraFamily single{sig, {"0"}, {a}};
  auto s = ultraproduct_check(single, Ultrafilter::principal(1, 0));
  CHECK(s.iso.found());
  CHECK(find_isomorphism(s.iso.left, a).has_value());

  // chain of two with the ultrafilter at 1: both sides ≅ A^1
  auto fam = pair_family();
  auto u = ultraproduct_check(fam, Ultrafilter::principal(2, 1));
  CHECK(u.ultra);
  CHECK(u.constant_support);
  CHECK(u.remark_condition);
  CHECK(u.iso.found());
  CHECK(find_isomorphism(u.iso.left, fam.members[1]).has_value());
  CHECK(find_isomorphism(u.iso.right, fam.members[1]).has_value());
  CHECK(u.consistent);

  auto f = prop29_check(fam, principal_filter(2, IndexSet::full(2)));
  CHECK_FALSE(f.ultra);
  CHECK(f.iso.found());

  // the remark condition holds without constant support, so the converse
  // rules out an isomorphism
  auto v = prop29_check(uneven_family(), principal_filter(2, IndexSet::single(1)));
  CHECK_FALSE(v.constant_support);
  CHECK(v.remark_condition);
  CHECK_FALSE(v.iso.found());
  CHECK(v.consistent);
}

TEST_CASE("support equivalence along the filter") {
  // constant support iff supp A^i = supp A(J) for every i and J ∈ F
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_sorts = 3;
    cfg.max_index = 4;
    cfg.inject_support_violation = seed % 2 == 1;
    cfg.force_constant_support = !cfg.inject_support_violation;
    Generator g(cfg);
    auto sig = g.signature(cfg.inject_support_violation ? 2 : 1);
    if (cfg.inject_support_violation && !g.violation_possible(*sig)) continue;
    auto idx = g.index(cfg.inject_support_violation);
    auto sys = g.projective_system(sig, idx);
    auto fam = family_of(sys);
    auto f = final_sections_filter(idx);
    bool all_equal = true;
    for (auto j : f.members()) {
      auto sj = support(subproduct(fam, j).algebra.carrier());
      for (const auto& m : fam.members) all_equal = all_equal && support(m.carrier()) == sj;
    }
    CHECK(all_equal == constant_support(fam.carriers()));
    CHECK(all_equal == !cfg.inject_support_violation);
  }
}
