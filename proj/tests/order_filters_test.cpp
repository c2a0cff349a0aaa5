#include <doctest.h>

#include "msa/error.hpp"
#include "msa/filters.hpp"
#include "oracles.hpp"

using namespace msa;
using oracle::chain;

namespace {

std::vector<IndexSet> sets(std::initializer_list<std::uint64_t> bits) {
  std::vector<IndexSet> out;
  for (auto b : bits) out.emplace_back(b);
  return out;
}

Preorder with_top() {
  return Preorder::closure_of({"a", "b", "t"}, {{"a", "t"}, {"b", "t"}});
}

}  // namespace

TEST_CASE("preorders are validated, never repaired") {
  CHECK_THROWS_AS(Preorder({"a", "b"}, {{"a", "a"}, {"b", "b"}}), Error);  // not directed
  CHECK_THROWS_AS(Preorder({"a", "b"}, {{"a", "b"}}), Error);              // not reflexive
  CHECK_THROWS_AS(Preorder::closure_of({}, {}), Error);
  auto p = Preorder::closure_of({"x", "y"}, {{"x", "y"}, {"y", "x"}});
  CHECK(p.le(0, 1));
  CHECK(p.le(1, 0));
  CHECK(p.tops().size() == 2);
}

TEST_CASE("final_sections_basis") {
  CHECK(final_sections_basis(chain(2)) == sets({0b10, 0b11}));
  auto t = with_top();
  CHECK(t.up(*t.index_of("t")) == IndexSet::single(*t.index_of("t")));
  CHECK(final_sections_basis(Preorder::closure_of({"0"}, {})) == sets({0b1}));

  for (std::size_t n = 1; n <= 4; ++n)
    for (auto j : final_sections_basis(chain(n))) CHECK_FALSE(j.empty());
}

TEST_CASE("filter_from_basis") {
  auto f = filter_from_basis(2, sets({0b10}));
  CHECK(f.members() == sets({0b10, 0b11}));

  auto c3 = final_sections_filter(chain(3));
  CHECK(c3 == principal_filter(3, IndexSet::single(2)));

  CHECK(filter_from_basis(2, sets({0b11})).members() == sets({0b11}));
  CHECK_THROWS_AS(filter_from_basis(2, sets({0b01, 0b10})), Error);
}

TEST_CASE("filter axioms") {
  CHECK(Filter::defect(2, sets({0b11})) == std::nullopt);
  CHECK(Filter::defect(2, sets({0b00, 0b11})).has_value());
  CHECK(Filter::defect(2, sets({0b01})).has_value());
  CHECK(Filter::defect(3, sets({0b011, 0b110, 0b111})).has_value());
  CHECK_THROWS_AS(Filter(2, sets({0b01})), Error);
}

TEST_CASE("is_ultrafilter") {
  CHECK(is_ultrafilter(principal_filter(3, IndexSet::single(1))));
  CHECK_FALSE(is_ultrafilter(principal_filter(2, IndexSet::full(2))));
  CHECK(is_ultrafilter(final_sections_filter(chain(3))));
}

TEST_CASE("ultrafilters_containing") {
  auto u = ultrafilters_containing(final_sections_filter(chain(2)));
  REQUIRE(u.size() == 1);
  CHECK(u[0].point() == 1);

  auto both = ultrafilters_containing(principal_filter(2, IndexSet::full(2)));
  REQUIRE(both.size() == 2);
  CHECK(both[0].point() == 0);
  CHECK(both[1].point() == 1);

  CHECK(ultrafilters_containing(principal_filter(1, IndexSet::full(1))).size() == 1);

  auto t = with_top();
  for (const auto& x : ultrafilters_containing(final_sections_filter(t)))
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(x.contains(t.up(i)));
}

TEST_CASE("ultrafilters_containing matches maximal filters on three points") {
  auto filters = oracle::all_filters(3);
  for (auto f : filters) {
    std::vector<oracle::Family> got;
    for (const auto& u : ultrafilters_containing(oracle::to_filter(3, f))) got.push_back(oracle::family_of(u.filter()));
    std::sort(got.begin(), got.end());
    auto want = oracle::maximal_filters_containing(f, filters);
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("co_optimal_lift") {
  auto u = Ultrafilter::principal(3, 1);
  CHECK(co_optimal_lift(3, {0, 1, 2}, u) == u);
  CHECK(co_optimal_lift(4, {0, 3, 2}, u).point() == 3);

  // functoriality on three points
  std::vector<std::size_t> phi{2, 0, 1}, psi{1, 1, 0};
  std::vector<std::size_t> both{psi[phi[0]], psi[phi[1]], psi[phi[2]]};
  for (std::size_t p = 0; p < 3; ++p) {
    auto x = Ultrafilter::principal(3, p);
    CHECK(co_optimal_lift(3, both, x) == co_optimal_lift(3, psi, co_optimal_lift(3, phi, x)));
    auto lifted = co_optimal_lift(3, phi, x);
    CHECK(is_ultrafilter(lifted.filter()));
    CHECK(oracle::family_of(lifted.filter()) == oracle::image_family(3, phi, 3, oracle::family_of(x.filter())));
  }

  auto c2 = chain(2);
  CHECK(co_optimal_lift(IsotoneMap::identity(c2), Ultrafilter::principal(2, 1)) == Ultrafilter::principal(2, 1));
}

TEST_CASE("uffs_morphism_check") {
  auto c3 = chain(3);
  UffsObject top3{c3, Ultrafilter::principal(3, 2)};
  CHECK(is_uffs_object(top3));
  CHECK(uffs_morphism_check(top3, top3, IsotoneMap::identity(c3)));

  auto low = c3.restrict({0, 1});
  UffsObject low2{low, Ultrafilter::principal(2, 1)};
  auto into = IsotoneMap::inclusion(low, c3);
  CHECK_FALSE(into.is_cofinal());
  CHECK_FALSE(uffs_morphism_check(low2, top3, into));

  auto high = c3.restrict({1, 2});
  UffsObject high2{high, Ultrafilter::principal(2, 1)};
  CHECK(uffs_morphism_check(high2, top3, IsotoneMap::inclusion(high, c3)));

  // an ultrafilter at a non-top point is not an object of Uffs
  CHECK_FALSE(is_uffs_object({c3, Ultrafilter::principal(3, 1)}));
}

TEST_CASE("isotone maps") {
  auto c3 = chain(3);
  CHECK_THROWS_AS(IsotoneMap(c3, c3, {2, 1, 0}), Error);
  auto phi = IsotoneMap(c3, c3, {0, 2, 2});
  CHECK(phi.is_cofinal());
  CHECK_FALSE(phi.is_injective());
  CHECK(compose(phi, phi).table() == std::vector<std::size_t>{0, 2, 2});
  CHECK(phi.image(IndexSet(0b011)) == IndexSet(0b101));
}

TEST_CASE("canonical upper bound") {
  auto t = with_top();
  std::vector<std::size_t> ab{*t.index_of("a"), *t.index_of("b")};
  CHECK(t.canonical_upper_bound(ab) == *t.index_of("t"));
  auto c3 = chain(3);
  std::vector<std::size_t> zero{0};
  CHECK(c3.canonical_upper_bound(zero) == 0);
  CHECK(c3.upper_bounds(zero).size() == 3);
}
