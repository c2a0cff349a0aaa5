#include <doctest.h>

#include "msa/error.hpp"
#include "msa/retraction.hpp"
#include "oracles.hpp"

using namespace msa;
using oracle::chain;
using oracle::unary_alg;
using oracle::unary_sig;

namespace {

constexpr IndexSet kI{0b11};
constexpr IndexSet kUp1{0b10};

// (x0, x1) as an element of A(I) in CHAIN2
ElemIndex pair(const RetractionInstance& inst, ElemIndex x0, ElemIndex x1) {
  const auto& r = inst.reduced();
  std::vector<ElemIndex> xs{x0, x1};
  return static_cast<ElemIndex>(r.products[r.position(kI)].layout[0].encode(xs));
}

RetractionInstance seeded_chain3(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.force_constant_support = true;
  Generator g(cfg);
  auto sig = g.signature();
  return RetractionInstance::make(g.projective_system(sig, chain(3)), Ultrafilter::principal(3, 2));
}

// A two-sort system over 0 ≤ 1 whose member at 0 has an empty sort.
ProjectiveSystem uneven_system() {
  auto bare = std::make_shared<Signature>(std::vector<std::string>{"s", "t"}, std::vector<OpSymbol>{});
  auto low = checked_algebra(bare, oracle::sset({"s", "t"}, {{"a"}, {"b"}}), {});
  auto high = checked_algebra(bare, oracle::sset({"s", "t"}, {{"a"}, {}}), {});
  ProjectiveSystem::Transitions t;
  t.emplace(std::pair{0, 0}, Homomorphism::identity(low));
  t.emplace(std::pair{1, 1}, Homomorphism::identity(high));
  t.emplace(std::pair{0, 1}, Homomorphism(high, low, {{0}, {}}));
  return ProjectiveSystem(chain(2), bare, {low, high}, t);
}

}  // namespace

TEST_CASE("vote_set on CHAIN2") {
  oracle::Chain2 c;
  auto x = pair(c.inst, 0, 1);
  CHECK(vote_set(c.inst, kI, 0, 0, x, 1) == IndexSet(0b10));
  CHECK(vote_set(c.inst, kI, 0, 0, x, 0) == IndexSet(0b01));
  for (ElemIndex y = 0; y < 2; ++y)
    for (ElemIndex z = 0; z < 2; ++z)
      if (y != z) CHECK((vote_set(c.inst, kI, 0, 0, x, y) & vote_set(c.inst, kI, 0, 0, x, z)).empty());
  CHECK_THROWS_AS(vote_set(c.inst, IndexSet(0b01), 0, 0, 0, 0), Error);
}

TEST_CASE("vote_set needs a supported sort") {
  auto bare = std::make_shared<Signature>(std::vector<std::string>{"s", "t"}, std::vector<OpSymbol>{});
  auto a = checked_algebra(bare, oracle::sset({"s", "t"}, {{"a"}, {}}), {});
  auto inst = RetractionInstance::make(oracle::constant_system(chain(2), a), Ultrafilter::principal(2, 1));
  try {
    vote_set(inst, kI, 0, 1, 0, 0);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::sort_not_supported);
  }
}

TEST_CASE("h_Ji on CHAIN2") {
  oracle::Chain2 c;
  auto x = pair(c.inst, 0, 1);
  auto h0 = h_Ji(c.inst, kI, 0);
  auto h1 = h_Ji(c.inst, kI, 1);
  CHECK(h0(0, x) == 1);
  CHECK(h1(0, x) == 1);
  CHECK(is_homomorphism(h0.mapping(), h0.source(), h0.target()));
  CHECK(h_Ji(c.inst, kUp1, 1).tables() == Homomorphism::identity(c.a).tables());
}

TEST_CASE("h_Ji compatibility") {
  oracle::Chain2 c;
  CHECK(h_Ji_compatibility_check(c.inst, kI, kI, 0));
  CHECK(h_Ji_compatibility_check(c.inst, kUp1, kI, 1));
  CHECK(h_Ji_compatibility_check(c.inst, kUp1, kI, 0));
  auto s = seeded_chain3(3);
  const auto& f = s.reduced();
  for (auto j : f.members)
    for (auto k : f.members)
      if (j.subset_of(k))
        for (std::size_t i = 0; i < 3; ++i) CHECK(h_Ji_compatibility_check(s, j, k, i));
}

TEST_CASE("h_i factors every h_Ji through the colimit") {
  auto check = [](const RetractionInstance& inst) {
    const auto& r = inst.reduced();
    for (std::size_t i = 0; i < inst.index().size(); ++i) {
      auto hi = h_i(inst, i);
      for (std::size_t pos = 0; pos < r.members.size(); ++pos)
        CHECK(compose(hi, inst.colimit().legs[pos]) == h_Ji(inst, r.members[pos], i));
    }
  };
  check(oracle::Chain2().inst);
  check(seeded_chain3(5));
  check(seeded_chain3(6));
}

TEST_CASE("transition coherence") {
  oracle::Chain2 c;
  CHECK(transition_coherence_check(c.inst, 0, 0));
  CHECK(transition_coherence_check(c.inst, 0, 1));
  auto s = seeded_chain3(9);
  for (auto [i, k] : s.index().pairs()) CHECK(transition_coherence_check(s, i, k));
}

TEST_CASE("retraction_hom on CHAIN2 keeps the coordinate at 1") {
  oracle::Chain2 c;
  auto h = retraction_hom(c.inst);
  const auto& r = c.inst.reduced();
  const auto& leg = c.inst.colimit().legs[r.position(kI)];
  for (ElemIndex x0 = 0; x0 < 2; ++x0)
    for (ElemIndex x1 = 0; x1 < 2; ++x1) {
      auto t = h(0, leg(0, pair(c.inst, x0, x1)));
      CHECK(c.inst.limit().threads[0][t] == std::vector<ElemIndex>{x1, x1});
    }
}

TEST_CASE("retraction_hom undoes the diagonal of a constant system") {
  auto sig = unary_sig();
  auto a = unary_alg(sig, {"0", "1", "2"}, {1, 2, 0});
  for (std::size_t n = 1; n <= 3; ++n) {
    auto inst = RetractionInstance::make(oracle::constant_system(chain(n), a), Ultrafilter::principal(n, n - 1));
    const auto& r = inst.reduced();
    auto h = retraction_hom(inst);
    auto diag = compose(inst.colimit().legs[r.position(IndexSet::full(n))], limit_embedding(inst));
    CHECK(compose(h, diag) == Homomorphism::identity(inst.limit().apex));
    if (n == 1) CHECK(h.is_injective());
  }
}

TEST_CASE("retraction_check") {
  CHECK(retraction_check(oracle::Chain2().inst).passed);
  for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(retraction_check(seeded_chain3(seed)).passed);
  auto sig = unary_sig();
  auto single = RetractionInstance::make(oracle::constant_system(chain(1), unary_alg(sig, {"0", "1"}, {1, 0})),
                                         Ultrafilter::principal(1, 0));
  CHECK(retraction_check(single).passed);
  CHECK(vote_structure_check(single).passed);
  CHECK(degenerate_shape_check(single).passed);
}

TEST_CASE("hypotheses are enforced by make") {
  try {
    RetractionInstance::make(uneven_system(), Ultrafilter::principal(2, 1));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::hypothesis_violation);
  }
  try {
    RetractionInstance::make(oracle::Chain2().system, Ultrafilter::principal(2, 0));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::hypothesis_violation);
  }
}

TEST_CASE("violated support raises VoteFailure with a witness") {
  auto inst = RetractionInstance::unchecked(uneven_system(), Ultrafilter::principal(2, 1));
  CHECK_FALSE(inst.constant_support());
  try {
    h_Ji(inst, kI, 0);
    FAIL("no error");
  } catch (const VoteFailure& e) {
    CHECK(e.kind() == ErrorKind::vote_failure);
    CHECK(e.sort() == "t");
    CHECK(e.i() == 0);
    CHECK_FALSE(e.detail().empty());
  }
  CHECK_FALSE(retraction_check(inst).passed);
  CHECK_FALSE(vote_structure_check(inst).passed);
}

TEST_CASE("degenerate shape on CHAIN2") {
  oracle::Chain2 c;
  CHECK(degenerate_shape_check(c.inst).passed);
  CHECK(vote_structure_check(c.inst).passed);
}
