#include <doctest.h>

#include "msa/error.hpp"
#include "msa/generator.hpp"
#include "oracles.hpp"

using namespace msa;

namespace {

bool surjective_transitions(const ProjectiveSystem& p) {
  for (const auto& [ij, h] : p.transitions())
    if (!h.is_surjective()) return false;
  return true;
}

void within_caps(const GeneratorConfig& cfg, const Signature& sig, const Preorder& idx,
                 const std::vector<Algebra>& members) {
  CHECK(sig.sorts().size() <= cfg.max_sorts);
  CHECK(sig.op_count() <= cfg.max_ops);
  for (const auto& op : sig.ops()) CHECK(op.arity.word.size() <= cfg.max_arity);
  CHECK(idx.size() <= cfg.max_index);
  for (const auto& a : members)
    for (SortIndex s = 0; s < sig.sorts().size(); ++s) CHECK(a.size(s) <= cfg.max_carrier);
}

}  // namespace

TEST_CASE("check_config") {
  GeneratorConfig ok;
  CHECK_NOTHROW(check_config(ok));
  auto bad = [](auto edit) {
    GeneratorConfig c;
    edit(c);
    return c;
  };
  CHECK_THROWS_AS(check_config(bad([](auto& c) { c.max_sorts = 5; })), Error);
  CHECK_THROWS_AS(check_config(bad([](auto& c) { c.max_carrier = 5; })), Error);
  CHECK_THROWS_AS(check_config(bad([](auto& c) { c.max_ops = 5; })), Error);
  CHECK_THROWS_AS(check_config(bad([](auto& c) { c.max_index = 6; })), Error);
  CHECK_THROWS_AS(check_config(bad([](auto& c) { c.max_index = 0; })), Error);
  CHECK_THROWS_AS(check_config(bad([](auto& c) {
                    c.inject_support_violation = true;
                    c.force_constant_support = true;
                  })),
                  Error);
  CHECK_THROWS_AS(check_config(bad([](auto& c) {
                    c.inject_support_violation = true;
                    c.max_sorts = 1;
                  })),
                  Error);
}

TEST_CASE("same seed, same instance") {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xffffffffffffffffULL}) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    CHECK(serialize(generate_instance(cfg)) == serialize(generate_instance(cfg)));
  }
  GeneratorConfig a, b;
  b.seed = 1;
  CHECK(serialize(generate_instance(a)) != serialize(generate_instance(b)));
}

TEST_CASE("generated systems are valid, capped and honor the flags") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.max_sorts = 1 + seed % 4;
    cfg.max_carrier = 2 + seed % 3;
    cfg.max_ops = seed % 5;
    cfg.max_index = 1 + seed % 5;
    cfg.max_arity = seed % 4;
    switch (seed % 4) {
      case 1: cfg.force_constant_support = true; break;
      case 2: cfg.force_surjective = true; break;
      case 3:
        if (cfg.max_sorts >= 2 && cfg.max_index >= 2) cfg.inject_support_violation = true;
        break;
    }
    Generator g(cfg);
    auto sig = g.signature(cfg.inject_support_violation ? 2 : 1);
    if (cfg.inject_support_violation && !g.violation_possible(*sig)) continue;
    auto idx = g.index(cfg.inject_support_violation);
    auto p = g.projective_system(sig, idx);
    auto d = g.inductive_system(sig, idx);
    CHECK(validate_system(p).empty());
    CHECK(validate_system(d).empty());
    within_caps(cfg, *sig, idx, p.algebras());
    within_caps(cfg, *sig, idx, d.algebras());
    if (cfg.force_constant_support || cfg.force_surjective) {
      CHECK(constant_support(p.carriers()));
      CHECK(constant_support(d.carriers()));
    }
    if (cfg.force_surjective) CHECK(surjective_transitions(p));
    if (cfg.inject_support_violation) {
      CHECK_FALSE(constant_support(p.carriers()));
      CHECK_FALSE(constant_support(d.carriers()));
    }
  }
}

TEST_CASE("violating families spare the protected positions") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.inject_support_violation = true;
    Generator g(cfg);
    auto sig = g.signature(2);
    if (!g.violation_possible(*sig)) continue;
    auto idx = g.index(true);
    IndexSet protect = IndexSet::single(idx.tops().front());
    auto fam = g.family(sig, idx.names(), protect);
    CHECK_FALSE(constant_support(fam.carriers()));
    auto base = support(fam.members[idx.tops().front()].carrier());
    for (std::size_t i = 0; i < fam.size(); ++i) {
      auto s = support(fam.members[i].carrier());
      CHECK(std::includes(base.begin(), base.end(), s.begin(), s.end()));
    }
    CHECK_THROWS_AS(g.family(sig, idx.names(), IndexSet::full(idx.size())), Error);
  }
}

TEST_CASE("random_tail_inclusion is a Uffs morphism") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    Generator g(cfg);
    auto p = g.index();
    auto tops = p.tops();
    auto point = tops[g.below(tops.size())];
    auto choice = random_tail_inclusion(g, p, point, "t");
    CHECK(uffs_morphism_check({choice.phi.source(), choice.source_ultra}, {p, Ultrafilter::principal(p.size(), point)},
                              choice.phi));
    CHECK(choice.phi(choice.source_ultra.point()) == point);
  }
}

TEST_CASE("generated files validate") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.force_surjective = seed % 2 == 0;
    auto text = serialize(generate_instance(cfg));
    auto r = parse(text);
    REQUIRE(r.ok());
    const auto* p = r.file->get<ProjSysItem>("P");
    REQUIRE(p);
    if (cfg.force_surjective) CHECK(constant_support(p->system.carriers()));
  }
}
