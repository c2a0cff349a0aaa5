#pragma once
// Brute-force oracles and small fixtures shared by the unit tests and the
// acceptance runner. Nothing here calls the library routine it is used to
// check; everything is enumerated from the definitions.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "msa/algebra.hpp"
#include "msa/dsl.hpp"
#include "msa/filters.hpp"
#include "msa/generator.hpp"
#include "msa/reduced.hpp"
#include "msa/retraction.hpp"
#include "msa/systems.hpp"

namespace oracle {

using namespace msa;

// ---- fixtures ---------------------------------------------------------------

inline SortedSet sset(std::vector<std::string> sorts, const std::vector<std::vector<std::string>>& carriers) {
  std::vector<std::vector<Element>> cs;
  for (const auto& c : carriers) {
    cs.emplace_back();
    for (const auto& e : c) cs.back().push_back(Element::atom(e));
  }
  return SortedSet(std::move(sorts), std::move(cs));
}

inline SignaturePtr unary_sig(std::vector<std::string> sorts = {"s"}) {
  return std::make_shared<Signature>(std::move(sorts), std::vector<OpSymbol>{{"f", {{0}, 0}}});
}

// One-sorted algebra over unary_sig with f given by a table.
inline Algebra unary_alg(const SignaturePtr& sig, const std::vector<std::string>& elems,
                         std::vector<ElemIndex> f) {
  return checked_algebra(sig, sset(sig->sorts(), {elems}), {std::move(f)});
}

inline Preorder chain(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> gens;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    if (i) gens.emplace_back(std::to_string(i - 1), std::to_string(i));
  }
  return Preorder::closure_of(names, gens);
}

// Constant system on A with identity transitions.
inline ProjectiveSystem constant_system(const Preorder& p, const Algebra& a) {
  ProjectiveSystem::Transitions t;
  for (auto [i, j] : p.pairs()) t.emplace(std::pair{i, j}, Homomorphism::identity(a));
  return ProjectiveSystem(p, a.signature_ptr(), std::vector<Algebra>(p.size(), a), std::move(t));
}

inline InductiveSystem constant_indsys(const Preorder& p, const Algebra& a) {
  InductiveSystem::Transitions t;
  for (auto [i, j] : p.pairs()) t.emplace(std::pair{i, j}, Homomorphism::identity(a));
  return InductiveSystem(p, a.signature_ptr(), std::vector<Algebra>(p.size(), a), std::move(t));
}

// I = chain 0 ≤ 1, one sort s, f = id on {0,1}, identity transitions,
// ultrafilter principal at 1.
struct Chain2 {
  SignaturePtr sig = unary_sig();
  Algebra a = unary_alg(sig, {"0", "1"}, {0, 1});
  Preorder index = chain(2);
  ProjectiveSystem system = constant_system(index, a);
  Ultrafilter ultra = Ultrafilter::principal(2, 1);
  RetractionInstance inst = RetractionInstance::make(system, ultra);
};

inline const char* kChain2Text = R"(# two-element chain, identity transitions
sorts s;

signature Sig {
  op f : s -> s;
}

algebra A over Sig {
  carrier s = { 0 1 };
  op f(0) = 0;
  op f(1) = 1;
}

hom id : A -> A {
  s : 0 -> 0, 1 -> 1;
}

preorder I {
  elems 0 1;
  le 0 1;
}

projsys P over I {
  at 0 = A;
  at 1 = A;
  map 1 -> 0 = id;
}

indsys D over I {
  at 0 = A;
  at 1 = A;
  map 0 -> 1 = id;
}

family Fam on I {
  at 0 = A;
  at 1 = A;
}

filter Fin on I = finalsections;

ultrafilter U on I = principal 1;
)";

// ---- sorted mappings and homomorphisms --------------------------------------

// Calls visit(table) for every sorted mapping a → b; stops early if visit
// returns false.
inline void for_each_mapping(const SortedSet& a, const SortedSet& b,
                             const std::function<bool(const SortedTable&)>& visit) {
  const std::size_t n = a.sort_count();
  SortedTable t(n);
  std::vector<std::pair<SortIndex, ElemIndex>> slots;
  for (SortIndex s = 0; s < n; ++s) {
    if (a.size(s) > 0 && b.size(s) == 0) return;
    t[s].assign(a.size(s), 0);
    for (ElemIndex x = 0; x < a.size(s); ++x) slots.emplace_back(s, x);
  }
  while (true) {
    if (!visit(t)) return;
    std::size_t k = slots.size();
    while (k > 0) {
      auto [s, x] = slots[k - 1];
      if (++t[s][x] < b.size(s)) break;
      t[s][x] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

inline std::size_t mapping_count(const SortedSet& a, const SortedSet& b) {
  std::size_t n = 0;
  for_each_mapping(a, b, [&](const SortedTable&) { return ++n, true; });
  return n;
}

inline bool commutes(const SortedTable& t, const Algebra& a, const Algebra& b) {
  const auto& sig = a.signature();
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& ar = sig.op(k).arity;
    const auto& lay = a.arg_layout(k);
    std::vector<ElemIndex> args(ar.word.size());
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      std::vector<ElemIndex> img(args.size());
      for (std::size_t m = 0; m < args.size(); ++m) img[m] = t[ar.word[m]][args[m]];
      if (t[ar.result][a.table(k)[code]] != b.apply(k, img)) return false;
    }
  }
  return true;
}

inline std::vector<SortedTable> brute_homs(const Algebra& a, const Algebra& b) {
  std::vector<SortedTable> out;
  for_each_mapping(a.carrier(), b.carrier(), [&](const SortedTable& t) {
    if (commutes(t, a, b)) out.push_back(t);
    return true;
  });
  return out;
}

inline bool bijective(const SortedTable& t, const SortedSet& b) {
  for (SortIndex s = 0; s < t.size(); ++s) {
    std::vector<char> hit(b.size(s), 0);
    for (auto y : t[s]) hit[y] = 1;
    if (t[s].size() != b.size(s) || std::count(hit.begin(), hit.end(), 1) != static_cast<long>(b.size(s)))
      return false;
  }
  return true;
}

// Some sortwise bijection commuting with every operation.
inline bool brute_isomorphic(const Algebra& a, const Algebra& b) {
  const std::size_t n = a.carrier().sort_count();
  if (!(a.signature() == b.signature())) return false;
  for (SortIndex s = 0; s < n; ++s)
    if (a.size(s) != b.size(s)) return false;
  SortedTable t(n);
  std::function<bool(SortIndex)> go = [&](SortIndex s) {
    if (s == n) return commutes(t, a, b);
    t[s].resize(a.size(s));
    std::iota(t[s].begin(), t[s].end(), 0);
    do {
      if (go(s + 1)) return true;
    } while (std::next_permutation(t[s].begin(), t[s].end()));
    return false;
  };
  return go(0);
}

// ---- filters ----------------------------------------------------------------

// A family of subsets of {0..n-1}, n ≤ 4, as a bitmask over subset codes.
using Family = std::uint32_t;

inline bool has(Family f, unsigned subset) { return (f >> subset) & 1U; }

inline bool filter_axioms(unsigned n, Family f) {
  const unsigned full = (1U << n) - 1;
  if (!has(f, full) || has(f, 0)) return false;
  for (unsigned a = 0; a <= full; ++a) {
    if (!has(f, a)) continue;
    for (unsigned b = 0; b <= full; ++b) {
      if ((a & b) == a && !has(f, b)) return false;
      if (has(f, b) && !has(f, a & b)) return false;
    }
  }
  return true;
}

inline std::vector<Family> all_filters(unsigned n) {
  std::vector<Family> out;
  const std::uint64_t families = std::uint64_t{1} << (1U << n);
  for (std::uint64_t f = 0; f < families; ++f)
    if (filter_axioms(n, static_cast<Family>(f))) out.push_back(static_cast<Family>(f));
  return out;
}

inline std::vector<Family> maximal_filters_containing(Family f, const std::vector<Family>& filters) {
  std::vector<Family> out;
  for (Family g : filters) {
    if ((g & f) != f) continue;
    bool maximal = true;
    for (Family h : filters)
      if (h != g && (h & g) == g) maximal = false;
    if (maximal) out.push_back(g);
  }
  return out;
}

inline Family family_of(const Filter& f) {
  Family out = 0;
  for (auto j : f.members()) out |= Family{1} << j.bits();
  return out;
}

inline Filter to_filter(unsigned n, Family f) {
  std::vector<IndexSet> members;
  for (unsigned j = 0; j < (1U << n); ++j)
    if (has(f, j)) members.emplace_back(j);
  return Filter(n, members);
}

// {Q | ∃J ∈ F, φ[J] ⊆ Q}, straight from the definition.
inline Family image_family(unsigned target_n, const std::vector<std::size_t>& phi, unsigned source_n, Family f) {
  Family out = 0;
  for (unsigned j = 0; j < (1U << source_n); ++j) {
    if (!has(f, j)) continue;
    unsigned img = 0;
    for (unsigned i = 0; i < source_n; ++i)
      if ((j >> i) & 1U) img |= 1U << phi[i];
    for (unsigned q = 0; q < (1U << target_n); ++q)
      if ((q & img) == img) out |= Family{1} << q;
  }
  return out;
}

// ---- systems ----------------------------------------------------------------

// x ~ y on the coproduct iff ∃k ≥ i, j with f^{i,k}(a) = f^{j,k}(b).
inline bool literal_phi(const InductiveSystem& d, const CoproductSet& c, SortIndex s, ElemIndex x, ElemIndex y) {
  auto [i, a] = c.origin[s][x];
  auto [j, b] = c.origin[s][y];
  const auto& p = d.index();
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p.le(i, k) && p.le(j, k) && d.transition(i, k)(s, a) == d.transition(j, k)(s, b)) return true;
  return false;
}

struct UniversalTally {
  std::size_t cones = 0;
  std::size_t failures = 0;
  bool skipped = false;
};

// Enumerates all families of homs between `apex` and the members, one per
// index, by backtracking in index order; `ok(i, j, legs)` says whether the
// legs at i ≤ j (both assigned) commute.
inline void for_each_leg_family(const std::vector<std::vector<SortedTable>>& candidates, const Preorder& p,
                                const std::function<bool(std::size_t, std::size_t, const std::vector<const SortedTable*>&)>& ok,
                                const std::function<void(const std::vector<const SortedTable*>&)>& visit) {
  std::vector<const SortedTable*> legs(p.size(), nullptr);
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == p.size()) return visit(legs);
    for (const auto& c : candidates[k]) {
      legs[k] = &c;
      bool fine = true;
      for (std::size_t m = 0; m <= k && fine; ++m) {
        if (p.le(m, k)) fine = ok(m, k, legs);
        if (fine && p.le(k, m)) fine = ok(k, m, legs);
      }
      if (fine) go(k + 1);
    }
  };
  go(0);
}

inline SortedTable compose_tables(const SortedTable& g, const SortedTable& f) {
  SortedTable out(f.size());
  for (SortIndex s = 0; s < f.size(); ++s)
    for (auto y : f[s]) out[s].push_back(g[s][y]);
  return out;
}

inline std::size_t hom_space(const SortedSet& a, const SortedSet& b) {
  double total = 1;
  for (SortIndex s = 0; s < a.sort_count(); ++s) {
    for (std::size_t x = 0; x < a.size(s); ++x) total *= static_cast<double>(b.size(s));
    if (total > 1e7) return static_cast<std::size_t>(1e7) + 1;
  }
  return static_cast<std::size_t>(total);
}

// Every cone from `apex` over p factors through the limit in exactly one way,
// and library mediation returns that map.
inline UniversalTally limit_universal(const ProjectiveSystem& p, const ProjectiveLimit& lim, const Algebra& apex,
                                      std::size_t cap = 200000) {
  UniversalTally tally;
  const auto& idx = p.index();
  std::vector<std::vector<SortedTable>> legs(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (hom_space(apex.carrier(), p.algebra(i).carrier()) > cap) return tally.skipped = true, tally;
    legs[i] = brute_homs(apex, p.algebra(i));
  }
  if (hom_space(apex.carrier(), lim.apex.carrier()) > cap) return tally.skipped = true, tally;
  auto into = brute_homs(apex, lim.apex);
  for_each_leg_family(
      legs, idx,
      [&](std::size_t i, std::size_t j, const std::vector<const SortedTable*>& g) {
        return compose_tables(p.transition(i, j).tables(), *g[j]) == *g[i];
      },
      [&](const std::vector<const SortedTable*>& g) {
        ++tally.cones;
        std::vector<const SortedTable*> hits;
        for (const auto& h : into) {
          bool all = true;
          for (std::size_t i = 0; i < idx.size() && all; ++i)
            all = compose_tables(lim.legs[i].tables(), h) == *g[i];
          if (all) hits.push_back(&h);
        }
        std::vector<Homomorphism> hg;
        for (std::size_t i = 0; i < idx.size(); ++i) hg.emplace_back(apex, p.algebra(i), *g[i]);
        if (hits.size() != 1 || mediating_into_limit(p, lim, apex, hg).tables() != *hits[0]) ++tally.failures;
      });
  return tally;
}

inline UniversalTally colimit_universal(const InductiveSystem& d, const InductiveLimit& lim, const Algebra& apex,
                                        std::size_t cap = 200000) {
  UniversalTally tally;
  const auto& idx = d.index();
  std::vector<std::vector<SortedTable>> legs(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (hom_space(d.algebra(i).carrier(), apex.carrier()) > cap) return tally.skipped = true, tally;
    legs[i] = brute_homs(d.algebra(i), apex);
  }
  if (hom_space(lim.apex.carrier(), apex.carrier()) > cap) return tally.skipped = true, tally;
  auto out_of = brute_homs(lim.apex, apex);
  for_each_leg_family(
      legs, idx,
      [&](std::size_t i, std::size_t j, const std::vector<const SortedTable*>& g) {
        return compose_tables(*g[j], d.transition(i, j).tables()) == *g[i];
      },
      [&](const std::vector<const SortedTable*>& g) {
        ++tally.cones;
        std::vector<const SortedTable*> hits;
        for (const auto& h : out_of) {
          bool all = true;
          for (std::size_t i = 0; i < idx.size() && all; ++i)
            all = compose_tables(h, lim.legs[i].tables()) == *g[i];
          if (all) hits.push_back(&h);
        }
        std::vector<Homomorphism> hg;
        for (std::size_t i = 0; i < idx.size(); ++i) hg.emplace_back(d.algebra(i), apex, *g[i]);
        if (hits.size() != 1 || mediating_from_colimit(d, lim, apex, hg).tables() != *hits[0]) ++tally.failures;
      });
  return tally;
}

// ---- retraction -------------------------------------------------------------

// V^{J,i,s}(x, y) read off the product coordinates.
inline IndexSet literal_vote(const RetractionInstance& inst, IndexSet j, std::size_t i, SortIndex s, ElemIndex x,
                             ElemIndex y) {
  const auto& r = inst.reduced();
  const auto& prod = r.products[r.position(j)];
  auto coords = prod.layout[s].decode(x);
  auto members = j.elements();
  IndexSet out;
  for (std::size_t m = 0; m < members.size(); ++m) {
    std::size_t jj = members[m];
    if (inst.index().le(i, jj) && inst.system().transition(i, jj)(s, coords[m]) == y) out = out.with(jj);
  }
  return out;
}

// ---- corpora ----------------------------------------------------------------

// A seeded projective system with constant support.
inline ProjectiveSystem seeded_system(std::uint64_t seed, std::size_t sorts = 3, std::size_t carrier = 3,
                                      std::size_t index = 4) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.max_sorts = sorts;
  cfg.max_carrier = carrier;
  cfg.max_index = index;
  cfg.force_constant_support = true;
  Generator g(cfg);
  auto sig = g.signature();
  auto idx = g.index();
  return g.projective_system(sig, idx);
}

inline std::size_t code_points(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

// ---- corruptions ------------------------------------------------------------

enum class Corruption { rename_reference, misspell_keyword, inject_char };

struct Corrupted {
  std::string text;
  std::size_t line = 0;
  std::size_t col = 0;    // first code point of the corrupted token
  std::size_t width = 0;  // its length in code points after corruption
};

// Byte offset of (line, col), both 1-based, col in code points.
inline std::size_t offset_of(const std::string& text, std::size_t line, std::size_t col) {
  std::size_t pos = 0;
  for (std::size_t l = 1; l < line; ++l) pos = text.find('\n', pos) + 1;
  for (std::size_t c = 1; c < col; ++c) {
    ++pos;
    while (pos < text.size() && (static_cast<unsigned char>(text[pos]) & 0xC0) == 0x80) ++pos;
  }
  return pos;
}

inline Corrupted corrupt(const std::string& text, const TokenSpan& tok, Corruption how,
                         const std::string& fresh = "zz_fresh") {
  const std::size_t at = offset_of(text, tok.line, tok.col);
  Corrupted c{text, tok.line, tok.col, 0};
  switch (how) {
    case Corruption::rename_reference:
      c.text.replace(at, tok.text.size(), fresh);
      c.width = code_points(fresh);
      break;
    case Corruption::misspell_keyword: {
      std::string w = tok.text;
      w.back() = w.back() == 'x' ? 'q' : 'x';
      c.text.replace(at, tok.text.size(), w);
      c.width = code_points(w);
      break;
    }
    case Corruption::inject_char:
      c.text.insert(at + tok.text.size() / 2, "?");
      c.width = code_points(tok.text) + 1;
      break;
  }
  return c;
}

// The first diagnostic lies inside the corrupted token.
inline bool located(const ParseResult& r, const Corrupted& c) {
  if (r.ok() || r.diagnostics.empty()) return false;
  const auto& d = r.diagnostics.front();
  return d.line == c.line && d.col >= c.col && d.col < c.col + c.width;
}

}  // namespace oracle
