#include "msa/generator.hpp"

#include <algorithm>
#include <numeric>

#include "msa/error.hpp"

namespace msa {

namespace {

const char* const kSortNames[] = {"s", "t", "u", "v"};
const char* const kOpNames[] = {"f", "g", "h", "k"};
const char* const kIndexNames[] = {"a", "b", "c", "d", "e", "f", "g", "h"};

bool subset(const SortSet& a, const SortSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

template <typename T>
void shuffle(Generator& g, std::vector<T>& v) {
  for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[g.below(k)]);
}

using Pairs = std::vector<std::tuple<SortIndex, ElemIndex, ElemIndex>>;

void append_relation(Pairs& out, const Congruence& c) {
  const auto& rel = c.relation();
  for (SortIndex s = 0; s < rel.labels().size(); ++s) {
    std::vector<ElemIndex> first(rel.block_count(s), kUnmapped);
    for (ElemIndex x = 0; x < rel.labels()[s].size(); ++x) {
      auto b = rel.block_of(s, x);
      if (first[b] == kUnmapped) first[b] = x;
      else out.emplace_back(s, first[b], x);
    }
  }
}

// Q_i ⊔ X with mixed tuples sent into X by replacing Q arguments with the
// first X element of their sort.
Algebra glue(const SignaturePtr& sig, const Algebra& q, const Algebra* x) {
  if (!x) return q;
  const std::size_t nsorts = sig->sorts().size();
  std::vector<std::vector<Element>> carriers(nsorts);
  for (SortIndex s = 0; s < nsorts; ++s) {
    carriers[s] = q.carrier().carrier(s);
    for (const auto& e : x->carrier().carrier(s)) carriers[s].push_back(e);
  }
  SortedSet carrier(sig->sorts(), carriers);
  std::vector<std::vector<ElemIndex>> tables(sig->op_count());
  for (std::size_t k = 0; k < sig->op_count(); ++k) {
    const auto& ar = sig->op(k).arity;
    std::vector<std::size_t> radices;
    for (auto s : ar.word) radices.push_back(carrier.size(s));
    MixedRadix lay(radices);
    std::vector<ElemIndex> args(ar.word.size()), qa(ar.word.size()), xa(ar.word.size());
    for (std::size_t code = 0; code < lay.total(); ++code) {
      lay.decode(code, args);
      bool all_q = true;
      for (std::size_t p = 0; p < args.size(); ++p) {
        auto s = ar.word[p];
        const auto nq = static_cast<ElemIndex>(q.size(s));
        all_q = all_q && args[p] < nq;
        qa[p] = args[p];
        xa[p] = args[p] < nq ? 0 : args[p] - nq;
      }
      if (all_q) tables[k].push_back(q.apply(k, qa));
      else tables[k].push_back(static_cast<ElemIndex>(q.size(ar.result) + x->apply(k, xa)));
    }
  }
  return checked_algebra(sig, std::move(carrier), std::move(tables));
}

// Map Q_from ⊔ X → Q_to ⊔ X: quotient part through `q_map`, X fixed.
Homomorphism glue_map(const Algebra& from, const Algebra& to, const std::vector<std::vector<ElemIndex>>& q_map,
                      const Algebra& q_from, const Algebra& q_to) {
  const std::size_t nsorts = q_map.size();
  SortedTable t(nsorts);
  for (SortIndex s = 0; s < nsorts; ++s) {
    for (auto y : q_map[s]) t[s].push_back(y);
    const std::size_t extra = from.size(s) - q_from.size(s);
    for (std::size_t e = 0; e < extra; ++e) t[s].push_back(static_cast<ElemIndex>(q_to.size(s) + e));
  }
  return Homomorphism(from, to, std::move(t));
}

}  // namespace

void check_config(const GeneratorConfig& cfg) {
  if (cfg.max_sorts < 1 || cfg.max_sorts > 4) throw Error(ErrorKind::invalid_argument, "sorts must be in 1..4");
  if (cfg.max_carrier < 2 || cfg.max_carrier > 4)
    throw Error(ErrorKind::invalid_argument, "carrier size must be in 2..4");
  if (cfg.max_ops > 4) throw Error(ErrorKind::invalid_argument, "at most 4 operations");
  if (cfg.max_index < 1 || cfg.max_index > 5) throw Error(ErrorKind::invalid_argument, "index size must be in 1..5");
  if (cfg.max_arity > 3) throw Error(ErrorKind::invalid_argument, "arity at most 3");
  if (cfg.inject_support_violation && (cfg.force_constant_support || cfg.force_surjective))
    throw Error(ErrorKind::invalid_argument, "a support violation contradicts the other flags");
  if (cfg.inject_support_violation && (cfg.max_sorts < 2 || cfg.max_index < 2))
    throw Error(ErrorKind::invalid_argument, "a support violation needs two sorts and two indices");
}

Generator::Generator(const GeneratorConfig& cfg) : cfg_(cfg), rng_(cfg.seed) { check_config(cfg); }

std::size_t Generator::below(std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<std::size_t>(rng_() % n);
}

SignaturePtr Generator::signature(std::size_t min_sorts) {
  min_sorts = std::clamp<std::size_t>(min_sorts, 1, cfg_.max_sorts);
  const std::size_t nsorts = min_sorts + below(cfg_.max_sorts - min_sorts + 1);
  std::vector<std::string> sorts(kSortNames, kSortNames + nsorts);
  std::vector<OpSymbol> ops;
  const std::size_t nops = below(cfg_.max_ops + 1);
  for (std::size_t k = 0; k < nops; ++k) {
    std::size_t len = below(cfg_.max_arity + 1);
    if (len == 0 && cfg_.max_arity > 0 && coin()) len = 1;
    Arity ar;
    for (std::size_t q = 0; q < len; ++q) ar.word.push_back(below(nsorts));
    ar.result = below(nsorts);
    ops.push_back({kOpNames[k], ar});
  }
  return std::make_shared<const Signature>(std::move(sorts), std::move(ops));
}

bool Generator::violation_possible(const Signature& sig) const {
  return sig.close({}).size() < sig.sorts().size();
}

SortSet Generator::support(const Signature& sig) {
  SortSet seed;
  for (SortIndex s = 0; s < sig.sorts().size(); ++s)
    if (below(3) != 0) seed.insert(s);
  return sig.close(seed);
}

Preorder Generator::index(bool need_lower) {
  std::size_t n = 1 + below(cfg_.max_index);
  if (need_lower) n = std::max<std::size_t>(n, 2);
  std::size_t cluster = 1;
  if (n >= (need_lower ? 3U : 2U) && below(4) == 0) cluster = 2;
  const std::size_t top_start = n - cluster;
  std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    le[a][a] = 1;
    for (std::size_t t = top_start; t < n; ++t) le[a][t] = 1;
  }
  for (std::size_t a = 0; a < top_start; ++a)
    for (std::size_t b = a + 1; b < top_start; ++b)
      if (below(3) == 0) le[a][b] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (le[a][k] && le[k][b]) le[a][b] = 1;
  std::vector<std::string> names(kIndexNames, kIndexNames + n);
  shuffle(*this, names);
  return Preorder::from_matrix(std::move(names), std::move(le));
}

namespace {

Algebra random_algebra(Generator& g, const SignaturePtr& sig, const SortSet& support,
                       const std::vector<std::size_t>& max_size, const std::string& prefix) {
  const std::size_t nsorts = sig->sorts().size();
  std::vector<std::vector<Element>> carriers(nsorts);
  for (SortIndex s : support) {
    const std::size_t n = 1 + g.below(max_size[s]);
    for (std::size_t e = 0; e < n; ++e) carriers[s].push_back(Element::atom(prefix + std::to_string(e)));
  }
  SortedSet carrier(sig->sorts(), std::move(carriers));
  std::vector<std::vector<ElemIndex>> tables(sig->op_count());
  for (std::size_t k = 0; k < sig->op_count(); ++k) {
    const auto& ar = sig->op(k).arity;
    std::size_t total = 1;
    for (auto s : ar.word) total *= carrier.size(s);
    for (std::size_t c = 0; c < total; ++c)
      tables[k].push_back(static_cast<ElemIndex>(g.below(carrier.size(ar.result))));
  }
  return checked_algebra(sig, std::move(carrier), std::move(tables));
}

}  // namespace

Algebra Generator::algebra(const SignaturePtr& sig, const SortSet& support, std::size_t reserve) {
  if (reserve >= cfg_.max_carrier) throw Error(ErrorKind::invalid_argument, "no room left in the carrier cap");
  std::vector<std::size_t> caps(sig->sorts().size(), cfg_.max_carrier - reserve);
  return random_algebra(*this, sig, support, caps, "");
}

namespace {

struct Layered {
  SortSet base_support;
  SortSet extra_support;
  bool extras = false;
};

// Supports for the quotient layer and the extra algebra X.
Layered plan(Generator& g, const Signature& sig, const GeneratorConfig& cfg) {
  Layered out;
  if (cfg.inject_support_violation) {
    if (!g.violation_possible(sig)) throw Error(ErrorKind::invalid_argument, "signature admits no violation");
    SortSet base = sig.close({});
    for (int attempt = 0; attempt < 8; ++attempt) {
      auto s = g.support(sig);
      if (s.size() < sig.sorts().size()) {
        base = s;
        break;
      }
    }
    SortSet bigger = base;
    std::vector<SortIndex> missing;
    for (SortIndex s = 0; s < sig.sorts().size(); ++s)
      if (!base.count(s)) missing.push_back(s);
    bigger.insert(missing[g.below(missing.size())]);
    out.base_support = base;
    out.extra_support = sig.close(bigger);
    out.extras = true;
    return out;
  }
  out.base_support = g.support(sig);
  if (cfg.force_surjective || !g.coin()) return out;
  out.extras = true;
  out.extra_support = out.base_support;
  if (!cfg.force_constant_support && g.coin()) {
    auto more = g.support(sig);
    more.insert(out.base_support.begin(), out.base_support.end());
    out.extra_support = sig.close(more);
  }
  return out;
}

IndexSet random_closed(Generator& g, const Preorder& p, bool downward) {
  IndexSet seed;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (g.below(3) == 0) seed = seed.with(i);
  IndexSet out;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (auto k : seed.elements())
      if (downward ? p.le(i, k) : p.le(k, i)) out = out.with(i);
  return out;
}

IndexSet top_cluster(const Preorder& p) {
  IndexSet t;
  for (auto i : p.tops()) t = t.with(i);
  return t;
}

// Congruences Θ_i on `base` with Θ_i ⊆ Θ_j whenever `order_key(i)` is a
// proper subset of `order_key(j)`.
std::vector<QuotientAlgebra> layered_quotients(Generator& g, const Algebra& base, const std::vector<IndexSet>& below_of) {
  const std::size_t n = below_of.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return below_of[a].size() < below_of[b].size(); });
  std::vector<std::optional<Congruence>> theta(n);
  const std::size_t nsorts = base.carrier().sort_count();
  for (auto i : order) {
    for (std::size_t j = 0; j < n; ++j)
      if (theta[j] && below_of[j] == below_of[i]) theta[i] = theta[j];
    if (theta[i]) continue;
    Pairs pairs;
    for (std::size_t j = 0; j < n; ++j)
      if (theta[j] && below_of[j].subset_of(below_of[i])) append_relation(pairs, *theta[j]);
    if (g.coin()) {
      auto s = g.below(nsorts);
      if (base.size(s) > 1)
        pairs.emplace_back(s, static_cast<ElemIndex>(g.below(base.size(s))),
                           static_cast<ElemIndex>(g.below(base.size(s))));
    }
    theta[i] = congruence_generated_by(base, pairs);
  }
  std::vector<QuotientAlgebra> out;
  for (auto& t : theta) out.push_back(quotient_algebra(*t));
  return out;
}

// For each quotient, a representative in the base of every class.
std::vector<std::vector<ElemIndex>> representatives(const QuotientAlgebra& q) {
  std::vector<std::vector<ElemIndex>> rep(q.projection.tables().size());
  for (SortIndex s = 0; s < rep.size(); ++s) {
    rep[s].assign(q.algebra.size(s), kUnmapped);
    for (ElemIndex x = 0; x < q.projection.table(s).size(); ++x) {
      auto c = q.projection(s, x);
      if (rep[s][c] == kUnmapped) rep[s][c] = x;
    }
  }
  return rep;
}

std::vector<std::vector<ElemIndex>> induced(const QuotientAlgebra& from, const QuotientAlgebra& to) {
  auto rep = representatives(from);
  std::vector<std::vector<ElemIndex>> out(rep.size());
  for (SortIndex s = 0; s < rep.size(); ++s)
    for (auto r : rep[s]) out[s].push_back(to.projection(s, r));
  return out;
}

}  // namespace

ProjectiveSystem Generator::projective_system(const SignaturePtr& sig, const Preorder& index) {
  const auto& cfg = cfg_;
  auto lay = plan(*this, *sig, cfg);
  const std::size_t n = index.size();
  auto top = algebra(sig, lay.base_support, lay.extras ? 1 : 0);
  // Θ_j ⊆ Θ_i for i ≤ j: key each index by its final section.
  std::vector<IndexSet> key;
  for (std::size_t i = 0; i < n; ++i) key.push_back(index.up(i));
  auto qs = layered_quotients(*this, top, key);

  IndexSet extra_at;
  std::optional<Algebra> x;
  if (lay.extras) {
    extra_at = cfg.inject_support_violation ? top_cluster(index).complement(n) : random_closed(*this, index, true);
    std::vector<std::size_t> caps(sig->sorts().size(), cfg.max_carrier);
    for (SortIndex s = 0; s < caps.size(); ++s)
      if (top.size(s) > 0) caps[s] = cfg.max_carrier - top.size(s);
    x = random_algebra(*this, sig, lay.extra_support, caps, "x");
  }
  std::vector<Algebra> members;
  for (std::size_t i = 0; i < n; ++i)
    members.push_back(glue(sig, qs[i].algebra, extra_at.contains(i) ? &*x : nullptr));
  ProjectiveSystem::Transitions t;
  for (auto [i, j] : index.pairs()) {
    auto m = induced(qs[j], qs[i]);
    t.emplace(std::make_pair(i, j), glue_map(members[j], members[i], m, qs[j].algebra, qs[i].algebra));
  }
  ProjectiveSystem out(index, sig, std::move(members), std::move(t));
  require_valid(out);
  return out;
}

InductiveSystem Generator::inductive_system(const SignaturePtr& sig, const Preorder& index) {
  const auto& cfg = cfg_;
  auto lay = plan(*this, *sig, cfg);
  const std::size_t n = index.size();
  auto ambient = algebra(sig, lay.base_support, lay.extras ? 1 : 0);
  // Θ_i ⊆ Θ_j for i ≤ j: key each index by its down-set.
  std::vector<IndexSet> key(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (index.le(k, i)) key[i] = key[i].with(k);
  auto qs = layered_quotients(*this, ambient, key);

  IndexSet extra_at;
  std::optional<Algebra> x;
  if (lay.extras) {
    extra_at = cfg.inject_support_violation ? top_cluster(index) : random_closed(*this, index, false);
    std::vector<std::size_t> caps(sig->sorts().size(), cfg.max_carrier);
    for (SortIndex s = 0; s < caps.size(); ++s)
      if (ambient.size(s) > 0) caps[s] = cfg.max_carrier - ambient.size(s);
    x = random_algebra(*this, sig, lay.extra_support, caps, "x");
  }
  std::vector<Algebra> members;
  for (std::size_t i = 0; i < n; ++i)
    members.push_back(glue(sig, qs[i].algebra, extra_at.contains(i) ? &*x : nullptr));
  InductiveSystem::Transitions t;
  for (auto [i, j] : index.pairs()) {
    auto m = induced(qs[i], qs[j]);
    t.emplace(std::make_pair(i, j), glue_map(members[i], members[j], m, qs[i].algebra, qs[j].algebra));
  }
  InductiveSystem out(index, sig, std::move(members), std::move(t));
  require_valid(out);
  return out;
}

AlgebraFamily Generator::family(const SignaturePtr& sig, const std::vector<std::string>& names, IndexSet protect) {
  AlgebraFamily out{sig, names, {}};
  const std::size_t n = names.size();
  if (!cfg_.inject_support_violation) {
    auto s = support(*sig);
    for (std::size_t i = 0; i < n; ++i) out.members.push_back(algebra(sig, s));
    return out;
  }
  auto open = protect.complement(n).elements();
  if (open.empty() || !violation_possible(*sig))
    throw Error(ErrorKind::invalid_argument, "no member can carry the violation");
  // S ⊋ S' with both closed; S' misses a sort of S.
  const auto floor = sig->close({});
  auto full = support(*sig);
  if (full.size() == floor.size()) {
    SortSet seed = floor;
    for (SortIndex s = 0; s < sig->sorts().size(); ++s)
      if (!floor.count(s)) {
        seed.insert(s);
        break;
      }
    full = sig->close(seed);
  }
  SortSet smaller = floor;
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto c = support(*sig);
    if (subset(c, full) && c.size() < full.size()) {
      smaller = c;
      break;
    }
  }
  const std::size_t odd = open[below(open.size())];
  for (std::size_t i = 0; i < n; ++i) out.members.push_back(algebra(sig, i == odd ? smaller : full));
  return out;
}

UffsChoice random_tail_inclusion(Generator& g, const Preorder& p, std::size_t point, const std::string& prefix) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (i == point || g.coin()) kept.push_back(i);
  std::vector<std::string> fresh;
  for (std::size_t k = 0; k < kept.size(); ++k) fresh.push_back(prefix + kIndexNames[k]);
  shuffle(g, fresh);
  std::vector<std::vector<char>> le(kept.size(), std::vector<char>(kept.size(), 0));
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t b = 0; b < kept.size(); ++b) le[a][b] = p.le(kept[a], kept[b]) ? 1 : 0;
  auto src = Preorder::from_matrix(fresh, std::move(le));
  std::vector<std::size_t> table(src.size());
  std::size_t preimage = 0;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    auto at = *src.index_of(fresh[k]);
    table[at] = kept[k];
    if (kept[k] == point) preimage = at;
  }
  return {IsotoneMap(src, p, std::move(table)), Ultrafilter::principal(src.size(), preimage)};
}

}  // namespace msa

namespace msa {

namespace {

SortedTable table_of(const Homomorphism& h) { return h.tables(); }

template <Variance V>
void add_system(InstanceFile& file, const System<V>& sys, const std::string& name, const std::string& prefix) {
  const auto& p = sys.index();
  std::vector<std::pair<std::string, std::string>> at;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::string alg = prefix + "_" + p.name(i);
    file.add_algebra(alg, "Sig", sys.algebra(i));
    at.emplace_back(p.name(i), alg);
  }
  std::vector<MapDecl> maps;
  for (auto [i, j] : generating_pairs(p)) {
    // i ≤ j; the map runs j → i for projective systems and i → j otherwise.
    const bool projective = V == Variance::projective;
    const auto& from = projective ? p.name(j) : p.name(i);
    const auto& to = projective ? p.name(i) : p.name(j);
    std::string hom = prefix + "_" + from + "_" + to;
    file.add_hom(hom, prefix + "_" + from, prefix + "_" + to, table_of(sys.transition(i, j)));
    maps.push_back({from, to, hom});
  }
  if constexpr (V == Variance::projective) file.add_projsys(name, "I", at, maps);
  else file.add_indsys(name, "I", at, maps);
}

}  // namespace

InstanceFile generate_instance(const GeneratorConfig& cfg) {
  Generator g(cfg);
  const bool violate = cfg.inject_support_violation;
  SignaturePtr sig = g.signature(violate ? 2 : 1);
  for (int tries = 0; violate && !g.violation_possible(*sig); ++tries) {
    if (tries == 64) throw Error(ErrorKind::invalid_argument, "no signature admitting a violation within 64 draws");
    sig = g.signature(2);
  }
  auto index = g.index(violate);
  InstanceFile file;
  file.set_sorts(sig->sorts());
  file.add_signature("Sig", sig);
  file.add_preorder("I", index);
  add_system(file, g.projective_system(sig, index), "P", "P");
  add_system(file, g.inductive_system(sig, index), "D", "D");
  auto fam = g.family(sig, index.names(), IndexSet{});
  std::vector<std::pair<std::string, std::string>> at;
  for (std::size_t i = 0; i < index.size(); ++i) {
    std::string alg = "F_" + index.name(i);
    file.add_algebra(alg, "Sig", fam.members[i]);
    at.emplace_back(index.name(i), alg);
  }
  file.add_family("Fam", "I", at);
  file.add_final_sections_filter("Fin", "I");
  std::vector<std::string> core;
  for (std::size_t i = 0; i < index.size(); ++i)
    if (g.coin()) core.push_back(index.name(i));
  if (core.empty()) core.push_back(index.name(g.below(index.size())));
  file.add_principal_filter("Core", "I", core);
  auto tops = index.tops();
  file.add_ultrafilter("U", "I", index.name(tops[g.below(tops.size())]));
  return file;
}

}  // namespace msa
