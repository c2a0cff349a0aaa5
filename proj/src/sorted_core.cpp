#include "msa/sorted_core.hpp"

#include <algorithm>
#include <map>

#include "msa/error.hpp"

namespace msa {

MixedRadix::MixedRadix(std::vector<std::size_t> radices)
    : radices_(std::move(radices)), strides_(radices_.size()) {
  std::size_t stride = 1;
  for (std::size_t k = radices_.size(); k-- > 0;) {
    strides_[k] = stride;
    stride *= radices_[k];
  }
  total_ = stride;
}

std::size_t MixedRadix::encode(std::span<const ElemIndex> digits) const {
  std::size_t code = 0;
  for (std::size_t k = 0; k < radices_.size(); ++k) code += digits[k] * strides_[k];
  return code;
}

void MixedRadix::decode(std::size_t code, std::span<ElemIndex> out) const {
  for (std::size_t k = 0; k < radices_.size(); ++k) {
    out[k] = static_cast<ElemIndex>(code / strides_[k]);
    code %= strides_[k];
  }
}

std::vector<ElemIndex> MixedRadix::decode(std::size_t code) const {
  std::vector<ElemIndex> out(radices_.size());
  decode(code, out);
  return out;
}

SortedSet::SortedSet(std::vector<std::string> sorts,
                     std::vector<std::vector<Element>> carriers)
    : sorts_(std::move(sorts)), carriers_(std::move(carriers)) {
  if (carriers_.size() != sorts_.size())
    throw Error(ErrorKind::invalid_argument, "one carrier per sort required");
  for (std::size_t s = 0; s < carriers_.size(); ++s) {
    auto& c = carriers_[s];
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw Error(ErrorKind::invalid_argument,
                  "duplicate element in carrier of sort " + sorts_[s]);
  }
}

SortedSet SortedSet::empty(std::vector<std::string> sorts) {
  std::vector<std::vector<Element>> carriers(sorts.size());
  return SortedSet(std::move(sorts), std::move(carriers));
}

SortedSet SortedSet::final(std::vector<std::string> sorts) {
  std::vector<std::vector<Element>> carriers(sorts.size(), {Element::star()});
  return SortedSet(std::move(sorts), std::move(carriers));
}

std::optional<SortIndex> SortedSet::sort_index(std::string_view name) const {
  for (std::size_t s = 0; s < sorts_.size(); ++s)
    if (sorts_[s] == name) return s;
  return std::nullopt;
}

std::size_t SortedSet::total_size() const {
  std::size_t n = 0;
  for (const auto& c : carriers_) n += c.size();
  return n;
}

std::optional<ElemIndex> SortedSet::find(SortIndex s, const Element& e) const {
  const auto& c = carriers_[s];
  auto it = std::lower_bound(c.begin(), c.end(), e);
  if (it == c.end() || !(*it == e)) return std::nullopt;
  return static_cast<ElemIndex>(it - c.begin());
}

SortedMapping::SortedMapping(SortedSet source, SortedSet target,
                             SortedTable tables)
    : source_(std::move(source)),
      target_(std::move(target)),
      tables_(std::move(tables)) {
  if (source_.sorts() != target_.sorts())
    throw Error(ErrorKind::carrier_mismatch, "mapping between different sort sets");
  if (tables_.size() != source_.sort_count())
    throw Error(ErrorKind::invalid_argument, "one table per sort required");
  for (std::size_t s = 0; s < tables_.size(); ++s) {
    if (tables_[s].size() != source_.size(s))
      throw Error(ErrorKind::invalid_argument,
                  "mapping is not total at sort " + source_.sorts()[s]);
    for (ElemIndex y : tables_[s])
      if (y >= target_.size(s))
        throw Error(ErrorKind::invalid_argument,
                    "mapping leaves the target carrier at sort " +
                        source_.sorts()[s]);
  }
}

SortedMapping SortedMapping::identity(const SortedSet& a) {
  SortedTable t(a.sort_count());
  for (std::size_t s = 0; s < t.size(); ++s) {
    t[s].resize(a.size(s));
    for (std::size_t x = 0; x < t[s].size(); ++x) t[s][x] = static_cast<ElemIndex>(x);
  }
  return SortedMapping(a, a, std::move(t));
}

bool SortedMapping::is_injective() const {
  for (std::size_t s = 0; s < tables_.size(); ++s) {
    std::vector<bool> hit(target_.size(s));
    for (ElemIndex y : tables_[s]) {
      if (hit[y]) return false;
      hit[y] = true;
    }
  }
  return true;
}

bool SortedMapping::is_surjective() const {
  for (std::size_t s = 0; s < tables_.size(); ++s) {
    std::vector<bool> hit(target_.size(s));
    for (ElemIndex y : tables_[s]) hit[y] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  }
  return true;
}

SortedMapping compose(const SortedMapping& g, const SortedMapping& f) {
  if (!(f.target() == g.source()))
    throw Error(ErrorKind::source_mismatch, "composite of non-composable mappings");
  SortedTable t(f.tables().size());
  for (std::size_t s = 0; s < t.size(); ++s) {
    t[s].reserve(f.table(s).size());
    for (ElemIndex y : f.table(s)) t[s].push_back(g(s, y));
  }
  return SortedMapping(f.source(), g.target(), std::move(t));
}

SortedEquivalence::SortedEquivalence(SortedSet base, SortedTable labels)
    : base_(std::move(base)), labels_(std::move(labels)) {
  if (labels_.size() != base_.sort_count())
    throw Error(ErrorKind::partition_mismatch, "one labelling per sort required");
  counts_.resize(labels_.size());
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    if (labels_[s].size() != base_.size(s))
      throw Error(ErrorKind::partition_mismatch,
                  "labelling does not cover the carrier of sort " + base_.sorts()[s]);
    std::map<ElemIndex, ElemIndex> renumber;
    for (auto& l : labels_[s]) {
      auto [it, fresh] = renumber.try_emplace(l, static_cast<ElemIndex>(renumber.size()));
      l = it->second;
    }
    counts_[s] = renumber.size();
  }
}

SortedEquivalence SortedEquivalence::from_blocks(
    SortedSet base, const std::vector<std::vector<std::vector<Element>>>& blocks) {
  if (blocks.size() != base.sort_count())
    throw Error(ErrorKind::partition_mismatch, "one partition per sort required");
  SortedTable labels(base.sort_count());
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    labels[s].assign(base.size(s), kUnmapped);
    for (std::size_t b = 0; b < blocks[s].size(); ++b) {
      if (blocks[s][b].empty())
        throw Error(ErrorKind::partition_mismatch, "empty block");
      for (const auto& e : blocks[s][b]) {
        auto x = base.find(s, e);
        if (!x) throw Error(ErrorKind::partition_mismatch, "block element " + e.str() + " not in carrier");
        if (labels[s][*x] != kUnmapped)
          throw Error(ErrorKind::partition_mismatch, "blocks overlap at " + e.str());
        labels[s][*x] = static_cast<ElemIndex>(b);
      }
    }
    if (std::find(labels[s].begin(), labels[s].end(), kUnmapped) != labels[s].end())
      throw Error(ErrorKind::partition_mismatch,
                  "blocks do not cover the carrier of sort " + base.sorts()[s]);
  }
  return SortedEquivalence(std::move(base), std::move(labels));
}

SortedEquivalence SortedEquivalence::discrete(SortedSet base) {
  SortedTable labels(base.sort_count());
  for (std::size_t s = 0; s < labels.size(); ++s)
    for (std::size_t x = 0; x < base.size(s); ++x)
      labels[s].push_back(static_cast<ElemIndex>(x));
  return SortedEquivalence(std::move(base), std::move(labels));
}

SortedEquivalence SortedEquivalence::total(SortedSet base) {
  SortedTable labels(base.sort_count());
  for (std::size_t s = 0; s < labels.size(); ++s) labels[s].assign(base.size(s), 0);
  return SortedEquivalence(std::move(base), std::move(labels));
}

std::vector<std::vector<ElemIndex>> SortedEquivalence::blocks(SortIndex s) const {
  std::vector<std::vector<ElemIndex>> out(counts_[s]);
  for (std::size_t x = 0; x < labels_[s].size(); ++x)
    out[labels_[s][x]].push_back(static_cast<ElemIndex>(x));
  return out;
}

bool SortedEquivalence::refines(const SortedEquivalence& other) const {
  if (!(base_ == other.base_))
    throw Error(ErrorKind::source_mismatch, "equivalences on different sets");
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    std::vector<ElemIndex> image(counts_[s], kUnmapped);
    for (std::size_t x = 0; x < labels_[s].size(); ++x) {
      auto& slot = image[labels_[s][x]];
      if (slot == kUnmapped) slot = other.labels_[s][x];
      else if (slot != other.labels_[s][x]) return false;
    }
  }
  return true;
}

SortSet support(const SortedSet& a) {
  SortSet out;
  for (std::size_t s = 0; s < a.sort_count(); ++s)
    if (a.size(s) > 0) out.insert(s);
  return out;
}

namespace {

void check_family(const IndexedFamily& family) {
  if (family.index.size() != family.members.size())
    throw Error(ErrorKind::invalid_argument, "family index and members differ in length");
  for (const auto& m : family.members)
    if (m.sorts() != family.sorts)
      throw Error(ErrorKind::carrier_mismatch, "family member over a different sort set");
}

}  // namespace

ProductSet product(const IndexedFamily& family) {
  check_family(family);
  const std::size_t n = family.members.size();
  ProductSet out;
  std::vector<std::vector<Element>> carriers(family.sorts.size());
  for (std::size_t s = 0; s < family.sorts.size(); ++s) {
    std::vector<std::size_t> radices;
    for (const auto& m : family.members) radices.push_back(m.size(s));
    MixedRadix layout(radices);
    if (n == 0) {
      carriers[s].push_back(Element::star());
    } else {
      std::vector<ElemIndex> digits(n);
      for (std::size_t code = 0; code < layout.total(); ++code) {
        layout.decode(code, digits);
        std::vector<Element> parts;
        parts.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
          parts.push_back(family.members[i].carrier(s)[digits[i]]);
        carriers[s].push_back(Element::tuple(std::move(parts)));
      }
    }
    out.layout.push_back(std::move(layout));
  }
  out.set = SortedSet(family.sorts, std::move(carriers));
  for (std::size_t i = 0; i < n; ++i) {
    SortedTable t(family.sorts.size());
    for (std::size_t s = 0; s < t.size(); ++s) {
      std::vector<ElemIndex> digits(n);
      for (std::size_t code = 0; code < out.layout[s].total(); ++code) {
        out.layout[s].decode(code, digits);
        t[s].push_back(digits[i]);
      }
    }
    out.projections.emplace_back(out.set, family.members[i], std::move(t));
  }
  return out;
}

CoproductSet coproduct(const IndexedFamily& family) {
  check_family(family);
  const std::size_t k = family.sorts.size();
  CoproductSet out;
  std::vector<std::vector<Element>> carriers(k);
  out.origin.resize(k);
  for (std::size_t s = 0; s < k; ++s) {
    std::vector<std::pair<Element, std::pair<std::size_t, ElemIndex>>> tagged;
    for (std::size_t i = 0; i < family.members.size(); ++i)
      for (std::size_t x = 0; x < family.members[i].size(s); ++x)
        tagged.push_back({Element::tagged(family.members[i].carrier(s)[x], family.index[i]),
                          {i, static_cast<ElemIndex>(x)}});
    std::sort(tagged.begin(), tagged.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [e, o] : tagged) {
      carriers[s].push_back(e);
      out.origin[s].push_back(o);
    }
  }
  out.set = SortedSet(family.sorts, std::move(carriers));
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    SortedTable t(k);
    for (std::size_t s = 0; s < k; ++s) t[s].assign(family.members[i].size(s), kUnmapped);
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t c = 0; c < out.origin[s].size(); ++c)
        if (out.origin[s][c].first == i)
          t[s][out.origin[s][c].second] = static_cast<ElemIndex>(c);
    out.injections.emplace_back(family.members[i], out.set, std::move(t));
  }
  return out;
}

EqualizerSet equalizer(const SortedMapping& f, const SortedMapping& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw Error(ErrorKind::not_parallel, "equalizer of non-parallel mappings");
  const auto& a = f.source();
  std::vector<std::vector<Element>> carriers(a.sort_count());
  SortedTable emb(a.sort_count());
  for (std::size_t s = 0; s < a.sort_count(); ++s)
    for (std::size_t x = 0; x < a.size(s); ++x)
      if (f(s, static_cast<ElemIndex>(x)) == g(s, static_cast<ElemIndex>(x))) {
        carriers[s].push_back(a.carrier(s)[x]);
        emb[s].push_back(static_cast<ElemIndex>(x));
      }
  SortedSet e(a.sorts(), std::move(carriers));
  return {e, SortedMapping(e, a, std::move(emb))};
}

SortedEquivalence kernel(const SortedMapping& f) {
  return SortedEquivalence(f.source(), f.tables());
}

QuotientSet quotient(const SortedSet& a, const SortedEquivalence& phi) {
  if (!(phi.base() == a))
    throw Error(ErrorKind::source_mismatch, "equivalence is not on this set");
  std::vector<std::vector<Element>> carriers(a.sort_count());
  for (std::size_t s = 0; s < a.sort_count(); ++s)
    for (const auto& block : phi.blocks(s)) carriers[s].push_back(a.carrier(s)[block.front()]);
  // Blocks are numbered by least element and carriers are sorted, so block
  // numbers coincide with representative positions.
  QuotientSet out;
  out.set = SortedSet(a.sorts(), std::move(carriers));
  out.projection = SortedMapping(a, out.set, phi.labels());
  return out;
}

SortedMapping factor_through(const SortedMapping& f, const SortedEquivalence& phi) {
  if (!(phi.base() == f.source()))
    throw Error(ErrorKind::source_mismatch, "equivalence is not on the source of f");
  if (!phi.refines(kernel(f)))
    throw Error(ErrorKind::not_refining, "equivalence is not contained in the kernel");
  auto q = quotient(f.source(), phi);
  SortedTable t(f.tables().size());
  for (std::size_t s = 0; s < t.size(); ++s)
    for (const auto& block : phi.blocks(s)) t[s].push_back(f(s, block.front()));
  return SortedMapping(q.set, f.target(), std::move(t));
}

bool hom_exists(const SortedSet& a, const SortedSet& b) {
  if (a.sorts() != b.sorts()) throw Error(ErrorKind::carrier_mismatch, "different sort sets");
  auto sa = support(a), sb = support(b);
  return std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
}

bool constant_support(const IndexedFamily& family) {
  check_family(family);
  for (std::size_t i = 1; i < family.members.size(); ++i)
    if (support(family.members[i]) != support(family.members[0])) return false;
  return true;
}

SortSet common_support(const IndexedFamily& family) {
  check_family(family);
  SortSet out;
  for (std::size_t s = 0; s < family.sorts.size(); ++s) {
    bool all = true;
    for (const auto& m : family.members) all = all && m.size(s) > 0;
    if (all) out.insert(s);
  }
  return out;
}

}  // namespace msa
