#include "msa/isomorphism.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "msa/error.hpp"

namespace msa {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix64 finalizer over the running hash.
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Elements addressed by one global id per algebra: offset[s] + x.
struct Flat {
  std::vector<std::size_t> offset;
  std::vector<SortIndex> sort_of;
  explicit Flat(const Algebra& a) {
    std::size_t n = 0;
    for (std::size_t s = 0; s < a.carrier().sort_count(); ++s) {
      offset.push_back(n);
      n += a.size(s);
      sort_of.resize(n, s);
    }
  }
  std::size_t size() const { return sort_of.size(); }
};

// Iso-invariant colouring by iterated refinement over the operation tables.
// Run on both algebras in lockstep; nullopt means the histograms diverged.
std::optional<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> refine(
    const Algebra& a, const Flat& fa, const Algebra& b, const Flat& fb) {
  const auto& sig = a.signature();
  auto init = [](const Flat& f) {
    std::vector<std::uint64_t> c(f.size());
    for (std::size_t g = 0; g < f.size(); ++g) c[g] = mix(0x5eed, f.sort_of[g]);
    return c;
  };
  std::vector<std::uint64_t> ca = init(fa), cb = init(fb);

  auto round = [&](const Algebra& alg, const Flat& f, const std::vector<std::uint64_t>& c) {
    std::vector<std::vector<std::uint64_t>> contrib(f.size());
    std::vector<ElemIndex> args;
    for (std::size_t k = 0; k < sig.op_count(); ++k) {
      const auto& ar = sig.op(k).arity;
      const auto& lay = alg.arg_layout(k);
      args.resize(ar.word.size());
      for (std::size_t code = 0; code < lay.total(); ++code) {
        lay.decode(code, args);
        std::size_t r = f.offset[ar.result] + alg.table(k)[code];
        std::uint64_t all = mix(k, 0xa5);
        for (std::size_t p = 0; p < args.size(); ++p) all = mix(all, c[f.offset[ar.word[p]] + args[p]]);
        contrib[r].push_back(mix(all, 0x7e5));
        for (std::size_t p = 0; p < args.size(); ++p)
          contrib[f.offset[ar.word[p]] + args[p]].push_back(mix(mix(all, p + 1), c[r]));
      }
    }
    std::vector<std::uint64_t> next(f.size());
    for (std::size_t g = 0; g < f.size(); ++g) {
      auto& v = contrib[g];
      std::sort(v.begin(), v.end());
      std::uint64_t h = c[g];
      for (auto x : v) h = mix(h, x);
      next[g] = h;
    }
    return next;
  };

  auto histogram = [](const std::vector<std::uint64_t>& c) {
    std::vector<std::uint64_t> h = c;
    std::sort(h.begin(), h.end());
    return h;
  };
  auto classes = [](const std::vector<std::uint64_t>& c) {
    std::vector<std::uint64_t> h = c;
    std::sort(h.begin(), h.end());
    return static_cast<std::size_t>(std::unique(h.begin(), h.end()) - h.begin());
  };

  if (histogram(ca) != histogram(cb)) return std::nullopt;
  std::size_t count = classes(ca);
  for (std::size_t iter = 0; iter <= fa.size(); ++iter) {
    auto na = round(a, fa, ca);
    auto nb = round(b, fb, cb);
    if (histogram(na) != histogram(nb)) return std::nullopt;
    std::size_t next_count = classes(na);
    ca = std::move(na);
    cb = std::move(nb);
    if (next_count == count) break;
    count = next_count;
  }
  std::map<std::uint64_t, std::uint32_t> ids;
  for (auto x : ca) ids.try_emplace(x, static_cast<std::uint32_t>(ids.size()));
  std::vector<std::uint32_t> la(ca.size()), lb(cb.size());
  for (std::size_t g = 0; g < ca.size(); ++g) la[g] = ids.at(ca[g]);
  for (std::size_t g = 0; g < cb.size(); ++g) lb[g] = ids.at(cb[g]);
  return std::make_pair(std::move(la), std::move(lb));
}

// Backtracking over sortwise maps A → B with forward propagation: once all
// arguments of a table entry are mapped, the image of its value is forced.
class MapSearch {
 public:
  MapSearch(const Algebra& a, const Algebra& b, bool bijective, std::size_t node_cap)
      : a_(a), b_(b), fa_(a), fb_(b), bijective_(bijective), node_cap_(node_cap) {
    const auto& sig = a.signature();
    uses_.resize(fa_.size());
    std::vector<ElemIndex> args;
    for (std::size_t k = 0; k < sig.op_count(); ++k) {
      const auto& ar = sig.op(k).arity;
      const auto& lay = a.arg_layout(k);
      args.resize(ar.word.size());
      for (std::size_t code = 0; code < lay.total(); ++code) {
        lay.decode(code, args);
        for (std::size_t p = 0; p < args.size(); ++p) {
          auto& u = uses_[fa_.offset[ar.word[p]] + args[p]];
          if (u.empty() || u.back() != std::make_pair(k, code)) u.emplace_back(k, code);
        }
      }
    }
    map_.assign(fa_.size(), kUnmapped);
    used_.assign(fb_.size(), 0);
    color_a_.assign(fa_.size(), 0);
    color_b_.assign(fb_.size(), 0);
  }

  void set_colors(std::vector<std::uint32_t> ca, std::vector<std::uint32_t> cb) {
    color_a_ = std::move(ca);
    color_b_ = std::move(cb);
  }

  // Calls `emit` on each complete map; stops when emit returns false.
  template <class Emit>
  void run(Emit&& emit) {
    const auto& sig = a_.signature();
    for (std::size_t k = 0; k < sig.op_count(); ++k)
      if (sig.op(k).arity.word.empty()) {
        SortIndex s = sig.op(k).arity.result;
        if (!assign(s, a_.table(k)[0], b_.table(k)[0])) return;
      }
    descend(0, emit);
  }

 private:
  bool assign(SortIndex s, ElemIndex x, ElemIndex y) {
    std::vector<std::pair<SortIndex, std::pair<ElemIndex, ElemIndex>>> queue{{s, {x, y}}};
    while (!queue.empty()) {
      auto [t, xy] = queue.back();
      queue.pop_back();
      auto [u, v] = xy;
      std::size_t ga = fa_.offset[t] + u, gb = fb_.offset[t] + v;
      if (map_[ga] != kUnmapped) {
        if (map_[ga] != v) return false;
        continue;
      }
      if (color_a_[ga] != color_b_[gb]) return false;
      if (bijective_ && used_[gb]) return false;
      map_[ga] = v;
      ++used_[gb];
      trail_.push_back(ga);
      if (!propagate(ga, queue)) return false;
    }
    return true;
  }

  bool propagate(std::size_t ga,
                 std::vector<std::pair<SortIndex, std::pair<ElemIndex, ElemIndex>>>& queue) {
    const auto& sig = a_.signature();
    for (auto [k, code] : uses_[ga]) {
      const auto& ar = sig.op(k).arity;
      args_.resize(ar.word.size());
      image_.resize(ar.word.size());
      a_.arg_layout(k).decode(code, args_);
      bool ready = true;
      for (std::size_t p = 0; p < args_.size() && ready; ++p) {
        image_[p] = map_[fa_.offset[ar.word[p]] + args_[p]];
        ready = image_[p] != kUnmapped;
      }
      if (!ready) continue;
      ElemIndex ra = a_.table(k)[code];
      ElemIndex rb = b_.apply(k, image_);
      ElemIndex current = map_[fa_.offset[ar.result] + ra];
      if (current == kUnmapped) queue.push_back({ar.result, {ra, rb}});
      else if (current != rb) return false;
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      std::size_t ga = trail_.back();
      trail_.pop_back();
      --used_[fb_.offset[fa_.sort_of[ga]] + map_[ga]];
      map_[ga] = kUnmapped;
    }
  }

  template <class Emit>
  bool descend(std::size_t from, Emit& emit) {
    std::size_t ga = from;
    while (ga < fa_.size() && map_[ga] != kUnmapped) ++ga;
    if (ga == fa_.size()) {
      SortedTable t(a_.carrier().sort_count());
      for (std::size_t g = 0; g < fa_.size(); ++g) t[fa_.sort_of[g]].push_back(map_[g]);
      return emit(std::move(t));
    }
    SortIndex s = fa_.sort_of[ga];
    ElemIndex x = static_cast<ElemIndex>(ga - fa_.offset[s]);
    for (ElemIndex y = 0; y < b_.size(s); ++y) {
      if (++nodes_ > node_cap_)
        throw Error(ErrorKind::cap_exceeded, "search exceeded " + std::to_string(node_cap_) + " nodes");
      std::size_t mark = trail_.size();
      if (assign(s, x, y)) {
        if (!descend(ga + 1, emit)) {
          undo(mark);
          return false;
        }
      }
      undo(mark);
    }
    return true;
  }

  const Algebra& a_;
  const Algebra& b_;
  Flat fa_, fb_;
  bool bijective_;
  std::size_t node_cap_;
  std::size_t nodes_ = 0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> uses_;
  std::vector<ElemIndex> map_;
  std::vector<std::uint32_t> used_;
  std::vector<std::uint32_t> color_a_, color_b_;
  std::vector<std::size_t> trail_;
  std::vector<ElemIndex> args_, image_;
};

}  // namespace

std::optional<Homomorphism> find_isomorphism(const Algebra& a, const Algebra& b,
                                             std::size_t node_cap) {
  if (!same_signature(a.signature_ptr(), b.signature_ptr()))
    throw Error(ErrorKind::signature_mismatch, "algebras over different signatures");
  for (std::size_t s = 0; s < a.carrier().sort_count(); ++s)
    if (a.size(s) != b.size(s)) return std::nullopt;
  MapSearch search(a, b, true, node_cap);
  auto colors = refine(a, Flat(a), b, Flat(b));
  if (!colors) return std::nullopt;
  search.set_colors(std::move(colors->first), std::move(colors->second));
  std::optional<Homomorphism> found;
  search.run([&](SortedTable t) {
    found = Homomorphism(Homomorphism::Unchecked{}, a, b, std::move(t));
    return false;
  });
  return found;
}

std::vector<Homomorphism> enumerate_homomorphisms(const Algebra& a, const Algebra& b,
                                                  std::size_t cap) {
  if (!same_signature(a.signature_ptr(), b.signature_ptr()))
    throw Error(ErrorKind::signature_mismatch, "algebras over different signatures");
  // ∏ |B_s|^|A_s|, saturating at cap + 1.
  std::size_t bound = 1;
  for (std::size_t s = 0; s < a.carrier().sort_count(); ++s)
    for (std::size_t x = 0; x < a.size(s); ++x) {
      if (b.size(s) == 0) return {};
      bound = bound > cap / b.size(s) ? cap + 1 : bound * b.size(s);
    }
  if (bound > cap)
    throw Error(ErrorKind::cap_exceeded, "more than " + std::to_string(cap) + " candidate maps");
  std::vector<Homomorphism> out;
  MapSearch search(a, b, false, cap * (a.carrier().total_size() + 1) + 1);
  search.run([&](SortedTable t) {
    out.emplace_back(Homomorphism::Unchecked{}, a, b, std::move(t));
    return true;
  });
  return out;
}

}  // namespace msa
