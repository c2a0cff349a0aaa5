#include "msa/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "msa/error.hpp"
#include "msa/naturality.hpp"
#include "msa/retraction.hpp"

namespace msa {

bool Report::passed() const {
  return diagnostics.empty() &&
         std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::invalid_argument, "sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    out += buf;
  }
  return out;
}

nlohmann::json to_json(const Report& r, bool with_timings) {
  nlohmann::json j;
  j["schema"] = 1;
  j["command"] = r.command;
  j["digest"] = r.digest;
  j["passed"] = r.passed();
  auto& vs = j["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) vs.push_back({{"name", v.name}, {"passed", v.passed}, {"witness", v.witness}});
  auto& ds = j["diagnostics"] = nlohmann::json::array();
  for (const auto& d : r.diagnostics)
    ds.push_back({{"severity", d.severity},
                  {"code", d.code},
                  {"message", d.message},
                  {"line", d.line},
                  {"col", d.col},
                  {"related", d.related}});
  if (!r.extra.empty()) j["result"] = r.extra;
  if (with_timings) {
    auto& t = j["timings"] = nlohmann::json::array();
    for (const auto& [name, secs] : r.timings) t.push_back({{"name", name}, {"seconds", secs}});
  }
  return j;
}

std::string to_text(const Report& r, bool with_timings) {
  std::ostringstream out;
  for (const auto& d : r.diagnostics)
    out << d.line << ':' << d.col << ": " << d.severity << " [" << d.code << "] " << d.message << '\n';
  for (const auto& v : r.verdicts) {
    out << (v.passed ? "PASS " : "FAIL ") << v.name << '\n';
    for (const auto& w : v.witness) out << "  " << w << '\n';
  }
  if (!r.extra.empty()) out << r.extra.dump(2) << '\n';
  if (with_timings)
    for (const auto& [name, secs] : r.timings) out << "time " << name << ' ' << secs << "s\n";
  out << (r.passed() ? "ok" : "failed") << '\n';
  return out.str();
}

namespace {

Report start(std::vector<std::string> command, std::string_view text) {
  Report r;
  r.command = std::move(command);
  r.digest = "sha256:" + sha256_hex(text);
  return r;
}

// Parses into the report; returns nullopt after recording the diagnostics.
std::optional<InstanceFile> load(Report& r, std::string_view text) {
  auto p = parse(text);
  if (!p.ok()) {
    r.diagnostics = p.diagnostics;
    return std::nullopt;
  }
  return std::move(*p.file);
}

// Iso-based verdicts keep their note when they pass, so a report always says
// which side of the biconditional an instance landed on.
Verdict verdict(std::string name, bool ok, std::vector<std::string> witness = {}) {
  return Verdict{std::move(name), ok, std::move(witness)};
}

std::string iso_text(const IsoCheck& c) {
  if (c.cap_exceeded) return "isomorphism search exceeded the node cap";
  return c.found() ? "isomorphism found" : "no isomorphism";
}

}  // namespace

Report cmd_validate(std::string_view text) {
  auto r = start({"validate"}, text);
  auto file = load(r, text);
  if (!file) return r;
  for (const auto& item : file->items()) {
    std::string name = std::string(item_keyword(item)) + " " + item_name(item);
    std::vector<std::string> w;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, AlgebraItem>) {
            for (const auto& d : validate_algebra(x.algebra)) w.push_back(d.message);
          } else if constexpr (std::is_same_v<T, HomItem>) {
            if (!is_homomorphism(x.hom.mapping(), x.hom.source(), x.hom.target())) w.push_back("not a homomorphism");
          } else if constexpr (std::is_same_v<T, ProjSysItem> || std::is_same_v<T, IndSysItem>) {
            for (const auto& d : validate_system(x.system)) w.push_back(d.message);
          } else if constexpr (std::is_same_v<T, FilterItem>) {
            if (auto d = Filter::defect(x.filter.ground_size(), x.filter.members())) w.push_back(*d);
          }
        },
        item);
    r.verdicts.push_back(verdict(name, w.empty(), w));
  }
  return r;
}

namespace {

struct Checker {
  const InstanceFile& file;
  const CheckOptions& opts;
  Report& report;

  void timed(const std::string& name, const std::function<Verdict()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v = body();
    v.name = name;
    auto t1 = std::chrono::steady_clock::now();
    report.verdicts.push_back(std::move(v));
    report.timings.emplace_back(name, std::chrono::duration<double>(t1 - t0).count());
  }

  template <typename T>
  std::vector<const T*> all() const {
    std::vector<const T*> out;
    for (const auto& it : file.items())
      if (auto* x = std::get_if<T>(&it)) out.push_back(x);
    return out;
  }

  void prop25() {
    for (auto* d : all<IndSysItem>())
      timed("prop25 " + d->name, [&] {
        auto c = prop25_check(d->system, opts.max_iso_search);
        std::string note = std::string(c.constant_support ? "constant support" : "non-constant support") + ", " +
                           iso_text(c.iso);
        return verdict("", c.consistent && !c.iso.cap_exceeded, {note});
      });
  }

  void prop28() {
    for (auto* fam : all<FamilyItem>()) {
      auto run = [&](const std::string& fname, IndexSet core) {
        timed("prop28 " + fam->name + " / " + fname, [&] {
          auto c = prop28_check(fam->family, core, opts.max_iso_search);
          std::string note = std::string(c.constant_support ? "constant support" : "non-constant support") + ", " +
                             iso_text(c.iso);
          return verdict("", c.consistent && !c.iso.cap_exceeded, {note});
        });
      };
      for (auto* f : all<FilterItem>())
        if (f->on == fam->on) run(f->name, f->filter.core());
      for (auto* u : all<UltrafilterItem>())
        if (u->on == fam->on) run(u->name, IndexSet::single(u->ultra.point()));
    }
  }

  void prop29() {
    for (auto* fam : all<FamilyItem>()) {
      auto note = [](const ReducedVerdict& c) {
        return std::string(c.constant_support ? "constant support" : "non-constant support") + ", " +
               (c.remark_condition ? "supports in the filter" : "supports outside the filter") + ", " + iso_text(c.iso);
      };
      for (auto* f : all<FilterItem>())
        if (f->on == fam->on)
          timed("prop29 " + fam->name + " / " + f->name, [&] {
            auto c = prop29_check(fam->family, f->filter, opts.max_iso_search);
            return verdict("", c.consistent && !c.iso.cap_exceeded, {note(c)});
          });
      for (auto* u : all<UltrafilterItem>())
        if (u->on == fam->on)
          timed("prop29 " + fam->name + " / " + u->name, [&] {
            auto c = ultraproduct_check(fam->family, u->ultra, opts.max_iso_search);
            return verdict("", c.consistent && !c.iso.cap_exceeded, {note(c)});
          });
    }
  }

  struct Target {
    const ProjSysItem* sys;
    std::string ultra_name;
    Ultrafilter ultra;
  };

  // Declared ultrafilters containing the final sections, or every such
  // ultrafilter when none is declared.
  std::vector<Target> targets() const {
    std::vector<Target> out;
    for (auto* s : all<ProjSysItem>()) {
      const auto& p = s->system.index();
      auto fin = final_sections_filter(p);
      bool declared = false;
      for (auto* u : all<UltrafilterItem>())
        if (u->on == s->over && fin.subset_of(u->ultra.filter())) {
          out.push_back({s, u->name, u->ultra});
          declared = true;
        }
      if (!declared)
        for (const auto& u : ultrafilters_containing(fin)) out.push_back({s, "principal " + p.name(u.point()), u});
    }
    return out;
  }

  static RetractionInstance instance(const ProjectiveSystem& sys, const Ultrafilter& u) {
    return constant_support(sys.carriers()) ? RetractionInstance::make(sys, u) : RetractionInstance::unchecked(sys, u);
  }

  template <typename Body>
  void each_target(const std::string& what, Body body) {
    for (const auto& t : targets()) {
      std::string label = what + " " + t.sys->name + " @ " + t.ultra_name;
      body(t, label);
    }
  }

  static Verdict noted(Verdict v, const RetractionInstance& inst) {
    if (!v.passed && !inst.constant_support()) v.witness.insert(v.witness.begin(), "hypothesis violated: non-constant support");
    return v;
  }

  void retraction() {
    each_target("retraction", [&](const Target& t, const std::string& label) {
      auto inst = instance(t.sys->system, t.ultra);
      timed(label, [&] { return noted(retraction_check(inst), inst); });
      timed("votes " + label.substr(11), [&] { return noted(vote_structure_check(inst), inst); });
      timed("degenerate-shape " + label.substr(11), [&] { return noted(degenerate_shape_check(inst), inst); });
    });
  }

  void naturality() {
    each_target("naturality", [&](const Target& t, const std::string& label) {
      auto a = instance(t.sys->system, t.ultra);
      const std::pair<const char*, SystemMorphism (*)(const ProjectiveSystem&)> kinds[] = {
          {"identity", identity_morphism}, {"diagonal", diagonal_morphism}, {"collapse", collapse_morphism}};
      for (const auto& [kname, make] : kinds)
        timed(label + " " + kname, [&] {
          auto u = make(t.sys->system);
          auto b = instance(u.target, t.ultra);
          return noted(naturality_check({a, b, u}), a);
        });
    });
  }

  void cylinder() {
    each_target("cylinder", [&](const Target& t, const std::string& label) {
      auto a = instance(t.sys->system, t.ultra);
      const auto& p = t.sys->system.index();
      for (const auto& phi : subset_inclusions(p, t.ultra.point()))
        timed(label + " " + subset_name(p, phi.image(IndexSet::full(phi.source().size()))), [&] {
          const auto& src = phi.source();
          auto su = Ultrafilter::principal(src.size(), *src.index_of(p.name(t.ultra.point())));
          return guarded([&] { return cylinder_check(reindex(phi, su, a)); }, a);
        });
    });
  }

  void composition() {
    each_target("composition", [&](const Target& t, const std::string& label) {
      auto a = instance(t.sys->system, t.ultra);
      const auto& w = t.sys->system.index();
      const std::string point = w.name(t.ultra.point());
      for (const auto& psi : subset_inclusions(w, t.ultra.point())) {
        const auto& mid = psi.source();
        for (const auto& phi : subset_inclusions(mid, *mid.index_of(point))) {
          const auto& src = phi.source();
          std::string chain = subset_name(w, compose(psi, phi).image(IndexSet::full(src.size()))) + " ⊆ " +
                              subset_name(w, psi.image(IndexSet::full(mid.size())));
          timed(label + " " + chain, [&] {
            auto su = Ultrafilter::principal(src.size(), *src.index_of(point));
            return guarded([&] { return composition_check(phi, psi, su, a); }, a);
          });
        }
      }
    });
  }

  template <typename F>
  static Verdict guarded(F f, const RetractionInstance& a) {
    try {
      return noted(f(), a);
    } catch (const Error& e) {
      return noted(verdict("", false, {e.what()}), a);
    }
  }
};

}  // namespace

Report cmd_check(std::string_view text, const CheckOptions& opts) {
  if (std::find_if(std::begin(kCheckNames), std::end(kCheckNames), [&](const char* n) { return opts.which == n; }) ==
      std::end(kCheckNames))
    throw Error(ErrorKind::invalid_argument, "unknown check " + opts.which);
  auto r = start({"check", "--check", opts.which, "--max-iso-search", std::to_string(opts.max_iso_search)}, text);
  auto file = load(r, text);
  if (!file) return r;
  Checker c{*file, opts, r};
  const bool all = opts.which == "all";
  if (all || opts.which == "prop25") c.prop25();
  if (all || opts.which == "prop28") c.prop28();
  if (all || opts.which == "prop29") c.prop29();
  if (all || opts.which == "retraction") c.retraction();
  if (all || opts.which == "naturality") c.naturality();
  if (all || opts.which == "cylinder") c.cylinder();
  if (all || opts.which == "composition") c.composition();
  return r;
}

namespace {

std::string fresh_name(const InstanceFile& f, std::string base) {
  if (!f.find(base)) return base;
  for (int k = 2;; ++k)
    if (!f.find(base + std::to_string(k))) return base + std::to_string(k);
}

void describe(Report& r, const std::string& what, const std::string& source, const std::string& emitted,
              const Algebra& a) {
  nlohmann::json sizes = nlohmann::json::object();
  for (SortIndex s = 0; s < a.carrier().sort_count(); ++s) sizes[a.carrier().sorts()[s]] = a.size(s);
  r.extra = {{"construct", what}, {"source", source}, {"emitted", emitted}, {"sizes", sizes}};
}

template <typename T>
const std::string& over_of(const InstanceFile& f, const T& item) {
  return f.get<AlgebraItem>(item.at.front().second)->over;
}

}  // namespace

ConstructResult cmd_construct(std::string_view text, std::string_view what, std::string_view name,
                              const std::optional<std::string>& filter) {
  ConstructResult out;
  auto& r = out.report;
  std::vector<std::string> cmd{"construct", std::string(what), std::string(name)};
  if (filter) cmd.insert(cmd.end(), {"--filter", *filter});
  r = start(cmd, text);
  auto parsed = load(r, text);
  if (!parsed) return out;
  InstanceFile file = std::move(*parsed);
  const std::string src(name);
  auto fail = [&](std::string msg) { r.verdicts.push_back(verdict("construct " + std::string(what), false, {msg})); };

  std::optional<Algebra> built;
  std::string over;
  if (what == "projlim") {
    auto* s = file.get<ProjSysItem>(src);
    if (!s) {
      fail("no projsys named " + src);
      return out;
    }
    built = projective_limit(s->system).apex;
    over = over_of(file, *s);
  } else if (what == "indlim") {
    auto* s = file.get<IndSysItem>(src);
    if (!s) {
      fail("no indsys named " + src);
      return out;
    }
    built = inductive_limit(s->system).apex;
    over = over_of(file, *s);
  } else if (what == "ultraproduct" || what == "reducedproduct") {
    auto* fam = file.get<FamilyItem>(src);
    if (!fam) {
      fail("no family named " + src);
      return out;
    }
    const bool ultra_only = what == "ultraproduct";
    std::optional<Filter> f;
    std::optional<std::size_t> point;
    for (const auto& it : file.items()) {
      if (filter && item_name(it) != *filter) continue;
      if (auto* u = std::get_if<UltrafilterItem>(&it); u && u->on == fam->on) {
        f = u->ultra.filter();
        point = u->ultra.point();
      } else if (auto* g = std::get_if<FilterItem>(&it); g && g->on == fam->on && !ultra_only) {
        f = g->filter;
      } else {
        continue;
      }
      break;
    }
    if (!f) {
      fail(std::string(ultra_only ? "no ultrafilter" : "no filter") + " on " + fam->on +
           (filter ? " named " + *filter : ""));
      return out;
    }
    built = reduced_product(reduced_product_system(fam->family, *f)).apex;
    over = over_of(file, *fam);
    if (point) {
      auto c = compare_algebras(*built, fam->family.members[*point], kDefaultIsoNodeCap);
      r.verdicts.push_back(verdict("ultraproduct ≅ member at " + fam->family.index[*point], c.found(), {iso_text(c)}));
    }
  } else {
    throw Error(ErrorKind::invalid_argument, "unknown construction " + std::string(what));
  }
  const std::string emitted = fresh_name(file, src + "_" + std::string(what));
  try {
    file.add_algebra(emitted, over, atomize(*built));
  } catch (const Error& e) {
    fail(e.what());
    return out;
  }
  r.verdicts.push_back(verdict("construct " + std::string(what), true));
  describe(r, std::string(what), src, emitted, *built);
  out.emitted = serialize(file);
  return out;
}

std::string cmd_gen(const GeneratorConfig& cfg) { return serialize(generate_instance(cfg)); }

}  // namespace msa
