// msa: validate, check, construct and generate finite many-sorted instances.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "msa/cli.hpp"
#include "msa/error.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct Output {
  bool json = false;
  bool timings = false;
  std::string out;

  int emit(msa::Report r, const std::string& file) {
    r.command.insert(r.command.begin() + 1, file);
    std::string text = json ? msa::to_json(r, timings).dump(2) + "\n" : msa::to_text(r, timings);
    if (out.empty()) std::cout << text;
    else spill(out, text);
    return r.passed() ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite many-sorted algebra instances: validation, constructions and theorem checks."};
  app.require_subcommand(1);

  Output o;
  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "JSON report");
    sub->add_option("--out", o.out, "write the report here instead of stdout");
  };

  std::string file;
  auto* validate = app.add_subcommand("validate", "run every structural validator");
  validate->add_option("file", file, ".msa file")->required();
  common(validate);

  msa::CheckOptions copts;
  auto* check = app.add_subcommand("check", "run theorem checks on every applicable declaration");
  check->add_option("file", file, ".msa file")->required();
  check->add_option("--check", copts.which, "all|prop25|prop28|prop29|retraction|naturality|cylinder|composition")
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(msa::kCheckNames), std::end(msa::kCheckNames))));
  check->add_option("--max-iso-search", copts.max_iso_search, "node cap for isomorphism search");
  check->add_flag("--timings", o.timings, "include per-check timings");
  common(check);

  std::string what, name, emit;
  std::optional<std::string> filter;
  auto* construct = app.add_subcommand("construct", "build a limit or product and emit it as a declaration");
  construct->add_option("file", file, ".msa file")->required();
  construct->add_option("what", what, "projlim|indlim|ultraproduct|reducedproduct")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(msa::kConstructNames), std::end(msa::kConstructNames))));
  construct->add_option("name", name, "system or family to construct from")->required();
  construct->add_option("--filter", filter, "filter or ultrafilter for the product constructions");
  construct->add_option("--emit", emit, "write the extended .msa file here");
  common(construct);

  msa::GeneratorConfig g;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "write a seeded random instance");
  gen->add_option("--seed", g.seed, "64-bit seed");
  gen->add_option("--sorts", g.max_sorts, "at most this many sorts (1..4)");
  gen->add_option("--carrier", g.max_carrier, "carrier size cap per sort (2..4)");
  gen->add_option("--ops", g.max_ops, "at most this many operations (0..4)");
  gen->add_option("--index", g.max_index, "index size cap (1..5)");
  gen->add_option("--arity", g.max_arity, "arity cap (0..3)");
  gen->add_flag("--force-constant-support", g.force_constant_support);
  gen->add_flag("--force-surjective", g.force_surjective, "surjective transitions; implies constant support");
  gen->add_flag("--inject-support-violation", g.inject_support_violation);
  gen->add_option("--out", gen_out, "write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every real usage error is 2
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*validate) return o.emit(msa::cmd_validate(slurp(file)), file);
    if (*check) return o.emit(msa::cmd_check(slurp(file), copts), file);
    if (*construct) {
      auto res = msa::cmd_construct(slurp(file), what, name, filter);
      if (!emit.empty() && !res.emitted.empty()) spill(emit, res.emitted);
      return o.emit(std::move(res.report), file);
    }
    auto text = msa::cmd_gen(g);
    if (gen_out.empty()) std::cout << text;
    else spill(gen_out, text);
    return 0;
  } catch (const msa::Error& e) {
    std::cerr << "msa: " << msa::to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "msa: " << e.what() << '\n';
    return 2;
  }
}
