#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msa/cli.hpp"
#include "msa/error.hpp"
#include "oracles.hpp"

using namespace msa;

namespace {

const std::string kChain2 = oracle::kChain2Text;

// Two members over 0 ≤ 1: sort t is empty below and inhabited above.
const std::string kUneven = R"(sorts s t;
signature Sig {
}
algebra Low over Sig {
  carrier s = { a };
}
algebra High over Sig {
  carrier s = { a };
  carrier t = { b };
}
hom j : Low -> High {
  s : a -> a;
}
preorder I {
  elems 0 1;
  le 0 1;
}
indsys D over I {
  at 0 = Low;
  at 1 = High;
  map 0 -> 1 = j;
}
)";

const std::string kSingle = R"(sorts s;
signature Sig {
  op f : s -> s;
}
algebra A over Sig {
  carrier s = { 0 1 2 };
  op f(0) = 1;
  op f(1) = 2;
  op f(2) = 0;
}
preorder One {
  elems p;
}
indsys D over One {
  at p = A;
}
projsys P over One {
  at p = A;
}
)";

const Verdict* find(const Report& r, const std::string& name) {
  for (const auto& v : r.verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

template <class F>
std::optional<ErrorKind> kind_of(F call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

bool mentions(const Verdict& v, const std::string& needle) {
  for (const auto& w : v.witness)
    if (w.find(needle) != std::string::npos) return true;
  return false;
}

std::filesystem::path scratch(const std::string& name, const std::string& text) {
  auto dir = std::filesystem::temp_directory_path() / "msa_cli_test";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

int run(const std::string& args) {
  std::string cmd = std::string(MSA_BIN) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("validate") {
  CHECK(cmd_validate("").passed());
  CHECK(cmd_validate(kChain2).passed());

  auto bad = kChain2;
  bad.replace(bad.find("op f(1) = 1;"), 12, "op f(1) = z;");
  auto r = cmd_validate(bad);
  CHECK_FALSE(r.passed());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics.front().line == 11);
  CHECK(r.diagnostics.front().col == 13);
}

TEST_CASE("check on CHAIN2") {
  auto r = cmd_check(kChain2, {"retraction"});
  CHECK(r.passed());
  CHECK_FALSE(r.verdicts.empty());
  auto all = cmd_check(kChain2, {});
  CHECK(all.passed());
  CHECK(all.verdicts.size() >= r.verdicts.size());
}

TEST_CASE("check reports a non-constant inductive system as consistent, without isomorphism") {
  auto r = cmd_check(kUneven, {"prop25"});
  REQUIRE(r.verdicts.size() == 1);
  const auto& v = r.verdicts.front();
  CHECK(v.passed);
  CHECK(mentions(v, "non-constant support"));
  CHECK(mentions(v, "no isomorphism"));
}

TEST_CASE("check on a one-point index") {
  auto r = cmd_check(kSingle, {});
  CHECK(r.passed());
  CHECK_FALSE(r.verdicts.empty());
  CHECK(kind_of([] { cmd_check(kSingle, {"bogus"}); }) == ErrorKind::invalid_argument);
}

TEST_CASE("construct projlim") {
  auto res = cmd_construct(kChain2, "projlim", "P");
  CHECK(res.report.passed());
  CHECK(res.report.extra["emitted"] == "P_projlim");
  CHECK(res.report.extra["sizes"]["s"] == 2);
  auto back = parse(res.emitted);
  REQUIRE(back.ok());
  const auto* lim = back.file->get<AlgebraItem>("P_projlim");
  REQUIRE(lim);
  CHECK(lim->algebra.size(0) == 2);
}

TEST_CASE("construct indlim over one point copies the member") {
  auto res = cmd_construct(kSingle, "indlim", "D");
  CHECK(res.report.passed());
  auto back = parse(res.emitted);
  REQUIRE(back.ok());
  const auto* a = back.file->get<AlgebraItem>("A");
  const auto* lim = back.file->get<AlgebraItem>("D_indlim");
  REQUIRE(a);
  REQUIRE(lim);
  CHECK(find_isomorphism(a->algebra, lim->algebra, kDefaultIsoNodeCap).has_value());
}

TEST_CASE("construct ultraproduct") {
  auto res = cmd_construct(kChain2, "ultraproduct", "Fam", std::string("U"));
  CHECK(res.report.passed());
  const auto* v = find(res.report, "ultraproduct ≅ member at 1");
  REQUIRE(v);
  CHECK(v->passed);
  CHECK(res.report.extra["emitted"] == "Fam_ultraproduct");
  CHECK(kind_of([] { cmd_construct(kChain2, "nosuch", "Fam"); }) == ErrorKind::invalid_argument);
}

TEST_CASE("gen") {
  GeneratorConfig cfg;
  cfg.seed = 7;
  CHECK(cmd_gen(cfg) == cmd_gen(cfg));
  CHECK(cmd_validate(cmd_gen(cfg)).passed());

  cfg.force_surjective = true;
  auto surj = parse(cmd_gen(cfg));
  REQUIRE(surj.ok());
  const auto* p = surj.file->get<ProjSysItem>("P");
  REQUIRE(p);
  CHECK(constant_support(p->system.carriers()));
  for (const auto& [ij, h] : p->system.transitions()) CHECK(h.is_surjective());

  GeneratorConfig bad;
  bad.seed = 3;
  bad.inject_support_violation = true;
  bad.max_index = 3;
  auto viol = parse(cmd_gen(bad));
  REQUIRE(viol.ok());
  const auto* q = viol.file->get<ProjSysItem>("P");
  REQUIRE(q);
  CHECK_FALSE(constant_support(q->system.carriers()));
}

TEST_CASE("report format") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  auto r = cmd_check(kChain2, {"retraction"});
  CHECK(r.digest == "sha256:" + sha256_hex(kChain2));
  auto j = to_json(r);
  CHECK(j["schema"] == 1);
  CHECK(j["passed"] == true);
  CHECK(j["digest"] == r.digest);
  CHECK(j.contains("verdicts"));
  CHECK(j.contains("diagnostics"));
  CHECK_FALSE(j.contains("timings"));
  CHECK(to_json(r, true).contains("timings"));
  CHECK(to_json(r).dump() == to_json(cmd_check(kChain2, {"retraction"})).dump());

  auto bad = to_json(cmd_validate("sorts s s;"));
  CHECK(bad["passed"] == false);
  REQUIRE(bad["diagnostics"].size() == 1);
  CHECK(bad["diagnostics"][0]["line"] == 1);
  CHECK(bad["diagnostics"][0]["col"] == 9);
}

TEST_CASE("exit codes of the binary") {
  auto good = scratch("chain2.msa", kChain2);
  auto broken = scratch("broken.msa", "sorts s s;\n");
  CHECK(run("validate " + good.string()) == 0);
  CHECK(run("check " + good.string() + " --check retraction --json") == 0);
  CHECK(run("validate " + broken.string()) == 1);
  CHECK(run("check " + good.string() + " --check bogus") == 2);
  CHECK(run("validate /nonexistent/file.msa") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("--help") == 0);

  auto out = std::filesystem::temp_directory_path() / "msa_cli_test" / "lim.msa";
  std::filesystem::remove(out);
  CHECK(run("construct " + good.string() + " projlim P --emit " + out.string()) == 0);
  REQUIRE(std::filesystem::exists(out));
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(cmd_validate(buf.str()).passed());
}
