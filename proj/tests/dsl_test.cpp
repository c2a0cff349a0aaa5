#include <doctest.h>

#include <regex>

#include "msa/dsl.hpp"
#include "msa/error.hpp"
#include "msa/retraction.hpp"
#include "oracles.hpp"

using namespace msa;

namespace {

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

const Diagnostic& first(const ParseResult& r) {
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  return r.diagnostics.front();
}

const std::string kChain2 = oracle::kChain2Text;

}  // namespace

TEST_CASE("the empty file") {
  auto r = parse("");
  REQUIRE(r.ok());
  CHECK(r.file->empty());
  CHECK(serialize(*r.file).empty());
  CHECK(parse("  # just a comment\n\n").file->empty());
}

TEST_CASE("CHAIN2 loads and validates") {
  auto r = parse(kChain2);
  REQUIRE(r.ok());
  const auto& f = *r.file;
  REQUIRE(f.sorts());
  CHECK(*f.sorts() == std::vector<std::string>{"s"});
  const auto* p = f.get<ProjSysItem>("P");
  REQUIRE(p);
  CHECK(validate_system(p->system).empty());
  CHECK(p->system.transitions().size() == 3);
  CHECK(p->system.transition(0, 1) == Homomorphism::identity(p->system.algebra(0)));
  const auto* d = f.get<IndSysItem>("D");
  REQUIRE(d);
  CHECK(validate_system(d->system).empty());
  const auto* u = f.get<UltrafilterItem>("U");
  REQUIRE(u);
  CHECK(u->ultra.point() == 1);
  CHECK(f.get<FilterItem>("Fin")->filter == final_sections_filter(p->system.index()));
  CHECK(f.get<FamilyItem>("Fam")->family.size() == 2);
  CHECK(f.get<AlgebraItem>("P") == nullptr);

  auto inst = RetractionInstance::make(p->system, u->ultra);
  CHECK(retraction_check(inst).passed);
}

TEST_CASE("CHAIN2 round trip") {
  auto f = *parse(kChain2).file;
  auto text = serialize(f);
  auto back = parse(text);
  REQUIRE(back.ok());
  CHECK(*back.file == f);
  CHECK(serialize(*back.file) == text);
}

TEST_CASE("seeded round trips") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    auto f = generate_instance(cfg);
    auto back = parse(serialize(f));
    REQUIRE(back.ok());
    CHECK(*back.file == f);
  }
}

TEST_CASE("codomain diagnostic") {
  auto r = parse(replace_once(kChain2, "op f(1) = 1;", "op f(1) = z;"));
  const auto& d = first(r);
  CHECK(d.code == "codomain");
  CHECK(d.line == 11);
  CHECK(d.col == 13);
  CHECK(d.related == "A");
}

TEST_CASE("resolve, duplicate and lex diagnostics") {
  auto undefined = parse(replace_once(kChain2, "at 1 = A;", "at 1 = Q;"));
  CHECK(first(undefined).code == "resolve");
  CHECK(first(undefined).related == "P");

  auto twice = parse(replace_once(kChain2, "hom id", "hom A"));
  CHECK(first(twice).code == "duplicate");

  auto bang = parse("sorts s!;");
  CHECK(first(bang).code == "lex");
  CHECK(first(bang).col == 8);

  auto sort_twice = parse("sorts s s;");
  CHECK(first(sort_twice).code == "duplicate");
  CHECK(first(sort_twice).col == 9);
}

TEST_CASE("table diagnostics") {
  auto missing = parse(replace_once(kChain2, "  op f(1) = 1;\n", ""));
  CHECK(first(missing).code == "incomplete");
  CHECK(first(missing).line == 8);
  CHECK(first(missing).col == 9);

  auto arity = parse(replace_once(kChain2, "op f(1) = 1;", "op f(1, 0) = 1;"));
  CHECK(first(arity).code == "arity");

  auto image = parse(replace_once(kChain2, "s : 0 -> 0, 1 -> 1;", "s : 0 -> 0;"));
  CHECK(first(image).code == "incomplete");

  auto outside = parse(replace_once(kChain2, "s : 0 -> 0, 1 -> 1;", "s : 0 -> 0, 1 -> 2;"));
  CHECK(first(outside).code == "codomain");
  CHECK(first(outside).col == 20);
}

TEST_CASE("homomorphism and system diagnostics") {
  const std::string twoalg = R"(sorts s;
signature Sig {
  op f : s -> s;
}
algebra A over Sig {
  carrier s = { 0 1 };
  op f(0) = 0;
  op f(1) = 1;
}
algebra B over Sig {
  carrier s = { 0 1 };
  op f(0) = 1;
  op f(1) = 0;
}
)";
  auto bad_hom = parse(twoalg + "hom h : A -> B {\n  s : 0 -> 0, 1 -> 0;\n}\n");
  const auto& d = first(bad_hom);
  CHECK(d.code == to_string(ErrorKind::not_a_homomorphism));
  CHECK(d.line == 15);
  CHECK(d.col == 5);

  auto against = parse(kChain2 + "\nprojsys Q over I {\n  at 0 = A;\n  at 1 = A;\n  map 0 -> 1 = id;\n}\n");
  CHECK(first(against).code == "order");

  auto gap = parse(replace_once(kChain2, "  map 1 -> 0 = id;\n", ""));
  CHECK(first(gap).code == to_string(ErrorKind::invalid_system));
  CHECK(first(gap).related == "P");

  auto noalg = parse(replace_once(kChain2, "  at 1 = A;\n  map 1 -> 0 = id;", "  map 1 -> 0 = id;"));
  CHECK_FALSE(noalg.ok());
}

TEST_CASE("incoherent transitions are rejected") {
  const std::string text = R"(sorts s;
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
hom sw : A -> A {
  s : 0 -> 1, 1 -> 0;
}
preorder I {
  elems 0 1 2;
  le 0 1;
  le 1 2;
}
projsys P over I {
  at 0 = A;
  at 1 = A;
  at 2 = A;
  map 1 -> 0 = id;
  map 2 -> 1 = id;
  map 2 -> 0 = sw;
}
)";
  const auto& d = first(parse(text));
  CHECK(d.code == to_string(ErrorKind::invalid_system));
  CHECK(d.line == 21);
}

TEST_CASE("preorders must be directed") {
  auto r = parse("preorder I {\n  elems a b;\n}\n");
  CHECK(first(r).code == to_string(ErrorKind::invalid_preorder));
  CHECK(first(r).line == 1);
  CHECK(first(r).col == 10);
}

TEST_CASE("filters and families") {
  auto r = parse(kChain2 + "\nfilter Core on I = principal { 0 1 };\n");
  REQUIRE(r.ok());
  CHECK(r.file->get<FilterItem>("Core")->filter == principal_filter(2, IndexSet::full(2)));
  auto bad = parse(kChain2 + "\nultrafilter V on I = principal 7;\n");
  CHECK(first(bad).code == "resolve");
  CHECK(first(bad).col == 32);
}

TEST_CASE("unicode identifiers are counted in code points") {
  auto r = parse("sorts ℕ s;\nsignature Σ {\n  op σ : ℕ -> s;\n}\n");
  REQUIRE(r.ok());
  CHECK(r.file->get<SignatureItem>("Σ"));
  CHECK(*r.file->sorts() == std::vector<std::string>{"ℕ", "s"});
  auto bad = parse("sorts ℕ s;\nsignature Σ {\n  op σ : ℕ -> t;\n}\n");
  CHECK(first(bad).code == "resolve");
  CHECK(first(bad).col == 15);
}

TEST_CASE("every single-token corruption of CHAIN2 is located") {
  auto clean = parse(kChain2);
  REQUIRE(clean.ok());
  REQUIRE(clean.tokens.size() > 30);
  std::size_t tried = 0;
  for (const auto& tok : clean.tokens) {
    std::vector<oracle::Corruption> modes{oracle::Corruption::inject_char};
    modes.push_back(tok.role == TokenSpan::Role::keyword ? oracle::Corruption::misspell_keyword
                                                         : oracle::Corruption::rename_reference);
    for (auto how : modes) {
      auto c = oracle::corrupt(kChain2, tok, how);
      auto r = parse(c.text);
      INFO("token '" << tok.text << "' at " << tok.line << ":" << tok.col);
      CHECK(oracle::located(r, c));
      ++tried;
    }
  }
  CHECK(tried == 2 * clean.tokens.size());
}

TEST_CASE("builders") {
  InstanceFile f;
  f.set_sorts({"s"});
  auto sig = oracle::unary_sig();
  f.add_signature("Sig", sig);
  f.add_algebra("A", "Sig", oracle::unary_alg(sig, {"0", "1"}, {1, 0}));
  CHECK_THROWS_AS(f.add_algebra("A", "Sig", oracle::unary_alg(sig, {"0"}, {0})), Error);
  CHECK_THROWS_AS(f.add_algebra("B", "Nope", oracle::unary_alg(sig, {"0"}, {0})), Error);
  CHECK(f.items().size() == 2);
  f.add_hom("sw", "A", "A", {{1, 0}});
  CHECK_THROWS_AS(f.add_hom("bad", "A", "A", {{0, 0}}), Error);
  f.add_preorder("I", oracle::chain(3));
  f.add_projsys("P", "I", {{"0", "A"}, {"1", "A"}, {"2", "A"}}, {{"1", "0", "sw"}, {"2", "1", "sw"}});
  const auto* p = f.get<ProjSysItem>("P");
  REQUIRE(p);
  CHECK(p->system.transition(0, 2) == Homomorphism::identity(p->system.algebra(0)));
  auto back = parse(serialize(f));
  REQUIRE(back.ok());
  CHECK(*back.file == f);

  // atomize renames structured elements so that they print and parse back
  auto prod = product_algebra(sig, {"0", "1"}, {f.get<AlgebraItem>("A")->algebra, f.get<AlgebraItem>("A")->algebra});
  auto flat = atomize(prod.algebra);
  CHECK(flat.carrier().carrier(0)[0].kind() == Element::Kind::atom);
  f.add_algebra("AA", "Sig", flat);
  CHECK(*parse(serialize(f)).file == f);
}

TEST_CASE("serialized text has the documented shape") {
  auto text = serialize(*parse(kChain2).file);
  CHECK(text.find("sorts s;\n") == 0);
  CHECK(text.find("signature Sig {\n  op f : s -> s;\n}") != std::string::npos);
  CHECK(text.find("  map 1 -> 0 = id;\n") != std::string::npos);
  CHECK(text.find("filter Fin on I = finalsections;") != std::string::npos);
  CHECK(std::regex_search(text, std::regex("ultrafilter U on I = principal 1;")));
}
