#include "msa/dsl.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "msa/error.hpp"

namespace msa {

namespace {

bool forbidden_char(unsigned char c) {
  return c == '!' || c == '$' || c == '%' || c == '&' || c == '?' || c == '"' || c == 0x7f ||
         (c < 0x20 && c != '\t' && c != '\n' && c != '\r');
}
bool space_char(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool punct_char(unsigned char c) {
  return c == '{' || c == '}' || c == '(' || c == ')' || c == ';' || c == ':' || c == '=' || c == ',';
}

bool valid_ident(std::string_view s) {
  if (s.empty() || s.find("->") != std::string_view::npos) return false;
  for (unsigned char c : s)
    if (forbidden_char(c) || space_char(c) || punct_char(c) || c == '#') return false;
  return true;
}

void require_ident(const std::string& s, const char* what) {
  if (!valid_ident(s)) throw Error(ErrorKind::invalid_argument, std::string("not a valid ") + what + " name: '" + s + "'");
}

}  // namespace

std::string_view item_keyword(const Item& item) {
  static constexpr std::string_view kw[] = {"signature", "algebra", "hom",    "preorder", "projsys",
                                            "indsys",    "filter",  "ultrafilter", "family"};
  return kw[item.index()];
}

const std::string& item_name(const Item& item) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, item);
}

std::vector<std::pair<std::size_t, std::size_t>> generating_pairs(const Preorder& p) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !p.le(i, j)) continue;
      if (p.le(j, i)) {
        out.emplace_back(i, j);
        continue;
      }
      bool cover = true;
      for (std::size_t k = 0; k < n && cover; ++k)
        if (p.lt(i, k) && p.lt(k, j)) cover = false;
      if (cover) out.emplace_back(i, j);
    }
  return out;
}

// ---- builders ----

const Item* InstanceFile::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &items_[it->second];
}

void InstanceFile::claim(const std::string& name) const {
  require_ident(name, "declaration");
  if (by_name_.count(name)) throw Error(ErrorKind::invalid_argument, "name already declared: " + name);
}

void InstanceFile::push(Item item) {
  by_name_.emplace(item_name(item), items_.size());
  items_.push_back(std::move(item));
}

namespace {

template <typename T>
const T& lookup(const InstanceFile& f, const std::string& name, const char* what) {
  const T* x = f.get<T>(name);
  if (!x) throw Error(ErrorKind::invalid_argument, std::string("no ") + what + " named " + name);
  return *x;
}

std::size_t index_in(const Preorder& p, const std::string& name) {
  auto i = p.index_of(name);
  if (!i) throw Error(ErrorKind::invalid_argument, "no index named " + name);
  return *i;
}

// Members of `at`, in index order; every index exactly once.
std::vector<Algebra> members_at(const InstanceFile& f, const Preorder& p,
                                const std::vector<std::pair<std::string, std::string>>& at) {
  std::vector<std::optional<Algebra>> m(p.size());
  for (const auto& [i, a] : at) {
    auto k = index_in(p, i);
    if (m[k]) throw Error(ErrorKind::invalid_argument, "two algebras at index " + i);
    m[k] = lookup<AlgebraItem>(f, a, "algebra").algebra;
  }
  std::vector<Algebra> out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!m[k]) throw Error(ErrorKind::invalid_argument, "no algebra at index " + p.name(k));
    if (!out.empty() && !same_signature(out.front().signature_ptr(), m[k]->signature_ptr()))
      throw Error(ErrorKind::signature_mismatch, "algebras over different signatures");
    out.push_back(*m[k]);
  }
  return out;
}

}  // namespace

void InstanceFile::set_sorts(std::vector<std::string> sorts) {
  if (sorts_) throw Error(ErrorKind::invalid_argument, "sorts already declared");
  if (sorts.empty()) throw Error(ErrorKind::invalid_argument, "at least one sort required");
  std::set<std::string> seen;
  for (const auto& s : sorts) {
    require_ident(s, "sort");
    if (!seen.insert(s).second) throw Error(ErrorKind::invalid_argument, "duplicate sort " + s);
  }
  sorts_ = std::move(sorts);
}

void InstanceFile::add_signature(std::string name, SignaturePtr sig) {
  claim(name);
  if (!sorts_) throw Error(ErrorKind::invalid_argument, "no sorts declared");
  if (sig->sorts() != *sorts_) throw Error(ErrorKind::signature_mismatch, "signature sorts differ from the file's");
  for (const auto& op : sig->ops()) require_ident(op.name, "operation");
  push(SignatureItem{std::move(name), std::move(sig)});
}

void InstanceFile::add_algebra(std::string name, std::string over, Algebra a) {
  claim(name);
  const auto& sig = lookup<SignatureItem>(*this, over, "signature");
  if (!same_signature(sig.sig, a.signature_ptr()))
    throw Error(ErrorKind::signature_mismatch, "algebra is not over " + over);
  auto defects = validate_algebra(a);
  if (!defects.empty()) throw Error(ErrorKind::invalid_algebra, defects.front().message);
  for (SortIndex s = 0; s < a.carrier().sort_count(); ++s)
    for (const auto& e : a.carrier().carrier(s))
      if (e.kind() != Element::Kind::atom || !valid_ident(e.label()))
        throw Error(ErrorKind::invalid_argument, "element " + e.str() + " cannot be written as a name");
  // Keep the declared signature handle so items share it.
  push(AlgebraItem{std::move(name), std::move(over), Algebra(sig.sig, a.carrier(), a.tables())});
}

void InstanceFile::add_hom(std::string name, std::string source, std::string target, SortedTable map) {
  claim(name);
  const auto& a = lookup<AlgebraItem>(*this, source, "algebra");
  const auto& b = lookup<AlgebraItem>(*this, target, "algebra");
  Homomorphism h(a.algebra, b.algebra, std::move(map));
  push(HomItem{std::move(name), std::move(source), std::move(target), std::move(h)});
}

void InstanceFile::add_preorder(std::string name, std::vector<std::string> elems,
                                std::vector<std::pair<std::string, std::string>> le) {
  claim(name);
  std::set<std::string> seen;
  for (const auto& e : elems) {
    require_ident(e, "index");
    if (!seen.insert(e).second) throw Error(ErrorKind::invalid_argument, "duplicate index " + e);
  }
  for (const auto& [x, y] : le)
    if (!seen.count(x) || !seen.count(y)) throw Error(ErrorKind::invalid_argument, "le names an unknown index");
  auto order = Preorder::closure_of(elems, le);
  push(PreorderItem{std::move(name), std::move(elems), std::move(le), std::move(order)});
}

void InstanceFile::add_preorder(std::string name, const Preorder& p) {
  std::vector<std::pair<std::string, std::string>> le;
  for (auto [i, j] : generating_pairs(p)) le.emplace_back(p.name(i), p.name(j));
  add_preorder(std::move(name), p.names(), std::move(le));
  if (!(std::get<PreorderItem>(items_.back()).order == p))
    throw Error(ErrorKind::invalid_preorder, "preorder does not round-trip through its generators");
}

template <Variance V>
SystemItem<V> InstanceFile::build_system(std::string name, std::string over,
                                         std::vector<std::pair<std::string, std::string>> at,
                                         std::vector<MapDecl> maps) const {
  claim(name);
  const auto& p = lookup<PreorderItem>(*this, over, "preorder").order;
  auto members = members_at(*this, p, at);
  using T = typename System<V>::Transitions;
  T t;
  auto put = [&](std::pair<std::size_t, std::size_t> key, const Homomorphism& h, const std::string& via) {
    auto [it, fresh] = t.emplace(key, h);
    if (!fresh && !(it->second == h))
      throw Error(ErrorKind::invalid_system, "incoherent transitions between " + p.name(key.first) + " and " +
                                                 p.name(key.second) + " (" + via + ")");
  };
  for (const auto& m : maps) {
    auto from = index_in(p, m.from);
    auto to = index_in(p, m.to);
    const auto& h = lookup<HomItem>(*this, m.hom, "hom").hom;
    if (!(h.source() == members[from]) || !(h.target() == members[to]))
      throw Error(ErrorKind::source_mismatch, m.hom + " does not go from the algebra at " + m.from +
                                                  " to the algebra at " + m.to);
    const bool projective = V == Variance::projective;
    auto key = projective ? std::make_pair(to, from) : std::make_pair(from, to);
    if (!p.le(key.first, key.second))
      throw Error(ErrorKind::invalid_system, "map " + m.from + " -> " + m.to + " runs against the order");
    put(key, h, "declared map " + m.hom);
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!t.count({i, i})) t.emplace(std::make_pair(i, i), Homomorphism::identity(members[i]));
  for (bool grew = true; grew;) {
    grew = false;
    const auto snapshot = t;
    for (const auto& [ij, f] : snapshot)
      for (const auto& [jk, g] : snapshot) {
        if (ij.second != jk.first) continue;
        auto key = std::make_pair(ij.first, jk.second);
        auto h = V == Variance::projective ? compose(f, g) : compose(g, f);
        const bool fresh = !t.count(key);
        put(key, h, "composite through " + p.name(ij.second));
        grew = grew || fresh;
      }
  }
  for (auto [i, j] : p.pairs())
    if (!t.count({i, j}))
      throw Error(ErrorKind::invalid_system, "no transition between " + p.name(i) + " and " + p.name(j));
  System<V> sys(p, members.front().signature_ptr(), members, std::move(t));
  require_valid(sys);
  return SystemItem<V>{std::move(name), std::move(over), std::move(at), std::move(maps), std::move(sys)};
}

void InstanceFile::add_projsys(std::string name, std::string over, std::vector<std::pair<std::string, std::string>> at,
                               std::vector<MapDecl> maps) {
  push(build_system<Variance::projective>(std::move(name), std::move(over), std::move(at), std::move(maps)));
}

void InstanceFile::add_indsys(std::string name, std::string over, std::vector<std::pair<std::string, std::string>> at,
                              std::vector<MapDecl> maps) {
  push(build_system<Variance::inductive>(std::move(name), std::move(over), std::move(at), std::move(maps)));
}

void InstanceFile::add_final_sections_filter(std::string name, std::string on) {
  claim(name);
  const auto& p = lookup<PreorderItem>(*this, on, "preorder").order;
  push(FilterItem{std::move(name), std::move(on), true, {}, final_sections_filter(p)});
}

void InstanceFile::add_principal_filter(std::string name, std::string on, std::vector<std::string> core) {
  claim(name);
  const auto& p = lookup<PreorderItem>(*this, on, "preorder").order;
  IndexSet j;
  for (const auto& c : core) {
    auto k = index_in(p, c);
    if (j.contains(k)) throw Error(ErrorKind::invalid_argument, "index listed twice: " + c);
    j = j.with(k);
  }
  if (j.empty()) throw Error(ErrorKind::not_a_filter, "a principal filter needs a nonempty core");
  push(FilterItem{std::move(name), std::move(on), false, std::move(core), principal_filter(p.size(), j)});
}

void InstanceFile::add_ultrafilter(std::string name, std::string on, std::string point) {
  claim(name);
  const auto& p = lookup<PreorderItem>(*this, on, "preorder").order;
  auto u = Ultrafilter::principal(p.size(), index_in(p, point));
  push(UltrafilterItem{std::move(name), std::move(on), std::move(point), std::move(u)});
}

void InstanceFile::add_family(std::string name, std::string on, std::vector<std::pair<std::string, std::string>> at) {
  claim(name);
  const auto& p = lookup<PreorderItem>(*this, on, "preorder").order;
  auto members = members_at(*this, p, at);
  AlgebraFamily fam{members.front().signature_ptr(), p.names(), members};
  push(FamilyItem{std::move(name), std::move(on), std::move(at), std::move(fam)});
}

namespace {

bool same_item(const SignatureItem& a, const SignatureItem& b) {
  return a.name == b.name && same_signature(a.sig, b.sig);
}
bool same_item(const AlgebraItem& a, const AlgebraItem& b) {
  return a.name == b.name && a.over == b.over && a.algebra == b.algebra;
}
bool same_item(const HomItem& a, const HomItem& b) {
  return a.name == b.name && a.source == b.source && a.target == b.target && a.hom == b.hom;
}
bool same_item(const PreorderItem& a, const PreorderItem& b) {
  return a.name == b.name && a.elems == b.elems && a.le == b.le && a.order == b.order;
}
template <Variance V>
bool same_item(const SystemItem<V>& a, const SystemItem<V>& b) {
  return a.name == b.name && a.over == b.over && a.at == b.at && a.maps == b.maps && a.system == b.system;
}
bool same_item(const FilterItem& a, const FilterItem& b) {
  return a.name == b.name && a.on == b.on && a.final_sections == b.final_sections && a.core == b.core &&
         a.filter == b.filter;
}
bool same_item(const UltrafilterItem& a, const UltrafilterItem& b) {
  return a.name == b.name && a.on == b.on && a.point == b.point && a.ultra == b.ultra;
}
bool same_item(const FamilyItem& a, const FamilyItem& b) {
  return a.name == b.name && a.on == b.on && a.at == b.at && a.family.index == b.family.index &&
         same_signature(a.family.sig, b.family.sig) && a.family.members == b.family.members;
}

}  // namespace

bool operator==(const InstanceFile& a, const InstanceFile& b) {
  if (a.sorts_ != b.sorts_ || a.items_.size() != b.items_.size()) return false;
  for (std::size_t k = 0; k < a.items_.size(); ++k) {
    const auto& x = a.items_[k];
    const auto& y = b.items_[k];
    if (x.index() != y.index()) return false;
    bool same = std::visit(
        [&](const auto& xi) {
          using T = std::decay_t<decltype(xi)>;
          return same_item(xi, std::get<T>(y));
        },
        x);
    if (!same) return false;
  }
  return true;
}

// ---- lexer ----

namespace {

struct Token {
  enum class Kind { ident, arrow, punct, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

struct Failure {
  Diagnostic diag;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, k = 0;
  auto advance = [&](std::size_t bytes) {
    for (std::size_t b = 0; b < bytes; ++b, ++k) {
      unsigned char c = text[k];
      if (c == '\n') {
        ++line;
        col = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  while (k < text.size()) {
    unsigned char c = text[k];
    if (space_char(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (k < text.size() && text[k] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (forbidden_char(c)) {
      std::string shown = c < 0x20 || c == 0x7f ? "control character" : std::string("character '") + char(c) + "'";
      throw Failure{{"error", "lex", "unexpected " + shown, line, col, ""}};
    }
    if (punct_char(c)) {
      t.kind = Token::Kind::punct;
      t.text = std::string(1, char(c));
      advance(1);
    } else if (text.substr(k, 2) == "->") {
      t.kind = Token::Kind::arrow;
      t.text = "->";
      advance(2);
    } else {
      std::size_t e = k;
      while (e < text.size()) {
        unsigned char d = text[e];
        if (space_char(d) || punct_char(d) || d == '#' || forbidden_char(d) || text.substr(e, 2) == "->") break;
        ++e;
      }
      t.kind = Token::Kind::ident;
      t.text = std::string(text.substr(k, e - k));
      advance(e - k);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// ---- parser ----

class Parser {
 public:
  Parser(std::vector<Token> tokens, ParseResult& r) : toks_(std::move(tokens)), r_(r) {}

  InstanceFile run() {
    while (peek().kind != Token::Kind::end) declaration();
    return std::move(file_);
  }

 private:
  using Kind = Token::Kind;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Kind::end) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const Token& t, std::string code, std::string msg) const {
    throw Failure{{"error", std::move(code), std::move(msg), t.line, t.col, related_}};
  }
  static std::string shown(const Token& t) { return t.kind == Kind::end ? "end of input" : "'" + t.text + "'"; }

  bool at_keyword(std::string_view kw) const { return peek().kind == Kind::ident && peek().text == kw; }
  const Token& keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail(peek(), "syntax", "expected '" + std::string(kw) + "', found " + shown(peek()));
    note(TokenSpan::Role::keyword, peek());
    return next();
  }
  void punct(char c) {
    if (peek().kind != Kind::punct || peek().text[0] != c)
      fail(peek(), "syntax", std::string("expected '") + c + "', found " + shown(peek()));
    next();
  }
  bool at_punct(char c) const { return peek().kind == Kind::punct && peek().text[0] == c; }
  void arrow() {
    if (peek().kind != Kind::arrow) fail(peek(), "syntax", "expected '->', found " + shown(peek()));
    next();
  }
  const Token& ident(const char* what) {
    if (peek().kind != Kind::ident) fail(peek(), "syntax", std::string("expected ") + what + ", found " + shown(peek()));
    return next();
  }
  const Token& reference(const char* what) {
    const Token& t = ident(what);
    note(TokenSpan::Role::reference, t);
    return t;
  }
  void note(TokenSpan::Role role, const Token& t) { r_.tokens.push_back({role, t.line, t.col, t.text}); }

  const Token& new_name() {
    const Token& t = ident("a name");
    if (file_.find(t.text)) fail(t, "duplicate", "name already declared: " + t.text);
    related_ = t.text;
    return t;
  }
  template <typename T>
  const T& resolve(const Token& t, const char* what) {
    const Item* it = file_.find(t.text);
    if (!it) fail(t, "resolve", std::string("undefined ") + what + " " + t.text);
    const T* x = std::get_if<T>(it);
    if (!x) fail(t, "resolve", t.text + " is a " + std::string(item_keyword(*it)) + ", not a " + what);
    return *x;
  }
  static std::size_t index_ref(const Parser& self, const Token& t, const Preorder& p) {
    auto i = p.index_of(t.text);
    if (!i) self.fail(t, "resolve", "undefined index " + t.text);
    return *i;
  }
  // Runs a builder; validator errors are reported at the declaration name.
  template <typename F>
  void build(const Token& at, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      fail(at, std::string(to_string(e.kind())), e.what());
    }
  }

  void declaration() {
    related_.clear();
    const Token& t = peek();
    static const char* const kws[] = {"sorts",  "signature", "algebra", "hom",         "preorder",
                                      "projsys", "indsys",   "filter",  "ultrafilter", "family"};
    if (t.kind != Kind::ident || std::find(std::begin(kws), std::end(kws), t.text) == std::end(kws))
      fail(t, "syntax", "expected a declaration, found " + shown(t));
    const std::string kw = t.text;
    if (kw == "sorts") sorts();
    else if (kw == "signature") signature();
    else if (kw == "algebra") algebra();
    else if (kw == "hom") hom();
    else if (kw == "preorder") preorder();
    else if (kw == "projsys") system<Variance::projective>("projsys");
    else if (kw == "indsys") system<Variance::inductive>("indsys");
    else if (kw == "filter") filter();
    else if (kw == "ultrafilter") ultrafilter();
    else family();
  }

  void sorts() {
    const Token& kw = keyword("sorts");
    if (file_.sorts()) fail(kw, "duplicate", "only one sorts declaration per file");
    std::vector<std::string> names;
    do {
      const Token& s = ident("a sort name");
      if (std::find(names.begin(), names.end(), s.text) != names.end()) fail(s, "duplicate", "duplicate sort " + s.text);
      names.push_back(s.text);
    } while (!at_punct(';'));
    punct(';');
    file_.set_sorts(std::move(names));
  }

  SortIndex sort_ref(const Token& t) {
    const auto& sorts = *file_.sorts();
    auto it = std::find(sorts.begin(), sorts.end(), t.text);
    if (it == sorts.end()) fail(t, "resolve", "undefined sort " + t.text);
    return static_cast<SortIndex>(it - sorts.begin());
  }

  void signature() {
    const Token& kw = keyword("signature");
    if (!file_.sorts()) fail(kw, "resolve", "signature before any sorts declaration");
    const Token& name = new_name();
    punct('{');
    std::vector<OpSymbol> ops;
    while (at_keyword("op")) {
      keyword("op");
      const Token& op = ident("an operation name");
      for (const auto& o : ops)
        if (o.name == op.text) fail(op, "duplicate", "duplicate operation " + op.text);
      punct(':');
      Arity ar;
      while (peek().kind == Kind::ident) ar.word.push_back(sort_ref(reference("a sort")));
      arrow();
      ar.result = sort_ref(reference("a sort"));
      punct(';');
      ops.push_back({op.text, ar});
    }
    punct('}');
    build(name, [&] {
      file_.add_signature(name.text, std::make_shared<const Signature>(*file_.sorts(), std::move(ops)));
    });
  }

  ElemIndex element_ref(const Token& t, const SortedSet& c, SortIndex s, const char* code) {
    auto x = c.find(s, Element::atom(t.text));
    if (!x) fail(t, code, t.text + " is not in the carrier of sort " + c.sorts()[s]);
    return *x;
  }

  void algebra() {
    keyword("algebra");
    const Token& name = new_name();
    keyword("over");
    const Token& over = reference("a signature");
    const auto& sig = resolve<SignatureItem>(over, "signature").sig;
    punct('{');
    const std::size_t nsorts = sig->sorts().size();
    std::vector<std::vector<Element>> carriers(nsorts);
    std::vector<char> declared(nsorts, 0);
    while (at_keyword("carrier")) {
      keyword("carrier");
      const Token& st = reference("a sort");
      auto s = sort_ref(st);
      if (declared[s]) fail(st, "duplicate", "carrier of sort " + st.text + " declared twice");
      declared[s] = 1;
      punct('=');
      punct('{');
      while (peek().kind == Kind::ident) {
        const Token& e = next();
        auto el = Element::atom(e.text);
        if (std::find(carriers[s].begin(), carriers[s].end(), el) != carriers[s].end())
          fail(e, "duplicate", "duplicate element " + e.text);
        carriers[s].push_back(el);
      }
      punct('}');
      punct(';');
    }
    SortedSet carrier(sig->sorts(), carriers);
    std::vector<std::vector<ElemIndex>> tables(sig->op_count());
    std::vector<MixedRadix> layouts;
    for (std::size_t k = 0; k < sig->op_count(); ++k) {
      std::vector<std::size_t> radices;
      for (auto s : sig->op(k).arity.word) radices.push_back(carrier.size(s));
      layouts.emplace_back(radices);
      tables[k].assign(layouts.back().total(), kUnmapped);
    }
    while (at_keyword("op")) {
      keyword("op");
      const Token& opt = reference("an operation");
      auto k = sig->op_index(opt.text);
      if (!k) fail(opt, "resolve", "undefined operation " + opt.text);
      const auto& ar = sig->op(*k).arity;
      punct('(');
      std::vector<ElemIndex> args;
      while (!at_punct(')')) {
        if (!args.empty()) punct(',');
        const Token& a = reference("an element");
        if (args.size() >= ar.word.size())
          fail(a, "arity", opt.text + " takes " + std::to_string(ar.word.size()) + " arguments");
        args.push_back(element_ref(a, carrier, ar.word[args.size()], "resolve"));
      }
      if (args.size() != ar.word.size())
        fail(peek(), "arity", opt.text + " takes " + std::to_string(ar.word.size()) + " arguments");
      punct(')');
      punct('=');
      const Token& v = reference("an element");
      auto val = element_ref(v, carrier, ar.result, "codomain");
      auto& slot = tables[*k][layouts[*k].encode(args)];
      if (slot != kUnmapped) fail(opt, "duplicate", "second entry for the same arguments of " + opt.text);
      slot = val;
      punct(';');
    }
    punct('}');
    for (std::size_t k = 0; k < tables.size(); ++k)
      for (std::size_t code = 0; code < tables[k].size(); ++code)
        if (tables[k][code] == kUnmapped) {
          std::string args;
          auto digits = layouts[k].decode(code);
          for (std::size_t p = 0; p < digits.size(); ++p)
            args += (p ? ", " : "") + carrier.carrier(sig->op(k).arity.word[p])[digits[p]].str();
          fail(name, "incomplete", "no entry for " + sig->op(k).name + "(" + args + ")");
        }
    build(name, [&] {
      auto a = checked_algebra(sig, std::move(carrier), std::move(tables));
      file_.add_algebra(name.text, over.text, std::move(a));
    });
  }

  void hom() {
    keyword("hom");
    const Token& name = new_name();
    punct(':');
    const Token& st = reference("an algebra");
    const auto& a = resolve<AlgebraItem>(st, "algebra");
    arrow();
    const Token& tt = reference("an algebra");
    const auto& b = resolve<AlgebraItem>(tt, "algebra");
    if (!same_signature(a.algebra.signature_ptr(), b.algebra.signature_ptr()))
      fail(tt, "signature_mismatch", st.text + " and " + tt.text + " have different signatures");
    punct('{');
    const auto& ca = a.algebra.carrier();
    const auto& cb = b.algebra.carrier();
    SortedTable table(ca.sort_count());
    std::vector<char> seen(ca.sort_count(), 0);
    for (SortIndex s = 0; s < table.size(); ++s) table[s].assign(ca.size(s), kUnmapped);
    while (peek().kind == Kind::ident) {
      const Token& srt = reference("a sort");
      auto s = sort_ref(srt);
      if (seen[s]) fail(srt, "duplicate", "second clause for sort " + srt.text);
      seen[s] = 1;
      punct(':');
      do {
        if (at_punct(',')) next();
        const Token& x = reference("an element");
        auto xi = element_ref(x, ca, s, "resolve");
        arrow();
        const Token& y = reference("an element");
        auto yi = element_ref(y, cb, s, "codomain");
        if (table[s][xi] != kUnmapped) fail(x, "duplicate", x.text + " is mapped twice");
        table[s][xi] = yi;
      } while (at_punct(','));
      punct(';');
    }
    punct('}');
    for (SortIndex s = 0; s < table.size(); ++s)
      for (ElemIndex x = 0; x < table[s].size(); ++x)
        if (table[s][x] == kUnmapped)
          fail(name, "incomplete", "no image for " + ca.carrier(s)[x].str() + " of sort " + ca.sorts()[s]);
    build(name, [&] { file_.add_hom(name.text, st.text, tt.text, std::move(table)); });
  }

  void preorder() {
    keyword("preorder");
    const Token& name = new_name();
    punct('{');
    keyword("elems");
    std::vector<std::string> elems;
    do {
      const Token& e = ident("an index name");
      if (std::find(elems.begin(), elems.end(), e.text) != elems.end()) fail(e, "duplicate", "duplicate index " + e.text);
      elems.push_back(e.text);
    } while (peek().kind == Kind::ident);
    punct(';');
    std::vector<std::pair<std::string, std::string>> le;
    auto known = [&](const Token& t) {
      if (std::find(elems.begin(), elems.end(), t.text) == elems.end()) fail(t, "resolve", "undefined index " + t.text);
      return t.text;
    };
    while (at_keyword("le")) {
      keyword("le");
      auto x = known(reference("an index"));
      auto y = known(reference("an index"));
      punct(';');
      le.emplace_back(x, y);
    }
    punct('}');
    build(name, [&] { file_.add_preorder(name.text, std::move(elems), std::move(le)); });
  }

  std::vector<std::pair<std::string, std::string>> at_clauses(const Preorder& p,
                                                               std::vector<std::optional<Algebra>>& at_alg) {
    std::vector<std::pair<std::string, std::string>> at;
    at_alg.assign(p.size(), std::nullopt);
    while (at_keyword("at")) {
      keyword("at");
      const Token& it = reference("an index");
      auto i = index_ref(*this, it, p);
      if (at_alg[i]) fail(it, "duplicate", "second algebra at index " + it.text);
      punct('=');
      const Token& at_tok = reference("an algebra");
      at_alg[i] = resolve<AlgebraItem>(at_tok, "algebra").algebra;
      punct(';');
      at.emplace_back(it.text, at_tok.text);
    }
    return at;
  }

  void missing_at(const Token& name, const Preorder& p, const std::vector<std::optional<Algebra>>& at_alg) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!at_alg[i]) fail(name, "incomplete", "no algebra at index " + p.name(i));
  }

  template <Variance V>
  void system(const char* kw) {
    keyword(kw);
    const Token& name = new_name();
    keyword("over");
    const Token& pt = reference("a preorder");
    const auto& p = resolve<PreorderItem>(pt, "preorder").order;
    punct('{');
    std::vector<std::optional<Algebra>> at_alg;
    auto at = at_clauses(p, at_alg);
    std::vector<MapDecl> maps;
    while (at_keyword("map")) {
      keyword("map");
      const Token& ft = reference("an index");
      auto from = index_ref(*this, ft, p);
      arrow();
      const Token& tt = reference("an index");
      auto to = index_ref(*this, tt, p);
      punct('=');
      const Token& ht = reference("a hom");
      const auto& h = resolve<HomItem>(ht, "hom").hom;
      punct(';');
      const bool ok = V == Variance::projective ? p.le(to, from) : p.le(from, to);
      if (!ok) fail(ft, "order", "map " + ft.text + " -> " + tt.text + " runs against the order");
      if (!at_alg[from] || !at_alg[to]) fail(ft, "incomplete", "map declared before the algebras at its ends");
      if (!(h.source() == *at_alg[from]) || !(h.target() == *at_alg[to]))
        fail(ht, "source_mismatch", ht.text + " does not go from the algebra at " + ft.text + " to the one at " + tt.text);
      maps.push_back({ft.text, tt.text, ht.text});
    }
    punct('}');
    missing_at(name, p, at_alg);
    build(name, [&] {
      if constexpr (V == Variance::projective) file_.add_projsys(name.text, pt.text, std::move(at), std::move(maps));
      else file_.add_indsys(name.text, pt.text, std::move(at), std::move(maps));
    });
  }

  void filter() {
    keyword("filter");
    const Token& name = new_name();
    keyword("on");
    const Token& pt = reference("a preorder");
    const auto& p = resolve<PreorderItem>(pt, "preorder").order;
    punct('=');
    if (at_keyword("finalsections")) {
      keyword("finalsections");
      punct(';');
      build(name, [&] { file_.add_final_sections_filter(name.text, pt.text); });
      return;
    }
    if (!at_keyword("principal")) fail(peek(), "syntax", "expected 'finalsections' or 'principal', found " + shown(peek()));
    keyword("principal");
    punct('{');
    std::vector<std::string> core;
    while (peek().kind == Kind::ident) {
      const Token& c = reference("an index");
      index_ref(*this, c, p);
      if (std::find(core.begin(), core.end(), c.text) != core.end()) fail(c, "duplicate", "index listed twice");
      core.push_back(c.text);
    }
    punct('}');
    punct(';');
    build(name, [&] { file_.add_principal_filter(name.text, pt.text, std::move(core)); });
  }

  void ultrafilter() {
    keyword("ultrafilter");
    const Token& name = new_name();
    keyword("on");
    const Token& pt = reference("a preorder");
    const auto& p = resolve<PreorderItem>(pt, "preorder").order;
    punct('=');
    keyword("principal");
    const Token& it = reference("an index");
    index_ref(*this, it, p);
    punct(';');
    build(name, [&] { file_.add_ultrafilter(name.text, pt.text, it.text); });
  }

  void family() {
    keyword("family");
    const Token& name = new_name();
    keyword("on");
    const Token& pt = reference("a preorder");
    const auto& p = resolve<PreorderItem>(pt, "preorder").order;
    punct('{');
    std::vector<std::optional<Algebra>> at_alg;
    auto at = at_clauses(p, at_alg);
    punct('}');
    missing_at(name, p, at_alg);
    build(name, [&] { file_.add_family(name.text, pt.text, std::move(at)); });
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseResult& r_;
  InstanceFile file_;
  std::string related_;
};

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult r;
  try {
    Parser p(lex(text), r);
    r.file = p.run();
  } catch (const Failure& f) {
    r.diagnostics.push_back(f.diag);
  }
  return r;
}

// ---- serializer ----

std::string serialize(const InstanceFile& file) {
  std::ostringstream out;
  bool first = true;
  auto gap = [&] {
    if (!first) out << '\n';
    first = false;
  };
  const std::vector<std::string>* sorts = file.sorts() ? &*file.sorts() : nullptr;
  if (sorts) {
    gap();
    out << "sorts";
    for (const auto& s : *sorts) out << ' ' << s;
    out << ";\n";
  }
  auto at_lines = [&](const std::vector<std::pair<std::string, std::string>>& at) {
    for (const auto& [i, a] : at) out << "  at " << i << " = " << a << ";\n";
  };
  for (const auto& item : file.items()) {
    gap();
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, SignatureItem>) {
            out << "signature " << x.name << " {\n";
            for (const auto& op : x.sig->ops()) {
              out << "  op " << op.name << " :";
              for (auto s : op.arity.word) out << ' ' << (*sorts)[s];
              out << " -> " << (*sorts)[op.arity.result] << ";\n";
            }
            out << "}\n";
          } else if constexpr (std::is_same_v<T, AlgebraItem>) {
            const auto& a = x.algebra;
            const auto& sig = a.signature();
            out << "algebra " << x.name << " over " << x.over << " {\n";
            for (SortIndex s = 0; s < a.carrier().sort_count(); ++s) {
              if (a.size(s) == 0) continue;
              out << "  carrier " << sig.sorts()[s] << " = {";
              for (const auto& e : a.carrier().carrier(s)) out << ' ' << e.label();
              out << " };\n";
            }
            for (std::size_t k = 0; k < sig.op_count(); ++k) {
              const auto& ar = sig.op(k).arity;
              for (std::size_t code = 0; code < a.table(k).size(); ++code) {
                auto digits = a.arg_layout(k).decode(code);
                out << "  op " << sig.op(k).name << '(';
                for (std::size_t p = 0; p < digits.size(); ++p)
                  out << (p ? ", " : "") << a.element(ar.word[p], digits[p]).label();
                out << ") = " << a.element(ar.result, a.table(k)[code]).label() << ";\n";
              }
            }
            out << "}\n";
          } else if constexpr (std::is_same_v<T, HomItem>) {
            const auto& h = x.hom;
            const auto& ca = h.source().carrier();
            const auto& cb = h.target().carrier();
            out << "hom " << x.name << " : " << x.source << " -> " << x.target << " {\n";
            for (SortIndex s = 0; s < ca.sort_count(); ++s) {
              if (ca.size(s) == 0) continue;
              out << "  " << ca.sorts()[s] << " :";
              for (ElemIndex e = 0; e < ca.size(s); ++e)
                out << (e ? ", " : " ") << ca.carrier(s)[e].label() << " -> " << cb.carrier(s)[h(s, e)].label();
              out << ";\n";
            }
            out << "}\n";
          } else if constexpr (std::is_same_v<T, PreorderItem>) {
            out << "preorder " << x.name << " {\n  elems";
            for (const auto& e : x.elems) out << ' ' << e;
            out << ";\n";
            for (const auto& [a, b] : x.le) out << "  le " << a << ' ' << b << ";\n";
            out << "}\n";
          } else if constexpr (std::is_same_v<T, ProjSysItem> || std::is_same_v<T, IndSysItem>) {
            out << (std::is_same_v<T, ProjSysItem> ? "projsys " : "indsys ") << x.name << " over " << x.over << " {\n";
            at_lines(x.at);
            for (const auto& m : x.maps) out << "  map " << m.from << " -> " << m.to << " = " << m.hom << ";\n";
            out << "}\n";
          } else if constexpr (std::is_same_v<T, FilterItem>) {
            out << "filter " << x.name << " on " << x.on << " = ";
            if (x.final_sections) {
              out << "finalsections;\n";
            } else {
              out << "principal {";
              for (const auto& c : x.core) out << ' ' << c;
              out << " };\n";
            }
          } else if constexpr (std::is_same_v<T, UltrafilterItem>) {
            out << "ultrafilter " << x.name << " on " << x.on << " = principal " << x.point << ";\n";
          } else {
            out << "family " << x.name << " on " << x.on << " {\n";
            at_lines(x.at);
            out << "}\n";
          }
        },
        item);
  }
  return out.str();
}

Algebra atomize(const Algebra& a) {
  const auto& c = a.carrier();
  std::vector<std::vector<Element>> carriers(c.sort_count());
  for (SortIndex s = 0; s < c.sort_count(); ++s)
    for (const auto& e : c.carrier(s)) carriers[s].push_back(Element::atom(e.str()));
  SortedSet renamed(c.sorts(), carriers);
  SortedTable perm(c.sort_count());
  for (SortIndex s = 0; s < c.sort_count(); ++s)
    for (const auto& e : carriers[s]) perm[s].push_back(*renamed.find(s, e));
  const auto& sig = a.signature();
  std::vector<std::vector<ElemIndex>> tables(sig.op_count());
  for (std::size_t k = 0; k < sig.op_count(); ++k) {
    const auto& ar = sig.op(k).arity;
    tables[k].assign(a.table(k).size(), 0);
    std::vector<ElemIndex> args(ar.word.size());
    for (std::size_t code = 0; code < a.table(k).size(); ++code) {
      a.arg_layout(k).decode(code, args);
      for (std::size_t p = 0; p < args.size(); ++p) args[p] = perm[ar.word[p]][args[p]];
      tables[k][a.arg_layout(k).encode(args)] = perm[ar.result][a.table(k)[code]];
    }
  }
  return checked_algebra(a.signature_ptr(), std::move(renamed), std::move(tables));
}

}  // namespace msa
