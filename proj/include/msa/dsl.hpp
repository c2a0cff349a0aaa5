#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "msa/filters.hpp"
#include "msa/reduced.hpp"
#include "msa/systems.hpp"

namespace msa {

struct SignatureItem {
  std::string name;
  SignaturePtr sig;
};

struct AlgebraItem {
  std::string name;
  std::string over;
  Algebra algebra;
};

struct HomItem {
  std::string name;
  std::string source;
  std::string target;
  Homomorphism hom;
};

struct PreorderItem {
  std::string name;
  std::vector<std::string> elems;  // as declared
  std::vector<std::pair<std::string, std::string>> le;
  Preorder order;
};

// `map from -> to = hom` with hom : A^from → A^to.
struct MapDecl {
  std::string from;
  std::string to;
  std::string hom;

  friend bool operator==(const MapDecl&, const MapDecl&) = default;
};

template <Variance V>
struct SystemItem {
  std::string name;
  std::string over;
  std::vector<std::pair<std::string, std::string>> at;  // index → algebra
  std::vector<MapDecl> maps;
  System<V> system;
};
using ProjSysItem = SystemItem<Variance::projective>;
using IndSysItem = SystemItem<Variance::inductive>;

struct FilterItem {
  std::string name;
  std::string on;
  bool final_sections = false;
  std::vector<std::string> core;  // principal filters only
  Filter filter;
};

struct UltrafilterItem {
  std::string name;
  std::string on;
  std::string point;
  Ultrafilter ultra;
};

struct FamilyItem {
  std::string name;
  std::string on;
  std::vector<std::pair<std::string, std::string>> at;
  AlgebraFamily family;
};

using Item = std::variant<SignatureItem, AlgebraItem, HomItem, PreorderItem, ProjSysItem, IndSysItem, FilterItem,
                          UltrafilterItem, FamilyItem>;

std::string_view item_keyword(const Item& item);
const std::string& item_name(const Item& item);

// A validated instance universe. The add_* builders resolve names against
// earlier items and raise Error (kind from the failing validator) on any
// defect, leaving the file unchanged.
class InstanceFile {
 public:
  const std::optional<std::vector<std::string>>& sorts() const noexcept { return sorts_; }
  const std::vector<Item>& items() const noexcept { return items_; }
  bool empty() const noexcept { return !sorts_ && items_.empty(); }

  const Item* find(std::string_view name) const;
  template <typename T>
  const T* get(std::string_view name) const {
    const Item* it = find(name);
    return it ? std::get_if<T>(it) : nullptr;
  }

  void set_sorts(std::vector<std::string> sorts);
  void add_signature(std::string name, SignaturePtr sig);
  void add_algebra(std::string name, std::string over, Algebra a);
  void add_hom(std::string name, std::string source, std::string target, SortedTable map);
  void add_preorder(std::string name, std::vector<std::string> elems,
                    std::vector<std::pair<std::string, std::string>> le);
  // Canonical generators: strict covers plus pairs inside equivalence classes.
  void add_preorder(std::string name, const Preorder& p);
  void add_projsys(std::string name, std::string over, std::vector<std::pair<std::string, std::string>> at,
                   std::vector<MapDecl> maps);
  void add_indsys(std::string name, std::string over, std::vector<std::pair<std::string, std::string>> at,
                  std::vector<MapDecl> maps);
  void add_final_sections_filter(std::string name, std::string on);
  void add_principal_filter(std::string name, std::string on, std::vector<std::string> core);
  void add_ultrafilter(std::string name, std::string on, std::string point);
  void add_family(std::string name, std::string on, std::vector<std::pair<std::string, std::string>> at);

  friend bool operator==(const InstanceFile& a, const InstanceFile& b);

 private:
  void claim(const std::string& name) const;
  void push(Item item);
  template <Variance V>
  SystemItem<V> build_system(std::string name, std::string over, std::vector<std::pair<std::string, std::string>> at,
                             std::vector<MapDecl> maps) const;

  std::optional<std::vector<std::string>> sorts_;
  std::vector<Item> items_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
};

// Strict covers i < j (nothing strictly between) plus i ~ j with i ≠ j, in
// index order.
std::vector<std::pair<std::size_t, std::size_t>> generating_pairs(const Preorder& p);

struct Diagnostic {
  std::string severity = "error";
  std::string code;  // lex, syntax, resolve, duplicate, codomain, arity, incomplete, or a validator kind
  std::string message;
  std::size_t line = 0;  // 1-based
  std::size_t col = 0;   // 1-based, in code points
  std::string related;   // enclosing declaration, if any
};

// A token the parser consumed as a keyword or as a reference to an earlier
// name; used to aim corruptions.
struct TokenSpan {
  enum class Role { keyword, reference };
  Role role;
  std::size_t line = 0;
  std::size_t col = 0;
  std::string text;
};

struct ParseResult {
  std::optional<InstanceFile> file;
  std::vector<Diagnostic> diagnostics;
  std::vector<TokenSpan> tokens;

  bool ok() const noexcept { return file.has_value(); }
};

// Stops at the first error.
ParseResult parse(std::string_view text);
std::string serialize(const InstanceFile& file);

// Same algebra with every element renamed to its rendering, so that it can
// be written as text and read back unchanged.
Algebra atomize(const Algebra& a);

}  // namespace msa
