#include "msa/signature.hpp"

#include <set>

#include "msa/error.hpp"

namespace msa {

Signature::Signature(std::vector<std::string> sorts, std::vector<OpSymbol> ops)
    : sorts_(std::move(sorts)), ops_(std::move(ops)) {
  std::set<std::string> seen(sorts_.begin(), sorts_.end());
  if (seen.size() != sorts_.size())
    throw Error(ErrorKind::invalid_argument, "duplicate sort name");
  std::set<std::string> names;
  for (const auto& op : ops_) {
    if (!names.insert(op.name).second)
      throw Error(ErrorKind::invalid_argument, "duplicate operation " + op.name);
    for (SortIndex s : op.arity.word)
      if (s >= sorts_.size())
        throw Error(ErrorKind::invalid_argument, "operation " + op.name + " uses an unknown sort");
    if (op.arity.result >= sorts_.size())
      throw Error(ErrorKind::invalid_argument, "operation " + op.name + " has an unknown result sort");
  }
}

std::optional<std::size_t> Signature::op_index(std::string_view name) const {
  for (std::size_t k = 0; k < ops_.size(); ++k)
    if (ops_[k].name == name) return k;
  return std::nullopt;
}

std::optional<SortIndex> Signature::sort_index(std::string_view name) const {
  for (std::size_t s = 0; s < sorts_.size(); ++s)
    if (sorts_[s] == name) return s;
  return std::nullopt;
}

SortSet Signature::close(SortSet seed) const {
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& op : ops_) {
      bool args_present = true;
      for (SortIndex s : op.arity.word) args_present = args_present && seed.count(s) > 0;
      if (args_present && seed.insert(op.arity.result).second) grew = true;
    }
  }
  return seed;
}

bool same_signature(const SignaturePtr& a, const SignaturePtr& b) {
  return a == b || (a && b && *a == *b);
}

SignatureMorphism::SignatureMorphism(SignaturePtr source, SignaturePtr target,
                                     std::vector<SortIndex> sort_map,
                                     std::vector<std::size_t> op_map)
    : source_(std::move(source)),
      target_(std::move(target)),
      sort_map_(std::move(sort_map)),
      op_map_(std::move(op_map)) {
  if (sort_map_.size() != source_->sorts().size() || op_map_.size() != source_->op_count())
    throw Error(ErrorKind::arity_mismatch, "signature morphism is not total");
  for (SortIndex t : sort_map_)
    if (t >= target_->sorts().size())
      throw Error(ErrorKind::arity_mismatch, "sort mapped outside the target signature");
  for (std::size_t k = 0; k < op_map_.size(); ++k) {
    if (op_map_[k] >= target_->op_count())
      throw Error(ErrorKind::arity_mismatch, "operation mapped outside the target signature");
    const auto& src = source_->op(k).arity;
    const auto& dst = target_->op(op_map_[k]).arity;
    bool ok = src.word.size() == dst.word.size() && sort_map_[src.result] == dst.result;
    for (std::size_t a = 0; ok && a < src.word.size(); ++a)
      ok = sort_map_[src.word[a]] == dst.word[a];
    if (!ok)
      throw Error(ErrorKind::arity_mismatch,
                  source_->op(k).name + " is not sent to an operation of the translated arity");
  }
}

}  // namespace msa
