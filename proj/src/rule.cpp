#include "rumix/rule.hpp"

#include "rumix/errors.hpp"

namespace rumix {

Rule make_rule(const EncodedInstance& x, std::uint64_t seq) {
  if (x.class_index < 0) throw RuleError("cannot build a rule from an instance with unknown class");
  Rule r;
  r.bits = x.bits;
  r.class_index = x.class_index;
  r.seq = seq;
  return r;
}

bool covers(const Rule& rule, const EncodedInstance& x, const DatasetSchema& schema) {
  if (rule.bits.width() != x.bits.width() || rule.bits.width() != schema.total_width())
    throw std::invalid_argument("covers: width mismatch");
  for (const auto& f : schema.features())
    if (!intersects_in_range(rule.bits, x.bits, f.bit_offset, f.end_bit())) return false;
  return true;
}

Rule compose(const Rule& a, const Rule& b, std::uint64_t seq) {
  if (a.class_index != b.class_index) throw RuleError("compose: rules belong to different classes");
  Rule r;
  r.bits = a.bits | b.bits;
  r.class_index = a.class_index;
  r.seq = seq;
  return r;
}

Rule flip_zero_bit(const Rule& rule, std::size_t bit, const DatasetSchema& schema) {
  if (bit >= schema.total_width()) throw RuleError("flip_zero_bit: index out of range");
  if (bit >= schema.class_offset()) throw RuleError("class conflict");
  if (rule.bits.test(bit)) throw RuleError("flip_zero_bit: bit " + std::to_string(bit) + " is already set");
  Rule r = rule;
  r.bits.set(bit);
  r.invalidate();
  return r;
}

bool subsumes(const Rule& general, const Rule& specific) {
  return general.class_index == specific.class_index && specific.bits.is_subset_of(general.bits);
}

std::string render(const Rule& rule, const DatasetSchema& schema) {
  std::string conds;
  for (const auto& f : schema.features()) {
    if (rule.bits.all_in_range(f.bit_offset, f.end_bit())) continue;
    std::string values;
    std::size_t n = 0;
    for (std::size_t i = 0; i < f.width(); ++i) {
      if (!rule.bits.test(f.bit_offset + i)) continue;
      values += (n++ ? " or " : "") + f.domain[i];
    }
    if (n == 0) values = "<none>";
    std::string cond = f.name + "=" + values;
    if (n > 1) cond = "(" + cond + ")";
    conds += (conds.empty() ? "" : " and ") + cond;
  }
  if (conds.empty()) conds = "true";
  return "if " + conds + " then " + schema.class_labels().at(static_cast<std::size_t>(rule.class_index));
}

void check_rule(const Rule& rule, const DatasetSchema& schema) {
  if (rule.bits.width() != schema.total_width()) throw InvariantViolation("rule width does not match schema");
  const std::size_t co = schema.class_offset();
  if (rule.class_index < 0 || static_cast<std::size_t>(rule.class_index) >= schema.class_count() ||
      rule.bits.count_range(co, schema.total_width()) != 1 ||
      !rule.bits.test(co + static_cast<std::size_t>(rule.class_index)))
    throw InvariantViolation("rule " + std::to_string(rule.seq) + " has a malformed class segment");
  for (const auto& f : schema.features())
    if (!rule.bits.any_in_range(f.bit_offset, f.end_bit()))
      throw InvariantViolation("rule " + std::to_string(rule.seq) + " has an empty segment for '" + f.name + "'");
}

}  // namespace rumix
