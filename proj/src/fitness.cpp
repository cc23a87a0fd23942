#include "rumix/fitness.hpp"

#include <cmath>
#include <string>

#include "rumix/errors.hpp"

namespace rumix {

WeightProfile WeightProfile::make(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || std::abs(alpha + beta - 1.0) > 1e-9)
    throw InputError("weight profile needs alpha, beta > 0 and alpha + beta = 1 (got alpha=" +
                     format_number(alpha) + ", beta=" + format_number(beta) + ")");
  return WeightProfile{alpha, beta};
}

WeightProfile WeightProfile::from_gamma(double gamma) { return make(1.0 - gamma, gamma); }

double WeightProfile::score(std::size_t n_correct, std::size_t n_covers, std::size_t n_total) const {
  if (n_covers == 0) return 0.0;
  const double accuracy = static_cast<double>(n_correct) / static_cast<double>(n_covers);
  const double coverage = static_cast<double>(n_covers) / static_cast<double>(n_total);
  return alpha * accuracy + beta * coverage;
}

FitnessBreakdown breakdown(std::size_t n_correct, std::size_t n_covers, std::size_t n_total,
                           const WeightProfile& profile) {
  FitnessBreakdown b;
  b.n_covers = n_covers;
  b.n_correct = n_correct;
  if (n_covers > 0) {
    b.accuracy = static_cast<double>(n_correct) / static_cast<double>(n_covers);
    b.coverage = static_cast<double>(n_covers) / static_cast<double>(n_total);
  }
  b.fitness = profile.score(n_correct, n_covers, n_total);
  return b;
}

FitnessBreakdown evaluate(const Rule& rule, const Dataset& data, const WeightProfile& profile) {
  if (data.instances.empty()) throw InputError("cannot evaluate a rule on an empty dataset");
  std::size_t n_covers = 0, n_correct = 0;
  for (const auto& x : data.instances) {
    if (!covers(rule, x, data.schema)) continue;
    ++n_covers;
    if (x.class_index == rule.class_index) ++n_correct;
  }
  return breakdown(n_correct, n_covers, data.instances.size(), profile);
}

std::size_t and_count(const BitVec& a, const BitVec& b) {
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) n += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  return n;
}

std::size_t and_count(const BitVec& a, const BitVec& b, const BitVec& c) {
  const auto wa = a.words();
  const auto wb = b.words();
  const auto wc = c.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) n += static_cast<std::size_t>(std::popcount(wa[i] & wb[i] & wc[i]));
  return n;
}

CoverIndex::CoverIndex(const Dataset& data)
    : schema_(data.schema),
      n_(data.instances.size()),
      by_bit_(data.schema.total_width(), BitVec(data.instances.size())),
      by_class_(data.schema.class_count(), BitVec(data.instances.size())),
      all_(data.instances.size()) {
  if (n_ == 0) throw InputError("cannot index an empty dataset");
  all_.set_all();
  const std::size_t width = schema_.total_width();
  for (std::size_t i = 0; i < n_; ++i) {
    const auto& x = data.instances[i];
    if (x.bits.width() != width) throw InvariantViolation("instance width does not match schema");
    const auto words = x.bits.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      for (BitVec::Word bits = words[w]; bits != 0; bits &= bits - 1) {
        by_bit_[w * BitVec::kWordBits + static_cast<std::size_t>(std::countr_zero(bits))].set(i);
      }
    }
    if (x.class_index >= 0) by_class_[static_cast<std::size_t>(x.class_index)].set(i);
  }
  total_segment_.resize(schema_.feature_count());
  BitVec seg(n_);
  BitVec ones(width);
  ones.set_all();
  for (std::size_t f = 0; f < schema_.feature_count(); ++f) {
    segment_cover(ones, f, seg);
    total_segment_[f] = (seg == all_);
  }
}

void CoverIndex::segment_cover(const BitVec& rule_bits, std::size_t feature, BitVec& out) const {
  const auto& f = schema_.features()[feature];
  out.clear();
  auto dst = out.words();
  for (std::size_t b = f.bit_offset; b < f.end_bit(); ++b) {
    if (!rule_bits.test(b)) continue;
    const auto src = by_bit_[b].words();
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
  }
}

BitVec CoverIndex::cover(const BitVec& rule_bits) const {
  BitVec acc = all_;
  BitVec seg(n_);
  for (std::size_t f = 0; f < schema_.feature_count(); ++f) {
    const auto& fd = schema_.features()[f];
    if (total_segment_[f] && rule_bits.all_in_range(fd.bit_offset, fd.end_bit())) continue;
    segment_cover(rule_bits, f, seg);
    acc &= seg;
    if (!acc.any()) break;
  }
  return acc;
}

void CoverIndex::evaluate(Rule& rule, const WeightProfile& profile) const {
  const BitVec c = cover(rule.bits);
  rule.n_covers = c.count();
  rule.n_correct = and_count(c, of_class(rule.class_index));
  rule.fitness = profile.score(rule.n_correct, rule.n_covers, n_);
  rule.evaluated = true;
}

FitnessBreakdown CoverIndex::breakdown(const Rule& rule, const WeightProfile& profile) const {
  const BitVec c = cover(rule.bits);
  const std::size_t n_covers = c.count();
  return rumix::breakdown(and_count(c, of_class(rule.class_index)), n_covers, n_, profile);
}

}  // namespace rumix
