#include "rumix/bitvec.hpp"

#include <stdexcept>

namespace rumix {

namespace {

constexpr BitVec::Word low_mask(std::size_t bits) {
  return bits >= BitVec::kWordBits ? ~BitVec::Word{0} : ((BitVec::Word{1} << bits) - 1);
}

// Calls fn(word_index, mask) for each word touched by [begin, end).
template <class Fn>
void for_each_masked_word(std::size_t begin, std::size_t end, Fn&& fn) {
  if (begin >= end) return;
  const std::size_t first = begin / BitVec::kWordBits;
  const std::size_t last = (end - 1) / BitVec::kWordBits;
  for (std::size_t w = first; w <= last; ++w) {
    const std::size_t lo = (w == first) ? begin % BitVec::kWordBits : 0;
    const std::size_t hi = (w == last) ? (end - 1) % BitVec::kWordBits + 1 : BitVec::kWordBits;
    const BitVec::Word mask = low_mask(hi) & ~low_mask(lo);
    if (!fn(w, mask)) return;
  }
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitVec::BitVec(std::size_t width) : width_(width), words_((width + kWordBits - 1) / kWordBits, 0) {}

void BitVec::set_all() {
  for (auto& w : words_) w = ~Word{0};
  if (width_ % kWordBits != 0) words_.back() &= low_mask(width_ % kWordBits);
}

void BitVec::clear() {
  for (auto& w : words_) w = 0;
}

std::size_t BitVec::count() const {
  std::size_t n = 0;
  for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BitVec::any() const {
  for (Word w : words_)
    if (w != 0) return true;
  return false;
}

std::size_t BitVec::count_range(std::size_t begin, std::size_t end) const {
  std::size_t n = 0;
  for_each_masked_word(begin, end, [&](std::size_t w, Word mask) {
    n += static_cast<std::size_t>(std::popcount(words_[w] & mask));
    return true;
  });
  return n;
}

bool BitVec::any_in_range(std::size_t begin, std::size_t end) const {
  bool found = false;
  for_each_masked_word(begin, end, [&](std::size_t w, Word mask) {
    found = (words_[w] & mask) != 0;
    return !found;
  });
  return found;
}

bool BitVec::all_in_range(std::size_t begin, std::size_t end) const {
  bool all = true;
  for_each_masked_word(begin, end, [&](std::size_t w, Word mask) {
    all = (words_[w] & mask) == mask;
    return all;
  });
  return all;
}

void BitVec::set_range(std::size_t begin, std::size_t end) {
  for_each_masked_word(begin, end, [&](std::size_t w, Word mask) {
    words_[w] |= mask;
    return true;
  });
}

bool BitVec::is_subset_of(const BitVec& other) const {
  check_same_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

BitVec& BitVec::operator|=(const BitVec& other) {
  check_same_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitVec& BitVec::operator&=(const BitVec& other) {
  check_same_width(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

std::string BitVec::to_string() const {
  std::string out(width_, '0');
  for (std::size_t i = 0; i < width_; ++i)
    if (test(i)) out[i] = '1';
  return out;
}

BitVec BitVec::from_string(std::string_view bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v.set(i);
    else if (bits[i] != '0')
      throw std::invalid_argument("bit string may only contain '0' and '1'");
  }
  return v;
}

std::string BitVec::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out((width_ + 3) / 4, '0');
  for (std::size_t k = 0; k < out.size(); ++k) {
    int nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t i = 4 * k + b;
      nibble = (nibble << 1) | ((i < width_ && test(i)) ? 1 : 0);
    }
    out[k] = kDigits[nibble];
  }
  return out;
}

BitVec BitVec::from_hex(std::string_view hex, std::size_t width) {
  if (hex.size() != (width + 3) / 4)
    throw std::invalid_argument("hex bit vector has " + std::to_string(hex.size()) +
                                " digits, expected " + std::to_string((width + 3) / 4));
  BitVec v(width);
  for (std::size_t k = 0; k < hex.size(); ++k) {
    const int nibble = hex_digit(hex[k]);
    if (nibble < 0) throw std::invalid_argument("invalid hex digit in bit vector");
    for (std::size_t b = 0; b < 4; ++b) {
      if (!((nibble >> (3 - b)) & 1)) continue;
      const std::size_t i = 4 * k + b;
      if (i >= width) throw std::invalid_argument("hex bit vector sets padding bits");
      v.set(i);
    }
  }
  return v;
}

std::size_t BitVec::hash() const {
  // FNV-1a over words, mixed with the width.
  std::uint64_t h = 1469598103934665603ull ^ width_;
  for (Word w : words_) {
    h ^= w;
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

void BitVec::check_same_width(const BitVec& other) const {
  if (other.width_ != width_)
    throw std::invalid_argument("bit vector width mismatch: " + std::to_string(width_) + " vs " +
                                std::to_string(other.width_));
}

bool intersects_in_range(const BitVec& a, const BitVec& b, std::size_t begin, std::size_t end) {
  const auto wa = a.words();
  const auto wb = b.words();
  bool found = false;
  for_each_masked_word(begin, end, [&](std::size_t w, BitVec::Word mask) {
    found = (wa[w] & wb[w] & mask) != 0;
    return !found;
  });
  return found;
}

}  // namespace rumix
