#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rumix {

// Fixed-width, word-packed bit vector. Bit i lives in word i/64 at position
// i%64. Bits beyond width() are always zero.
class BitVec {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVec() = default;
  explicit BitVec(std::size_t width);

  std::size_t width() const { return width_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  bool test(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set(std::size_t i) { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void set_all();
  void clear();

  std::size_t count() const;
  bool any() const;
  std::size_t count_range(std::size_t begin, std::size_t end) const;
  bool any_in_range(std::size_t begin, std::size_t end) const;
  bool all_in_range(std::size_t begin, std::size_t end) const;
  void set_range(std::size_t begin, std::size_t end);

  // True iff every set bit of *this is also set in other.
  bool is_subset_of(const BitVec& other) const;

  BitVec& operator|=(const BitVec& other);
  BitVec& operator&=(const BitVec& other);
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend bool operator==(const BitVec& a, const BitVec& b) = default;

  // "1010..." in index order.
  std::string to_string() const;
  static BitVec from_string(std::string_view bits);

  // Lowercase hex, one nibble per 4 bits in index order; bit 4k is the most
  // significant bit of nibble k. "1010 0001" -> "a1".
  std::string to_hex() const;
  static BitVec from_hex(std::string_view hex, std::size_t width);

  std::size_t hash() const;

 private:
  void check_same_width(const BitVec& other) const;

  std::size_t width_ = 0;
  std::vector<Word> words_;
};

// True iff a & b has at least one set bit in [begin, end).
bool intersects_in_range(const BitVec& a, const BitVec& b, std::size_t begin, std::size_t end);

struct BitVecHash {
  std::size_t operator()(const BitVec& v) const { return v.hash(); }
};

}  // namespace rumix
