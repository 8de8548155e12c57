#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rtplan {

using FactId = std::uint32_t;
using ActionId = std::uint32_t;

// A set of ground facts over a fixed universe, stored as a bitset so that
// equal fact sets always compare and hash equal.
class State {
 public:
  State() = default;
  explicit State(std::size_t num_facts);
  State(std::size_t num_facts, std::span<const FactId> facts);

  std::size_t universe_size() const { return num_facts_; }

  bool contains(FactId f) const {
    return (words_[f >> 6] >> (f & 63)) & 1u;
  }
  void insert(FactId f) { words_[f >> 6] |= std::uint64_t{1} << (f & 63); }
  void erase(FactId f) { words_[f >> 6] &= ~(std::uint64_t{1} << (f & 63)); }

  bool contains_all(std::span<const FactId> facts) const {
    for (FactId f : facts) {
      if (!contains(f)) return false;
    }
    return true;
  }

  // True iff every fact of this state is also in `other`.
  bool is_subset_of(const State& other) const;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<FactId> facts() const;

  std::size_t hash() const;

  friend bool operator==(const State&, const State&) = default;

 private:
  std::size_t num_facts_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

}  // namespace rtplan
