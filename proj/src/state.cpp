#include "rtplan/state.hpp"

#include <bit>
#include <stdexcept>

namespace rtplan {

State::State(std::size_t num_facts)
    : num_facts_(num_facts), words_((num_facts + 63) / 64, 0) {}

State::State(std::size_t num_facts, std::span<const FactId> facts)
    : State(num_facts) {
  for (FactId f : facts) {
    if (f >= num_facts) throw std::out_of_range("fact id outside universe");
    insert(f);
  }
}

bool State::is_subset_of(const State& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

std::size_t State::size() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<FactId> State::facts() const {
  std::vector<FactId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w) {
      const int bit = std::countr_zero(w);
      out.push_back(static_cast<FactId>(i * 64 + bit));
      w &= w - 1;
    }
  }
  return out;
}

std::size_t State::hash() const {
  // splitmix64 finalizer folded over the words
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ num_facts_;
  for (auto w : words_) {
    std::uint64_t z = w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    h ^= z ^ (z >> 31);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace rtplan
