#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace rtplan {

enum class BudgetUnit { Milliseconds, Iterations };

// Per-decision search allowance: wall-clock time, or a deterministic count of
// search iterations (MHSP) / node expansions (A*, BFS).
struct Budget {
  BudgetUnit unit = BudgetUnit::Iterations;
  double amount = 0;

  static Budget millis(double ms) { return {BudgetUnit::Milliseconds, ms}; }
  static Budget iterations(std::uint64_t n) { return {BudgetUnit::Iterations, static_cast<double>(n)}; }

  bool deterministic() const { return unit == BudgetUnit::Iterations; }
  std::string to_string() const;
};

const char* to_string(BudgetUnit unit);

class BudgetTracker {
 public:
  using Clock = std::chrono::steady_clock;

  explicit BudgetTracker(const Budget& budget);

  // Checked once per iteration / expansion, before doing the work.
  bool exhausted() const;
  void consume() { ++used_; }
  std::uint64_t used() const { return used_; }
  std::chrono::nanoseconds elapsed() const { return Clock::now() - start_; }

 private:
  Budget budget_;
  Clock::time_point start_;
  Clock::time_point deadline_;
  std::uint64_t limit_ = 0;
  std::uint64_t used_ = 0;
};

}  // namespace rtplan
