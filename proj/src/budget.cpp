#include "rtplan/budget.hpp"

#include <cmath>
#include <sstream>

namespace rtplan {

const char* to_string(BudgetUnit unit) {
  return unit == BudgetUnit::Milliseconds ? "ms" : "iters";
}

std::string Budget::to_string() const {
  std::ostringstream os;
  os << amount << ' ' << rtplan::to_string(unit);
  return os.str();
}

BudgetTracker::BudgetTracker(const Budget& budget) : budget_(budget), start_(Clock::now()) {
  if (budget.unit == BudgetUnit::Milliseconds) {
    const auto ns = std::chrono::nanoseconds(static_cast<std::int64_t>(budget.amount * 1e6));
    deadline_ = start_ + ns;
  } else {
    limit_ = budget.amount <= 0 ? 0 : static_cast<std::uint64_t>(std::llround(budget.amount));
  }
}

bool BudgetTracker::exhausted() const {
  if (budget_.unit == BudgetUnit::Iterations) return used_ >= limit_;
  return Clock::now() >= deadline_;
}

}  // namespace rtplan
