#include <utility>

auto pair_sum(int a, int b) -> int {
  return a + b;
}

[[nodiscard]] constexpr int twice(int v) noexcept { return 2 * v; }

int consumer() { return pair_sum(1, twice(2)); }
