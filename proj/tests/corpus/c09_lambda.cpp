#include <algorithm>
#include <vector>

int count_big(const std::vector<int>& v, int threshold) {
  auto pred = [threshold](int x) { return x > threshold; };
  return static_cast<int>(std::count_if(v.begin(), v.end(), pred));
}

int main() {
  std::vector<int> xs = {1, 5, 9};
  return count_big(xs, 4);
}
