#include "mmlasso/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmlasso {

double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::chisq(int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) {
    double z = normal();
    s += z * z;
  }
  return s;
}

double Rng::student_t(int nu) {
  if (nu <= 0) throw std::invalid_argument("student_t: nu must be positive");
  double z = normal();
  return z / std::sqrt(chisq(nu) / static_cast<double>(nu));
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k > n) throw std::invalid_argument("sample: k > n");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace mmlasso
