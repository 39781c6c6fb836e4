#pragma once

#include <cmath>
#include <random>

namespace comdp {

// mt19937_64 with hand-rolled draws so identical seeds give identical streams
// on every platform (std::uniform_real_distribution makes no such promise).
class Rng {
 public:
  explicit Rng(unsigned long long seed) : gen_(seed) {}

  unsigned long long bits() { return gen_(); }

  // [0, 1)
  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // [lo, hi] inclusive
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<unsigned long long>(hi - lo + 1));
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace comdp
