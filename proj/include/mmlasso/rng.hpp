#pragma once

#include <cstdint>
#include <vector>

namespace mmlasso {

//! Counter-based splitmix64 stream. Streams derived from (seed, tags) are
//! reproducible bit-for-bit regardless of thread scheduling, which is what
//! the simulation harness relies on for deterministic parallel runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  //! Derive an independent stream from a master seed and up to three tags
  //! (e.g. scenario id, replication index, task index).
  static Rng derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t c = 0) {
    std::uint64_t s = mix(master + 0x9e3779b97f4a7c15ULL);
    s = mix(s ^ mix(a + 0xbf58476d1ce4e5b9ULL));
    s = mix(s ^ mix(b + 0x94d049bb133111ebULL));
    s = mix(s ^ mix(c + 0xd6e8feb86659fd93ULL));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  //! Uniform double in (0, 1).
  double uniform() {
    // 53 random bits; offset keeps the value strictly inside (0,1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  //! Standard normal via the Box-Muller transform (no cached state).
  double normal();

  //! Chi-square with k degrees of freedom as a sum of squared normals.
  double chisq(int k);

  //! Student-t with nu degrees of freedom via normal/chi-square composition.
  double student_t(int nu);

  //! Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // multiply-shift; bias is negligible for the n used here
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  //! Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  //! Draw k distinct indices from [0, n) (partial Fisher-Yates).
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace mmlasso
