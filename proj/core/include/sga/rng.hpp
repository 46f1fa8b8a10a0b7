#pragma once

#include <cstdint>
#include <random>

namespace sga {

// SplitMix64 step; used to derive independent seed streams from one master
// seed so that adding a consumer never shifts the draws of another.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t s = master ^ (tag * 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t tag) {
  return std::mt19937_64(derive_seed(master, tag));
}

// Stream tags. Fixed values are part of the reproducibility contract:
// a run is identified by (master seed, tag) pairs.
namespace seed_tag {
inline constexpr std::uint64_t split = 1;
inline constexpr std::uint64_t initial_features = 2;
inline constexpr std::uint64_t weight_init = 3;
inline constexpr std::uint64_t none_samples = 4;
inline constexpr std::uint64_t augment_encoder = 5;
inline constexpr std::uint64_t candidate_universe = 6;
inline constexpr std::uint64_t final_train = 7;
inline constexpr std::uint64_t perturbation = 8;
inline constexpr std::uint64_t synthetic = 9;
}  // namespace seed_tag

}  // namespace sga
