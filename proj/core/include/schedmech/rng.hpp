#pragma once

#include <cstdint>
#include <random>

namespace schedmech {

// Finalizer from the splitmix64 generator. Bijective on 64-bit words, so
// distinct inputs never collide.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// One independent generator per trial, derived from (seed, trial index)
// alone. Splitting the trial range across threads therefore cannot change
// which cost vectors get drawn, only who draws them.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial_index) {
  return std::mt19937_64(splitmix64(seed + (trial_index + 1) * 0x9e3779b97f4a7c15ull));
}

// Uniform draw on [0, 1) with exactly 53 random bits. Spelled out instead of
// using std::uniform_real_distribution, whose output is implementation
// defined and would break cross-compiler reproducibility of results.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace schedmech
