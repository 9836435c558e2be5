#ifndef PLA_RNG_HPP_
#define PLA_RNG_HPP_

#include <cstdint>
#include <random>

namespace pla
{

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to turn (seed, stream id) pairs into
/// well-separated generator seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/**
 * @brief Seed of the generator for one replication.
 *
 * Replication r of a run launched with seed s is identified by seed s + r
 * (that is the seed printed in its output file names); its generator is
 * seeded with splitmix64(splitmix64(s + r) ^ stream).
 * Stream 0 drives demand, other stream ids are free for auxiliary draws.
 */
constexpr std::uint64_t stream_seed(std::uint64_t run_seed, std::uint64_t stream = 0) noexcept
{
  return splitmix64(splitmix64(run_seed) ^ stream);
}

inline Rng make_rng(std::uint64_t run_seed, std::uint64_t stream = 0)
{
  return Rng(stream_seed(run_seed, stream));
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng & rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace pla

#endif  // PLA_RNG_HPP_
