#include "oppccn/rng.hpp"

#include <cmath>

namespace oppccn {

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double RngStream::exponential(double mean) {
  // next_double() < 1, so the log argument stays positive.
  return -mean * std::log(1.0 - next_double());
}

std::int64_t RngStream::geometric(double mean) {
  const double p = 1.0 / mean;
  const double u = next_double();
  return static_cast<std::int64_t>(std::floor(std::log(1.0 - u) / std::log(1.0 - p)));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t base_seed, std::string_view stream_name,
                             std::uint64_t run_index) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ fnv1a(stream_name));
  h = splitmix64(h ^ run_index);
  return h;
}

}  // namespace oppccn
