#include "roughlab/rng.hpp"

#include <cmath>

namespace roughlab {

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over the pair; one full round per word
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(mix(master) ^ mix(index + 0x632be59bd9b4e019ULL));
}

double GaussianStream::uniform() {
  // 53-bit mantissa, shifted into (0, 1]
  const std::uint64_t u = engine_();
  return ((u >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

}  // namespace roughlab
