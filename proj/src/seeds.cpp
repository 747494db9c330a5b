#include "seeds.hpp"

#include <bit>

namespace fresh {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, const EmbeddingConfig& config, std::uint64_t stream) {
  double p1 = 0.0;
  double p2 = 0.0;
  if (const auto* s = std::get_if<SirenEmbedding>(&config)) {
    p1 = s->omega0;
  } else if (const auto* f = std::get_if<FourierEmbedding>(&config)) {
    p1 = f->sigma;
  } else {
    const auto& e = std::get<FinerEmbedding>(config);
    p1 = e.omega;
    p2 = e.k;
  }
  std::uint64_t h = mix(static_cast<std::uint64_t>(config.index()) + 1);
  h = mix(h ^ std::bit_cast<std::uint64_t>(p1));
  h = mix(h ^ std::bit_cast<std::uint64_t>(p2));
  h = mix(h ^ stream);
  return base ^ h;
}

}  // namespace fresh
