#include "noma/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace noma {

ChannelVariances ChannelVariances::make(double alpha_sd, double alpha_sr, double alpha_rd) {
  ChannelVariances v{alpha_sd, alpha_sr, alpha_rd};
  v.validate();
  return v;
}

void ChannelVariances::validate() const {
  auto positive = [](double a) { return std::isfinite(a) && a > 0.0; };
  if (!positive(alpha_sd) || !positive(alpha_sr) || !positive(alpha_rd)) {
    std::ostringstream msg;
    msg << "channel variances must be finite and positive (alpha_sd=" << alpha_sd
        << ", alpha_sr=" << alpha_sr << ", alpha_rd=" << alpha_rd << ")";
    throw std::invalid_argument(msg.str());
  }
  if (!(alpha_sd < alpha_sr)) {
    std::ostringstream msg;
    msg << "alpha_sd=" << alpha_sd << " must be below alpha_sr=" << alpha_sr
        << ": the relay decodes both symbols only if the source-relay link is on average "
           "stronger than the direct link";
    throw std::invalid_argument(msg.str());
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SeededGenerator SeededGenerator::for_stream(std::uint64_t seed, std::uint64_t index) {
  return SeededGenerator(splitmix64(seed ^ splitmix64(index + 1)));
}

ChannelRealization sample(const ChannelVariances& variances, SeededGenerator& gen) {
  ChannelRealization r;
  r.beta_sd = gen.exponential(variances.alpha_sd);
  r.beta_sr = gen.exponential(variances.alpha_sr);
  r.beta_rd = gen.exponential(variances.alpha_rd);
  return r;
}

}  // namespace noma
