#include "signalcast/rng.hpp"

#include <cmath>
#include <numbers>

#include "signalcast/error.hpp"

namespace signalcast {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
      return "E_CONFIG";
    case ErrorCode::kInput:
      return "E_INPUT";
    case ErrorCode::kInternal:
      return "E_INTERNAL";
  }
  return "E_INTERNAL";
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw_internal("poisson mean must be non-negative");
  if (mean == 0.0) return 0;
  if (mean > 500.0) {
    const double v = std::round(mean + std::sqrt(mean) * normal());
    return v < 0 ? 0 : static_cast<std::uint64_t>(v);
  }
  // Inversion by sequential search; split large means to keep exp() in range.
  std::uint64_t total = 0;
  double remaining = mean;
  while (remaining > 0) {
    const double m = remaining > 30.0 ? 30.0 : remaining;
    remaining -= m;
    double p = std::exp(-m);
    double cdf = p;
    const double u = uniform();
    std::uint64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= m / static_cast<double>(k);
      cdf += p;
    }
    total += k;
  }
  return total;
}

}  // namespace signalcast
