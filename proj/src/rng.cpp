#include "growthsde/rng.hpp"

#include "growthsde/errors.hpp"

namespace growthsde {

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(mix64(mix64(master_seed) ^ mix64(stream_id ^ 0x5851f42d4c957f2dULL))) {}

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(master_seed_,
                   mix64(stream_id_ ^ mix64(index + 0x2545f4914f6cdd1dULL)));
}

double RngStream::uniform() {
  // 53 random bits centred in their cell: never 0, never 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return normal_(engine_); }

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw ValidationError("gamma shape must be > 0");
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

std::size_t RngStream::index(std::size_t n) {
  if (n == 0) throw ValidationError("index: empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

}  // namespace growthsde
