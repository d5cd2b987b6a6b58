#ifndef LFGW_RNG_HPP
#define LFGW_RNG_HPP

#include <cstdint>

namespace lfgw {

namespace detail {
// SplitMix64 finalizer (Stafford mix13).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}
}  // namespace detail

// Counter-based stream keyed by (seed, replicate, purpose). Replicates and
// purposes get statistically independent streams, and a draw depends only on
// the key and the draw index, so results are reproducible under any
// scheduling of replicates across threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t purpose)
      : key_(derive_key(seed, replicate, purpose)), ctr_(0) {}

  std::uint64_t next_u64() {
    ctr_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(ctr_ ^ key_);
  }

  // Uniform on the open interval (0, 1).
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t key() const { return key_; }

 private:
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t replicate,
                                  std::uint64_t purpose) {
    std::uint64_t k = detail::mix64(seed + 0x9e3779b97f4a7c15ULL);
    k = detail::mix64(k ^ detail::mix64(replicate + 0xd1b54a32d192ed03ULL));
    k = detail::mix64(k ^ detail::mix64(purpose + 0x8cb92ba72f3d8dd7ULL));
    return k;
  }

  std::uint64_t key_;
  std::uint64_t ctr_;
};

// Purpose tags used across the simulation kit.
enum class StreamPurpose : std::uint64_t {
  offspring = 1,
  environment = 2,
  integral = 3,
  perpetuity = 4,
};

inline RngStream make_stream(std::uint64_t seed, std::uint64_t replicate,
                             StreamPurpose purpose) {
  return RngStream(seed, replicate, static_cast<std::uint64_t>(purpose));
}

}  // namespace lfgw

#endif
