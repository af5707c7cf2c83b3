#pragma once

#include <cstdint>

namespace tdre {

/**
 * Counter-based generator: every draw is a pure function of (key, counter),
 * so draws can be indexed by dyad or replication and reproduce identically
 * for any thread count or evaluation order. Mixing is the splitmix64
 * finalizer applied to a Weyl sequence.
 */
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  // derive an independent generator (replications, sampler chunks, ...)
  CounterRng substream(std::uint64_t idx) const {
    CounterRng r(*this);
    r.key_ = mix(key_ + (idx + 1) * 0xd1342543de82ef95ull);
    return r;
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + counter * 0x9e3779b97f4a7c15ull);
  }

  // uniform on [0,1) with 53 random bits
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key() const { return key_; }

private:
  std::uint64_t key_;
};

// sequential convenience wrapper over CounterRng (single consumer streams)
class SequentialRng {
public:
  explicit SequentialRng(CounterRng base) : base_(base) {}
  double uniform() { return base_.uniform(ctr_++); }
  std::uint64_t bits() { return base_.bits(ctr_++); }

private:
  CounterRng base_;
  std::uint64_t ctr_ = 0;
};

}  // namespace tdre
