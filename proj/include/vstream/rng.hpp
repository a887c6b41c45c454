#pragma once

#include <cstdint>
#include <random>

namespace vstream
{

/// A reproducible random stream identified by (seed, stream_id).
///
/// Draws are produced from std::mt19937_64 seeded through std::seed_seq, both
/// of which are fully specified by the standard, and uniforms are built from
/// raw engine bits, so the sequence is identical on every conforming platform.
class RngStream
{
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Uniform on the open interval (0, 1).
    double uniform_open();

    /// Exponential with the given rate, strictly positive.
    double exponential(double rate);

    std::uint64_t next_u64() { return engine_(); }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Mixes several keys into one 64-bit stream id (splitmix64 finalizer chain).
std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> keys);

} // namespace vstream
