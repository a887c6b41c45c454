#include "vstream/rng.hpp"

#include <cmath>

namespace vstream
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id)
{
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
    };
    return std::mt19937_64(seq);
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id))
{
}

double RngStream::uniform_open()
{
    // 52 random mantissa bits, shifted half a step off zero.
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

double RngStream::exponential(double rate)
{
    return -std::log(uniform_open()) / rate;
}

std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto k : keys)
        h = splitmix64(h ^ splitmix64(k));
    return h;
}

} // namespace vstream
