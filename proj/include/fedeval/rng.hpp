#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fedeval {

// 64-bit FNV-1a over raw bytes. Used for prompt table keys, RNG stream
// derivation and artifact digests, so it must stay byte-stable across
// platforms (std::hash is not).
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ull);

std::string to_hex(std::uint64_t v);

// splitmix64 sequence. One instance per (role, ids...) key; call sites never
// share a stream, which is what makes parallel runs reproducible.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double next_unit();                         // uniform in [0, 1)
    std::uint64_t next_below(std::uint64_t n);  // unbiased uniform in [0, n)

private:
    std::uint64_t state_;
};

// Stream for `key` under a master seed. Keys are path-like strings such as
// "s0/r2/m1/judge/c3/q17/AB"; equal keys give equal streams.
RngStream derive_stream(std::uint64_t master_seed, std::string_view key);

// k distinct indices drawn uniformly from [0, n), in draw order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k,
                                        RngStream& rng);

} // namespace fedeval
