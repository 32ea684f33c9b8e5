// Small shared helpers: seeded RNG streams, hashing, text IO.

#ifndef MORPHOFORGE_UTIL_HPP
#define MORPHOFORGE_UTIL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace morpho {

// splitmix64 finalizer; the standard mixer for deriving independent streams.
std::uint64_t mix64(std::uint64_t x);

// Derive a child seed from a root seed and up to three stream tags.
// Stable across platforms and runs; used everywhere a sub-task needs
// its own RNG so that per-item results do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

std::mt19937_64 make_rng(std::uint64_t seed);

// Unbiased draw in [0, n) by rejection. std::uniform_int_distribution is
// implementation-defined, so anything result-affecting goes through these.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

// Uniform double in [0, 1) with 53 bits of randomness.
double uniform_real01(std::mt19937_64& rng);

// Standard normal via Box-Muller.
double normal_sample(std::mt19937_64& rng);

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// FNV-1a over bytes; used for config hashes and dataset fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t v);

std::string lowercase(std::string_view s);

// Splits on a single delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view s, char delim);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Whole-file helpers. read_lines strips trailing '\r' and drops a final
// empty line caused by a trailing newline.
std::vector<std::string> read_lines(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

bool file_exists(const std::string& path);

}  // namespace morpho

#endif
