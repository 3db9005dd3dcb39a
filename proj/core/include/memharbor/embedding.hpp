#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace memharbor {

// Text -> fixed-length vector. Implementations must be deterministic
// (same text, same vector), stateless after construction, and return
// finite components of exactly `dimension()` length.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

// Feature-hashing bag of tokens. Each token is hashed with 64-bit FNV-1a
// (offset basis XOR seed, then token bytes); index = hash mod dimension,
// sign = +1 for even hash, -1 for odd. Accumulated counts are L2-normalized;
// empty text yields the zero vector. Deterministic across runs and platforms.
std::vector<double> hash_embed(std::string_view text, std::size_t dimension, std::uint64_t seed);

class HashEmbeddingProvider final : public EmbeddingProvider {
public:
    HashEmbeddingProvider(std::size_t dimension, std::uint64_t seed);

    std::size_t dimension() const override { return dimension_; }
    std::vector<double> embed(std::string_view text) const override;
    std::uint64_t seed() const { return seed_; }

private:
    std::size_t dimension_;
    std::uint64_t seed_;
};

struct EmbeddingSettings {
    std::string provider = "hash";  // hash | external
    std::size_t dimension = 64;
    std::uint64_t seed = 1;
};

// Throws Error for "external" (no remote client ships in this build; callers
// with one inject their own EmbeddingProvider) and for unknown names.
std::unique_ptr<EmbeddingProvider> make_provider(const EmbeddingSettings& settings);

} // namespace memharbor
