#include "memharbor/embedding.hpp"

#include <cmath>

#include "memharbor/errors.hpp"
#include "memharbor/text_similarity.hpp"

namespace memharbor {

namespace {

constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = kFnvOffsetBasis ^ seed;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= kFnvPrime;
    }
    return h;
}

} // namespace

std::vector<double> hash_embed(std::string_view text, std::size_t dimension, std::uint64_t seed) {
    if (dimension < 1) throw Error("embedding dimension must be >= 1");
    std::vector<double> vec(dimension, 0.0);
    TokenizedText tokens = TokenizedText::from(text);
    if (tokens.words.empty()) return vec;

    // +-1 accumulation is exact integer arithmetic in doubles, so the result
    // is independent of token order.
    for (const std::string& token : tokens.words) {
        std::uint64_t h = fnv1a64(token, seed);
        std::size_t index = static_cast<std::size_t>(h % dimension);
        double sign = (h & 1ull) == 0 ? 1.0 : -1.0;
        vec[index] += sign;
    }

    double sq = 0.0;
    for (double v : vec) sq += v * v;
    if (sq > 0.0) {
        double norm = std::sqrt(sq);
        for (double& v : vec) v /= norm;
    }
    return vec;
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
    if (dimension_ < 1) throw Error("embedding dimension must be >= 1");
}

std::vector<double> HashEmbeddingProvider::embed(std::string_view text) const {
    return hash_embed(text, dimension_, seed_);
}

std::unique_ptr<EmbeddingProvider> make_provider(const EmbeddingSettings& settings) {
    if (settings.provider == "hash")
        return std::make_unique<HashEmbeddingProvider>(settings.dimension, settings.seed);
    if (settings.provider == "external")
        throw Error("embedding provider 'external' has no client in this build; "
                    "inject an EmbeddingProvider instance instead");
    throw Error("unknown embedding provider: " + settings.provider);
}

} // namespace memharbor
