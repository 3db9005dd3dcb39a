#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "memharbor/types.hpp"

namespace memharbor {

// One stored conversational memory. Immutable after ingest except for the
// canonical-id annotations written by entity resolution.
struct MemoryRecord {
    std::string id;
    std::string user_id;
    std::string text;
    std::vector<double> embedding;
    std::vector<EntityMention> entities;
    std::set<Category> categories;
    Intent intent = Intent::unknown;
    std::vector<std::string> context_markers;
    std::int64_t timestamp = 0;  // seconds since epoch, UTC
};

// Append-oriented store of memories sharing one embedding dimension.
// Thread contract: any number of concurrent readers, or one exclusive writer.
class MemoryStore {
public:
    explicit MemoryStore(std::size_t dimension = 64);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return records_.size(); }

    // Validates invariants, normalizes a nonzero embedding to unit L2 norm,
    // and appends. Returns the stored id.
    // Throws DuplicateId, DimensionMismatch, InvalidEmbedding.
    const std::string& ingest(MemoryRecord record);

    bool contains(const std::string& id) const { return by_id_.count(id) != 0; }
    const MemoryRecord* find(const std::string& id) const;
    const std::vector<MemoryRecord>& records() const { return records_; }

    // Indices into records() for one user, in ingest order.
    std::span<const std::size_t> user_records(const std::string& user_id) const;
    std::vector<std::string> user_ids() const;  // sorted

    // Entity-resolution back-fill hook; the only post-ingest mutation.
    void annotate_canonical(std::size_t record_index, std::size_t mention_index,
                            std::string canonical_id);

private:
    std::size_t dimension_;
    std::vector<MemoryRecord> records_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_user_;
};

// Line-delimited UTF-8 store file.
// Line 1: `memharbor-store v1 dim=<D>`; one record object per line after it,
// field order fixed: id, user_id, text, embedding, entities, categories,
// intent, context_markers, timestamp. Returns bytes written.
std::size_t save_store(const MemoryStore& store, std::ostream& sink);
std::size_t save_store_file(const MemoryStore& store, const std::filesystem::path& path);

// Throws ParseError (with line number) or UnsupportedVersion.
MemoryStore load_store(std::istream& source);
MemoryStore load_store_file(const std::filesystem::path& path);

} // namespace memharbor
