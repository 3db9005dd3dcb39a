#include "memharbor/memory_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "memharbor/errors.hpp"

namespace memharbor {

MemoryStore::MemoryStore(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw Error("store dimension must be >= 1");
}

const std::string& MemoryStore::ingest(MemoryRecord record) {
    if (record.id.empty()) throw Error("memory id must be nonempty");
    if (by_id_.count(record.id)) throw DuplicateId(record.id);
    if (record.embedding.size() != dimension_)
        throw DimensionMismatch(dimension_, record.embedding.size());
    if (record.timestamp < 0) throw Error("timestamp must be >= 0");
    for (const EntityMention& m : record.entities)
        if (m.surface.empty()) throw Error("entity mention surface must be nonempty");

    double sq = 0.0;
    for (double v : record.embedding) {
        if (!std::isfinite(v)) throw InvalidEmbedding("non-finite component");
        sq += v * v;
    }
    if (sq > 0.0) {
        double norm = std::sqrt(sq);
        // skip vectors that are already unit-length: keeps reloaded stores
        // byte-stable instead of drifting by one ulp per round trip
        if (std::abs(norm - 1.0) > 1e-9) {
            for (double& v : record.embedding) v /= norm;
        }
    }

    std::size_t index = records_.size();
    records_.push_back(std::move(record));
    const MemoryRecord& stored = records_.back();
    by_id_.emplace(stored.id, index);
    by_user_[stored.user_id].push_back(index);
    return stored.id;
}

const MemoryRecord* MemoryStore::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::span<const std::size_t> MemoryStore::user_records(const std::string& user_id) const {
    auto it = by_user_.find(user_id);
    if (it == by_user_.end()) return {};
    return it->second;
}

std::vector<std::string> MemoryStore::user_ids() const {
    std::vector<std::string> ids;
    ids.reserve(by_user_.size());
    for (const auto& [user, _] : by_user_) ids.push_back(user);
    std::sort(ids.begin(), ids.end());
    return ids;
}

void MemoryStore::annotate_canonical(std::size_t record_index, std::size_t mention_index,
                                     std::string canonical_id) {
    records_.at(record_index).entities.at(mention_index).canonical_id = std::move(canonical_id);
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json record_to_json(const MemoryRecord& r) {
    ordered_json entities = ordered_json::array();
    for (const EntityMention& m : r.entities)
        entities.push_back({{"surface", m.surface}, {"type", to_string(m.type)}});
    ordered_json categories = ordered_json::array();
    for (Category c : r.categories) categories.push_back(to_string(c));
    ordered_json j;
    j["id"] = r.id;
    j["user_id"] = r.user_id;
    j["text"] = r.text;
    j["embedding"] = r.embedding;
    j["entities"] = std::move(entities);
    j["categories"] = std::move(categories);
    j["intent"] = to_string(r.intent);
    j["context_markers"] = r.context_markers;
    j["timestamp"] = r.timestamp;
    return j;
}

MemoryRecord record_from_json(const ordered_json& j) {
    MemoryRecord r;
    r.id = j.at("id").get<std::string>();
    r.user_id = j.at("user_id").get<std::string>();
    r.text = j.at("text").get<std::string>();
    r.embedding = j.at("embedding").get<std::vector<double>>();
    for (const auto& e : j.at("entities")) {
        EntityMention m;
        m.surface = e.at("surface").get<std::string>();
        m.type = parse_entity_type(e.at("type").get<std::string>());
        r.entities.push_back(std::move(m));
    }
    for (const auto& c : j.at("categories"))
        r.categories.insert(parse_category(c.get<std::string>()));
    r.intent = parse_intent(j.at("intent").get<std::string>());
    r.context_markers = j.at("context_markers").get<std::vector<std::string>>();
    r.timestamp = j.at("timestamp").get<std::int64_t>();
    return r;
}

} // namespace

std::size_t save_store(const MemoryStore& store, std::ostream& sink) {
    std::string header =
        "memharbor-store v1 dim=" + std::to_string(store.dimension()) + "\n";
    sink << header;
    std::size_t bytes = header.size();
    for (const MemoryRecord& r : store.records()) {
        std::string line = record_to_json(r).dump();
        sink << line << '\n';
        bytes += line.size() + 1;
    }
    if (!sink) throw Error("store sink write failed");
    return bytes;
}

std::size_t save_store_file(const MemoryStore& store, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open store file for writing: " + path.string());
    return save_store(store, out);
}

MemoryStore load_store(std::istream& source) {
    std::string header;
    if (!std::getline(source, header)) throw ParseError("missing header line", 1);

    const std::string prefix = "memharbor-store ";
    if (header.rfind(prefix, 0) != 0) throw ParseError("not a memharbor store file", 1);
    std::istringstream hs(header.substr(prefix.size()));
    std::string version, dim_field;
    hs >> version >> dim_field;
    if (version != "v1") throw UnsupportedVersion(header);
    if (dim_field.rfind("dim=", 0) != 0) throw ParseError("malformed header dim field", 1);
    std::size_t dim = 0;
    try {
        dim = std::stoul(dim_field.substr(4));
    } catch (const std::exception&) {
        throw ParseError("malformed header dim value", 1);
    }

    MemoryStore store(dim);
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            store.ingest(record_from_json(ordered_json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), line_no);
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return store;
}

MemoryStore load_store_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open store file: " + path.string());
    return load_store(in);
}

} // namespace memharbor
