#include "memharbor/weights.hpp"

#include <fstream>

#include "memharbor/errors.hpp"
#include "memharbor/kv_config.hpp"

namespace memharbor {

double DimensionWeights::weight_for(Dimension d) const {
    switch (d) {
        case Dimension::semantic: return semantic;
        case Dimension::entity: return entity;
        case Dimension::category: return category;
        case Dimension::intent: return intent;
        case Dimension::context: return context;
        case Dimension::temporal: return temporal;
    }
    return 0.0;
}

void DimensionWeights::validate() const {
    for (Dimension d : kAllDimensions)
        if (weight_for(d) < 0.0) throw Error("dimension weights must be >= 0");
    if (entity_cap <= 0.0 || category_cap <= 0.0) throw Error("caps must be > 0");
    if (alpha <= 0.0) throw Error("alpha must be > 0");
    if (per_category_credit < 0.0 || per_entity_weight < 0.0 || multi_bonus < 0.0)
        throw Error("scoring constants must be >= 0");
}

DimensionWeights DimensionWeights::parse(std::istream& in) {
    DimensionWeights w;
    auto kv = parse_key_values(in);
    auto take = [&kv](const char* key, double& field) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        try {
            field = std::stod(it->second);
        } catch (const std::exception&) {
            throw Error(std::string("bad numeric value for ") + key + ": " + it->second);
        }
        kv.erase(it);
    };
    take("w_semantic", w.semantic);
    take("w_entity", w.entity);
    take("w_category", w.category);
    take("w_intent", w.intent);
    take("w_temporal", w.temporal);
    take("w_context", w.context);
    take("alpha", w.alpha);
    take("entity_cap", w.entity_cap);
    take("category_cap", w.category_cap);
    take("per_category_credit", w.per_category_credit);
    take("per_entity_weight", w.per_entity_weight);
    take("multi_bonus", w.multi_bonus);
    if (!kv.empty()) throw Error("unknown weight key: " + kv.begin()->first);
    w.validate();
    return w;
}

DimensionWeights DimensionWeights::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open weights file: " + path.string());
    return parse(in);
}

} // namespace memharbor
