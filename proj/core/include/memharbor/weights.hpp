#pragma once

#include <filesystem>
#include <iosfwd>
#include <numbers>

#include "memharbor/types.hpp"

namespace memharbor {

// Scoring constants. Defaults are the fixed operating point of the scorers;
// a weight file may override any subset.
struct DimensionWeights {
    double semantic = 0.5;
    double entity = 0.4;
    double category = 0.3;
    double intent = 0.3;
    double temporal = 0.2;
    double context = 0.2;

    double alpha = std::numbers::ln2 / 30.0;  // per-day decay, 30-day half-life
    double entity_cap = 0.4;
    double category_cap = 0.4;
    double per_category_credit = 0.3;
    double per_entity_weight = 0.4;
    double multi_bonus = 3.0;

    double weight_for(Dimension d) const;
    void validate() const;  // throws Error on negative weights / non-positive caps or alpha

    // `w_semantic=0.5` style file; every key optional.
    static DimensionWeights parse(std::istream& in);
    static DimensionWeights from_file(const std::filesystem::path& path);
};

} // namespace memharbor
