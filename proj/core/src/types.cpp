#include "memharbor/types.hpp"

#include "memharbor/errors.hpp"

namespace memharbor {

std::string_view to_string(Category c) {
    switch (c) {
        case Category::personal_info: return "personal_info";
        case Category::professional_info: return "professional_info";
        case Category::preferences_interests: return "preferences_interests";
        case Category::goals_aspirations: return "goals_aspirations";
        case Category::contextual: return "contextual";
    }
    return "?";
}

std::string_view to_string(Intent i) {
    switch (i) {
        case Intent::information_seeking: return "information_seeking";
        case Intent::preference_expression: return "preference_expression";
        case Intent::goal_setting: return "goal_setting";
        case Intent::contextual_clarification: return "contextual_clarification";
        case Intent::social_interaction: return "social_interaction";
        case Intent::unknown: return "unknown";
    }
    return "?";
}

std::string_view to_string(EntityType t) {
    switch (t) {
        case EntityType::person: return "person";
        case EntityType::location: return "location";
        case EntityType::organization: return "organization";
        case EntityType::date: return "date";
        case EntityType::time: return "time";
        case EntityType::product: return "product";
        case EntityType::concept_: return "concept";
    }
    return "?";
}

std::string_view to_string(Dimension d) {
    switch (d) {
        case Dimension::semantic: return "semantic";
        case Dimension::entity: return "entity";
        case Dimension::category: return "category";
        case Dimension::intent: return "intent";
        case Dimension::context: return "context";
        case Dimension::temporal: return "temporal";
    }
    return "?";
}

Category parse_category(std::string_view label) {
    for (Category c : kAllCategories)
        if (to_string(c) == label) return c;
    throw Error("unknown category label: " + std::string(label));
}

Intent parse_intent(std::string_view label) {
    for (Intent i : kAllIntents)
        if (to_string(i) == label) return i;
    throw Error("unknown intent label: " + std::string(label));
}

EntityType parse_entity_type(std::string_view label) {
    for (EntityType t : kAllEntityTypes)
        if (to_string(t) == label) return t;
    throw Error("unknown entity type label: " + std::string(label));
}

Dimension parse_dimension(std::string_view label) {
    for (Dimension d : kAllDimensions)
        if (to_string(d) == label) return d;
    throw Error("unknown dimension name: " + std::string(label));
}

std::string to_string(DimensionSet set) {
    std::string out;
    for (Dimension d : kAllDimensions) {
        if (!set.contains(d)) continue;
        if (!out.empty()) out += ',';
        out += to_string(d);
    }
    return out;
}

DimensionSet parse_dimension_set(std::string_view csv) {
    DimensionSet set;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string_view::npos) comma = csv.size();
        std::string_view item = csv.substr(pos, comma - pos);
        // trim spaces
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) set.insert(parse_dimension(item));
        pos = comma + 1;
        if (comma == csv.size()) break;
    }
    return set;
}

} // namespace memharbor
