#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memharbor {

// Query/memory content category. Closed enumeration; parsing an unknown
// label is an error.
enum class Category : std::uint8_t {
    personal_info,
    professional_info,
    preferences_interests,
    goals_aspirations,
    contextual,
};

inline constexpr std::array<Category, 5> kAllCategories = {
    Category::personal_info,      Category::professional_info,
    Category::preferences_interests, Category::goals_aspirations,
    Category::contextual,
};

// Communicative intent. `unknown` is an explicit member: it never matches
// anything, including itself.
enum class Intent : std::uint8_t {
    information_seeking,
    preference_expression,
    goal_setting,
    contextual_clarification,
    social_interaction,
    unknown,
};

inline constexpr std::array<Intent, 6> kAllIntents = {
    Intent::information_seeking,     Intent::preference_expression,
    Intent::goal_setting,            Intent::contextual_clarification,
    Intent::social_interaction,      Intent::unknown,
};

enum class EntityType : std::uint8_t {
    person,
    location,
    organization,
    date,
    time,
    product,
    concept_,
};

inline constexpr std::array<EntityType, 7> kAllEntityTypes = {
    EntityType::person,  EntityType::location, EntityType::organization,
    EntityType::date,    EntityType::time,     EntityType::product,
    EntityType::concept_,
};

struct EntityMention {
    std::string surface;   // nonempty, original casing preserved
    EntityType type = EntityType::concept_;
    std::optional<std::string> canonical_id;  // set by entity resolution

    bool operator==(const EntityMention& other) const {
        return surface == other.surface && type == other.type;
    }
};

// One of the six similarity signals. Order here is the canonical order used
// everywhere (iteration, printing, bit positions).
enum class Dimension : std::uint8_t {
    semantic = 0,
    entity,
    category,
    intent,
    context,
    temporal,
};

inline constexpr std::array<Dimension, 6> kAllDimensions = {
    Dimension::semantic, Dimension::entity,  Dimension::category,
    Dimension::intent,   Dimension::context, Dimension::temporal,
};

// Small value-type set of dimensions backed by a bitmask.
class DimensionSet {
public:
    constexpr DimensionSet() = default;

    static constexpr DimensionSet all() {
        DimensionSet s;
        s.mask_ = 0b111111;
        return s;
    }
    static DimensionSet of(std::initializer_list<Dimension> dims) {
        DimensionSet s;
        for (Dimension d : dims) s.insert(d);
        return s;
    }

    void insert(Dimension d) { mask_ |= bit(d); }
    void erase(Dimension d) { mask_ &= ~bit(d); }
    constexpr bool contains(Dimension d) const { return (mask_ & bit(d)) != 0; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
    constexpr bool empty() const { return mask_ == 0; }

    DimensionSet united(DimensionSet other) const {
        DimensionSet s;
        s.mask_ = mask_ | other.mask_;
        return s;
    }

    bool operator==(const DimensionSet&) const = default;

private:
    static constexpr std::uint8_t bit(Dimension d) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(d));
    }
    std::uint8_t mask_ = 0;
};

// Label round-tripping. parse_* throw ParseError-free memharbor::Error on
// unknown labels (closed enumerations).
std::string_view to_string(Category c);
std::string_view to_string(Intent i);
std::string_view to_string(EntityType t);
std::string_view to_string(Dimension d);

Category parse_category(std::string_view label);
Intent parse_intent(std::string_view label);
EntityType parse_entity_type(std::string_view label);
Dimension parse_dimension(std::string_view label);

// "semantic,entity" style lists, canonical order on output.
std::string to_string(DimensionSet set);
DimensionSet parse_dimension_set(std::string_view csv);

} // namespace memharbor
