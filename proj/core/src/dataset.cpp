#include "memharbor/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "memharbor/errors.hpp"
#include "memharbor/text_similarity.hpp"

namespace memharbor {

namespace {

// Seeded draws built directly on mt19937_64 output so generated bytes are
// identical across standard libraries (std distributions are not portable).
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    std::uint64_t below(std::uint64_t n) { return gen() % n; }
    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

    // support [5,15], mean 8.5
    std::size_t turn_count() {
        std::size_t extra = 0;
        for (int i = 0; i < 10; ++i)
            if (chance(0.35)) ++extra;
        return 5 + extra;
    }

    template <typename T>
    const T& pick(const std::vector<T>& bank) {
        return bank[below(bank.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }
};

const std::vector<std::string> kNames = {
    "Alice", "Bruno", "Carla", "David", "Elena", "Farid", "Greta", "Hiro",
    "Ines",  "Jonas", "Kira",  "Liam",  "Mona",  "Noor",  "Omar",  "Priya",
    "Quinn", "Rosa",  "Stefan", "Tara", "Uma",   "Viktor", "Wendy", "Yara"};
const std::vector<std::string> kCities = {
    "Paris",  "London", "Berlin", "Madrid", "Rome",   "Vienna", "Prague", "Lisbon",
    "Dublin", "Oslo",   "Tokyo",  "Sydney", "Toronto", "Austin", "Denver", "Boston"};
const std::vector<std::string> kCompanies = {
    "Google", "Siemens", "Toyota",  "Nestle", "Spotify", "Airbus",
    "Ikea",   "Samsung", "Bosch",   "Shopify", "Zalando", "Philips"};
const std::vector<std::string> kJobs = {
    "teacher", "designer", "journalist", "chef",      "translator",
    "nurse",   "lawyer",   "banker",     "carpenter", "mechanic"};
const std::vector<std::string> kHobbies = {
    "hiking",   "painting", "chess",    "photography", "gardening",
    "swimming", "cycling",  "pottery",  "birdwatching", "climbing"};
const std::vector<std::string> kFoods = {
    "sushi", "pasta",  "tacos",     "curry",    "falafel",
    "ramen", "paella", "dumplings", "pancakes", "risotto"};
const std::vector<std::string> kGoalRoles = {
    "pilot",    "novelist", "professor", "photographer",
    "director", "founder",  "diplomat",  "composer"};
const std::vector<std::string> kGoalActions = {
    "run a marathon", "learn japanese", "buy a house",   "start a bakery",
    "write a book",   "sail the coast", "plant a garden", "build a cabin"};
const std::vector<std::string> kProducts = {
    "camera", "bicycle", "laptop", "keyboard", "telescope", "turntable"};
const std::vector<std::string> kPets = {"dog", "cat", "parrot", "rabbit"};

struct Persona {
    std::string name, city, visited_city, company, job, hobby, food;
    std::string goal_role, goal_action, friend_name, product, pet, pet_name;
    std::string birthdate, startdate;
};

Persona draw_persona(Rng& rng) {
    Persona p;
    p.name = rng.pick(kNames);
    p.city = rng.pick(kCities);
    do {
        p.visited_city = rng.pick(kCities);
    } while (p.visited_city == p.city);
    p.company = rng.pick(kCompanies);
    p.job = rng.pick(kJobs);
    p.hobby = rng.pick(kHobbies);
    p.food = rng.pick(kFoods);
    p.goal_role = rng.pick(kGoalRoles);
    p.goal_action = rng.pick(kGoalActions);
    do {
        p.friend_name = rng.pick(kNames);
    } while (p.friend_name == p.name);
    p.product = rng.pick(kProducts);
    p.pet = rng.pick(kPets);
    do {
        p.pet_name = rng.pick(kNames);
    } while (p.pet_name == p.name || p.pet_name == p.friend_name);
    {
        std::ostringstream b;
        b << (1970 + rng.below(35)) << '-' << std::setw(2) << std::setfill('0')
          << (1 + rng.below(12)) << '-' << std::setw(2) << std::setfill('0')
          << (1 + rng.below(28));
        p.birthdate = b.str();
        std::ostringstream s;
        s << (2015 + rng.below(9)) << '-' << std::setw(2) << std::setfill('0')
          << (1 + rng.below(12)) << '-' << std::setw(2) << std::setfill('0')
          << (1 + rng.below(28));
        p.startdate = s.str();
    }
    return p;
}

// attribute keys a turn can reveal; queries target one or more of them
enum class Attr { name, city, company, job, hobby, food, goal_role, goal_action, discussion, none };

struct TurnTemplate {
    std::string (*render)(const Persona&);
    std::vector<Attr> reveals;
};

const std::vector<TurnTemplate>& turn_templates() {
    static const std::vector<TurnTemplate> templates = {
        // personal
        {[](const Persona& p) { return "My name is " + p.name + "."; }, {Attr::name}},
        {[](const Persona& p) { return "I live in " + p.city + "."; }, {Attr::city}},
        {[](const Persona& p) { return "I moved to " + p.city + " two years ago."; },
         {Attr::city}},
        {[](const Persona& p) { return "I was born on " + p.birthdate + "."; }, {}},
        // professional
        {[](const Persona& p) { return "I work at " + p.company + "."; }, {Attr::company}},
        {[](const Persona& p) {
             return "I work as a " + p.job + " at " + p.company + ".";
         },
         {Attr::job, Attr::company}},
        {[](const Persona& p) {
             return "I started my job at " + p.company + " on " + p.startdate + ".";
         },
         {Attr::company}},
        {[](const Persona& p) {
             return "My colleague " + p.friend_name + " works with me at " + p.company + ".";
         },
         {Attr::company}},
        // preferences
        {[](const Persona& p) { return "My hobbies include " + p.hobby + "."; }, {Attr::hobby}},
        {[](const Persona& p) { return "I love " + p.hobby + "."; }, {Attr::hobby}},
        {[](const Persona& p) { return "My favorite food is " + p.food + "."; }, {Attr::food}},
        {[](const Persona& p) {
             return "I often cook " + p.food + " with my friend " + p.friend_name + ".";
         },
         {Attr::food}},
        // goals
        {[](const Persona& p) { return "I want to become a " + p.goal_role + "."; },
         {Attr::goal_role}},
        {[](const Persona& p) { return "One of my goals is to " + p.goal_action + "."; },
         {Attr::goal_action}},
        {[](const Persona& p) { return "I am saving money to " + p.goal_action + "."; },
         {Attr::goal_action}},
        {[](const Persona& p) {
             return "I dream of becoming a " + p.goal_role + " someday.";
         },
         {Attr::goal_role}},
        // contextual
        {[](const Persona& p) {
             return "Earlier we discussed my trip to " + p.visited_city + ".";
         },
         {Attr::discussion}},
        {[](const Persona& p) { return "We talked before about " + p.hobby + "."; },
         {Attr::discussion}},
        {[](const Persona& p) {
             return "As I mentioned, I met " + p.friend_name + " in " + p.visited_city + ".";
         },
         {Attr::discussion}},
        // uncategorized filler
        {[](const Persona& p) { return "I bought a new " + p.product + " yesterday."; }, {}},
        {[](const Persona& p) {
             return "The weather in " + p.visited_city + " was lovely last week.";
         },
         {}},
        {[](const Persona& p) { return "My pet " + p.pet + " is named " + p.pet_name + "."; },
         {}},
    };
    return templates;
}

struct QueryTemplate {
    Category category;
    std::string (*render)(const Persona&);
    std::vector<Attr> targets;
    Intent gold_intent;
    // folded entity surfaces the rendered query contains by construction
    std::vector<std::string> (*gold_entities)(const Persona&);
};

std::vector<std::string> no_entities(const Persona&) { return {}; }

const std::vector<QueryTemplate>& query_templates(Category category) {
    static const std::map<Category, std::vector<QueryTemplate>> by_category = {
        {Category::personal_info,
         {
             {Category::personal_info,
              [](const Persona&) { return std::string("What is my name?"); },
              {Attr::name}, Intent::information_seeking, no_entities},
             {Category::personal_info,
              [](const Persona&) { return std::string("Where do I live?"); },
              {Attr::city}, Intent::information_seeking, no_entities},
         }},
        {Category::professional_info,
         {
             {Category::professional_info,
              [](const Persona&) { return std::string("Where do I work?"); },
              {Attr::company}, Intent::information_seeking, no_entities},
             {Category::professional_info,
              [](const Persona& p) { return "What is my role at " + p.company + "?"; },
              {Attr::job}, Intent::information_seeking,
              [](const Persona& p) { return std::vector<std::string>{fold_case(p.company)}; }},
         }},
        {Category::preferences_interests,
         {
             {Category::preferences_interests,
              [](const Persona&) { return std::string("What are my hobbies?"); },
              {Attr::hobby}, Intent::information_seeking, no_entities},
             {Category::preferences_interests,
              [](const Persona&) { return std::string("What is my favorite food?"); },
              {Attr::food}, Intent::information_seeking, no_entities},
         }},
        {Category::goals_aspirations,
         {
             {Category::goals_aspirations,
              [](const Persona&) { return std::string("What do I want to become?"); },
              {Attr::goal_role}, Intent::information_seeking, no_entities},
             {Category::goals_aspirations,
              [](const Persona&) { return std::string("What are my goals?"); },
              {Attr::goal_role, Attr::goal_action}, Intent::information_seeking, no_entities},
         }},
        {Category::contextual,
         {
             {Category::contextual,
              [](const Persona&) { return std::string("What did we discuss earlier?"); },
              {Attr::discussion}, Intent::contextual_clarification, no_entities},
         }},
    };
    return by_category.at(category);
}

constexpr std::array<double, 5> kCategoryShares = {0.25, 0.20, 0.25, 0.20, 0.10};

// Largest-remainder quotas shuffled into a per-conversation assignment: each
// slot is category c with probability p_c, and realized counts match the
// target shares exactly.
std::vector<Category> draw_category_assignment(Rng& rng, std::size_t n) {
    std::array<std::size_t, 5> counts{};
    std::array<double, 5> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 5; ++c) {
        double exact = kCategoryShares[c] * static_cast<double>(n);
        counts[c] = static_cast<std::size_t>(exact);
        remainder[c] = exact - static_cast<double>(counts[c]);
        assigned += counts[c];
    }
    while (assigned < n) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < 5; ++c)
            if (remainder[c] > remainder[best]) best = c;
        counts[best] += 1;
        remainder[best] = -1.0;
        ++assigned;
    }
    std::vector<Category> labels;
    labels.reserve(n);
    for (std::size_t c = 0; c < 5; ++c)
        labels.insert(labels.end(), counts[c], kAllCategories[c]);
    rng.shuffle(labels);
    return labels;
}

bool reveals_any(const TurnTemplate& t, const std::vector<Attr>& targets) {
    for (Attr a : t.reveals)
        if (std::find(targets.begin(), targets.end(), a) != targets.end()) return true;
    return false;
}

std::string pad_number(std::size_t value, int width) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

constexpr std::int64_t kEpochBase = 1700000000;

} // namespace

GeneratedDataset generate_dataset(std::uint64_t seed, std::size_t n_conversations,
                                  const RuleSet& rules, const EmbeddingProvider& provider) {
    if (n_conversations < 1) throw Error("n_conversations must be >= 1");
    Rng rng(seed);
    GeneratedDataset out{MemoryStore(provider.dimension()), {}};
    const auto& all_turns = turn_templates();
    std::vector<Category> assignment = draw_category_assignment(rng, n_conversations);

    for (std::size_t c = 0; c < n_conversations; ++c) {
        std::string cid = "c" + pad_number(c, 5);
        Persona persona = draw_persona(rng);
        std::size_t turns = rng.turn_count();
        Category category = assignment[c];
        const auto& candidates = query_templates(category);
        const QueryTemplate& qt = candidates[rng.below(candidates.size())];

        // gold turns first: one mandatory per target, extras by coin flip
        std::vector<std::size_t> chosen;
        for (Attr target : qt.targets) {
            bool mandatory_placed = false;
            for (std::size_t t = 0; t < all_turns.size(); ++t) {
                if (!reveals_any(all_turns[t], {target})) continue;
                if (!mandatory_placed || rng.chance(0.4)) {
                    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
                        chosen.push_back(t);
                    mandatory_placed = true;
                }
            }
        }
        if (chosen.size() > turns) chosen.resize(turns);

        // filler: anything that does not reveal a target
        std::vector<std::size_t> filler_pool;
        for (std::size_t t = 0; t < all_turns.size(); ++t) {
            if (reveals_any(all_turns[t], qt.targets)) continue;
            if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) continue;
            filler_pool.push_back(t);
        }
        rng.shuffle(filler_pool);
        for (std::size_t t : filler_pool) {
            if (chosen.size() >= turns) break;
            chosen.push_back(t);
        }
        rng.shuffle(chosen);

        std::set<std::string> gold_ids;
        std::string gold_answer;
        for (std::size_t j = 0; j < chosen.size(); ++j) {
            const TurnTemplate& tt = all_turns[chosen[j]];
            MemoryRecord rec;
            rec.id = cid + "-m" + pad_number(j, 2);
            rec.user_id = cid;
            rec.text = tt.render(persona);
            rec.embedding = provider.embed(rec.text);
            rec.entities = extract_entities(rec.text, rules.extraction);
            rec.categories = classify_categories(rec.text, rules.categories);
            rec.intent = classify_intent(rec.text, rules.intents);
            rec.context_markers = {std::string(kConversationMarkerPrefix) + cid,
                                   std::string(kSessionMarkerPrefix) + cid + "-" +
                                       std::to_string(j / 5)};
            rec.timestamp = kEpochBase + static_cast<std::int64_t>(c) * 7200 +
                            static_cast<std::int64_t>(j) * 60;
            if (reveals_any(tt, qt.targets)) {
                gold_ids.insert(rec.id);
                if (gold_answer.empty()) gold_answer = rec.text;  // earliest gold turn
            }
            out.store.ingest(std::move(rec));
        }

        EvalQuery q;
        q.conversation_id = cid;
        q.text = qt.render(persona);
        for (std::string& e : qt.gold_entities(persona)) q.gold_entities.insert(std::move(e));
        q.gold_intent = qt.gold_intent;
        q.gold_answer = gold_answer;
        q.gold_memory_ids = std::move(gold_ids);
        q.category = category;
        out.queries.push_back(std::move(q));
    }
    return out;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json query_to_json(const EvalQuery& q) {
    ordered_json j;
    j["conversation_id"] = q.conversation_id;
    j["query"] = q.text;
    j["gold_entities"] = q.gold_entities;
    j["gold_intent"] = to_string(q.gold_intent);
    j["gold_answer"] = q.gold_answer;
    j["gold_memory_ids"] = q.gold_memory_ids;
    j["category"] = to_string(q.category);
    return j;
}

EvalQuery query_from_json(const ordered_json& j) {
    EvalQuery q;
    q.conversation_id = j.at("conversation_id").get<std::string>();
    q.text = j.at("query").get<std::string>();
    for (const auto& e : j.at("gold_entities")) q.gold_entities.insert(e.get<std::string>());
    q.gold_intent = parse_intent(j.at("gold_intent").get<std::string>());
    q.gold_answer = j.at("gold_answer").get<std::string>();
    for (const auto& id : j.at("gold_memory_ids"))
        q.gold_memory_ids.insert(id.get<std::string>());
    q.category = parse_category(j.at("category").get<std::string>());
    return q;
}

} // namespace

void save_queries(const std::vector<EvalQuery>& queries, std::ostream& out) {
    for (const EvalQuery& q : queries) out << query_to_json(q).dump() << '\n';
}

void save_queries_file(const std::vector<EvalQuery>& queries,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open dataset file for writing: " + path.string());
    save_queries(queries, out);
}

std::vector<EvalQuery> load_queries(std::istream& in) {
    std::vector<EvalQuery> queries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            queries.push_back(query_from_json(ordered_json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), line_no);
        }
        if (queries.back().gold_answer.empty())
            throw ParseError("gold_answer must be nonempty", line_no);
    }
    return queries;
}

std::vector<EvalQuery> load_queries_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset file: " + path.string());
    return load_queries(in);
}

} // namespace memharbor
