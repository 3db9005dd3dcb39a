#include "memharbor/query.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>

#include "memharbor/errors.hpp"
#include "memharbor/text_similarity.hpp"

namespace memharbor {

namespace {

// Word spans over the raw text: [begin, end) byte offsets of alnum runs.
struct TokenSpan {
    std::size_t begin, end;
    std::string folded;
    bool sentence_initial;
};

std::vector<TokenSpan> span_tokenize(std::string_view text) {
    std::vector<TokenSpan> spans;
    std::size_t i = 0;
    bool at_sentence_start = true;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (!std::isalnum(c)) {
            if (c == '.' || c == '!' || c == '?') at_sentence_start = true;
            ++i;
            continue;
        }
        std::size_t begin = i;
        std::string folded;
        while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) {
            folded += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
            ++i;
        }
        spans.push_back({begin, i, std::move(folded), at_sentence_start});
        at_sentence_start = false;
    }
    return spans;
}

std::vector<std::pair<std::string, std::string>> read_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open rule file: " + path.string());
    std::vector<std::pair<std::string, std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected <key>\\t<value>", line_no);
        rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return rows;
}

std::vector<std::string> split_commas(const std::string& value) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        std::size_t comma = value.find(',', pos);
        if (comma == std::string::npos) comma = value.size();
        std::string item = value.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == value.size()) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace

std::vector<ExtractionRuleSet::Pattern> ExtractionRuleSet::builtin_patterns() {
    return {
        {EntityType::date, R"(\b\d{4}-\d{2}-\d{2}\b)"},
        {EntityType::date, R"(\b\d{1,2}/\d{1,2}/\d{4}\b)"},
        {EntityType::date,
         R"(\b(january|february|march|april|may|june|july|august|september|october|november|december) \d{1,2}\b)"},
        {EntityType::time, R"(\b\d{1,2}:\d{2}(:\d{2})?( ?(am|pm))?\b)"},
        {EntityType::time, R"(\b\d{1,2} ?(am|pm)\b)"},
    };
}

ExtractionRuleSet ExtractionRuleSet::load(const std::filesystem::path& gazetteer_file) {
    ExtractionRuleSet rules;
    for (auto& [type_label, surface] : read_tsv(gazetteer_file)) {
        EntityType type = parse_entity_type(type_label);
        rules.gazetteers[type].insert(fold_case(surface));
    }
    rules.patterns = builtin_patterns();
    return rules;
}

IntentKeywordTable IntentKeywordTable::load(const std::filesystem::path& path) {
    IntentKeywordTable table;
    for (auto& [label, phrase] : read_tsv(path))
        table.phrases[parse_intent(label)].push_back(fold_case(phrase));
    return table;
}

CategoryKeywordTable CategoryKeywordTable::load(const std::filesystem::path& path) {
    CategoryKeywordTable table;
    for (auto& [label, phrase] : read_tsv(path))
        table.phrases[parse_category(label)].push_back(fold_case(phrase));
    return table;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) {
    SynonymTable table;
    for (auto& [word, syns] : read_tsv(path)) {
        auto& set = table.by_word[fold_case(word)];
        for (const std::string& s : split_commas(syns)) set.insert(fold_case(s));
    }
    return table;
}

StrategyTable StrategyTable::load(const std::filesystem::path& path) {
    StrategyTable table;
    bool saw_default = false;
    for (auto& [label, dims] : read_tsv(path)) {
        DimensionSet set = parse_dimension_set(dims);
        if (set.empty()) throw Error("strategy row must list at least one dimension: " + label);
        if (label == "default") {
            table.default_set = set;
            saw_default = true;
        } else {
            table.by_category[parse_category(label)] = set;
        }
    }
    if (!saw_default) throw Error("strategy table must contain a default row");
    return table;
}

RuleSet RuleSet::load_dir(const std::filesystem::path& dir) {
    RuleSet rules;
    rules.extraction = ExtractionRuleSet::load(dir / "gazetteer.tsv");
    rules.intents = IntentKeywordTable::load(dir / "intents.tsv");
    rules.categories = CategoryKeywordTable::load(dir / "categories.tsv");
    rules.synonyms = SynonymTable::load(dir / "synonyms.tsv");
    rules.strategy = StrategyTable::load(dir / "strategy.tsv");
    return rules;
}

namespace {

// Tokens the capitalization heuristic must never promote to entities.
const std::set<std::string>& heuristic_stopwords() {
    static const std::set<std::string> words = {
        "i",   "my",    "me",   "we",   "you",  "he",   "she",  "it",    "they", "the",
        "a",   "an",    "mr",   "ms",   "dr",   "what", "where", "when", "who",  "why",
        "how", "do",    "does", "is",   "are",  "did",  "am",   "was",   "were", "will",
        "this", "that", "these", "those", "not", "no",  "yes",  "please"};
    return words;
}

struct Candidate {
    std::size_t first_token, last_token;  // inclusive token range
    std::size_t begin, end;               // byte span
    EntityType type;
    int source;  // 0 gazetteer, 1 pattern, 2 heuristic
};

bool is_capitalized(std::string_view text, const TokenSpan& span) {
    if (span.end - span.begin < 2) return false;
    return std::isupper(static_cast<unsigned char>(text[span.begin])) != 0;
}

EntityType heuristic_type(const std::vector<TokenSpan>& spans, std::size_t first_token) {
    if (first_token > 0) {
        const std::string& prev = spans[first_token - 1].folded;
        if (prev == "in" || prev == "near" || prev == "from" || prev == "to")
            return EntityType::location;
        if (prev == "at") return EntityType::organization;
    }
    return EntityType::person;
}

} // namespace

std::vector<EntityMention> extract_entities(std::string_view text,
                                            const ExtractionRuleSet& rules) {
    std::vector<TokenSpan> spans = span_tokenize(text);
    if (spans.empty()) return {};
    std::string folded = fold_case(text);
    std::vector<Candidate> candidates;

    // Gazetteer: longest token-sequence lookup at each start position.
    // Surfaces may span multiple tokens ("new york"); compare against the
    // folded byte slice so inner separators match literally.
    for (std::size_t start = 0; start < spans.size(); ++start) {
        for (std::size_t end = std::min(spans.size(), start + 4); end > start; --end) {
            std::string_view slice(folded.data() + spans[start].begin,
                                   spans[end - 1].end - spans[start].begin);
            for (const auto& [type, surfaces] : rules.gazetteers) {
                if (surfaces.count(std::string(slice))) {
                    candidates.push_back(
                        {start, end - 1, spans[start].begin, spans[end - 1].end, type, 0});
                }
            }
        }
    }

    // Date/time regex patterns over the folded text. Compiled patterns are
    // cached per expression; std::regex construction dominates otherwise.
    for (const auto& pattern : rules.patterns) {
        static thread_local std::map<std::string, std::regex> compiled;
        auto [slot, inserted] = compiled.try_emplace(pattern.regex);
        if (inserted) slot->second = std::regex(pattern.regex, std::regex::ECMAScript);
        const std::regex& re = slot->second;
        auto begin = std::sregex_iterator(folded.begin(), folded.end(), re);
        for (auto it = begin; it != std::sregex_iterator(); ++it) {
            std::size_t mb = static_cast<std::size_t>(it->position());
            std::size_t me = mb + static_cast<std::size_t>(it->length());
            // map byte span to covered tokens
            std::size_t first = spans.size(), last = 0;
            for (std::size_t t = 0; t < spans.size(); ++t) {
                if (spans[t].begin >= mb && spans[t].end <= me) {
                    first = std::min(first, t);
                    last = t;
                }
            }
            if (first == spans.size()) continue;
            candidates.push_back({first, last, mb, me, pattern.type, 1});
        }
    }

    // Capitalization heuristic: maximal runs of capitalized tokens that do
    // not open a sentence and are not stopwords.
    if (rules.case_heuristics) {
        std::size_t t = 0;
        while (t < spans.size()) {
            bool eligible = is_capitalized(text, spans[t]) && !spans[t].sentence_initial &&
                            !heuristic_stopwords().count(spans[t].folded);
            if (!eligible) {
                ++t;
                continue;
            }
            std::size_t run_end = t;
            while (run_end + 1 < spans.size() && is_capitalized(text, spans[run_end + 1]) &&
                   !heuristic_stopwords().count(spans[run_end + 1].folded))
                ++run_end;
            candidates.push_back({t, run_end, spans[t].begin, spans[run_end].end,
                                  heuristic_type(spans, t), 2});
            t = run_end + 1;
        }
    }

    // Longest match wins, then leftmost, then source priority, then type.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        std::size_t la = a.end - a.begin, lb = b.end - b.begin;
        if (la != lb) return la > lb;
        if (a.begin != b.begin) return a.begin < b.begin;
        if (a.source != b.source) return a.source < b.source;
        return a.type < b.type;
    });

    std::vector<bool> claimed(spans.size(), false);
    std::vector<Candidate> accepted;
    for (const Candidate& c : candidates) {
        bool free = true;
        for (std::size_t t = c.first_token; t <= c.last_token; ++t)
            if (claimed[t]) free = false;
        if (!free) continue;
        for (std::size_t t = c.first_token; t <= c.last_token; ++t) claimed[t] = true;
        accepted.push_back(c);
    }
    std::sort(accepted.begin(), accepted.end(),
              [](const Candidate& a, const Candidate& b) { return a.begin < b.begin; });

    std::vector<EntityMention> mentions;
    mentions.reserve(accepted.size());
    for (const Candidate& c : accepted) {
        EntityMention m;
        m.surface = std::string(text.substr(c.begin, c.end - c.begin));
        m.type = c.type;
        mentions.push_back(std::move(m));
    }
    return mentions;
}

namespace {

// Contiguous token-subsequence containment.
bool phrase_matches(const std::vector<std::string>& text_tokens,
                    const std::vector<std::string>& phrase_tokens) {
    if (phrase_tokens.empty() || phrase_tokens.size() > text_tokens.size()) return false;
    for (std::size_t i = 0; i + phrase_tokens.size() <= text_tokens.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < phrase_tokens.size(); ++j) {
            if (text_tokens[i + j] != phrase_tokens[j]) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

bool any_phrase_matches(const std::vector<std::string>& text_tokens,
                        const std::vector<std::string>& phrases) {
    for (const std::string& phrase : phrases) {
        if (phrase_matches(text_tokens, TokenizedText::from(phrase).words)) return true;
    }
    return false;
}

} // namespace

Intent classify_intent(std::string_view text, const IntentKeywordTable& table) {
    std::vector<std::string> tokens = TokenizedText::from(text).words;
    // kAllIntents order doubles as the tie-break priority
    for (Intent intent : kAllIntents) {
        if (intent == Intent::unknown) continue;
        auto it = table.phrases.find(intent);
        if (it != table.phrases.end() && any_phrase_matches(tokens, it->second)) return intent;
    }
    return Intent::unknown;
}

std::set<Category> classify_categories(std::string_view text, const CategoryKeywordTable& table) {
    std::vector<std::string> tokens = TokenizedText::from(text).words;
    std::set<Category> out;
    for (const auto& [category, phrases] : table.phrases)
        if (any_phrase_matches(tokens, phrases)) out.insert(category);
    return out;
}

DimensionSet select_strategy(const ProcessedQuery& query, const StrategyTable& table) {
    if (query.categories.empty()) return table.default_set;
    DimensionSet result;
    for (Category c : query.categories) {
        auto it = table.by_category.find(c);
        result = result.united(it != table.by_category.end() ? it->second : table.default_set);
    }
    if (result.empty()) return table.default_set;
    return result;
}

QueryProcessor::QueryProcessor(const RuleSet& rules, const EmbeddingProvider& provider)
    : rules_(rules), provider_(provider) {}

ProcessedQuery QueryProcessor::process(std::string_view text, std::int64_t now,
                                       std::span<const std::string> context_markers,
                                       std::optional<DimensionSet> forced_dimensions) const {
    ProcessedQuery q;
    q.text.assign(text);
    q.embedding = provider_.embed(text);
    q.entities = extract_entities(text, rules_.extraction);
    q.categories = classify_categories(text, rules_.categories);
    q.intent = classify_intent(text, rules_.intents);
    q.context_markers.assign(context_markers.begin(), context_markers.end());
    q.timestamp = now;
    q.enabled_dimensions =
        forced_dimensions ? *forced_dimensions : select_strategy(q, rules_.strategy);
    if (q.enabled_dimensions.empty()) throw NoDimensions();
    return q;
}

std::vector<ProcessedQuery> QueryProcessor::expand(const ProcessedQuery& query) const {
    constexpr std::size_t kMaxVariants = 5;
    std::vector<ProcessedQuery> out;
    out.push_back(query);

    std::vector<TokenSpan> spans = span_tokenize(query.text);
    for (const TokenSpan& span : spans) {
        if (out.size() > kMaxVariants) break;
        auto it = rules_.synonyms.by_word.find(span.folded);
        if (it == rules_.synonyms.by_word.end()) continue;
        for (const std::string& synonym : it->second) {  // std::set: lexicographic
            if (out.size() > kMaxVariants) break;
            std::string variant_text = query.text;
            variant_text.replace(span.begin, span.end - span.begin, synonym);
            out.push_back(process(variant_text, query.timestamp, query.context_markers,
                                  query.enabled_dimensions));
        }
    }
    return out;
}

} // namespace memharbor
