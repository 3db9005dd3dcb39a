#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace memharbor {

// ASCII case folding. Unicode normalization beyond this is out of scope.
std::string fold_case(std::string_view text);

// Lowercased word tokens: split on any non-alphanumeric run, drop empties.
struct TokenizedText {
    std::string raw;
    std::vector<std::string> words;
    std::set<std::string> word_set;

    static TokenizedText from(std::string_view raw);
};

// |Wa ∩ Wb| / |Wa ∪ Wb|. Both word sets empty -> 1.0.
double jaccard(const TokenizedText& a, const TokenizedText& b);

// Ratcliff–Obershelp ratio 2*M/(|a|+|b|): M counts characters in the
// recursively found matching blocks (longest common contiguous block,
// ties broken by smallest start in the first string, then in the second,
// then recurse on both sides). Arguments are ordered canonically before
// matching so the ratio is symmetric. Both strings empty -> 1.0.
// Case-sensitive.
double sequence_ratio(std::string_view a, std::string_view b);

// |Wa ∩ Wb| / max(|Wa|, |Wb|). Both word sets empty -> 1.0.
double word_overlap(const TokenizedText& a, const TokenizedText& b);

// Blend of the three components plus exact/substring bonuses, range [0, 1.5]:
//   (J + S_seq + W_overlap)/3 + max(B_exact, B_substring) * 0.5
// All comparisons are case-folded. B_exact = 1 iff folded strings are equal;
// B_substring = 0.8 iff one folded string contains the other (both nonempty,
// not equal). Two empty strings score 0, as does empty-vs-nonempty.
double enhanced_text_similarity(std::string_view q, std::string_view m);

// Variant over pre-folded, pre-tokenized inputs (raw fields must already be
// case-folded). Used by the scoring hot path to avoid re-tokenizing.
double enhanced_text_similarity_folded(const TokenizedText& q, const TokenizedText& m);

} // namespace memharbor
