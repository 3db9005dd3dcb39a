#include "memharbor/text_similarity.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>

namespace memharbor {

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

TokenizedText TokenizedText::from(std::string_view raw) {
    TokenizedText t;
    t.raw.assign(raw);
    std::string cur;
    for (char ch : raw) {
        unsigned char u = static_cast<unsigned char>(ch);
        if (std::isalnum(u)) {
            cur += static_cast<char>(std::tolower(u));
        } else if (!cur.empty()) {
            t.words.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) t.words.push_back(cur);
    t.word_set.insert(t.words.begin(), t.words.end());
    return t;
}

namespace {

std::size_t set_intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    std::size_t n = 0;
    for (const auto& w : small)
        if (large.count(w)) ++n;
    return n;
}

// Position index of b, bucketed by character. Reused across calls; version
// stamps avoid clearing 256 buckets each time.
struct CharIndex {
    std::array<std::vector<std::uint32_t>, 256> positions;
    std::array<std::uint64_t, 256> stamp{};
    std::uint64_t version = 0;

    void build(std::string_view b) {
        ++version;
        for (std::size_t j = 0; j < b.size(); ++j) {
            unsigned char c = static_cast<unsigned char>(b[j]);
            if (stamp[c] != version) {
                stamp[c] = version;
                positions[c].clear();
            }
            positions[c].push_back(static_cast<std::uint32_t>(j));
        }
    }
    const std::vector<std::uint32_t>* at(unsigned char c) const {
        return stamp[c] == version ? &positions[c] : nullptr;
    }
};

struct Match {
    std::uint32_t a_start, b_start, size;
};

// Scratch rows for longest_match. prev holds common-suffix lengths ending at
// the previous a-row; entries outside `touched` are guaranteed zero.
struct MatchScratch {
    std::vector<std::uint32_t> prev, cur;
    std::vector<std::uint32_t> prev_touched, cur_touched;
    std::vector<std::uint32_t> stack;

    void reserve(std::size_t b_len) {
        if (prev.size() < b_len) {
            prev.assign(b_len, 0);
            cur.assign(b_len, 0);
        }
    }
};

// Longest common contiguous block within [alo,ahi) x [blo,bhi).
// Selection: largest size, then smallest start in a, then smallest start in b
// (first maximal block under ascending (i, j) scan with strict improvement).
Match longest_match(std::string_view a, std::uint32_t alo, std::uint32_t ahi,
                    std::uint32_t blo, std::uint32_t bhi, const CharIndex& index,
                    MatchScratch& s) {
    Match best{alo, blo, 0};
    s.prev_touched.clear();
    s.cur_touched.clear();
    for (std::uint32_t i = alo; i < ahi; ++i) {
        s.cur_touched.clear();
        if (const auto* js = index.at(static_cast<unsigned char>(a[i]))) {
            for (std::uint32_t j : *js) {
                if (j < blo) continue;
                if (j >= bhi) break;
                std::uint32_t k = (j > blo ? s.prev[j - 1] : 0) + 1;
                s.cur[j] = k;
                s.cur_touched.push_back(j);
                if (k > best.size) {
                    best = {i - k + 1, j - k + 1, k};
                }
            }
        }
        for (std::uint32_t j : s.prev_touched) s.prev[j] = 0;
        std::swap(s.prev, s.cur);
        std::swap(s.prev_touched, s.cur_touched);
    }
    for (std::uint32_t j : s.prev_touched) s.prev[j] = 0;
    return best;
}

} // namespace

double jaccard(const TokenizedText& a, const TokenizedText& b) {
    if (a.word_set.empty() && b.word_set.empty()) return 1.0;
    std::size_t inter = set_intersection_size(a.word_set, b.word_set);
    std::size_t uni = a.word_set.size() + b.word_set.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double word_overlap(const TokenizedText& a, const TokenizedText& b) {
    if (a.word_set.empty() && b.word_set.empty()) return 1.0;
    std::size_t inter = set_intersection_size(a.word_set, b.word_set);
    std::size_t denom = std::max(a.word_set.size(), b.word_set.size());
    return static_cast<double>(inter) / static_cast<double>(denom);
}

double sequence_ratio(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    // Recursive block matching is direction-sensitive when equal-length
    // blocks compete; canonical argument order keeps the ratio symmetric.
    if (b < a) std::swap(a, b);

    thread_local CharIndex index;
    thread_local MatchScratch scratch;
    index.build(b);
    scratch.reserve(b.size());

    std::size_t matched = 0;
    // explicit work list of (alo, ahi, blo, bhi) quadruples
    auto& stack = scratch.stack;
    stack.clear();
    stack.insert(stack.end(), {0u, static_cast<std::uint32_t>(a.size()), 0u,
                               static_cast<std::uint32_t>(b.size())});
    while (!stack.empty()) {
        std::uint32_t bhi = stack.back(); stack.pop_back();
        std::uint32_t blo = stack.back(); stack.pop_back();
        std::uint32_t ahi = stack.back(); stack.pop_back();
        std::uint32_t alo = stack.back(); stack.pop_back();
        if (alo >= ahi || blo >= bhi) continue;
        Match m = longest_match(a, alo, ahi, blo, bhi, index, scratch);
        if (m.size == 0) continue;
        matched += m.size;
        stack.insert(stack.end(), {alo, m.a_start, blo, m.b_start});
        stack.insert(stack.end(), {m.a_start + m.size, ahi, m.b_start + m.size, bhi});
    }
    return 2.0 * static_cast<double>(matched) / static_cast<double>(a.size() + b.size());
}

namespace {

double enhanced_impl(const TokenizedText& fq, const TokenizedText& fm) {
    const std::string& q = fq.raw;
    const std::string& m = fm.raw;
    if (q.empty() && m.empty()) return 0.0;

    double j = jaccard(fq, fm);
    double s = sequence_ratio(q, m);
    double w = word_overlap(fq, fm);

    double bonus = 0.0;
    if (q == m) {
        bonus = 1.0;
    } else if (!q.empty() && !m.empty() &&
               (q.find(m) != std::string::npos || m.find(q) != std::string::npos)) {
        bonus = 0.8;
    }
    return (j + s + w) / 3.0 + bonus * 0.5;
}

} // namespace

double enhanced_text_similarity(std::string_view q, std::string_view m) {
    TokenizedText fq = TokenizedText::from(fold_case(q));
    TokenizedText fm = TokenizedText::from(fold_case(m));
    return enhanced_impl(fq, fm);
}

double enhanced_text_similarity_folded(const TokenizedText& q, const TokenizedText& m) {
    return enhanced_impl(q, m);
}

} // namespace memharbor
