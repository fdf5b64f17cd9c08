#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace platoon {

using IndexPair = std::pair<std::uint32_t, std::uint32_t>;

struct StageRecord {
    std::string label;
    std::size_t survivors = 0;
};

/// A set of unordered assignment-index pairs (stored as i < j, sorted) that
/// survived some prefix of the culling pipeline, plus the per-stage survivor
/// counts that produced it.
struct CandidateSet {
    std::vector<IndexPair> pairs;
    std::vector<StageRecord> stage_log;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }

    bool contains(std::uint32_t i, std::uint32_t j) const {
        IndexPair p = i < j ? IndexPair{i, j} : IndexPair{j, i};
        return std::binary_search(pairs.begin(), pairs.end(), p);
    }

    /// Superset test: every pair of `other` is present here.
    bool contains_all(const CandidateSet& other) const {
        return std::includes(pairs.begin(), pairs.end(),
                             other.pairs.begin(), other.pairs.end());
    }

    void normalize() {
        for (auto& p : pairs) {
            if (p.first > p.second) std::swap(p.first, p.second);
        }
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }
};

inline CandidateSet intersect(const CandidateSet& a, const CandidateSet& b) {
    CandidateSet out;
    out.pairs.reserve(std::min(a.size(), b.size()));
    std::set_intersection(a.pairs.begin(), a.pairs.end(),
                          b.pairs.begin(), b.pairs.end(),
                          std::back_inserter(out.pairs));
    return out;
}

}  // namespace platoon
