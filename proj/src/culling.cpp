#include "platoon/culling.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace platoon {

namespace {

struct IntervalEntry {
    double lo;
    double hi;
    std::uint32_t origin;
};

std::vector<IntervalEntry> feasible_intervals(const std::vector<FeatureVector>& features,
                                              int feature_index) {
    std::vector<IntervalEntry> entries;
    entries.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& fv = features[i];
        if (!fv.feasible) {
            continue;
        }
        if (feature_index < 0 || static_cast<std::size_t>(feature_index) >= fv.intervals.size()) {
            throw std::runtime_error("interval_positives: feature index out of range");
        }
        const auto& iv = fv.intervals[static_cast<std::size_t>(feature_index)];
        entries.push_back({iv.lo, iv.hi, static_cast<std::uint32_t>(i)});
    }
    return entries;
}

void emit_pair(std::vector<IndexPair>& out, std::uint32_t a, std::uint32_t b) {
    out.emplace_back(std::min(a, b), std::max(a, b));
}

CandidateSet clique_pairs(const std::vector<std::uint32_t>& members) {
    CandidateSet set;
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            emit_pair(set.pairs, members[a], members[b]);
        }
    }
    set.normalize();
    return set;
}

const OrientationSignature& signature_of(const FeatureVector& fv) {
    if (!fv.signature) {
        throw std::runtime_error("orientation classifier: feasible assignment without a signature");
    }
    return *fv.signature;
}

}  // namespace

std::vector<Classifier> build_classifiers(const FeatureConfig& config) {
    std::vector<Classifier> out;
    out.reserve(config.projections.size() + 1);
    for (std::size_t i = 0; i < config.projections.size(); ++i) {
        Classifier c;
        c.kind = Classifier::Kind::Interval;
        c.label = config.projections[i].label;
        c.feature_index = static_cast<int>(i);
        out.push_back(std::move(c));
    }
    if (config.orientation) {
        Classifier c;
        c.kind = Classifier::Kind::Orientation;
        c.label = "c_o";
        out.push_back(std::move(c));
    }
    return out;
}

bool pair_positive(const Classifier& c, const FeatureVector& a, const FeatureVector& b) {
    if (!a.feasible || !b.feasible) {
        return false;
    }
    switch (c.kind) {
        case Classifier::Kind::Interval: {
            const auto idx = static_cast<std::size_t>(c.feature_index);
            if (c.feature_index < 0 || idx >= a.intervals.size() || idx >= b.intervals.size()) {
                throw std::runtime_error("pair_positive: feature index out of range");
            }
            return a.intervals[idx].overlaps(b.intervals[idx]);
        }
        case Classifier::Kind::Orientation:
            return signature_of(a).intersects(signature_of(b));
        case Classifier::Kind::CellMatch:
            return signature_of(a).has_cell(c.cell) && signature_of(b).has_cell(c.cell);
        case Classifier::Kind::AnyOf:
            for (const auto& m : c.members) {
                if (pair_positive(m, a, b)) {
                    return true;
                }
            }
            return false;
    }
    return false;
}

CandidateSet all_feasible_pairs(const std::vector<FeatureVector>& features) {
    std::vector<std::uint32_t> feasible;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (features[i].feasible) {
            feasible.push_back(static_cast<std::uint32_t>(i));
        }
    }
    CandidateSet set;
    set.pairs.reserve(feasible.size() * (feasible.size() - 1) / 2);
    for (std::size_t a = 0; a < feasible.size(); ++a) {
        for (std::size_t b = a + 1; b < feasible.size(); ++b) {
            set.pairs.emplace_back(feasible[a], feasible[b]);
        }
    }
    return set;
}

CandidateSet interval_positives(const std::vector<FeatureVector>& features, int feature_index) {
    auto entries = feasible_intervals(features, feature_index);
    std::sort(entries.begin(), entries.end(), [](const IntervalEntry& a, const IntervalEntry& b) {
        return std::tie(a.lo, a.hi, a.origin) < std::tie(b.lo, b.hi, b.origin);
    });

    std::vector<std::vector<IndexPair>> buckets;
#ifdef _OPENMP
    buckets.resize(omp_get_max_threads());
#else
    buckets.resize(1);
#endif
    const std::int64_t n = static_cast<std::int64_t>(entries.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
#ifdef _OPENMP
        auto& bucket = buckets[omp_get_thread_num()];
#else
        auto& bucket = buckets[0];
#endif
        // Entries are sorted by lo, so every j > i with lo_j <= hi_i
        // overlaps entry i (closed-interval rule).
        for (std::int64_t j = i + 1; j < n && entries[j].lo <= entries[i].hi; ++j) {
            emit_pair(bucket, entries[i].origin, entries[j].origin);
        }
    }

    CandidateSet set;
    for (auto& bucket : buckets) {
        set.pairs.insert(set.pairs.end(), bucket.begin(), bucket.end());
    }
    set.normalize();
    return set;
}

CandidateSet interval_positives_serial(const std::vector<FeatureVector>& features,
                                       int feature_index) {
    auto entries = feasible_intervals(features, feature_index);

    struct Endpoint {
        double value;
        bool is_upper;
        std::uint32_t origin;
    };
    std::vector<Endpoint> endpoints;
    endpoints.reserve(entries.size() * 2);
    for (const auto& e : entries) {
        endpoints.push_back({e.lo, false, e.origin});
        endpoints.push_back({e.hi, true, e.origin});
    }
    // Lower endpoints sort before equal upper endpoints so touching closed
    // intervals are still active together when the second one opens.
    std::sort(endpoints.begin(), endpoints.end(), [](const Endpoint& a, const Endpoint& b) {
        return std::tie(a.value, a.is_upper, a.origin) < std::tie(b.value, b.is_upper, b.origin);
    });

    CandidateSet set;
    std::vector<std::uint32_t> active;
    for (const auto& ep : endpoints) {
        if (!ep.is_upper) {
            for (std::uint32_t other : active) {
                emit_pair(set.pairs, ep.origin, other);
            }
            active.push_back(ep.origin);
        } else {
            active.erase(std::find(active.begin(), active.end(), ep.origin));
        }
    }
    set.normalize();
    return set;
}

CandidateSet signature_positives(const std::vector<FeatureVector>& features) {
    int cell_count = -1;
    double l_min = 0.0;
    std::unordered_map<int, std::vector<std::uint32_t>> index;
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!features[i].feasible) {
            continue;
        }
        const auto& sig = signature_of(features[i]);
        if (cell_count < 0) {
            cell_count = sig.cell_count;
            l_min = sig.l_min_km;
        } else if (sig.cell_count != cell_count || sig.l_min_km != l_min) {
            throw std::runtime_error(
                "signature_positives: signatures disagree on cell count or l_min");
        }
        for (const auto& [cell, km] : sig.cells) {
            index[cell].push_back(static_cast<std::uint32_t>(i));
        }
    }

    CandidateSet set;
    for (const auto& [cell, members] : index) {
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                set.pairs.emplace_back(members[a], members[b]);
            }
        }
    }
    set.normalize();
    return set;
}

CandidateSet classifier_positives(const Classifier& c, const std::vector<FeatureVector>& features,
                                  const CullingOptions& options) {
    switch (c.kind) {
        case Classifier::Kind::Interval:
            return options.serial ? interval_positives_serial(features, c.feature_index)
                                  : interval_positives(features, c.feature_index);
        case Classifier::Kind::Orientation:
            return signature_positives(features);
        case Classifier::Kind::CellMatch: {
            std::vector<std::uint32_t> members;
            for (std::size_t i = 0; i < features.size(); ++i) {
                if (features[i].feasible && signature_of(features[i]).has_cell(c.cell)) {
                    members.push_back(static_cast<std::uint32_t>(i));
                }
            }
            return clique_pairs(members);
        }
        case Classifier::Kind::AnyOf: {
            CandidateSet set;
            for (const auto& m : c.members) {
                auto part = classifier_positives(m, features, options);
                set.pairs.insert(set.pairs.end(), part.pairs.begin(), part.pairs.end());
            }
            set.normalize();
            return set;
        }
    }
    return {};
}

CandidateSet apply_stage(const CandidateSet& current, const Classifier& c,
                         const std::vector<FeatureVector>& features,
                         const CullingOptions& options) {
    // Filtering the materialized survivor set pair by pair is O(|current|)
    // with no sort; a fresh set-wide pass plus intersection never beats it,
    // so it is the default. The threshold keeps the set-wide route reachable.
    const std::size_t threshold = options.pairwise_threshold
                                      ? options.pairwise_threshold
                                      : std::numeric_limits<std::size_t>::max();
    CandidateSet next;
    if (current.size() < threshold) {
        const std::int64_t n = static_cast<std::int64_t>(current.size());
        std::vector<char> keep(current.size(), 0);
#pragma omp parallel for schedule(static) if (!options.serial)
        for (std::int64_t p = 0; p < n; ++p) {
            const auto [i, j] = current.pairs[p];
            keep[p] = pair_positive(c, features[i], features[j]) ? 1 : 0;
        }
        next.pairs.reserve(current.size());
        for (std::size_t p = 0; p < current.size(); ++p) {
            if (keep[p]) {
                next.pairs.push_back(current.pairs[p]);
            }
        }
    } else {
        next = intersect(current, classifier_positives(c, features, options));
    }
    next.stage_log = current.stage_log;
    next.stage_log.push_back({c.label, next.size()});
    return next;
}

Classifier or_compose(std::vector<Classifier> members, std::string label) {
    if (members.empty()) {
        throw std::runtime_error("or_compose: empty classifier list");
    }
    Classifier c;
    c.kind = Classifier::Kind::AnyOf;
    if (label.empty()) {
        label = "any_of(";
        for (std::size_t i = 0; i < members.size(); ++i) {
            label += (i ? "," : "") + members[i].label;
        }
        label += ")";
    }
    c.label = std::move(label);
    c.members = std::move(members);
    return c;
}

namespace {

const Classifier& resolve_label(const std::string& label,
                                const std::vector<Classifier>& classifiers) {
    for (const auto& c : classifiers) {
        if (c.label == label) {
            return c;
        }
    }
    throw std::runtime_error("unknown classifier label '" + label + "'");
}

}  // namespace

CandidateSet run_pipeline(const StagePlan& plan, const std::vector<Classifier>& classifiers,
                          const std::vector<FeatureVector>& features,
                          const CullingOptions& options) {
    for (std::size_t i = 0; i < plan.labels.size(); ++i) {
        for (std::size_t k = i + 1; k < plan.labels.size(); ++k) {
            if (plan.labels[i] == plan.labels[k]) {
                throw std::runtime_error("stage plan repeats classifier '" + plan.labels[i] + "'");
            }
        }
    }
    CandidateSet current = all_feasible_pairs(features);
    current.stage_log.push_back({"none", current.size()});
    for (const auto& label : plan.labels) {
        current = apply_stage(current, resolve_label(label, classifiers), features, options);
    }
    return current;
}

StagePlan greedy_order(const std::vector<Classifier>& classifiers,
                       const std::vector<FeatureVector>& features,
                       const CullingOptions& options) {
    if (classifiers.empty()) {
        throw std::runtime_error("greedy_order: no classifiers");
    }
    std::vector<CandidateSet> positives(classifiers.size());
    for (std::size_t i = 0; i < classifiers.size(); ++i) {
        positives[i] = classifier_positives(classifiers[i], features, options);
    }
    return greedy_order_from_positives(classifiers, positives, all_feasible_pairs(features));
}

StagePlan greedy_order_from_positives(const std::vector<Classifier>& classifiers,
                                      const std::vector<CandidateSet>& positives,
                                      const CandidateSet& start) {
    if (classifiers.empty() || positives.size() != classifiers.size()) {
        throw std::runtime_error("greedy_order: classifier/positive-set mismatch");
    }
    CandidateSet current = start;
    std::vector<bool> used(classifiers.size(), false);
    StagePlan plan;
    for (std::size_t stage = 0; stage < classifiers.size(); ++stage) {
        std::size_t best = classifiers.size();
        std::size_t best_count = 0;
        for (std::size_t c = 0; c < classifiers.size(); ++c) {
            if (used[c]) {
                continue;
            }
            const std::size_t count = intersect(current, positives[c]).size();
            if (best == classifiers.size() || count < best_count ||
                (count == best_count && classifiers[c].label < classifiers[best].label)) {
                best = c;
                best_count = count;
            }
        }
        used[best] = true;
        plan.labels.push_back(classifiers[best].label);
        current = intersect(current, positives[best]);
    }
    return plan;
}

StagePlan parse_stage_plan(const nlohmann::json& j, const std::string& context) {
    try {
        StagePlan plan;
        plan.labels = j.at("stages").get<std::vector<std::string>>();
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(context + ": " + e.what());
    }
}

StagePlan load_stage_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open plan file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return parse_stage_plan(j, path);
}

}  // namespace platoon
