#include "diar/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diar/assignment.hpp"
#include "diar/errors.hpp"

namespace diar {

namespace {

using IntervalMap = std::map<std::string, std::vector<Segment>>;

// Per-speaker union of turn extents, sorted and merged.
IntervalMap speaker_intervals(const std::vector<Turn>& turns) {
    IntervalMap out;
    for (const Turn& t : turns) out[t.speaker].push_back({t.onset, t.offset()});
    for (auto& [spk, iv] : out) {
        std::sort(iv.begin(), iv.end(),
                  [](const Segment& a, const Segment& b) { return a.onset < b.onset; });
        std::vector<Segment> merged;
        for (const Segment& s : iv) {
            if (!merged.empty() && s.onset <= merged.back().offset)
                merged.back().offset = std::max(merged.back().offset, s.offset);
            else
                merged.push_back(s);
        }
        iv = std::move(merged);
    }
    return out;
}

double overlap_duration(const std::vector<Segment>& a, const std::vector<Segment>& b) {
    double total = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double lo = std::max(a[i].onset, b[j].onset);
        double hi = std::min(a[i].offset, b[j].offset);
        if (hi > lo) total += hi - lo;
        if (a[i].offset < b[j].offset) ++i;
        else ++j;
    }
    return total;
}

bool active_at(const std::vector<Segment>& iv, double t) {
    // iv sorted and disjoint; find the last interval starting at or before t
    auto it = std::upper_bound(iv.begin(), iv.end(), t,
                               [](double x, const Segment& s) { return x < s.onset; });
    if (it == iv.begin()) return false;
    --it;
    return t < it->offset;
}

// Merged exclusion zones [t - collar, t + collar] around every reference
// turn boundary. Empty when collar == 0.
std::vector<Segment> collar_zones(const std::vector<Turn>& ref, double collar) {
    if (collar <= 0.0) return {};
    std::vector<Segment> zones;
    zones.reserve(ref.size() * 2);
    for (const Turn& t : ref) {
        zones.push_back({t.onset - collar, t.onset + collar});
        zones.push_back({t.offset() - collar, t.offset() + collar});
    }
    std::sort(zones.begin(), zones.end(),
              [](const Segment& a, const Segment& b) { return a.onset < b.onset; });
    std::vector<Segment> merged;
    for (const Segment& z : zones) {
        if (!merged.empty() && z.onset <= merged.back().offset)
            merged.back().offset = std::max(merged.back().offset, z.offset);
        else
            merged.push_back(z);
    }
    return merged;
}

} // namespace

std::map<std::string, std::string> optimal_mapping(const std::vector<Turn>& ref,
                                                   const std::vector<Turn>& hyp) {
    IntervalMap riv = speaker_intervals(ref);
    IntervalMap hiv = speaker_intervals(hyp);
    if (riv.empty() || hiv.empty()) return {};

    std::vector<const std::string*> rnames, hnames;
    for (const auto& [name, iv] : riv) rnames.push_back(&name);
    for (const auto& [name, iv] : hiv) hnames.push_back(&name);

    Eigen::MatrixXd overlap(hnames.size(), rnames.size());
    for (size_t i = 0; i < hnames.size(); ++i)
        for (size_t j = 0; j < rnames.size(); ++j)
            overlap(i, j) = overlap_duration(hiv[*hnames[i]], riv[*rnames[j]]);

    std::vector<int> match = max_assignment(overlap);
    std::map<std::string, std::string> out;
    for (size_t i = 0; i < hnames.size(); ++i) {
        int j = match[i];
        if (j >= 0 && overlap(i, j) > 0.0) out[*hnames[i]] = *rnames[j];
    }
    return out;
}

std::vector<Segment> scored_timeline(const std::vector<Turn>& ref, const ScoringConfig& cfg) {
    if (ref.empty()) return {};
    if (cfg.collar < 0.0) throw InvalidInputError("scored_timeline: collar must be >= 0");

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Turn& t : ref) {
        lo = std::min(lo, t.onset);
        hi = std::max(hi, t.offset());
    }
    lo -= cfg.collar;
    hi += cfg.collar;

    std::vector<Segment> out;
    double cursor = lo;
    for (const Segment& z : collar_zones(ref, cfg.collar)) {
        if (z.onset > cursor) out.push_back({cursor, z.onset});
        cursor = std::max(cursor, z.offset);
    }
    if (cursor < hi) out.push_back({cursor, hi});
    return out;
}

DerBreakdown compute_der(const std::vector<Turn>& ref, const std::vector<Turn>& hyp,
                         const ScoringConfig& cfg) {
    if (ref.empty()) throw InvalidInputError("compute_der: reference has no turns");
    if (cfg.collar < 0.0) throw InvalidInputError("compute_der: collar must be >= 0");

    IntervalMap riv = speaker_intervals(ref);
    IntervalMap hiv = speaker_intervals(hyp);
    std::map<std::string, std::string> mapping = optimal_mapping(ref, hyp);
    std::vector<Segment> zones = collar_zones(ref, cfg.collar);

    std::vector<double> points;
    for (const auto& [spk, iv] : riv)
        for (const Segment& s : iv) {
            points.push_back(s.onset);
            points.push_back(s.offset);
        }
    for (const auto& [spk, iv] : hiv)
        for (const Segment& s : iv) {
            points.push_back(s.onset);
            points.push_back(s.offset);
        }
    for (const Segment& z : zones) {
        points.push_back(z.onset);
        points.push_back(z.offset);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    DerBreakdown b;
    for (size_t a = 0; a + 1 < points.size(); ++a) {
        double d = points[a + 1] - points[a];
        if (d <= 0.0) continue;
        double mid = points[a] + d / 2.0;
        if (active_at(zones, mid)) continue;  // inside a forgiveness zone

        int nref = 0, nhyp = 0, ncorrect = 0;
        for (const auto& [spk, iv] : riv) nref += active_at(iv, mid) ? 1 : 0;
        for (const auto& [spk, iv] : hiv) nhyp += active_at(iv, mid) ? 1 : 0;
        for (const auto& [h, r] : mapping)
            if (active_at(hiv[h], mid) && active_at(riv[r], mid)) ++ncorrect;

        b.missed += d * std::max(0, nref - nhyp);
        b.false_alarm += d * std::max(0, nhyp - nref);
        b.speaker_error += d * (std::min(nref, nhyp) - ncorrect);
        b.scored_ref += d * nref;
    }

    double errors = b.missed + b.false_alarm + b.speaker_error;
    if (b.scored_ref > 0.0) {
        b.der = errors / b.scored_ref;
    } else if (errors > 0.0) {
        throw InvalidInputError("compute_der: zero scored reference time but nonzero error");
    } else {
        b.der = 0.0;
    }
    return b;
}

DerBreakdown aggregate_der(const std::vector<DerBreakdown>& per_recording) {
    if (per_recording.empty()) throw InvalidInputError("aggregate_der: no recordings");
    DerBreakdown total;
    for (const DerBreakdown& b : per_recording) {
        total.missed += b.missed;
        total.false_alarm += b.false_alarm;
        total.speaker_error += b.speaker_error;
        total.scored_ref += b.scored_ref;
    }
    if (total.scored_ref <= 0.0)
        throw InvalidInputError("aggregate_der: total scored reference time is zero");
    total.der = (total.missed + total.false_alarm + total.speaker_error) / total.scored_ref;
    return total;
}

double speaker_count_error(const std::vector<std::pair<int, int>>& true_and_estimated) {
    if (true_and_estimated.empty())
        throw InvalidInputError("speaker_count_error: no recordings");
    double sum = 0.0;
    for (const auto& [truth, est] : true_and_estimated) sum += std::abs(est - truth);
    return sum / static_cast<double>(true_and_estimated.size());
}

} // namespace diar
