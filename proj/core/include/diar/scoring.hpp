#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "diar/types.hpp"

namespace diar {

struct ScoringConfig {
    double collar = 0.25;  // seconds around every reference boundary, >= 0
};

/// Diarization error breakdown, all components in seconds. der is the
/// dimensionless ratio (missed + false_alarm + speaker_error) / scored_ref.
struct DerBreakdown {
    double missed = 0.0;
    double false_alarm = 0.0;
    double speaker_error = 0.0;
    double scored_ref = 0.0;
    double der = 0.0;
};

/// Hypothesis-speaker to reference-speaker mapping maximizing total
/// overlapped duration (Hungarian assignment on the overlap matrix).
/// Speakers with no positive-overlap match are absent from the map.
std::map<std::string, std::string> optimal_mapping(const std::vector<Turn>& ref,
                                                   const std::vector<Turn>& hyp);

/// The scorable part of the reference's time span: the hull of the reference
/// boundaries (widened by the collar) minus the union of collar zones
/// [t - collar, t + collar] around every reference turn onset and offset.
std::vector<Segment> scored_timeline(const std::vector<Turn>& ref, const ScoringConfig& cfg);

/// DER for one recording. Time is swept over atomic intervals delimited by
/// every ref/hyp boundary and collar-zone edge; within an atom of duration d
/// with Nref/Nhyp active speakers and Ncorrect optimally-matched active
/// pairs: missed += d*max(0, Nref-Nhyp), false_alarm += d*max(0, Nhyp-Nref),
/// speaker_error += d*(min(Nref,Nhyp) - Ncorrect), scored_ref += d*Nref.
/// Throws InvalidInputError when ref is empty, or when the scored reference
/// duration is zero while errors are nonzero.
DerBreakdown compute_der(const std::vector<Turn>& ref, const std::vector<Turn>& hyp,
                         const ScoringConfig& cfg = {});

/// Time-weighted corpus aggregate: component-wise sums, der recomputed from
/// the summed errors over the summed scored_ref.
DerBreakdown aggregate_der(const std::vector<DerBreakdown>& per_recording);

/// Mean |estimated - true| speaker count over recordings.
double speaker_count_error(const std::vector<std::pair<int, int>>& true_and_estimated);

} // namespace diar
