#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "diar/kmeans.hpp"
#include "diar/types.hpp"

namespace diar {

struct DiarizationConfig {
    double alpha = 0.5;
    int k_max = 10;
    uint64_t seed = 42;
    std::optional<int> oracle_k;  // bypass the eigengap estimate when set
    KMeansConfig kmeans;
};

struct DiarizationResult {
    std::vector<Turn> turns;
    std::vector<int> labels;  // per segment, canonical numbering
    int num_speakers = 0;
    Eigen::VectorXd eigenvalues;  // of the pruned-affinity Laplacian
};

/// Full clustering pass over one recording's segment embeddings:
/// cosine affinity, row pruning at alpha, symmetrization, unnormalized
/// Laplacian, eigengap speaker count (unless oracle_k), k-means on the
/// first-k eigenvector rows, then label smoothing into speaker turns.
DiarizationResult diarize_recording(const SegmentEmbeddings& embeddings,
                                    const DiarizationConfig& config);

/// Same pass starting from a precomputed raw cosine affinity, so sweeps can
/// reuse it across alphas. Bitwise-identical to diarize_recording.
DiarizationResult diarize_from_affinity(const SegmentEmbeddings& embeddings,
                                        const Eigen::MatrixXd& raw_affinity,
                                        const DiarizationConfig& config);

/// Sliding windows over speech regions: [onset + i*shift, ... + window] while
/// the end fits, plus one tail window flushed to the region end when the tail
/// would otherwise go uncovered. Regions shorter than min_length give one
/// whole-region segment, or none if below min_length.
std::vector<Segment> segment_regions(const std::vector<SpeechRegion>& regions, double window,
                                     double shift, double min_length = 0.3);

/// Merge per-segment labels into turns: same-label overlapping or abutting
/// segments fuse, different-label overlaps split at the midpoint, gaps stay
/// gaps. Speaker names are "spk0", "spk1", ...
std::vector<Turn> labels_to_turns(const std::vector<Segment>& segments,
                                  const std::vector<int>& labels,
                                  const std::string& recording_id);

} // namespace diar
