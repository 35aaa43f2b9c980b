#pragma once
#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace diar {

/// One speaker-attributed time interval of a reference or hypothesis
/// annotation. Invariants: duration > 0, onset >= 0, speaker non-empty
/// and whitespace-free.
struct Turn {
    std::string recording_id;
    double onset = 0.0;     // seconds
    double duration = 0.0;  // seconds
    std::string speaker;

    double offset() const { return onset + duration; }

    bool operator==(const Turn& o) const {
        return recording_id == o.recording_id && onset == o.onset &&
               duration == o.duration && speaker == o.speaker;
    }
};

/// A speech region from SAD. Invariant: offset > onset; within one
/// recording regions are sorted and pairwise disjoint after parsing.
struct SpeechRegion {
    std::string recording_id;
    double onset = 0.0;
    double offset = 0.0;

    bool operator==(const SpeechRegion& o) const {
        return recording_id == o.recording_id && onset == o.onset && offset == o.offset;
    }
};

/// Time extent of one fixed-length analysis segment.
struct Segment {
    double onset = 0.0;
    double offset = 0.0;

    bool operator==(const Segment& o) const { return onset == o.onset && offset == o.offset; }
};

/// Per-recording segment embeddings: N segments with time extents and one
/// d-dimensional vector per segment (row i of `vectors`). Vectors are kept
/// exactly as read; normalization happens when the affinity is built.
struct SegmentEmbeddings {
    std::string recording_id;
    int dim = 0;
    std::vector<Segment> segments;
    Eigen::MatrixXd vectors;  // N x dim

    int count() const { return static_cast<int>(segments.size()); }
};

/// Turns of possibly many recordings grouped by recording id (keys sorted,
/// file order preserved within a recording).
using RecordingTurns = std::map<std::string, std::vector<Turn>>;

/// SAD regions grouped by recording id, sorted and merged per recording.
using RecordingRegions = std::map<std::string, std::vector<SpeechRegion>>;

} // namespace diar
