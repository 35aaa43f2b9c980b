#include "diar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diar/affinity.hpp"
#include "diar/errors.hpp"
#include "diar/spectral.hpp"

namespace diar {

DiarizationResult diarize_from_affinity(const SegmentEmbeddings& embeddings,
                                        const Eigen::MatrixXd& raw_affinity,
                                        const DiarizationConfig& config) {
    const int n = embeddings.count();
    if (n == 0) throw InvalidInputError("diarize: no segments");
    if (raw_affinity.rows() != n || raw_affinity.cols() != n)
        throw InvalidInputError("diarize: affinity shape does not match segment count");

    Eigen::MatrixXd pruned = prune_rows(raw_affinity, config.alpha);
    Eigen::MatrixXd w = symmetrize(pruned);
    EigenDecomposition eig = eig_sym(laplacian(w));

    int k;
    if (config.oracle_k) {
        k = *config.oracle_k;
        if (k < 1) throw InvalidInputError("diarize: oracle_k must be >= 1");
        k = std::min(k, n);
    } else {
        k = estimate_k(eig.values, config.k_max);
    }

    DiarizationResult result;
    result.eigenvalues = eig.values;
    result.num_speakers = k;

    if (k == 1) {
        result.labels.assign(n, 0);
    } else {
        Eigen::MatrixXd features = spectral_embeddings(eig, k);
        KMeansResult km = kmeans(features, k, config.seed, config.kmeans);
        result.labels = std::move(km.labels);
    }
    result.turns = labels_to_turns(embeddings.segments, result.labels, embeddings.recording_id);
    return result;
}

DiarizationResult diarize_recording(const SegmentEmbeddings& embeddings,
                                    const DiarizationConfig& config) {
    if (embeddings.count() == 0) throw InvalidInputError("diarize: no segments");
    return diarize_from_affinity(embeddings, cosine_affinity(embeddings.vectors), config);
}

std::vector<Segment> segment_regions(const std::vector<SpeechRegion>& regions, double window,
                                     double shift, double min_length) {
    if (window <= 0.0 || shift <= 0.0)
        throw InvalidInputError("segment_regions: window and shift must be positive");

    std::vector<Segment> out;
    for (const auto& r : regions) {
        const double a = r.onset, b = r.offset;
        if (b - a < min_length) continue;
        if (b - a <= window) {
            out.push_back({a, b});
            continue;
        }
        double covered = a;
        int i = 0;
        for (;; ++i) {
            double start = a + i * shift;
            double end = start + window;
            if (end > b + 1e-9) break;
            out.push_back({start, std::min(end, b)});
            covered = std::min(end, b);
        }
        if (covered < b - 1e-9) {
            // tail window flushed right so the region end is covered
            out.push_back({std::max(a, b - window), b});
        }
    }
    return out;
}

std::vector<Turn> labels_to_turns(const std::vector<Segment>& segments,
                                  const std::vector<int>& labels,
                                  const std::string& recording_id) {
    if (segments.size() != labels.size())
        throw InvalidInputError("labels_to_turns: segment/label count mismatch");

    struct Piece {
        double onset, offset;
        int label;
    };
    std::vector<Piece> pieces;
    pieces.reserve(segments.size());
    for (size_t i = 0; i < segments.size(); ++i)
        pieces.push_back({segments[i].onset, segments[i].offset, labels[i]});
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const Piece& x, const Piece& y) { return x.onset < y.onset; });

    // resolve different-label overlaps at the midpoint of the overlap
    for (size_t i = 0; i + 1 < pieces.size(); ++i) {
        Piece& cur = pieces[i];
        Piece& nxt = pieces[i + 1];
        if (nxt.onset < cur.offset && cur.label != nxt.label) {
            double mid = (nxt.onset + cur.offset) / 2.0;
            cur.offset = mid;
            nxt.onset = mid;
        }
    }

    std::vector<Turn> out;
    for (const Piece& p : pieces) {
        if (p.offset - p.onset <= 0.0) continue;
        if (!out.empty() && out.back().speaker == "spk" + std::to_string(p.label) &&
            p.onset <= out.back().offset() + 1e-9) {
            // same speaker, overlapping or abutting: extend
            Turn& last = out.back();
            last.duration = std::max(last.offset(), p.offset) - last.onset;
            continue;
        }
        Turn t;
        t.recording_id = recording_id;
        t.onset = p.onset;
        t.duration = p.offset - p.onset;
        t.speaker = "spk" + std::to_string(p.label);
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace diar
