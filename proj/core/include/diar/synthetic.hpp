#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diar/rng.hpp"
#include "diar/types.hpp"

namespace diar {

/// Parameters of one generated recording. Speakers are unit "anchor"
/// directions kept at least inter_min_angle apart; each segment embedding is
/// its speaker's anchor plus isotropic Gaussian noise, re-normalized.
struct SynthSpec {
    std::string name;                 // recording id
    int n_speakers = 2;
    int dim = 192;
    double duration = 120.0;          // seconds, tiled by turns exactly
    double turn_len_lo = 2.0;         // turn length range, seconds
    double turn_len_hi = 6.0;
    double intra_noise = 0.05;        // std of pre-normalization perturbation
    double inter_min_angle = 75.0;    // degrees, pairwise anchor separation
    std::uint64_t seed = 42;
};

struct SyntheticRecording {
    SegmentEmbeddings embeddings;
    std::vector<Turn> reference;  // tiles [0, duration]: no gaps, no overlap
    std::vector<SpeechRegion> sad;
};

/// n unit vectors with pairwise angles >= min_angle_deg, by rejection.
/// Throws InvalidInputError when the rejection budget runs out (infeasible
/// angle/dimension combination).
Eigen::MatrixXd sample_anchors(int n, int dim, double min_angle_deg, Rng& rng);

/// Deterministic synthetic recording: round-robin speaker turns with random
/// lengths on a 10 ms grid, full-span SAD, segments from the standard
/// 3.0 s / 1.5 s windowing, one embedding per segment keyed to the speaker
/// owning the segment midpoint.
SyntheticRecording gen_recording(const SynthSpec& spec);

/// Generate a named domain: one recording per spec, first ceil(n/2) specs as
/// the dev split, the rest as eval. Writes <out_dir>/<rec>.{sad,emb,rttm}
/// and returns the manifest lines describing the files.
std::string gen_domain(const std::vector<SynthSpec>& specs, const std::string& name,
                       const std::string& out_dir);

} // namespace diar
