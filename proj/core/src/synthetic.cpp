#include "diar/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>

#include "diar/errors.hpp"
#include "diar/io_formats.hpp"
#include "diar/pipeline.hpp"

namespace diar {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr int kAnchorBudget = 100000;  // rejection attempts per anchor

Eigen::RowVectorXd random_unit(int dim, Rng& rng) {
    Eigen::RowVectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.gaussian();
    double norm = v.norm();
    if (norm == 0.0) return random_unit(dim, rng);  // astronomically unlikely
    return v / norm;
}

} // namespace

Eigen::MatrixXd sample_anchors(int n, int dim, double min_angle_deg, Rng& rng) {
    if (n < 1 || dim < 1) throw InvalidInputError("sample_anchors: need n >= 1 and dim >= 1");
    const double max_cos = std::cos(min_angle_deg * kPi / 180.0);

    Eigen::MatrixXd anchors(n, dim);
    for (int i = 0; i < n; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < kAnchorBudget; ++attempt) {
            Eigen::RowVectorXd v = random_unit(dim, rng);
            bool ok = true;
            for (int j = 0; j < i; ++j)
                if (anchors.row(j).dot(v) > max_cos) {
                    ok = false;
                    break;
                }
            if (ok) {
                anchors.row(i) = v;
                placed = true;
                break;
            }
        }
        if (!placed)
            throw InvalidInputError(
                "sample_anchors: rejection budget exhausted placing anchor " +
                std::to_string(i) + " of " + std::to_string(n) + " at >= " +
                std::to_string(min_angle_deg) + " degrees in dimension " + std::to_string(dim));
    }
    return anchors;
}

SyntheticRecording gen_recording(const SynthSpec& spec) {
    if (spec.n_speakers < 1) throw InvalidInputError("gen_recording: n_speakers must be >= 1");
    if (spec.duration <= 0.0) throw InvalidInputError("gen_recording: duration must be positive");
    if (spec.turn_len_lo <= 0.0 || spec.turn_len_hi < spec.turn_len_lo)
        throw InvalidInputError("gen_recording: bad turn length range");
    if (spec.intra_noise < 0.0) throw InvalidInputError("gen_recording: intra_noise must be >= 0");

    Rng rng(spec.seed);
    Eigen::MatrixXd anchors =
        sample_anchors(spec.n_speakers, spec.dim, spec.inter_min_angle, rng);

    // Turn layout in integer centiseconds so all boundaries sit on a 10 ms
    // grid (keeps the frame-based scorer quantization-exact).
    const int64_t dur_cs = std::llround(spec.duration * 100.0);
    const int64_t lo_cs = std::llround(spec.turn_len_lo * 100.0);
    const int64_t hi_cs = std::llround(spec.turn_len_hi * 100.0);

    SyntheticRecording rec;
    int64_t t_cs = 0;
    int turn_index = 0;
    while (t_cs < dur_cs) {
        int64_t len_cs = lo_cs + static_cast<int64_t>(
                                     rng.uniform_index(static_cast<uint64_t>(hi_cs - lo_cs + 1)));
        len_cs = std::min(len_cs, dur_cs - t_cs);  // last turn truncates at the end
        Turn t;
        t.recording_id = spec.name;
        t.onset = static_cast<double>(t_cs) / 100.0;
        t.duration = static_cast<double>(len_cs) / 100.0;
        t.speaker = "S" + std::to_string(turn_index % spec.n_speakers);
        rec.reference.push_back(std::move(t));
        t_cs += len_cs;
        ++turn_index;
    }

    rec.sad.push_back({spec.name, 0.0, spec.duration});
    std::vector<Segment> segments = segment_regions(rec.sad, 3.0, 1.5);

    rec.embeddings.recording_id = spec.name;
    rec.embeddings.dim = spec.dim;
    rec.embeddings.segments = segments;
    rec.embeddings.vectors.resize(static_cast<Eigen::Index>(segments.size()), spec.dim);

    for (size_t i = 0; i < segments.size(); ++i) {
        double mid = (segments[i].onset + segments[i].offset) / 2.0;
        // owner: the turn whose [onset, offset) contains the midpoint
        int owner = 0;
        for (const Turn& t : rec.reference)
            if (mid >= t.onset && mid < t.offset()) {
                owner = std::stoi(t.speaker.substr(1));
                break;
            }
        Eigen::RowVectorXd v = anchors.row(owner);
        for (int j = 0; j < spec.dim; ++j) v[j] += spec.intra_noise * rng.gaussian();
        double norm = v.norm();
        if (norm == 0.0) throw NumericalError("gen_recording: zero-norm embedding");
        rec.embeddings.vectors.row(static_cast<Eigen::Index>(i)) = v / norm;
    }
    return rec;
}

std::string gen_domain(const std::vector<SynthSpec>& specs, const std::string& name,
                       const std::string& out_dir) {
    if (specs.size() < 2)
        throw InvalidInputError("gen_domain: need at least 2 recordings to split dev/eval");
    std::filesystem::create_directories(out_dir);

    const size_t n_dev = (specs.size() + 1) / 2;
    std::string manifest;
    for (size_t i = 0; i < specs.size(); ++i) {
        SynthSpec spec = specs[i];
        if (spec.name.empty()) spec.name = name + "_r" + std::to_string(i);
        SyntheticRecording rec = gen_recording(spec);

        RecordingRegions sad;
        sad[spec.name] = rec.sad;
        std::string sad_path = out_dir + "/" + spec.name + ".sad";
        std::string emb_path = out_dir + "/" + spec.name + ".emb";
        std::string rttm_path = out_dir + "/" + spec.name + ".rttm";
        write_text_file(sad_path, emit_sad(sad));
        write_text_file(emb_path, write_embeddings(rec.embeddings));
        write_text_file(rttm_path, emit_rttm(rec.reference));

        manifest += name + " " + (i < n_dev ? "dev" : "eval") + " " + spec.name + " " +
                    sad_path + " " + emb_path + " " + rttm_path + "\n";
    }
    return manifest;
}

} // namespace diar
