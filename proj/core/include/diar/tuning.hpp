#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diar/pipeline.hpp"
#include "diar/scoring.hpp"
#include "diar/types.hpp"

namespace diar {

/// One recording's input files as listed in an experiment manifest.
struct RecordingBundle {
    std::string recording_id;
    std::string sad_path;
    std::string emb_path;
    std::string ref_rttm_path;
};

/// Named collection of dev (tuning) and eval recordings.
struct ExperimentDomain {
    std::string name;
    std::vector<RecordingBundle> dev;
    std::vector<RecordingBundle> eval;
};

/// A recording pulled into memory for sweeping. raw_affinity is the
/// unpruned cosine affinity, which does not depend on alpha, so sweeps
/// recompute only the pruning stage onward.
struct LoadedRecording {
    std::string recording_id;
    SegmentEmbeddings embeddings;
    Eigen::MatrixXd raw_affinity;
    std::vector<Turn> reference;
};

struct SweepResult {
    std::vector<double> grid;   // ascending, within [0, 1]
    std::vector<double> ders;   // aggregate DER ratio per grid point
    double best_alpha = 0.0;    // grid value at the FIRST minimum
    double best_der = 0.0;
};

/// Cross-domain DER matrix: row = domain whose dev set chose alpha, column =
/// domain whose eval set was scored. All values are ratios.
struct CrossDomainReport {
    std::vector<std::string> domain_names;
    std::vector<double> chosen_alpha;   // per row
    Eigen::MatrixXd der_matrix;
    std::vector<SweepResult> sweeps;    // per domain, in domain order
};

/// The alpha grid {0, step, 2*step, ..., 1}. step must divide 1 exactly
/// (points are built as j / round(1/step) so values print cleanly).
std::vector<double> alpha_grid(double step);

/// Parse manifest text: one line per recording,
/// `<domain> <dev|eval> <rec_id> <sad_path> <emb_path> <ref_rttm_path>`.
/// Domains keep first-appearance order; paths are taken verbatim and
/// resolved against the process working directory.
std::vector<ExperimentDomain> parse_manifest(const std::string& text);

/// Read a bundle's three files. The SAD is only validated for consistency
/// with the embedding segments' extents; diarization runs on the embeddings.
LoadedRecording load_bundle(const RecordingBundle& bundle);

/// Diarize every recording at every grid alpha, score against references,
/// and aggregate time-weighted per alpha. Ties for the minimum resolve to
/// the smaller alpha. The (alpha x recording) grid runs on `jobs` threads
/// with a fixed reduction order, so results do not depend on jobs.
SweepResult sweep_alpha(const std::vector<LoadedRecording>& dev, const std::vector<double>& grid,
                        const DiarizationConfig& base, const ScoringConfig& scoring,
                        int jobs = 1);

/// Full experiment: per-domain dev sweep chooses alpha*, then every domain's
/// eval set is scored under every chosen alpha*.
CrossDomainReport cross_domain(const std::vector<ExperimentDomain>& domains,
                               const std::vector<double>& grid, const DiarizationConfig& base,
                               const ScoringConfig& scoring, int jobs = 1);

/// Plot-ready TSV: header, one "point" row per grid alpha, one final "best"
/// row repeating the selected minimum.
std::string curve_report(const SweepResult& sweep);

/// TSV serializations of the cross-domain report (matrix + chosen alphas).
std::string matrix_report(const CrossDomainReport& report);
std::string chosen_alpha_report(const CrossDomainReport& report);

} // namespace diar
