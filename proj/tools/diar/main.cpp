// diar: spectral-clustering speaker diarization toolkit.
//
// Subcommands: segment, diarize, score, tune, xdomain, synth, count-error.
// Machine-readable TSV goes to stdout, logs to stderr. Exit codes:
//   0 success, 1 usage error, 2 data/parse error, 3 numerical failure.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diar/errors.hpp"
#include "diar/io_formats.hpp"
#include "diar/parallel.hpp"
#include "diar/pipeline.hpp"
#include "diar/scoring.hpp"
#include "diar/synthetic.hpp"
#include "diar/tuning.hpp"

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string der_row(const std::string& name, const diar::DerBreakdown& b) {
    return name + "\t" + fixed6(b.missed) + "\t" + fixed6(b.false_alarm) + "\t" +
           fixed6(b.speaker_error) + "\t" + fixed6(b.scored_ref) + "\t" + fixed6(b.der * 100.0) +
           "\n";
}

// ==== segment ====

struct SegmentArgs {
    std::string sad_path;
    double window = 3.0, shift = 1.5, min_seg = 0.3;
};

int run_segment(const SegmentArgs& a) {
    diar::RecordingRegions regions = diar::parse_sad(diar::read_text_file(a.sad_path));
    std::string out = "recording\tonset\toffset\n";
    for (const auto& [rec, list] : regions)
        for (const diar::Segment& s : diar::segment_regions(list, a.window, a.shift, a.min_seg))
            out += rec + "\t" + diar::format_double(s.onset) + "\t" +
                   diar::format_double(s.offset) + "\n";
    fputs(out.c_str(), stdout);
    return 0;
}

// ==== diarize ====

struct DiarizeArgs {
    std::string emb_path, sad_path, out_path;
    double alpha = 0.5;
    int oracle_k = 0;  // 0 = use the eigengap estimate
    int k_max = 10;
    std::uint64_t seed = 42;
    double window = 3.0, shift = 1.5;
};

void check_segments_match_sad(const diar::SegmentEmbeddings& emb,
                              const std::vector<diar::SpeechRegion>& regions, double window,
                              double shift) {
    std::vector<diar::Segment> expected = diar::segment_regions(regions, window, shift);
    if (expected.size() != emb.segments.size())
        throw diar::InvalidInputError(
            "embedding file has " + std::to_string(emb.segments.size()) +
            " segments but the SAD windows into " + std::to_string(expected.size()) +
            " (window " + diar::format_double(window) + ", shift " + diar::format_double(shift) +
            ")");
    for (size_t i = 0; i < expected.size(); ++i)
        if (std::abs(expected[i].onset - emb.segments[i].onset) > 1e-6 ||
            std::abs(expected[i].offset - emb.segments[i].offset) > 1e-6)
            throw diar::InvalidInputError(
                "segment " + std::to_string(i) + " is [" +
                diar::format_double(emb.segments[i].onset) + ", " +
                diar::format_double(emb.segments[i].offset) + "] but the SAD windows to [" +
                diar::format_double(expected[i].onset) + ", " +
                diar::format_double(expected[i].offset) + "]");
}

int run_diarize(const DiarizeArgs& a) {
    diar::SegmentEmbeddings emb = diar::read_embeddings(diar::read_text_file(a.emb_path));
    diar::RecordingRegions sad = diar::parse_sad(diar::read_text_file(a.sad_path));
    auto it = sad.find(emb.recording_id);
    if (it == sad.end())
        throw diar::InvalidInputError("SAD file " + a.sad_path + " has no regions for recording '" +
                                      emb.recording_id + "'");
    check_segments_match_sad(emb, it->second, a.window, a.shift);

    diar::DiarizationConfig cfg;
    cfg.alpha = a.alpha;
    cfg.k_max = a.k_max;
    cfg.seed = a.seed;
    if (a.oracle_k > 0) cfg.oracle_k = a.oracle_k;

    diar::DiarizationResult result = diar::diarize_recording(emb, cfg);
    diar::write_text_file(a.out_path, diar::emit_rttm(result.turns));
    fprintf(stderr, "%s: %d segments, %d speakers, %zu turns -> %s\n", emb.recording_id.c_str(),
            emb.count(), result.num_speakers, result.turns.size(), a.out_path.c_str());
    return 0;
}

// ==== score ====

struct ScoreArgs {
    std::string ref_path, hyp_path;
    double collar = 0.25;
};

int run_score(const ScoreArgs& a) {
    diar::RecordingTurns ref = diar::parse_rttm(diar::read_text_file(a.ref_path));
    diar::RecordingTurns hyp = diar::parse_rttm(diar::read_text_file(a.hyp_path));
    if (ref.empty()) throw diar::InvalidInputError("reference RTTM has no turns");
    for (const auto& [rec, turns] : hyp)
        if (!ref.count(rec))
            throw diar::InvalidInputError("hypothesis recording '" + rec +
                                          "' is absent from the reference");

    diar::ScoringConfig cfg{a.collar};
    std::string out = "recording\tmissed\tfalse_alarm\tspeaker_error\tscored_ref\tder_percent\n";
    std::vector<diar::DerBreakdown> all;
    for (const auto& [rec, turns] : ref) {
        auto hit = hyp.find(rec);
        static const std::vector<diar::Turn> kNone;
        diar::DerBreakdown b =
            diar::compute_der(turns, hit == hyp.end() ? kNone : hit->second, cfg);
        out += der_row(rec, b);
        all.push_back(b);
    }
    out += der_row("ALL", diar::aggregate_der(all));
    fputs(out.c_str(), stdout);
    return 0;
}

// ==== tune / xdomain ====

struct TuneArgs {
    std::string manifest_path, domain;
    double grid_step = 0.01;
    double collar = 0.25;
    int k_max = 10;
    std::uint64_t seed = 42;
    int jobs = 0;  // 0 = default_jobs()
};

int effective_jobs(int jobs) { return jobs > 0 ? jobs : diar::default_jobs(); }

int run_tune(const TuneArgs& a) {
    auto domains = diar::parse_manifest(diar::read_text_file(a.manifest_path));
    const diar::ExperimentDomain* domain = nullptr;
    for (const auto& d : domains)
        if (d.name == a.domain) domain = &d;
    if (!domain)
        throw diar::InvalidInputError("manifest has no domain '" + a.domain + "'");

    const int jobs = effective_jobs(a.jobs);
    std::vector<diar::LoadedRecording> dev(domain->dev.size());
    diar::parallel_for(dev.size(), jobs,
                       [&](size_t i) { dev[i] = diar::load_bundle(domain->dev[i]); });

    diar::DiarizationConfig base;
    base.k_max = a.k_max;
    base.seed = a.seed;
    diar::SweepResult sweep =
        diar::sweep_alpha(dev, diar::alpha_grid(a.grid_step), base, {a.collar}, jobs);

    fputs(diar::curve_report(sweep).c_str(), stdout);
    fprintf(stderr, "domain %s: swept %zu alphas over %zu dev recordings, best alpha %s (DER %.4f%%)\n",
            a.domain.c_str(), sweep.grid.size(), dev.size(),
            diar::format_double(sweep.best_alpha).c_str(), sweep.best_der * 100.0);
    return 0;
}

struct XDomainArgs {
    std::string manifest_path, out_dir;
    double grid_step = 0.01;
    double collar = 0.25;
    int k_max = 10;
    std::uint64_t seed = 42;
    int jobs = 0;
};

int run_xdomain(const XDomainArgs& a) {
    auto domains = diar::parse_manifest(diar::read_text_file(a.manifest_path));
    diar::DiarizationConfig base;
    base.k_max = a.k_max;
    base.seed = a.seed;

    diar::CrossDomainReport report = diar::cross_domain(
        domains, diar::alpha_grid(a.grid_step), base, {a.collar}, effective_jobs(a.jobs));

    std::filesystem::create_directories(a.out_dir);
    std::string matrix = diar::matrix_report(report);
    diar::write_text_file(a.out_dir + "/matrix.tsv", matrix);
    diar::write_text_file(a.out_dir + "/chosen_alpha.tsv", diar::chosen_alpha_report(report));
    for (size_t d = 0; d < report.domain_names.size(); ++d)
        diar::write_text_file(a.out_dir + "/sweep_" + report.domain_names[d] + ".tsv",
                              diar::curve_report(report.sweeps[d]));

    fputs(matrix.c_str(), stdout);
    fprintf(stderr, "wrote %zu-domain report to %s\n", report.domain_names.size(),
            a.out_dir.c_str());
    return 0;
}

// ==== synth ====

struct SynthArgs {
    std::string spec_path, out_dir;
};

double parse_num(const std::string& tok, int line_no, int field_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw diar::ParseError("malformed numeric field '" + tok + "'", line_no, field_no);
    return v;
}

// Spec file: one recording per line,
//   <domain> <n_speakers> <dim> <duration> <turn_lo> <turn_hi> <intra_noise>
//   <inter_min_angle> <seed>
std::vector<std::pair<std::string, diar::SynthSpec>> parse_synth_specs(const std::string& text) {
    std::vector<std::pair<std::string, diar::SynthSpec>> out;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        size_t end = (eol == std::string::npos) ? text.size() : eol;
        ++line_no;
        std::string line = text.substr(pos, end - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;

        std::vector<std::string> f;
        size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            size_t s = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            if (i > s) f.push_back(line.substr(s, i - s));
        }
        if (f.empty() || f[0][0] == '#') continue;
        if (f.size() != 9)
            throw diar::ParseError("spec line has " + std::to_string(f.size()) +
                                       " fields, expected 9 (<domain> <n_speakers> <dim> "
                                       "<duration> <turn_lo> <turn_hi> <intra_noise> "
                                       "<inter_min_angle> <seed>)",
                                   line_no);
        diar::SynthSpec s;
        s.n_speakers = static_cast<int>(parse_num(f[1], line_no, 2));
        s.dim = static_cast<int>(parse_num(f[2], line_no, 3));
        s.duration = parse_num(f[3], line_no, 4);
        s.turn_len_lo = parse_num(f[4], line_no, 5);
        s.turn_len_hi = parse_num(f[5], line_no, 6);
        s.intra_noise = parse_num(f[6], line_no, 7);
        s.inter_min_angle = parse_num(f[7], line_no, 8);
        s.seed = static_cast<std::uint64_t>(parse_num(f[8], line_no, 9));
        out.emplace_back(f[0], s);
    }
    return out;
}

int run_synth(const SynthArgs& a) {
    auto specs = parse_synth_specs(diar::read_text_file(a.spec_path));
    if (specs.empty()) throw diar::InvalidInputError("spec file lists no recordings");

    // group by domain, preserving first-appearance order
    std::vector<std::string> order;
    std::map<std::string, std::vector<diar::SynthSpec>> grouped;
    for (auto& [domain, spec] : specs) {
        if (!grouped.count(domain)) order.push_back(domain);
        grouped[domain].push_back(spec);
    }

    std::filesystem::create_directories(a.out_dir);
    std::string manifest;
    for (const std::string& domain : order) {
        manifest += diar::gen_domain(grouped[domain], domain, a.out_dir);
        fprintf(stderr, "domain %s: %zu recordings\n", domain.c_str(), grouped[domain].size());
    }
    diar::write_text_file(a.out_dir + "/manifest.tsv", manifest);
    fprintf(stderr, "wrote %s/manifest.tsv\n", a.out_dir.c_str());
    return 0;
}

// ==== count-error ====

struct CountErrorArgs {
    std::string ref_path, hyp_dir;
};

int run_count_error(const CountErrorArgs& a) {
    diar::RecordingTurns ref = diar::parse_rttm(diar::read_text_file(a.ref_path));
    if (ref.empty()) throw diar::InvalidInputError("reference RTTM has no turns");

    std::string out = "recording\ttrue_speakers\testimated_speakers\tabs_error\n";
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [rec, turns] : ref) {
        std::set<std::string> true_spk;
        for (const diar::Turn& t : turns) true_spk.insert(t.speaker);

        std::string hyp_path = a.hyp_dir + "/" + rec + ".rttm";
        diar::RecordingTurns hyp = diar::parse_rttm(diar::read_text_file(hyp_path));
        auto hit = hyp.find(rec);
        if (hit == hyp.end())
            throw diar::InvalidInputError(hyp_path + " has no turns for recording '" + rec + "'");
        std::set<std::string> est_spk;
        for (const diar::Turn& t : hit->second) est_spk.insert(t.speaker);

        pairs.emplace_back(static_cast<int>(true_spk.size()), static_cast<int>(est_spk.size()));
        out += rec + "\t" + std::to_string(true_spk.size()) + "\t" +
               std::to_string(est_spk.size()) + "\t" +
               std::to_string(std::abs(pairs.back().second - pairs.back().first)) + "\n";
    }
    out += "MEAN\t-\t-\t" + fixed6(diar::speaker_count_error(pairs)) + "\n";
    fputs(out.c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral-clustering speaker diarization toolkit"};
    app.require_subcommand(1);

    SegmentArgs seg;
    CLI::App* c_seg = app.add_subcommand("segment", "Window SAD regions into fixed segments");
    c_seg->add_option("--sad", seg.sad_path, "SAD file (<rec> <onset> <offset>)")->required();
    c_seg->add_option("--window", seg.window, "Segment length, seconds")->capture_default_str();
    c_seg->add_option("--shift", seg.shift, "Segment shift, seconds")->capture_default_str();
    c_seg->add_option("--min-seg", seg.min_seg, "Minimum scorable region length, seconds")
        ->capture_default_str();

    DiarizeArgs dia;
    CLI::App* c_dia = app.add_subcommand("diarize", "Diarize one recording's embeddings");
    c_dia->add_option("--emb", dia.emb_path, "Segment-embedding file")->required();
    c_dia->add_option("--sad", dia.sad_path, "SAD file the segments were windowed from")
        ->required();
    c_dia->add_option("--alpha", dia.alpha, "Affinity pruning parameter in [0,1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    c_dia->add_option("--oracle-k", dia.oracle_k, "Bypass speaker-count estimation with this k")
        ->check(CLI::Range(1, 1000));
    c_dia->add_option("--k-max", dia.k_max, "Eigengap search bound")->capture_default_str();
    c_dia->add_option("--seed", dia.seed, "k-means seed")->capture_default_str();
    c_dia->add_option("--window", dia.window, "Window used to produce the segments")
        ->capture_default_str();
    c_dia->add_option("--shift", dia.shift, "Shift used to produce the segments")
        ->capture_default_str();
    c_dia->add_option("--out", dia.out_path, "Output RTTM path")->required();

    ScoreArgs sco;
    CLI::App* c_sco = app.add_subcommand("score", "DER of a hypothesis RTTM against a reference");
    c_sco->add_option("--ref", sco.ref_path, "Reference RTTM")->required();
    c_sco->add_option("--hyp", sco.hyp_path, "Hypothesis RTTM")->required();
    c_sco->add_option("--collar", sco.collar, "Forgiveness collar, seconds")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1e9));

    TuneArgs tun;
    CLI::App* c_tun = app.add_subcommand("tune", "Sweep alpha on one domain's dev set");
    c_tun->add_option("--manifest", tun.manifest_path, "Experiment manifest")->required();
    c_tun->add_option("--domain", tun.domain, "Domain name to tune")->required();
    c_tun->add_option("--grid-step", tun.grid_step, "Alpha grid step (must divide 1)")
        ->capture_default_str();
    c_tun->add_option("--collar", tun.collar, "Scoring collar, seconds")->capture_default_str();
    c_tun->add_option("--k-max", tun.k_max, "Eigengap search bound")->capture_default_str();
    c_tun->add_option("--seed", tun.seed, "k-means seed")->capture_default_str();
    c_tun->add_option("--jobs", tun.jobs, "Worker threads (default: DIARIZE_JOBS or hardware)");

    XDomainArgs xdo;
    CLI::App* c_xdo = app.add_subcommand("xdomain", "Cross-domain tuning/evaluation matrix");
    c_xdo->add_option("--manifest", xdo.manifest_path, "Experiment manifest")->required();
    c_xdo->add_option("--grid-step", xdo.grid_step, "Alpha grid step (must divide 1)")
        ->capture_default_str();
    c_xdo->add_option("--collar", xdo.collar, "Scoring collar, seconds")->capture_default_str();
    c_xdo->add_option("--k-max", xdo.k_max, "Eigengap search bound")->capture_default_str();
    c_xdo->add_option("--seed", xdo.seed, "k-means seed")->capture_default_str();
    c_xdo->add_option("--jobs", xdo.jobs, "Worker threads (default: DIARIZE_JOBS or hardware)");
    c_xdo->add_option("--out-dir", xdo.out_dir, "Report output directory")->required();

    SynthArgs syn;
    CLI::App* c_syn = app.add_subcommand("synth", "Generate a synthetic corpus");
    c_syn->add_option("--spec-file", syn.spec_path, "Corpus spec, one recording per line")
        ->required();
    c_syn->add_option("--out-dir", syn.out_dir, "Corpus output directory")->required();

    CountErrorArgs cnt;
    CLI::App* c_cnt =
        app.add_subcommand("count-error", "Speaker-count estimation error vs reference");
    c_cnt->add_option("--ref", cnt.ref_path, "Reference RTTM")->required();
    c_cnt->add_option("--hyp-dir", cnt.hyp_dir, "Directory of per-recording <rec>.rttm files")
        ->required();

    int code = 0;
    try {
        app.parse(argc, argv);
        if (c_seg->parsed()) code = run_segment(seg);
        else if (c_dia->parsed()) code = run_diarize(dia);
        else if (c_sco->parsed()) code = run_score(sco);
        else if (c_tun->parsed()) code = run_tune(tun);
        else if (c_xdo->parsed()) code = run_xdomain(xdo);
        else if (c_syn->parsed()) code = run_synth(syn);
        else if (c_cnt->parsed()) code = run_count_error(cnt);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const diar::NumericalError& e) {
        fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const diar::ParseError& e) {
        fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return code;
}
