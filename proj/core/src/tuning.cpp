#include "diar/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "diar/affinity.hpp"
#include "diar/errors.hpp"
#include "diar/io_formats.hpp"
#include "diar/parallel.hpp"

namespace diar {

namespace {

std::string percent6(double ratio) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", ratio * 100.0);
    return buf;
}

// Rethrow a task failure with (alpha, recording) context, keeping the
// exception type so CLI exit codes survive.
[[noreturn]] void rethrow_with_context(const std::string& rec_id, double alpha) {
    std::string ctx = "recording=" + rec_id + " alpha=" + format_double(alpha) + ": ";
    try {
        throw;
    } catch (const NumericalError& e) {
        throw NumericalError(ctx + e.what());
    } catch (const InvalidInputError& e) {
        throw InvalidInputError(ctx + e.what());
    } catch (const std::exception& e) {
        throw InvalidInputError(ctx + e.what());
    }
}

DerBreakdown score_one(const LoadedRecording& rec, double alpha, const DiarizationConfig& base,
                       const ScoringConfig& scoring) {
    try {
        DiarizationConfig cfg = base;
        cfg.alpha = alpha;
        DiarizationResult result = diarize_from_affinity(rec.embeddings, rec.raw_affinity, cfg);
        return compute_der(rec.reference, result.turns, scoring);
    } catch (...) {
        rethrow_with_context(rec.recording_id, alpha);
    }
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

} // namespace

std::vector<double> alpha_grid(double step) {
    if (!(step > 0.0) || step > 1.0)
        throw InvalidInputError("alpha_grid: step must lie in (0, 1]");
    const long long denom = std::llround(1.0 / step);
    if (denom < 1 || std::abs(1.0 / step - static_cast<double>(denom)) > 1e-6)
        throw InvalidInputError("alpha_grid: step must divide 1 exactly, got " +
                                format_double(step));
    std::vector<double> grid;
    grid.reserve(denom + 1);
    for (long long j = 0; j <= denom; ++j)
        grid.push_back(static_cast<double>(j) / static_cast<double>(denom));
    return grid;
}

std::vector<ExperimentDomain> parse_manifest(const std::string& text) {
    std::vector<ExperimentDomain> domains;
    auto domain_for = [&](const std::string& name) -> ExperimentDomain& {
        for (auto& d : domains)
            if (d.name == name) return d;
        domains.push_back({name, {}, {}});
        return domains.back();
    };

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        size_t end = (eol == std::string::npos) ? text.size() : eol;
        ++line_no;
        std::string line = text.substr(pos, end - pos);
        pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;

        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 6)
            throw ParseError("manifest line has " + std::to_string(fields.size()) +
                                 " fields, expected 6 "
                                 "(<domain> <dev|eval> <rec_id> <sad> <emb> <rttm>)",
                             line_no);
        RecordingBundle b{fields[2], fields[3], fields[4], fields[5]};
        ExperimentDomain& d = domain_for(fields[0]);
        if (fields[1] == "dev")
            d.dev.push_back(std::move(b));
        else if (fields[1] == "eval")
            d.eval.push_back(std::move(b));
        else
            throw ParseError("split must be 'dev' or 'eval', got '" + fields[1] + "'", line_no, 2);
    }

    if (domains.empty()) throw InvalidInputError("manifest lists no recordings");
    for (const auto& d : domains) {
        if (d.dev.empty())
            throw InvalidInputError("domain '" + d.name + "' has no dev recordings");
        if (d.eval.empty())
            throw InvalidInputError("domain '" + d.name + "' has no eval recordings");
    }
    return domains;
}

LoadedRecording load_bundle(const RecordingBundle& bundle) {
    LoadedRecording rec;
    rec.recording_id = bundle.recording_id;
    rec.embeddings = read_embeddings(read_text_file(bundle.emb_path));
    if (rec.embeddings.recording_id != bundle.recording_id)
        throw InvalidInputError("embedding file " + bundle.emb_path + " is for recording '" +
                                rec.embeddings.recording_id + "', manifest says '" +
                                bundle.recording_id + "'");

    RecordingRegions sad = parse_sad(read_text_file(bundle.sad_path));
    auto it = sad.find(bundle.recording_id);
    if (it == sad.end())
        throw InvalidInputError("SAD file " + bundle.sad_path + " has no regions for recording '" +
                                bundle.recording_id + "'");
    // every segment must lie inside a speech region
    for (const Segment& s : rec.embeddings.segments) {
        bool inside = false;
        for (const SpeechRegion& r : it->second)
            if (s.onset >= r.onset - 1e-6 && s.offset <= r.offset + 1e-6) {
                inside = true;
                break;
            }
        if (!inside)
            throw InvalidInputError("segment [" + format_double(s.onset) + ", " +
                                    format_double(s.offset) + "] of recording '" +
                                    bundle.recording_id + "' lies outside the SAD regions");
    }

    RecordingTurns turns = parse_rttm(read_text_file(bundle.ref_rttm_path));
    auto rt = turns.find(bundle.recording_id);
    if (rt == turns.end())
        throw InvalidInputError("reference RTTM " + bundle.ref_rttm_path +
                                " has no turns for recording '" + bundle.recording_id + "'");
    rec.reference = rt->second;
    rec.raw_affinity = cosine_affinity(rec.embeddings.vectors);
    return rec;
}

SweepResult sweep_alpha(const std::vector<LoadedRecording>& dev, const std::vector<double>& grid,
                        const DiarizationConfig& base, const ScoringConfig& scoring, int jobs) {
    if (dev.empty()) throw InvalidInputError("sweep_alpha: no dev recordings");
    if (grid.empty()) throw InvalidInputError("sweep_alpha: empty alpha grid");
    for (double a : grid)
        if (a < 0.0 || a > 1.0)
            throw InvalidInputError("sweep_alpha: grid value outside [0, 1]");

    const size_t n_alpha = grid.size();
    const size_t n_rec = dev.size();
    std::vector<DerBreakdown> cells(n_alpha * n_rec);

    parallel_for(n_alpha * n_rec, jobs, [&](size_t task) {
        size_t ai = task / n_rec;
        size_t ri = task % n_rec;
        cells[task] = score_one(dev[ri], grid[ai], base, scoring);
    });

    SweepResult result;
    result.grid = grid;
    result.ders.reserve(n_alpha);
    for (size_t ai = 0; ai < n_alpha; ++ai) {
        std::vector<DerBreakdown> per_rec(cells.begin() + ai * n_rec,
                                          cells.begin() + (ai + 1) * n_rec);
        result.ders.push_back(aggregate_der(per_rec).der);
    }

    size_t best = 0;
    for (size_t i = 1; i < n_alpha; ++i)
        if (result.ders[i] < result.ders[best]) best = i;  // strict: first minimum wins
    result.best_alpha = grid[best];
    result.best_der = result.ders[best];
    return result;
}

CrossDomainReport cross_domain(const std::vector<ExperimentDomain>& domains,
                               const std::vector<double>& grid, const DiarizationConfig& base,
                               const ScoringConfig& scoring, int jobs) {
    if (domains.empty()) throw InvalidInputError("cross_domain: no domains");

    const size_t n = domains.size();
    std::vector<std::vector<LoadedRecording>> dev(n), eval(n);

    // flatten all bundles into one parallel load
    std::vector<std::pair<const RecordingBundle*, LoadedRecording*>> load_plan;
    for (size_t d = 0; d < n; ++d) {
        dev[d].resize(domains[d].dev.size());
        eval[d].resize(domains[d].eval.size());
        for (size_t i = 0; i < domains[d].dev.size(); ++i)
            load_plan.emplace_back(&domains[d].dev[i], &dev[d][i]);
        for (size_t i = 0; i < domains[d].eval.size(); ++i)
            load_plan.emplace_back(&domains[d].eval[i], &eval[d][i]);
    }
    parallel_for(load_plan.size(), jobs,
                 [&](size_t i) { *load_plan[i].second = load_bundle(*load_plan[i].first); });

    CrossDomainReport report;
    report.der_matrix.resize(n, n);
    for (size_t d = 0; d < n; ++d) {
        report.domain_names.push_back(domains[d].name);
        report.sweeps.push_back(sweep_alpha(dev[d], grid, base, scoring, jobs));
        report.chosen_alpha.push_back(report.sweeps.back().best_alpha);
    }

    // evaluation cells: (tuning domain, eval domain, eval recording)
    struct Cell {
        size_t ti, ei, ri;
    };
    std::vector<Cell> plan;
    for (size_t ti = 0; ti < n; ++ti)
        for (size_t ei = 0; ei < n; ++ei)
            for (size_t ri = 0; ri < eval[ei].size(); ++ri) plan.push_back({ti, ei, ri});

    std::vector<DerBreakdown> cell_results(plan.size());
    parallel_for(plan.size(), jobs, [&](size_t i) {
        const Cell& c = plan[i];
        cell_results[i] =
            score_one(eval[c.ei][c.ri], report.chosen_alpha[c.ti], base, scoring);
    });

    size_t cursor = 0;
    for (size_t ti = 0; ti < n; ++ti)
        for (size_t ei = 0; ei < n; ++ei) {
            std::vector<DerBreakdown> per_rec;
            for (size_t ri = 0; ri < eval[ei].size(); ++ri) per_rec.push_back(cell_results[cursor++]);
            report.der_matrix(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(ei)) =
                aggregate_der(per_rec).der;
        }
    return report;
}

std::string curve_report(const SweepResult& sweep) {
    std::string out = "kind\talpha\tder_percent\n";
    for (size_t i = 0; i < sweep.grid.size(); ++i)
        out += "point\t" + format_double(sweep.grid[i]) + "\t" + percent6(sweep.ders[i]) + "\n";
    out += "best\t" + format_double(sweep.best_alpha) + "\t" + percent6(sweep.best_der) + "\n";
    return out;
}

std::string matrix_report(const CrossDomainReport& report) {
    std::string out = "tuning_domain\tchosen_alpha";
    for (const std::string& name : report.domain_names) out += "\teval_" + name;
    out += "\n";
    for (size_t ti = 0; ti < report.domain_names.size(); ++ti) {
        out += report.domain_names[ti] + "\t" + format_double(report.chosen_alpha[ti]);
        for (size_t ei = 0; ei < report.domain_names.size(); ++ei)
            out += "\t" + percent6(report.der_matrix(static_cast<Eigen::Index>(ti),
                                                     static_cast<Eigen::Index>(ei)));
        out += "\n";
    }
    return out;
}

std::string chosen_alpha_report(const CrossDomainReport& report) {
    std::string out = "domain\tbest_alpha\tbest_der_percent\n";
    for (size_t d = 0; d < report.domain_names.size(); ++d)
        out += report.domain_names[d] + "\t" + format_double(report.chosen_alpha[d]) + "\t" +
               percent6(report.sweeps[d].best_der) + "\n";
    return out;
}

} // namespace diar
