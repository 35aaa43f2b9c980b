#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "diar/errors.hpp"
#include "diar/io_formats.hpp"
#include "diar/rng.hpp"
#include "diar/synthetic.hpp"

using namespace diar;

namespace {

SynthSpec small_spec() {
    SynthSpec s;
    s.name = "t0";
    s.n_speakers = 3;
    s.dim = 32;
    s.duration = 60.0;
    s.turn_len_lo = 2.0;
    s.turn_len_hi = 5.0;
    s.intra_noise = 0.05;
    s.inter_min_angle = 70.0;
    s.seed = 7;
    return s;
}

} // namespace

TEST_CASE("sample_anchors respects the pairwise angle floor") {
    Rng rng(11);
    double min_deg = 75.0;
    Eigen::MatrixXd a = sample_anchors(5, 48, min_deg, rng);
    REQUIRE(a.rows() == 5);
    REQUIRE(a.cols() == 48);
    double max_cos = std::cos(min_deg * M_PI / 180.0);
    for (int i = 0; i < 5; ++i) {
        CHECK(a.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = i + 1; j < 5; ++j)
            CHECK(a.row(i).dot(a.row(j)) <= max_cos + 1e-12);
    }
}

TEST_CASE("sample_anchors rejects infeasible requests") {
    Rng rng(12);
    // more than 2 directions pairwise >120 degrees apart cannot fit anywhere
    CHECK_THROWS_AS(sample_anchors(8, 3, 130.0, rng), InvalidInputError);
}

TEST_CASE("reference turns tile the full duration on the 10 ms grid") {
    SyntheticRecording rec = gen_recording(small_spec());
    REQUIRE(!rec.reference.empty());
    CHECK(rec.reference.front().onset == 0.0);
    double cursor = 0.0;
    std::set<std::string> speakers;
    for (const Turn& t : rec.reference) {
        CHECK(t.onset == doctest::Approx(cursor).epsilon(1e-12));
        CHECK(t.duration > 0.0);
        // 10 ms grid: scaling by 100 lands on an integer exactly
        CHECK(std::llround(t.onset * 100.0) == doctest::Approx(t.onset * 100.0));
        CHECK(std::llround(t.duration * 100.0) == doctest::Approx(t.duration * 100.0));
        cursor = t.offset();
        speakers.insert(t.speaker);
    }
    CHECK(cursor == doctest::Approx(60.0).epsilon(1e-12));
    CHECK(speakers.size() == 3);

    REQUIRE(rec.sad.size() == 1);
    CHECK(rec.sad[0].onset == 0.0);
    CHECK(rec.sad[0].offset == doctest::Approx(60.0));
}

TEST_CASE("turn lengths stay inside the configured range") {
    SynthSpec spec = small_spec();
    spec.duration = 300.0;
    SyntheticRecording rec = gen_recording(spec);
    for (size_t i = 0; i + 1 < rec.reference.size(); ++i) {
        // every turn except the truncated last one
        CHECK(rec.reference[i].duration >= spec.turn_len_lo - 1e-9);
        CHECK(rec.reference[i].duration <= spec.turn_len_hi + 1e-9);
    }
}

TEST_CASE("zero noise puts same-speaker segments exactly on the anchor") {
    SynthSpec spec = small_spec();
    spec.intra_noise = 0.0;
    SyntheticRecording rec = gen_recording(spec);
    const SegmentEmbeddings& emb = rec.embeddings;
    REQUIRE(emb.count() > 0);

    // group segments by owning speaker via the reference
    auto owner = [&](double midpoint) {
        for (const Turn& t : rec.reference)
            if (midpoint >= t.onset && midpoint < t.offset()) return t.speaker;
        return rec.reference.back().speaker;
    };
    for (size_t i = 0; i < emb.count(); ++i) {
        for (size_t j = i + 1; j < emb.count(); ++j) {
            double mi = (emb.segments[i].onset + emb.segments[i].offset) / 2.0;
            double mj = (emb.segments[j].onset + emb.segments[j].offset) / 2.0;
            double cos_ij = emb.vectors.row(i).dot(emb.vectors.row(j));
            if (owner(mi) == owner(mj)) {
                CHECK(cos_ij == doctest::Approx(1.0).epsilon(1e-9));
            } else {
                CHECK(cos_ij < 0.9);
            }
        }
    }
}

TEST_CASE("more noise lowers same-speaker cosine similarity") {
    auto mean_intra_cos = [](double noise) {
        SynthSpec spec = small_spec();
        spec.intra_noise = noise;
        spec.duration = 120.0;
        SyntheticRecording rec = gen_recording(spec);
        const SegmentEmbeddings& emb = rec.embeddings;
        auto owner = [&](size_t i) {
            double mid = (emb.segments[i].onset + emb.segments[i].offset) / 2.0;
            for (const Turn& t : rec.reference)
                if (mid >= t.onset && mid < t.offset()) return t.speaker;
            return rec.reference.back().speaker;
        };
        double sum = 0.0;
        int n = 0;
        for (size_t i = 0; i < emb.count(); ++i)
            for (size_t j = i + 1; j < emb.count(); ++j)
                if (owner(i) == owner(j)) {
                    sum += emb.vectors.row(i).dot(emb.vectors.row(j));
                    ++n;
                }
        REQUIRE(n > 0);
        return sum / n;
    };
    double tight = mean_intra_cos(0.02);
    double loose = mean_intra_cos(0.4);
    CHECK(tight > loose);
    // normalize(a + sigma*g) pairs have expected cosine near 1/(1 + sigma^2*d);
    // sigma=0.02, d=32 puts that at ~0.987
    CHECK(tight > 0.98);
}

TEST_CASE("gen_recording is deterministic and seed-sensitive") {
    SynthSpec spec = small_spec();
    SyntheticRecording a = gen_recording(spec);
    SyntheticRecording b = gen_recording(spec);
    CHECK(a.reference == b.reference);
    CHECK((a.embeddings.vectors.array() == b.embeddings.vectors.array()).all());

    spec.seed = 8;
    SyntheticRecording c = gen_recording(spec);
    REQUIRE(c.embeddings.vectors.rows() == a.embeddings.vectors.rows());
    CHECK(!(a.embeddings.vectors.array() == c.embeddings.vectors.array()).all());
}

TEST_CASE("gen_recording validates its parameters") {
    SynthSpec spec = small_spec();
    spec.n_speakers = 0;
    CHECK_THROWS_AS(gen_recording(spec), InvalidInputError);
    spec = small_spec();
    spec.turn_len_hi = spec.turn_len_lo - 1.0;
    CHECK_THROWS_AS(gen_recording(spec), InvalidInputError);
    spec = small_spec();
    spec.duration = 0.0;
    CHECK_THROWS_AS(gen_recording(spec), InvalidInputError);
}

TEST_CASE("gen_domain writes a loadable corpus and a dev/eval split") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "diar_synth_test";
    fs::remove_all(dir);

    std::vector<SynthSpec> specs;
    for (int i = 0; i < 4; ++i) {
        SynthSpec s = small_spec();
        s.name = "d_r" + std::to_string(i);
        s.seed = 100 + i;
        specs.push_back(s);
    }
    std::string manifest = gen_domain(specs, "d", dir.string());

    int dev = 0, eval = 0;
    size_t pos = 0;
    std::vector<std::string> lines;
    while (pos < manifest.size()) {
        size_t nl = manifest.find('\n', pos);
        REQUIRE(nl != std::string::npos);
        lines.push_back(manifest.substr(pos, nl - pos));
        pos = nl + 1;
    }
    REQUIRE(lines.size() == 4);
    for (const std::string& line : lines) {
        // <domain> <split> <rec> <sad> <emb> <rttm>
        std::vector<std::string> f;
        size_t start = 0;
        while (start < line.size()) {
            size_t sp = line.find(' ', start);
            if (sp == std::string::npos) sp = line.size();
            f.push_back(line.substr(start, sp - start));
            start = sp + 1;
        }
        REQUIRE(f.size() == 6);
        CHECK(f[0] == "d");
        if (f[1] == "dev") ++dev;
        if (f[1] == "eval") ++eval;
        CHECK(fs::exists(f[3]));
        CHECK(fs::exists(f[4]));
        CHECK(fs::exists(f[5]));

        // the written files parse back to the generated recording
        SegmentEmbeddings emb = read_embeddings(read_text_file(f[4]));
        CHECK(emb.recording_id == f[2]);
        RecordingRegions sad = parse_sad(read_text_file(f[3]));
        CHECK(sad.count(f[2]) == 1);
        RecordingTurns ref = parse_rttm(read_text_file(f[5]));
        CHECK(ref.count(f[2]) == 1);
    }
    CHECK(dev == 2);
    CHECK(eval == 2);
    fs::remove_all(dir);
}
