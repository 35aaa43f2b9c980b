// Black-box smoke test for the diar binary: exit codes, help text, and a
// small end-to-end corpus flow. argv[1] = binary path, argv[2] = scratch dir.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "diar/io_formats.hpp"
#include "diar/types.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& label) {
    std::printf("%s %s\n", ok ? "ok" : "FAIL", label.c_str());
    if (!ok) ++failures;
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) {
        std::perror("popen");
        std::exit(99);
    }
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

size_t line_count(const std::string& s) {
    size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

// the numeric value in the last tab-separated field of the line starting
// with `prefix`
double last_field(const std::string& out, const std::string& prefix) {
    size_t at = out.find(prefix);
    if (at == std::string::npos) return -1.0;
    size_t eol = out.find('\n', at);
    std::string line = out.substr(at, eol - at);
    size_t tab = line.rfind('\t');
    return std::strtod(line.c_str() + tab + 1, nullptr);
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <diar-binary> <workdir>\n", argv[0]);
        return 99;
    }
    const std::string bin = std::string("\"") + argv[1] + "\"";
    const fs::path work = argv[2];
    fs::remove_all(work);
    fs::create_directories(work);
    auto at = [&](const char* name) { return (work / name).string(); };

    // ---- help and usage errors ----
    RunResult top = run(bin + " --help");
    check(top.code == 0, "--help exits 0");
    for (const char* sub :
         {"segment", "diarize", "score", "tune", "xdomain", "synth", "count-error"})
        check(contains(top.out, sub), std::string("--help lists ") + sub);

    check(run(bin + " segment --help").code == 0, "segment --help exits 0");
    check(contains(run(bin + " segment --help").out, "--sad"), "segment --help shows --sad");
    check(contains(run(bin + " diarize --help").out, "--alpha"), "diarize --help shows --alpha");
    check(contains(run(bin + " score --help").out, "--collar"), "score --help shows --collar");
    check(contains(run(bin + " tune --help").out, "--grid-step"), "tune --help shows --grid-step");
    check(contains(run(bin + " xdomain --help").out, "--out-dir"), "xdomain --help shows --out-dir");
    check(contains(run(bin + " synth --help").out, "--spec-file"), "synth --help shows --spec-file");
    check(contains(run(bin + " count-error --help").out, "--hyp-dir"),
          "count-error --help shows --hyp-dir");

    check(run(bin).code == 1, "no subcommand exits 1");
    check(run(bin + " frobnicate").code == 1, "unknown subcommand exits 1");
    check(run(bin + " segment --no-such-flag").code == 1, "unknown flag exits 1");
    check(run(bin + " diarize --emb x.emb").code == 1, "missing required flags exit 1");
    check(run(bin + " diarize --emb x --sad y --alpha 1.5 --out z").code == 1,
          "out-of-range alpha exits 1");

    // ---- data errors ----
    check(run(bin + " score --ref " + at("nope.rttm") + " --hyp " + at("nope.rttm")).code == 2,
          "missing input file exits 2");
    diar::write_text_file(at("garbage.sad"), "not a number line\n");
    check(run(bin + " segment --sad " + at("garbage.sad")).code == 2, "malformed SAD exits 2");
    diar::write_text_file(at("garbage.emb"), "rec two 3\n");
    check(run(bin + " diarize --emb " + at("garbage.emb") + " --sad " + at("garbage.sad") +
              " --alpha 0.5 --out " + at("x.rttm"))
                  .code == 2,
          "malformed embedding header exits 2");

    // ---- segment ----
    diar::write_text_file(at("demo.sad"), "demo 0 30\n");
    RunResult seg = run(bin + " segment --sad " + at("demo.sad"));
    check(seg.code == 0, "segment exits 0");
    check(line_count(seg.out) == 20, "segment emits header + 19 windows for 30 s");
    check(contains(seg.out, "recording\tonset\toffset\n"), "segment prints a TSV header");
    check(contains(seg.out, "demo\t0\t3\n"), "segment starts at the region onset");
    check(contains(seg.out, "demo\t27\t30\n"), "segment ends at the region offset");

    // ---- synth -> diarize -> score -> tune -> xdomain -> count-error ----
    diar::write_text_file(at("specs.txt"),
                          "# domain n_spk dim dur lo hi noise angle seed\n"
                          "sm 2 16 45 3 6 0.03 80 901\n"
                          "sm 2 16 45 3 6 0.03 80 902\n");
    const std::string corpus = at("corpus");
    RunResult synth = run(bin + " synth --spec-file " + at("specs.txt") + " --out-dir " + corpus);
    check(synth.code == 0, "synth exits 0");
    check(fs::exists(corpus + "/manifest.tsv"), "synth writes manifest.tsv");
    check(fs::exists(corpus + "/sm_r0.emb") && fs::exists(corpus + "/sm_r0.sad") &&
              fs::exists(corpus + "/sm_r0.rttm"),
          "synth writes the recording trio");

    RunResult dia = run(bin + " diarize --emb " + corpus + "/sm_r0.emb --sad " + corpus +
                        "/sm_r0.sad --alpha 0.5 --out " + at("hyp.rttm"));
    check(dia.code == 0, "diarize exits 0");
    check(fs::exists(at("hyp.rttm")), "diarize writes the output RTTM");
    diar::RecordingTurns hyp = diar::parse_rttm(diar::read_text_file(at("hyp.rttm")));
    check(hyp.count("sm_r0") == 1, "hypothesis keeps the recording id");

    RunResult sco =
        run(bin + " score --ref " + corpus + "/sm_r0.rttm --hyp " + at("hyp.rttm"));
    check(sco.code == 0, "score exits 0");
    check(contains(sco.out, "ALL\t"), "score prints an aggregate row");
    double der = last_field(sco.out, "ALL\t");
    check(der >= 0.0 && der < 15.0, "easy synthetic recording scores under 15% DER");

    RunResult tun = run(bin + " tune --manifest " + corpus + "/manifest.tsv --domain sm" +
                        " --grid-step 0.5 --jobs 1");
    check(tun.code == 0, "tune exits 0");
    check(contains(tun.out, "kind\talpha\tder_percent\n"), "tune prints the curve header");
    check(line_count(tun.out) == 5, "tune prints 3 points and a best row");
    RunResult tun2 = run(bin + " tune --manifest " + corpus + "/manifest.tsv --domain sm" +
                         " --grid-step 0.5 --jobs 2");
    check(tun2.out == tun.out, "tune output does not depend on --jobs");
    check(run(bin + " tune --manifest " + corpus + "/manifest.tsv --domain zz").code == 2,
          "unknown domain exits 2");

    RunResult xdo = run(bin + " xdomain --manifest " + corpus + "/manifest.tsv --grid-step 0.5" +
                        " --jobs 1 --out-dir " + at("xout"));
    check(xdo.code == 0, "xdomain exits 0");
    check(fs::exists(at("xout") + std::string("/matrix.tsv")) &&
              fs::exists(at("xout") + std::string("/chosen_alpha.tsv")) &&
              fs::exists(at("xout") + std::string("/sweep_sm.tsv")),
          "xdomain writes matrix, chosen-alpha, and sweep reports");
    check(contains(xdo.out, "tuning_domain\tchosen_alpha\teval_sm\n"),
          "xdomain prints the matrix header");

    fs::create_directories(at("hypdir"));
    fs::copy_file(at("hyp.rttm"), work / "hypdir" / "sm_r0.rttm",
                  fs::copy_options::overwrite_existing);
    RunResult cnt = run(bin + " count-error --ref " + corpus + "/sm_r0.rttm --hyp-dir " +
                        at("hypdir"));
    check(cnt.code == 0, "count-error exits 0");
    check(contains(cnt.out, "MEAN\t"), "count-error prints the mean row");
    check(last_field(cnt.out, "sm_r0\t") == 0.0, "estimated speaker count matches the truth");

    if (failures) std::printf("%d smoke check(s) failed\n", failures);
    return failures ? 1 : 0;
}
