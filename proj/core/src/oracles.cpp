#include "diar/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "diar/errors.hpp"

namespace diar {

namespace {

int64_t to_frame(double t, double frame) {
    double f = t / frame;
    int64_t r = std::llround(f);
    if (std::abs(f - static_cast<double>(r)) > 1e-6)
        throw InvalidInputError("oracle_der_frames: boundary " + std::to_string(t) +
                                " is not a multiple of the frame size");
    return r;
}

} // namespace

DerBreakdown oracle_der_frames(const std::vector<Turn>& ref, const std::vector<Turn>& hyp,
                               double collar, double frame) {
    if (ref.empty()) throw InvalidInputError("oracle_der_frames: reference has no turns");
    if (frame <= 0.0) throw InvalidInputError("oracle_der_frames: frame must be positive");

    const int64_t collar_frames = to_frame(collar, frame);

    // frame span covering every turn plus the widest possible collar reach
    int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (const auto* side : {&ref, &hyp})
        for (const Turn& t : *side) {
            lo = std::min(lo, to_frame(t.onset, frame));
            hi = std::max(hi, to_frame(t.offset(), frame));
        }
    lo -= collar_frames;
    hi += collar_frames;
    const int64_t n_frames = hi - lo;
    if (n_frames <= 0) throw InvalidInputError("oracle_der_frames: empty span");

    auto idx = [&](int64_t f) { return static_cast<size_t>(f - lo); };

    std::vector<int> masked(n_frames + 1, 0);

    std::map<std::string, std::vector<char>> ref_active, hyp_active;
    for (const Turn& t : ref) {
        auto& a = ref_active[t.speaker];
        if (a.empty()) a.assign(n_frames, 0);
        for (int64_t f = to_frame(t.onset, frame); f < to_frame(t.offset(), frame); ++f)
            a[idx(f)] = 1;
    }
    for (const Turn& t : hyp) {
        auto& a = hyp_active[t.speaker];
        if (a.empty()) a.assign(n_frames, 0);
        for (int64_t f = to_frame(t.onset, frame); f < to_frame(t.offset(), frame); ++f)
            a[idx(f)] = 1;
    }
    for (const Turn& t : ref)
        for (double b : {t.onset, t.offset()}) {
            int64_t z0 = std::max(lo, to_frame(b, frame) - collar_frames);
            int64_t z1 = std::min(hi, to_frame(b, frame) + collar_frames);
            for (int64_t f = z0; f < z1; ++f) masked[idx(f)] = 1;
        }

    std::map<std::string, std::string> mapping = optimal_mapping(ref, hyp);

    int64_t miss_f = 0, fa_f = 0, spk_f = 0, scored_f = 0;
    for (int64_t f = 0; f < n_frames; ++f) {
        if (masked[static_cast<size_t>(f)]) continue;
        int nr = 0, nh = 0, nc = 0;
        for (const auto& [spk, a] : ref_active) nr += a[static_cast<size_t>(f)];
        for (const auto& [spk, a] : hyp_active) nh += a[static_cast<size_t>(f)];
        for (const auto& [h, r] : mapping)
            nc += hyp_active[h][static_cast<size_t>(f)] && ref_active[r][static_cast<size_t>(f)];
        miss_f += std::max(0, nr - nh);
        fa_f += std::max(0, nh - nr);
        spk_f += std::min(nr, nh) - nc;
        scored_f += nr;
    }

    DerBreakdown b;
    b.missed = static_cast<double>(miss_f) * frame;
    b.false_alarm = static_cast<double>(fa_f) * frame;
    b.speaker_error = static_cast<double>(spk_f) * frame;
    b.scored_ref = static_cast<double>(scored_f) * frame;
    double errors = b.missed + b.false_alarm + b.speaker_error;
    if (b.scored_ref > 0.0)
        b.der = errors / b.scored_ref;
    else if (errors > 0.0)
        throw InvalidInputError("oracle_der_frames: zero scored reference time but nonzero error");
    return b;
}

namespace {

void search_assignment(const Eigen::MatrixXd& score, int row, std::vector<int>& current,
                       std::vector<char>& col_used, double running, OracleAssignment& best) {
    const int rows = static_cast<int>(score.rows());
    const int cols = static_cast<int>(score.cols());
    if (row == rows) {
        if (best.row_to_col.empty() || running > best.total) {
            best.total = running;
            best.row_to_col = current;
        }
        return;
    }
    for (int j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        col_used[j] = 1;
        current[row] = j;
        search_assignment(score, row + 1, current, col_used, running + score(row, j), best);
        col_used[j] = 0;
        current[row] = -1;
    }
    // leaving the row unmatched is always legal, and with more rows than
    // columns it can be the only way to free a column for a better row;
    // explored last so ties prefer matched solutions
    search_assignment(score, row + 1, current, col_used, running, best);
}

} // namespace

OracleAssignment oracle_assignment(const Eigen::MatrixXd& score) {
    const int rows = static_cast<int>(score.rows());
    const int cols = static_cast<int>(score.cols());
    if (rows > 6 || cols > 6)
        throw InvalidInputError("oracle_assignment: refusing matrices larger than 6x6");
    OracleAssignment best;
    if (rows == 0 || cols == 0) return best;
    std::vector<int> current(rows, -1);
    std::vector<char> col_used(cols, 0);
    search_assignment(score, 0, current, col_used, 0.0, best);
    return best;
}

double oracle_kmeans(const Eigen::MatrixXd& points, int k) {
    const int n = static_cast<int>(points.rows());
    if (n > 8 || k > 3) throw InvalidInputError("oracle_kmeans: refusing N > 8 or k > 3");
    if (n == 0 || k < 1) throw InvalidInputError("oracle_kmeans: empty input or k < 1");

    int64_t combos = 1;
    for (int i = 0; i < n; ++i) combos *= k;

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> labels(n, 0);
    for (int64_t code = 0; code < combos; ++code) {
        int64_t c = code;
        for (int i = 0; i < n; ++i) {
            labels[i] = static_cast<int>(c % k);
            c /= k;
        }
        double inertia = 0.0;
        for (int cluster = 0; cluster < k; ++cluster) {
            Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
            int count = 0;
            for (int i = 0; i < n; ++i)
                if (labels[i] == cluster) {
                    mean += points.row(i);
                    ++count;
                }
            if (count == 0) continue;
            mean /= static_cast<double>(count);
            for (int i = 0; i < n; ++i)
                if (labels[i] == cluster) inertia += (points.row(i) - mean).squaredNorm();
        }
        best = std::min(best, inertia);
    }
    return best;
}

} // namespace diar
