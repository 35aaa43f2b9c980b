#include "diar/io_formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "diar/errors.hpp"

namespace diar {

namespace {

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

double parse_double_field(const std::string& tok, int line_no, int field_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("malformed numeric field '" + tok + "'", line_no, field_no);
    if (!std::isfinite(v))
        throw ParseError("non-finite value '" + tok + "'", line_no, field_no);
    return v;
}

long parse_int_field(const std::string& tok, int line_no, int field_no) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("malformed integer field '" + tok + "'", line_no, field_no);
    return v;
}

std::string format_fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// Walk `text` line by line; calls fn(line, line_no) for each line.
template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        size_t end = (eol == std::string::npos) ? text.size() : eol;
        ++line_no;
        fn(text.substr(pos, end - pos), line_no);
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

RecordingTurns parse_rttm(const std::string& text) {
    RecordingTurns out;
    for_each_line(text, [&](const std::string& line, int line_no) {
        auto fields = split_ws(line);
        if (fields.empty()) return;
        if (fields[0] != "SPEAKER") return;  // other RTTM record types ignored
        if (fields.size() < 9)
            throw ParseError("SPEAKER line has " + std::to_string(fields.size()) +
                                 " fields, expected at least 9",
                             line_no);
        Turn t;
        t.recording_id = fields[1];
        t.onset = parse_double_field(fields[3], line_no, 4);
        t.duration = parse_double_field(fields[4], line_no, 5);
        t.speaker = fields[7];
        if (t.duration <= 0.0)
            throw ParseError("rejected turn with non-positive duration", line_no, 5);
        if (t.onset < 0.0)
            throw ParseError("rejected turn with negative onset", line_no, 4);
        out[t.recording_id].push_back(std::move(t));
    });
    return out;
}

std::vector<Turn> flatten(const RecordingTurns& grouped) {
    std::vector<Turn> out;
    for (const auto& [rec, turns] : grouped) out.insert(out.end(), turns.begin(), turns.end());
    return out;
}

std::string emit_rttm(const std::vector<Turn>& turns) {
    std::vector<Turn> sorted = turns;
    std::sort(sorted.begin(), sorted.end(), [](const Turn& a, const Turn& b) {
        if (a.recording_id != b.recording_id) return a.recording_id < b.recording_id;
        if (a.onset != b.onset) return a.onset < b.onset;
        return a.speaker < b.speaker;
    });
    std::string out;
    for (const Turn& t : sorted) {
        out += "SPEAKER " + t.recording_id + " 1 " + format_fixed3(t.onset) + " " +
               format_fixed3(t.duration) + " <NA> <NA> " + t.speaker + " <NA> <NA>\n";
    }
    return out;
}

RecordingRegions parse_sad(const std::string& text) {
    RecordingRegions out;
    for_each_line(text, [&](const std::string& line, int line_no) {
        auto fields = split_ws(line);
        if (fields.empty()) return;
        if (fields.size() != 3)
            throw ParseError("SAD line has " + std::to_string(fields.size()) +
                                 " fields, expected 3",
                             line_no);
        SpeechRegion r;
        r.recording_id = fields[0];
        r.onset = parse_double_field(fields[1], line_no, 2);
        r.offset = parse_double_field(fields[2], line_no, 3);
        if (r.offset <= r.onset)
            throw ParseError("rejected region with offset <= onset", line_no);
        out[r.recording_id].push_back(std::move(r));
    });
    // sort and merge overlapping-or-abutting regions per recording
    for (auto& [rec, regions] : out) {
        std::sort(regions.begin(), regions.end(), [](const SpeechRegion& a, const SpeechRegion& b) {
            return a.onset < b.onset || (a.onset == b.onset && a.offset < b.offset);
        });
        std::vector<SpeechRegion> merged;
        for (const auto& r : regions) {
            if (!merged.empty() && r.onset <= merged.back().offset)
                merged.back().offset = std::max(merged.back().offset, r.offset);
            else
                merged.push_back(r);
        }
        regions = std::move(merged);
    }
    return out;
}

std::string emit_sad(const RecordingRegions& regions) {
    std::string out;
    for (const auto& [rec, list] : regions)
        for (const auto& r : list)
            out += rec + " " + format_double(r.onset) + " " + format_double(r.offset) + "\n";
    return out;
}

SegmentEmbeddings read_embeddings(const std::string& text) {
    SegmentEmbeddings e;
    long n_expected = -1;
    long rows_seen = 0;
    bool header_seen = false;
    int last_line = 1;

    for_each_line(text, [&](const std::string& line, int line_no) {
        last_line = line_no;
        auto fields = split_ws(line);
        if (fields.empty()) return;
        if (!header_seen) {
            if (fields.size() != 3)
                throw ParseError("embedding header has " + std::to_string(fields.size()) +
                                     " fields, expected '<rec> <N> <d>'",
                                 line_no);
            e.recording_id = fields[0];
            n_expected = parse_int_field(fields[1], line_no, 2);
            long d = parse_int_field(fields[2], line_no, 3);
            if (n_expected < 0) throw ParseError("negative segment count", line_no, 2);
            if (d < 1) throw ParseError("dimension must be positive", line_no, 3);
            if (n_expected > 0) {
                // bound the allocation by what the text could possibly hold:
                // at most one data row per line, each carrying d+2 fields
                long max_rows =
                    static_cast<long>(std::count(text.begin(), text.end(), '\n')) + 1;
                if (n_expected > max_rows)
                    throw ParseError("declared N=" + std::to_string(n_expected) +
                                         " exceeds the file's line count",
                                     line_no, 2);
                if (d > static_cast<long>(text.size()))
                    throw ParseError("declared dimension " + std::to_string(d) +
                                         " exceeds the file size",
                                     line_no, 3);
            }
            e.dim = static_cast<int>(d);
            e.vectors.resize(n_expected, d);
            e.segments.reserve(n_expected);
            header_seen = true;
            return;
        }
        if (rows_seen >= n_expected)
            throw ParseError("more data rows than the declared N=" + std::to_string(n_expected),
                             line_no);
        if (static_cast<long>(fields.size()) != e.dim + 2)
            throw ParseError("row has " + std::to_string(fields.size()) + " columns, expected " +
                                 std::to_string(e.dim + 2),
                             line_no);
        Segment s;
        s.onset = parse_double_field(fields[0], line_no, 1);
        s.offset = parse_double_field(fields[1], line_no, 2);
        for (int j = 0; j < e.dim; ++j)
            e.vectors(rows_seen, j) = parse_double_field(fields[j + 2], line_no, j + 3);
        e.segments.push_back(s);
        ++rows_seen;
    });

    if (!header_seen) throw ParseError("missing embedding header", 1);
    if (rows_seen != n_expected)
        throw ParseError("found " + std::to_string(rows_seen) + " data rows, header declared " +
                             std::to_string(n_expected),
                         last_line);
    for (size_t i = 1; i < e.segments.size(); ++i)
        if (e.segments[i].onset < e.segments[i - 1].onset)
            throw ParseError("segments not sorted by onset",
                             static_cast<int>(i) + 2);
    return e;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw InvalidInputError("read failed: " + path);
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInputError("cannot open file for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInputError("write failed: " + path);
}

std::string write_embeddings(const SegmentEmbeddings& e) {
    std::string out = e.recording_id + " " + std::to_string(e.count()) + " " +
                      std::to_string(e.dim) + "\n";
    for (int i = 0; i < e.count(); ++i) {
        out += format_double(e.segments[i].onset) + " " + format_double(e.segments[i].offset);
        for (int j = 0; j < e.dim; ++j) out += " " + format_double(e.vectors(i, j));
        out += "\n";
    }
    return out;
}

} // namespace diar
