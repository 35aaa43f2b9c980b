#pragma once
#include <string>
#include <vector>

#include "diar/types.hpp"

namespace diar {

// On-disk formats:
//   RTTM line:      SPEAKER <rec> 1 <onset> <dur> <NA> <NA> <spk> <NA> <NA>
//   SAD line:       <rec> <onset> <offset>
//   embedding file: header "<rec> <N> <d>", then N rows "onset offset v1 ... vd"
// All parsers reject malformed numeric fields with a ParseError carrying the
// line number; none of them may crash on arbitrary bytes.

/// Parse RTTM text. SPEAKER lines become Turns (onset = field 4, duration =
/// field 5, speaker = field 8); lines of other types are ignored.
RecordingTurns parse_rttm(const std::string& text);

/// Serialize turns as RTTM, sorted by (recording_id, onset, speaker), times
/// with exactly 3 decimal places. Byte-deterministic.
std::string emit_rttm(const std::vector<Turn>& turns);

/// Flatten grouped turns in recording order; convenience for emit_rttm.
std::vector<Turn> flatten(const RecordingTurns& grouped);

/// Parse SAD text. Per recording, regions are sorted by onset and
/// overlapping-or-abutting regions are merged.
RecordingRegions parse_sad(const std::string& text);

std::string emit_sad(const RecordingRegions& regions);

/// Parse a segment-embedding file. Vectors are not normalized on read.
SegmentEmbeddings read_embeddings(const std::string& text);

/// Serialize embeddings; floats printed with shortest exact round-trip
/// representation, so write(read(x)) == x byte for byte on valid files.
std::string write_embeddings(const SegmentEmbeddings& e);

/// Shortest decimal representation that parses back to exactly `v`.
std::string format_double(double v);

/// Whole-file read; throws InvalidInputError naming the path on failure.
std::string read_text_file(const std::string& path);

/// Whole-file write (truncating); throws InvalidInputError on failure.
void write_text_file(const std::string& path, const std::string& content);

} // namespace diar
