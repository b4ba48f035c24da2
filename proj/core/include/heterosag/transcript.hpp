#pragma once

#include <iosfwd>
#include <vector>

#include "heterosag/protocol.hpp"

namespace heterosag {

/// Line format, one record per masked segment:
///   round user level coalition R p0,p1,...,pk
void write_transcript(std::ostream& out, int round,
                      const std::vector<MaskedSegment>& segments);

struct TranscriptRecord {
  int round = 0;
  MaskedSegment segment;
};

std::vector<TranscriptRecord> read_transcript(std::istream& in);

/// Bits a segment occupies on the wire: payload length times ceil(log2 R).
std::uint64_t transcript_bits(const MaskedSegment& segment);

}  // namespace heterosag
