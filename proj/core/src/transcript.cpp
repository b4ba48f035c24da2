#include "heterosag/transcript.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

namespace heterosag {

std::uint64_t transcript_bits(const MaskedSegment& segment) {
  return static_cast<std::uint64_t>(segment.payload.size()) *
         std::bit_width(segment.modulus - 1);
}

void write_transcript(std::ostream& out, int round,
                      const std::vector<MaskedSegment>& segments) {
  for (const MaskedSegment& s : segments) {
    out << round << ' ' << s.user << ' ' << s.level << ' ' << s.coalition << ' '
        << s.modulus << ' ';
    for (std::size_t i = 0; i < s.payload.size(); ++i) {
      if (i) out << ',';
      out << s.payload[i];
    }
    out << '\n';
  }
}

std::vector<TranscriptRecord> read_transcript(std::istream& in) {
  std::vector<TranscriptRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TranscriptRecord rec;
    std::string payload;
    if (!(ls >> rec.round >> rec.segment.user >> rec.segment.level >>
          rec.segment.coalition >> rec.segment.modulus >> payload)) {
      throw std::runtime_error("read_transcript: malformed line: " + line);
    }
    std::istringstream ps(payload);
    std::string tok;
    while (std::getline(ps, tok, ',')) {
      rec.segment.payload.push_back(std::stoull(tok));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace heterosag
