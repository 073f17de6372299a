#pragma once

// Melody corpora: parsing (text and JSON), preprocessing, splitting and a
// synthetic motif-based generator.
//
// Text format, one melody per line:
//   <id>: <tok>,<tok>,...
// where tok is an integer pitch or `p` for a pause.  Blank lines and lines
// starting with `#` are skipped.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "progrd/note.hpp"

namespace progrd {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Error with a 1-based source position.
class ParseError : public CorpusError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

enum class Provenance { Parsed, Synthetic };

struct Melody {
  std::string id;
  NoteSeq notes;
  friend bool operator==(const Melody&, const Melody&) = default;
};

struct Corpus {
  std::vector<Melody> melodies;
  Provenance provenance = Provenance::Parsed;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return melodies.size(); }
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// Before octave folding pitches are arbitrary non-negative integers.
inline constexpr int kRawPause = -1;

struct RawMelody {
  std::string id;
  std::vector<int> tokens;
};

struct RawCorpus {
  std::vector<RawMelody> melodies;
};

// Pitch classes only (0..11 and p).
Corpus parse_corpus(const std::string& text);
// Any non-negative integer pitch, e.g. MIDI numbers.
RawCorpus parse_raw_corpus(const std::string& text);

Corpus corpus_from_json(const nlohmann::json& doc);
RawCorpus raw_corpus_from_json(const nlohmann::json& doc);
nlohmann::json corpus_to_json(const Corpus& corpus);
std::string corpus_to_text(const Corpus& corpus);

RawCorpus to_raw(const Corpus& corpus);

struct PreprocessSummary {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t dropped_short = 0;
  std::size_t folded_pitches = 0;  // tokens that were >= 12
};

Corpus preprocess(const RawCorpus& raw, std::size_t min_len = 10,
                  PreprocessSummary* summary = nullptr);
Corpus preprocess(const Corpus& corpus, std::size_t min_len = 10,
                  PreprocessSummary* summary = nullptr);

// Disjoint uniform subsets, order within each part follows the shuffle.
std::pair<Corpus, Corpus> split(const Corpus& corpus, std::size_t n_train, std::size_t n_eval,
                                std::uint64_t seed);

struct SynthParams {
  std::size_t n = 100;
  std::size_t mean_len = 50;
  std::size_t motif_bank_size = 20;
  std::uint64_t seed = 0;
};

Corpus synth_corpus(const SynthParams& params);

// Positionwise mismatches plus the length difference.
std::size_t hamming_distortion(const NoteSeq& x, const NoteSeq& x_hat);

}  // namespace progrd
