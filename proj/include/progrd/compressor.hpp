#pragma once

// Resource-bounded lossy encoding of melodies with programs.
//
// encode_melody draws r_s proposals of type t_n from the model, evaluates
// each distinct one once, and segments the melody by dynamic programming:
// every segment is a proposal whose output is laid over the following notes,
// scored by
//   log prior + log likelihood - (literal cost of the covered notes),
// i.e. the log-odds against spelling those notes as one-note literals.  Only
// sampled proposals are available, single-note ones included, so a note is
// reproduced exactly only when some proposal matches it; the exact literal of
// the next note is the fallback when no proposal is usable.  With
// literal_candidate the exact literal is always available at score 0.
// Finally leaves are deleted across all segments until the total
// description length is within r_l.
//
// encode_segment is the single-segment search: the best of a number of
// proposals for the next notes.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "progrd/corpus.hpp"
#include "progrd/deletion.hpp"

namespace progrd {

struct Budget {
  double r_l = 64.0;   // bits per melody
  long r_s = 32;       // proposals per melody

  void validate() const;  // throws ConfigError
};

struct NoiseModel {
  double epsilon = 0.05;

  void validate() const;  // throws ConfigError
  double log_match() const { return std::log1p(-epsilon); }
  double log_mismatch() const { return std::log(epsilon / 11.0); }
};

// Matches and mismatches over the overlap; observed notes past the end of a
// shorter production count as mismatches.
double log_likelihood(std::span<const Note> observed, const NoteSeq& produced, const NoiseModel& noise);

struct Segment {
  Term program;          // may contain holes after deletion
  std::size_t consumed = 0;
  double bits = 0.0;     // description length under the model
  bool literal = false;  // fallback literal rather than a search result
};

struct Encoding {
  std::string source_id;
  std::vector<Segment> segments;
  double rate_bits = 0.0;
  long proposals_used = 0;

  std::size_t length() const;
  std::vector<Term> programs() const;
  // Complete programs of non-literal segments.
  std::vector<Term> found_programs() const;
};

struct SearchOptions {
  NoiseModel noise;
  EvalLimits limits;
  bool literal_candidate = false;  // the exact next-note literal is always a candidate
};

struct SegmentResult {
  Term program;  // null when no proposal was valid
  std::size_t consumed = 0;
  double score = kNegInf;
  long used = 0;
};

// Literal coding cost per symbol index, as a log-probability of the literal
// program plus a matching note.
std::vector<double> literal_scores(const ProgramModel& model, const NoiseModel& noise);

SegmentResult encode_segment(std::span<const Note> remaining, const ProgramModel& model, long proposals,
                             Rng& rng, const SearchOptions& options = {});

Encoding encode_melody(const Melody& melody, const ProgramModel& model, const Budget& budget, Rng& rng,
                       const SearchOptions& options = {});

// Deletes leaves across the segments until the total is within max_bits.
void enforce_rate(Encoding& encoding, double max_bits, const ProgramModel& model);

NoteSeq decode(const Encoding& encoding, const ProgramModel& model, Rng& rng,
               const ReconstructOptions& options = {});

struct RateDistortion {
  double rate_bits = 0.0;
  double distortion = 0.0;  // mean Hamming distance over decodes
  double distortion_se = 0.0;
  int samples = 0;
};

RateDistortion evaluate_encoding(const Melody& melody, const Encoding& encoding, const ProgramModel& model,
                                 int n_decode_samples, std::uint64_t seed);

nlohmann::json encoding_to_json(const Encoding& encoding);
Encoding encoding_from_json(const nlohmann::json& doc);

}  // namespace progrd
