#include "progrd/compressor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace progrd {

using nlohmann::json;

void Budget::validate() const {
  std::vector<std::string> errs;
  if (!(r_l > 0.0)) errs.push_back("r_l must be > 0 bits");
  if (r_s < 1) errs.push_back("r_s must be >= 1");
  if (!errs.empty()) {
    std::string msg = "invalid budget:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
}

void NoiseModel::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("noise epsilon must lie in (0, 1)");
}

double log_likelihood(std::span<const Note> observed, const NoteSeq& produced, const NoiseModel& noise) {
  const std::size_t overlap = std::min(observed.size(), produced.size());
  std::size_t matches = 0;
  for (std::size_t i = 0; i < overlap; ++i) matches += observed[i] == produced[i];
  const std::size_t mismatches = observed.size() - matches;
  double ll = 0.0;
  if (matches) ll += static_cast<double>(matches) * noise.log_match();
  if (mismatches) ll += static_cast<double>(mismatches) * noise.log_mismatch();
  return ll;
}

std::size_t Encoding::length() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.consumed;
  return n;
}

std::vector<Term> Encoding::programs() const {
  std::vector<Term> out;
  for (const auto& s : segments) out.push_back(s.program);
  return out;
}

std::vector<Term> Encoding::found_programs() const {
  std::vector<Term> out;
  for (const auto& s : segments) {
    if (!s.literal && s.program->complete()) out.push_back(s.program);
  }
  return out;
}

std::vector<double> literal_scores(const ProgramModel& model, const NoiseModel& noise) {
  std::vector<double> out;
  for (int i = 0; i < Note::kAlphabetSize; ++i) {
    out.push_back(model.log_prior(Node::note(Note::from_index(i)), kNoteT) + noise.log_match());
  }
  return out;
}

namespace {

struct Candidate {
  Term program;
  std::size_t consumed = 0;
  double score = kNegInf;
  double log_prior = kNegInf;

  bool better_than(const Candidate& o) const {
    if (!o.program) return true;
    if (score != o.score) return score > o.score;
    if (consumed != o.consumed) return consumed > o.consumed;
    return log_prior > o.log_prior;
  }
};

SegmentResult search(std::span<const Note> remaining, const ProgramModel& model, long proposals, Rng& rng,
                     const SearchOptions& options, const std::vector<double>& literal) {
  // prefix sums of literal costs
  std::vector<double> lit_prefix(remaining.size() + 1, 0.0);
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    lit_prefix[i + 1] = lit_prefix[i] + literal[static_cast<std::size_t>(remaining[i].index())];
  }
  Candidate best;
  if (options.literal_candidate) {
    Term lit = Node::note(remaining[0]);
    best = {lit, 1, 0.0, model.log_prior(lit, kNoteT)};
  }
  SegmentResult res;
  for (long i = 0; i < proposals; ++i) {
    Term t = model.sample(kNoteT, rng);
    ++res.used;
    NoteSeq out;
    try {
      out = evaluate(t, {}, options.limits);
    } catch (const EvalError&) {
      continue;
    }
    if (out.empty()) continue;
    Candidate c;
    c.program = t;
    c.consumed = std::min(out.size(), remaining.size());
    c.log_prior = model.log_prior(t, kNoteT);
    c.score = c.log_prior + log_likelihood(remaining.first(c.consumed), out, options.noise) -
              lit_prefix[c.consumed];
    if (c.better_than(best)) best = std::move(c);
  }
  res.program = best.program;
  res.consumed = best.consumed;
  res.score = best.score;
  return res;
}

}  // namespace

SegmentResult encode_segment(std::span<const Note> remaining, const ProgramModel& model, long proposals,
                             Rng& rng, const SearchOptions& options) {
  if (remaining.empty()) throw std::invalid_argument("encode_segment needs a non-empty remainder");
  if (proposals < 1) throw std::invalid_argument("encode_segment needs at least one proposal");
  return search(remaining, model, proposals, rng, options, literal_scores(model, options.noise));
}

namespace {

double total_bits(const Encoding& enc) {
  double t = 0.0;
  for (const auto& s : enc.segments) t += s.bits;
  return t;
}

}  // namespace

Encoding encode_melody(const Melody& melody, const ProgramModel& model, const Budget& budget, Rng& rng,
                       const SearchOptions& options) {
  budget.validate();
  options.noise.validate();
  const std::vector<double> literal = literal_scores(model, options.noise);
  const std::span<const Note> notes(melody.notes);
  const std::size_t T = notes.size();
  Encoding enc;
  enc.source_id = melody.id;

  struct Proposal {
    Term program;
    NoteSeq output;
    double log_prior;
  };
  std::vector<Proposal> pool;
  std::unordered_set<std::string> seen;
  for (long i = 0; i < budget.r_s; ++i) {
    Term t = model.sample(kNoteT, rng);
    ++enc.proposals_used;
    if ((options.literal_candidate && t->is_leaf()) || !seen.insert(t->text()).second) continue;
    try {
      NoteSeq out = evaluate(t, {}, options.limits);
      if (!out.empty()) pool.push_back({t, std::move(out), model.log_prior(t, kNoteT)});
    } catch (const EvalError&) {
    }
  }

  std::vector<double> lit_prefix(T + 1, 0.0);
  for (std::size_t i = 0; i < T; ++i) {
    lit_prefix[i + 1] = lit_prefix[i] + literal[static_cast<std::size_t>(notes[i].index())];
  }
  // best[i]: best total score of notes[i..]; choice -1 is the literal, which
  // is free unless only sampled programs may be used.
  const bool free_literal = options.literal_candidate || pool.empty();
  std::vector<double> best(T + 1, 0.0);
  std::vector<long> choice(T, -1);
  for (std::size_t i = T; i-- > 0;) {
    best[i] = free_literal ? best[i + 1] : kNegInf;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const auto& p = pool[k];
      const std::size_t n = std::min(p.output.size(), T - i);
      const double score = p.log_prior + log_likelihood(notes.subspan(i, n), p.output, options.noise) -
                           (lit_prefix[i + n] - lit_prefix[i]);
      if (score + best[i + n] > best[i]) {
        best[i] = score + best[i + n];
        choice[i] = static_cast<long>(k);
      }
    }
  }
  for (std::size_t i = 0; i < T;) {
    Segment seg;
    if (choice[i] < 0) {
      seg.program = Node::note(notes[i]);
      seg.consumed = 1;
      seg.literal = true;
    } else {
      const auto& p = pool[static_cast<std::size_t>(choice[i])];
      seg.program = p.program;
      seg.consumed = std::min(p.output.size(), T - i);
    }
    seg.bits = description_length(seg.program, kNoteT, model);
    i += seg.consumed;
    enc.segments.push_back(std::move(seg));
  }
  enc.rate_bits = total_bits(enc);
  enforce_rate(enc, budget.r_l, model);
  return enc;
}

void enforce_rate(Encoding& enc, double max_bits, const ProgramModel& model) {
  enc.rate_bits = total_bits(enc);
  if (enc.rate_bits <= max_bits) return;

  struct LeafRef {
    std::size_t segment;
    int position;
    double log_prob;
  };
  std::vector<LeafRef> refs;
  for (std::size_t s = 0; s < enc.segments.size(); ++s) {
    const Term& p = enc.segments[s].program;
    const auto pos = leaf_positions(p);
    const auto lp = model.leaf_log_probs(p, kNoteT);
    for (std::size_t k = 0; k < pos.size(); ++k) refs.push_back({s, pos[k], lp[k]});
  }
  // equally likely leaves: the one in the shorter segment loses fewer notes
  std::stable_sort(refs.begin(), refs.end(), [&enc](const LeafRef& a, const LeafRef& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    return enc.segments[a.segment].consumed < enc.segments[b.segment].consumed;
  });

  // A deletion can raise the cost of a library-adapted program (the cached
  // path needs the complete program), so only deletions that free bits count.
  for (const auto& r : refs) {
    Segment& seg = enc.segments[r.segment];
    const Node& leaf = node_at(seg.program, r.position);
    if (leaf.is_hole()) continue;
    Term next = replace_at(seg.program, r.position, Node::hole(*leaf.type()));
    const double b = description_length(next, kNoteT, model);
    if (b >= seg.bits) continue;
    seg.program = std::move(next);
    seg.bits = b;
    enc.rate_bits = total_bits(enc);
    if (enc.rate_bits <= max_bits) return;
  }

  // Collapse hole-only application nodes, or whole segments, freeing the
  // fewest bits first.
  while (enc.rate_bits > max_bits) {
    std::size_t best_seg = 0;
    Term best;
    double best_bits = 0.0, best_freed = 0.0;
    for (std::size_t s = 0; s < enc.segments.size(); ++s) {
      const Segment& seg = enc.segments[s];
      std::vector<int> nodes = collapsible_nodes(seg.program);
      if (!seg.program->is_hole()) nodes.push_back(0);
      for (int c : nodes) {
        Term next = replace_at(seg.program, c, Node::hole(*node_at(seg.program, c).type()));
        const double b = description_length(next, kNoteT, model);
        const double freed = seg.bits - b;
        if (freed <= 0.0) continue;
        if (!best || freed < best_freed) {
          best = next;
          best_seg = s;
          best_bits = b;
          best_freed = freed;
        }
      }
    }
    if (!best) break;
    enc.segments[best_seg].program = best;
    enc.segments[best_seg].bits = best_bits;
    enc.rate_bits = total_bits(enc);
  }
}

NoteSeq decode(const Encoding& encoding, const ProgramModel& model, Rng& rng, const ReconstructOptions& options) {
  NoteSeq out;
  for (const auto& seg : encoding.segments) {
    NoteSeq part;
    try {
      part = seg.program->complete() ? evaluate(seg.program, {}, options.limits)
                                     : reconstruct(seg.program, model, rng, options);
    } catch (const EvalError&) {
      part.clear();
    }
    // a short reconstruction is continued with fresh prior draws
    for (int tries = 0; part.size() < seg.consumed && tries < options.max_retries; ++tries) {
      try {
        NoteSeq more = reconstruct(Node::hole(kNoteT), model, rng, options);
        part.insert(part.end(), more.begin(), more.end());
      } catch (const EvalError&) {
      }
    }
    part.resize(seg.consumed, Note::pause());
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

RateDistortion evaluate_encoding(const Melody& melody, const Encoding& encoding, const ProgramModel& model,
                                 int n_decode_samples, std::uint64_t seed) {
  RateDistortion rd;
  rd.rate_bits = encoding.rate_bits;
  bool complete = true;
  for (const auto& s : encoding.segments) complete = complete && s.program->complete();
  const int n = complete ? 1 : std::max(1, n_decode_samples);
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    Rng rng(derive_seed(seed, "decode", static_cast<std::uint64_t>(k)));
    const auto d = static_cast<double>(hamming_distortion(melody.notes, decode(encoding, model, rng)));
    sum += d;
    sum_sq += d * d;
  }
  rd.samples = n;
  rd.distortion = sum / n;
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - n * rd.distortion * rd.distortion) / (n - 1));
    rd.distortion_se = std::sqrt(var / n);
  }
  return rd;
}

json encoding_to_json(const Encoding& encoding) {
  json segs = json::array();
  for (const auto& s : encoding.segments) {
    segs.push_back({{"program", s.program->text()}, {"consumed", s.consumed}, {"bits", s.bits},
                    {"literal", s.literal}});
  }
  return {{"source_id", encoding.source_id},
          {"rate_bits", encoding.rate_bits},
          {"proposals_used", encoding.proposals_used},
          {"segments", std::move(segs)}};
}

Encoding encoding_from_json(const json& doc) {
  Encoding enc;
  enc.source_id = doc.at("source_id").get<std::string>();
  enc.rate_bits = doc.at("rate_bits").get<double>();
  enc.proposals_used = doc.at("proposals_used").get<long>();
  for (const auto& s : doc.at("segments")) {
    enc.segments.push_back({parse_term(s.at("program").get<std::string>()), s.at("consumed").get<std::size_t>(),
                            s.at("bits").get<double>(), s.at("literal").get<bool>()});
  }
  return enc;
}

}  // namespace progrd
