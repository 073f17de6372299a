#include "progrd/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "progrd/rng.hpp"

namespace progrd {

using nlohmann::json;

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : CorpusError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  what),
      line_(line),
      column_(column) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

RawCorpus parse_lines(const std::string& text, int max_pitch) {
  RawCorpus out;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;

    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] == '#') continue;

    const std::size_t colon = line.find(':', i);
    if (colon == std::string::npos) throw ParseError("expected '<id>: <notes>'", line_no, i + 1);
    std::size_t id_end = colon;
    while (id_end > i && is_space(line[id_end - 1])) --id_end;
    if (id_end == i) throw ParseError("empty melody id", line_no, i + 1);
    RawMelody m{line.substr(i, id_end - i), {}};
    if (!ids.insert(m.id).second) throw ParseError("duplicate id '" + m.id + "'", line_no, i + 1);

    std::size_t p = colon + 1;
    while (true) {
      while (p < line.size() && is_space(line[p])) ++p;
      const std::size_t tok_start = p;
      while (p < line.size() && line[p] != ',' && !is_space(line[p])) ++p;
      const std::string tok = line.substr(tok_start, p - tok_start);
      while (p < line.size() && is_space(line[p])) ++p;
      if (tok.empty()) throw ParseError("missing note token", line_no, tok_start + 1);
      if (tok == "p") {
        m.tokens.push_back(kRawPause);
      } else {
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
          throw ParseError("malformed note token '" + tok + "'", line_no, tok_start + 1);
        }
        if (v < 0 || (max_pitch >= 0 && v > max_pitch)) {
          throw ParseError("pitch " + tok + " out of range", line_no, tok_start + 1);
        }
        m.tokens.push_back(v);
      }
      if (p == line.size()) break;
      if (line[p] != ',') throw ParseError("expected ','", line_no, p + 1);
      ++p;
    }
    out.melodies.push_back(std::move(m));
  }
  if (out.melodies.empty()) throw CorpusError("corpus contains no melodies");
  return out;
}

Note to_note(int token) { return token == kRawPause ? Note::pause() : Note::pitch(token); }

Corpus from_raw_strict(RawCorpus raw) {
  Corpus c;
  for (auto& m : raw.melodies) {
    Melody out{std::move(m.id), {}};
    for (int t : m.tokens) out.notes.push_back(to_note(t));
    c.melodies.push_back(std::move(out));
  }
  return c;
}

RawCorpus json_melodies(const json& doc, int max_pitch) {
  if (!doc.is_object() || !doc.contains("melodies") || !doc["melodies"].is_array()) {
    throw CorpusError("corpus JSON needs a 'melodies' array");
  }
  RawCorpus out;
  std::set<std::string> ids;
  std::size_t idx = 0;
  for (const auto& jm : doc["melodies"]) {
    const std::string where = "melodies[" + std::to_string(idx++) + "]";
    if (!jm.is_object() || !jm.contains("id") || !jm["id"].is_string() || !jm.contains("notes") ||
        !jm["notes"].is_array()) {
      throw CorpusError(where + ": expected {\"id\": str, \"notes\": [...]}");
    }
    RawMelody m{jm["id"].get<std::string>(), {}};
    if (!ids.insert(m.id).second) throw CorpusError(where + ": duplicate id '" + m.id + "'");
    for (const auto& n : jm["notes"]) {
      if (n.is_string() && n.get<std::string>() == "p") {
        m.tokens.push_back(kRawPause);
      } else if (n.is_number_integer() && n.get<long long>() >= 0 &&
                 (max_pitch < 0 || n.get<long long>() <= max_pitch)) {
        m.tokens.push_back(static_cast<int>(n.get<long long>()));
      } else {
        throw CorpusError(where + ": bad note " + n.dump());
      }
    }
    out.melodies.push_back(std::move(m));
  }
  if (out.melodies.empty()) throw CorpusError("corpus contains no melodies");
  return out;
}

}  // namespace

Corpus parse_corpus(const std::string& text) {
  return from_raw_strict(parse_lines(text, Note::kPitchClasses - 1));
}

RawCorpus parse_raw_corpus(const std::string& text) { return parse_lines(text, -1); }

Corpus corpus_from_json(const json& doc) {
  Corpus c = from_raw_strict(json_melodies(doc, Note::kPitchClasses - 1));
  if (doc.contains("provenance") && doc["provenance"] == "synthetic") {
    c.provenance = Provenance::Synthetic;
  }
  if (doc.contains("seed") && doc["seed"].is_number_unsigned()) c.seed = doc["seed"].get<std::uint64_t>();
  return c;
}

RawCorpus raw_corpus_from_json(const json& doc) { return json_melodies(doc, -1); }

json corpus_to_json(const Corpus& corpus) {
  json doc;
  doc["provenance"] = corpus.provenance == Provenance::Synthetic ? "synthetic" : "parsed";
  if (corpus.seed) doc["seed"] = *corpus.seed;
  doc["melodies"] = json::array();
  for (const auto& m : corpus.melodies) {
    json notes = json::array();
    for (Note n : m.notes) {
      if (n.is_pause()) {
        notes.push_back("p");
      } else {
        notes.push_back(n.pitch_class());
      }
    }
    doc["melodies"].push_back({{"id", m.id}, {"notes", std::move(notes)}});
  }
  return doc;
}

std::string corpus_to_text(const Corpus& corpus) {
  std::string out;
  for (const auto& m : corpus.melodies) {
    out += m.id + ": ";
    for (std::size_t i = 0; i < m.notes.size(); ++i) {
      if (i) out += ',';
      out += m.notes[i].str();
    }
    out += '\n';
  }
  return out;
}

RawCorpus to_raw(const Corpus& corpus) {
  RawCorpus raw;
  for (const auto& m : corpus.melodies) {
    RawMelody r{m.id, {}};
    for (Note n : m.notes) r.tokens.push_back(n.is_pause() ? kRawPause : n.pitch_class());
    raw.melodies.push_back(std::move(r));
  }
  return raw;
}

Corpus preprocess(const RawCorpus& raw, std::size_t min_len, PreprocessSummary* summary) {
  PreprocessSummary s;
  Corpus out;
  s.input = raw.melodies.size();
  for (const auto& m : raw.melodies) {
    if (m.tokens.size() < min_len) {
      ++s.dropped_short;
      continue;
    }
    Melody mel{m.id, {}};
    for (int t : m.tokens) {
      if (t >= Note::kPitchClasses) ++s.folded_pitches;
      mel.notes.push_back(t == kRawPause ? Note::pause() : Note::pitch(t % Note::kPitchClasses));
    }
    out.melodies.push_back(std::move(mel));
  }
  s.kept = out.melodies.size();
  if (summary) *summary = s;
  return out;
}

Corpus preprocess(const Corpus& corpus, std::size_t min_len, PreprocessSummary* summary) {
  Corpus out = preprocess(to_raw(corpus), min_len, summary);
  out.provenance = corpus.provenance;
  out.seed = corpus.seed;
  return out;
}

std::pair<Corpus, Corpus> split(const Corpus& corpus, std::size_t n_train, std::size_t n_eval,
                                std::uint64_t seed) {
  if (n_train + n_eval > corpus.size()) {
    throw CorpusError("split needs " + std::to_string(n_train + n_eval) + " melodies, corpus has " +
                      std::to_string(corpus.size()));
  }
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, "split"));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform(i)]);
  Corpus train{{}, corpus.provenance, corpus.seed};
  Corpus eval{{}, corpus.provenance, corpus.seed};
  for (std::size_t i = 0; i < n_train; ++i) train.melodies.push_back(corpus.melodies[order[i]]);
  for (std::size_t i = n_train; i < n_train + n_eval; ++i) eval.melodies.push_back(corpus.melodies[order[i]]);
  return {std::move(train), std::move(eval)};
}

namespace {

constexpr int kScale[] = {0, 2, 4, 5, 7, 9, 11};

NoteSeq make_motif(Rng& rng) {
  const int len = rng.uniform_int(3, 6);
  NoteSeq m;
  int degree = rng.uniform_int(0, 6);
  for (int i = 0; i < len; ++i) {
    m.push_back(Note::pitch(kScale[degree]));
    degree = std::clamp(degree + rng.uniform_int(-2, 2), 0, 6);
  }
  return m;
}

NoteSeq transposed(NoteSeq s, int k) {
  for (auto& n : s) n = n.shifted(k);
  return s;
}

}  // namespace

Corpus synth_corpus(const SynthParams& params) {
  if (params.n < 1 || params.mean_len < 10 || params.motif_bank_size < 1) {
    throw CorpusError("synth_corpus needs n >= 1, mean_len >= 10, motif_bank_size >= 1");
  }
  Rng bank_rng(derive_seed(params.seed, "synth.bank"));
  std::vector<NoteSeq> bank;
  for (std::size_t i = 0; i < params.motif_bank_size; ++i) bank.push_back(make_motif(bank_rng));

  Corpus out;
  out.provenance = Provenance::Synthetic;
  out.seed = params.seed;
  const auto mean = static_cast<double>(params.mean_len);
  const int lo = static_cast<int>(std::ceil(0.6 * mean));
  const int hi = static_cast<int>(std::floor(1.4 * mean));
  for (std::size_t i = 0; i < params.n; ++i) {
    Rng rng(derive_seed(params.seed, "synth.melody", i));
    const auto len = static_cast<std::size_t>(std::max(10, rng.uniform_int(lo, hi)));
    NoteSeq notes;
    while (notes.size() < len) {
      const double u = rng.uniform01();
      NoteSeq seg;
      if (u < 0.45) {
        seg = bank[rng.uniform(bank.size())];
        if (rng.bernoulli(0.3)) seg = transposed(std::move(seg), rng.uniform_int(1, 11));
        if (rng.bernoulli(0.25)) seg.insert(seg.end(), seg.begin(), seg.end());
      } else if (u < 0.65) {
        seg.assign(static_cast<std::size_t>(rng.uniform_int(2, 5)), Note::pitch(kScale[rng.uniform(7)]));
      } else if (u < 0.9) {
        Note n = Note::pitch(rng.uniform_int(0, 11));
        const int step = rng.bernoulli(0.5) ? 1 : -1;
        const int run = rng.uniform_int(3, 6);
        for (int k = 0; k < run; ++k, n = n.shifted(step)) seg.push_back(n);
      } else {
        seg.push_back(Note::pause());
      }
      notes.insert(notes.end(), seg.begin(), seg.end());
    }
    notes.resize(len);
    out.melodies.push_back({"s" + std::to_string(i), std::move(notes)});
  }
  return out;
}

std::size_t hamming_distortion(const NoteSeq& x, const NoteSeq& x_hat) {
  const std::size_t common = std::min(x.size(), x_hat.size());
  std::size_t d = std::max(x.size(), x_hat.size()) - common;
  for (std::size_t i = 0; i < common; ++i) d += x[i] != x_hat[i];
  return d;
}

}  // namespace progrd
