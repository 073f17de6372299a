#include <cmath>
#include <set>

#include "doctest.h"
#include "progrd/corpus.hpp"
#include "progrd/rng.hpp"

using namespace progrd;

TEST_CASE("text corpus parsing") {
  Corpus c = parse_corpus("# header\nm1: 0,2,4,p,0,2,4,5,7,9\n\n");
  REQUIRE(c.size() == 1);
  CHECK(c.melodies[0].id == "m1");
  CHECK(c.melodies[0].notes.size() == 10);
  CHECK(c.melodies[0].notes[3].is_pause());
  CHECK(c.melodies[0].notes[9] == Note::pitch(9));

  CHECK(parse_corpus("a : 1, 2 ,3").melodies[0].notes.size() == 3);

  try {
    parse_corpus("m1: 0,13");
    FAIL("expected out-of-range error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 7);
  }
  try {
    parse_corpus("m1: 0,2\nm1: 4,5");
    FAIL("expected duplicate id error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_corpus(""), CorpusError);
  CHECK_THROWS_AS(parse_corpus("# only comments\n"), CorpusError);
  CHECK_THROWS_AS(parse_corpus("m1: 0,x"), ParseError);
  CHECK_THROWS_AS(parse_corpus("m1: 0,,2"), ParseError);
  CHECK_THROWS_AS(parse_corpus("m1 0,2"), ParseError);
  CHECK_THROWS_AS(parse_corpus("m1: 0 2"), ParseError);
}

TEST_CASE("raw parsing accepts MIDI pitches and preprocess folds them") {
  RawCorpus raw = parse_raw_corpus("a: 60,62,64,p,66,67,69,71,72,74\nb: 60,61,62,63,64,65,66,67,68");
  CHECK(raw.melodies[0].tokens[0] == 60);
  PreprocessSummary s;
  Corpus c = preprocess(raw, 10, &s);
  CHECK(s.input == 2);
  CHECK(s.kept == 1);
  CHECK(s.dropped_short == 1);  // 9 notes
  CHECK(s.folded_pitches == 9);
  REQUIRE(c.size() == 1);
  CHECK(c.melodies[0].notes[0] == Note::pitch(0));
  CHECK(c.melodies[0].notes[1] == Note::pitch(2));
  CHECK(c.melodies[0].notes[3].is_pause());
  CHECK(c.melodies[0].notes[9] == Note::pitch(2));  // 74

  RawCorpus fourteen = parse_raw_corpus("x: 14,14,14,14,14,14,14,14,14,14");
  CHECK(preprocess(fourteen).melodies[0].notes[0] == Note::pitch(2));
}

TEST_CASE("preprocess is idempotent") {
  Corpus c = synth_corpus({60, 14, 5, 3});
  for (std::size_t min_len : {5u, 10u, 14u, 20u}) {
    Corpus once = preprocess(c, min_len);
    CHECK(preprocess(once, min_len) == once);
  }
  CHECK(preprocess(c, 1000).size() == 0);
}

TEST_CASE("JSON round trip is lossless") {
  Corpus c = synth_corpus({20, 30, 4, 99});
  auto doc = corpus_to_json(c);
  CHECK(corpus_from_json(doc) == c);
  CHECK(corpus_from_json(nlohmann::json::parse(doc.dump())) == c);
  CHECK(parse_corpus(corpus_to_text(c)).melodies == c.melodies);

  auto bad = nlohmann::json::parse(R"({"melodies":[{"id":"a","notes":[0,12]}]})");
  CHECK_THROWS_AS(corpus_from_json(bad), CorpusError);
  CHECK(raw_corpus_from_json(bad).melodies[0].tokens[1] == 12);
  auto dup = nlohmann::json::parse(R"({"melodies":[{"id":"a","notes":[0]},{"id":"a","notes":[1]}]})");
  CHECK_THROWS_AS(corpus_from_json(dup), CorpusError);
  CHECK_THROWS_AS(corpus_from_json(nlohmann::json::parse("{}")), CorpusError);
}

TEST_CASE("split") {
  Corpus c = synth_corpus({100, 20, 5, 1});
  auto [train, eval] = split(c, 60, 30, 1);
  CHECK(train.size() == 60);
  CHECK(eval.size() == 30);
  std::set<std::string> ids;
  for (const auto& m : train.melodies) ids.insert(m.id);
  for (const auto& m : eval.melodies) CHECK(ids.count(m.id) == 0);
  auto again = split(c, 60, 30, 1);
  CHECK(again.first == train);
  CHECK(again.second == eval);
  CHECK(split(c, 60, 30, 2).first != train);
  CHECK_THROWS_AS(split(c, 80, 30, 1), CorpusError);
}

TEST_CASE("synthetic corpus") {
  Corpus c = synth_corpus({500, 50, 20, 7});
  REQUIRE(c.size() == 500);
  double total = 0;
  std::set<std::string> ids;
  for (const auto& m : c.melodies) {
    total += m.notes.size();
    CHECK(m.notes.size() >= 10);
    ids.insert(m.id);
    for (Note n : m.notes) CHECK((n.is_pause() || (n.pitch_class() >= 0 && n.pitch_class() < 12)));
  }
  CHECK(ids.size() == 500);
  const double mean = total / 500;
  CHECK(mean >= 45);
  CHECK(mean <= 55);
  CHECK(c.provenance == Provenance::Synthetic);
  CHECK(*c.seed == 7);

  Corpus one = synth_corpus({1, 10, 1, 3});
  REQUIRE(one.size() == 1);
  CHECK(one.melodies[0].notes.size() >= 10);

  CHECK(synth_corpus({500, 50, 20, 7}) == c);
  CHECK(synth_corpus({500, 50, 20, 8}) != c);

  for (std::size_t m : {12u, 30u, 100u}) {
    Corpus k = synth_corpus({200, m, 10, 5});
    double t = 0;
    for (const auto& mel : k.melodies) t += mel.notes.size();
    CHECK(std::abs(t / 200 - double(m)) <= 0.1 * double(m));
  }
  CHECK_THROWS_AS(synth_corpus({0, 50, 20, 7}), CorpusError);
  CHECK_THROWS_AS(synth_corpus({10, 9, 20, 7}), CorpusError);
}

TEST_CASE("hamming distortion") {
  auto seq = [](std::initializer_list<int> v) {
    NoteSeq s;
    for (int x : v) s.push_back(x < 0 ? Note::pause() : Note::pitch(x));
    return s;
  };
  CHECK(hamming_distortion(seq({0, 2, 4}), seq({0, 2, 4})) == 0);
  CHECK(hamming_distortion(seq({0, 2, 4}), seq({0, 2, 5})) == 1);
  CHECK(hamming_distortion(seq({0, 2, 4}), seq({0, 2})) == 1);
  CHECK(hamming_distortion(seq({0, 2}), seq({0, 2, 4, 5})) == 2);
  CHECK(hamming_distortion(seq({0, -1}), seq({0, 0})) == 1);
  CHECK(hamming_distortion({}, seq({1, 2})) == 2);

  // metric properties on random equal-length triples
  Rng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto len = static_cast<std::size_t>(rng.uniform_int(0, 12));
    NoteSeq a, b, c;
    for (std::size_t i = 0; i < len; ++i) {
      a.push_back(Note::from_index(rng.uniform_int(0, 3)));
      b.push_back(Note::from_index(rng.uniform_int(0, 3)));
      c.push_back(Note::from_index(rng.uniform_int(0, 3)));
    }
    const auto ab = hamming_distortion(a, b), bc = hamming_distortion(b, c), ac = hamming_distortion(a, c);
    CHECK(ab == hamming_distortion(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(ac <= ab + bc);
  }
}
