#include <cmath>
#include <set>

#include "doctest.h"
#include "progrd/pid.hpp"

using namespace progrd;

namespace {

// p(z1, z2, x) from a deterministic rule over uniform binary (z1, z2)
JointTable from_rule(std::size_t targets, int (*rule)(int, int)) {
  JointTable j(targets);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) j.at(a, b, static_cast<std::size_t>(rule(a, b))) += 0.25;
  }
  return j;
}

JointTable random_table(Rng& rng, std::size_t targets) {
  std::vector<double> p(4 * targets);
  double total = 0;
  for (auto& v : p) {
    // some exact zeros to exercise the 0 log 0 paths
    v = rng.bernoulli(0.2) ? 0.0 : rng.uniform01();
    total += v;
  }
  if (total == 0) {
    p[0] = total = 1;
  }
  for (auto& v : p) v /= total;
  JointTable j(targets);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (std::size_t x = 0; x < targets; ++x) j.at(a, b, x) = p[(static_cast<std::size_t>(a) * 2 + b) * targets + x];
    }
  }
  return j;
}

NoteSeq seq(std::initializer_list<int> v) {
  NoteSeq s;
  for (int x : v) s.push_back(x < 0 ? Note::pause() : Note::pitch(x));
  return s;
}

Corpus corpus_of(std::initializer_list<NoteSeq> ms) {
  Corpus c;
  int i = 0;
  for (const auto& m : ms) c.melodies.push_back({"m" + std::to_string(i++), m});
  return c;
}

}  // namespace

TEST_CASE("mutual information examples") {
  JointTable indep(2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (std::size_t x = 0; x < 2; ++x) indep.at(a, b, x) = 0.125;
    }
  }
  CHECK(mutual_information(indep, Sources::Both) == doctest::Approx(0.0).epsilon(1e-15));

  JointTable copy = from_rule(2, [](int a, int) { return a; });
  CHECK(mutual_information(copy, Sources::First) == 1.0);
  CHECK(mutual_information(copy, Sources::Second) == 0.0);

  JointTable x = from_rule(2, [](int a, int b) { return a ^ b; });
  CHECK(mutual_information(x, Sources::Both) == 1.0);
  CHECK(mutual_information(x, Sources::First) == 0.0);
  CHECK(mutual_information(x, Sources::Second) == 0.0);

  JointTable bad(2);
  bad.at(0, 0, 0) = 0.5;
  CHECK_THROWS_AS(mutual_information(bad, Sources::Both), PidError);
  CHECK_THROWS_AS(JointTable(2, {1.0, 0.5}), PidError);
}

TEST_CASE("PID calibration tables") {
  PIDResult x = pid_decompose(from_rule(2, [](int a, int b) { return a ^ b; }));
  CHECK(x.redundancy == 0.0);
  CHECK(x.unique1 == 0.0);
  CHECK(x.unique2 == 0.0);
  CHECK(x.synergy == 1.0);

  // Z1 = Z2 = X
  JointTable same(2);
  same.at(0, 0, 0) = 0.5;
  same.at(1, 1, 1) = 0.5;
  PIDResult c = pid_decompose(same);
  CHECK(c.redundancy == 1.0);
  CHECK(c.unique1 == 0.0);
  CHECK(c.unique2 == 0.0);
  CHECK(c.synergy == 0.0);

  // Z1 = X, Z2 independent noise
  PIDResult u = pid_decompose(from_rule(2, [](int a, int) { return a; }));
  CHECK(u.unique1 == 1.0);
  CHECK(u.redundancy == 0.0);
  CHECK(u.unique2 == 0.0);
  CHECK(u.synergy == 0.0);
}

TEST_CASE("PID identity, non-negativity and symmetry on random tables") {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, 6));
    JointTable j = random_table(rng, k);
    PIDResult r = pid_decompose(j);
    CHECK(std::abs(r.redundancy + r.unique1 + r.unique2 + r.synergy - r.mutual) < 1e-9);
    CHECK(r.redundancy >= -1e-9);
    CHECK(r.unique1 >= -1e-9);
    CHECK(r.unique2 >= -1e-9);
    CHECK(r.synergy >= -1e-9);

    JointTable swapped(k);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (std::size_t x = 0; x < k; ++x) swapped.at(b, a, x) = j.at(a, b, x);
      }
    }
    PIDResult s = pid_decompose(swapped);
    CHECK(s.redundancy == doctest::Approx(r.redundancy).epsilon(1e-12));
    CHECK(s.synergy == doctest::Approx(r.synergy).epsilon(1e-12));
    CHECK(s.unique1 == doctest::Approx(r.unique2).epsilon(1e-12));
    CHECK(s.unique2 == doctest::Approx(r.unique1).epsilon(1e-12));
  }
}

TEST_CASE("program window features") {
  NoteSeq melody = seq({0, 2, 4, 5, 7, 9, 11, 0});
  auto f = program_feature(seq({4, 5, 7}), melody);
  CHECK(f.size() == 6);
  CHECK(f[2] == 1);
  CHECK(f[0] == 0);
  // a pitch class absent from the melody never reaches 80% over 5 notes
  for (auto v : program_feature(seq({1, 1, 1, 1, 1}), melody)) CHECK(v == 0);
  FeatureParams whole;
  whole.stride = melody.size();
  CHECK(program_feature(seq({0, 2}), melody, whole).size() == 1);
  FeatureParams two;
  two.stride = 2;
  CHECK(program_feature(seq({0, 2}), melody, two).size() == 4);
  // longer than the melody: one sample at the best alignment
  auto longer = program_feature(seq({3, 3, 0, 2, 4, 5, 7, 9, 11, 0}), melody);
  REQUIRE(longer.size() == 1);
  CHECK(longer[0] == 1);
  CHECK_THROWS_AS(program_feature({}, melody), PidError);
  FeatureParams bad;
  bad.threshold = 0;
  CHECK_THROWS_AS(program_feature(seq({0}), melody, bad), ConfigError);
}

TEST_CASE("library synergy") {
  // each program matches half of the melodies; together they identify all four
  Corpus toy = corpus_of({seq({0, 0, 7, 7}), seq({0, 0, 1, 1}), seq({2, 2, 7, 7}), seq({2, 2, 1, 1})});
  Library lib;
  lib.mutable_cache(kNoteT).add(parse_term("[[rep, n0], c4]"));
  lib.mutable_cache(kNoteT).add(parse_term("[[rep, n7], c4]"));
  SynergyOptions opt;
  opt.features.threshold = 0.5;
  opt.features.stride = 4;
  opt.n_pairs = 10;
  SynergyEstimate s = library_synergy(lib, toy, 1, opt);
  CHECK(s.programs == 2);
  CHECK(s.synergy == doctest::Approx(1.0).epsilon(1e-12));

  // direct decomposition: no unique information at all
  std::vector<std::vector<std::uint8_t>> f0, f7;
  for (const auto& m : toy.melodies) {
    f0.push_back(program_feature(seq({0, 0, 0, 0}), m.notes, opt.features));
    f7.push_back(program_feature(seq({7, 7, 7, 7}), m.notes, opt.features));
  }
  PIDResult r = pid_decompose(joint_from_features(f0, f7));
  CHECK(r.synergy > r.unique1);
  CHECK(r.synergy > r.unique2);

  // two programs with the same output are purely redundant
  Library twins;
  twins.mutable_cache(kNoteT).add(parse_term("[up, n4]"));
  twins.mutable_cache(kNoteT).add(parse_term("[down, n6]"));
  Corpus c = synth_corpus({10, 20, 4, 3});
  CHECK(std::abs(library_synergy(twins, c, 2).synergy) < 1e-12);

  Library single;
  single.mutable_cache(kNoteT).add(parse_term("[up, n4]"));
  single.mutable_cache(kNoteT).add(parse_term("n3"));
  CHECK(library_synergy(single, c, 2).degenerate);
  CHECK_THROWS_AS(library_synergy(single, corpus_of({seq({0})}), 2), PidError);
}

TEST_CASE("synergy estimator consistency") {
  Library lib;
  const char* progs[] = {"[[rep, n0], c2]", "[[rep, n4], c3]", "[[[iter, up], n2], c3]",
                         "[[[iter, down], n7], c3]", "[up, n4]", "[[concat, n0], n2]",
                         "[[rep, n7], c2]", "[[[iter, up], n9], c2]"};
  for (const char* p : progs) lib.mutable_cache(kNoteT).add(parse_term(p));
  Corpus c = synth_corpus({12, 20, 4, 9});
  SynergyOptions small, big;
  small.n_pairs = 200;
  big.n_pairs = 2000;
  SynergyEstimate a = library_synergy(lib, c, 5, small);
  SynergyEstimate b = library_synergy(lib, c, 6, big);
  CHECK(a.programs == 8);
  CHECK(a.synergy > 0);
  CHECK(std::abs(a.synergy - b.synergy) < 3 * std::hypot(a.std_error, b.std_error));
  CHECK(library_synergy(lib, c, 5, small).synergy == a.synergy);
}

TEST_CASE("greedy synergy curriculum") {
  static const Grammar g{GrammarParams{}};
  LearnerConfig learner;
  learner.grammar = &g;
  learner.budget = {1e9, 32};
  Corpus c = synth_corpus({6, 20, 4, 21});
  SynergyOptions opt;
  opt.n_pairs = 50;
  SynergyCurriculum a = build_synergistic_curriculum(c, learner, 3, opt, 1);
  REQUIRE(a.steps.size() == 6);
  std::set<std::string> ids;
  for (const auto& s : a.steps) ids.insert(s.melody_id);
  CHECK(ids.size() == 6);
  SynergyCurriculum b = build_synergistic_curriculum(c, learner, 3, opt, 4);
  CHECK(curriculum_to_csv(a) == curriculum_to_csv(b));
  CHECK(*a.library == *b.library);

  std::vector<std::string> order = ordering_from_csv(curriculum_to_csv(a));
  REQUIRE(order.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(order[i] == a.steps[i].melody_id);

  Corpus two = synth_corpus({2, 20, 4, 22});
  SynergyCurriculum t = build_synergistic_curriculum(two, learner, 1, opt);
  CHECK(t.steps.size() == 2);
  CHECK_THROWS_AS(build_synergistic_curriculum(synth_corpus({1, 20, 4, 22}), learner, 1, opt), PidError);
  CHECK_THROWS_AS(ordering_from_csv("step,id\n0,a\n"), PidError);
}
