#pragma once

// Sequential library learning: each melody is encoded under the current
// library and every program of its encoding is cached.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "progrd/adaptor.hpp"
#include "progrd/compressor.hpp"
#include "progrd/corpus.hpp"

namespace progrd {

struct LearnerConfig {
  const Grammar* grammar = nullptr;
  PYParams py;
  Budget budget{1e9, 128};  // used while training
  SearchOptions search;
};

std::shared_ptr<const Library> train_step(std::shared_ptr<const Library> library, const Melody& melody,
                                          const LearnerConfig& learner, std::uint64_t seed);

struct TrainingRun {
  std::shared_ptr<const Library> library;
  std::vector<Encoding> encodings;  // in training order
};

// Trains on the melodies in the given order; melody i uses the seed
// derive_seed(seed, "train", id).
TrainingRun train_sequence(const std::vector<const Melody*>& order, const LearnerConfig& learner,
                           std::uint64_t seed, std::shared_ptr<const Library> start = nullptr);
TrainingRun train_corpus(const Corpus& corpus, std::size_t n_train, const LearnerConfig& learner,
                         std::uint64_t seed);

}  // namespace progrd
