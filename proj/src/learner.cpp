#include "progrd/learner.hpp"

namespace progrd {

namespace {

Encoding encode_step(std::shared_ptr<const Library> library, const Melody& melody, const LearnerConfig& learner,
                     std::uint64_t seed) {
  if (!learner.grammar) throw ConfigError("learner needs a grammar");
  AdaptorModel ag(*learner.grammar, std::move(library), learner.py);
  Rng rng(seed);
  return encode_melody(melody, ag, learner.budget, rng, learner.search);
}

}  // namespace

std::shared_ptr<const Library> train_step(std::shared_ptr<const Library> library, const Melody& melody,
                                          const LearnerConfig& learner, std::uint64_t seed) {
  Encoding e = encode_step(library, melody, learner, seed);
  return std::make_shared<const Library>(update_library(*library, e.programs()));
}

TrainingRun train_sequence(const std::vector<const Melody*>& order, const LearnerConfig& learner,
                           std::uint64_t seed, std::shared_ptr<const Library> start) {
  TrainingRun run;
  run.library = start ? std::move(start) : std::make_shared<const Library>();
  for (const Melody* m : order) {
    Encoding e = encode_step(run.library, *m, learner, derive_seed(seed, "train", m->id));
    run.library = std::make_shared<const Library>(update_library(*run.library, e.programs()));
    run.encodings.push_back(std::move(e));
  }
  return run;
}

TrainingRun train_corpus(const Corpus& corpus, std::size_t n_train, const LearnerConfig& learner,
                         std::uint64_t seed) {
  if (n_train > corpus.size()) {
    throw CorpusError("training needs " + std::to_string(n_train) + " melodies, corpus has " +
                      std::to_string(corpus.size()));
  }
  std::vector<const Melody*> order;
  for (std::size_t i = 0; i < n_train; ++i) order.push_back(&corpus.melodies[i]);
  return train_sequence(order, learner, seed);
}

}  // namespace progrd
