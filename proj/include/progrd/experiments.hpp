#pragma once

// Simulation suites: rate-distortion sweeps, one-shot generalization,
// subprogram uniqueness, curriculum effects, random-library baselines and
// synergy curricula.  Distortions are Hamming distances divided by melody
// length.  Every job derives its seed from the root seed and its own keys,
// so tables do not depend on the number of worker threads.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "progrd/learner.hpp"
#include "progrd/pid.hpp"
#include "progrd/stats.hpp"

namespace progrd {

class ExperimentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ModelKind { PCFG, AG };
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);  // "pcfg" or "ag"

struct ExperimentConfig {
  const Grammar* grammar = nullptr;
  PYParams py;
  SearchOptions search;
  Budget train_budget{1e9, 128};
  int decode_samples = 30;
  int jobs = 1;

  LearnerConfig learner() const;
};

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};
Summary summarize(const std::vector<double>& values);

// Normalized distortion of one melody under a model and budget.
double melody_distortion(const Melody& melody, const ProgramModel& model, const Budget& budget,
                         std::uint64_t seed, const ExperimentConfig& config);

struct RDPoint {
  ModelKind model = ModelKind::PCFG;
  double r_l = 0.0;
  long r_s = 0;
  std::size_t n_train = 0;
  int seed = 0;
  double mean_distortion = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

struct RDGrid {
  std::vector<double> r_l = {8, 16, 32, 64, 128};
  std::vector<long> r_s = {8, 32, 128};
  std::vector<std::size_t> n_train = {0};
  int n_seeds = 10;

  void validate() const;  // throws ConfigError
};

// The AG library for (n_train, seed) is trained on the first n_train
// melodies of `train`; the PCFG ignores training data.  Each melody's
// encode and decode seeds depend only on (root, seed, melody id), so cells
// share random numbers.
std::vector<RDPoint> rd_sweep(const Corpus& train, const Corpus& eval, ModelKind model, const RDGrid& grid,
                              std::uint64_t root_seed, const ExperimentConfig& config);

// Normalized distortion of held-out melodies encoded under a frozen model at
// a fixed budget and decoded as in the rate-distortion sweeps.
std::vector<double> generalization_errors(const ProgramModel& model, const Corpus& eval, const Budget& budget,
                                          std::uint64_t seed, const ExperimentConfig& config);
Summary generalization_error(const ProgramModel& model, const Corpus& eval, const Budget& budget, std::uint64_t seed,
                             const ExperimentConfig& config);

struct GeneralizationRow {
  ModelKind model = ModelKind::PCFG;
  std::size_t n_train = 0;
  double r_l = 0.0;
  long r_s = 0;
  int seed = 0;
  Summary error;
};

std::vector<GeneralizationRow> generalization_sweep(const Corpus& train, const Corpus& eval, ModelKind model,
                                                    const std::vector<std::size_t>& n_train,
                                                    double r_l, const std::vector<long>& r_s, int n_seeds,
                                                    std::uint64_t root_seed, const ExperimentConfig& config);

// Distinct complete subtrees of an encoding's programs.
std::vector<Term> encoding_subprograms(const Encoding& encoding, bool include_leaves);

struct UniquenessRow {
  ModelKind model = ModelKind::PCFG;
  std::size_t n_train = 0;
  long r_s = 0;
  int seed = 0;
  double uniqueness = 0.0;
  std::size_t subprograms = 0;  // distinct across melodies
};

struct UniquenessOptions {
  double r_l = 1e9;
  bool include_leaves = false;
};

// Encodings of the first n_train melodies as produced during training (the
// AG updates its library after each melody; the PCFG encodes each melody on
// its own), at budget (r_l, r_s).
std::vector<UniquenessRow> uniqueness_sweep(const Corpus& train, ModelKind model,
                                            const std::vector<std::size_t>& n_train, const std::vector<long>& r_s,
                                            int n_seeds, std::uint64_t root_seed, const ExperimentConfig& config,
                                            const UniquenessOptions& options = {});

struct CurriculumOptions {
  Budget gen_budget{32, 8};  // budget for measuring generalization
  std::size_t train_prefix = 0;  // train on the first k melodies of the ordering; 0 = all
  // evaluation seed shared by every run; unset = derived from the run seed
  std::optional<std::uint64_t> eval_seed;
};

struct CurriculumResult {
  std::vector<std::string> ordering;
  std::uint64_t run_seed = 0;
  std::shared_ptr<const Library> library;
  Summary error;
};

// Throws ExperimentError unless the ordering permutes the subset's ids.
CurriculumResult run_curriculum(const Corpus& subset, const std::vector<std::string>& ordering, const Corpus& eval,
                                std::uint64_t run_seed, const ExperimentConfig& config,
                                const CurriculumOptions& options = {});

std::vector<std::string> random_ordering(const Corpus& subset, std::uint64_t seed);

struct MatchedRuns {
  std::vector<std::vector<std::string>> orderings;
  std::vector<std::uint64_t> seeds_a, seeds_b;
  std::vector<double> error_a, error_b;
  // library overlap: shared fraction of cached subprograms between
  // consecutive curricula (run a)
  double mean_library_sharing = 0.0;
  std::optional<Correlation> matched, random;  // empty when undefined
  std::optional<TTest> abs_difference;         // random minus matched |a - b|
};

// Mismatched pairs are (a_i, b_{i+1 mod n}).  With shared_seeds both runs of
// a curriculum use the same seed, so r_matched is exactly 1.
MatchedRuns matched_run_analysis(const Corpus& subset, std::size_t n_curricula, const Corpus& eval,
                                 std::uint64_t root_seed, const ExperimentConfig& config,
                                 const CurriculumOptions& options = {}, bool shared_seeds = false);

// Same types, entry counts and multiplicities as `like`, with entries drawn
// from the grammar (a leaf for a leaf, an application for an application).
Library random_library_like(const Library& like, const Grammar& grammar, Rng& rng);

struct BaselineResult {
  std::vector<double> learned, random;
  std::vector<std::size_t> sizes;  // distinct entries per learned library
  Summary learned_summary, random_summary;
  double variance_ratio = 0.0;  // var(random) / var(learned)
  std::optional<TTest> test;    // random minus learned, paired by trial
};

BaselineResult random_library_baseline(const Corpus& subset, const Corpus& eval, std::size_t n_trials,
                                       std::uint64_t root_seed, const ExperimentConfig& config,
                                       const CurriculumOptions& options = {});

struct OrderingComparison {
  std::vector<std::string> ordering;
  std::vector<std::vector<std::string>> random_orderings;
  std::vector<double> ordering_errors, random_errors;
  std::optional<TTest> test;  // random minus given ordering, paired by trial
};

// Trial i trains the given ordering and a fresh random ordering with the same
// run seed and compares their generalization errors.
OrderingComparison ordering_comparison(const Corpus& subset, const std::vector<std::string>& ordering,
                                       const Corpus& eval, std::size_t n_trials, std::uint64_t root_seed,
                                       const ExperimentConfig& config, const CurriculumOptions& options = {});

struct SynergyComparison {
  std::vector<std::vector<std::string>> synergy_orderings, random_orderings;
  std::vector<double> synergy_errors, random_errors;
  std::optional<TTest> test;  // random minus synergy, paired by trial
};

// Trial i builds its own greedy synergy curriculum and a random curriculum
// and trains both with the same run seed.
SynergyComparison synergy_comparison(const Corpus& subset, const Corpus& eval, std::size_t n_trials,
                                     std::uint64_t root_seed, const ExperimentConfig& config,
                                     const SynergyOptions& synergy, const CurriculumOptions& options = {});

// Complementary-motif corpus: every melody combines motifs from two of
// `families` motif families, separated by filler notes.
Corpus planted_corpus(std::size_t n, std::size_t families, std::size_t mean_len, std::uint64_t seed);

std::string format_number(double v);
std::string rd_to_csv(const std::vector<RDPoint>& points);
std::string generalization_to_csv(const std::vector<GeneralizationRow>& rows);
std::string uniqueness_to_csv(const std::vector<UniquenessRow>& rows);
std::string matched_runs_to_csv(const MatchedRuns& runs);
std::string baseline_to_csv(const BaselineResult& result);
std::string ordering_comparison_to_csv(const OrderingComparison& result);
// trial,synergy_error,random_error
std::string synergy_comparison_to_csv(const SynergyComparison& result);

}  // namespace progrd
