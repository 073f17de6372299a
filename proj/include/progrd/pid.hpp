#pragma once

// Partial information decomposition of two binary program variables about
// the melody identity, library synergy and greedy synergy curricula.
//
// A program becomes a random variable through window matching: its output is
// slid over a melody and each window emits 1 when at least `threshold` of its
// notes agree.  With X uniform over a melody set and the two programs'
// windows paired by start position, the empirical (Z1, Z2, X) table is
// decomposed with the Williams-Beer I_min redundancy.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "progrd/corpus.hpp"
#include "progrd/learner.hpp"

namespace progrd {

class PidError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// p(z1, z2, x) with binary sources and x in [0, targets).
class JointTable {
 public:
  explicit JointTable(std::size_t targets);
  // Throws PidError unless entries are non-negative and sum to 1 within 1e-9.
  JointTable(std::size_t targets, std::vector<double> probs);

  std::size_t targets() const { return targets_; }
  double& at(int z1, int z2, std::size_t x) { return p_[index(z1, z2, x)]; }
  double at(int z1, int z2, std::size_t x) const { return p_[index(z1, z2, x)]; }
  const std::vector<double>& probs() const { return p_; }

  void validate() const;  // throws PidError

 private:
  std::size_t index(int z1, int z2, std::size_t x) const {
    return (static_cast<std::size_t>(z1) * 2 + static_cast<std::size_t>(z2)) * targets_ + x;
  }
  std::size_t targets_;
  std::vector<double> p_;
};

enum class Sources { Both, First, Second };

// I(sources; X) in bits.
double mutual_information(const JointTable& joint, Sources sources);

struct PIDResult {
  double mutual = 0.0;
  double redundancy = 0.0;
  double unique1 = 0.0;
  double unique2 = 0.0;
  double synergy = 0.0;
};

PIDResult pid_decompose(const JointTable& joint);

struct FeatureParams {
  double threshold = 0.8;
  std::size_t stride = 1;

  void validate() const;  // throws ConfigError
};

// Window-match indicators of a produced sequence over a melody.  When the
// output is longer than the melody, one sample from the best alignment.
std::vector<std::uint8_t> program_feature(const NoteSeq& output, const NoteSeq& melody,
                                          const FeatureParams& params = {});

// X uniform over the melodies; for each melody the two feature sequences are
// paired by window index up to the shorter one.
JointTable joint_from_features(const std::vector<std::vector<std::uint8_t>>& first,
                               const std::vector<std::vector<std::uint8_t>>& second);

struct SynergyOptions {
  std::size_t n_pairs = 200;
  FeatureParams features;
  EvalLimits limits;
};

struct SynergyEstimate {
  double synergy = 0.0;  // mean over sampled pairs, bits
  double std_error = 0.0;
  std::size_t pairs = 0;
  std::size_t programs = 0;
  bool degenerate = false;  // fewer than two usable programs
};

// Programs are the distinct evaluable non-leaf entries of the t_n cache.  All
// pairs are averaged when there are at most n_pairs of them, otherwise
// n_pairs are sampled.
SynergyEstimate library_synergy(const Library& library, const Corpus& melodies, std::uint64_t seed,
                                const SynergyOptions& options = {});

struct CurriculumStep {
  std::string melody_id;
  double synergy = 0.0;
};

struct SynergyCurriculum {
  std::vector<CurriculumStep> steps;
  std::shared_ptr<const Library> library;  // after the whole ordering
};

// Greedy argmax of library synergy, one simulated update per candidate and
// step; ties go to the earlier candidate.
SynergyCurriculum build_synergistic_curriculum(const Corpus& candidates, const LearnerConfig& learner,
                                               std::uint64_t seed, const SynergyOptions& options = {},
                                               int jobs = 1);

std::string curriculum_to_csv(const SynergyCurriculum& curriculum);
// Reads the melody_id column of a curriculum CSV.
std::vector<std::string> ordering_from_csv(const std::string& text);

}  // namespace progrd
