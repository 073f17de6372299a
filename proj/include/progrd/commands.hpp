#pragma once

// Command implementations behind the progrd tool.  Each command reads its
// settings from a ConfigFile, derives every seed from the root seed, writes
// its tables into the output directory and a <command>.meta.json next to
// them.  Outputs never depend on the number of worker threads.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "progrd/config.hpp"
#include "progrd/experiments.hpp"

namespace progrd {

// Missing or unreadable input files: a usage error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandContext {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::filesystem::path out_dir = ".";
  ConfigFile config;
};

// Grammar, adaptor, compressor, training and decoding settings.
struct Settings {
  std::unique_ptr<Grammar> grammar;
  ExperimentConfig experiment;
};
Settings settings_from(const ConfigFile& config, int jobs);

// [curriculum] generalization budget, and a shared evaluation seed derived
// from the root seed unless shared_eval_seed is false.
CurriculumOptions curriculum_options(const CommandContext& ctx);

// JSON or text corpus; throws InputError when the file cannot be read.
Corpus load_corpus(const std::filesystem::path& path);

// Git blob hash (SHA-1 of "blob <size>\0" + content), lowercase hex.
std::string content_hash(const std::string& content);

struct PrepareOptions {
  std::optional<std::filesystem::path> input;
  std::optional<std::string> synth;  // "n=500 mean-len=50 motif-bank=20 planted=0"
  std::filesystem::path output;
  std::size_t min_len = 10;
};
// Returns the summary JSON that is also printed.
nlohmann::json cmd_prepare(CommandContext& ctx, const PrepareOptions& options);

struct CorpusOptions {
  std::optional<std::filesystem::path> corpus;  // overrides [corpus]
};

void cmd_rd_sweep(CommandContext& ctx, const CorpusOptions& corpus);
void cmd_train(CommandContext& ctx, const CorpusOptions& corpus);
// With a library: per-melody errors of that library on the evaluation split.
// Without: a sweep over [generalize] n_train and r_s.
void cmd_generalize(CommandContext& ctx, const CorpusOptions& corpus,
                    const std::optional<std::filesystem::path>& library);
void cmd_uniqueness(CommandContext& ctx, const CorpusOptions& corpus);
// Without an ordering: matched runs and the random-library baseline.  With
// one: that ordering against random curricula.
void cmd_curriculum(CommandContext& ctx, const CorpusOptions& corpus,
                    const std::optional<std::filesystem::path>& ordering);
void cmd_synergy(CommandContext& ctx, const CorpusOptions& corpus);
// Returns the demo JSON that is also written.
nlohmann::json cmd_decode_demo(CommandContext& ctx, const CorpusOptions& corpus);

// The curriculum subset and its evaluation melodies, as used by both
// cmd_curriculum and cmd_synergy.
std::pair<Corpus, Corpus> curriculum_split(const CommandContext& ctx, const CorpusOptions& corpus);
// Training and evaluation splits from the [split] section.
std::pair<Corpus, Corpus> experiment_split(const CommandContext& ctx, const CorpusOptions& corpus);

}  // namespace progrd
