#include "progrd/commands.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace progrd {

namespace fs = std::filesystem;

namespace {

// Every key any command reads.
const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"grammar",
     {"primitives", "p_terminal", "max_depth", "count_max", "time_max", "pause_literal", "max_arity", "intermediates"}},
    {"adaptor", {"alpha", "discount", "adapt_leaves"}},
    {"compressor", {"epsilon", "max_steps", "max_output"}},
    {"train", {"r_l", "r_s", "n_train"}},
    {"decode", {"samples"}},
    {"corpus", {"path", "kind", "n", "mean_len", "motif_bank", "families", "seed"}},
    {"split", {"n_train", "n_eval"}},
    {"rd_sweep", {"model", "r_l", "r_s", "n_train", "n_seeds"}},
    {"generalize", {"model", "r_l", "r_s", "n_train", "n_seeds"}},
    {"uniqueness", {"model", "r_l", "r_s", "n_train", "n_seeds", "include_leaves"}},
    {"curriculum",
     {"melodies", "n_eval", "n_curricula", "baseline_trials", "comparison_trials", "gen_r_l", "gen_r_s",
      "train_prefix", "shared_eval_seed"}},
    {"synergy", {"n_pairs", "threshold", "stride", "trials"}},
    {"decode_demo", {"melody", "library", "r_l", "r_s", "samples"}},
};

void finish_config(const ConfigFile& c) { c.finish(kKnownKeys); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

// Keeps the command's inputs and outputs for the metadata file.
class Run {
 public:
  Run(CommandContext& ctx, std::string command) : ctx_(ctx), command_(std::move(command)) {
    fs::create_directories(ctx_.out_dir);
  }

  void input(const std::string& name, const std::string& content) { inputs_[name] = content_hash(content); }

  void output(const std::string& name, const std::string& content) {
    write_file(ctx_.out_dir / name, content);
    outputs_.push_back(name);
  }

  void scale(const std::string& key, nlohmann::json value) { scale_[key] = std::move(value); }

  void finish() {
    nlohmann::json meta;
    meta["command"] = command_;
    meta["seed"] = ctx_.seed;
    meta["config"] = ctx_.config.effective();
    meta["inputs"] = inputs_;
    meta["outputs"] = outputs_;
    if (!scale_.empty()) meta["scale"] = scale_;
    write_file(ctx_.out_dir / (command_ + ".meta.json"), meta.dump(2) + "\n");
  }

 private:
  CommandContext& ctx_;
  std::string command_;
  nlohmann::json inputs_ = nlohmann::json::object();
  std::vector<std::string> outputs_;
  nlohmann::json scale_ = nlohmann::json::object();
};

Corpus corpus_for(CommandContext& ctx, const CorpusOptions& options, Run* run) {
  const ConfigFile& c = ctx.config;
  const std::string path = c.get_string("corpus", "path", "");
  const std::string kind = c.get_string("corpus", "kind", "synth");
  const auto n = static_cast<std::size_t>(c.get_int("corpus", "n", 300));
  const auto mean_len = static_cast<std::size_t>(c.get_int("corpus", "mean_len", 30));
  const auto bank = static_cast<std::size_t>(c.get_int("corpus", "motif_bank", 20));
  const auto families = static_cast<std::size_t>(c.get_int("corpus", "families", 6));
  const std::uint64_t seed = c.get_uint("corpus", "seed", derive_seed(ctx.seed, "corpus"));
  if (kind != "synth" && kind != "planted") c.error("[corpus] kind must be \"synth\" or \"planted\"");

  std::optional<fs::path> file = options.corpus;
  if (!file && !path.empty()) file = path;
  if (file) {
    const std::string text = read_file(*file);
    if (run) run->input(file->filename().string(), text);
    return load_corpus(*file);
  }
  Corpus out = kind == "planted" ? planted_corpus(n, families, mean_len, seed) : synth_corpus({n, mean_len, bank, seed});
  if (run) run->input("corpus (generated)", corpus_to_json(out).dump());
  return out;
}

std::vector<std::size_t> sizes(const std::vector<long>& v) {
  std::vector<std::size_t> out;
  for (long x : v) out.push_back(static_cast<std::size_t>(std::max(0L, x)));
  return out;
}

std::vector<ModelKind> models_from(const ConfigFile& c, const std::string& section) {
  const std::string m = c.get_string(section, "model", "both");
  if (m == "both") return {ModelKind::PCFG, ModelKind::AG};
  if (m == "pcfg") return {ModelKind::PCFG};
  if (m == "ag") return {ModelKind::AG};
  c.error("[" + section + "] model must be \"pcfg\", \"ag\" or \"both\"");
  return {};
}

void check_counts(const ConfigFile& c, const std::string& section, const std::vector<long>& v,
                  const std::string& key, long min) {
  for (long x : v) {
    if (x < min) c.error("[" + section + "] " + key + " values must be >= " + std::to_string(min));
  }
}

nlohmann::json correlation_json(const std::optional<Correlation>& r) {
  if (!r) return nullptr;
  return {{"r", r->r}, {"p", r->p}, {"df", r->df}};
}

nlohmann::json ttest_json(const std::optional<TTest>& t) {
  if (!t) return nullptr;
  return {{"t", t->t}, {"df", t->df}, {"p", t->p}, {"p_greater", t->p_greater}, {"p_less", t->p_less}};
}

}  // namespace

CurriculumOptions curriculum_options(const CommandContext& ctx) {
  const ConfigFile& c = ctx.config;
  CurriculumOptions o;
  o.gen_budget.r_l = c.get_double("curriculum", "gen_r_l", o.gen_budget.r_l);
  o.gen_budget.r_s = c.get_int("curriculum", "gen_r_s", o.gen_budget.r_s);
  o.train_prefix = static_cast<std::size_t>(c.get_int("curriculum", "train_prefix", 0));
  if (c.get_bool("curriculum", "shared_eval_seed", true)) o.eval_seed = derive_seed(ctx.seed, "curriculum.eval");
  try {
    o.gen_budget.validate();
  } catch (const ConfigError& e) {
    c.error(std::string("[curriculum] ") + e.what());
  }
  return o;
}

Settings settings_from(const ConfigFile& c, int jobs) {
  Settings s;
  GrammarParams gp = grammar_params_from(c);
  ExperimentConfig& e = s.experiment;
  e.py.alpha = c.get_double("adaptor", "alpha", e.py.alpha);
  e.py.discount = c.get_double("adaptor", "discount", e.py.discount);
  e.py.adapt_leaves = c.get_bool("adaptor", "adapt_leaves", e.py.adapt_leaves);
  e.search.noise.epsilon = c.get_double("compressor", "epsilon", e.search.noise.epsilon);
  e.search.limits.max_steps = static_cast<int>(c.get_int("compressor", "max_steps", e.search.limits.max_steps));
  e.search.limits.max_output = static_cast<std::size_t>(
      c.get_int("compressor", "max_output", static_cast<long>(e.search.limits.max_output)));
  e.train_budget.r_l = c.get_double("train", "r_l", e.train_budget.r_l);
  e.train_budget.r_s = c.get_int("train", "r_s", e.train_budget.r_s);
  e.decode_samples = static_cast<int>(c.get_int("decode", "samples", e.decode_samples));
  e.jobs = std::max(1, jobs);
  auto check = [&c](const std::string& section, auto&& validate) {
    try {
      validate();
    } catch (const ConfigError& err) {
      c.error("[" + section + "] " + err.what());
    }
  };
  check("adaptor", [&] { e.py.validate(); });
  check("compressor", [&] { e.search.noise.validate(); });
  check("train", [&] { e.train_budget.validate(); });
  if (e.search.limits.max_steps < 1) c.error("[compressor] max_steps must be >= 1");
  if (e.decode_samples < 1) c.error("[decode] samples must be >= 1");
  try {
    s.grammar = std::make_unique<Grammar>(gp);
  } catch (const ConfigError&) {
    // reported through grammar_params_from
    s.grammar = std::make_unique<Grammar>(GrammarParams{});
  }
  e.grammar = s.grammar.get();
  return s;
}

Corpus load_corpus(const fs::path& path) {
  const std::string text = read_file(path);
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && (text[i] == '{' || text[i] == '[')) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError("corpus '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return corpus_from_json(doc);
  }
  return parse_corpus(text);
}

std::string content_hash(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 failed");
  }
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

nlohmann::json cmd_prepare(CommandContext& ctx, const PrepareOptions& options) {
  if (options.input.has_value() == options.synth.has_value()) {
    throw ConfigError("prepare needs exactly one of an input file or a synth spec");
  }
  Run run(ctx, "prepare");
  PreprocessSummary summary;
  Corpus out;
  if (options.input) {
    const std::string text = read_file(*options.input);
    run.input(options.input->filename().string(), text);
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    RawCorpus raw;
    if (i < text.size() && (text[i] == '{' || text[i] == '[')) {
      try {
        raw = raw_corpus_from_json(nlohmann::json::parse(text));
      } catch (const nlohmann::json::exception& e) {
        throw CorpusError(std::string("input is not valid JSON: ") + e.what());
      }
    } else {
      raw = parse_raw_corpus(text);
    }
    out = preprocess(raw, options.min_len, &summary);
  } else {
    // key=value pairs separated by spaces or commas
    std::string spec = *options.synth;
    for (char& ch : spec) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream in(spec);
    SynthParams p;
    p.seed = derive_seed(ctx.seed, "corpus");
    std::size_t planted = 0;
    std::vector<std::string> errs;
    for (std::string item; in >> item;) {
      const auto eq = item.find('=');
      const std::string key = item.substr(0, eq);
      const std::string value = eq == std::string::npos ? "" : item.substr(eq + 1);
      std::size_t v = 0;
      try {
        std::size_t used = 0;
        v = std::stoul(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        errs.push_back("synth spec '" + item + "' needs a non-negative integer value");
        continue;
      }
      if (key == "n") {
        p.n = v;
      } else if (key == "mean-len") {
        p.mean_len = v;
      } else if (key == "motif-bank") {
        p.motif_bank_size = v;
      } else if (key == "planted") {
        planted = v;
      } else {
        errs.push_back("unknown synth key '" + key + "'");
      }
    }
    if (!errs.empty()) {
      std::string msg = "invalid synth spec:";
      for (const auto& e : errs) msg += "\n  " + e;
      throw ConfigError(msg);
    }
    Corpus synth = planted > 0 ? planted_corpus(p.n, planted, p.mean_len, p.seed) : synth_corpus(p);
    out = preprocess(synth, options.min_len, &summary);
    out.provenance = Provenance::Synthetic;
    out.seed = p.seed;
  }
  finish_config(ctx.config);
  std::size_t notes = 0;
  for (const auto& m : out.melodies) notes += m.notes.size();
  nlohmann::json s = {{"input", summary.input},
                      {"kept", summary.kept},
                      {"dropped_short", summary.dropped_short},
                      {"folded_pitches", summary.folded_pitches},
                      {"mean_length", out.size() ? static_cast<double>(notes) / static_cast<double>(out.size()) : 0.0}};
  const std::string body = corpus_to_json(out).dump(1) + "\n";
  fs::path target = options.output.is_absolute() ? options.output : ctx.out_dir / options.output;
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write_file(target, body);
  run.output(target.filename().string() + ".summary.json", s.dump(2) + "\n");
  run.finish();
  return s;
}

std::pair<Corpus, Corpus> experiment_split(const CommandContext& ctx, const CorpusOptions& options) {
  const ConfigFile& c = ctx.config;
  const auto n_train = static_cast<std::size_t>(c.get_int("split", "n_train", 200));
  const auto n_eval = static_cast<std::size_t>(c.get_int("split", "n_eval", 30));
  Corpus all = corpus_for(const_cast<CommandContext&>(ctx), options, nullptr);
  return split(all, n_train, n_eval, derive_seed(ctx.seed, "split"));
}

std::pair<Corpus, Corpus> curriculum_split(const CommandContext& ctx, const CorpusOptions& options) {
  const ConfigFile& c = ctx.config;
  const auto melodies = static_cast<std::size_t>(c.get_int("curriculum", "melodies", 20));
  const auto n_eval = static_cast<std::size_t>(c.get_int("curriculum", "n_eval", 40));
  Corpus all = corpus_for(const_cast<CommandContext&>(ctx), options, nullptr);
  return split(all, melodies, n_eval, derive_seed(ctx.seed, "curriculum.split"));
}

namespace {

// Reads settings and the split, reporting every config problem at once.
struct Prepared {
  Settings settings;
  Corpus train, eval;
};

Prepared prepare_split(CommandContext& ctx, const CorpusOptions& options, Run& run, bool curriculum) {
  Prepared p{settings_from(ctx.config, ctx.jobs), {}, {}};
  const ConfigFile& c = ctx.config;
  const auto a = static_cast<std::size_t>(
      curriculum ? c.get_int("curriculum", "melodies", 20) : c.get_int("split", "n_train", 200));
  const auto b = static_cast<std::size_t>(
      curriculum ? c.get_int("curriculum", "n_eval", 40) : c.get_int("split", "n_eval", 30));
  Corpus all = corpus_for(ctx, options, &run);
  auto parts = split(all, a, b, derive_seed(ctx.seed, curriculum ? "curriculum.split" : "split"));
  p.train = std::move(parts.first);
  p.eval = std::move(parts.second);
  return p;
}

}  // namespace

void cmd_rd_sweep(CommandContext& ctx, const CorpusOptions& options) {
  Run run(ctx, "rd-sweep");
  const ConfigFile& c = ctx.config;
  auto models = models_from(c, "rd_sweep");
  RDGrid grid;
  grid.r_l = c.get_doubles("rd_sweep", "r_l", grid.r_l);
  grid.r_s = c.get_ints("rd_sweep", "r_s", grid.r_s);
  const auto n_train = c.get_ints("rd_sweep", "n_train", {0});
  check_counts(c, "rd_sweep", n_train, "n_train", 0);
  grid.n_train = sizes(n_train);
  grid.n_seeds = static_cast<int>(c.get_int("rd_sweep", "n_seeds", grid.n_seeds));
  try {
    grid.validate();
  } catch (const ConfigError& e) {
    c.error(e.what());
  }
  Prepared p = prepare_split(ctx, options, run, false);
  finish_config(c);
  std::vector<RDPoint> points;
  for (ModelKind m : models) {
    auto rows = rd_sweep(p.train, p.eval, m, grid, derive_seed(ctx.seed, "rd-sweep"), p.settings.experiment);
    points.insert(points.end(), rows.begin(), rows.end());
  }
  run.output("rd_sweep.csv", rd_to_csv(points));
  run.scale("train_melodies", {{"paper", 1000}, {"here", p.train.size()}});
  run.scale("eval_melodies", {{"paper", 500}, {"here", p.eval.size()}});
  run.finish();
}

void cmd_train(CommandContext& ctx, const CorpusOptions& options) {
  Run run(ctx, "train");
  Prepared p = prepare_split(ctx, options, run, false);
  const auto n = static_cast<std::size_t>(ctx.config.get_int("train", "n_train", static_cast<long>(p.train.size())));
  finish_config(ctx.config);
  TrainingRun t = train_corpus(p.train, n, p.settings.experiment.learner(), derive_seed(ctx.seed, "train"));
  nlohmann::json enc = nlohmann::json::array();
  for (const auto& e : t.encodings) enc.push_back(encoding_to_json(e));
  run.output("library.json", library_to_json(*t.library).dump(1) + "\n");
  run.output("encodings.json", enc.dump(1) + "\n");
  run.finish();
}

void cmd_generalize(CommandContext& ctx, const CorpusOptions& options, const std::optional<fs::path>& library) {
  Run run(ctx, "generalize");
  const ConfigFile& c = ctx.config;
  const double r_l = c.get_double("generalize", "r_l", 32);
  const auto r_s = c.get_ints("generalize", "r_s", {8, 32, 128});
  check_counts(c, "generalize", r_s, "r_s", 1);
  if (library) {
    Prepared p = prepare_split(ctx, options, run, false);
    finish_config(c);
    const std::string text = read_file(*library);
    run.input(library->filename().string(), text);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InputError("library '" + library->string() + "' is not valid JSON: " + e.what());
    }
    auto lib = std::make_shared<const Library>(library_from_json(doc));
    AdaptorModel model(*p.settings.grammar, lib, p.settings.experiment.py);
    std::string csv = "melody_id,r_l,r_s,error\n";
    nlohmann::json summary = nlohmann::json::array();
    for (long rs : r_s) {
      auto errors = generalization_errors(model, p.eval, {r_l, rs}, derive_seed(ctx.seed, "generalize"),
                                          p.settings.experiment);
      for (std::size_t i = 0; i < errors.size(); ++i) {
        csv += p.eval.melodies[i].id + "," + format_number(r_l) + "," + std::to_string(rs) + "," +
               format_number(errors[i]) + "\n";
      }
      const Summary s = summarize(errors);
      summary.push_back({{"r_l", r_l}, {"r_s", rs}, {"mean_error", s.mean}, {"stderr", s.std_error}, {"n", s.n}});
    }
    run.output("generalization.csv", csv);
    run.output("generalization_summary.json", summary.dump(2) + "\n");
    run.finish();
    return;
  }
  auto models = models_from(c, "generalize");
  const auto n_train = c.get_ints("generalize", "n_train", {0, 10, 50, 200});
  const int n_seeds = static_cast<int>(c.get_int("generalize", "n_seeds", 3));
  check_counts(c, "generalize", n_train, "n_train", 0);
  if (n_seeds < 1) c.error("[generalize] n_seeds must be >= 1");
  Prepared p = prepare_split(ctx, options, run, false);
  finish_config(c);
  std::vector<GeneralizationRow> rows;
  for (ModelKind m : models) {
    auto part = generalization_sweep(p.train, p.eval, m, sizes(n_train), r_l, r_s, n_seeds,
                                     derive_seed(ctx.seed, "generalize"), p.settings.experiment);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  run.output("generalization.csv", generalization_to_csv(rows));
  run.finish();
}

void cmd_uniqueness(CommandContext& ctx, const CorpusOptions& options) {
  Run run(ctx, "uniqueness");
  const ConfigFile& c = ctx.config;
  auto models = models_from(c, "uniqueness");
  const auto n_train = c.get_ints("uniqueness", "n_train", {10, 50, 200});
  const auto r_s = c.get_ints("uniqueness", "r_s", {8, 32, 128});
  const int n_seeds = static_cast<int>(c.get_int("uniqueness", "n_seeds", 10));
  UniquenessOptions u;
  u.r_l = c.get_double("uniqueness", "r_l", u.r_l);
  u.include_leaves = c.get_bool("uniqueness", "include_leaves", true);
  check_counts(c, "uniqueness", n_train, "n_train", 2);
  check_counts(c, "uniqueness", r_s, "r_s", 1);
  if (n_seeds < 1) c.error("[uniqueness] n_seeds must be >= 1");
  Prepared p = prepare_split(ctx, options, run, false);
  finish_config(c);
  std::vector<UniquenessRow> rows;
  for (ModelKind m : models) {
    auto part = uniqueness_sweep(p.train, m, sizes(n_train), r_s, n_seeds, derive_seed(ctx.seed, "uniqueness"),
                                 p.settings.experiment, u);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  run.output("uniqueness.csv", uniqueness_to_csv(rows));
  run.finish();
}

void cmd_curriculum(CommandContext& ctx, const CorpusOptions& options, const std::optional<fs::path>& ordering) {
  Run run(ctx, "curriculum");
  const ConfigFile& c = ctx.config;
  CurriculumOptions o = curriculum_options(ctx);
  const auto n_curricula = static_cast<std::size_t>(c.get_int("curriculum", "n_curricula", 200));
  const auto baseline_trials = static_cast<std::size_t>(c.get_int("curriculum", "baseline_trials", 30));
  const auto comparison_trials = static_cast<std::size_t>(c.get_int("curriculum", "comparison_trials", 100));
  Prepared p = prepare_split(ctx, options, run, true);
  finish_config(c);
  const ExperimentConfig& cfg = p.settings.experiment;
  if (ordering) {
    const std::string text = read_file(*ordering);
    run.input(ordering->filename().string(), text);
    auto ids = ordering_from_csv(text);
    auto r = ordering_comparison(p.train, ids, p.eval, comparison_trials, derive_seed(ctx.seed, "comparison"), cfg, o);
    nlohmann::json s = {{"trials", comparison_trials},
                        {"ordering_mean_error", mean(r.ordering_errors)},
                        {"random_mean_error", mean(r.random_errors)},
                        {"random_minus_ordering", ttest_json(r.test)}};
    run.output("comparison.csv", ordering_comparison_to_csv(r));
    run.output("comparison_summary.json", s.dump(2) + "\n");
    run.scale("comparison_trials", {{"paper", 1000}, {"here", comparison_trials}});
    run.finish();
    return;
  }
  MatchedRuns m = matched_run_analysis(p.train, n_curricula, p.eval, derive_seed(ctx.seed, "curriculum"), cfg, o);
  nlohmann::json s = {{"curricula", n_curricula},
                      {"melodies", p.train.size()},
                      {"mismatch_pairing", "a_i with b_(i+1 mod n)"},
                      {"r_matched", correlation_json(m.matched)},
                      {"r_random", correlation_json(m.random)},
                      {"abs_difference_random_minus_matched", ttest_json(m.abs_difference)},
                      {"mean_library_sharing", m.mean_library_sharing}};
  run.output("curriculum.csv", matched_runs_to_csv(m));
  if (baseline_trials > 0) {
    BaselineResult b = random_library_baseline(p.train, p.eval, baseline_trials,
                                               derive_seed(ctx.seed, "baseline"), cfg, o);
    s["baseline"] = {{"trials", baseline_trials},
                     {"learned_mean_error", b.learned_summary.mean},
                     {"random_mean_error", b.random_summary.mean},
                     {"variance_ratio", b.variance_ratio},
                     {"random_minus_learned", ttest_json(b.test)}};
    run.output("baseline.csv", baseline_to_csv(b));
  }
  run.output("curriculum_summary.json", s.dump(2) + "\n");
  run.scale("melodies", {{"paper", 50}, {"here", p.train.size()}});
  run.scale("curricula", {{"paper", 1000}, {"here", n_curricula}});
  run.finish();
}

void cmd_synergy(CommandContext& ctx, const CorpusOptions& options) {
  Run run(ctx, "synergy");
  const ConfigFile& c = ctx.config;
  SynergyOptions s;
  s.n_pairs = static_cast<std::size_t>(c.get_int("synergy", "n_pairs", static_cast<long>(s.n_pairs)));
  s.features.threshold = c.get_double("synergy", "threshold", s.features.threshold);
  s.features.stride = static_cast<std::size_t>(c.get_int("synergy", "stride", static_cast<long>(s.features.stride)));
  const long trials = c.get_int("synergy", "trials", 0);
  try {
    s.features.validate();
  } catch (const ConfigError& e) {
    c.error(std::string("[synergy] ") + e.what());
  }
  if (trials == 1 || trials < 0) c.error("[synergy] trials must be 0 or >= 2");
  CurriculumOptions o = curriculum_options(ctx);
  Prepared p = prepare_split(ctx, options, run, true);
  finish_config(c);
  s.limits = p.settings.experiment.search.limits;
  SynergyCurriculum sc = build_synergistic_curriculum(p.train, p.settings.experiment.learner(),
                                                      derive_seed(ctx.seed, "synergy"), s, ctx.jobs);
  run.output("synergy_curriculum.csv", curriculum_to_csv(sc));
  run.output("synergy_library.json", library_to_json(*sc.library).dump(1) + "\n");
  if (trials >= 2) {
    SynergyComparison r = synergy_comparison(p.train, p.eval, static_cast<std::size_t>(trials),
                                             derive_seed(ctx.seed, "synergy.comparison"), p.settings.experiment, s, o);
    nlohmann::json summary = {{"trials", trials},
                              {"synergy_mean_error", mean(r.synergy_errors)},
                              {"random_mean_error", mean(r.random_errors)},
                              {"random_minus_synergy", ttest_json(r.test)}};
    run.output("synergy_comparison.csv", synergy_comparison_to_csv(r));
    run.output("synergy_comparison_summary.json", summary.dump(2) + "\n");
    run.scale("comparison_trials", {{"paper", 1000}, {"here", trials}});
  }
  run.finish();
}

nlohmann::json cmd_decode_demo(CommandContext& ctx, const CorpusOptions& options) {
  Run run(ctx, "decode-demo");
  const ConfigFile& c = ctx.config;
  Settings settings = settings_from(c, ctx.jobs);
  const long index = c.get_int("decode_demo", "melody", 0);
  Budget budget;
  budget.r_l = c.get_double("decode_demo", "r_l", 64);
  budget.r_s = c.get_int("decode_demo", "r_s", 128);
  const long samples = c.get_int("decode_demo", "samples", 5);
  const std::string library = c.get_string("decode_demo", "library", "");
  try {
    budget.validate();
  } catch (const ConfigError& e) {
    c.error(std::string("[decode_demo] ") + e.what());
  }
  if (samples < 1) c.error("[decode_demo] samples must be >= 1");
  Corpus all = corpus_for(ctx, options, &run);
  finish_config(c);
  if (index < 0 || static_cast<std::size_t>(index) >= all.size()) {
    throw ConfigError("[decode_demo] melody index " + std::to_string(index) + " is outside the corpus");
  }
  auto lib = std::make_shared<const Library>();
  if (!library.empty()) {
    const std::string text = read_file(library);
    run.input(fs::path(library).filename().string(), text);
    lib = std::make_shared<const Library>(library_from_json(nlohmann::json::parse(text)));
  }
  AdaptorModel model(*settings.grammar, lib, settings.experiment.py);
  const Melody& m = all.melodies[static_cast<std::size_t>(index)];
  Rng rng(derive_seed(ctx.seed, "decode-demo.encode"));
  Encoding e = encode_melody(m, model, budget, rng, settings.experiment.search);
  nlohmann::json decodes = nlohmann::json::array();
  Rng drng(derive_seed(ctx.seed, "decode-demo.decode"));
  double total = 0;
  for (long i = 0; i < samples; ++i) {
    NoteSeq d = decode(e, model, drng);
    const auto dist = hamming_distortion(m.notes, d);
    total += static_cast<double>(dist);
    decodes.push_back({{"notes", to_string(d)}, {"distortion", dist}});
  }
  nlohmann::json out = {{"melody_id", m.id},
                        {"notes", to_string(m.notes)},
                        {"budget", {{"r_l", budget.r_l}, {"r_s", budget.r_s}}},
                        {"encoding", encoding_to_json(e)},
                        {"decodes", decodes},
                        {"mean_distortion", total / static_cast<double>(samples)}};
  run.output("decode_demo.json", out.dump(2) + "\n");
  run.finish();
  return out;
}

}  // namespace progrd
