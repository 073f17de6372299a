#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "progrd/commands.hpp"

using namespace progrd;

namespace {

struct Common {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string config;
  std::string out_dir = ".";
  std::vector<std::string> sets;
  std::string corpus;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Root seed");
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--config", c.config, "Config file");
  app->add_option("--out-dir", c.out_dir, "Output directory");
  app->add_option("--set", c.sets, "Override a config value: section.key=value");
}

void add_corpus(CLI::App* app, Common& c) { app->add_option("--corpus", c.corpus, "Corpus file, overrides [corpus]"); }

CommandContext context(const Common& c) {
  CommandContext ctx;
  ctx.seed = c.seed;
  ctx.jobs = c.jobs;
  ctx.out_dir = c.out_dir;
  if (!c.config.empty()) ctx.config = ConfigFile::load(c.config);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    const auto dot = s.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("--set expects section.key=value, got '" + s + "'");
    }
    ctx.config.set(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
  }
  return ctx;
}

CorpusOptions corpus_options(const Common& c) {
  CorpusOptions o;
  if (!c.corpus.empty()) o.corpus = c.corpus;
  return o;
}

std::string as_string(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lossy compression of melodies into typed combinator programs"};
  app.require_subcommand(1);
  Common common;

  auto* prepare = app.add_subcommand("prepare", "Preprocess or synthesize a corpus");
  std::string input, output;
  std::vector<std::string> synth;
  std::size_t min_len = 10;
  add_common(prepare, common);
  auto* in_opt = prepare->add_option("-i,--input", input, "Raw corpus (text or JSON)");
  auto* synth_opt = prepare->add_option("--synth", synth, "Synthetic spec: n=500 mean-len=50 motif-bank=20 planted=0");
  in_opt->excludes(synth_opt);
  prepare->add_option("-o,--output", output, "Output corpus JSON")->required();
  prepare->add_option("--min-len", min_len, "Drop melodies shorter than this");

  auto* rd = app.add_subcommand("rd-sweep", "Rate-distortion sweep");
  std::string model;
  std::vector<long> n_train;
  add_common(rd, common);
  add_corpus(rd, common);
  rd->add_option("--model", model, "pcfg, ag or both")->check(CLI::IsMember({"pcfg", "ag", "both"}));
  rd->add_option("--n-train", n_train, "Training set sizes");

  auto* train = app.add_subcommand("train", "Learn a library on the training split");
  add_common(train, common);
  add_corpus(train, common);
  train->add_option("--n-train", n_train, "Melodies to train on")->expected(1);

  auto* gen = app.add_subcommand("generalize", "Generalization error on held-out melodies");
  std::string library;
  add_common(gen, common);
  add_corpus(gen, common);
  gen->add_option("--library", library, "Library JSON from train");
  gen->add_option("--model", model, "pcfg, ag or both")->check(CLI::IsMember({"pcfg", "ag", "both"}));
  gen->add_option("--n-train", n_train, "Training set sizes");

  auto* uniq = app.add_subcommand("uniqueness", "Subprogram sharing across melodies");
  add_common(uniq, common);
  add_corpus(uniq, common);
  uniq->add_option("--model", model, "pcfg, ag or both")->check(CLI::IsMember({"pcfg", "ag", "both"}));
  uniq->add_option("--n-train", n_train, "Training set sizes");

  auto* curr = app.add_subcommand("curriculum", "Curriculum order effects");
  std::string ordering;
  long n_curricula = -1, melodies = -1;
  add_common(curr, common);
  add_corpus(curr, common);
  curr->add_option("--ordering", ordering, "Curriculum CSV to compare against random orders");
  curr->add_option("--n-curricula", n_curricula, "Random curricula")->check(CLI::Range(2L, 1000000L));
  curr->add_option("--melodies", melodies, "Curriculum subset size")->check(CLI::Range(2L, 1000000L));

  auto* syn = app.add_subcommand("synergy", "Build a greedy synergistic curriculum");
  add_common(syn, common);
  add_corpus(syn, common);
  syn->add_option("--melodies", melodies, "Curriculum subset size")->check(CLI::Range(2L, 1000000L));

  auto* demo = app.add_subcommand("decode-demo", "Encode one melody and decode it a few times");
  long melody = -1;
  add_common(demo, common);
  add_corpus(demo, common);
  demo->add_option("--library", library, "Library JSON from train");
  demo->add_option("--melody", melody, "Corpus index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto ints = [](const std::vector<long>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s + "]";
  };

  try {
    CommandContext ctx = context(common);
    CorpusOptions co = corpus_options(common);
    if (*prepare) {
      PrepareOptions o;
      if (!input.empty()) o.input = input;
      if (!synth.empty()) {
        std::string spec;
        for (const auto& part : synth) spec += (spec.empty() ? "" : " ") + part;
        o.synth = spec;
      }
      o.output = output;
      o.min_len = min_len;
      std::cout << cmd_prepare(ctx, o).dump(2) << "\n";
    } else if (*rd) {
      if (!model.empty()) ctx.config.set("rd_sweep", "model", as_string(model));
      if (!n_train.empty()) ctx.config.set("rd_sweep", "n_train", ints(n_train));
      cmd_rd_sweep(ctx, co);
    } else if (*train) {
      if (!n_train.empty()) ctx.config.set("train", "n_train", std::to_string(n_train.front()));
      cmd_train(ctx, co);
    } else if (*gen) {
      if (!model.empty()) ctx.config.set("generalize", "model", as_string(model));
      if (!n_train.empty()) ctx.config.set("generalize", "n_train", ints(n_train));
      cmd_generalize(ctx, co, library.empty() ? std::nullopt : std::optional<std::filesystem::path>(library));
    } else if (*uniq) {
      if (!model.empty()) ctx.config.set("uniqueness", "model", as_string(model));
      if (!n_train.empty()) ctx.config.set("uniqueness", "n_train", ints(n_train));
      cmd_uniqueness(ctx, co);
    } else if (*curr) {
      if (n_curricula > 0) ctx.config.set("curriculum", "n_curricula", std::to_string(n_curricula));
      if (melodies > 0) ctx.config.set("curriculum", "melodies", std::to_string(melodies));
      cmd_curriculum(ctx, co, ordering.empty() ? std::nullopt : std::optional<std::filesystem::path>(ordering));
    } else if (*syn) {
      if (melodies > 0) ctx.config.set("curriculum", "melodies", std::to_string(melodies));
      cmd_synergy(ctx, co);
    } else if (*demo) {
      if (!library.empty()) ctx.config.set("decode_demo", "library", as_string(library));
      if (melody >= 0) ctx.config.set("decode_demo", "melody", std::to_string(melody));
      std::cout << cmd_decode_demo(ctx, co).dump(2) << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "progrd: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "progrd: " << e.what() << "\n";
    return 2;
  } catch (const CorpusError& e) {
    std::cerr << "progrd: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "progrd: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
