#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "progrd/adaptor.hpp"
#include "progrd/commands.hpp"

using namespace progrd;
namespace fs = std::filesystem;

namespace {

const char* kConfig = R"([corpus]
kind = "planted"
n = 30
[split]
n_train = 12
n_eval = 6
[train]
r_s = 16
[generalize]
r_s = [4, 8]
n_train = [0, 4]
n_seeds = 2
)";

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("progrd_cmd_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CommandContext context(const fs::path& out, int jobs) {
  CommandContext ctx;
  ctx.seed = 11;
  ctx.jobs = jobs;
  ctx.out_dir = out;
  ctx.config = ConfigFile::parse(kConfig);
  return ctx;
}

}  // namespace

TEST_CASE("a saved library reproduces the in-process generalization errors") {
  TempDir dir;
  CommandContext train_ctx = context(dir.path, 1);
  cmd_train(train_ctx, {});
  CommandContext gen_ctx = context(dir.path, 1);
  cmd_generalize(gen_ctx, {}, dir.path / "library.json");

  CommandContext ctx = context(dir.path, 1);
  Settings s = settings_from(ctx.config, 1);
  auto [train, eval] = experiment_split(ctx, {});
  TrainingRun t = train_corpus(train, train.size(), s.experiment.learner(), derive_seed(ctx.seed, "train"));
  CHECK(slurp(dir.path / "library.json") == library_to_json(*t.library).dump(1) + "\n");

  AdaptorModel model(*s.grammar, t.library, s.experiment.py);
  std::string expected = "melody_id,r_l,r_s,error\n";
  for (long rs : {4L, 8L}) {
    auto errors = generalization_errors(model, eval, {32, rs}, derive_seed(ctx.seed, "generalize"), s.experiment);
    REQUIRE(errors.size() == eval.size());
    for (std::size_t i = 0; i < errors.size(); ++i) {
      expected += eval.melodies[i].id + ",32," + std::to_string(rs) + "," + format_number(errors[i]) + "\n";
    }
  }
  CHECK(slurp(dir.path / "generalization.csv") == expected);
  CHECK(fs::exists(dir.path / "generalize.meta.json"));
}

TEST_CASE("command outputs do not depend on the worker count or the run") {
  TempDir a, b, c;
  for (auto [dir, jobs] : {std::pair{&a, 1}, {&b, 1}, {&c, 8}}) {
    CommandContext ctx = context(dir->path, jobs);
    cmd_generalize(ctx, {}, std::nullopt);
  }
  for (const char* name : {"generalization.csv", "generalize.meta.json"}) {
    const std::string first = slurp(a.path / name);
    CHECK(!first.empty());
    const std::string second = slurp(b.path / name), eight = slurp(c.path / name);
    CHECK(second == first);
    CHECK(eight == first);
  }
}

TEST_CASE("unknown configuration keys are rejected with their line") {
  TempDir dir;
  CommandContext ctx = context(dir.path, 1);
  ctx.config = ConfigFile::parse(std::string(kConfig) + "typo_key = 3\n");
  try {
    cmd_train(ctx, {});
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("typo_key") != std::string::npos);
    CHECK(what.find("13") != std::string::npos);
  }
}

TEST_CASE("missing inputs raise InputError") {
  TempDir dir;
  CommandContext ctx = context(dir.path, 1);
  CHECK_THROWS_AS(cmd_generalize(ctx, {}, dir.path / "absent.json"), InputError);
  CorpusOptions missing{dir.path / "absent_corpus.json"};
  CommandContext ctx2 = context(dir.path, 1);
  CHECK_THROWS_AS(cmd_train(ctx2, missing), InputError);
}
