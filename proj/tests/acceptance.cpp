// One PASS/FAIL line per acceptance criterion.  Experiment criteria run from
// the files in configs/ with the same seeds the command-line tool uses.

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "progrd/adaptor.hpp"
#include "progrd/commands.hpp"
#include "progrd/eval.hpp"
#include "progrd/pid.hpp"
#include "progrd/stats.hpp"

using namespace progrd;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 2026;
constexpr double kPooledSEs = 2.0;  // RD, dominance and sharing trends
constexpr double kAlpha = 0.05;     // one-sided tests

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

NoteSeq notes(std::initializer_list<int> xs) {
  NoteSeq out;
  for (int x : xs) out.push_back(Note::pitch(x));
  return out;
}

Term prim(const char* name) { return Node::primitive(*find_primitive(name)); }

CommandContext context(const std::string& config) {
  CommandContext ctx;
  ctx.seed = kSeed;
  ctx.config = ConfigFile::load(std::string(PROGRD_SOURCE_DIR) + "/configs/" + config);
  return ctx;
}

// Mean and standard error over seeds of a per-seed value.
struct Cell {
  std::vector<double> values;
  double mean() const { return progrd::mean(values); }
  double se() const { return values.size() > 1 ? std_error(values) : 0.0; }
};

double pooled(const Cell& a, const Cell& b) { return std::sqrt(a.se() * a.se() + b.se() * b.se()); }

// later is no worse than earlier, up to the pooled tolerance
bool not_above(const Cell& later, const Cell& earlier) {
  return later.mean() <= earlier.mean() + kPooledSEs * pooled(later, earlier);
}

void evaluator_ground_truth() {
  bool ok = evaluate(prim("rep"), {{Value{notes({0})}, Value{Count{2}}}}) == notes({0, 0});
  ok = ok && evaluate(prim("get"), {{Value{notes({0, 2, 3})}, Value{TimeIndex{2}}}}) == notes({0, 2});
  // the note is routed into iter-up by C; the run length is the count
  for (int c = 1; c <= 16 && ok; ++c) {
    NoteSeq run = evaluate(parse_term("[C, [iter, up], c" + std::to_string(c) + "]"), {{Value{notes({2})}}});
    ok = run.size() == static_cast<std::size_t>(c);
    for (std::size_t i = 1; i < run.size() && ok; ++i) ok = run[i] == run[i - 1].shifted(1);
  }
  report(ok, "evaluator ground truth", "rep([C],2)=[C,C], get([C,D,D#],2)=[C,D], ascending runs of length 1..16");
}

void prior_soundness(const Grammar& g) {
  double worst = 0.0;
  for (const Type& t : {kNoteT, kCountT, kTimeT, parse_type("n->n"), parse_type("c->n")}) {
    for (int d = 1; d <= 2; ++d) {
      auto en = g.enumerate(t, d);
      double total = en.residual;
      for (const auto& [term, lp] : en.programs) total += std::exp(lp);
      worst = std::max(worst, std::abs(total - 1.0));
    }
  }
  auto en = g.enumerate(kNoteT, 2);
  std::map<std::string, double> expected;
  for (const auto& [t, lp] : en.programs) expected[t->text()] = std::exp(lp);
  const int n = 100'000;
  std::map<std::string, int> counts;
  int other = 0;
  Rng rng(derive_seed(kSeed, "prior"));
  for (int i = 0; i < n; ++i) {
    Term t = g.sample(kNoteT, rng);
    if (expected.count(t->text())) {
      ++counts[t->text()];
    } else {
      ++other;
    }
  }
  double chi2 = 0.0, pooled_e = en.residual * n, pooled_o = other;
  int bins = 0;
  for (const auto& [text, p] : expected) {
    const double e = p * n, o = counts[text];
    if (e < 5.0) {
      pooled_e += e;
      pooled_o += o;
      continue;
    }
    chi2 += (o - e) * (o - e) / e;
    ++bins;
  }
  chi2 += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
  ++bins;
  const double p = 1.0 - boost::math::cdf(boost::math::chi_squared(bins - 1), chi2);
  report(worst <= 1e-9 && p > 0.01, "prior soundness",
         "max |mass+continuation-1| = " + fmt("%.2e", worst) + " (<= 1e-9), chi2 p = " + fmt("%.4f", p) +
             " (> 0.01) over " + std::to_string(bins) + " bins, 1e5 draws");
}

void py_arithmetic() {
  Rng rng(derive_seed(kSeed, "py"));
  bool exact = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const long a = rng.uniform_int(1, 12), d = rng.uniform_int(1, 7);  // alpha = a/4, d = d/8
    const int n = rng.uniform_int(1, 20);
    std::vector<long> counts;
    Cache cache;
    Term t = Node::note(Note::pitch(0));
    for (int i = 0; i < n; ++i) {
      counts.push_back(rng.uniform_int(1, 30));
      cache.add(t, counts.back());
      t = Node::app(Router(), prim("up"), t);
    }
    const long C = std::accumulate(counts.begin(), counts.end(), 0L);
    const auto w = py_probabilities(cache, {double(a) / 4, double(d) / 8});
    exact = exact && w.lambda1 == double(2 * a + n * d) / double(2 * a + 8 * C);
    for (int i = 0; i < n; ++i) {
      exact = exact && w.lambda2[static_cast<std::size_t>(i)] ==
                           double(8 * counts[static_cast<std::size_t>(i)] - d) / double(8 * C - n * d);
    }
    const double sum = std::accumulate(w.lambda2.begin(), w.lambda2.end(), 0.0);
    worst = std::max(worst, std::abs(w.lambda1 + (1 - w.lambda1) * sum - 1.0));
  }
  report(exact && worst <= 1e-12, "Pitman-Yor weights",
         std::string("lambda1/lambda2 equal closed-form rationals on 100 caches: ") + (exact ? "yes" : "no") +
             ", max |lambda1+(1-lambda1)sum(lambda2)-1| = " + fmt("%.1e", worst));
}

void pid_calibration() {
  auto rule = [](int (*f)(int, int)) {
    JointTable j(2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) j.at(a, b, static_cast<std::size_t>(f(a, b))) += 0.25;
    }
    return j;
  };
  PIDResult x = pid_decompose(rule([](int a, int b) { return a ^ b; }));
  JointTable same(2);
  same.at(0, 0, 0) = 0.5;
  same.at(1, 1, 1) = 0.5;
  PIDResult c = pid_decompose(same);
  bool ok = x.redundancy == 0 && x.unique1 == 0 && x.unique2 == 0 && x.synergy == 1;
  ok = ok && c.redundancy == 1 && c.unique1 == 0 && c.unique2 == 0 && c.synergy == 0;
  Rng rng(derive_seed(kSeed, "pid"));
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, 6));
    JointTable j(k);
    double total = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (std::size_t v = 0; v < k; ++v) total += j.at(a, b, v) = rng.bernoulli(0.2) ? 0.0 : rng.uniform01();
      }
    }
    if (total == 0.0) {
      j.at(0, 0, 0) = total = 1.0;
    }
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (std::size_t v = 0; v < k; ++v) j.at(a, b, v) /= total;
      }
    }
    PIDResult r = pid_decompose(j);
    worst = std::max(worst, std::abs(r.redundancy + r.unique1 + r.unique2 + r.synergy - r.mutual));
  }
  report(ok && worst <= 1e-9, "PID calibration",
         std::string("XOR -> (0,0,0,1), copy -> (1,0,0,0): ") + (ok ? "exact" : "wrong") +
             ", max identity error on 1000 tables = " + fmt("%.1e", worst));
}

using Grid = std::map<std::tuple<std::string, std::size_t, double, long>, Cell>;

void rd_criteria() {
  CommandContext ctx = context("rd.toml");
  Settings s = settings_from(ctx.config, 1);
  const ConfigFile& c = ctx.config;
  RDGrid grid;
  grid.r_l = c.get_doubles("rd_sweep", "r_l", {});
  grid.r_s = c.get_ints("rd_sweep", "r_s", {});
  for (long n : c.get_ints("rd_sweep", "n_train", {})) grid.n_train.push_back(static_cast<std::size_t>(n));
  grid.n_seeds = static_cast<int>(c.get_int("rd_sweep", "n_seeds", 10));

  auto [train, eval] = experiment_split(ctx, {});

  const std::uint64_t root = derive_seed(ctx.seed, "rd-sweep");
  Grid cells;
  for (ModelKind m : {ModelKind::PCFG, ModelKind::AG}) {
    for (const RDPoint& p : rd_sweep(train, eval, m, grid, root, s.experiment)) {
      cells[{to_string(p.model), p.n_train, p.r_l, p.r_s}].values.push_back(p.mean_distortion);
    }
  }
  const std::size_t n0 = grid.n_train.front();

  // PCFG distortion along r_l and along r_s
  int checks = 0, bad = 0;
  std::string worst;
  double worst_gap = -1e9;
  auto monotone = [&](const Cell& later, const Cell& earlier, const std::string& where) {
    ++checks;
    const double gap = (later.mean() - earlier.mean()) / std::max(1e-12, pooled(later, earlier));
    if (gap > worst_gap) {
      worst_gap = gap;
      worst = where;
    }
    if (!not_above(later, earlier)) ++bad;
  };
  for (long rs : grid.r_s) {
    for (std::size_t i = 1; i < grid.r_l.size(); ++i) {
      monotone(cells[{"pcfg", n0, grid.r_l[i], rs}], cells[{"pcfg", n0, grid.r_l[i - 1], rs}],
               "r_s=" + std::to_string(rs) + " r_l=" + fmt("%g", grid.r_l[i]));
    }
  }
  for (double rl : grid.r_l) {
    for (std::size_t i = 1; i < grid.r_s.size(); ++i) {
      monotone(cells[{"pcfg", n0, rl, grid.r_s[i]}], cells[{"pcfg", n0, rl, grid.r_s[i - 1]}],
               "r_l=" + fmt("%g", rl) + " r_s=" + std::to_string(grid.r_s[i]));
    }
  }
  report(bad == 0, "RD monotonicity",
         std::to_string(checks - bad) + "/" + std::to_string(checks) +
             " PCFG steps non-increasing within 2 pooled SEs (30 melodies, 10 seeds); largest rise " +
             fmt("%.2f", worst_gap) + " SE at " + worst);

  // AG against PCFG after 100 training melodies, and AG improving with data
  int cells_ok = 0, cells_total = 0;
  double max_excess = -1e9;
  for (double rl : grid.r_l) {
    for (long rs : grid.r_s) {
      const Cell& ag = cells[{"ag", 100, rl, rs}];
      const Cell& pcfg = cells[{"pcfg", 100, rl, rs}];
      ++cells_total;
      max_excess = std::max(max_excess, (ag.mean() - pcfg.mean()) / std::max(1e-12, pooled(ag, pcfg)));
      if (not_above(ag, pcfg)) ++cells_ok;
    }
  }
  int data_ok = 0, data_total = 0;
  std::string gains;
  for (std::size_t i = 0; i < 2; ++i) {
    for (long rs : grid.r_s) {
      const Cell& late = cells[{"ag", 200, grid.r_l[i], rs}];
      const Cell& early = cells[{"ag", 10, grid.r_l[i], rs}];
      ++data_total;
      if (late.mean() < early.mean()) ++data_ok;
      gains += (gains.empty() ? "" : ",") + fmt("%.3f", early.mean() - late.mean());
    }
  }
  report(cells_ok == cells_total && data_ok == data_total, "AG dominance",
         std::to_string(cells_ok) + "/" + std::to_string(cells_total) +
             " cells AG(100) <= PCFG within 2 pooled SEs (max " + fmt("%.2f", max_excess) + " SE); AG(200) < AG(10) in " +
             std::to_string(data_ok) + "/" + std::to_string(data_total) + " cells at r_l 8,16 (gains " + gains + ")");
}

void sharing_criterion() {
  CommandContext ctx = context("generalize.toml");
  Settings s = settings_from(ctx.config, 1);
  const ConfigFile& c = ctx.config;
  std::vector<std::size_t> n_train;
  for (long n : c.get_ints("uniqueness", "n_train", {})) n_train.push_back(static_cast<std::size_t>(n));
  const auto r_s = c.get_ints("uniqueness", "r_s", {});
  const int n_seeds = static_cast<int>(c.get_int("uniqueness", "n_seeds", 10));
  UniquenessOptions u;
  u.include_leaves = c.get_bool("uniqueness", "include_leaves", true);
  auto [train, eval] = experiment_split(ctx, {});
  const std::uint64_t root = derive_seed(ctx.seed, "uniqueness");
  Grid cells;
  for (ModelKind m : {ModelKind::PCFG, ModelKind::AG}) {
    for (const auto& row : uniqueness_sweep(train, m, n_train, r_s, n_seeds, root, s.experiment, u)) {
      cells[{to_string(row.model), row.n_train, 0.0, row.r_s}].values.push_back(1.0 - row.uniqueness);
    }
  }
  auto sharing = [&](const char* m, std::size_t n, long rs) { return cells[{m, n, 0.0, rs}]; };
  int dominance = 0, total = 0;
  for (std::size_t n : n_train) {
    for (long rs : r_s) {
      ++total;
      if (sharing("ag", n, rs).mean() > sharing("pcfg", n, rs).mean()) ++dominance;
    }
  }
  // AG sharing falls along r_s and rises along n_train: consecutive steps
  // within 2 pooled SEs and a strict change between the end points
  auto trend = [](const std::vector<Cell>& seq) {
    for (std::size_t i = 1; i < seq.size(); ++i) {
      if (!not_above(seq[i], seq[i - 1])) return false;
    }
    return seq.back().mean() < seq.front().mean();
  };
  int rs_ok = 0, n_ok = 0;
  std::string rs_means, n_means;
  for (std::size_t n : n_train) {
    std::vector<Cell> seq;
    for (long rs : r_s) seq.push_back(sharing("ag", n, rs));
    if (trend(seq)) ++rs_ok;
    rs_means += " n" + std::to_string(n) + ":" + fmt("%.3f", seq.front().mean()) + "->" + fmt("%.3f", seq.back().mean());
  }
  for (long rs : r_s) {
    std::vector<Cell> seq;
    for (std::size_t n : n_train) {
      Cell neg = sharing("ag", n, rs);
      for (double& v : neg.values) v = -v;
      seq.push_back(neg);
    }
    if (trend(seq)) ++n_ok;
    n_means += " rs" + std::to_string(rs) + ":" + fmt("%.3f", -seq.front().mean()) + "->" + fmt("%.3f", -seq.back().mean());
  }
  report(dominance == total && rs_ok == static_cast<int>(n_train.size()) && n_ok == static_cast<int>(r_s.size()),
         "sharing",
         "AG > PCFG in " + std::to_string(dominance) + "/" + std::to_string(total) + " cells; AG falls with r_s at " +
             std::to_string(rs_ok) + "/" + std::to_string(n_train.size()) + " n_train (" + rs_means +
             " ); AG rises with n_train at " + std::to_string(n_ok) + "/" + std::to_string(r_s.size()) + " r_s (" +
             n_means + " )");
}

void curriculum_criteria() {
  CommandContext ctx = context("curriculum.toml");
  Settings s = settings_from(ctx.config, 1);
  CurriculumOptions o = curriculum_options(ctx);
  const ConfigFile& c = ctx.config;
  const auto n_curricula = static_cast<std::size_t>(c.get_int("curriculum", "n_curricula", 200));
  const auto baseline_trials = static_cast<std::size_t>(c.get_int("curriculum", "baseline_trials", 30));
  const auto synergy_trials = static_cast<std::size_t>(c.get_int("synergy", "trials", 100));
  auto [subset, eval] = curriculum_split(ctx, {});

  MatchedRuns m = matched_run_analysis(subset, n_curricula, eval, derive_seed(ctx.seed, "curriculum"), s.experiment, o);
  const double rm = m.matched ? m.matched->r : 0.0, rr = m.random ? m.random->r : 0.0;
  const double pm = m.abs_difference ? m.abs_difference->p_greater : 1.0;
  report(rm > rr && pm < kAlpha, "curriculum effect",
         std::to_string(subset.size()) + " melodies x " + std::to_string(n_curricula) + " curricula: r_matched = " +
             fmt("%.3f", rm) + ", r_random = " + fmt("%.3f", rr) + ", |diff| random > matched t = " +
             fmt("%.2f", m.abs_difference ? m.abs_difference->t : 0.0) + ", p = " + fmt("%.2g", pm));

  BaselineResult b =
      random_library_baseline(subset, eval, baseline_trials, derive_seed(ctx.seed, "baseline"), s.experiment, o);
  const double pb = b.test ? b.test->p_greater : 1.0;
  const bool ratio_ok = b.variance_ratio >= 1.0 / 3.0 && b.variance_ratio <= 3.0;
  report(b.learned_summary.mean < b.random_summary.mean && pb < kAlpha && ratio_ok, "random-library baseline",
         std::to_string(baseline_trials) + " trials: learned " + fmt("%.3f", b.learned_summary.mean) + " vs random " +
             fmt("%.3f", b.random_summary.mean) + ", p = " + fmt("%.2g", pb) + ", variance ratio " +
             fmt("%.2f", b.variance_ratio) + " (in [1/3, 3])");

  SynergyOptions so;
  so.limits = s.experiment.search.limits;
  SynergyComparison r = synergy_comparison(subset, eval, synergy_trials, derive_seed(ctx.seed, "synergy.comparison"),
                                           s.experiment, so, o);
  const double ps = r.test ? r.test->p_greater : 1.0;
  report(mean(r.synergy_errors) < mean(r.random_errors) && ps < kAlpha, "synergy curriculum",
         std::to_string(synergy_trials) + " greedy vs random curricula: " + fmt("%.4f", mean(r.synergy_errors)) +
             " vs " + fmt("%.4f", mean(r.random_errors)) + ", t = " + fmt("%.2f", r.test ? r.test->t : 0.0) +
             ", p = " + fmt("%.2g", ps));

}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Output files by relative path, with the run directory itself masked out of
// the recorded arguments.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  const std::string dir = root.string();
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::string text = slurp(e.path());
    for (std::size_t p; (p = text.find(dir)) != std::string::npos;) text.replace(p, dir.size(), "{out}");
    out[fs::relative(e.path(), root).string()] = text;
  }
  return out;
}

void determinism() {
  const fs::path base = fs::temp_directory_path() / ("progrd_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base);
  {
    std::ofstream cfg(base / "small.toml");
    cfg << "[corpus]\nkind = \"planted\"\nn = 40\n[split]\nn_train = 20\nn_eval = 8\n[train]\nr_s = 32\n"
           "[rd_sweep]\nr_l = [16, 64]\nr_s = [8, 32]\nn_train = [0, 5]\nn_seeds = 2\n"
           "[generalize]\nr_s = [8]\nn_train = [0, 5]\nn_seeds = 2\n"
           "[uniqueness]\nr_s = [8]\nn_train = [2, 5]\nn_seeds = 2\n"
           "[curriculum]\nmelodies = 6\nn_eval = 8\nn_curricula = 3\nbaseline_trials = 2\ncomparison_trials = 2\n"
           "[synergy]\nn_pairs = 20\ntrials = 2\n";
  }
  const std::string cli = PROGRD_CLI;
  const std::vector<std::string> steps = {
      "prepare --synth n=50 mean-len=30 -o corpus.json",
      "rd-sweep",
      "train",
      "generalize --library {out}/library.json --out-dir {out}/with_library",
      "generalize --out-dir {out}/sweep",
      "uniqueness",
      "synergy",
      "curriculum",
      "curriculum --ordering {out}/synergy_curriculum.csv --out-dir {out}/ordering",
      "decode-demo --library {out}/library.json",
  };
  bool ran = true;
  for (const char* name : {"a1", "b1", "a8"}) {
    const fs::path out = base / name;
    const std::string jobs = name[1] == '8' ? "8" : "1";
    for (std::string step : steps) {
      for (std::size_t p; (p = step.find("{out}")) != std::string::npos;) step.replace(p, 5, out.string());
      std::string cmd = "\"" + cli + "\" " + step + " --seed 5 --jobs " + jobs + " --config \"" +
                        (base / "small.toml").string() + "\"";
      if (step.find("--out-dir") == std::string::npos) cmd += " --out-dir \"" + out.string() + "\"";
      if (std::system((cmd + " > /dev/null").c_str()) != 0) {
        std::printf("  command failed: %s\n", cmd.c_str());
        ran = false;
      }
    }
  }
  const auto a1 = tree(base / "a1"), b1 = tree(base / "b1"), a8 = tree(base / "a8");
  report(ran && a1 == b1 && a1 == a8 && a1.size() > 20, "determinism",
         std::to_string(steps.size()) + " commands, " + std::to_string(a1.size()) +
             " output files byte-identical across a re-run and --jobs 1 vs --jobs 8");
  fs::remove_all(base);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  auto want = [&](const char* name) { return only.empty() || only == name; };
  static const Grammar g{GrammarParams{}};
  try {
    if (want("evaluator")) evaluator_ground_truth();
    if (want("prior")) prior_soundness(g);
    if (want("py")) py_arithmetic();
    if (want("pid")) pid_calibration();
    if (want("rd")) rd_criteria();
    if (want("sharing")) sharing_criterion();
    if (want("curriculum")) curriculum_criteria();
    if (want("determinism")) determinism();
  } catch (const std::exception& e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
