#include "progrd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "progrd/eval.hpp"
#include "progrd/jobs.hpp"

namespace progrd {

std::string to_string(ModelKind kind) { return kind == ModelKind::AG ? "ag" : "pcfg"; }

ModelKind parse_model_kind(const std::string& text) {
  if (text == "ag") return ModelKind::AG;
  if (text == "pcfg") return ModelKind::PCFG;
  throw ConfigError("unknown model '" + text + "' (expected pcfg or ag)");
}

LearnerConfig ExperimentConfig::learner() const {
  if (!grammar) throw ConfigError("experiment needs a grammar");
  LearnerConfig l;
  l.grammar = grammar;
  l.py = py;
  l.budget = train_budget;
  l.search = search;
  return l;
}

Summary summarize(const std::vector<double>& values) {
  return {mean(values), std_error(values), values.size()};
}

double melody_distortion(const Melody& melody, const ProgramModel& model, const Budget& budget,
                         std::uint64_t seed, const ExperimentConfig& config) {
  Rng rng(derive_seed(seed, "encode"));
  Encoding e = encode_melody(melody, model, budget, rng, config.search);
  RateDistortion rd = evaluate_encoding(melody, e, model, config.decode_samples, derive_seed(seed, "decode"));
  return rd.distortion / static_cast<double>(melody.notes.size());
}

void RDGrid::validate() const {
  std::vector<std::string> errs;
  if (r_l.empty()) errs.push_back("r_l grid is empty");
  if (r_s.empty()) errs.push_back("r_s grid is empty");
  if (n_train.empty()) errs.push_back("n_train grid is empty");
  if (n_seeds < 1) errs.push_back("n_seeds must be >= 1");
  for (double v : r_l) {
    if (!(v >= 0.0)) errs.push_back("r_l values must be >= 0");
  }
  for (long v : r_s) {
    if (v < 1) errs.push_back("r_s values must be >= 1");
  }
  if (!errs.empty()) {
    std::string msg = "invalid sweep grid:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
}

namespace {

std::shared_ptr<const Library> empty_library() { return std::make_shared<const Library>(); }

std::uint64_t seed_root(std::uint64_t root, std::string_view suite, int seed) {
  return derive_seed(root, suite, static_cast<std::uint64_t>(seed));
}

}  // namespace

std::vector<RDPoint> rd_sweep(const Corpus& train, const Corpus& eval, ModelKind model, const RDGrid& grid,
                              std::uint64_t root_seed, const ExperimentConfig& config) {
  grid.validate();
  if (!config.grammar) throw ConfigError("experiment needs a grammar");
  if (eval.size() == 0) throw ExperimentError("rd sweep needs evaluation melodies");
  const LearnerConfig learner = config.learner();

  // one library per (n_train, seed); the PCFG uses the empty one throughout
  const std::size_t n_seeds = static_cast<std::size_t>(grid.n_seeds);
  const std::vector<std::size_t> amounts = model == ModelKind::AG ? grid.n_train : std::vector<std::size_t>{0};
  auto libraries = parallel_map(amounts.size() * n_seeds, config.jobs, [&](std::size_t k) {
    const std::size_t n = amounts[k / n_seeds];
    const int s = static_cast<int>(k % n_seeds);
    if (n == 0) return empty_library();
    return train_corpus(train, n, learner, derive_seed(seed_root(root_seed, "rd", s), "train")).library;
  });

  struct Cell {
    std::size_t amount;
    double r_l;
    long r_s;
    int seed;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < amounts.size(); ++a) {
    for (double r_l : grid.r_l) {
      for (long r_s : grid.r_s) {
        for (int s = 0; s < grid.n_seeds; ++s) cells.push_back({a, r_l, r_s, s});
      }
    }
  }
  auto results = parallel_map(cells.size(), config.jobs, [&](std::size_t k) {
    const Cell& c = cells[k];
    AdaptorModel m(*config.grammar, libraries[c.amount * n_seeds + static_cast<std::size_t>(c.seed)], config.py);
    std::vector<double> d;
    for (const auto& mel : eval.melodies) {
      const std::uint64_t ms = derive_seed(seed_root(root_seed, "rd", c.seed), "melody", mel.id);
      d.push_back(melody_distortion(mel, m, {c.r_l, c.r_s}, ms, config));
    }
    return summarize(d);
  });

  std::vector<RDPoint> out;
  const std::vector<std::size_t> rows = grid.n_train;
  for (std::size_t row = 0; row < rows.size(); ++row) {
    const std::size_t a = model == ModelKind::AG ? row : 0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k].amount != a) continue;
      const Summary& s = results[k];
      out.push_back({model, cells[k].r_l, cells[k].r_s, rows[row], cells[k].seed, s.mean, s.std_error, s.n});
    }
  }
  return out;
}

std::vector<double> generalization_errors(const ProgramModel& model, const Corpus& eval, const Budget& budget,
                                          std::uint64_t seed, const ExperimentConfig& config) {
  if (budget.r_s < 1 || !(budget.r_l >= 0.0)) throw ConfigError("generalization budget needs r_s >= 1 and r_l >= 0");
  return parallel_map(eval.size(), config.jobs, [&](std::size_t i) {
    const Melody& m = eval.melodies[i];
    return melody_distortion(m, model, budget, derive_seed(seed, "generalize", m.id), config);
  });
}

Summary generalization_error(const ProgramModel& model, const Corpus& eval, const Budget& budget, std::uint64_t seed,
                             const ExperimentConfig& config) {
  return summarize(generalization_errors(model, eval, budget, seed, config));
}

std::vector<GeneralizationRow> generalization_sweep(const Corpus& train, const Corpus& eval, ModelKind model,
                                                    const std::vector<std::size_t>& n_train,
                                                    double r_l, const std::vector<long>& r_s, int n_seeds,
                                                    std::uint64_t root_seed, const ExperimentConfig& config) {
  if (n_train.empty() || r_s.empty() || n_seeds < 1) throw ConfigError("generalization grid is empty");
  const LearnerConfig learner = config.learner();
  const auto seeds = static_cast<std::size_t>(n_seeds);
  auto libraries = parallel_map(n_train.size() * seeds, config.jobs, [&](std::size_t k) {
    const std::size_t n = n_train[k / seeds];
    const int s = static_cast<int>(k % seeds);
    if (n == 0 || model == ModelKind::PCFG) return empty_library();
    return train_corpus(train, n, learner, derive_seed(seed_root(root_seed, "generalize", s), "train")).library;
  });
  std::vector<GeneralizationRow> out;
  ExperimentConfig inner = config;
  inner.jobs = 1;
  struct Cell {
    std::size_t amount;
    long r_s;
    int seed;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < n_train.size(); ++a) {
    for (long r : r_s) {
      for (int s = 0; s < n_seeds; ++s) cells.push_back({a, r, s});
    }
  }
  auto results = parallel_map(cells.size(), config.jobs, [&](std::size_t k) {
    const Cell& c = cells[k];
    AdaptorModel m(*config.grammar, libraries[c.amount * seeds + static_cast<std::size_t>(c.seed)], config.py);
    return generalization_error(m, eval, {r_l, c.r_s}, derive_seed(seed_root(root_seed, "generalize", c.seed), "eval"),
                                inner);
  });
  for (std::size_t k = 0; k < cells.size(); ++k) {
    out.push_back({model, n_train[cells[k].amount], r_l, cells[k].r_s, cells[k].seed, results[k]});
  }
  return out;
}

std::vector<Term> encoding_subprograms(const Encoding& encoding, bool include_leaves) {
  std::vector<Term> out;
  std::set<std::string> seen;
  for (const auto& seg : encoding.segments) {
    for (const auto& sub : subprograms(seg.program)) {
      if (!include_leaves && sub->is_leaf()) continue;
      if (seen.insert(sub->text()).second) out.push_back(sub);
    }
  }
  return out;
}

std::vector<UniquenessRow> uniqueness_sweep(const Corpus& train, ModelKind model,
                                            const std::vector<std::size_t>& n_train, const std::vector<long>& r_s,
                                            int n_seeds, std::uint64_t root_seed, const ExperimentConfig& config,
                                            const UniquenessOptions& options) {
  if (n_train.empty() || r_s.empty() || n_seeds < 1) throw ConfigError("uniqueness grid is empty");
  for (std::size_t n : n_train) {
    if (n < 2) throw ConfigError("uniqueness needs n_train >= 2");
    if (n > train.size()) throw ExperimentError("uniqueness needs more training melodies than the corpus has");
  }
  struct Cell {
    std::size_t n;
    long r_s;
    int seed;
  };
  std::vector<Cell> cells;
  for (std::size_t n : n_train) {
    for (long r : r_s) {
      for (int s = 0; s < n_seeds; ++s) cells.push_back({n, r, s});
    }
  }
  auto results = parallel_map(cells.size(), config.jobs, [&](std::size_t k) {
    const Cell& c = cells[k];
    LearnerConfig learner = config.learner();
    learner.budget = {options.r_l, c.r_s};
    const std::uint64_t seed = derive_seed(seed_root(root_seed, "uniqueness", c.seed), "train");
    std::vector<Encoding> encodings;
    if (model == ModelKind::AG) {
      encodings = train_corpus(train, c.n, learner, seed).encodings;
    } else {
      for (std::size_t i = 0; i < c.n; ++i) {
        encodings.push_back(train_sequence({&train.melodies[i]}, learner, seed).encodings.front());
      }
    }
    std::vector<std::vector<Term>> per;
    std::set<std::string> distinct;
    for (const auto& e : encodings) {
      per.push_back(encoding_subprograms(e, options.include_leaves));
      for (const auto& t : per.back()) distinct.insert(t->text());
    }
    UniquenessRow row{model, c.n, c.r_s, c.seed, uniqueness_ratio(per), distinct.size()};
    return row;
  });
  return results;
}

namespace {

void check_permutation(const Corpus& subset, const std::vector<std::string>& ordering) {
  std::vector<std::string> a = ordering, b;
  for (const auto& m : subset.melodies) b.push_back(m.id);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw ExperimentError("curriculum ordering is not a permutation of the subset");
}

std::optional<Correlation> try_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return pearson_r(x, y);
  } catch (const StatsError&) {
    return std::nullopt;
  }
}

std::optional<TTest> try_paired(const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return paired_t(x, y);
  } catch (const StatsError&) {
    return std::nullopt;
  }
}

std::set<std::string> entry_texts(const Library& lib) {
  std::set<std::string> out;
  for (const auto& [type, cache] : lib.caches()) {
    for (const auto& e : cache.entries()) out.insert(type.str() + " " + e.term->text());
  }
  return out;
}

double sharing(const Library& a, const Library& b) {
  const auto sa = entry_texts(a), sb = entry_texts(b);
  std::size_t both = 0;
  for (const auto& t : sa) both += sb.count(t);
  const std::size_t any = sa.size() + sb.size() - both;
  return any == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(any);
}

Summary library_error(std::shared_ptr<const Library> library, const Corpus& eval, std::uint64_t run_seed,
                      const ExperimentConfig& config, const CurriculumOptions& options) {
  AdaptorModel m(*config.grammar, std::move(library), config.py);
  const std::uint64_t seed = options.eval_seed ? *options.eval_seed : derive_seed(run_seed, "eval");
  return generalization_error(m, eval, options.gen_budget, seed, config);
}

}  // namespace

CurriculumResult run_curriculum(const Corpus& subset, const std::vector<std::string>& ordering, const Corpus& eval,
                                std::uint64_t run_seed, const ExperimentConfig& config,
                                const CurriculumOptions& options) {
  check_permutation(subset, ordering);
  if (eval.size() == 0) throw ExperimentError("curriculum needs evaluation melodies");
  std::map<std::string, const Melody*> by_id;
  for (const auto& m : subset.melodies) by_id[m.id] = &m;
  const std::size_t n = options.train_prefix == 0 ? ordering.size() : std::min(options.train_prefix, ordering.size());
  std::vector<const Melody*> order;
  for (std::size_t i = 0; i < n; ++i) order.push_back(by_id.at(ordering[i]));
  CurriculumResult r;
  r.ordering = ordering;
  r.run_seed = run_seed;
  r.library = train_sequence(order, config.learner(), run_seed).library;
  r.error = library_error(r.library, eval, run_seed, config, options);
  return r;
}

std::vector<std::string> random_ordering(const Corpus& subset, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& m : subset.melodies) ids.push_back(m.id);
  Rng rng(derive_seed(seed, "ordering"));
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.uniform(i)]);
  return ids;
}

MatchedRuns matched_run_analysis(const Corpus& subset, std::size_t n_curricula, const Corpus& eval,
                                 std::uint64_t root_seed, const ExperimentConfig& config,
                                 const CurriculumOptions& options, bool shared_seeds) {
  if (n_curricula < 2) throw ConfigError("matched runs need at least two curricula");
  MatchedRuns out;
  for (std::size_t i = 0; i < n_curricula; ++i) {
    out.orderings.push_back(random_ordering(subset, derive_seed(root_seed, "curriculum.order", i)));
    out.seeds_a.push_back(derive_seed(root_seed, "curriculum.run.a", i));
    out.seeds_b.push_back(shared_seeds ? out.seeds_a.back() : derive_seed(root_seed, "curriculum.run.b", i));
  }
  ExperimentConfig inner = config;
  inner.jobs = 1;
  auto runs = parallel_map(2 * n_curricula, config.jobs, [&](std::size_t k) {
    const std::size_t i = k / 2;
    const std::uint64_t seed = k % 2 == 0 ? out.seeds_a[i] : out.seeds_b[i];
    return run_curriculum(subset, out.orderings[i], eval, seed, inner, options);
  });
  for (std::size_t i = 0; i < n_curricula; ++i) {
    out.error_a.push_back(runs[2 * i].error.mean);
    out.error_b.push_back(runs[2 * i + 1].error.mean);
  }
  double share = 0.0;
  for (std::size_t i = 0; i + 1 < n_curricula; ++i) share += sharing(*runs[2 * i].library, *runs[2 * i + 2].library);
  out.mean_library_sharing = share / static_cast<double>(n_curricula - 1);

  std::vector<double> shifted(n_curricula), d_matched(n_curricula), d_random(n_curricula);
  for (std::size_t i = 0; i < n_curricula; ++i) {
    shifted[i] = out.error_b[(i + 1) % n_curricula];
    d_matched[i] = std::abs(out.error_a[i] - out.error_b[i]);
    d_random[i] = std::abs(out.error_a[i] - shifted[i]);
  }
  out.matched = try_pearson(out.error_a, out.error_b);
  out.random = try_pearson(out.error_a, shifted);
  out.abs_difference = try_paired(d_random, d_matched);
  return out;
}

Library random_library_like(const Library& like, const Grammar& grammar, Rng& rng) {
  Library out;
  for (const auto& [type, cache] : like.caches()) {
    const auto id = grammar.type_id(type);
    if (!id) continue;
    // shallowest depth at which the type can be generated
    int depth = -1;
    for (int d = 1; d <= grammar.params().max_depth; ++d) {
      if (grammar.expansion(*id, d).generable) {
        depth = d;
        break;
      }
    }
    if (depth < 0) continue;
    const Grammar::Expansion& e = grammar.expansion(*id, depth);
    auto child = [&grammar](Grammar::TypeId t, int d, Rng& r) { return grammar.sample_at(t, d, r); };
    Cache& target = out.mutable_cache(type);
    for (const auto& entry : cache.entries()) {
      const bool leaf = entry.term->is_leaf();
      if (leaf ? e.terminals.empty() : e.routers.empty()) continue;
      Term t;
      // redraw a few times so distinct entries stay distinct
      for (int attempt = 0; attempt < 20; ++attempt) {
        t = leaf ? e.terminals[rng.uniform(e.terminals.size())] : grammar.sample_recursive(*id, depth, rng, child);
        if (target.find(t->text()) < 0) break;
      }
      target.add(t, entry.count);
    }
  }
  return out;
}

BaselineResult random_library_baseline(const Corpus& subset, const Corpus& eval, std::size_t n_trials,
                                       std::uint64_t root_seed, const ExperimentConfig& config,
                                       const CurriculumOptions& options) {
  if (n_trials < 2) throw ConfigError("the baseline needs at least two trials");
  ExperimentConfig inner = config;
  inner.jobs = 1;
  struct Trial {
    double learned, random;
    std::size_t size;
  };
  auto trials = parallel_map(n_trials, config.jobs, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(root_seed, "baseline.trial", i);
    CurriculumResult r = run_curriculum(subset, random_ordering(subset, seed), eval, seed, inner, options);
    Rng rng(derive_seed(seed, "random.library"));
    auto lib = std::make_shared<const Library>(random_library_like(*r.library, *config.grammar, rng));
    return Trial{r.error.mean, library_error(lib, eval, seed, inner, options).mean, r.library->distinct()};
  });
  BaselineResult out;
  for (const auto& t : trials) {
    out.learned.push_back(t.learned);
    out.random.push_back(t.random);
    out.sizes.push_back(t.size);
  }
  out.learned_summary = summarize(out.learned);
  out.random_summary = summarize(out.random);
  const double vl = variance(out.learned);
  out.variance_ratio = vl > 0.0 ? variance(out.random) / vl : std::numeric_limits<double>::infinity();
  out.test = try_paired(out.random, out.learned);
  return out;
}

OrderingComparison ordering_comparison(const Corpus& subset, const std::vector<std::string>& ordering,
                                       const Corpus& eval, std::size_t n_trials, std::uint64_t root_seed,
                                       const ExperimentConfig& config, const CurriculumOptions& options) {
  if (n_trials < 2) throw ConfigError("an ordering comparison needs at least two trials");
  check_permutation(subset, ordering);
  ExperimentConfig inner = config;
  inner.jobs = 1;
  OrderingComparison out;
  out.ordering = ordering;
  for (std::size_t i = 0; i < n_trials; ++i) {
    out.random_orderings.push_back(random_ordering(subset, derive_seed(root_seed, "comparison.order", i)));
  }
  auto runs = parallel_map(2 * n_trials, config.jobs, [&](std::size_t k) {
    const std::size_t i = k / 2;
    const std::uint64_t seed = derive_seed(root_seed, "comparison.run", i);
    const auto& order = k % 2 == 0 ? ordering : out.random_orderings[i];
    return run_curriculum(subset, order, eval, seed, inner, options).error.mean;
  });
  for (std::size_t i = 0; i < n_trials; ++i) {
    out.ordering_errors.push_back(runs[2 * i]);
    out.random_errors.push_back(runs[2 * i + 1]);
  }
  out.test = try_paired(out.random_errors, out.ordering_errors);
  return out;
}

SynergyComparison synergy_comparison(const Corpus& subset, const Corpus& eval, std::size_t n_trials,
                                     std::uint64_t root_seed, const ExperimentConfig& config,
                                     const SynergyOptions& synergy, const CurriculumOptions& options) {
  if (n_trials < 2) throw ConfigError("a synergy comparison needs at least two trials");
  ExperimentConfig inner = config;
  inner.jobs = 1;
  struct Trial {
    std::vector<std::string> synergy_order, random_order;
    double synergy_error, random_error;
  };
  auto trials = parallel_map(n_trials, config.jobs, [&](std::size_t i) {
    Trial t;
    SynergyCurriculum sc =
        build_synergistic_curriculum(subset, inner.learner(), derive_seed(root_seed, "synergy", i), synergy, 1);
    for (const auto& s : sc.steps) t.synergy_order.push_back(s.melody_id);
    t.random_order = random_ordering(subset, derive_seed(root_seed, "comparison.order", i));
    const std::uint64_t seed = derive_seed(root_seed, "comparison.run", i);
    t.synergy_error = run_curriculum(subset, t.synergy_order, eval, seed, inner, options).error.mean;
    t.random_error = run_curriculum(subset, t.random_order, eval, seed, inner, options).error.mean;
    return t;
  });
  SynergyComparison out;
  for (auto& t : trials) {
    out.synergy_orderings.push_back(std::move(t.synergy_order));
    out.random_orderings.push_back(std::move(t.random_order));
    out.synergy_errors.push_back(t.synergy_error);
    out.random_errors.push_back(t.random_error);
  }
  out.test = try_paired(out.random_errors, out.synergy_errors);
  return out;
}

Corpus planted_corpus(std::size_t n, std::size_t families, std::size_t mean_len, std::uint64_t seed) {
  if (families < 2) throw ConfigError("a planted corpus needs at least two motif families");
  if (n == 0 || mean_len < 4) throw ConfigError("a planted corpus needs melodies of length >= 4");
  Rng rng(derive_seed(seed, "planted"));
  // family f: a run of repeated notes, a rising scale or a falling scale
  std::vector<NoteSeq> motifs(families);
  for (std::size_t f = 0; f < families; ++f) {
    const int start = rng.uniform_int(0, 11);
    const int len = rng.uniform_int(4, 7);
    const int step = f % 3 == 0 ? 0 : (f % 3 == 1 ? 1 : 11);
    for (int i = 0; i < len; ++i) motifs[f].push_back(Note::pitch((start + i * step) % 12));
  }
  Corpus out;
  out.provenance = Provenance::Synthetic;
  out.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = rng.uniform(families);
    auto b = rng.uniform(families - 1);
    if (b >= a) ++b;
    const std::size_t len = mean_len / 2 + rng.uniform(mean_len + 1);
    NoteSeq notes;
    for (std::size_t k = 0; notes.size() < len; ++k) {
      const NoteSeq& m = motifs[k % 2 == 0 ? a : b];
      notes.insert(notes.end(), m.begin(), m.end());
      const int filler = rng.uniform_int(1, 3);
      for (int j = 0; j < filler; ++j) notes.push_back(Note::from_index(rng.uniform_int(0, Note::kAlphabetSize - 1)));
    }
    notes.resize(std::max<std::size_t>(len, 4));
    char id[32];
    std::snprintf(id, sizeof id, "planted%04zu", i);
    out.melodies.push_back({id, std::move(notes)});
  }
  return out;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string rd_to_csv(const std::vector<RDPoint>& points) {
  std::string out = "model,r_l,r_s,n_train,seed,mean_distortion,stderr,n\n";
  for (const auto& p : points) {
    out += to_string(p.model) + "," + format_number(p.r_l) + "," + std::to_string(p.r_s) + "," +
           std::to_string(p.n_train) + "," + std::to_string(p.seed) + "," + format_number(p.mean_distortion) + "," +
           format_number(p.std_error) + "," + std::to_string(p.n) + "\n";
  }
  return out;
}

std::string generalization_to_csv(const std::vector<GeneralizationRow>& rows) {
  std::string out = "model,n_train,r_l,r_s,seed,mean_error,stderr,n\n";
  for (const auto& r : rows) {
    out += to_string(r.model) + "," + std::to_string(r.n_train) + "," + format_number(r.r_l) + "," +
           std::to_string(r.r_s) + "," +
           std::to_string(r.seed) + "," + format_number(r.error.mean) + "," + format_number(r.error.std_error) + "," +
           std::to_string(r.error.n) + "\n";
  }
  return out;
}

std::string uniqueness_to_csv(const std::vector<UniquenessRow>& rows) {
  std::string out = "model,n_train,r_s,seed,uniqueness,subprograms\n";
  for (const auto& r : rows) {
    out += to_string(r.model) + "," + std::to_string(r.n_train) + "," + std::to_string(r.r_s) + "," +
           std::to_string(r.seed) + "," + format_number(r.uniqueness) + "," + std::to_string(r.subprograms) + "\n";
  }
  return out;
}

std::string matched_runs_to_csv(const MatchedRuns& runs) {
  std::string out = "curriculum,seed_a,seed_b,error_a,error_b\n";
  for (std::size_t i = 0; i < runs.error_a.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(runs.seeds_a[i]) + "," + std::to_string(runs.seeds_b[i]) + "," +
           format_number(runs.error_a[i]) + "," + format_number(runs.error_b[i]) + "\n";
  }
  return out;
}

std::string baseline_to_csv(const BaselineResult& result) {
  std::string out = "trial,library_size,learned_error,random_error\n";
  for (std::size_t i = 0; i < result.learned.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(result.sizes[i]) + "," + format_number(result.learned[i]) + "," +
           format_number(result.random[i]) + "\n";
  }
  return out;
}

std::string ordering_comparison_to_csv(const OrderingComparison& result) {
  std::string out = "trial,ordering_error,random_error\n";
  for (std::size_t i = 0; i < result.ordering_errors.size(); ++i) {
    out += std::to_string(i) + "," + format_number(result.ordering_errors[i]) + "," +
           format_number(result.random_errors[i]) + "\n";
  }
  return out;
}

std::string synergy_comparison_to_csv(const SynergyComparison& result) {
  std::string out = "trial,synergy_error,random_error\n";
  for (std::size_t i = 0; i < result.synergy_errors.size(); ++i) {
    out += std::to_string(i) + "," + format_number(result.synergy_errors[i]) + "," +
           format_number(result.random_errors[i]) + "\n";
  }
  return out;
}

}  // namespace progrd
