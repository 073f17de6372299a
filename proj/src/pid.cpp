#include "progrd/pid.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "progrd/eval.hpp"
#include "progrd/jobs.hpp"
#include "progrd/stats.hpp"

namespace progrd {

JointTable::JointTable(std::size_t targets) : targets_(targets), p_(4 * targets, 0.0) {
  if (targets == 0) throw PidError("joint table needs at least one target state");
}

JointTable::JointTable(std::size_t targets, std::vector<double> probs)
    : targets_(targets), p_(std::move(probs)) {
  if (targets == 0 || p_.size() != 4 * targets) {
    throw PidError("joint table needs 4 x targets probabilities");
  }
  validate();
}

void JointTable::validate() const {
  double total = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw PidError("joint table has a negative or NaN entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw PidError("joint table sums to " + std::to_string(total));
}

namespace {

double plogq(double p, double ratio) { return p > 0.0 ? p * std::log2(ratio) : 0.0; }

// p(s, x) for the grouped source s, as [s][x].
std::vector<std::vector<double>> grouped(const JointTable& j, Sources sources) {
  const std::size_t states = sources == Sources::Both ? 4 : 2;
  std::vector<std::vector<double>> out(states, std::vector<double>(j.targets(), 0.0));
  for (int z1 = 0; z1 < 2; ++z1) {
    for (int z2 = 0; z2 < 2; ++z2) {
      const std::size_t s = sources == Sources::Both    ? static_cast<std::size_t>(2 * z1 + z2)
                            : sources == Sources::First ? static_cast<std::size_t>(z1)
                                                        : static_cast<std::size_t>(z2);
      for (std::size_t x = 0; x < j.targets(); ++x) out[s][x] += j.at(z1, z2, x);
    }
  }
  return out;
}

std::vector<double> target_marginal(const JointTable& j) {
  std::vector<double> px(j.targets(), 0.0);
  for (int z1 = 0; z1 < 2; ++z1) {
    for (int z2 = 0; z2 < 2; ++z2) {
      for (std::size_t x = 0; x < j.targets(); ++x) px[x] += j.at(z1, z2, x);
    }
  }
  return px;
}

// I_spec(X = x; Z) = sum_z p(z|x) log p(x|z) / p(x)
std::vector<double> specific_information(const JointTable& j, Sources source) {
  const auto psx = grouped(j, source);
  const auto px = target_marginal(j);
  std::vector<double> out(j.targets(), 0.0);
  for (std::size_t x = 0; x < j.targets(); ++x) {
    if (px[x] <= 0.0) continue;
    for (const auto& row : psx) {
      double ps = 0.0;
      for (double v : row) ps += v;
      if (row[x] <= 0.0) continue;
      out[x] += plogq(row[x] / px[x], (row[x] / ps) / px[x]);
    }
  }
  return out;
}

}  // namespace

double mutual_information(const JointTable& joint, Sources sources) {
  joint.validate();
  const auto psx = grouped(joint, sources);
  const auto px = target_marginal(joint);
  double mi = 0.0;
  for (const auto& row : psx) {
    double ps = 0.0;
    for (double v : row) ps += v;
    for (std::size_t x = 0; x < joint.targets(); ++x) {
      if (row[x] > 0.0) mi += plogq(row[x], row[x] / (ps * px[x]));
    }
  }
  return mi;
}

PIDResult pid_decompose(const JointTable& joint) {
  PIDResult r;
  r.mutual = mutual_information(joint, Sources::Both);
  const double i1 = mutual_information(joint, Sources::First);
  const double i2 = mutual_information(joint, Sources::Second);
  const auto s1 = specific_information(joint, Sources::First);
  const auto s2 = specific_information(joint, Sources::Second);
  const auto px = target_marginal(joint);
  for (std::size_t x = 0; x < joint.targets(); ++x) r.redundancy += px[x] * std::min(s1[x], s2[x]);
  r.unique1 = i1 - r.redundancy;
  r.unique2 = i2 - r.redundancy;
  r.synergy = r.mutual - r.redundancy - r.unique1 - r.unique2;
  return r;
}

void FeatureParams::validate() const {
  std::vector<std::string> errs;
  if (!(threshold > 0.0 && threshold <= 1.0)) errs.push_back("threshold must lie in (0, 1]");
  if (stride < 1) errs.push_back("stride must be >= 1");
  if (!errs.empty()) {
    std::string msg = "invalid feature parameters:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
}

std::vector<std::uint8_t> program_feature(const NoteSeq& output, const NoteSeq& melody,
                                          const FeatureParams& params) {
  params.validate();
  if (output.empty() || melody.empty()) throw PidError("program feature needs non-empty sequences");
  const std::size_t len = output.size(), n = melody.size();
  std::vector<std::uint8_t> out;
  if (len > n) {
    std::size_t best = 0;
    for (std::size_t off = 0; off + n <= len; ++off) {
      std::size_t m = 0;
      for (std::size_t i = 0; i < n; ++i) m += output[off + i] == melody[i];
      best = std::max(best, m);
    }
    out.push_back(static_cast<double>(best) >= params.threshold * static_cast<double>(n));
    return out;
  }
  for (std::size_t start = 0; start + len <= n; start += params.stride) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < len; ++i) m += output[i] == melody[start + i];
    out.push_back(static_cast<double>(m) >= params.threshold * static_cast<double>(len));
  }
  return out;
}

JointTable joint_from_features(const std::vector<std::vector<std::uint8_t>>& first,
                               const std::vector<std::vector<std::uint8_t>>& second) {
  if (first.size() != second.size() || first.empty()) {
    throw PidError("feature sets must cover the same non-empty melody set");
  }
  const std::size_t k = first.size();
  JointTable j(k);
  for (std::size_t x = 0; x < k; ++x) {
    const std::size_t n = std::min(first[x].size(), second[x].size());
    if (n == 0) throw PidError("empty feature sequence");
    const double w = 1.0 / (static_cast<double>(k) * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) j.at(first[x][i], second[x][i], x) += w;
  }
  return j;
}

SynergyEstimate library_synergy(const Library& library, const Corpus& melodies, std::uint64_t seed,
                                const SynergyOptions& options) {
  if (melodies.size() < 2) throw PidError("library synergy needs at least two melodies");
  options.features.validate();
  // per program, per melody feature sequences
  std::vector<std::vector<std::vector<std::uint8_t>>> features;
  if (const Cache* c = library.cache(kNoteT)) {
    for (const auto& e : c->entries()) {
      if (e.term->is_leaf()) continue;
      NoteSeq out;
      try {
        out = evaluate(e.term, {}, options.limits);
      } catch (const EvalError&) {
        continue;
      }
      if (out.empty()) continue;
      std::vector<std::vector<std::uint8_t>> per;
      for (const auto& m : melodies.melodies) per.push_back(program_feature(out, m.notes, options.features));
      features.push_back(std::move(per));
    }
  }
  SynergyEstimate est;
  est.programs = features.size();
  if (features.size() < 2 || options.n_pairs == 0) {
    est.degenerate = true;
    return est;
  }
  std::vector<double> values;
  const std::size_t k = features.size();
  if (k * (k - 1) / 2 <= options.n_pairs) {
    // few enough pairs to average exactly
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        values.push_back(pid_decompose(joint_from_features(features[a], features[b])).synergy);
      }
    }
  } else {
    Rng rng(derive_seed(seed, "synergy.pairs"));
    values.reserve(options.n_pairs);
    for (std::size_t p = 0; p < options.n_pairs; ++p) {
      const auto a = rng.uniform(k);
      auto b = rng.uniform(k - 1);
      if (b >= a) ++b;
      values.push_back(pid_decompose(joint_from_features(features[a], features[b])).synergy);
    }
  }
  est.pairs = values.size();
  est.synergy = mean(values);
  est.std_error = std_error(values);
  return est;
}

SynergyCurriculum build_synergistic_curriculum(const Corpus& candidates, const LearnerConfig& learner,
                                               std::uint64_t seed, const SynergyOptions& options, int jobs) {
  if (candidates.size() < 2) throw PidError("a curriculum needs at least two candidates");
  std::vector<std::size_t> remaining(candidates.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
  SynergyCurriculum out;
  out.library = std::make_shared<const Library>();
  for (std::size_t step = 0; !remaining.empty(); ++step) {
    struct Trial {
      std::shared_ptr<const Library> library;
      double synergy;
    };
    const std::uint64_t step_seed = derive_seed(seed, "curriculum.step", step);
    auto trials = parallel_map(remaining.size(), jobs, [&](std::size_t k) {
      const Melody& m = candidates.melodies[remaining[k]];
      auto lib = train_step(out.library, m, learner, derive_seed(step_seed, "train", m.id));
      const auto s = library_synergy(*lib, candidates, derive_seed(step_seed, "synergy"), options);
      return Trial{lib, s.synergy};
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < trials.size(); ++k) {
      if (trials[k].synergy > trials[best].synergy) best = k;
    }
    out.steps.push_back({candidates.melodies[remaining[best]].id, trials[best].synergy});
    out.library = trials[best].library;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

std::string curriculum_to_csv(const SynergyCurriculum& curriculum) {
  std::string out = "step,melody_id,synergy\n";
  char buf[64];
  for (std::size_t i = 0; i < curriculum.steps.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g", curriculum.steps[i].synergy);
    out += std::to_string(i) + "," + curriculum.steps[i].melody_id + "," + buf + "\n";
  }
  return out;
}

std::vector<std::string> ordering_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw PidError("empty curriculum file");
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) header.push_back(cell);
  }
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "melody_id") col = i;
  }
  if (col == header.size()) throw PidError("curriculum file has no melody_id column");
  std::vector<std::string> ids;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    for (std::size_t i = 0; std::getline(row, cell, ','); ++i) {
      if (i == col) ids.push_back(cell);
    }
  }
  return ids;
}

}  // namespace progrd
