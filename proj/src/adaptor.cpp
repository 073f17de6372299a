#include "progrd/adaptor.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace progrd {

using nlohmann::json;

void PYParams::validate() const {
  std::vector<std::string> errs;
  if (!(alpha > 0.0)) errs.push_back("alpha must be > 0");
  if (!(discount > 0.0 && discount < 1.0)) errs.push_back("discount must lie in (0, 1)");
  if (!errs.empty()) {
    std::string msg = "invalid Pitman-Yor parameters:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
}

long Cache::find(const std::string& text) const {
  auto it = index_.find(text);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

long Cache::count(const std::string& text) const {
  const long i = find(text);
  return i < 0 ? 0 : entries_[static_cast<std::size_t>(i)].count;
}

void Cache::add(const Term& term, long k) {
  auto [it, inserted] = index_.emplace(term->text(), entries_.size());
  if (inserted) entries_.push_back({term, 0});
  entries_[it->second].count += k;
  total_ += k;
}

PYWeights py_probabilities(const Cache& cache, const PYParams& py) {
  PYWeights w;
  if (cache.total() == 0) return w;
  const auto n = static_cast<double>(cache.distinct());
  const auto c = static_cast<double>(cache.total());
  w.lambda1 = (py.alpha + n * py.discount) / (py.alpha + c);
  const double denom = c - n * py.discount;
  for (const auto& e : cache.entries()) {
    w.lambda2.push_back((static_cast<double>(e.count) - py.discount) / denom);
  }
  return w;
}

const Cache* Library::cache(const Type& t) const {
  auto it = caches_.find(t);
  return it == caches_.end() ? nullptr : &it->second;
}

std::size_t Library::distinct() const {
  std::size_t n = 0;
  for (const auto& [t, c] : caches_) n += c.distinct();
  return n;
}

long Library::total() const {
  long n = 0;
  for (const auto& [t, c] : caches_) n += c.total();
  return n;
}

bool operator==(const Library& a, const Library& b) {
  if (a.caches_.size() != b.caches_.size()) return false;
  for (auto ia = a.caches_.begin(), ib = b.caches_.begin(); ia != a.caches_.end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return false;
    const auto& ea = ia->second.entries();
    const auto& eb = ib->second.entries();
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
      if (ea[i].count != eb[i].count || ea[i].term->text() != eb[i].term->text()) return false;
    }
  }
  return true;
}

Library update_library(const Library& library, const std::vector<Term>& used) {
  Library out = library;
  for (const auto& p : used) {
    for (const auto& sub : subprograms(p)) out.mutable_cache(*sub->type()).add(sub);
  }
  return out;
}

Library update_library_roots(const Library& library, const std::vector<Term>& used) {
  Library out = library;
  for (const auto& p : used) {
    if (p->complete()) out.mutable_cache(check_type(p)).add(p);
  }
  return out;
}

json library_to_json(const Library& library) {
  json caches = json::object();
  for (const auto& [t, c] : library.caches()) {
    json list = json::array();
    for (const auto& e : c.entries()) list.push_back(json::array({e.term->text(), e.count}));
    caches[t.str()] = std::move(list);
  }
  return {{"schema_version", 1}, {"caches", std::move(caches)}};
}

Library library_from_json(const json& doc) {
  if (!doc.is_object() || doc.value("schema_version", 0) != 1 || !doc.contains("caches") ||
      !doc["caches"].is_object()) {
    throw ConfigError("library JSON must have schema_version 1 and a 'caches' object");
  }
  Library lib;
  for (const auto& [key, list] : doc["caches"].items()) {
    const Type t = parse_type(key);
    if (!list.is_array()) throw ConfigError("cache '" + key + "' must be an array");
    for (const auto& e : list) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number_integer() ||
          e[1].get<long>() < 1) {
        throw ConfigError("cache '" + key + "': entries must be [program text, count >= 1]");
      }
      Term term = parse_term(e[0].get<std::string>());
      if (!term->complete() || check_type(term) != t) {
        throw ConfigError("cache '" + key + "': program " + term->text() + " does not have that type");
      }
      lib.mutable_cache(t).add(term, e[1].get<long>());
    }
  }
  return lib;
}

AdaptorModel::AdaptorModel(const Grammar& grammar, std::shared_ptr<const Library> library, PYParams py)
    : grammar_(grammar), library_(std::move(library)), py_(py) {
  py_.validate();
  for (const auto& [t, c] : library_->caches()) {
    auto id = grammar_.type_id(t);
    if (!id) continue;
    Table tab;
    for (const auto& e : c.entries()) {
      if (py_.adapt_leaves || !e.term->is_leaf()) tab.cache.add(e.term, e.count);
    }
    if (tab.cache.total() == 0) continue;
    tab.w = py_probabilities(tab.cache, py_);
    double acc = 0.0;
    for (double l : tab.w.lambda2) tab.cumulative.push_back(acc += l);
    tables_.emplace(*id, std::move(tab));
  }
}

const AdaptorModel::Table* AdaptorModel::table(Grammar::TypeId id) const {
  auto it = tables_.find(id);
  return it == tables_.end() ? nullptr : &it->second;
}

namespace {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

double AdaptorModel::score(const Term& t, Grammar::TypeId target, int depth,
                           std::vector<double>* leaf_out) const {
  if (t->is_hole()) {
    if (leaf_out) leaf_out->push_back(0.0);
    return t->hole_type() == grammar_.type_of(target) ? 0.0 : kNegInf;
  }
  const Grammar::Step st = grammar_.step(*t, target, depth);
  const std::size_t mark = leaf_out ? leaf_out->size() : 0;
  double construct = st.log_local;
  if (!t->is_leaf()) {
    if (st.log_local == kNegInf) {
      if (leaf_out) leaf_out->resize(mark + leaves(t).size(), kNegInf);
    } else {
      const double l = score(t->left(), st.left, depth + 1, leaf_out);
      const double r = score(t->right(), st.right, depth + 1, leaf_out);
      construct = st.log_local + l + r;
    }
  }
  const Table* tab = table(target);
  double out = construct;
  if (tab && (py_.adapt_leaves || !t->is_leaf())) {
    const long i = t->complete() ? tab->cache.find(t->text()) : -1;
    double cached =
        i < 0 ? kNegInf : std::log1p(-tab->w.lambda1) + std::log(tab->w.lambda2[static_cast<std::size_t>(i)]);
    if (!py_.adapt_leaves) cached += grammar_.expansion(target, depth).log_recursive;
    out = log_add(std::log(tab->w.lambda1) + construct, cached);
  }
  if (leaf_out && t->is_leaf()) leaf_out->push_back(out);
  return out;
}

double AdaptorModel::log_prior(const Term& term, const Type& type) const {
  auto id = grammar_.type_id(type);
  if (!id || !term->complete()) return kNegInf;
  return score(term, *id, 1, nullptr);
}

double AdaptorModel::log_prior_partial(const Term& term, const Type& type) const {
  auto id = grammar_.type_id(type);
  if (!id) return kNegInf;
  return score(term, *id, 1, nullptr);
}

std::vector<double> AdaptorModel::leaf_log_probs(const Term& term, const Type& type) const {
  std::vector<double> out;
  auto id = grammar_.type_id(type);
  if (!id) {
    out.assign(leaves(term).size(), kNegInf);
    return out;
  }
  score(term, *id, 1, &out);
  return out;
}

Term AdaptorModel::draw(Grammar::TypeId target, int depth, Rng& rng) const {
  const auto child = [this](Grammar::TypeId t, int d, Rng& r) { return draw(t, d, r); };
  const Table* tab = table(target);
  if (!tab) return grammar_.sample_step(target, depth, rng, child);
  const auto cached = [&] {
    const double u = rng.uniform01() * tab->cumulative.back();
    auto it = std::upper_bound(tab->cumulative.begin(), tab->cumulative.end(), u);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - tab->cumulative.begin()),
                                         tab->cumulative.size() - 1);
    return tab->cache.entries()[i].term;
  };
  if (py_.adapt_leaves) {
    if (rng.uniform01() >= tab->w.lambda1) return cached();
    return grammar_.sample_step(target, depth, rng, child);
  }
  const Grammar::Expansion& e = grammar_.expansion(target, depth);
  if (e.routers.empty() || (!e.terminals.empty() && rng.bernoulli(std::exp(e.log_terminal)))) {
    return e.terminals[rng.uniform(e.terminals.size())];
  }
  if (rng.uniform01() >= tab->w.lambda1) return cached();
  return grammar_.sample_recursive(target, depth, rng, child);
}

Term AdaptorModel::sample(const Type& type, Rng& rng) const {
  return draw(grammar_.require(type), 1, rng);
}

double AdaptorModel::reuse_probability(const Type& type) const {
  auto id = grammar_.type_id(type);
  const Table* tab = id ? table(*id) : nullptr;
  if (!tab) return 0.0;
  const double reuse = 1.0 - tab->w.lambda1;
  return py_.adapt_leaves ? reuse : reuse * std::exp(grammar_.expansion(*id, 1).log_recursive);
}

double uniqueness_ratio(const std::vector<std::vector<Term>>& per_melody) {
  if (per_melody.size() < 2) throw std::invalid_argument("uniqueness ratio needs at least two melodies");
  std::map<std::string, int> melodies_using;
  for (const auto& progs : per_melody) {
    std::set<std::string> seen;
    for (const auto& t : progs) seen.insert(t->text());
    for (const auto& s : seen) ++melodies_using[s];
  }
  if (melodies_using.empty()) return 0.0;
  std::size_t unique = 0;
  for (const auto& [s, k] : melodies_using) unique += k == 1;
  return static_cast<double>(unique) / static_cast<double>(melodies_using.size());
}

}  // namespace progrd
