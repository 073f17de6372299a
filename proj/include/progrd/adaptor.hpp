#pragma once

// Pitman-Yor adaptor grammar over the program grammar.
//
// At every generation step with target type t the model either constructs a
// node with the grammar's step (probability lambda1, children generated by
// the adaptor again) or returns a program from the cache C_t, chosen with
// probability lambda2(pi) = (M_pi - d) / (|C_t| - N_t d), where
// lambda1 = (alpha + N_t d) / (alpha + |C_t|).

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "progrd/grammar.hpp"

namespace progrd {

struct PYParams {
  double alpha = 1.0;
  double discount = 0.5;
  // When false, leaves keep their grammar probability and the caches adapt
  // only the application branch; leaf entries of the library are ignored.
  bool adapt_leaves = false;

  void validate() const;  // throws ConfigError
};

// Multiset of complete programs of one type, in first-insertion order.
class Cache {
 public:
  struct Entry {
    Term term;
    long count = 0;
  };

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t distinct() const { return entries_.size(); }  // N_t
  long total() const { return total_; }                      // |C_t|
  long count(const std::string& text) const;
  // Index of the entry, or -1.
  long find(const std::string& text) const;

  void add(const Term& term, long k = 1);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  long total_ = 0;
};

struct PYWeights {
  double lambda1 = 1.0;
  std::vector<double> lambda2;  // parallel to Cache::entries()
};

PYWeights py_probabilities(const Cache& cache, const PYParams& py);

class Library {
 public:
  const Cache* cache(const Type& t) const;
  const std::map<Type, Cache>& caches() const { return caches_; }
  bool empty() const { return caches_.empty(); }
  std::size_t distinct() const;
  long total() const;

  Cache& mutable_cache(const Type& t) { return caches_[t]; }

  friend bool operator==(const Library& a, const Library& b);

 private:
  std::map<Type, Cache> caches_;
};

// Adds every complete subtree of each used program (root included) to the
// cache of its type.  The input library is not modified.
Library update_library(const Library& library, const std::vector<Term>& used);
// Root programs only.
Library update_library_roots(const Library& library, const std::vector<Term>& used);

nlohmann::json library_to_json(const Library& library);
Library library_from_json(const nlohmann::json& doc);  // throws ConfigError

class AdaptorModel : public ProgramModel {
 public:
  AdaptorModel(const Grammar& grammar, std::shared_ptr<const Library> library, PYParams py = {});

  const Grammar& grammar() const { return grammar_; }
  const Library& library() const { return *library_; }
  const PYParams& py() const { return py_; }

  double log_prior(const Term& term, const Type& type) const override;
  double log_prior_partial(const Term& term, const Type& type) const override;
  std::vector<double> leaf_log_probs(const Term& term, const Type& type) const override;
  Term sample(const Type& type, Rng& rng) const override;

  // Probability that a draw at the type returns a cached program.
  double reuse_probability(const Type& type) const;

 private:
  struct Table {
    Cache cache;
    PYWeights w;
    std::vector<double> cumulative;  // of lambda2
  };
  const Table* table(Grammar::TypeId id) const;
  double score(const Term& t, Grammar::TypeId target, int depth, std::vector<double>* leaf_out) const;
  Term draw(Grammar::TypeId target, int depth, Rng& rng) const;

  const Grammar& grammar_;
  std::shared_ptr<const Library> library_;
  PYParams py_;
  std::unordered_map<Grammar::TypeId, Table> tables_;
};

// Fraction of distinct subprograms that occur in exactly one melody's
// encoding.  Throws std::invalid_argument for fewer than two melodies.
double uniqueness_ratio(const std::vector<std::vector<Term>>& per_melody);
inline double shared_subprogram_ratio(const std::vector<std::vector<Term>>& per_melody) {
  return 1.0 - uniqueness_ratio(per_melody);
}

}  // namespace progrd
