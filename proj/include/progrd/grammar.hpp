#pragma once

// Type-driven probabilistic grammar over combinator programs.
//
// Generation of a program of type T at node depth d:
//   * terminal expansion: a leaf whose type is exactly T, uniform over the
//     enabled primitives of that signature and (for base T) the base alphabet;
//   * recursive expansion: a router r of length 0..min(arity(T), 2), uniform
//     over admissible routers, then an intermediate type s uniform over the
//     admissible ones for r; the left subtree gets (args routed left, s,
//     unrouted args) -> result and the right subtree (args routed right) -> s.
// The terminal branch has probability p_terminal when both branches are
// possible and 1 (resp. 0) when only one is; at max_depth only terminals are
// allowed.  An option is admissible when both subtree types are generable in
// the remaining depth, so the sampler never fails and the scorer's trace
// probability matches it exactly.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "progrd/rng.hpp"
#include "progrd/term.hpp"

namespace progrd {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.69314718055994530942;

inline double to_bits(double log_prob) { return -log_prob / kLn2; }

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GrammarParams {
  std::vector<std::string> primitives = {"up", "down", "rep", "get", "concat", "iter"};
  double p_terminal = 0.7;
  int max_depth = 4;
  int count_max = 16;
  int time_max = 16;
  bool pause_literal = true;
  std::vector<Type> intermediates = {kNoteT, kCountT, kTimeT, Type({kNoteT}, BaseType::Note)};
  std::size_t max_arity = 3;

  // Throws ConfigError listing every violated constraint.
  void validate() const;
};

// Interface shared by the plain grammar and the library-adapted grammar.
// Log-probabilities are natural logs.
class ProgramModel {
 public:
  virtual ~ProgramModel() = default;

  virtual double log_prior(const Term& term, const Type& type) const = 0;
  // Generated parts of a partial program; holes contribute nothing.
  virtual double log_prior_partial(const Term& term, const Type& type) const = 0;
  // Log-probability of each leaf at its position, leaves in preorder.
  virtual std::vector<double> leaf_log_probs(const Term& term, const Type& type) const = 0;
  virtual Term sample(const Type& type, Rng& rng) const = 0;
};

class Grammar : public ProgramModel {
 public:
  using TypeId = int;

  struct Option {
    Type intermediate;
    TypeId left, right;
  };
  struct RouterChoice {
    Router router;
    std::vector<Option> options;
  };
  struct Expansion {
    bool generable = false;
    std::vector<Term> terminals;
    double log_terminal = kNegInf;  // branch log-probabilities
    double log_recursive = kNegInf;
    std::vector<RouterChoice> routers;
  };
  // Outcome of scoring one node against a target.
  struct Step {
    double log_local = kNegInf;
    TypeId left = -1, right = -1;
  };

  explicit Grammar(GrammarParams params);

  const GrammarParams& params() const { return params_; }

  std::optional<TypeId> type_id(const Type& t) const;
  const Type& type_of(TypeId id) const { return types_[static_cast<std::size_t>(id)]; }
  const Expansion& expansion(TypeId id, int depth) const;
  bool reachable(const Type& t) const;
  // Id of a type generable at the root; throws TypeError otherwise.
  TypeId require(const Type& t) const;

  // Local choice probability of the node (terminal pick or router and
  // intermediate pick) and the targets of its children.
  Step step(const Node& node, TypeId target, int depth) const;

  Term sample_at(TypeId target, int depth, Rng& rng) const;
  // One generation step at the target; subtrees come from the callback.
  using ChildSampler = std::function<Term(TypeId, int, Rng&)>;
  Term sample_step(TypeId target, int depth, Rng& rng, const ChildSampler& child) const;
  // The recursive branch alone; the expansion must have routers.
  Term sample_recursive(TypeId target, int depth, Rng& rng, const ChildSampler& child) const;
  double log_prior_at(const Term& term, TypeId target, int depth) const;

  Program sample_program(const Type& t, Rng& rng) const;

  double log_prior(const Term& term, const Type& type) const override;
  double log_prior_partial(const Term& term, const Type& type) const override;
  std::vector<double> leaf_log_probs(const Term& term, const Type& type) const override;
  Term sample(const Type& type, Rng& rng) const override;

  struct Enumeration {
    std::vector<std::pair<Term, double>> programs;  // with exact log-priors
    double residual = 0.0;  // mass of programs deeper than the cut
  };
  // Every generable program of the type within max_depth levels (<= 4).
  Enumeration enumerate(const Type& t, int max_depth) const;

 private:
  double partial_rec(const Term& t, TypeId target, int depth) const;
  void leaf_rec(const Term& t, TypeId target, int depth, std::vector<double>& out) const;

  GrammarParams params_;
  std::vector<Type> types_;
  std::map<Type, TypeId> ids_;
  std::vector<Term> primitive_leaves_;
  // expansions_[depth - 1][type id]
  std::vector<std::vector<Expansion>> expansions_;
};

}  // namespace progrd
