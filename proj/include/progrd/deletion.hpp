#pragma once

// Description length, rate-constrained term deletion and reconstruction of
// partial programs by sampling their holes from a prior.

#include "progrd/eval.hpp"
#include "progrd/grammar.hpp"

namespace progrd {

// Preorder indices of the leaves, and of application nodes whose two
// children are holes.
std::vector<int> leaf_positions(const Term& term);
std::vector<int> collapsible_nodes(const Term& term);
const Node& node_at(const Term& term, int preorder_index);

// -log2 p(term) under the model; holes cost nothing.  Infinite when the
// term is not generable.
double description_length(const Term& term, const Type& type, const ProgramModel& model);

// Replaces leaves by typed holes, highest prior probability first, until the
// description length is at most max_bits.  If every leaf is gone and the
// budget is still exceeded, application nodes whose children are all holes
// are collapsed (the one freeing the fewest bits first) down to a single
// hole of the program type.
Term delete_terms(const Term& term, const Type& type, double max_bits, const ProgramModel& model);

// Term with every hole replaced by an independent draw from the model.
Term fill_holes(const Term& partial, const ProgramModel& model, Rng& rng);

struct ReconstructOptions {
  int max_retries = 50;
  EvalLimits limits;
};

// Fills the holes and evaluates; a draw that fails to evaluate is redrawn.
// Throws EvalError when every attempt fails.
NoteSeq reconstruct(const Term& partial, const ProgramModel& model, Rng& rng,
                    const ReconstructOptions& options = {});

}  // namespace progrd
