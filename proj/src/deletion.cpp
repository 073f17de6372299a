#include "progrd/deletion.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace progrd {

double description_length(const Term& term, const Type& type, const ProgramModel& model) {
  return to_bits(model.log_prior_partial(term, type));
}

namespace {

void collect_leaves(const Term& t, int& index, std::vector<int>& out) {
  const int here = index++;
  if (t->is_leaf()) {
    out.push_back(here);
    return;
  }
  collect_leaves(t->left(), index, out);
  collect_leaves(t->right(), index, out);
}

const Node* find_node(const Term& t, int target, int& index) {
  if (index++ == target) return t.get();
  if (t->is_leaf()) return nullptr;
  if (auto n = find_node(t->left(), target, index)) return n;
  return find_node(t->right(), target, index);
}

void collect_collapsible(const Term& t, int& index, std::vector<int>& out) {
  const int here = index++;
  if (t->is_leaf()) return;
  if (t->left()->is_hole() && t->right()->is_hole()) out.push_back(here);
  collect_collapsible(t->left(), index, out);
  collect_collapsible(t->right(), index, out);
}

}  // namespace

std::vector<int> leaf_positions(const Term& term) {
  std::vector<int> out;
  int index = 0;
  collect_leaves(term, index, out);
  return out;
}

std::vector<int> collapsible_nodes(const Term& term) {
  std::vector<int> out;
  int index = 0;
  collect_collapsible(term, index, out);
  return out;
}

const Node& node_at(const Term& term, int preorder_index) {
  int index = 0;
  const Node* n = find_node(term, preorder_index, index);
  if (!n) throw std::out_of_range("preorder index out of range");
  return *n;
}

Term delete_terms(const Term& term, const Type& type, double max_bits, const ProgramModel& model) {
  Term cur = term;
  if (description_length(cur, type, model) <= max_bits) return cur;

  const std::vector<int> positions = leaf_positions(term);
  const std::vector<double> lp = model.leaf_log_probs(term, type);
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lp[a] > lp[b]; });

  // Leaf replacement keeps the tree shape, so preorder indices stay valid.
  for (std::size_t k : order) {
    const Node& leaf = node_at(cur, positions[k]);
    if (leaf.is_hole()) continue;
    cur = replace_at(cur, positions[k], Node::hole(*leaf.type()));
    if (description_length(cur, type, model) <= max_bits) return cur;
  }

  while (!cur->is_hole()) {
    Term best;
    double best_bits = kNegInf;
    for (int c : collapsible_nodes(cur)) {
      Term next = replace_at(cur, c, Node::hole(*node_at(cur, c).type()));
      const double b = description_length(next, type, model);
      // keep the most bits, i.e. free the fewest
      if (!best || b > best_bits) {
        best = next;
        best_bits = b;
      }
    }
    cur = best;
    if (best_bits <= max_bits) return cur;
  }
  return cur;
}

namespace {

Term fill(const Term& t, const ProgramModel& model, Rng& rng) {
  if (t->is_hole()) return model.sample(t->hole_type(), rng);
  if (t->is_leaf() || t->complete()) return t;
  return Node::app(t->router(), fill(t->left(), model, rng), fill(t->right(), model, rng));
}

}  // namespace

Term fill_holes(const Term& partial, const ProgramModel& model, Rng& rng) {
  return fill(partial, model, rng);
}

NoteSeq reconstruct(const Term& partial, const ProgramModel& model, Rng& rng,
                    const ReconstructOptions& options) {
  std::string last;
  for (int attempt = 0; attempt < std::max(1, options.max_retries); ++attempt) {
    try {
      return evaluate(fill_holes(partial, model, rng), {}, options.limits);
    } catch (const EvalError& e) {
      if (partial->complete()) throw;
      last = e.what();
    }
  }
  throw EvalError("reconstruction failed after " + std::to_string(options.max_retries) +
                  " attempts: " + last);
}

}  // namespace progrd
