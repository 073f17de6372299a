#include "progrd/grammar.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace progrd {

void GrammarParams::validate() const {
  std::vector<std::string> errs;
  if (!(p_terminal > 0.0 && p_terminal < 1.0)) errs.push_back("p_terminal must lie in (0, 1)");
  if (max_depth < 1) errs.push_back("max_depth must be >= 1");
  if (count_max < 1) errs.push_back("count_max must be >= 1");
  if (time_max < 1) errs.push_back("time_max must be >= 1");
  if (max_arity < 1) errs.push_back("max_arity must be >= 1");
  for (const auto& name : primitives) {
    if (!find_primitive(name)) errs.push_back("unknown primitive '" + name + "'");
  }
  if (intermediates.empty()) errs.push_back("intermediates must not be empty");
  if (!errs.empty()) {
    std::string msg = "invalid grammar parameters:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
}

namespace {

void collect_arg_types(const Type& t, std::set<Type>& out) {
  for (const auto& a : t.args()) {
    if (out.insert(a).second) collect_arg_types(a, out);
  }
}

}  // namespace

Grammar::Grammar(GrammarParams params) : params_(std::move(params)) {
  params_.validate();
  for (const auto& name : params_.primitives) {
    primitive_leaves_.push_back(Node::primitive(*find_primitive(name)));
  }

  // Argument alphabet: intermediates plus everything appearing as an argument.
  std::set<Type> arg_types(params_.intermediates.begin(), params_.intermediates.end());
  for (const auto& s : params_.intermediates) collect_arg_types(s, arg_types);
  for (const auto& leaf : primitive_leaves_) collect_arg_types(leaf->prim().signature, arg_types);
  const std::vector<Type> alphabet(arg_types.begin(), arg_types.end());

  std::vector<std::vector<Type>> lists = {{}};
  std::vector<std::vector<Type>> frontier = {{}};
  for (std::size_t len = 1; len <= params_.max_arity; ++len) {
    std::vector<std::vector<Type>> next;
    for (const auto& l : frontier) {
      for (const auto& a : alphabet) {
        auto e = l;
        e.push_back(a);
        next.push_back(std::move(e));
      }
    }
    lists.insert(lists.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const auto& l : lists) {
    for (BaseType b : {BaseType::Note, BaseType::Count, BaseType::Time}) {
      Type t(l, b);
      ids_.emplace(t, static_cast<TypeId>(types_.size()));
      types_.push_back(std::move(t));
    }
  }

  const std::size_t n_types = types_.size();
  std::vector<std::vector<Term>> terminals(n_types);
  for (std::size_t id = 0; id < n_types; ++id) {
    const Type& t = types_[id];
    for (const auto& leaf : primitive_leaves_) {
      if (leaf->prim().signature == t) terminals[id].push_back(leaf);
    }
    if (t.is_base()) {
      switch (t.result()) {
        case BaseType::Note:
          for (int v = 0; v < Note::kPitchClasses; ++v) terminals[id].push_back(Node::note(Note::pitch(v)));
          if (params_.pause_literal) terminals[id].push_back(Node::note(Note::pause()));
          break;
        case BaseType::Count:
          for (int v = 1; v <= params_.count_max; ++v) terminals[id].push_back(Node::count(v));
          break;
        case BaseType::Time:
          for (int v = 1; v <= params_.time_max; ++v) terminals[id].push_back(Node::time(v));
          break;
      }
    }
  }

  const double log_pt = std::log(params_.p_terminal);
  const double log_pr = std::log1p(-params_.p_terminal);
  expansions_.assign(static_cast<std::size_t>(params_.max_depth), std::vector<Expansion>(n_types));
  for (int depth = params_.max_depth; depth >= 1; --depth) {
    auto& level = expansions_[static_cast<std::size_t>(depth - 1)];
    for (std::size_t id = 0; id < n_types; ++id) {
      Expansion& e = level[id];
      const Type& t = types_[id];
      e.terminals = terminals[id];
      if (depth < params_.max_depth) {
        const auto& below = expansions_[static_cast<std::size_t>(depth)];
        const std::size_t max_len = std::min<std::size_t>(t.arity(), Router::kMaxLength);
        for (std::size_t len = 0; len <= max_len; ++len) {
          for (const Router& r : Router::all_of_length(len)) {
            RouterChoice choice{r, {}};
            for (const Type& s : params_.intermediates) {
              std::vector<Type> left_args, right_args;
              for (std::size_t i = 0; i < len; ++i) {
                if (r[i] != 'B') left_args.push_back(t.args()[i]);
                if (r[i] != 'C') right_args.push_back(t.args()[i]);
              }
              left_args.push_back(s);
              for (std::size_t i = len; i < t.arity(); ++i) left_args.push_back(t.args()[i]);
              Type left(std::move(left_args), t.result());
              Type right = Type::arrow(std::move(right_args), s);
              auto lit = ids_.find(left);
              auto rit = ids_.find(right);
              if (lit == ids_.end() || rit == ids_.end()) continue;
              if (!below[static_cast<std::size_t>(lit->second)].generable ||
                  !below[static_cast<std::size_t>(rit->second)].generable) {
                continue;
              }
              choice.options.push_back(Option{s, lit->second, rit->second});
            }
            if (!choice.options.empty()) e.routers.push_back(std::move(choice));
          }
        }
      }
      const bool term = !e.terminals.empty();
      const bool rec = !e.routers.empty();
      e.generable = term || rec;
      if (term && rec) {
        e.log_terminal = log_pt;
        e.log_recursive = log_pr;
      } else if (term) {
        e.log_terminal = 0.0;
      } else if (rec) {
        e.log_recursive = 0.0;
      }
    }
  }
}

std::optional<Grammar::TypeId> Grammar::type_id(const Type& t) const {
  auto it = ids_.find(t);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Grammar::TypeId Grammar::require(const Type& t) const {
  auto id = type_id(t);
  if (!id || !expansion(*id, 1).generable) {
    throw TypeError("type " + t.str() + " is not reachable in the grammar");
  }
  return *id;
}

const Grammar::Expansion& Grammar::expansion(TypeId id, int depth) const {
  return expansions_.at(static_cast<std::size_t>(depth - 1)).at(static_cast<std::size_t>(id));
}

bool Grammar::reachable(const Type& t) const {
  auto id = type_id(t);
  return id && expansion(*id, 1).generable;
}

Grammar::Step Grammar::step(const Node& node, TypeId target, int depth) const {
  Step st;
  if (depth < 1 || depth > params_.max_depth) return st;
  const Expansion& e = expansion(target, depth);
  if (!e.generable) return st;
  switch (node.kind()) {
    case Node::Kind::Hole:
      return st;
    case Node::Kind::Base:
    case Node::Kind::Primitive: {
      if (e.terminals.empty()) return st;
      for (const auto& leaf : e.terminals) {
        if (leaf->text() == node.text()) {
          st.log_local = e.log_terminal - std::log(static_cast<double>(e.terminals.size()));
          return st;
        }
      }
      return st;
    }
    case Node::Kind::App: {
      if (e.routers.empty()) return st;
      const auto& right_type = node.right()->type();
      if (!right_type) return st;
      const std::size_t jg = node.router().right_count();
      if (right_type->arity() < jg) return st;
      const Type s = right_type->drop_args(jg);
      for (const auto& choice : e.routers) {
        if (!(choice.router == node.router())) continue;
        for (const auto& opt : choice.options) {
          if (opt.intermediate == s) {
            st.log_local = e.log_recursive -
                           std::log(static_cast<double>(e.routers.size())) -
                           std::log(static_cast<double>(choice.options.size()));
            st.left = opt.left;
            st.right = opt.right;
            return st;
          }
        }
        return st;
      }
      return st;
    }
  }
  return st;
}

Term Grammar::sample_step(TypeId target, int depth, Rng& rng, const ChildSampler& child) const {
  const Expansion& e = expansion(target, depth);
  if (!e.generable) throw TypeError("type " + type_of(target).str() + " is not reachable");
  const bool terminal = e.routers.empty() || (!e.terminals.empty() && rng.bernoulli(std::exp(e.log_terminal)));
  if (terminal) return e.terminals[rng.uniform(e.terminals.size())];
  return sample_recursive(target, depth, rng, child);
}

Term Grammar::sample_recursive(TypeId target, int depth, Rng& rng, const ChildSampler& child) const {
  const Expansion& e = expansion(target, depth);
  const RouterChoice& choice = e.routers[rng.uniform(e.routers.size())];
  const Option& opt = choice.options[rng.uniform(choice.options.size())];
  Term left = child(opt.left, depth + 1, rng);
  Term right = child(opt.right, depth + 1, rng);
  return Node::app(choice.router, std::move(left), std::move(right));
}

Term Grammar::sample_at(TypeId target, int depth, Rng& rng) const {
  return sample_step(target, depth, rng,
                     [this](TypeId t, int d, Rng& r) { return sample_at(t, d, r); });
}

double Grammar::log_prior_at(const Term& term, TypeId target, int depth) const {
  Step st = step(*term, target, depth);
  if (st.log_local == kNegInf || term->is_leaf()) return st.log_local;
  double l = log_prior_at(term->left(), st.left, depth + 1);
  if (l == kNegInf) return kNegInf;
  double r = log_prior_at(term->right(), st.right, depth + 1);
  return st.log_local + l + r;
}

Program Grammar::sample_program(const Type& t, Rng& rng) const {
  Term term = sample_at(require(t), 1, rng);
  return Program{std::move(term), t};
}

double Grammar::log_prior(const Term& term, const Type& type) const {
  auto id = type_id(type);
  if (!id) return kNegInf;
  return log_prior_at(term, *id, 1);
}

double Grammar::partial_rec(const Term& t, TypeId target, int depth) const {
  if (t->is_hole()) return t->hole_type() == type_of(target) ? 0.0 : kNegInf;
  Step st = step(*t, target, depth);
  if (st.log_local == kNegInf || t->is_leaf()) return st.log_local;
  return st.log_local + partial_rec(t->left(), st.left, depth + 1) +
         partial_rec(t->right(), st.right, depth + 1);
}

double Grammar::log_prior_partial(const Term& term, const Type& type) const {
  auto id = type_id(type);
  if (!id) return kNegInf;
  return partial_rec(term, *id, 1);
}

void Grammar::leaf_rec(const Term& t, TypeId target, int depth, std::vector<double>& out) const {
  if (t->is_hole()) {
    out.push_back(0.0);
    return;
  }
  Step st = step(*t, target, depth);
  if (t->is_leaf()) {
    out.push_back(st.log_local);
    return;
  }
  if (st.log_local == kNegInf) {
    // Not generable; report the subtree's leaves as impossible.
    for (std::size_t i = 0; i < leaves(t).size(); ++i) out.push_back(kNegInf);
    return;
  }
  leaf_rec(t->left(), st.left, depth + 1, out);
  leaf_rec(t->right(), st.right, depth + 1, out);
}

std::vector<double> Grammar::leaf_log_probs(const Term& term, const Type& type) const {
  std::vector<double> out;
  auto id = type_id(type);
  if (!id) {
    out.assign(leaves(term).size(), kNegInf);
    return out;
  }
  leaf_rec(term, *id, 1, out);
  return out;
}

Term Grammar::sample(const Type& type, Rng& rng) const { return sample_at(require(type), 1, rng); }

namespace {

constexpr std::size_t kEnumerationCap = 5'000'000;

struct Enumerator {
  const Grammar& g;

  Grammar::Enumeration run(Grammar::TypeId target, int depth, int levels) {
    Grammar::Enumeration out;
    const auto& e = g.expansion(target, depth);
    if (!e.generable) return out;
    for (const auto& leaf : e.terminals) {
      out.programs.emplace_back(leaf, e.log_terminal - std::log(static_cast<double>(e.terminals.size())));
    }
    if (e.routers.empty()) return out;
    if (levels <= 1) {
      out.residual = std::exp(e.log_recursive);
      return out;
    }
    for (const auto& choice : e.routers) {
      const double log_w = e.log_recursive - std::log(static_cast<double>(e.routers.size())) -
                           std::log(static_cast<double>(choice.options.size()));
      for (const auto& opt : choice.options) {
        Grammar::Enumeration left = run(opt.left, depth + 1, levels - 1);
        Grammar::Enumeration right = run(opt.right, depth + 1, levels - 1);
        out.residual += std::exp(log_w) * (1.0 - (1.0 - left.residual) * (1.0 - right.residual));
        if (out.programs.size() + left.programs.size() * right.programs.size() > kEnumerationCap) {
          throw ConfigError("enumeration exceeds the size guard");
        }
        for (const auto& [lt, lp] : left.programs) {
          for (const auto& [rt, rp] : right.programs) {
            out.programs.emplace_back(Node::app(choice.router, lt, rt), log_w + lp + rp);
          }
        }
      }
    }
    return out;
  }
};

}  // namespace

Grammar::Enumeration Grammar::enumerate(const Type& t, int max_depth) const {
  if (max_depth < 1 || max_depth > 4) throw ConfigError("enumeration depth must be in [1, 4]");
  const TypeId id = require(t);
  return Enumerator{*this}.run(id, 1, std::min(max_depth, params_.max_depth));
}

}  // namespace progrd
