#pragma once

// Immutable combinator terms.
//
// A term is a binary application tree.  Each application node carries a
// router: a string over {B, C, S} with one letter per argument it routes.
// Applied to arguments a1..aj, the node [r, f, g] sends ai to g when r[i] is
// B, to f when r[i] is C, and to both when r[i] is S; the result is
// (f <left args> (g <right args>)) followed by any further arguments.  An
// empty router is plain application, printed as [f, g].

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "progrd/note.hpp"
#include "progrd/types.hpp"

namespace progrd {

enum class Op : std::uint8_t { Up, Down, Rep, Get, Concat, Iter };

struct Primitive {
  std::string name;
  Op op;
  Type signature;
};

// The built-in function terms: up, down, rep, get, concat, iter.
std::span<const Primitive> builtin_primitives();
const Primitive* find_primitive(std::string_view name);

class Router {
 public:
  static constexpr std::size_t kMaxLength = 2;

  Router() = default;
  explicit Router(std::string dirs);

  std::size_t size() const { return dirs_.size(); }
  bool empty() const { return dirs_.empty(); }
  char operator[](std::size_t i) const { return dirs_[i]; }
  const std::string& str() const { return dirs_; }

  std::size_t left_count() const;   // C or S
  std::size_t right_count() const;  // B or S

  // All routers of exactly the given length, in B < C < S order.
  static std::vector<Router> all_of_length(std::size_t n);

  friend bool operator==(const Router& a, const Router& b) { return a.dirs_ == b.dirs_; }

 private:
  std::string dirs_;
};

class Node;
using Term = std::shared_ptr<const Node>;

class Node {
  struct Key {};

 public:
  enum class Kind : std::uint8_t { Base, Primitive, Hole, App };

  static Term note(Note n);
  static Term count(int c);
  static Term time(int m);
  static Term base(BaseType kind, int value);
  static Term primitive(const Primitive& p);
  static Term hole(Type expected);
  static Term app(Router router, Term left, Term right);

  Node(Key, Kind kind) : kind_(kind) {}

  Kind kind() const { return kind_; }
  bool is_leaf() const { return kind_ != Kind::App; }
  bool is_hole() const { return kind_ == Kind::Hole; }

  BaseType base_kind() const { return base_kind_; }
  int base_value() const { return value_; }
  const Primitive& prim() const { return *prim_; }
  const Type& hole_type() const { return *type_; }
  const Router& router() const { return router_; }
  const Term& left() const { return left_; }
  const Term& right() const { return right_; }

  // Canonical printed form; structural identity of subprograms.
  const std::string& text() const { return text_; }
  // Inferred type, or nullopt when the tree is ill-typed.
  const std::optional<Type>& type() const { return type_; }

  int size() const { return size_; }
  int depth() const { return depth_; }
  int hole_count() const { return holes_; }
  bool complete() const { return holes_ == 0; }

 private:
  Kind kind_;
  BaseType base_kind_ = BaseType::Note;
  int value_ = 0;
  const Primitive* prim_ = nullptr;
  Router router_;
  Term left_, right_;
  std::string text_;
  std::optional<Type> type_;
  int size_ = 1;
  int depth_ = 1;
  int holes_ = 0;
};

// A closed or open term paired with its inferred type.
struct Program {
  Term root;
  Type type;

  // Throws TypeError when the term does not type-check.
  static Program of(Term root);
  const std::string& text() const { return root->text(); }
};

// Returns the unique type of the term or throws TypeError naming the problem.
Type check_type(const Term& term);

// Parses the canonical text form, e.g. "[CB, [B, up, n2], c3]".
Term parse_term(std::string_view text);

// All complete subtrees in preorder, root first.  Duplicates are kept.
std::vector<Term> subprograms(const Term& term);

// Leaves in preorder.
std::vector<Term> leaves(const Term& term);

// Replaces the node reached by a preorder index with a replacement term.
Term replace_at(const Term& term, int preorder_index, const Term& replacement);

bool same_term(const Term& a, const Term& b);

}  // namespace progrd
