#pragma once

#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "progrd/note.hpp"
#include "progrd/term.hpp"

namespace progrd {

struct Count {
  int value;
  friend bool operator==(Count, Count) = default;
};

struct TimeIndex {
  int value;
  friend bool operator==(TimeIndex, TimeIndex) = default;
};

struct Value;

// A partially applied term.
struct Closure {
  Term term;
  std::vector<Value> bound;
};

struct Value {
  std::variant<NoteSeq, Count, TimeIndex, Closure> v;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A resource limit was hit; the program itself may be well-typed.
class EvalLimitError : public EvalError {
 public:
  using EvalError::EvalError;
};

struct EvalLimits {
  int max_steps = 10'000;
  std::size_t max_output = 1024;
};

// Reduces the term applied to args and returns the produced note sequence.
// Throws EvalError on arity mismatch, holes, or when a limit is exceeded.
NoteSeq evaluate(const Term& program, std::span<const Value> args = {},
                 const EvalLimits& limits = {});

inline NoteSeq evaluate(const Program& program, std::span<const Value> args = {},
                        const EvalLimits& limits = {}) {
  return evaluate(program.root, args, limits);
}

}  // namespace progrd
