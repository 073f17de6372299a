#pragma once

// Type tags for the typed combinator language.
//
// Arrow types are kept in uncurried form: `a -> b -> n` is stored as the
// argument list {a, b} and the base result n.  Arguments may themselves be
// arrows, e.g. iter has type (n->n) -> n -> c -> n.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace progrd {

enum class BaseType : std::uint8_t { Note, Count, Time };

char base_letter(BaseType b);

class Type {
 public:
  Type() = default;
  Type(BaseType base) : result_(base) {}  // NOLINT: implicit by design of the tag set
  Type(std::vector<Type> args, BaseType result);

  // Builds args -> result, flattening an arrow result into the argument list.
  static Type arrow(std::vector<Type> args, const Type& result);

  bool is_base() const { return args_.empty(); }
  std::size_t arity() const { return args_.size(); }
  const std::vector<Type>& args() const { return args_; }
  BaseType result() const { return result_; }

  // The type left after supplying the first n arguments.
  Type drop_args(std::size_t n) const;

  std::string str() const;

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator<(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

 private:
  std::vector<Type> args_;
  BaseType result_ = BaseType::Note;
};

inline const Type kNoteT{BaseType::Note};
inline const Type kCountT{BaseType::Count};
inline const Type kTimeT{BaseType::Time};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses the printed form: "n", "c", "m", "n->n", "(n->n)->n->c->n".
Type parse_type(std::string_view text);

}  // namespace progrd

template <>
struct std::hash<progrd::Type> {
  std::size_t operator()(const progrd::Type& t) const noexcept {
    return std::hash<std::string>{}(t.str());
  }
};
