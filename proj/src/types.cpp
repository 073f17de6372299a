#include "progrd/types.hpp"

#include <cctype>

namespace progrd {

char base_letter(BaseType b) {
  switch (b) {
    case BaseType::Note: return 'n';
    case BaseType::Count: return 'c';
    case BaseType::Time: return 'm';
  }
  return '?';
}

Type::Type(std::vector<Type> args, BaseType result)
    : args_(std::move(args)), result_(result) {}

Type Type::arrow(std::vector<Type> args, const Type& result) {
  args.insert(args.end(), result.args_.begin(), result.args_.end());
  return Type(std::move(args), result.result_);
}

Type Type::drop_args(std::size_t n) const {
  if (n > args_.size()) throw TypeError("too many arguments for type " + str());
  return Type(std::vector<Type>(args_.begin() + static_cast<std::ptrdiff_t>(n), args_.end()),
              result_);
}

std::string Type::str() const {
  std::string out;
  for (const auto& a : args_) {
    if (a.is_base()) {
      out += a.str();
    } else {
      out += '(' + a.str() + ')';
    }
    out += "->";
  }
  out += base_letter(result_);
  return out;
}

bool operator==(const Type& a, const Type& b) {
  return a.result_ == b.result_ && a.args_ == b.args_;
}

bool operator<(const Type& a, const Type& b) {
  if (a.args_.size() != b.args_.size()) return a.args_.size() < b.args_.size();
  for (std::size_t i = 0; i < a.args_.size(); ++i) {
    if (a.args_[i] < b.args_[i]) return true;
    if (b.args_[i] < a.args_[i]) return false;
  }
  return a.result_ < b.result_;
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}

  Type parse() {
    Type t = chain();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return t;
  }

 private:
  Type chain() {
    std::vector<Type> parts;
    parts.push_back(atom());
    skip_ws();
    while (s_.substr(pos_, 2) == "->") {
      pos_ += 2;
      parts.push_back(atom());
      skip_ws();
    }
    Type result = parts.back();
    parts.pop_back();
    if (!result.is_base()) fail("arrow result must be written without parentheses");
    return Type::arrow(std::move(parts), result);
  }

  Type atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of type");
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      Type inner = chain();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    ++pos_;
    switch (ch) {
      case 'n': return kNoteT;
      case 'c': return kCountT;
      case 'm': return kTimeT;
      default: fail(std::string("unknown base type '") + ch + "'");
    }
    return {};
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw TypeError("type parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Type parse_type(std::string_view text) { return TypeParser(text).parse(); }

}  // namespace progrd
