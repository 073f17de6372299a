#include "progrd/term.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>

namespace progrd {

std::string to_string(const NoteSeq& notes) {
  std::string out = "[";
  for (std::size_t i = 0; i < notes.size(); ++i) {
    if (i) out += ',';
    out += notes[i].str();
  }
  return out + "]";
}

namespace {

const std::array<Primitive, 6>& primitive_table() {
  static const std::array<Primitive, 6> table = {{
      {"up", Op::Up, Type({kNoteT}, BaseType::Note)},
      {"down", Op::Down, Type({kNoteT}, BaseType::Note)},
      {"rep", Op::Rep, Type({kNoteT, kCountT}, BaseType::Note)},
      {"get", Op::Get, Type({kNoteT, kTimeT}, BaseType::Note)},
      {"concat", Op::Concat, Type({kNoteT, kNoteT}, BaseType::Note)},
      {"iter", Op::Iter,
       Type({Type({kNoteT}, BaseType::Note), kNoteT, kCountT}, BaseType::Note)},
  }};
  return table;
}

std::optional<Type> infer_app(const Router& r, const Type& f, const Type& g, std::string* err) {
  auto fail = [&](std::string msg) -> std::optional<Type> {
    if (err) *err = std::move(msg);
    return std::nullopt;
  };
  if (r.size() > Router::kMaxLength) {
    return fail("router '" + r.str() + "' longer than " + std::to_string(Router::kMaxLength));
  }
  const std::size_t jf = r.left_count();
  const std::size_t jg = r.right_count();
  if (g.arity() < jg) {
    return fail("unroutable argument: right subtree of type " + g.str() + " cannot take " +
                std::to_string(jg) + " routed argument(s)");
  }
  Type s = g.drop_args(jg);
  if (f.arity() < jf + 1) {
    return fail("unroutable argument: left subtree of type " + f.str() + " cannot take " +
                std::to_string(jf) + " routed argument(s) plus the right result");
  }
  if (f.args()[jf] != s) {
    return fail("type mismatch: left subtree expects " + f.args()[jf].str() +
                " where the right subtree supplies " + s.str());
  }
  std::vector<Type> routed;
  std::size_t fi = 0, gi = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    switch (r[i]) {
      case 'C': routed.push_back(f.args()[fi++]); break;
      case 'B': routed.push_back(g.args()[gi++]); break;
      default:
        if (f.args()[fi] != g.args()[gi]) {
          return fail("type mismatch: S routes one argument as both " + f.args()[fi].str() +
                      " and " + g.args()[gi].str());
        }
        routed.push_back(f.args()[fi]);
        ++fi;
        ++gi;
    }
  }
  for (std::size_t i = jf + 1; i < f.arity(); ++i) routed.push_back(f.args()[i]);
  return Type(std::move(routed), f.result());
}

}  // namespace

std::span<const Primitive> builtin_primitives() { return primitive_table(); }

const Primitive* find_primitive(std::string_view name) {
  for (const auto& p : primitive_table()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Router::Router(std::string dirs) : dirs_(std::move(dirs)) {
  for (char c : dirs_) {
    if (c != 'B' && c != 'C' && c != 'S') {
      throw TypeError("invalid router '" + dirs_ + "'");
    }
  }
}

std::size_t Router::left_count() const {
  return static_cast<std::size_t>(std::count_if(dirs_.begin(), dirs_.end(),
                                                [](char c) { return c != 'B'; }));
}

std::size_t Router::right_count() const {
  return static_cast<std::size_t>(std::count_if(dirs_.begin(), dirs_.end(),
                                                [](char c) { return c != 'C'; }));
}

std::vector<Router> Router::all_of_length(std::size_t n) {
  std::vector<std::string> acc = {""};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> next;
    for (const auto& s : acc) {
      for (char c : {'B', 'C', 'S'}) next.push_back(s + c);
    }
    acc = std::move(next);
  }
  std::vector<Router> out;
  out.reserve(acc.size());
  for (auto& s : acc) out.emplace_back(std::move(s));
  return out;
}

Term Node::note(Note n) { return base(BaseType::Note, n.index()); }
Term Node::count(int c) { return base(BaseType::Count, c); }
Term Node::time(int m) { return base(BaseType::Time, m); }

Term Node::base(BaseType kind, int value) {
  if (kind == BaseType::Note && (value < 0 || value > Note::kPauseValue)) {
    throw TypeError("note value out of range: " + std::to_string(value));
  }
  if (kind != BaseType::Note && value < 1) {
    throw TypeError("count/time values start at 1, got " + std::to_string(value));
  }
  auto n = std::make_shared<Node>(Key{}, Kind::Base);
  n->base_kind_ = kind;
  n->value_ = value;
  n->type_ = Type(kind);
  n->text_ = std::string(1, base_letter(kind)) +
             (kind == BaseType::Note && value == Note::kPauseValue ? std::string("p")
                                                                   : std::to_string(value));
  return n;
}

Term Node::primitive(const Primitive& p) {
  auto n = std::make_shared<Node>(Key{}, Kind::Primitive);
  n->prim_ = &p;
  n->type_ = p.signature;
  n->text_ = p.name;
  return n;
}

Term Node::hole(Type expected) {
  auto n = std::make_shared<Node>(Key{}, Kind::Hole);
  n->text_ = "?" + (expected.is_base() ? expected.str() : "(" + expected.str() + ")");
  n->type_ = std::move(expected);
  n->holes_ = 1;
  return n;
}

Term Node::app(Router router, Term left, Term right) {
  auto n = std::make_shared<Node>(Key{}, Kind::App);
  n->text_ = "[" + (router.empty() ? std::string() : router.str() + ", ") + left->text() + ", " +
             right->text() + "]";
  if (left->type() && right->type()) {
    n->type_ = infer_app(router, *left->type(), *right->type(), nullptr);
  }
  n->size_ = 1 + left->size() + right->size();
  n->depth_ = 1 + std::max(left->depth(), right->depth());
  n->holes_ = left->hole_count() + right->hole_count();
  n->router_ = std::move(router);
  n->left_ = std::move(left);
  n->right_ = std::move(right);
  return n;
}

Type check_type(const Term& term) {
  if (term->type()) return *term->type();
  // Ill-typed: descend to the first failing node to report why.
  if (term->kind() == Node::Kind::App) {
    Type f = check_type(term->left());
    Type g = check_type(term->right());
    std::string err;
    if (auto t = infer_app(term->router(), f, g, &err)) return *t;
    throw TypeError(err + " in " + term->text());
  }
  throw TypeError("ill-typed term " + term->text());
}

Program Program::of(Term root) {
  Type t = check_type(root);
  return Program{std::move(root), std::move(t)};
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  Term parse() {
    Term t = term();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return t;
  }

 private:
  Term term() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (s_[pos_] == '[') {
      ++pos_;
      std::vector<std::string> head;
      // Optional router.
      skip_ws();
      std::size_t save = pos_;
      std::string ident = identifier();
      Router router;
      if (!ident.empty() && is_router(ident)) {
        expect(',');
        router = Router(ident);
      } else {
        pos_ = save;
      }
      Term left = term();
      expect(',');
      Term right = term();
      expect(']');
      return Node::app(std::move(router), std::move(left), std::move(right));
    }
    if (s_[pos_] == '?') {
      ++pos_;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '(') {
        std::size_t start = ++pos_;
        int level = 1;
        while (pos_ < s_.size() && level > 0) {
          if (s_[pos_] == '(') ++level;
          if (s_[pos_] == ')') --level;
          ++pos_;
        }
        if (level != 0) fail("unbalanced hole type");
        return Node::hole(parse_type(s_.substr(start, pos_ - start - 1)));
      }
      std::string ident = identifier();
      if (ident.size() != 1) fail("bad hole type");
      return Node::hole(parse_type(ident));
    }
    std::string ident = identifier();
    if (ident.empty()) fail("expected a term");
    if (const Primitive* p = find_primitive(ident)) return Node::primitive(*p);
    if (ident.size() >= 2 && (ident[0] == 'n' || ident[0] == 'c' || ident[0] == 'm')) {
      std::string_view digits = std::string_view(ident).substr(1);
      if (ident[0] == 'n' && digits == "p") return Node::note(Note::pause());
      if (std::all_of(digits.begin(), digits.end(),
                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
          digits.size() <= 3) {
        int v = std::stoi(std::string(digits));
        if (ident[0] == 'n') {
          if (v > 11) fail("pitch out of range in '" + ident + "'");
          return Node::note(Note::pitch(v));
        }
        if (v < 1) fail("value must be positive in '" + ident + "'");
        return ident[0] == 'c' ? Node::count(v) : Node::time(v);
      }
    }
    fail("unknown leaf '" + ident + "'");
  }

  static bool is_router(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == 'B' || c == 'C' || c == 'S'; });
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw TypeError("term parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void collect_subprograms(const Term& t, std::vector<Term>& out) {
  if (t->complete()) out.push_back(t);
  if (t->kind() == Node::Kind::App) {
    collect_subprograms(t->left(), out);
    collect_subprograms(t->right(), out);
  }
}

void collect_leaves(const Term& t, std::vector<Term>& out) {
  if (t->is_leaf()) {
    out.push_back(t);
    return;
  }
  collect_leaves(t->left(), out);
  collect_leaves(t->right(), out);
}

Term replace_rec(const Term& t, int& index, const Term& replacement) {
  if (index == 0) {
    --index;
    return replacement;
  }
  --index;
  if (t->is_leaf()) return t;
  Term l = replace_rec(t->left(), index, replacement);
  if (index < 0 && l != t->left()) return Node::app(t->router(), l, t->right());
  Term r = replace_rec(t->right(), index, replacement);
  if (r != t->right()) return Node::app(t->router(), t->left(), r);
  return t;
}

}  // namespace

Term parse_term(std::string_view text) { return TermParser(text).parse(); }

std::vector<Term> subprograms(const Term& term) {
  std::vector<Term> out;
  collect_subprograms(term, out);
  return out;
}

std::vector<Term> leaves(const Term& term) {
  std::vector<Term> out;
  collect_leaves(term, out);
  return out;
}

Term replace_at(const Term& term, int preorder_index, const Term& replacement) {
  int idx = preorder_index;
  return replace_rec(term, idx, replacement);
}

bool same_term(const Term& a, const Term& b) { return a == b || a->text() == b->text(); }

}  // namespace progrd
