#include "progrd/eval.hpp"

namespace progrd {
namespace {

class Reducer {
 public:
  explicit Reducer(const EvalLimits& limits) : limits_(limits) {}

  Value apply(const Term& t, std::vector<Value> args) {
    tick();
    switch (t->kind()) {
      case Node::Kind::Hole:
        throw EvalError("cannot evaluate a hole " + t->text());
      case Node::Kind::Base:
        if (!args.empty()) throw EvalError("base term applied to arguments: " + t->text());
        return base_value(*t);
      case Node::Kind::Primitive: {
        const std::size_t arity = t->prim().signature.arity();
        if (args.size() < arity) return Value{Closure{t, std::move(args)}};
        std::vector<Value> rest(args.begin() + static_cast<std::ptrdiff_t>(arity), args.end());
        args.resize(arity);
        Value out = call(t->prim(), args);
        return rest.empty() ? out : apply_value(std::move(out), std::move(rest));
      }
      case Node::Kind::App: {
        const Router& r = t->router();
        if (args.size() < r.size()) return Value{Closure{t, std::move(args)}};
        std::vector<Value> left_args, right_args;
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (r[i] != 'B') left_args.push_back(args[i]);
          if (r[i] != 'C') right_args.push_back(args[i]);
        }
        Value g = apply(t->right(), std::move(right_args));
        left_args.push_back(std::move(g));
        Value f = apply(t->left(), std::move(left_args));
        if (args.size() == r.size()) return f;
        std::vector<Value> rest(args.begin() + static_cast<std::ptrdiff_t>(r.size()), args.end());
        return apply_value(std::move(f), std::move(rest));
      }
    }
    throw EvalError("unreachable");
  }

  Value apply_value(Value v, std::vector<Value> args) {
    if (args.empty()) return v;
    auto* c = std::get_if<Closure>(&v.v);
    if (!c) throw EvalError("arity mismatch: value applied to too many arguments");
    std::vector<Value> all = std::move(c->bound);
    for (auto& a : args) all.push_back(std::move(a));
    return apply(c->term, std::move(all));
  }

 private:
  static Value base_value(const Node& n) {
    switch (n.base_kind()) {
      case BaseType::Note: return Value{NoteSeq{Note::from_index(n.base_value())}};
      case BaseType::Count: return Value{Count{n.base_value()}};
      case BaseType::Time: return Value{TimeIndex{n.base_value()}};
    }
    throw EvalError("bad base term");
  }

  template <class T>
  static const T& as(const Value& v, const char* what) {
    if (const T* p = std::get_if<T>(&v.v)) return *p;
    throw EvalError(std::string("runtime type error: expected ") + what);
  }

  NoteSeq checked(NoteSeq s) const {
    if (s.size() > limits_.max_output) throw EvalLimitError("output length limit exceeded");
    return s;
  }

  Value call(const Primitive& p, const std::vector<Value>& args) {
    switch (p.op) {
      case Op::Up:
      case Op::Down: {
        NoteSeq s = as<NoteSeq>(args[0], "notes");
        const int delta = p.op == Op::Up ? 1 : -1;
        for (auto& n : s) n = n.shifted(delta);
        return Value{std::move(s)};
      }
      case Op::Rep: {
        const auto& s = as<NoteSeq>(args[0], "notes");
        const int c = as<Count>(args[1], "count").value;
        if (s.size() * static_cast<std::size_t>(std::max(c, 0)) > limits_.max_output) {
          throw EvalLimitError("output length limit exceeded");
        }
        NoteSeq out;
        for (int i = 0; i < c; ++i) out.insert(out.end(), s.begin(), s.end());
        return Value{std::move(out)};
      }
      case Op::Get: {
        const auto& s = as<NoteSeq>(args[0], "notes");
        const auto m = static_cast<std::size_t>(std::max(as<TimeIndex>(args[1], "time").value, 0));
        return Value{NoteSeq(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(std::min(m, s.size())))};
      }
      case Op::Concat: {
        NoteSeq out = as<NoteSeq>(args[0], "notes");
        const auto& b = as<NoteSeq>(args[1], "notes");
        out.insert(out.end(), b.begin(), b.end());
        return Value{checked(std::move(out))};
      }
      case Op::Iter: {
        const Value& f = args[0];
        NoteSeq x = as<NoteSeq>(args[1], "notes");
        const int c = as<Count>(args[2], "count").value;
        NoteSeq out;
        for (int i = 0; i < c; ++i) {
          out.insert(out.end(), x.begin(), x.end());
          if (out.size() > limits_.max_output) throw EvalLimitError("output length limit exceeded");
          if (i + 1 < c) x = as<NoteSeq>(apply_value(f, {Value{x}}), "notes");
        }
        return Value{std::move(out)};
      }
    }
    throw EvalError("unknown primitive");
  }

  void tick() {
    if (++steps_ > limits_.max_steps) throw EvalLimitError("evaluation step limit exceeded");
  }

  const EvalLimits& limits_;
  int steps_ = 0;
};

}  // namespace

NoteSeq evaluate(const Term& program, std::span<const Value> args, const EvalLimits& limits) {
  Reducer r(limits);
  Value v = r.apply(program, std::vector<Value>(args.begin(), args.end()));
  auto* notes = std::get_if<NoteSeq>(&v.v);
  if (!notes) throw EvalError("arity mismatch: program did not reduce to a note sequence");
  return std::move(*notes);
}

}  // namespace progrd
