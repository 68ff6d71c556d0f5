#include "nbhd/announce.hpp"

#include <optional>
#include <sstream>

#include "nbhd/error.hpp"

namespace nbhd {

namespace {

void require_reducible_input(const Formula& f) {
  switch (f.op()) {
    case Op::kOr:
    case Op::kImp:
    case Op::kIff:
    case Op::kCirc:
    case Op::kBox:
      throw Error(ErrorCode::kInvalidArgument,
                  "reduce accepts only atoms, true, false, !, &, U, W and announcements; "
                  "desugar '" + print(f) + "' first");
    default:
      break;
  }
  int k = arity(f.op());
  if (k >= 1) require_reducible_input(f.lhs());
  if (k == 2) require_reducible_input(f.rhs());
}

bool find_announcement(const Formula& f, std::vector<int>& path) {
  if (f.op() == Op::kAnnounce) return true;
  int k = arity(f.op());
  for (int i = 0; i < k; ++i) {
    path.push_back(i);
    if (find_announcement(f.child(i), path)) return true;
    path.pop_back();
  }
  return false;
}

// Rewrites [announced]body by the axiom matching the body's operator.
std::pair<const char*, Formula> rewrite(const Formula& ann) {
  const Formula a = ann.lhs();
  const Formula body = ann.rhs();
  switch (body.op()) {
    case Op::kAtom:
      return {"AP", imp(a, body)};
    case Op::kTop:
      return {"A-true", top()};
    case Op::kBot:
      return {"A-false", imp(a, bot())};
    case Op::kNot:
      return {"AN", imp(a, neg(announce(a, body.lhs())))};
    case Op::kAnd:
      return {"AC", conj(announce(a, body.lhs()), announce(a, body.rhs()))};
    case Op::kAnnounce:
      return {"AA", announce(conj(a, announce(a, body.lhs())), body.rhs())};
    case Op::kBullet:
      return {"AU", imp(a, bullet(announce(a, body.lhs())))};
    case Op::kWrong:
      return {"AW", imp(a, wrong(announce(a, body.lhs())))};
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "no reduction axiom for announcement body '" + print(body) + "'");
  }
}

}  // namespace

Formula subformula_at(const Formula& f, const std::vector<int>& position) {
  Formula cur = f;
  for (int i : position) {
    if (i < 0 || i >= arity(cur.op())) {
      throw Error(ErrorCode::kInvalidArgument, "position " + format_position(position) +
                                                   " does not exist");
    }
    cur = cur.child(i);
  }
  return cur;
}

namespace {

Formula replace_from(const Formula& f, const std::vector<int>& position, std::size_t depth,
                     const Formula& with) {
  if (depth == position.size()) return with;
  const int i = position[depth];
  const int k = arity(f.op());
  if (i < 0 || i >= k) {
    throw Error(ErrorCode::kInvalidArgument, "position " + format_position(position) +
                                                 " does not exist");
  }
  Formula left = k >= 1 ? f.lhs() : f;
  if (i == 0) left = replace_from(f.lhs(), position, depth + 1, with);
  if (k == 1) return with_children(f, &left, nullptr);
  Formula right = i == 1 ? replace_from(f.rhs(), position, depth + 1, with) : f.rhs();
  return with_children(f, &left, &right);
}

}  // namespace

Formula replace_at(const Formula& f, const std::vector<int>& position, const Formula& with) {
  return replace_from(f, position, 0, with);
}

Reduction reduce(const Formula& f) {
  require_reducible_input(f);
  Reduction out{f, {}};
  std::vector<int> path;
  while (find_announcement(out.result, path)) {
    Formula before = subformula_at(out.result, path);
    auto [axiom, after] = rewrite(before);
    out.result = replace_at(out.result, path, after);
    out.trace.push_back({axiom, path, before, after});
    path.clear();
  }
  return out;
}

std::string format_position(const std::vector<int>& position) {
  if (position.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < position.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(position[i]);
  }
  return out;
}

std::string format_trace(const std::vector<RewriteStep>& trace) {
  std::ostringstream os;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& step = trace[k];
    os << (k + 1) << ". " << step.axiom << " @ " << format_position(step.position) << ": "
       << print(step.before) << " ==> " << print(step.after) << '\n';
  }
  return os.str();
}

Formula replay(const Formula& input, const std::vector<RewriteStep>& trace) {
  Formula cur = input;
  for (const auto& step : trace) {
    if (subformula_at(cur, step.position) != step.before) {
      throw Error(ErrorCode::kInvalidArgument,
                  "trace step at " + format_position(step.position) + " does not match");
    }
    cur = replace_at(cur, step.position, step.after);
  }
  return cur;
}

Formula simplify(const Formula& f) {
  const int k = arity(f.op());
  if (k == 0) return f;
  Formula left = simplify(f.lhs());
  if (k == 2) {
    Formula right = simplify(f.rhs());
    return with_children(f, &left, &right);
  }
  if (f.op() == Op::kNot) {
    if (left.op() == Op::kNot) return left.lhs();
    if (left.op() == Op::kAnd && left.rhs().op() == Op::kNot) {
      return imp(left.lhs(), left.rhs().lhs());
    }
  }
  return with_children(f, &left, nullptr);
}

}  // namespace nbhd
