#include "nbhd/formula.hpp"

#include <algorithm>
#include <cctype>

#include "nbhd/error.hpp"

namespace nbhd {

int arity(Op op) {
  switch (op) {
    case Op::kAtom:
    case Op::kTop:
    case Op::kBot:
      return 0;
    case Op::kNot:
    case Op::kBullet:
    case Op::kCirc:
    case Op::kWrong:
    case Op::kBox:
      return 1;
    default:
      return 2;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op || x.hash != y.hash || x.size != y.size || x.name != y.name) return false;
  int k = arity(x.op);
  if (k >= 1 && !(a.lhs() == b.lhs())) return false;
  if (k == 2 && !(a.rhs() == b.rhs())) return false;
  return true;
}

Formula make_formula(Op op, std::string name, const Formula* lhs, const Formula* rhs) {
  auto node = std::make_shared<Formula::Node>();
  node->op = op;
  node->name = std::move(name);
  std::size_t h = std::hash<int>{}(static_cast<int>(op)) * 0x9E3779B97F4A7C15ULL;
  h ^= std::hash<std::string>{}(node->name) + 0x7F4A7C15ULL + (h << 6) + (h >> 2);
  if (lhs) {
    node->lhs = lhs->node_;
    node->size += lhs->size();
    h ^= lhs->hash() + 0x9E3779B9ULL + (h << 6) + (h >> 2);
  }
  if (rhs) {
    node->rhs = rhs->node_;
    node->size += rhs->size();
    h ^= rhs->hash() * 31 + 0x85EBCA6BULL + (h << 6) + (h >> 2);
  }
  node->hash = h;
  return Formula(std::move(node));
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return s != "true" && s != "false";
}

Formula atom(std::string name) {
  if (!is_identifier(name)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid atom name '" + name + "'");
  }
  return make_formula(Op::kAtom, std::move(name), nullptr, nullptr);
}

Formula top() { return make_formula(Op::kTop, {}, nullptr, nullptr); }
Formula bot() { return make_formula(Op::kBot, {}, nullptr, nullptr); }
Formula neg(Formula f) { return make_formula(Op::kNot, {}, &f, nullptr); }
Formula conj(Formula a, Formula b) { return make_formula(Op::kAnd, {}, &a, &b); }
Formula disj(Formula a, Formula b) { return make_formula(Op::kOr, {}, &a, &b); }
Formula imp(Formula a, Formula b) { return make_formula(Op::kImp, {}, &a, &b); }
Formula iff(Formula a, Formula b) { return make_formula(Op::kIff, {}, &a, &b); }
Formula bullet(Formula f) { return make_formula(Op::kBullet, {}, &f, nullptr); }
Formula circ(Formula f) { return make_formula(Op::kCirc, {}, &f, nullptr); }
Formula wrong(Formula f) { return make_formula(Op::kWrong, {}, &f, nullptr); }
Formula box(Formula f) { return make_formula(Op::kBox, {}, &f, nullptr); }
Formula announce(Formula announced, Formula body) {
  return make_formula(Op::kAnnounce, {}, &announced, &body);
}

Formula with_children(const Formula& like, const Formula* lhs, const Formula* rhs) {
  return make_formula(like.op(), like.name(), lhs, rhs);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok {
  kEnd,
  kNot,
  kBullet,
  kCirc,
  kWrong,
  kBox,
  kLBrack,
  kRBrack,
  kLParen,
  kRParen,
  kAnd,
  kOr,
  kImp,
  kIff,
  kIdent,
  kTrue,
  kFalse,
};

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

const std::vector<std::string> kUnaryStart = {
    "'!'", "'U'", "'O'", "'W'", "'K'", "'['", "'true'", "'false'", "identifier", "'('"};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  Formula parse_all() {
    Formula f = parse_iff();
    if (tok_.kind != Tok::kEnd) {
      fail({"'&'", "'|'", "'->'", "'<->'", "end of input"});
    }
    return f;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = tok_.kind == Tok::kEnd ? "end of input" : "'" + tok_.text + "'";
    throw ParseError(tok_.offset, std::move(expected), found);
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      tok_ = {Tok::kEnd, start, ""};
      return;
    }
    char c = text_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      tok_ = {k, start, std::string(1, c)};
    };
    switch (c) {
      case '!': return single(Tok::kNot);
      case 'U': return single(Tok::kBullet);
      case 'O': return single(Tok::kCirc);
      case 'W': return single(Tok::kWrong);
      case 'K': return single(Tok::kBox);
      case '[': return single(Tok::kLBrack);
      case ']': return single(Tok::kRBrack);
      case '(': return single(Tok::kLParen);
      case ')': return single(Tok::kRParen);
      case '&': return single(Tok::kAnd);
      case '|': return single(Tok::kOr);
      default: break;
    }
    if (text_.substr(pos_, 2) == "->") {
      pos_ += 2;
      tok_ = {Tok::kImp, start, "->"};
      return;
    }
    if (text_.substr(pos_, 3) == "<->") {
      pos_ += 3;
      tok_ = {Tok::kIff, start, "<->"};
      return;
    }
    if (c >= 'a' && c <= 'z') {
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if ((d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_') {
          ++pos_;
        } else {
          break;
        }
      }
      std::string word(text_.substr(start, pos_ - start));
      Tok kind = word == "true" ? Tok::kTrue : word == "false" ? Tok::kFalse : Tok::kIdent;
      tok_ = {kind, start, std::move(word)};
      return;
    }
    // Unknown character: report it as the offending token.
    std::size_t len = 1;
    auto uc = static_cast<unsigned char>(c);
    if (uc >= 0xC0) len = uc >= 0xF0 ? 4 : uc >= 0xE0 ? 3 : 2;
    tok_ = {Tok::kEnd, start, std::string(text_.substr(start, len))};
    throw ParseError(start, {"a token"}, "'" + tok_.text + "'");
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (tok_.kind == Tok::kIff) {
      advance();
      f = iff(f, parse_imp());
    }
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (tok_.kind == Tok::kImp) {
      advance();
      return imp(f, parse_imp());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (tok_.kind == Tok::kOr) {
      advance();
      f = disj(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (tok_.kind == Tok::kAnd) {
      advance();
      f = conj(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    switch (tok_.kind) {
      case Tok::kNot: advance(); return neg(parse_unary());
      case Tok::kBullet: advance(); return bullet(parse_unary());
      case Tok::kCirc: advance(); return circ(parse_unary());
      case Tok::kWrong: advance(); return wrong(parse_unary());
      case Tok::kBox: advance(); return box(parse_unary());
      case Tok::kLBrack: {
        advance();
        Formula announced = parse_iff();
        if (tok_.kind != Tok::kRBrack) fail({"']'", "'&'", "'|'", "'->'", "'<->'"});
        advance();
        return announce(announced, parse_unary());
      }
      default:
        return parse_atom();
    }
  }

  Formula parse_atom() {
    switch (tok_.kind) {
      case Tok::kTrue: advance(); return top();
      case Tok::kFalse: advance(); return bot();
      case Tok::kIdent: {
        std::string name = tok_.text;
        advance();
        return atom(std::move(name));
      }
      case Tok::kLParen: {
        advance();
        Formula f = parse_iff();
        if (tok_.kind != Tok::kRParen) fail({"')'", "'&'", "'|'", "'->'", "'<->'"});
        advance();
        return f;
      }
      default:
        fail(kUnaryStart);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_{Tok::kEnd, 0, ""};
};

// ---------------------------------------------------------------------------
// Printer

// Binding strength; higher binds tighter.
int level(Op op) {
  switch (op) {
    case Op::kIff: return 1;
    case Op::kImp: return 2;
    case Op::kOr: return 3;
    case Op::kAnd: return 4;
    case Op::kAtom:
    case Op::kTop:
    case Op::kBot: return 6;
    default: return 5;
  }
}

void print_to(const Formula& f, int min_level, std::string& out) {
  bool parens = level(f.op()) < min_level;
  if (parens) out += '(';
  auto binary = [&](const char* sym, int left, int right) {
    print_to(f.lhs(), left, out);
    out += ' ';
    out += sym;
    out += ' ';
    print_to(f.rhs(), right, out);
  };
  auto prefix = [&](const char* sym) {
    out += sym;
    out += ' ';
    print_to(f.lhs(), 5, out);
  };
  switch (f.op()) {
    case Op::kAtom: out += f.name(); break;
    case Op::kTop: out += "true"; break;
    case Op::kBot: out += "false"; break;
    case Op::kNot: prefix("!"); break;
    case Op::kBullet: prefix("U"); break;
    case Op::kCirc: prefix("O"); break;
    case Op::kWrong: prefix("W"); break;
    case Op::kBox: prefix("K"); break;
    case Op::kAnd: binary("&", 4, 5); break;
    case Op::kOr: binary("|", 3, 4); break;
    case Op::kImp: binary("->", 3, 2); break;
    case Op::kIff: binary("<->", 1, 2); break;
    case Op::kAnnounce:
      out += '[';
      print_to(f.lhs(), 1, out);
      out += "] ";
      print_to(f.rhs(), 5, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const Formula& f) {
  std::string out;
  print_to(f, 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural utilities

Formula desugar(const Formula& f, DesugarTarget target) {
  if (target == DesugarTarget::kFull) return f;
  auto d = [&](const Formula& g) { return desugar(g, target); };
  // a | b  ==>  !(!a & !b)
  auto or_core = [](const Formula& a, const Formula& b) { return neg(conj(neg(a), neg(b))); };
  // a -> b  ==>  !(a & !b)
  auto imp_core = [](const Formula& a, const Formula& b) { return neg(conj(a, neg(b))); };
  switch (f.op()) {
    case Op::kAtom:
    case Op::kTop:
      return f;
    case Op::kBot:
      return neg(top());
    case Op::kNot:
      return neg(d(f.lhs()));
    case Op::kAnd:
      return conj(d(f.lhs()), d(f.rhs()));
    case Op::kOr:
      return or_core(d(f.lhs()), d(f.rhs()));
    case Op::kImp:
      return imp_core(d(f.lhs()), d(f.rhs()));
    case Op::kIff: {
      Formula a = d(f.lhs());
      Formula b = d(f.rhs());
      return conj(imp_core(a, b), imp_core(b, a));
    }
    case Op::kBullet:
      return bullet(d(f.lhs()));
    case Op::kCirc:
      return neg(bullet(d(f.lhs())));
    case Op::kWrong:
      return wrong(d(f.lhs()));
    case Op::kBox: {
      // K a  <->  W a | (O a & a)
      Formula a = d(f.lhs());
      return or_core(wrong(a), conj(neg(bullet(a)), a));
    }
    case Op::kAnnounce:
      return announce(d(f.lhs()), d(f.rhs()));
  }
  return f;
}

int modal_depth(const Formula& f) {
  switch (arity(f.op())) {
    case 0:
      return 0;
    case 1: {
      int inner = modal_depth(f.lhs());
      return f.op() == Op::kNot ? inner : inner + 1;
    }
    default: {
      int inner = std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
      return f.op() == Op::kAnnounce ? inner + 1 : inner;
    }
  }
}

int announcement_depth(const Formula& f) {
  switch (arity(f.op())) {
    case 0:
      return 0;
    case 1:
      return announcement_depth(f.lhs());
    default: {
      int inner = std::max(announcement_depth(f.lhs()), announcement_depth(f.rhs()));
      return f.op() == Op::kAnnounce ? inner + 1 : inner;
    }
  }
}

namespace {

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::kAtom) {
    out.insert(f.name());
    return;
  }
  int k = arity(f.op());
  if (k >= 1) collect_atoms(f.lhs(), out);
  if (k == 2) collect_atoms(f.rhs(), out);
}

}  // namespace

std::set<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

bool contains_op(const Formula& f, Op op) {
  if (f.op() == op) return true;
  int k = arity(f.op());
  if (k >= 1 && contains_op(f.lhs(), op)) return true;
  return k == 2 && contains_op(f.rhs(), op);
}

bool has_announcement(const Formula& f) { return contains_op(f, Op::kAnnounce); }

}  // namespace nbhd
