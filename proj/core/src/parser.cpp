#include "timewarp/parser.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace timewarp {

namespace {

std::string describe(std::size_t position, const std::vector<std::string>& expected,
                     const std::string& found) {
  std::string msg = "parse error at offset " + std::to_string(position) + ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
    msg += expected[i];
  }
  return msg + ", found " + found;
}

}  // namespace

ParseError::ParseError(std::size_t position, std::vector<std::string> expected,
                       const std::string& found)
    : std::runtime_error(describe(position, expected, found)),
      position_(position),
      expected_(std::move(expected)) {}

namespace {

enum class Tok {
  Ident, Id, Bot, Top, LParen, RParen, Join, Meet, LRes, RRes, Dot,
  PostO, PostL, PostR, Leq, Eq, End,
};

const char* spelling(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Id: return "'id'";
    case Tok::Bot: return "'bot'";
    case Tok::Top: return "'top'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Join: return "'|'";
    case Tok::Meet: return "'&'";
    case Tok::LRes: return "'\\'";
    case Tok::RRes: return "'/'";
    case Tok::Dot: return "'.'";
    case Tok::PostO: return "'^o'";
    case Tok::PostL: return "'^l'";
    case Tok::PostR: return "'^r'";
    case Tok::Leq: return "'<='";
    case Tok::Eq: return "'=='";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view s, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto bad = [&](std::size_t at) {
    throw ParseError(base + at, {"a term or operator"}, "'" + std::string(1, s[at]) + "'");
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t at = base + i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word(s.substr(i, j - i));
      Tok k = word == "id" ? Tok::Id : word == "bot" ? Tok::Bot : word == "top" ? Tok::Top : Tok::Ident;
      out.push_back({k, at, word});
      i = j;
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < s.size() && s[i + 1] == b; };
    if (two('<', '=')) {
      out.push_back({Tok::Leq, at, "<="});
      i += 2;
    } else if (two('=', '=')) {
      out.push_back({Tok::Eq, at, "=="});
      i += 2;
    } else if (c == '^') {
      if (i + 1 >= s.size()) throw ParseError(at + 1, {"'o'", "'l'", "'r'"}, "end of input");
      char d = s[i + 1];
      Tok k = d == 'o' ? Tok::PostO : d == 'l' ? Tok::PostL : d == 'r' ? Tok::PostR : Tok::End;
      if (k == Tok::End) throw ParseError(at + 1, {"'o'", "'l'", "'r'"}, "'" + std::string(1, d) + "'");
      if (i + 2 < s.size() && ident_char(s[i + 2])) bad(i + 2);
      out.push_back({k, at, std::string(s.substr(i, 2))});
      i += 2;
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '|': k = Tok::Join; break;
        case '&': k = Tok::Meet; break;
        case '\\': k = Tok::LRes; break;
        case '/': k = Tok::RRes; break;
        case '.': k = Tok::Dot; break;
        default: bad(i);
      }
      out.push_back({k, at, std::string(1, c)});
      ++i;
    }
  }
  out.push_back({Tok::End, base + s.size(), ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Query query() {
    Term lhs = expr();
    if (accept(Tok::Leq)) {
      Term rhs = expr();
      expect(Tok::End);
      return Query::inequation(std::move(lhs), std::move(rhs));
    }
    if (accept(Tok::Eq)) {
      Term rhs = expr();
      expect(Tok::End);
      return Query::equation(std::move(lhs), std::move(rhs));
    }
    expect(Tok::End);
    return Query::inequation(Term::id(), std::move(lhs));
  }

  Term term() {
    Term t = expr();
    expect(Tok::End);
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  // Records every token kind tried at the current position so that errors
  // can list exactly what would have been accepted.
  bool check(Tok k) {
    if (peek().kind == k) return true;
    if (std::find(tried_.begin(), tried_.end(), k) == tried_.end()) tried_.push_back(k);
    return false;
  }

  bool accept(Tok k) {
    if (!check(k)) return false;
    ++pos_;
    tried_.clear();
    return true;
  }

  void expect(Tok k) {
    if (!accept(k)) fail();
  }

  [[noreturn]] void fail() {
    std::vector<std::string> exp;
    for (Tok k : tried_) exp.emplace_back(spelling(k));
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, std::move(exp), found);
  }

  Term expr() {
    Term t = meet();
    while (accept(Tok::Join)) t = Term::join(std::move(t), meet());
    return t;
  }

  Term meet() {
    Term t = residual();
    while (accept(Tok::Meet)) t = Term::meet(std::move(t), residual());
    return t;
  }

  Term residual() {
    Term t = composition();
    if (accept(Tok::LRes)) return Term::lres(std::move(t), composition());
    if (accept(Tok::RRes)) return Term::rres(std::move(t), composition());
    return t;
  }

  bool starts_atom() {
    // Evaluate all checks so the tried-set is complete.
    bool a = check(Tok::Ident), b = check(Tok::Id), c = check(Tok::Bot), d = check(Tok::Top),
         e = check(Tok::LParen);
    return a || b || c || d || e;
  }

  Term composition() {
    Term t = postfix();
    while (true) {
      if (accept(Tok::Dot)) {
        t = Term::comp(std::move(t), postfix());
      } else if (starts_atom()) {
        t = Term::comp(std::move(t), postfix());
      } else {
        return t;
      }
    }
  }

  Term postfix() {
    Term t = atom();
    while (true) {
      if (accept(Tok::PostO)) t = Term::lres(Term::top(), std::move(t));
      else if (accept(Tok::PostL)) t = Term::rres(Term::id(), std::move(t));
      else if (accept(Tok::PostR)) t = Term::lres(std::move(t), Term::id());
      else return t;
    }
  }

  Term atom() {
    if (check(Tok::Ident)) {
      std::string name = peek().text;
      accept(Tok::Ident);
      return Term::var(std::move(name));
    }
    if (accept(Tok::Id)) return Term::id();
    if (accept(Tok::Bot)) return Term::bot();
    if (accept(Tok::Top)) return Term::top();
    if (accept(Tok::LParen)) {
      Term t = expr();
      expect(Tok::RParen);
      return t;
    }
    fail();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Tok> tried_;
};

}  // namespace

Term parse_term(std::string_view text) { return Parser(lex(text, 0)).term(); }

Query parse_query(std::string_view text) { return Parser(lex(text, 0)).query(); }

std::vector<Query> parse_queries(std::string_view text) {
  std::vector<Query> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    bool blank = std::all_of(line.begin(), line.end(),
                             [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!blank) out.push_back(Parser(lex(line, start)).query());
    start = nl + 1;
  }
  return out;
}

}  // namespace timewarp
