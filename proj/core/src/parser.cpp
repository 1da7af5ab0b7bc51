#include "gausscond/parser.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gausscond {

std::string ParseError::show() const {
  std::ostringstream os;
  os << "parse error at " << line << ":" << col << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i) os << ", ";
      os << expected[i];
    }
    os << ")";
  }
  return os.str();
}

namespace {

enum class Tok {
  Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Semi, Newline,
  Plus, Minus, Star, Assign, CondEq, KwLet, KwIn, KwNormal, End,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Newline: return "newline";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Assign: return "'='";
    case Tok::CondEq: return "'=:='";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::KwNormal: return "'normal'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct ParseFail {
  ParseError error;
};

[[noreturn]] void fail(const Token& at, std::string message,
                       std::vector<std::string> expected = {}) {
  throw ParseFail{ParseError{at.line, at.col, std::move(message), std::move(expected)}};
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok kind, std::string t, int l, int c) {
    out.push_back(Token{kind, std::move(t), 0.0, l, c});
  };
  while (i < text.size()) {
    char c = text[i];
    int tl = line, tc = col;
    if (c == '\n') {
      push(Tok::Newline, "\n", tl, tc);
      ++i; ++line; col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') { ++i; ++col; continue; }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') { ++i; ++col; }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
          fail(Token{Tok::Number, "", 0.0, tl, tc + static_cast<int>(i - start)},
               "malformed number literal", {"digit"});
        }
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        size_t mark = i;
        ++i;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        } else {
          i = mark;  // not an exponent, e.g. `2end`
        }
      }
      std::string lit = text.substr(start, i - start);
      Token tok{Tok::Number, lit, std::stod(lit), tl, tc};
      out.push_back(tok);
      col += static_cast<int>(i - start);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' ||
              text[i] == '\'')) {
        ++i;
      }
      std::string word = text.substr(start, i - start);
      Tok kind = Tok::Ident;
      if (word == "let") kind = Tok::KwLet;
      else if (word == "in") kind = Tok::KwIn;
      else if (word == "normal") kind = Tok::KwNormal;
      push(kind, word, tl, tc);
      col += static_cast<int>(i - start);
      continue;
    }
    if (text.compare(i, 3, "=:=") == 0) {
      push(Tok::CondEq, "=:=", tl, tc);
      i += 3; col += 3;
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", tl, tc); break;
      case ')': push(Tok::RParen, ")", tl, tc); break;
      case '[': push(Tok::LBracket, "[", tl, tc); break;
      case ']': push(Tok::RBracket, "]", tl, tc); break;
      case ',': push(Tok::Comma, ",", tl, tc); break;
      case ';': push(Tok::Semi, ";", tl, tc); break;
      case '+': push(Tok::Plus, "+", tl, tc); break;
      case '-': push(Tok::Minus, "-", tl, tc); break;
      case '*': push(Tok::Star, "*", tl, tc); break;
      case '=': push(Tok::Assign, "=", tl, tc); break;
      default:
        fail(Token{Tok::End, "", 0.0, tl, tc},
             std::string("unexpected character '") + c + "'");
    }
    ++i; ++col;
  }
  out.push_back(Token{Tok::End, "", 0.0, line, col});
  return out;
}

// A parsed multiplicative factor: a term, or a transient matrix literal.
struct Factor {
  TermPtr term;
  std::vector<std::vector<double>> matrix;
  bool is_matrix = false;
  Token at;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {
    // start generated pattern names above any `_pN` already in the source
    for (const Token& t : toks_) {
      if (t.kind == Tok::Ident && t.text.size() > 2 && t.text.compare(0, 2, "_p") == 0) {
        bool digits = true;
        for (size_t i = 2; i < t.text.size(); ++i) {
          if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) digits = false;
        }
        if (digits) fresh_ = std::max(fresh_, std::stoi(t.text.substr(2)));
      }
    }
  }

  TermPtr parse_program() {
    skip_newlines();
    TermPtr t = parse_seq();
    eat_separator();
    if (peek().kind != Tok::End) {
      fail(peek(), "trailing input after program", {"end of input"});
    }
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  int fresh_ = 0;

  const Token& raw_peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  // peek skipping newlines (newlines only matter at sequence level)
  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_, seen = 0;
    while (i < toks_.size()) {
      if (toks_[i].kind != Tok::Newline) {
        if (seen == ahead) return toks_[i];
        ++seen;
      }
      ++i;
    }
    return toks_.back();
  }

  Token advance() {
    skip_newlines();
    Token t = raw_peek();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  void skip_newlines() {
    while (raw_peek().kind == Tok::Newline) ++pos_;
  }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(peek(), std::string("unexpected ") + tok_name(peek().kind), {what});
    }
    return advance();
  }

  static bool starts_expression(Tok k) {
    switch (k) {
      case Tok::Ident: case Tok::Number: case Tok::LParen: case Tok::LBracket:
      case Tok::Minus: case Tok::KwLet: case Tok::KwNormal:
        return true;
      default:
        return false;
    }
  }

  bool at_separator() {
    // true if a `;` or newline separates two statements here
    size_t i = pos_;
    bool saw = false;
    while (i < toks_.size() &&
           (toks_[i].kind == Tok::Newline || toks_[i].kind == Tok::Semi)) {
      saw = true;
      ++i;
    }
    return saw && i < toks_.size() && starts_expression(toks_[i].kind);
  }

  void eat_separator() {
    while (raw_peek().kind == Tok::Newline || raw_peek().kind == Tok::Semi) ++pos_;
  }

  std::string fresh_name() { return "_p" + std::to_string(++fresh_); }

  TermPtr parse_seq() {
    // let statement (with `in` or statement-style), assignment sugar,
    // or a conditioning-level expression followed by more statements
    if (peek().kind == Tok::KwLet) return parse_let();
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Assign) {
      Token name = advance();
      advance();  // '='
      if (name.text == "_") fail(name, "'_' cannot be assigned; use `e; rest`");
      TermPtr bound = parse_cond();
      if (!at_separator()) {
        fail(peek(), "assignment must be followed by further statements",
             {"newline", "';'"});
      }
      eat_separator();
      return mk_let(name.text, bound, parse_seq());
    }
    TermPtr head = parse_cond();
    if (at_separator()) {
      eat_separator();
      return mk_seq(head, parse_seq());
    }
    return head;
  }

  TermPtr parse_let() {
    expect(Tok::KwLet, "'let'");
    std::vector<std::string> pattern;
    if (peek().kind == Tok::LParen) {
      advance();
      pattern.push_back(expect(Tok::Ident, "identifier").text);
      while (peek().kind == Tok::Comma) {
        advance();
        pattern.push_back(expect(Tok::Ident, "identifier").text);
      }
      expect(Tok::RParen, "')'");
      if (pattern.size() < 2) {
        fail(peek(), "tuple pattern needs at least two names", {"','"});
      }
    } else {
      pattern.push_back(expect(Tok::Ident, "identifier").text);
    }
    expect(Tok::Assign, "'='");
    if (peek().kind == Tok::KwIn || peek().kind == Tok::End) {
      fail(peek(), "missing bound expression", {"expression"});
    }
    TermPtr bound = parse_seq_until_in();
    TermPtr body;
    if (peek().kind == Tok::KwIn) {
      advance();
      body = parse_seq();
    } else if (at_separator()) {
      eat_separator();
      body = parse_seq();
    } else {
      fail(peek(), "let binding needs 'in' or further statements",
           {"'in'", "newline", "';'"});
    }
    if (pattern.size() == 1) return mk_let(pattern[0], bound, body);
    // n-ary patterns peel one name at a time off right-nested pairs
    std::vector<std::pair<std::string, std::string>> splits;
    for (size_t i = 0; i + 1 < pattern.size(); ++i) {
      std::string rest = (i + 2 == pattern.size()) ? pattern[i + 1] : fresh_name();
      splits.emplace_back(pattern[i], rest);
    }
    TermPtr out = body;
    for (size_t i = splits.size(); i-- > 1;) {
      out = mk_let_pair(splits[i].first, splits[i].second, mk_var(splits[i - 1].second), out);
    }
    return mk_let_pair(splits[0].first, splits[0].second, bound, out);
  }

  // bound expressions may contain statements; 'in' terminates them
  TermPtr parse_seq_until_in() {
    if (peek().kind == Tok::KwLet) return parse_let();
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Assign) {
      Token name = advance();
      advance();
      TermPtr bound = parse_cond();
      if (!at_separator()) {
        fail(peek(), "assignment must be followed by further statements",
             {"newline", "';'"});
      }
      eat_separator();
      return mk_let(name.text, bound, parse_seq_until_in());
    }
    TermPtr head = parse_cond();
    if (at_separator()) {
      eat_separator();
      return mk_seq(head, parse_seq_until_in());
    }
    return head;
  }

  TermPtr parse_cond() {
    TermPtr lhs = parse_sum();
    if (peek().kind == Tok::CondEq) {
      advance();
      TermPtr rhs = parse_sum();
      return mk_cond_eq(lhs, rhs);
    }
    return lhs;
  }

  TermPtr parse_sum() {
    TermPtr acc = parse_product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = advance().kind == Tok::Minus;
      TermPtr rhs = parse_product();
      acc = mk_add(acc, minus ? negate(rhs) : rhs);
    }
    return acc;
  }

  static TermPtr negate(const TermPtr& t) {
    if (t->kind == TermKind::Const) return mk_const(-t->value);
    return mk_scale(-1.0, t);
  }

  TermPtr parse_product() {
    Factor acc = parse_factor();
    while (peek().kind == Tok::Star) {
      Token star = advance();
      Factor rhs = parse_factor();
      acc = combine(acc, rhs, star);
    }
    if (acc.is_matrix) {
      fail(acc.at, "matrix literal must multiply a tuple", {"'*'"});
    }
    return acc.term;
  }

  Factor combine(Factor lhs, Factor rhs, const Token& at) {
    if (lhs.is_matrix && rhs.is_matrix) {
      fail(at, "cannot multiply two matrix literals");
    }
    if (lhs.is_matrix) {
      return Factor{apply_matrix(lhs, rhs, at), {}, false, at};
    }
    if (rhs.is_matrix) {
      fail(rhs.at, "matrix literal must appear on the left of '*'");
    }
    if (lhs.term->kind == TermKind::Const) {
      return Factor{mk_scale(lhs.term->value, rhs.term), {}, false, at};
    }
    if (rhs.term->kind == TermKind::Const) {
      return Factor{mk_scale(rhs.term->value, lhs.term), {}, false, at};
    }
    fail(at, "scalar multiplication needs a literal factor", {"number"});
  }

  TermPtr apply_matrix(const Factor& m, const Factor& operand, const Token& at) {
    if (operand.is_matrix) fail(at, "cannot multiply two matrix literals");
    // flatten the operand tuple
    std::vector<TermPtr> elems;
    const Term* cur = operand.term.get();
    while (cur->kind == TermKind::Pair) {
      elems.push_back(cur->a);
      cur = cur->b.get();
    }
    elems.push_back(std::shared_ptr<const Term>(operand.term, cur));
    size_t cols = m.matrix.front().size();
    if (elems.size() != cols) {
      fail(at, "matrix has " + std::to_string(cols) + " columns but operand tuple has " +
                   std::to_string(elems.size()) + " components");
    }
    std::vector<TermPtr> rows;
    for (const auto& row : m.matrix) {
      TermPtr acc = nullptr;
      for (size_t j = 0; j < cols; ++j) {
        TermPtr piece = mk_scale(row[j], elems[j]);
        acc = acc ? mk_add(acc, piece) : piece;
      }
      rows.push_back(acc);
    }
    TermPtr out = rows.back();
    for (size_t i = rows.size() - 1; i-- > 0;) out = mk_pair(rows[i], out);
    return out;
  }

  Factor parse_factor() {
    Token t = peek();
    if (t.kind == Tok::Minus) {
      advance();
      Factor f = parse_factor();
      if (f.is_matrix) fail(t, "cannot negate a matrix literal");
      return Factor{negate(f.term), {}, false, t};
    }
    if (t.kind == Tok::LBracket) return parse_matrix();
    return Factor{parse_atom(), {}, false, t};
  }

  Factor parse_matrix() {
    Token open = expect(Tok::LBracket, "'['");
    std::vector<std::vector<double>> rows;
    while (true) {
      expect(Tok::LBracket, "'['");
      std::vector<double> row;
      row.push_back(parse_number_literal());
      while (peek().kind == Tok::Comma) {
        advance();
        row.push_back(parse_number_literal());
      }
      expect(Tok::RBracket, "']'");
      if (!rows.empty() && rows.front().size() != row.size()) {
        fail(open, "matrix rows have unequal lengths");
      }
      rows.push_back(std::move(row));
      if (peek().kind == Tok::Comma) {
        advance();
        continue;
      }
      break;
    }
    expect(Tok::RBracket, "']'");
    return Factor{nullptr, std::move(rows), true, open};
  }

  double parse_number_literal() {
    bool neg = false;
    if (peek().kind == Tok::Minus) {
      advance();
      neg = true;
    }
    Token n = expect(Tok::Number, "number");
    return neg ? -n.number : n.number;
  }

  TermPtr parse_atom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Number:
        advance();
        return mk_const(t.number);
      case Tok::Ident:
        advance();
        if (t.text == "_") fail(t, "'_' is not a referenceable variable");
        return mk_var(t.text);
      case Tok::KwNormal: {
        advance();
        expect(Tok::LParen, "'('");
        if (peek().kind == Tok::RParen) {
          advance();
          return mk_normal();
        }
        TermPtr mu = parse_cond();
        expect(Tok::Comma, "','");
        Token at = peek();
        double s2 = parse_number_literal();
        expect(Tok::RParen, "')'");
        if (s2 < 0.0) fail(at, "variance must be nonnegative");
        return mk_add(mu, mk_scale(std::sqrt(s2), mk_normal()));
      }
      case Tok::LParen: {
        advance();
        if (peek().kind == Tok::RParen) {
          advance();
          return mk_unit();
        }
        std::vector<TermPtr> elems;
        elems.push_back(parse_seq());
        while (peek().kind == Tok::Comma) {
          advance();
          elems.push_back(parse_seq());
        }
        expect(Tok::RParen, "')'");
        TermPtr out = elems.back();
        for (size_t i = elems.size() - 1; i-- > 0;) out = mk_pair(elems[i], out);
        return out;
      }
      default:
        fail(t, std::string("unexpected ") + tok_name(t.kind),
             {"number", "identifier", "'('", "'let'", "'normal'", "'-'", "'['"});
    }
  }
};

}  // namespace

ParseResult parse(const std::string& text) {
  try {
    Parser p(tokenize(text));
    return p.parse_program();
  } catch (const ParseFail& f) {
    return f.error;
  }
}

}  // namespace gausscond
