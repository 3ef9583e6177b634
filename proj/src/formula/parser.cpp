// Copyright (c) 2026 The clocksched Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Recursive-descent parser for the .mrspec formula language:
//
//   space I[2],J[2],K[2];          # index declarations
//   a(I,J) += b(I,K)*c(K,J);       # one formula per statement
//
// Grammar:
//   spec    := 'space' decl (',' decl)* ';' (formula ';')*
//   formula := ref ('=' | '+=') expr
//   ref     := IDENT [ '(' [factor (',' factor)*] ')' ]
//   factor  := IDENT ['^' INT] [('+' | '-') INT]
//   expr    := term ('+' term)*
//   term    := item ('*' item)*
//   item    := ref | '(' term ')'

#include <clocksched/formula_ir.hpp>

#include <cctype>
#include <set>

namespace clocksched {

namespace {

enum class Tok {
  Ident,
  Int,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Comma,
  Semi,
  Assign,
  PlusAssign,
  Plus,
  Minus,
  Star,
  Caret,
  End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

const char *describe(Tok kind) {
  switch (kind) {
  case Tok::Ident:
    return "identifier";
  case Tok::Int:
    return "integer";
  case Tok::LBracket:
    return "'['";
  case Tok::RBracket:
    return "']'";
  case Tok::LParen:
    return "'('";
  case Tok::RParen:
    return "')'";
  case Tok::Comma:
    return "','";
  case Tok::Semi:
    return "';'";
  case Tok::Assign:
    return "'='";
  case Tok::PlusAssign:
    return "'+='";
  case Tok::Plus:
    return "'+'";
  case Tok::Minus:
    return "'-'";
  case Tok::Star:
    return "'*'";
  case Tok::Caret:
    return "'^'";
  case Tok::End:
    return "end of input";
  }
  return "?";
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n')
        advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.pos = {line, column};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(
                                     text[j])) ||
                                 text[j] == '_'))
        ++j;
      tok.kind = Tok::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      tok.kind = Tok::Int;
      tok.text = std::string(text.substr(i, j - i));
      if (tok.text.size() > 15)
        throw ParseError(tok.pos, "integer literal too large");
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    std::size_t width = 1;
    switch (c) {
    case '[':
      tok.kind = Tok::LBracket;
      break;
    case ']':
      tok.kind = Tok::RBracket;
      break;
    case '(':
      tok.kind = Tok::LParen;
      break;
    case ')':
      tok.kind = Tok::RParen;
      break;
    case ',':
      tok.kind = Tok::Comma;
      break;
    case ';':
      tok.kind = Tok::Semi;
      break;
    case '=':
      tok.kind = Tok::Assign;
      break;
    case '*':
      tok.kind = Tok::Star;
      break;
    case '^':
      tok.kind = Tok::Caret;
      break;
    case '-':
      tok.kind = Tok::Minus;
      break;
    case '+':
      if (i + 1 < text.size() && text[i + 1] == '=') {
        tok.kind = Tok::PlusAssign;
        width = 2;
      } else {
        tok.kind = Tok::Plus;
      }
      break;
    default:
      throw ParseError(tok.pos, std::string("unexpected character '") + c +
                                    "'");
    }
    tok.text = std::string(text.substr(i, width));
    advance(width);
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Tok::End;
  end.pos = {line, column};
  out.push_back(end);
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ComputationSpec run() {
    ComputationSpec spec;
    const Token &first = peek();
    if (first.kind != Tok::Ident || first.text != "space")
      throw ParseError(first.pos, "expected 'space' declaration");
    next();
    std::set<std::string> names;
    for (;;) {
      IndexDecl decl;
      const Token &name = expect(Tok::Ident);
      decl.name = name.text;
      decl.pos = name.pos;
      if (decl.name == "space")
        throw ParseError(name.pos, "'space' is reserved");
      expect(Tok::LBracket);
      const Token &size = expect(Tok::Int);
      decl.size = std::stoll(size.text);
      if (decl.size < 1)
        throw ParseError(size.pos, "index size must be at least 1");
      expect(Tok::RBracket);
      if (!names.insert(decl.name).second)
        throw ParseError(name.pos, "duplicate index '" + decl.name + "'");
      spec.indexes.push_back(std::move(decl));
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      expect(Tok::Semi);
      break;
    }
    declared_ = std::move(names);
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Ident && peek().text == "space")
        throw ParseError(peek().pos, "only one 'space' declaration allowed");
      spec.formulas.push_back(formula());
      expect(Tok::Semi);
    }
    return spec;
  }

private:
  const Token &peek() const { return toks_[pos_]; }
  const Token &next() { return toks_[pos_++]; }

  const Token &expect(Tok kind) {
    const Token &tok = peek();
    if (tok.kind != kind)
      throw ParseError(tok.pos, std::string("expected ") + describe(kind) +
                                    ", found " + describe(tok.kind));
    return next();
  }

  Formula formula() {
    Formula f;
    f.pos = peek().pos;
    f.result = ref();
    const Token &op = next();
    if (op.kind == Tok::Assign)
      f.op = FormulaOp::Assign;
    else if (op.kind == Tok::PlusAssign)
      f.op = FormulaOp::Accumulate;
    else
      throw ParseError(op.pos, std::string("expected '=' or '+=', found ") +
                                   describe(op.kind));
    f.operands.push_back(term());
    while (peek().kind == Tok::Plus) {
      next();
      f.operands.push_back(term());
    }
    return f;
  }

  Term term() {
    Term t;
    t.items.push_back(item());
    while (peek().kind == Tok::Star) {
      next();
      t.items.push_back(item());
    }
    return t;
  }

  TermItem item() {
    TermItem it;
    if (peek().kind == Tok::LParen) {
      next();
      it.grouped = true;
      it.group = term().items;
      expect(Tok::RParen);
      return it;
    }
    it.ref = ref();
    return it;
  }

  ArrayRef ref() {
    ArrayRef r;
    const Token &name = expect(Tok::Ident);
    r.array = name.text;
    r.pos = name.pos;
    if (declared_.count(r.array))
      throw ParseError(name.pos, "'" + r.array +
                                     "' is an index, expected an array name");
    if (peek().kind != Tok::LParen)
      return r;
    next();
    if (peek().kind == Tok::RParen) {
      next();
      return r;
    }
    for (;;) {
      r.factors.push_back(factor());
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      expect(Tok::RParen);
      break;
    }
    return r;
  }

  Factor factor() {
    Factor f;
    const Token &name = expect(Tok::Ident);
    f.index = name.text;
    f.pos = name.pos;
    if (!declared_.count(f.index))
      throw ParseError(name.pos, "undeclared index '" + f.index + "'");
    if (peek().kind == Tok::Caret) {
      next();
      f.exponent = static_cast<int>(std::stoll(expect(Tok::Int).text));
    }
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool negative = next().kind == Tok::Minus;
      const std::int64_t v = std::stoll(expect(Tok::Int).text);
      f.displacement = negative ? -v : v;
    }
    return f;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> declared_;
};

} // namespace

ComputationSpec parse_spec(std::string_view text) {
  return Parser(lex(text)).run();
}

} // namespace clocksched
