#include "rowsub/syntax.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace rowsub {

// ======================= Term construction =======================

Term make_int_lit(std::string digits) {
  return std::make_shared<TermNode>(TermNode{IntLit{std::move(digits)}});
}
Term make_var(std::string name) { return std::make_shared<TermNode>(TermNode{Var{std::move(name)}}); }
Term make_lam(std::string param, Term body) {
  return std::make_shared<TermNode>(TermNode{Lam{std::move(param), std::move(body)}});
}
Term make_app(Term fn, Term arg) {
  return std::make_shared<TermNode>(TermNode{App{std::move(fn), std::move(arg)}});
}
Term make_record(std::vector<std::pair<std::string, Term>> fields) {
  return std::make_shared<TermNode>(TermNode{RecordLit{std::move(fields)}});
}
Term make_proj(Term subject, std::string label) {
  return std::make_shared<TermNode>(TermNode{Proj{std::move(subject), std::move(label)}});
}
Term make_let_rec(std::string name, Term bound, Term body) {
  return std::make_shared<TermNode>(TermNode{LetRec{std::move(name), std::move(bound), std::move(body)}});
}
Term make_extend(Term subject, std::string label, Term value) {
  return std::make_shared<TermNode>(TermNode{Extend{std::move(subject), std::move(label), std::move(value)}});
}

bool term_equal(const Term& a, const Term& b) {
  if (a->v.index() != b->v.index()) return false;
  if (const auto* i = std::get_if<IntLit>(&a->v)) return i->digits == std::get<IntLit>(b->v).digits;
  if (const auto* x = std::get_if<Var>(&a->v)) return x->name == std::get<Var>(b->v).name;
  if (const auto* l = std::get_if<Lam>(&a->v)) {
    const auto& r = std::get<Lam>(b->v);
    return l->param == r.param && term_equal(l->body, r.body);
  }
  if (const auto* l = std::get_if<App>(&a->v)) {
    const auto& r = std::get<App>(b->v);
    return term_equal(l->fn, r.fn) && term_equal(l->arg, r.arg);
  }
  if (const auto* l = std::get_if<RecordLit>(&a->v)) {
    const auto& r = std::get<RecordLit>(b->v);
    if (l->fields.size() != r.fields.size()) return false;
    for (size_t i = 0; i < l->fields.size(); ++i) {
      if (l->fields[i].first != r.fields[i].first) return false;
      if (!term_equal(l->fields[i].second, r.fields[i].second)) return false;
    }
    return true;
  }
  if (const auto* l = std::get_if<Proj>(&a->v)) {
    const auto& r = std::get<Proj>(b->v);
    return l->label == r.label && term_equal(l->subject, r.subject);
  }
  if (const auto* l = std::get_if<LetRec>(&a->v)) {
    const auto& r = std::get<LetRec>(b->v);
    return l->name == r.name && term_equal(l->bound, r.bound) && term_equal(l->body, r.body);
  }
  const auto& l = std::get<Extend>(a->v);
  const auto& r = std::get<Extend>(b->v);
  return l.label == r.label && term_equal(l.subject, r.subject) && term_equal(l.value, r.value);
}

// ======================= Lexer =======================

ParseError::ParseError(int line, int column, std::string message, Kind kind)
    : std::runtime_error(std::move(message)), line_(line), column_(column), kind_(kind) {}

namespace {

enum class Tok {
  Ident,
  Int,
  KwFun,
  KwLet,
  KwRec,
  KwIn,
  KwWith,
  Arrow,
  Equals,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Dot,
  Comma,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::KwFun: return "'fun'";
    case Tok::KwLet: return "'let'";
    case Tok::KwRec: return "'rec'";
    case Tok::KwIn: return "'in'";
    case Tok::KwWith: return "'with'";
    case Tok::Arrow: return "'->'";
    case Tok::Equals: return "'='";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string digits;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          digits += take();
        // canonical form: no leading zeros
        size_t nz = digits.find_first_not_of('0');
        digits = nz == std::string::npos ? "0" : digits.substr(nz);
        out.push_back({Tok::Int, std::move(digits), line, col});
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string word;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          word += take();
        Tok kind = Tok::Ident;
        if (word == "fun") kind = Tok::KwFun;
        else if (word == "let") kind = Tok::KwLet;
        else if (word == "rec") kind = Tok::KwRec;
        else if (word == "in") kind = Tok::KwIn;
        else if (word == "with") kind = Tok::KwWith;
        out.push_back({kind, std::move(word), line, col});
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        take();
        take();
        out.push_back({Tok::Arrow, "->", line, col});
      } else {
        Tok kind;
        switch (c) {
          case '=': kind = Tok::Equals; break;
          case '{': kind = Tok::LBrace; break;
          case '}': kind = Tok::RBrace; break;
          case '(': kind = Tok::LParen; break;
          case ')': kind = Tok::RParen; break;
          case '.': kind = Tok::Dot; break;
          case ',': kind = Tok::Comma; break;
          default:
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        take();
        out.push_back({kind, std::string(1, c), line, col});
      }
    }
  }

 private:
  char take() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ======================= Parser =======================

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Term run() {
    Term t = term();
    expect(Tok::End);
    return t;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  bool at(Tok kind) const { return peek().kind == kind; }

  Token expect(Tok kind) {
    if (!at(kind)) fail(std::string("expected ") + describe(kind));
    return advance();
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, what + ", found " + describe(t.kind));
  }

  Term term() {
    if (at(Tok::KwLet)) {
      advance();
      expect(Tok::KwRec);
      std::string name = expect(Tok::Ident).text;
      expect(Tok::Equals);
      Term bound = term();
      expect(Tok::KwIn);
      Term body = term();
      return make_let_rec(std::move(name), std::move(bound), std::move(body));
    }
    if (at(Tok::KwFun)) {
      advance();
      std::string param = expect(Tok::Ident).text;
      expect(Tok::Arrow);
      Term body = term();
      return make_lam(std::move(param), std::move(body));
    }
    return ext();
  }

  Term ext() {
    Term t = app();
    while (at(Tok::KwWith)) {
      advance();
      expect(Tok::LBrace);
      std::string label = expect(Tok::Ident).text;
      expect(Tok::Equals);
      Term value = term();
      expect(Tok::RBrace);
      t = make_extend(std::move(t), std::move(label), std::move(value));
    }
    return t;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::Int:
      case Tok::Ident:
      case Tok::LBrace:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  Term app() {
    Term t = atom();
    while (starts_atom()) t = make_app(std::move(t), atom());
    return t;
  }

  Term atom() {
    Term t = prim();
    while (at(Tok::Dot)) {
      advance();
      std::string label = expect(Tok::Ident).text;
      t = make_proj(std::move(t), std::move(label));
    }
    return t;
  }

  Term prim() {
    if (at(Tok::Int)) return make_int_lit(advance().text);
    if (at(Tok::Ident)) return make_var(advance().text);
    if (at(Tok::LParen)) {
      advance();
      Term t = term();
      expect(Tok::RParen);
      return t;
    }
    if (at(Tok::LBrace)) return record();
    fail("expected a term");
  }

  Term record() {
    expect(Tok::LBrace);
    std::vector<std::pair<std::string, Term>> fields;
    std::set<std::string> seen;
    if (!at(Tok::RBrace)) {
      while (true) {
        Token label = expect(Tok::Ident);
        if (!seen.insert(label.text).second)
          throw ParseError(label.line, label.column, "duplicate label '" + label.text + "'",
                           ParseError::Kind::DuplicateLabel);
        expect(Tok::Equals);
        Term value = term();
        fields.emplace_back(label.text, std::move(value));
        if (at(Tok::Comma)) {
          advance();
          continue;
        }
        break;
      }
    }
    expect(Tok::RBrace);
    return make_record(std::move(fields));
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

}  // namespace

Term parse(std::string_view source) { return Parser(Lexer(source).run()).run(); }

// ======================= Printer =======================

namespace {

// Binding contexts, tightest last: 0 = full term, 1 = with-subject,
// 2 = function position of an application, 3 = atom.
void show(const Term& t, int prec, std::string& out) {
  if (const auto* i = std::get_if<IntLit>(&t->v)) {
    out += i->digits;
  } else if (const auto* x = std::get_if<Var>(&t->v)) {
    out += x->name;
  } else if (const auto* l = std::get_if<Lam>(&t->v)) {
    bool wrap = prec > 0;
    if (wrap) out += '(';
    out += "fun " + l->param + " -> ";
    show(l->body, 0, out);
    if (wrap) out += ')';
  } else if (const auto* lr = std::get_if<LetRec>(&t->v)) {
    bool wrap = prec > 0;
    if (wrap) out += '(';
    out += "let rec " + lr->name + " = ";
    show(lr->bound, 0, out);
    out += " in ";
    show(lr->body, 0, out);
    if (wrap) out += ')';
  } else if (const auto* e = std::get_if<Extend>(&t->v)) {
    bool wrap = prec > 1;
    if (wrap) out += '(';
    show(e->subject, 1, out);
    out += " with {" + e->label + " = ";
    show(e->value, 0, out);
    out += '}';
    if (wrap) out += ')';
  } else if (const auto* a = std::get_if<App>(&t->v)) {
    bool wrap = prec > 2;
    if (wrap) out += '(';
    show(a->fn, 2, out);
    out += ' ';
    show(a->arg, 3, out);
    if (wrap) out += ')';
  } else if (const auto* p = std::get_if<Proj>(&t->v)) {
    show(p->subject, 3, out);
    out += '.' + p->label;
  } else {
    const auto& r = std::get<RecordLit>(t->v);
    out += '{';
    bool first = true;
    for (const auto& [label, value] : r.fields) {
      if (!first) out += ", ";
      first = false;
      out += label + " = ";
      show(value, 0, out);
    }
    out += '}';
  }
}

}  // namespace

std::string print_term(const Term& term) {
  std::string out;
  show(term, 0, out);
  return out;
}

}  // namespace rowsub
