#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rowsub {

struct TermNode;
using Term = std::shared_ptr<TermNode>;

// Integer literals are non-negative decimals of arbitrary size, kept as
// canonical digit strings (no leading zeros); the language has no arithmetic.
struct IntLit {
  std::string digits;
};
struct Var {
  std::string name;
};
struct Lam {
  std::string param;
  Term body;
};
struct App {
  Term fn;
  Term arg;
};
struct RecordLit {
  std::vector<std::pair<std::string, Term>> fields;  // labels pairwise distinct
};
struct Proj {
  Term subject;
  std::string label;
};
struct LetRec {
  std::string name;
  Term bound;
  Term body;
};
struct Extend {
  Term subject;
  std::string label;
  Term value;
};

struct TermNode {
  std::variant<IntLit, Var, Lam, App, RecordLit, Proj, LetRec, Extend> v;
};

Term make_int_lit(std::string digits);
Term make_var(std::string name);
Term make_lam(std::string param, Term body);
Term make_app(Term fn, Term arg);
Term make_record(std::vector<std::pair<std::string, Term>> fields);
Term make_proj(Term subject, std::string label);
Term make_let_rec(std::string name, Term bound, Term body);
Term make_extend(Term subject, std::string label, Term value);

bool term_equal(const Term& a, const Term& b);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, DuplicateLabel };

  ParseError(int line, int column, std::string message, Kind kind = Kind::Syntax);

  int line() const { return line_; }
  int column() const { return column_; }
  Kind kind() const { return kind_; }

 private:
  int line_;
  int column_;
  Kind kind_;
};

// Concrete syntax:
//
//   term   := "let" "rec" ident "=" term "in" term
//           | "fun" ident "->" term
//           | ext
//   ext    := app { "with" "{" ident "=" term "}" }
//   app    := atom { atom }
//   atom   := prim { "." ident }
//   prim   := integer | ident | record | "(" term ")"
//   record := "{" [ ident "=" term { "," ident "=" term } ] "}"
//
// "//" starts a comment running to end of line. Application associates to
// the left; projection binds tighter than application; "with" binds looser
// than application and chains to the left.
Term parse(std::string_view source);

// Canonical rendering; parse(print_term(t)) is structurally equal to t.
std::string print_term(const Term& term);

}  // namespace rowsub
