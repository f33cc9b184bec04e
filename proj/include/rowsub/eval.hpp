#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "rowsub/syntax.hpp"

namespace rowsub {

struct ValueNode;
using Value = std::shared_ptr<ValueNode>;

// Persistent environment; bindings are cells so a recursive closure can
// capture its own slot before the slot is filled.
class ValueEnv {
 public:
  ValueEnv extend(std::string name, Value value) const;
  std::pair<ValueEnv, std::shared_ptr<Value>> extend_cell(std::string name) const;
  // Innermost binding, or null when unbound.
  const Value* lookup(std::string_view name) const;

 private:
  struct Node {
    std::string name;
    std::shared_ptr<Value> cell;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
};

struct VInt {
  std::string digits;
};
struct VClosure {
  std::string param;
  Term body;
  ValueEnv env;
};
struct VRecord {
  std::map<std::string, Value> fields;
};

struct ValueNode {
  std::variant<VInt, VClosure, VRecord> v;
};

Value make_vint(std::string digits);
Value make_vclosure(std::string param, Term body, ValueEnv env);
Value make_vrecord(std::map<std::string, Value> fields);

std::string show_value(const Value& v);

struct EvalResult {
  enum class Status { Ok, Stuck, OutOfFuel };

  Status status;
  Value value;    // set when Ok
  Term offender;  // set when Stuck

  bool ok() const { return status == Status::Ok; }
  bool stuck() const { return status == Status::Stuck; }
  bool out_of_fuel() const { return status == Status::OutOfFuel; }
};

// Call-by-value big-step evaluation. Fuel is spent once per application;
// running out yields OutOfFuel. Applying a non-closure, projecting a missing
// label or a non-record, extending a non-record, and a let rec whose
// right-hand side is not a lambda all get Stuck.
EvalResult eval(const Term& term, const ValueEnv& env, int fuel);

}  // namespace rowsub
