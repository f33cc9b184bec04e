#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rowsub {

struct TypeNode;
struct RowNode;
struct FieldNode;

using SimpleType = std::shared_ptr<TypeNode>;
using Row = std::shared_ptr<RowNode>;
using Field = std::shared_ptr<FieldNode>;

struct TypeVarState;
struct RowVarState;
struct FieldVarState;

// One counter shared by all three variable kinds, so ids are unique across
// kinds for the lifetime of an engine instance.
struct VarSupply {
  std::uint32_t next = 0;
  std::uint32_t fresh_id() { return next++; }
};

// ======================= Inference-time types =======================

struct TInt {};
struct TFun {
  SimpleType dom;
  SimpleType cod;
};
struct TRec {
  Row row;
};
struct TVar {
  std::shared_ptr<TypeVarState> state;
};

struct TypeNode {
  std::variant<TInt, TFun, TRec, TVar> v;
};

// A row is a spine of labeled fields ending in a closed tail (REmpty: all
// remaining fields absent) or a row variable.
struct RCons {
  std::string label;
  Field field;
  Row rest;
};
struct REmpty {};
struct RVar {
  std::shared_ptr<RowVarState> state;
};

struct RowNode {
  std::variant<RCons, REmpty, RVar> v;
};

struct FPre {
  SimpleType type;
};
struct FAbs {};
struct FVar {
  std::shared_ptr<FieldVarState> state;
};

struct FieldNode {
  std::variant<FPre, FAbs, FVar> v;
};

// ======================= Variable states =======================

struct TypeVarState {
  std::uint32_t id;
  int level;
  std::vector<SimpleType> lower_bounds;
  std::vector<SimpleType> upper_bounds;
};

// Single-assignment: once set, a row variable reads everywhere as
// {label: field ; rest}.
struct RowExpansion {
  std::string label;
  std::shared_ptr<FieldVarState> field;
  std::shared_ptr<RowVarState> rest;
};

struct RowVarState {
  std::uint32_t id;
  int level;
  std::vector<Row> lower_bounds;
  std::vector<Row> upper_bounds;
  std::optional<RowExpansion> expansion;
};

struct FieldVarState {
  std::uint32_t id;
  int level;
  std::vector<Field> lower_bounds;
  std::vector<Field> upper_bounds;
};

// ======================= Constructors =======================

SimpleType make_int_type();
SimpleType make_fun_type(SimpleType dom, SimpleType cod);
SimpleType make_rec_type(Row row);
SimpleType make_type_var(std::shared_ptr<TypeVarState> state);
SimpleType fresh_type_var(VarSupply& supply, int level);

Row make_row_cons(std::string label, Field field, Row rest);
Row make_row_empty();
Row make_row_var(std::shared_ptr<RowVarState> state);
Row fresh_row_var(VarSupply& supply, int level);

Field make_pre_field(SimpleType type);
Field make_abs_field();
Field make_field_var(std::shared_ptr<FieldVarState> state);
Field fresh_field_var(VarSupply& supply, int level);

// The structural reading of an expanded row variable.
Row expansion_view(const RowVarState& state);

// ======================= Row normalization =======================

// Canonical view of a row: fields in spine order (first occurrence of a
// label wins), expansions followed transitively, plus the final tail.
// A null tail means the row is closed.
struct NormalRow {
  std::vector<std::pair<std::string, Field>> fields;
  std::shared_ptr<RowVarState> tail;

  const Field* find(std::string_view label) const;
  bool closed() const { return tail == nullptr; }
};

NormalRow normalize_row(const Row& row);

// Rebuild a spine from a normalized view (used by tests for idempotence).
Row row_from_normal(const NormalRow& normal);

// ======================= Levels =======================

int level_of(const SimpleType& type);
int level_of(const Row& row);
int level_of(const Field& field);

// ======================= Environments =======================

struct TypeScheme {
  SimpleType body;
  int level = 0;  // variables above this level are generalized
  bool poly = false;
};

class TypeEnv {
 public:
  void push(std::string name, TypeScheme scheme);
  void pop();
  // Innermost binding, or null when the identifier is unbound.
  const TypeScheme* lookup(std::string_view name) const;

 private:
  std::vector<std::pair<std::string, TypeScheme>> entries_;
};

}  // namespace rowsub
