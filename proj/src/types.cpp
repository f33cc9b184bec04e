#include "rowsub/types.hpp"

#include <algorithm>

namespace rowsub {

// ======================= Constructors =======================

SimpleType make_int_type() { return std::make_shared<TypeNode>(TypeNode{TInt{}}); }

SimpleType make_fun_type(SimpleType dom, SimpleType cod) {
  return std::make_shared<TypeNode>(TypeNode{TFun{std::move(dom), std::move(cod)}});
}

SimpleType make_rec_type(Row row) {
  return std::make_shared<TypeNode>(TypeNode{TRec{std::move(row)}});
}

SimpleType make_type_var(std::shared_ptr<TypeVarState> state) {
  return std::make_shared<TypeNode>(TypeNode{TVar{std::move(state)}});
}

SimpleType fresh_type_var(VarSupply& supply, int level) {
  return make_type_var(std::make_shared<TypeVarState>(TypeVarState{supply.fresh_id(), level, {}, {}}));
}

Row make_row_cons(std::string label, Field field, Row rest) {
  return std::make_shared<RowNode>(RowNode{RCons{std::move(label), std::move(field), std::move(rest)}});
}

Row make_row_empty() { return std::make_shared<RowNode>(RowNode{REmpty{}}); }

Row make_row_var(std::shared_ptr<RowVarState> state) {
  return std::make_shared<RowNode>(RowNode{RVar{std::move(state)}});
}

Row fresh_row_var(VarSupply& supply, int level) {
  return make_row_var(
      std::make_shared<RowVarState>(RowVarState{supply.fresh_id(), level, {}, {}, std::nullopt}));
}

Field make_pre_field(SimpleType type) {
  return std::make_shared<FieldNode>(FieldNode{FPre{std::move(type)}});
}

Field make_abs_field() { return std::make_shared<FieldNode>(FieldNode{FAbs{}}); }

Field make_field_var(std::shared_ptr<FieldVarState> state) {
  return std::make_shared<FieldNode>(FieldNode{FVar{std::move(state)}});
}

Field fresh_field_var(VarSupply& supply, int level) {
  return make_field_var(std::make_shared<FieldVarState>(FieldVarState{supply.fresh_id(), level, {}, {}}));
}

Row expansion_view(const RowVarState& state) {
  const RowExpansion& e = *state.expansion;
  return make_row_cons(e.label, make_field_var(e.field), make_row_var(e.rest));
}

// ======================= Row normalization =======================

const Field* NormalRow::find(std::string_view label) const {
  for (const auto& [l, f] : fields)
    if (l == label) return &f;
  return nullptr;
}

NormalRow normalize_row(const Row& row) {
  NormalRow out;
  Row cur = row;
  while (true) {
    if (const auto* cons = std::get_if<RCons>(&cur->v)) {
      if (!out.find(cons->label)) out.fields.emplace_back(cons->label, cons->field);
      cur = cons->rest;
    } else if (std::get_if<REmpty>(&cur->v)) {
      out.tail = nullptr;
      return out;
    } else {
      const auto& var = std::get<RVar>(cur->v);
      if (!var.state->expansion) {
        out.tail = var.state;
        return out;
      }
      const RowExpansion& e = *var.state->expansion;
      if (!out.find(e.label)) out.fields.emplace_back(e.label, make_field_var(e.field));
      cur = make_row_var(e.rest);
    }
  }
}

Row row_from_normal(const NormalRow& normal) {
  Row row = normal.tail ? make_row_var(normal.tail) : make_row_empty();
  for (auto it = normal.fields.rbegin(); it != normal.fields.rend(); ++it)
    row = make_row_cons(it->first, it->second, row);
  return row;
}

// ======================= Levels =======================

// Bounds of a variable never mention levels above the variable's own level
// (enforced by extrusion in the solver), so a variable's level is its
// state's level.

int level_of(const SimpleType& type) {
  if (std::get_if<TInt>(&type->v)) return 0;
  if (const auto* fun = std::get_if<TFun>(&type->v))
    return std::max(level_of(fun->dom), level_of(fun->cod));
  if (const auto* rec = std::get_if<TRec>(&type->v)) return level_of(rec->row);
  return std::get<TVar>(type->v).state->level;
}

int level_of(const Row& row) {
  if (const auto* cons = std::get_if<RCons>(&row->v))
    return std::max(level_of(cons->field), level_of(cons->rest));
  if (std::get_if<REmpty>(&row->v)) return 0;
  return std::get<RVar>(row->v).state->level;
}

int level_of(const Field& field) {
  if (const auto* pre = std::get_if<FPre>(&field->v)) return level_of(pre->type);
  if (std::get_if<FAbs>(&field->v)) return 0;
  return std::get<FVar>(field->v).state->level;
}

// ======================= Environments =======================

void TypeEnv::push(std::string name, TypeScheme scheme) {
  entries_.emplace_back(std::move(name), std::move(scheme));
}

void TypeEnv::pop() { entries_.pop_back(); }

const TypeScheme* TypeEnv::lookup(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

}  // namespace rowsub
