#include "rowsub/infer.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "rowsub/coalesce.hpp"

namespace rowsub {

// ======================= Constraint cache =======================

ConstraintCache::Key ConstraintCache::key(const SimpleType& t) {
  if (const auto* var = std::get_if<TVar>(&t->v)) return {0, nullptr, var->state->id};
  return {1, t, 0};
}

ConstraintCache::Key ConstraintCache::key(const Row& r) {
  if (const auto* var = std::get_if<RVar>(&r->v)) return {2, nullptr, var->state->id};
  return {3, r, 0};
}

ConstraintCache::Key ConstraintCache::key(const Field& f) {
  if (const auto* var = std::get_if<FVar>(&f->v)) return {4, nullptr, var->state->id};
  return {5, f, 0};
}

bool ConstraintCache::insert(Key a, Key b) {
  return !seen_.emplace(std::move(a), std::move(b)).second;
}

bool ConstraintCache::seen_or_insert(const SimpleType& lhs, const SimpleType& rhs) {
  return insert(key(lhs), key(rhs));
}
bool ConstraintCache::seen_or_insert(const Row& lhs, const Row& rhs) {
  return insert(key(lhs), key(rhs));
}
bool ConstraintCache::seen_or_insert(const Field& lhs, const Field& rhs) {
  return insert(key(lhs), key(rhs));
}

// ======================= Error rendering =======================

std::string Inferencer::show_for_error(const SimpleType& type, bool positive) {
  CoalesceOptions options;
  options.eliminate_polar_vars = false;
  return print_type(coalesce(type, supply_, positive, options));
}

std::string Inferencer::show_for_error(const Field& field, bool positive) {
  if (const auto* pre = std::get_if<FPre>(&field->v)) return show_for_error(pre->type, positive);
  if (std::get_if<FAbs>(&field->v)) return "abs";
  return "'" + std::to_string(std::get<FVar>(field->v).state->id);
}

// ======================= Typing =======================

SimpleType Inferencer::infer_program(const Term& term) {
  TypeEnv env;
  return type_term(term, env, 0);
}

SimpleType Inferencer::type_term(const Term& term, TypeEnv& env, int level) {
  if (trace_) trace_->type_term_enter(term);
  SimpleType result;
  {
    TraceScope scope(trace_);
    if (const auto* lit = std::get_if<IntLit>(&term->v)) {
      (void)lit;
      result = make_int_type();
    } else if (const auto* var = std::get_if<Var>(&term->v)) {
      const TypeScheme* scheme = env.lookup(var->name);
      if (!scheme) throw TypeError(TypeErrorKind::UnboundVariable, "unbound variable: " + var->name);
      result = scheme->poly ? instantiate(*scheme, level) : scheme->body;
    } else if (const auto* lam = std::get_if<Lam>(&term->v)) {
      SimpleType param = fresh_type(level);
      env.push(lam->param, TypeScheme{param, 0, false});
      SimpleType body = type_term(lam->body, env, level);
      env.pop();
      result = make_fun_type(param, body);
    } else if (const auto* app = std::get_if<App>(&term->v)) {
      SimpleType fn = type_term(app->fn, env, level);
      SimpleType arg = type_term(app->arg, env, level);
      SimpleType res = fresh_type(level);
      constrain(fn, make_fun_type(arg, res));
      result = res;
    } else if (const auto* rec = std::get_if<RecordLit>(&term->v)) {
      // record literals are closed: the spine ends in the empty row
      std::vector<std::pair<std::string, SimpleType>> fields;
      for (const auto& [label, value] : rec->fields)
        fields.emplace_back(label, type_term(value, env, level));
      Row row = make_row_empty();
      for (auto it = fields.rbegin(); it != fields.rend(); ++it)
        row = make_row_cons(it->first, make_pre_field(it->second), row);
      result = make_rec_type(row);
    } else if (const auto* proj = std::get_if<Proj>(&term->v)) {
      SimpleType subject = type_term(proj->subject, env, level);
      SimpleType res = fresh_type(level);
      Row rest = fresh_row(level);
      constrain(subject, make_rec_type(make_row_cons(proj->label, make_pre_field(res), rest)));
      result = res;
    } else if (const auto* ext = std::get_if<Extend>(&term->v)) {
      SimpleType subject = type_term(ext->subject, env, level);
      Field old_field = fresh_field(level);
      Row rest = fresh_row(level);
      constrain(subject, make_rec_type(make_row_cons(ext->label, old_field, rest)));
      SimpleType value = type_term(ext->value, env, level);
      result = make_rec_type(make_row_cons(ext->label, make_pre_field(value), rest));
    } else {
      const auto& let = std::get<LetRec>(term->v);
      SimpleType rec_var = fresh_type(level + 1);
      env.push(let.name, TypeScheme{rec_var, 0, false});
      SimpleType bound = type_term(let.bound, env, level + 1);
      constrain(bound, rec_var);
      env.pop();
      env.push(let.name, generalize(rec_var, level));
      result = type_term(let.body, env, level);
      env.pop();
    }
  }
  if (trace_) trace_->result_type(result);
  return result;
}

// ======================= Generalization =======================

TypeScheme Inferencer::generalize(const SimpleType& type, int level) const {
  return TypeScheme{type, level, true};
}

// Deep copy for instantiation: variables above the cutoff become fresh ones
// at the target level, memoized per state so sharing (including cycles
// through bounds) is preserved. Expanded row variables are copied through
// their structural view.
struct Inferencer::Copier {
  Inferencer& inf;
  int cutoff;
  int at_level;
  std::map<const TypeVarState*, SimpleType> type_memo;
  std::map<const RowVarState*, Row> row_memo;
  std::map<const FieldVarState*, Field> field_memo;

  SimpleType copy(const SimpleType& t) {
    if (std::get_if<TInt>(&t->v)) return t;
    if (const auto* fun = std::get_if<TFun>(&t->v))
      return make_fun_type(copy(fun->dom), copy(fun->cod));
    if (const auto* rec = std::get_if<TRec>(&t->v)) return make_rec_type(copy(rec->row));
    const auto& state = std::get<TVar>(t->v).state;
    if (state->level <= cutoff) return t;
    if (auto it = type_memo.find(state.get()); it != type_memo.end()) return it->second;
    SimpleType fresh = fresh_type_var(inf.supply_, at_level);
    type_memo.emplace(state.get(), fresh);
    auto& fresh_state = *std::get<TVar>(fresh->v).state;
    for (const auto& b : state->lower_bounds) fresh_state.lower_bounds.push_back(copy(b));
    for (const auto& b : state->upper_bounds) fresh_state.upper_bounds.push_back(copy(b));
    return fresh;
  }

  Row copy(const Row& r) {
    if (const auto* cons = std::get_if<RCons>(&r->v))
      return make_row_cons(cons->label, copy(cons->field), copy(cons->rest));
    if (std::get_if<REmpty>(&r->v)) return r;
    const auto& state = std::get<RVar>(r->v).state;
    if (state->level <= cutoff) return r;
    if (state->expansion) return copy(expansion_view(*state));
    if (auto it = row_memo.find(state.get()); it != row_memo.end()) return it->second;
    Row fresh = fresh_row_var(inf.supply_, at_level);
    row_memo.emplace(state.get(), fresh);
    auto& fresh_state = *std::get<RVar>(fresh->v).state;
    for (const auto& b : state->lower_bounds) fresh_state.lower_bounds.push_back(copy(b));
    for (const auto& b : state->upper_bounds) fresh_state.upper_bounds.push_back(copy(b));
    return fresh;
  }

  Field copy(const Field& f) {
    if (const auto* pre = std::get_if<FPre>(&f->v)) return make_pre_field(copy(pre->type));
    if (std::get_if<FAbs>(&f->v)) return f;
    const auto& state = std::get<FVar>(f->v).state;
    if (state->level <= cutoff) return f;
    if (auto it = field_memo.find(state.get()); it != field_memo.end()) return it->second;
    Field fresh = fresh_field_var(inf.supply_, at_level);
    field_memo.emplace(state.get(), fresh);
    auto& fresh_state = *std::get<FVar>(fresh->v).state;
    for (const auto& b : state->lower_bounds) fresh_state.lower_bounds.push_back(copy(b));
    for (const auto& b : state->upper_bounds) fresh_state.upper_bounds.push_back(copy(b));
    return fresh;
  }
};

SimpleType Inferencer::instantiate(const TypeScheme& scheme, int level) {
  if (!scheme.poly) return scheme.body;
  Copier copier{*this, scheme.level, level, {}, {}, {}};
  return copier.copy(scheme.body);
}

// ======================= Extrusion =======================

// Bounds may only mention levels at or below their variable's level. When a
// constraint crosses levels, the higher-level side is copied down with
// bound links to the original, mirroring the copy's polarity.
struct Inferencer::Extruder {
  std::map<std::pair<const TypeVarState*, bool>, std::shared_ptr<TypeVarState>> types;
  std::map<std::pair<const RowVarState*, bool>, std::shared_ptr<RowVarState>> rows;
  std::map<std::pair<const FieldVarState*, bool>, std::shared_ptr<FieldVarState>> fields;
};

SimpleType Inferencer::extrude_type(const SimpleType& type, bool pos, int level, Extruder& ex) {
  if (level_of(type) <= level) return type;
  if (const auto* fun = std::get_if<TFun>(&type->v))
    return make_fun_type(extrude_type(fun->dom, !pos, level, ex),
                         extrude_type(fun->cod, pos, level, ex));
  if (const auto* rec = std::get_if<TRec>(&type->v))
    return make_rec_type(extrude_row(rec->row, pos, level, ex));

  const auto& state = std::get<TVar>(type->v).state;
  auto key = std::make_pair(state.get(), pos);
  if (auto it = ex.types.find(key); it != ex.types.end()) return make_type_var(it->second);
  auto copy = std::make_shared<TypeVarState>(TypeVarState{supply_.fresh_id(), level, {}, {}});
  ex.types.emplace(key, copy);
  if (pos) {
    state->upper_bounds.push_back(make_type_var(copy));
    for (const auto& b : state->lower_bounds)
      copy->lower_bounds.push_back(extrude_type(b, pos, level, ex));
  } else {
    state->lower_bounds.push_back(make_type_var(copy));
    for (const auto& b : state->upper_bounds)
      copy->upper_bounds.push_back(extrude_type(b, pos, level, ex));
  }
  return make_type_var(copy);
}

Row Inferencer::extrude_row(const Row& row, bool pos, int level, Extruder& ex) {
  if (level_of(row) <= level) return row;
  if (const auto* cons = std::get_if<RCons>(&row->v))
    return make_row_cons(cons->label, extrude_field(cons->field, pos, level, ex),
                         extrude_row(cons->rest, pos, level, ex));

  const auto& state = std::get<RVar>(row->v).state;
  // an expanded variable is its view; extruding the opaque state would lose
  // the fields it already carries
  if (state->expansion) return extrude_row(expansion_view(*state), pos, level, ex);
  auto key = std::make_pair(state.get(), pos);
  if (auto it = ex.rows.find(key); it != ex.rows.end()) return make_row_var(it->second);
  auto copy = std::make_shared<RowVarState>(RowVarState{supply_.fresh_id(), level, {}, {}, std::nullopt});
  ex.rows.emplace(key, copy);
  if (pos) {
    state->upper_bounds.push_back(make_row_var(copy));
    for (const auto& b : state->lower_bounds)
      copy->lower_bounds.push_back(extrude_row(b, pos, level, ex));
  } else {
    state->lower_bounds.push_back(make_row_var(copy));
    for (const auto& b : state->upper_bounds)
      copy->upper_bounds.push_back(extrude_row(b, pos, level, ex));
  }
  return make_row_var(copy);
}

Field Inferencer::extrude_field(const Field& field, bool pos, int level, Extruder& ex) {
  if (level_of(field) <= level) return field;
  if (const auto* pre = std::get_if<FPre>(&field->v))
    return make_pre_field(extrude_type(pre->type, pos, level, ex));

  const auto& state = std::get<FVar>(field->v).state;
  auto key = std::make_pair(state.get(), pos);
  if (auto it = ex.fields.find(key); it != ex.fields.end()) return make_field_var(it->second);
  auto copy = std::make_shared<FieldVarState>(FieldVarState{supply_.fresh_id(), level, {}, {}});
  ex.fields.emplace(key, copy);
  if (pos) {
    state->upper_bounds.push_back(make_field_var(copy));
    for (const auto& b : state->lower_bounds)
      copy->lower_bounds.push_back(extrude_field(b, pos, level, ex));
  } else {
    state->lower_bounds.push_back(make_field_var(copy));
    for (const auto& b : state->upper_bounds)
      copy->upper_bounds.push_back(extrude_field(b, pos, level, ex));
  }
  return make_field_var(copy);
}

// ======================= Constraint solving =======================

void Inferencer::constrain(const SimpleType& lhs, const SimpleType& rhs) {
  if (cache_.seen_or_insert(lhs, rhs)) return;
  if (trace_) trace_->constrain_types(lhs, rhs);
  TraceScope scope(trace_);

  if (std::get_if<TInt>(&lhs->v) && std::get_if<TInt>(&rhs->v)) return;

  if (const auto* lf = std::get_if<TFun>(&lhs->v)) {
    if (const auto* rf = std::get_if<TFun>(&rhs->v)) {
      constrain(rf->dom, lf->dom);  // contravariant domain
      constrain(lf->cod, rf->cod);
      return;
    }
  }

  if (const auto* lr = std::get_if<TRec>(&lhs->v)) {
    if (const auto* rr = std::get_if<TRec>(&rhs->v)) {
      constrain_row(lr->row, rr->row);
      return;
    }
  }

  if (const auto* lv = std::get_if<TVar>(&lhs->v)) {
    const auto& state = lv->state;
    if (level_of(rhs) <= state->level) {
      state->upper_bounds.push_back(rhs);
      const auto lows = state->lower_bounds;
      for (const auto& low : lows) constrain(low, rhs);
      return;
    }
    Extruder ex;
    constrain(lhs, extrude_type(rhs, false, state->level, ex));
    return;
  }

  if (const auto* rv = std::get_if<TVar>(&rhs->v)) {
    const auto& state = rv->state;
    if (level_of(lhs) <= state->level) {
      state->lower_bounds.push_back(lhs);
      const auto ups = state->upper_bounds;
      for (const auto& up : ups) constrain(lhs, up);
      return;
    }
    Extruder ex;
    constrain(extrude_type(lhs, true, state->level, ex), rhs);
    return;
  }

  throw TypeError(TypeErrorKind::NotASubtype, "cannot constrain " + show_for_error(lhs, true) +
                                                  " <= " + show_for_error(rhs, false));
}

void Inferencer::constrain_row(const Row& lhs, const Row& rhs) {
  if (cache_.seen_or_insert(lhs, rhs)) return;

  // Expansions triggered mid-loop (here or in nested constraints) can
  // surface new labels on either side, so iterate to a fixpoint before
  // relating the tails.
  std::set<std::string> done;
  while (true) {
    NormalRow ln = normalize_row(lhs);
    NormalRow rn = normalize_row(rhs);

    std::vector<std::string> labels;
    for (const auto& [label, field] : ln.fields)
      if (!done.count(label)) labels.push_back(label);
    for (const auto& [label, field] : rn.fields)
      if (!done.count(label) && !ln.find(label)) labels.push_back(label);

    if (labels.empty()) {
      auto lt = ln.tail;
      auto rt = rn.tail;
      if (!lt && !rt) return;
      if (!lt && rt) {
        // closed below an open row: the all-absent row flows in
        bool present = false;
        for (const auto& b : rt->lower_bounds)
          if (std::get_if<REmpty>(&b->v)) present = true;
        if (!present) {
          Row empty = make_row_empty();
          rt->lower_bounds.push_back(empty);
          const auto ups = rt->upper_bounds;
          for (const auto& up : ups) constrain_row(empty, up);
        }
        return;
      }
      if (lt && !rt) {
        bool present = false;
        for (const auto& b : lt->upper_bounds)
          if (std::get_if<REmpty>(&b->v)) present = true;
        if (!present) {
          Row empty = make_row_empty();
          lt->upper_bounds.push_back(empty);
          const auto lows = lt->lower_bounds;
          for (const auto& low : lows) constrain_row(low, empty);
        }
        return;
      }
      constrain_row_tails(lt, rt);
      return;
    }

    auto cur_lt = ln.tail;
    auto cur_rt = rn.tail;
    for (const auto& label : labels) {
      done.insert(label);
      Field f1;
      if (const Field* found = ln.find(label)) {
        f1 = *found;
      } else if (!cur_lt) {
        f1 = make_abs_field();  // Abs unfolding: a closed row reads Abs everywhere
      } else {
        auto [field, rest] = expand(cur_lt, label);
        f1 = make_field_var(field);
        cur_lt = rest;
      }
      Field f2;
      if (const Field* found = rn.find(label)) {
        f2 = *found;
      } else if (!cur_rt) {
        f2 = make_abs_field();
      } else {
        auto [field, rest] = expand(cur_rt, label);
        f2 = make_field_var(field);
        cur_rt = rest;
      }
      constrain_field(f1, f2, label);
    }
  }
}

void Inferencer::constrain_row_tails(const std::shared_ptr<RowVarState>& lhs,
                                     const std::shared_ptr<RowVarState>& rhs) {
  if (lhs.get() == rhs.get()) return;

  // lhs <= rhs, recorded on both sides; cross-level links go through an
  // extruded copy
  if (rhs->level <= lhs->level) {
    bool present = false;
    for (const auto& b : lhs->upper_bounds)
      if (const auto* v = std::get_if<RVar>(&b->v))
        if (v->state.get() == rhs.get()) present = true;
    if (!present) {
      lhs->upper_bounds.push_back(make_row_var(rhs));
      const auto lows = lhs->lower_bounds;
      for (const auto& low : lows) constrain_row(low, make_row_var(rhs));
    }
  } else {
    Extruder ex;
    Row down = extrude_row(make_row_var(rhs), false, lhs->level, ex);
    constrain_row(make_row_var(lhs), down);
  }

  if (lhs->level <= rhs->level) {
    bool present = false;
    for (const auto& b : rhs->lower_bounds)
      if (const auto* v = std::get_if<RVar>(&b->v))
        if (v->state.get() == lhs.get()) present = true;
    if (!present) {
      rhs->lower_bounds.push_back(make_row_var(lhs));
      const auto ups = rhs->upper_bounds;
      for (const auto& up : ups) constrain_row(make_row_var(lhs), up);
    }
  } else {
    Extruder ex;
    Row down = extrude_row(make_row_var(lhs), true, rhs->level, ex);
    constrain_row(down, make_row_var(rhs));
  }
}

void Inferencer::constrain_field(const Field& lhs, const Field& rhs, const std::string& label) {
  if (cache_.seen_or_insert(lhs, rhs)) return;

  // Pre <= Pre delegates straight to the type solver, which emits its own
  // trace line.
  if (const auto* lp = std::get_if<FPre>(&lhs->v)) {
    if (const auto* rp = std::get_if<FPre>(&rhs->v)) {
      constrain(lp->type, rp->type);
      return;
    }
  }

  if (trace_) trace_->constrain_fields(lhs, rhs);
  TraceScope scope(trace_);

  if (std::get_if<FAbs>(&rhs->v)) return;  // everything is below Abs

  if (std::get_if<FAbs>(&lhs->v) && std::get_if<FPre>(&rhs->v)) {
    const auto& required = std::get<FPre>(rhs->v);
    throw TypeError(TypeErrorKind::MissingField,
                    "missing field: " + label + " (required: " + show_for_error(required.type, false) + ")");
  }

  if (const auto* lv = std::get_if<FVar>(&lhs->v)) {
    const auto& state = lv->state;
    if (level_of(rhs) <= state->level) {
      state->upper_bounds.push_back(rhs);
      const auto lows = state->lower_bounds;
      for (const auto& low : lows) constrain_field(low, rhs, label);
      return;
    }
    Extruder ex;
    constrain_field(lhs, extrude_field(rhs, false, state->level, ex), label);
    return;
  }

  const auto& rv = std::get<FVar>(rhs->v);
  const auto& state = rv.state;
  if (level_of(lhs) <= state->level) {
    state->lower_bounds.push_back(lhs);
    const auto ups = state->upper_bounds;
    for (const auto& up : ups) constrain_field(lhs, up, label);
    return;
  }
  Extruder ex;
  constrain_field(extrude_field(lhs, true, state->level, ex), rhs, label);
}

// ======================= Expansion =======================

std::pair<std::shared_ptr<FieldVarState>, std::shared_ptr<RowVarState>> Inferencer::expand(
    std::shared_ptr<RowVarState> var, const std::string& label) {
  auto cur = std::move(var);
  while (cur->expansion) {
    if (cur->expansion->label == label) return {cur->expansion->field, cur->expansion->rest};
    cur = cur->expansion->rest;
  }

  auto field = std::make_shared<FieldVarState>(FieldVarState{supply_.fresh_id(), cur->level, {}, {}});
  auto rest =
      std::make_shared<RowVarState>(RowVarState{supply_.fresh_id(), cur->level, {}, {}, std::nullopt});
  cur->expansion = RowExpansion{label, field, rest};
  if (trace_) trace_->expanded(*cur, label, *field, *rest);
  TraceScope scope(trace_);

  // every bound recorded while the variable was opaque must now relate to
  // the structural view, so later occurrences see the new label
  Row view = expansion_view(*cur);
  const auto lows = cur->lower_bounds;
  const auto ups = cur->upper_bounds;
  for (const auto& low : lows) constrain_row(low, view);
  for (const auto& up : ups) constrain_row(view, up);
  return {field, rest};
}

}  // namespace rowsub
