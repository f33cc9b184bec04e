#include "rowsub/eval.hpp"

namespace rowsub {

// ======================= Environments =======================

ValueEnv ValueEnv::extend(std::string name, Value value) const {
  ValueEnv out;
  out.head_ = std::make_shared<Node>(
      Node{std::move(name), std::make_shared<Value>(std::move(value)), head_});
  return out;
}

std::pair<ValueEnv, std::shared_ptr<Value>> ValueEnv::extend_cell(std::string name) const {
  auto cell = std::make_shared<Value>();
  ValueEnv out;
  out.head_ = std::make_shared<Node>(Node{std::move(name), cell, head_});
  return {out, cell};
}

const Value* ValueEnv::lookup(std::string_view name) const {
  for (const Node* n = head_.get(); n; n = n->next.get())
    if (n->name == name) return n->cell.get();
  return nullptr;
}

// ======================= Values =======================

Value make_vint(std::string digits) {
  return std::make_shared<ValueNode>(ValueNode{VInt{std::move(digits)}});
}
Value make_vclosure(std::string param, Term body, ValueEnv env) {
  return std::make_shared<ValueNode>(ValueNode{VClosure{std::move(param), std::move(body), std::move(env)}});
}
Value make_vrecord(std::map<std::string, Value> fields) {
  return std::make_shared<ValueNode>(ValueNode{VRecord{std::move(fields)}});
}

std::string show_value(const Value& v) {
  if (const auto* i = std::get_if<VInt>(&v->v)) return i->digits;
  if (std::get_if<VClosure>(&v->v)) return "<fun>";
  const auto& rec = std::get<VRecord>(v->v);
  std::string out = "{";
  bool first = true;
  for (const auto& [label, value] : rec.fields) {
    if (!first) out += ", ";
    first = false;
    out += label + " = " + show_value(value);
  }
  return out + "}";
}

// ======================= Evaluation =======================

namespace {

struct Fuel {
  int left;
};

EvalResult value_of(Value v) { return {EvalResult::Status::Ok, std::move(v), nullptr}; }
EvalResult stuck_at(Term t) { return {EvalResult::Status::Stuck, nullptr, std::move(t)}; }
EvalResult out_of_fuel() { return {EvalResult::Status::OutOfFuel, nullptr, nullptr}; }

// Body positions (the callee's body, a let body) loop instead of recursing,
// so tail-recursive programs run in constant stack however much fuel they
// burn.
EvalResult go(Term term, ValueEnv env, Fuel& fuel) {
  while (true) {
    if (const auto* lit = std::get_if<IntLit>(&term->v)) return value_of(make_vint(lit->digits));

    if (const auto* var = std::get_if<Var>(&term->v)) {
      const Value* found = env.lookup(var->name);
      if (!found || !*found) return stuck_at(term);
      return value_of(*found);
    }

    if (const auto* lam = std::get_if<Lam>(&term->v))
      return value_of(make_vclosure(lam->param, lam->body, env));

    if (const auto* app = std::get_if<App>(&term->v)) {
      EvalResult fn = go(app->fn, env, fuel);
      if (!fn.ok()) return fn;
      EvalResult arg = go(app->arg, env, fuel);
      if (!arg.ok()) return arg;
      const auto* closure = std::get_if<VClosure>(&fn.value->v);
      if (!closure) return stuck_at(term);
      if (fuel.left == 0) return out_of_fuel();
      --fuel.left;
      env = closure->env.extend(closure->param, arg.value);
      term = closure->body;
      continue;
    }

    if (const auto* rec = std::get_if<RecordLit>(&term->v)) {
      std::map<std::string, Value> fields;
      for (const auto& [label, value] : rec->fields) {
        EvalResult r = go(value, env, fuel);
        if (!r.ok()) return r;
        fields.emplace(label, r.value);
      }
      return value_of(make_vrecord(std::move(fields)));
    }

    if (const auto* proj = std::get_if<Proj>(&term->v)) {
      EvalResult subject = go(proj->subject, env, fuel);
      if (!subject.ok()) return subject;
      const auto* record = std::get_if<VRecord>(&subject.value->v);
      if (!record) return stuck_at(term);
      auto it = record->fields.find(proj->label);
      if (it == record->fields.end()) return stuck_at(term);
      return value_of(it->second);
    }

    if (const auto* ext = std::get_if<Extend>(&term->v)) {
      EvalResult subject = go(ext->subject, env, fuel);
      if (!subject.ok()) return subject;
      const auto* record = std::get_if<VRecord>(&subject.value->v);
      if (!record) return stuck_at(term);
      EvalResult value = go(ext->value, env, fuel);
      if (!value.ok()) return value;
      std::map<std::string, Value> fields = record->fields;  // add or overwrite
      fields[ext->label] = value.value;
      return value_of(make_vrecord(std::move(fields)));
    }

    const auto& let = std::get<LetRec>(term->v);
    // big-step knot-tying only works for lambda right-hand sides
    const auto* lam = std::get_if<Lam>(&let.bound->v);
    if (!lam) return stuck_at(term);
    auto [inner, cell] = env.extend_cell(let.name);
    *cell = make_vclosure(lam->param, lam->body, inner);
    env = inner;
    term = let.body;
  }
}

}  // namespace

EvalResult eval(const Term& term, const ValueEnv& env, int fuel) {
  Fuel f{fuel};
  return go(term, env, f);
}

}  // namespace rowsub
