#include "rowsub/trace.hpp"

namespace rowsub {

// ======================= RawTypePrinter =======================

namespace {

std::string letters_name(size_t index) {
  std::string name;
  long i = static_cast<long>(index);
  do {
    name.insert(name.begin(), static_cast<char>('a' + i % 26));
    i = i / 26 - 1;
  } while (i >= 0);
  return "'" + name;
}

}  // namespace

std::string RawTypePrinter::type_var_name(const TypeVarState& state) {
  auto it = type_names_.find(state.id);
  if (it != type_names_.end()) return it->second;
  std::string name = letters_name(type_names_.size());
  type_names_.emplace(state.id, name);
  return name;
}

std::string RawTypePrinter::row_var_name(const RowVarState& state) {
  auto it = row_names_.find(state.id);
  if (it != row_names_.end()) return it->second;
  std::string name = "'r" + std::to_string(row_names_.size());
  row_names_.emplace(state.id, name);
  return name;
}

std::string RawTypePrinter::field_var_name(const FieldVarState& state) {
  auto it = field_names_.find(state.id);
  if (it != field_names_.end()) return it->second;
  std::string name = "'f" + std::to_string(field_names_.size());
  field_names_.emplace(state.id, name);
  return name;
}

void RawTypePrinter::show_type(const SimpleType& type, int prec, std::string& out) {
  if (std::get_if<TInt>(&type->v)) {
    out += "int";
  } else if (const auto* fun = std::get_if<TFun>(&type->v)) {
    bool wrap = prec > 1;
    if (wrap) out += '(';
    show_type(fun->dom, 2, out);
    out += " -> ";
    show_type(fun->cod, 1, out);
    if (wrap) out += ')';
  } else if (const auto* rec = std::get_if<TRec>(&type->v)) {
    show_row(rec->row, out);
  } else {
    out += type_var_name(*std::get<TVar>(type->v).state);
  }
}

void RawTypePrinter::show_row(const Row& row, std::string& out) {
  NormalRow normal = normalize_row(row);
  out += '{';
  bool first = true;
  for (const auto& [label, field] : normal.fields) {
    if (!first) out += ", ";
    first = false;
    out += label + ": ";
    show_field_at(field, out);
  }
  if (normal.tail) out += " ; " + row_var_name(*normal.tail);
  out += '}';
}

void RawTypePrinter::show_field_at(const Field& field, std::string& out) {
  if (const auto* pre = std::get_if<FPre>(&field->v)) {
    show_type(pre->type, 0, out);
  } else if (std::get_if<FAbs>(&field->v)) {
    out += "abs";
  } else {
    out += field_var_name(*std::get<FVar>(field->v).state);
  }
}

std::string RawTypePrinter::show(const SimpleType& type) {
  std::string out;
  show_type(type, 0, out);
  return out;
}

std::string RawTypePrinter::show_field(const Field& field) {
  std::string out;
  show_field_at(field, out);
  return out;
}

// ======================= TraceLog =======================

void TraceLog::type_term_enter(const Term& term) {
  events_.push_back({TraceEventKind::TypeTermEnter, depth_, print_term(term), "", "", ""});
}

void TraceLog::constrain_types(const SimpleType& lhs, const SimpleType& rhs) {
  events_.push_back({TraceEventKind::ConstrainEnter, depth_, printer_.show(lhs), printer_.show(rhs), "", ""});
}

void TraceLog::constrain_fields(const Field& lhs, const Field& rhs) {
  events_.push_back(
      {TraceEventKind::ConstrainEnter, depth_, printer_.show_field(lhs), printer_.show_field(rhs), "", ""});
}

void TraceLog::expanded(const RowVarState& var, const std::string& label, const FieldVarState& field,
                        const RowVarState& rest) {
  events_.push_back({TraceEventKind::Expand, depth_, printer_.row_var_name(var), label,
                     printer_.field_var_name(field), printer_.row_var_name(rest)});
}

void TraceLog::result_type(const SimpleType& type) {
  events_.push_back({TraceEventKind::Result, depth_, printer_.show(type), "", "", ""});
}

void TraceLog::result_text(std::string text) {
  events_.push_back({TraceEventKind::Result, depth_, std::move(text), "", "", ""});
}

// ======================= Formatting =======================

std::string format_trace(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const TraceEvent& e : events) {
    for (int i = 0; i < e.depth; ++i) out += "| ";
    switch (e.kind) {
      case TraceEventKind::TypeTermEnter:
        out += "typeTerm " + e.a;
        break;
      case TraceEventKind::ConstrainEnter:
        out += "constrain " + e.a + " <= " + e.b;
        break;
      case TraceEventKind::Expand:
        out += "expand " + e.a + " +" + e.b + " ~> {" + e.b + ": " + e.c + " ; " + e.d + "}";
        break;
      case TraceEventKind::Result:
        out += "= " + e.a;
        break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace rowsub
