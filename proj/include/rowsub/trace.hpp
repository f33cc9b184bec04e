#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rowsub/syntax.hpp"
#include "rowsub/types.hpp"

namespace rowsub {

enum class TraceEventKind { TypeTermEnter, ConstrainEnter, Expand, Result };

// depth is the nesting level of the emitting call. For Expand the payload is
// (row var, label, field var, rest var), all pre-rendered.
struct TraceEvent {
  TraceEventKind kind;
  int depth;
  std::string a;
  std::string b;
  std::string c;
  std::string d;
};

// Renders inference-time types the way the derivation log shows them:
// Pre is dropped from fields, Abs fields print as "abs", closed tails are
// omitted, and row variable expansions are read through. Variables are
// named on first occurrence: type vars 'a, 'b, ...; row vars 'r0, 'r1, ...;
// field vars 'f0, 'f1, ....
class RawTypePrinter {
 public:
  std::string show(const SimpleType& type);
  std::string show_field(const Field& field);
  std::string type_var_name(const TypeVarState& state);
  std::string row_var_name(const RowVarState& state);
  std::string field_var_name(const FieldVarState& state);

 private:
  void show_type(const SimpleType& type, int prec, std::string& out);
  void show_row(const Row& row, std::string& out);
  void show_field_at(const Field& field, std::string& out);

  std::map<std::uint32_t, std::string> type_names_;
  std::map<std::uint32_t, std::string> row_names_;
  std::map<std::uint32_t, std::string> field_names_;
};

// Collects the events of one inference run; payloads are rendered at
// emission time so they capture the state of rows as it was then.
class TraceLog {
 public:
  void type_term_enter(const Term& term);
  void constrain_types(const SimpleType& lhs, const SimpleType& rhs);
  void constrain_fields(const Field& lhs, const Field& rhs);
  void expanded(const RowVarState& var, const std::string& label, const FieldVarState& field,
                const RowVarState& rest);
  void result_type(const SimpleType& type);
  void result_text(std::string text);

  void enter() { ++depth_; }
  void leave() { --depth_; }

  const std::vector<TraceEvent>& events() const { return events_; }

 private:
  RawTypePrinter printer_;
  std::vector<TraceEvent> events_;
  int depth_ = 0;
};

// Increments the log's depth for the lifetime of a nested phase.
struct TraceScope {
  explicit TraceScope(TraceLog* log) : log_(log) {
    if (log_) log_->enter();
  }
  ~TraceScope() {
    if (log_) log_->leave();
  }
  TraceScope(const TraceScope&) = delete;
  TraceScope& operator=(const TraceScope&) = delete;

  TraceLog* log_;
};

// One line per event, prefixed with depth copies of "| ".
std::string format_trace(const std::vector<TraceEvent>& events);

}  // namespace rowsub
