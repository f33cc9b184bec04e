#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "rowsub/syntax.hpp"
#include "rowsub/trace.hpp"
#include "rowsub/types.hpp"

namespace rowsub {

enum class TypeErrorKind { NotASubtype, MissingField, UnboundVariable };

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  TypeErrorKind kind() const { return kind_; }

 private:
  TypeErrorKind kind_;
};

// Already-processed constraint pairs. Variables key by id (two nodes may
// share one state), everything else by node identity; keys own their nodes
// so addresses stay stable for the cache's lifetime. A hit short-circuits
// constraining, which is what makes cyclic bounds terminate.
class ConstraintCache {
 public:
  bool seen_or_insert(const SimpleType& lhs, const SimpleType& rhs);
  bool seen_or_insert(const Row& lhs, const Row& rhs);
  bool seen_or_insert(const Field& lhs, const Field& rhs);

  size_t size() const { return seen_.size(); }

 private:
  struct Key {
    int tag;
    std::shared_ptr<const void> node;  // empty for variable keys
    std::uint32_t id;

    friend bool operator<(const Key& a, const Key& b) {
      if (a.tag != b.tag) return a.tag < b.tag;
      if (a.node.get() != b.node.get()) return a.node.get() < b.node.get();
      return a.id < b.id;
    }
  };

  static Key key(const SimpleType& t);
  static Key key(const Row& r);
  static Key key(const Field& f);
  bool insert(Key a, Key b);

  std::set<std::pair<Key, Key>> seen_;
};

// The typing algorithm and the subtype constraint solver. One instance is
// single-threaded; distinct instances share nothing.
class Inferencer {
 public:
  explicit Inferencer(TraceLog* trace = nullptr) : trace_(trace) {}

  // Types a closed term: empty environment, level 0.
  SimpleType infer_program(const Term& term);

  SimpleType type_term(const Term& term, TypeEnv& env, int level);

  // Records lhs <= rhs, updating variable bounds; throws TypeError when the
  // constraint is unsatisfiable.
  void constrain(const SimpleType& lhs, const SimpleType& rhs);
  void constrain_row(const Row& lhs, const Row& rhs);
  void constrain_field(const Field& lhs, const Field& rhs, const std::string& label);

  // Gives `var` a field for `label`, following any expansion chain first.
  // Single-assignment: repeated calls return the same pair. Bounds already
  // recorded on the expanded variable are re-constrained against its new
  // structural view.
  std::pair<std::shared_ptr<FieldVarState>, std::shared_ptr<RowVarState>> expand(
      std::shared_ptr<RowVarState> var, const std::string& label);

  TypeScheme generalize(const SimpleType& type, int level) const;
  // Copies every variable above the scheme's level at `level`, bounds
  // included, following expansions first; sharing inside the body is kept.
  SimpleType instantiate(const TypeScheme& scheme, int level);

  SimpleType fresh_type(int level) { return fresh_type_var(supply_, level); }
  Row fresh_row(int level) { return fresh_row_var(supply_, level); }
  Field fresh_field(int level) { return fresh_field_var(supply_, level); }

  VarSupply& supply() { return supply_; }
  ConstraintCache& cache() { return cache_; }

 private:
  struct Extruder;
  struct Copier;

  SimpleType extrude_type(const SimpleType& type, bool pos, int level, Extruder& ex);
  Row extrude_row(const Row& row, bool pos, int level, Extruder& ex);
  Field extrude_field(const Field& field, bool pos, int level, Extruder& ex);

  void constrain_row_tails(const std::shared_ptr<RowVarState>& lhs,
                           const std::shared_ptr<RowVarState>& rhs);

  std::string show_for_error(const SimpleType& type, bool positive);
  std::string show_for_error(const Field& field, bool positive);

  VarSupply supply_;
  ConstraintCache cache_;
  TraceLog* trace_;
};

}  // namespace rowsub
