#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "rowsub/types.hpp"

namespace rowsub {

// ======================= User-facing output types =======================

enum class VarKind { Type, Row, Field };

struct VarName {
  VarKind kind;
  std::uint32_t id;

  friend bool operator==(const VarName& a, const VarName& b) {
    return a.kind == b.kind && a.id == b.id;
  }
  friend bool operator<(const VarName& a, const VarName& b) {
    return std::tie(a.kind, a.id) < std::tie(b.kind, b.id);
  }
};

struct OutputNode;
using OutputType = std::shared_ptr<OutputNode>;

struct OPre {
  OutputType type;
};
struct OAbs {};
struct OFieldVar {
  VarName name;
};

struct OutputField {
  std::variant<OPre, OAbs, OFieldVar> v;
};

struct OInt {};
struct OTop {};
struct OBot {};
struct OVar {
  VarName name;
};
struct OFun {
  OutputType dom;
  OutputType cod;
};
// fields sorted by label; a missing tail means the record is closed.
struct ORec {
  std::vector<std::pair<std::string, OutputField>> fields;
  std::optional<VarName> tail;
};
struct OUnion {
  OutputType lhs;
  OutputType rhs;
};
struct OInter {
  OutputType lhs;
  OutputType rhs;
};
struct OMu {
  VarName binder;
  OutputType body;
};

struct OutputNode {
  std::variant<OInt, OTop, OBot, OVar, OFun, ORec, OUnion, OInter, OMu> v;
};

OutputType make_oint();
OutputType make_otop();
OutputType make_obot();
OutputType make_ovar(VarName name);
OutputType make_ofun(OutputType dom, OutputType cod);
OutputType make_orec(std::vector<std::pair<std::string, OutputField>> fields,
                     std::optional<VarName> tail);
OutputType make_omu(VarName binder, OutputType body);

OutputField make_opre(OutputType type);
OutputField make_oabs();
OutputField make_ofield_var(VarName name);

// Normalizing combinators: flatten, deduplicate, absorb top/bottom, unwrap
// singletons; an empty union is bottom and an empty intersection is top.
OutputType make_union(std::vector<OutputType> parts);
OutputType make_inter(std::vector<OutputType> parts);

bool output_equal(const OutputType& a, const OutputType& b);

// ======================= Coalescence =======================

struct CoalesceOptions {
  // Drop type variables (never row or field variables) that occur with a
  // single polarity in the whole output.
  bool eliminate_polar_vars = true;
};

// Converts an inference-time type into a compact output type. Positive
// positions merge lower bounds with unions, negative positions merge upper
// bounds with intersections; a variable met again during its own coalescing
// becomes a recursive binder. The supply provides ids for those binders.
// Non-failing oddities (a row merge between distinct open tails) are
// appended to diagnostics when given.
OutputType coalesce(const SimpleType& type, VarSupply& supply, bool positive = true,
                    const CoalesceOptions& options = {},
                    std::vector<std::string>* diagnostics = nullptr);

// Deterministic rendering; variables are named on first occurrence in
// traversal order: type vars 'a, 'b, ...; row vars 'r0, ...; field vars
// 'f0, .... "->" is right-associative, "\/" binds looser than "/\", and
// record fields print sorted by label.
std::string print_type(const OutputType& type);

}  // namespace rowsub
