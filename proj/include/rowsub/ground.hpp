#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rowsub/types.hpp"

namespace rowsub {

// Variable-free types for the brute-force subtyping oracle. Records are
// implicitly closed: a label not in the map reads as absent.

struct GroundNode;
using GroundType = std::shared_ptr<GroundNode>;

struct GPre {
  GroundType type;
};
struct GAbs {};

struct GroundField {
  std::variant<GPre, GAbs> v;
};

struct GInt {};
struct GFun {
  GroundType dom;
  GroundType cod;
};
struct GRec {
  std::map<std::string, GroundField> fields;
};

struct GroundNode {
  std::variant<GInt, GFun, GRec> v;
};

GroundType make_gint();
GroundType make_gfun(GroundType dom, GroundType cod);
GroundType make_grec(std::map<std::string, GroundField> fields);
GroundField make_gpre(GroundType type);
GroundField make_gabs();

bool ground_equal(const GroundType& a, const GroundType& b);
std::string show_ground(const GroundType& t);

// Decides the declarative subtype relation directly: functions are
// contravariant/covariant, records compare fieldwise where a missing label
// reads absent, a present field is below an absent one, and an absent field
// is never below a present one.
bool ground_subtype(const GroundType& a, const GroundType& b);

// All ground types of structural depth <= max_depth over the given labels,
// deterministically ordered, without duplicates. Depth: int and the empty
// record are 0; functions and non-empty records add 1 over their parts.
std::vector<GroundType> enumerate_ground_types(int max_depth, const std::vector<std::string>& labels);

// Bridge to the inference representation, for oracle-agreement checks.
SimpleType embed_ground(const GroundType& t);

}  // namespace rowsub
