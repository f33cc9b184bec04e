#include "rowsub/coalesce.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace rowsub {

// ======================= Construction =======================

OutputType make_oint() { return std::make_shared<OutputNode>(OutputNode{OInt{}}); }
OutputType make_otop() { return std::make_shared<OutputNode>(OutputNode{OTop{}}); }
OutputType make_obot() { return std::make_shared<OutputNode>(OutputNode{OBot{}}); }
OutputType make_ovar(VarName name) { return std::make_shared<OutputNode>(OutputNode{OVar{name}}); }
OutputType make_ofun(OutputType dom, OutputType cod) {
  return std::make_shared<OutputNode>(OutputNode{OFun{std::move(dom), std::move(cod)}});
}
OutputType make_orec(std::vector<std::pair<std::string, OutputField>> fields,
                     std::optional<VarName> tail) {
  std::sort(fields.begin(), fields.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return std::make_shared<OutputNode>(OutputNode{ORec{std::move(fields), tail}});
}
OutputType make_omu(VarName binder, OutputType body) {
  return std::make_shared<OutputNode>(OutputNode{OMu{binder, std::move(body)}});
}

OutputField make_opre(OutputType type) { return OutputField{OPre{std::move(type)}}; }
OutputField make_oabs() { return OutputField{OAbs{}}; }
OutputField make_ofield_var(VarName name) { return OutputField{OFieldVar{name}}; }

// ======================= Equality =======================

namespace {

bool field_equal(const OutputField& a, const OutputField& b) {
  if (a.v.index() != b.v.index()) return false;
  if (const auto* pre = std::get_if<OPre>(&a.v))
    return output_equal(pre->type, std::get<OPre>(b.v).type);
  if (std::get_if<OAbs>(&a.v)) return true;
  return std::get<OFieldVar>(a.v).name == std::get<OFieldVar>(b.v).name;
}

}  // namespace

bool output_equal(const OutputType& a, const OutputType& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  if (std::get_if<OInt>(&a->v) || std::get_if<OTop>(&a->v) || std::get_if<OBot>(&a->v)) return true;
  if (const auto* var = std::get_if<OVar>(&a->v)) return var->name == std::get<OVar>(b->v).name;
  if (const auto* fun = std::get_if<OFun>(&a->v)) {
    const auto& other = std::get<OFun>(b->v);
    return output_equal(fun->dom, other.dom) && output_equal(fun->cod, other.cod);
  }
  if (const auto* rec = std::get_if<ORec>(&a->v)) {
    const auto& other = std::get<ORec>(b->v);
    if (rec->tail != other.tail || rec->fields.size() != other.fields.size()) return false;
    for (size_t i = 0; i < rec->fields.size(); ++i) {
      if (rec->fields[i].first != other.fields[i].first) return false;
      if (!field_equal(rec->fields[i].second, other.fields[i].second)) return false;
    }
    return true;
  }
  if (const auto* u = std::get_if<OUnion>(&a->v)) {
    const auto& other = std::get<OUnion>(b->v);
    return output_equal(u->lhs, other.lhs) && output_equal(u->rhs, other.rhs);
  }
  if (const auto* i = std::get_if<OInter>(&a->v)) {
    const auto& other = std::get<OInter>(b->v);
    return output_equal(i->lhs, other.lhs) && output_equal(i->rhs, other.rhs);
  }
  const auto& mu = std::get<OMu>(a->v);
  const auto& other = std::get<OMu>(b->v);
  return mu.binder == other.binder && output_equal(mu.body, other.body);
}

// ======================= Union / intersection =======================

namespace {

void flatten_into(const OutputType& t, bool is_union, std::vector<OutputType>& out) {
  if (is_union) {
    if (const auto* u = std::get_if<OUnion>(&t->v)) {
      flatten_into(u->lhs, is_union, out);
      flatten_into(u->rhs, is_union, out);
      return;
    }
  } else if (const auto* i = std::get_if<OInter>(&t->v)) {
    flatten_into(i->lhs, is_union, out);
    flatten_into(i->rhs, is_union, out);
    return;
  }
  out.push_back(t);
}

OutputType combine(std::vector<OutputType> parts, bool is_union) {
  std::vector<OutputType> flat;
  for (const auto& p : parts) flatten_into(p, is_union, flat);

  std::vector<OutputType> kept;
  for (const auto& p : flat) {
    // the absorbing element swallows everything, the neutral one vanishes
    if (is_union ? std::holds_alternative<OTop>(p->v) : std::holds_alternative<OBot>(p->v))
      return is_union ? make_otop() : make_obot();
    if (is_union ? std::holds_alternative<OBot>(p->v) : std::holds_alternative<OTop>(p->v)) continue;
    bool dup = false;
    for (const auto& k : kept)
      if (output_equal(k, p)) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(p);
  }

  if (kept.empty()) return is_union ? make_obot() : make_otop();
  OutputType acc = kept.front();
  for (size_t i = 1; i < kept.size(); ++i) {
    if (is_union)
      acc = std::make_shared<OutputNode>(OutputNode{OUnion{acc, kept[i]}});
    else
      acc = std::make_shared<OutputNode>(OutputNode{OInter{acc, kept[i]}});
  }
  return acc;
}

}  // namespace

OutputType make_union(std::vector<OutputType> parts) { return combine(std::move(parts), true); }
OutputType make_inter(std::vector<OutputType> parts) { return combine(std::move(parts), false); }

// ======================= Coalescence =======================

namespace {

class Coalescer {
 public:
  Coalescer(VarSupply& supply, std::vector<std::string>* diagnostics)
      : supply_(supply), diagnostics_(diagnostics) {}

  OutputType go_type(const SimpleType& type, bool pos) {
    if (std::get_if<TInt>(&type->v)) return make_oint();
    if (const auto* fun = std::get_if<TFun>(&type->v))
      return make_ofun(go_type(fun->dom, !pos), go_type(fun->cod, pos));
    if (const auto* rec = std::get_if<TRec>(&type->v)) return go_row(rec->row, pos);
    return go_type_var(std::get<TVar>(type->v).state, pos);
  }

 private:
  using PolarVar = std::pair<const TypeVarState*, bool>;

  OutputType go_type_var(const std::shared_ptr<TypeVarState>& state, bool pos) {
    PolarVar key{state.get(), pos};
    if (in_process_.count(key)) {
      auto it = mu_names_.find(key);
      if (it == mu_names_.end())
        it = mu_names_.emplace(key, VarName{VarKind::Type, supply_.fresh_id()}).first;
      return make_ovar(it->second);
    }
    in_process_.insert(key);
    std::vector<OutputType> parts{make_ovar({VarKind::Type, state->id})};
    const auto bounds = pos ? state->lower_bounds : state->upper_bounds;
    for (const auto& bound : bounds) parts.push_back(go_type(bound, pos));
    in_process_.erase(key);

    OutputType res = pos ? make_union(std::move(parts)) : make_inter(std::move(parts));
    auto it = mu_names_.find(key);
    if (it != mu_names_.end()) res = make_omu(it->second, res);
    return res;
  }

  OutputField go_field(const Field& field, bool pos) {
    if (const auto* pre = std::get_if<FPre>(&field->v)) return make_opre(go_type(pre->type, pos));
    if (std::get_if<FAbs>(&field->v)) return make_oabs();
    return go_field_var(std::get<FVar>(field->v).state, pos);
  }

  // Concrete bounds (found through chains of variable-variable links) fold
  // to a field join or meet; a variable with none stays symbolic. The
  // output field grammar has no variable/Pre combination, so concrete
  // bounds absorb the variable.
  OutputField go_field_var(const std::shared_ptr<FieldVarState>& state, bool pos) {
    std::set<const FieldVarState*> visited;
    std::vector<Field> concrete;
    collect_concrete_fields(state, pos, visited, concrete);
    if (concrete.empty()) return make_ofield_var({VarKind::Field, state->id});

    if (pos) {
      std::vector<OutputType> payloads;
      for (const auto& f : concrete) {
        if (std::get_if<FAbs>(&f->v)) return make_oabs();  // Abs is the top field
        payloads.push_back(go_type(std::get<FPre>(f->v).type, pos));
      }
      return make_opre(make_union(std::move(payloads)));
    }
    std::vector<OutputType> payloads;
    for (const auto& f : concrete) {
      if (std::get_if<FAbs>(&f->v)) continue;  // a bound of Abs imposes nothing
      payloads.push_back(go_type(std::get<FPre>(f->v).type, pos));
    }
    if (payloads.empty()) return make_ofield_var({VarKind::Field, state->id});
    return make_opre(make_inter(std::move(payloads)));
  }

  void collect_concrete_fields(const std::shared_ptr<FieldVarState>& state, bool pos,
                               std::set<const FieldVarState*>& visited, std::vector<Field>& out) {
    if (!visited.insert(state.get()).second) return;
    const auto bounds = pos ? state->lower_bounds : state->upper_bounds;
    for (const auto& bound : bounds) {
      if (const auto* var = std::get_if<FVar>(&bound->v))
        collect_concrete_fields(var->state, pos, visited, out);
      else
        out.push_back(bound);
    }
  }

  OutputType go_row(const Row& row, bool pos) {
    NormalRow normal = normalize_row(row);
    std::vector<std::pair<std::string, OutputField>> fields;
    for (const auto& [label, field] : normal.fields) fields.emplace_back(label, go_field(field, pos));

    if (!normal.tail) return make_orec(std::move(fields), std::nullopt);

    const auto& var = normal.tail;
    const auto bounds = pos ? var->lower_bounds : var->upper_bounds;
    std::map<std::string, OutputField> extra;
    std::set<std::uint32_t> tails_seen{var->id};
    bool closes = false;

    for (const auto& bound : bounds) {
      NormalRow bn = normalize_row(bound);
      if (pos && bn.fields.empty() && !bn.tail) {
        // the all-absent row, the greatest row: a lower bound of it closes
        // the tail and absorbs every other contribution
        closes = true;
        break;
      }
      if (!pos && bn.fields.empty() && !bn.tail) continue;  // vacuous upper bound
      for (const auto& [label, field] : bn.fields) {
        bool explicit_label = false;
        for (const auto& [l, f] : fields)
          if (l == label) {
            explicit_label = true;
            break;
          }
        if (explicit_label) continue;  // the spine's own field shadows
        OutputField coalesced = go_field(field, pos);
        auto it = extra.find(label);
        if (it == extra.end())
          extra.emplace(label, std::move(coalesced));
        else
          it->second = merge_fields(it->second, coalesced, pos);
      }
      if (bn.tail) tails_seen.insert(bn.tail->id);
    }

    if (closes) return make_orec(std::move(fields), std::nullopt);

    if (tails_seen.size() > 1 && diagnostics_)
      diagnostics_->push_back("row merge kept a symbolic tail; distinct open tails were involved");
    for (auto& [label, field] : extra) fields.emplace_back(label, std::move(field));
    return make_orec(std::move(fields), VarName{VarKind::Row, var->id});
  }

  OutputField merge_fields(const OutputField& a, const OutputField& b, bool pos) {
    if (pos) {
      // join: Abs is the top of the field order
      if (std::get_if<OAbs>(&a.v) || std::get_if<OAbs>(&b.v)) return make_oabs();
      if (const auto* pa = std::get_if<OPre>(&a.v))
        if (const auto* pb = std::get_if<OPre>(&b.v)) return make_opre(make_union({pa->type, pb->type}));
      // a symbolic variable cannot be joined in the output grammar: prefer
      // the concrete side
      return std::get_if<OFieldVar>(&a.v) ? b : a;
    }
    // meet: Abs is neutral
    if (std::get_if<OAbs>(&a.v)) return b;
    if (std::get_if<OAbs>(&b.v)) return a;
    if (const auto* pa = std::get_if<OPre>(&a.v))
      if (const auto* pb = std::get_if<OPre>(&b.v)) return make_opre(make_inter({pa->type, pb->type}));
    return std::get_if<OFieldVar>(&a.v) ? b : a;
  }

  VarSupply& supply_;
  std::vector<std::string>* diagnostics_;
  std::set<PolarVar> in_process_;
  std::map<PolarVar, VarName> mu_names_;
};

// ======================= Polar-variable elimination =======================

struct Occurrences {
  std::set<std::uint32_t> positive;
  std::set<std::uint32_t> negative;

  bool single_polarity(std::uint32_t id) const {
    return positive.count(id) != negative.count(id);
  }
};

void collect_field_occurrences(const OutputField& f, bool pos, std::set<std::uint32_t>& bound,
                               Occurrences& occ);

void collect_occurrences(const OutputType& t, bool pos, std::set<std::uint32_t>& bound,
                         Occurrences& occ) {
  if (const auto* var = std::get_if<OVar>(&t->v)) {
    if (var->name.kind == VarKind::Type && !bound.count(var->name.id))
      (pos ? occ.positive : occ.negative).insert(var->name.id);
  } else if (const auto* fun = std::get_if<OFun>(&t->v)) {
    collect_occurrences(fun->dom, !pos, bound, occ);
    collect_occurrences(fun->cod, pos, bound, occ);
  } else if (const auto* rec = std::get_if<ORec>(&t->v)) {
    for (const auto& [label, field] : rec->fields) collect_field_occurrences(field, pos, bound, occ);
  } else if (const auto* u = std::get_if<OUnion>(&t->v)) {
    collect_occurrences(u->lhs, pos, bound, occ);
    collect_occurrences(u->rhs, pos, bound, occ);
  } else if (const auto* i = std::get_if<OInter>(&t->v)) {
    collect_occurrences(i->lhs, pos, bound, occ);
    collect_occurrences(i->rhs, pos, bound, occ);
  } else if (const auto* mu = std::get_if<OMu>(&t->v)) {
    bool fresh = bound.insert(mu->binder.id).second;
    collect_occurrences(mu->body, pos, bound, occ);
    if (fresh) bound.erase(mu->binder.id);
  }
}

void collect_field_occurrences(const OutputField& f, bool pos, std::set<std::uint32_t>& bound,
                               Occurrences& occ) {
  if (const auto* pre = std::get_if<OPre>(&f.v)) collect_occurrences(pre->type, pos, bound, occ);
}

OutputField eliminate_field(const OutputField& f, bool pos, const Occurrences& occ,
                            std::set<std::uint32_t>& bound);

// Dropping a variable from a union is the same as replacing it with bottom
// and renormalizing (dually for intersections), which also covers bare
// occurrences.
OutputType eliminate(const OutputType& t, bool pos, const Occurrences& occ,
                     std::set<std::uint32_t>& bound) {
  if (const auto* var = std::get_if<OVar>(&t->v)) {
    if (var->name.kind == VarKind::Type && !bound.count(var->name.id) &&
        occ.single_polarity(var->name.id))
      return pos ? make_obot() : make_otop();
    return t;
  }
  if (const auto* fun = std::get_if<OFun>(&t->v))
    return make_ofun(eliminate(fun->dom, !pos, occ, bound), eliminate(fun->cod, pos, occ, bound));
  if (const auto* rec = std::get_if<ORec>(&t->v)) {
    std::vector<std::pair<std::string, OutputField>> fields;
    for (const auto& [label, field] : rec->fields)
      fields.emplace_back(label, eliminate_field(field, pos, occ, bound));
    return make_orec(std::move(fields), rec->tail);
  }
  if (const auto* u = std::get_if<OUnion>(&t->v))
    return make_union({eliminate(u->lhs, pos, occ, bound), eliminate(u->rhs, pos, occ, bound)});
  if (const auto* i = std::get_if<OInter>(&t->v))
    return make_inter({eliminate(i->lhs, pos, occ, bound), eliminate(i->rhs, pos, occ, bound)});
  if (const auto* mu = std::get_if<OMu>(&t->v)) {
    bool fresh = bound.insert(mu->binder.id).second;
    OutputType body = eliminate(mu->body, pos, occ, bound);
    if (fresh) bound.erase(mu->binder.id);
    return make_omu(mu->binder, std::move(body));
  }
  return t;
}

OutputField eliminate_field(const OutputField& f, bool pos, const Occurrences& occ,
                            std::set<std::uint32_t>& bound) {
  if (const auto* pre = std::get_if<OPre>(&f.v))
    return make_opre(eliminate(pre->type, pos, occ, bound));
  return f;
}

}  // namespace

OutputType coalesce(const SimpleType& type, VarSupply& supply, bool positive,
                    const CoalesceOptions& options, std::vector<std::string>* diagnostics) {
  Coalescer coalescer(supply, diagnostics);
  OutputType out = coalescer.go_type(type, positive);
  if (!options.eliminate_polar_vars) return out;

  Occurrences occ;
  std::set<std::uint32_t> bound;
  collect_occurrences(out, positive, bound, occ);
  return eliminate(out, positive, occ, bound);
}

// ======================= Printing =======================

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

class TypePrinter {
 public:
  std::string run(const OutputType& t) {
    std::string out;
    // precedence, loosest first: mu 0, -> 1, \/ 2, /\ 3
    show(t, 0, out);
    return out;
  }

 private:
  std::string name_of(const VarName& v) {
    auto it = names_.find(v);
    if (it != names_.end()) return it->second;
    std::string name;
    switch (v.kind) {
      case VarKind::Type: name = letters_name(type_count_++); break;
      case VarKind::Row: name = "'r" + std::to_string(row_count_++); break;
      case VarKind::Field: name = "'f" + std::to_string(field_count_++); break;
    }
    names_.emplace(v, name);
    return name;
  }

  void show(const OutputType& t, int prec, std::string& out) {
    if (std::get_if<OInt>(&t->v)) {
      out += "int";
    } else if (std::get_if<OTop>(&t->v)) {
      out += "top";
    } else if (std::get_if<OBot>(&t->v)) {
      out += "bot";
    } else if (const auto* var = std::get_if<OVar>(&t->v)) {
      out += name_of(var->name);
    } else if (const auto* mu = std::get_if<OMu>(&t->v)) {
      bool wrap = prec > 0;
      if (wrap) out += '(';
      out += "mu " + name_of(mu->binder) + ". ";
      show(mu->body, 0, out);
      if (wrap) out += ')';
    } else if (const auto* fun = std::get_if<OFun>(&t->v)) {
      bool wrap = prec > 1;
      if (wrap) out += '(';
      show(fun->dom, 2, out);
      out += " -> ";
      show(fun->cod, 1, out);
      if (wrap) out += ')';
    } else if (const auto* u = std::get_if<OUnion>(&t->v)) {
      bool wrap = prec > 2;
      if (wrap) out += '(';
      show(u->lhs, 2, out);
      out += " \\/ ";
      show(u->rhs, 3, out);
      if (wrap) out += ')';
    } else if (const auto* i = std::get_if<OInter>(&t->v)) {
      bool wrap = prec > 3;
      if (wrap) out += '(';
      show(i->lhs, 3, out);
      out += " /\\ ";
      show(i->rhs, 4, out);
      if (wrap) out += ')';
    } else {
      const auto& rec = std::get<ORec>(t->v);
      out += '{';
      bool first = true;
      for (const auto& [label, field] : rec.fields) {
        if (!first) out += ", ";
        first = false;
        out += label + ": ";
        if (const auto* pre = std::get_if<OPre>(&field.v))
          show(pre->type, 0, out);
        else if (std::get_if<OAbs>(&field.v))
          out += "abs";
        else
          out += name_of(std::get<OFieldVar>(field.v).name);
      }
      if (rec.tail) out += " ; " + name_of(*rec.tail);
      out += '}';
    }
  }

  std::map<VarName, std::string> names_;
  size_t type_count_ = 0;
  size_t row_count_ = 0;
  size_t field_count_ = 0;
};

}  // namespace

std::string print_type(const OutputType& type) { return TypePrinter().run(type); }

}  // namespace rowsub
