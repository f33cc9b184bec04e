#include "rowsub/ground.hpp"

namespace rowsub {

GroundType make_gint() { return std::make_shared<GroundNode>(GroundNode{GInt{}}); }

GroundType make_gfun(GroundType dom, GroundType cod) {
  return std::make_shared<GroundNode>(GroundNode{GFun{std::move(dom), std::move(cod)}});
}

GroundType make_grec(std::map<std::string, GroundField> fields) {
  return std::make_shared<GroundNode>(GroundNode{GRec{std::move(fields)}});
}

GroundField make_gpre(GroundType type) { return GroundField{GPre{std::move(type)}}; }
GroundField make_gabs() { return GroundField{GAbs{}}; }

bool ground_equal(const GroundType& a, const GroundType& b) {
  if (a->v.index() != b->v.index()) return false;
  if (std::get_if<GInt>(&a->v)) return true;
  if (const auto* fa = std::get_if<GFun>(&a->v)) {
    const auto& fb = std::get<GFun>(b->v);
    return ground_equal(fa->dom, fb.dom) && ground_equal(fa->cod, fb.cod);
  }
  const auto& ra = std::get<GRec>(a->v);
  const auto& rb = std::get<GRec>(b->v);
  if (ra.fields.size() != rb.fields.size()) return false;
  auto it = rb.fields.begin();
  for (const auto& [label, field] : ra.fields) {
    if (label != it->first || field.v.index() != it->second.v.index()) return false;
    if (const auto* pre = std::get_if<GPre>(&field.v))
      if (!ground_equal(pre->type, std::get<GPre>(it->second.v).type)) return false;
    ++it;
  }
  return true;
}

std::string show_ground(const GroundType& t) {
  if (std::get_if<GInt>(&t->v)) return "int";
  if (const auto* fun = std::get_if<GFun>(&t->v)) {
    std::string dom = show_ground(fun->dom);
    if (std::get_if<GFun>(&fun->dom->v)) dom = "(" + dom + ")";
    return dom + " -> " + show_ground(fun->cod);
  }
  const auto& rec = std::get<GRec>(t->v);
  std::string out = "{";
  bool first = true;
  for (const auto& [label, field] : rec.fields) {
    if (!first) out += ", ";
    first = false;
    out += label + ": ";
    if (const auto* pre = std::get_if<GPre>(&field.v))
      out += show_ground(pre->type);
    else
      out += "abs";
  }
  return out + "}";
}

// ======================= Subtyping =======================

namespace {

bool ground_field_subtype(const GroundField& a, const GroundField& b) {
  if (std::get_if<GAbs>(&b.v)) return true;  // anything is below an absent field
  if (std::get_if<GAbs>(&a.v)) return false;
  return ground_subtype(std::get<GPre>(a.v).type, std::get<GPre>(b.v).type);
}

}  // namespace

bool ground_subtype(const GroundType& a, const GroundType& b) {
  if (std::get_if<GInt>(&a->v)) return std::get_if<GInt>(&b->v) != nullptr;
  if (const auto* fa = std::get_if<GFun>(&a->v)) {
    const auto* fb = std::get_if<GFun>(&b->v);
    return fb && ground_subtype(fb->dom, fa->dom) && ground_subtype(fa->cod, fb->cod);
  }
  const auto* ra = std::get_if<GRec>(&a->v);
  const auto* rb = std::get_if<GRec>(&b->v);
  if (!rb) return false;
  // fieldwise over b's labels; a's extra labels compare against absent on
  // the right, which always holds (width subtyping)
  GroundField absent = make_gabs();
  for (const auto& [label, required] : rb->fields) {
    auto it = ra->fields.find(label);
    const GroundField& given = it == ra->fields.end() ? absent : it->second;
    if (!ground_field_subtype(given, required)) return false;
  }
  return true;
}

// ======================= Enumeration =======================

// T(0) = {int, {}}; T(<=d) = {int} ∪ {a -> b : a, b in T(<=d-1)}
//                          ∪ {records with payloads from T(<=d-1)}.
// Every shape is constructed exactly once, so no deduplication is needed.
std::vector<GroundType> enumerate_ground_types(int max_depth, const std::vector<std::string>& labels) {
  if (max_depth <= 0) return {make_gint(), make_grec({})};

  std::vector<GroundType> smaller = enumerate_ground_types(max_depth - 1, labels);
  std::vector<GroundType> out;
  out.push_back(make_gint());

  // all field maps: per label, either not present, absent, or present with a
  // smaller payload
  std::vector<std::map<std::string, GroundField>> maps{{}};
  for (const auto& label : labels) {
    std::vector<std::map<std::string, GroundField>> next;
    for (const auto& m : maps) {
      next.push_back(m);
      auto with_abs = m;
      with_abs.emplace(label, make_gabs());
      next.push_back(std::move(with_abs));
      for (const auto& payload : smaller) {
        auto with_pre = m;
        with_pre.emplace(label, make_gpre(payload));
        next.push_back(std::move(with_pre));
      }
    }
    maps = std::move(next);
  }
  for (auto& m : maps) out.push_back(make_grec(std::move(m)));

  for (const auto& dom : smaller)
    for (const auto& cod : smaller) out.push_back(make_gfun(dom, cod));
  return out;
}

// ======================= Embedding =======================

SimpleType embed_ground(const GroundType& t) {
  if (std::get_if<GInt>(&t->v)) return make_int_type();
  if (const auto* fun = std::get_if<GFun>(&t->v))
    return make_fun_type(embed_ground(fun->dom), embed_ground(fun->cod));
  const auto& rec = std::get<GRec>(t->v);
  Row row = make_row_empty();
  for (auto it = rec.fields.rbegin(); it != rec.fields.rend(); ++it) {
    Field field = std::get_if<GAbs>(&it->second.v)
                      ? make_abs_field()
                      : make_pre_field(embed_ground(std::get<GPre>(it->second.v).type));
    row = make_row_cons(it->first, std::move(field), std::move(row));
  }
  return make_rec_type(std::move(row));
}

}  // namespace rowsub
