#include "locforge/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace locforge {

namespace {

[[noreturn]] void malformed(const std::string& msg, json w = json::object()) {
  fail(ErrorKind::MalformedDocument, msg, std::move(w));
}

const json& need(const json& doc, const char* key, const char* what) {
  if (!doc.is_object() || !doc.contains(key))
    malformed(std::string(what) + " document lacks \"" + key + "\"", {{"key", key}});
  return doc.at(key);
}

std::string str(const json& v, const std::string& what) {
  if (!v.is_string()) malformed(what + " must be a string", {{"value", v}});
  return v.get<std::string>();
}

ObjId object_of(const FinCategory& C, const std::string& name) {
  auto c = C.find_object(name);
  if (!c) malformed("unknown object " + name, {{"object", name}});
  return *c;
}

ArrowId arrow_of(const FinCategory& C, const std::string& name) {
  auto a = C.find_arrow(name);
  if (!a) malformed("unknown arrow " + name, {{"arrow", name}});
  return *a;
}

Elem elem_of(const std::vector<std::string>& names, const std::string& name, const std::string& what) {
  for (Elem i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  malformed("unknown element " + name + " in " + what, {{"element", name}, {"in", what}});
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

// "g.f" where arrow names may themselves contain dots: take the unique
// split into two declared, composable arrows.
std::pair<std::string, std::string> split_composite(const std::string& key,
                                                    const std::map<std::string, std::pair<std::string, std::string>>& ends) {
  std::vector<std::pair<std::string, std::string>> found;
  for (std::size_t p = key.find('.'); p != std::string::npos; p = key.find('.', p + 1)) {
    std::string g = key.substr(0, p), f = key.substr(p + 1);
    auto gi = ends.find(g), fi = ends.find(f);
    if (gi == ends.end() || fi == ends.end()) continue;
    if (fi->second.second != gi->second.first) continue;
    found.emplace_back(g, f);
  }
  if (found.size() != 1)
    malformed(found.empty() ? "composition key names no composable pair: " + key
                            : "ambiguous composition key: " + key,
              {{"entry", key}});
  return found.front();
}

}  // namespace

Document load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path.string(), {{"path", path.string()}});
  Document d;
  try {
    d.value = json::parse(in);
  } catch (const json::parse_error& e) {
    malformed(path.string() + ": " + e.what(), {{"path", path.string()}});
  }
  d.dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return d;
}

Document resolve_ref(const Document& parent, const json& ref) {
  if (ref.is_string()) {
    std::filesystem::path p = ref.get<std::string>();
    return load_document(p.is_absolute() ? p : parent.dir / p);
  }
  if (!ref.is_object()) malformed("reference must be an object or a path", {{"value", ref}});
  return {ref, parent.dir};
}

std::string document_kind(const json& d) {
  if (!d.is_object()) return "";
  if (d.contains("schema") && d.contains("command"))
    return d["command"] == "nuclei-frame" ? "nuclei-frame-report" : "report";
  if (d.contains("categories") && d.contains("functors")) return "mixing-square";
  if (d.contains("base") && d.contains("fibres")) return "presentation";
  if (d.contains("source") && d.contains("target") && d.contains("components")) return "morphism";
  if (d.contains("presentation") && d.contains("components")) return "nucleus";
  if (d.contains("source") && d.contains("target") && d.contains("objects")) return "functor";
  if (d.contains("parts") && d.contains("middle")) return "glue";
  if (d.contains("monoid") && d.contains("action")) return "monoid";
  if (d.contains("category") && d.contains("sets")) return "presheaf";
  if (d.contains("category") && d.contains("covers")) return "topology";
  if (d.contains("objects") && d.contains("arrows")) return "category";
  if (d.contains("objects")) return "category";
  if (d.contains("elements")) return "frame";
  return "";
}

// ---- categories ---------------------------------------------------------------------------------

CategoryPtr parse_category(const json& doc) {
  RawCategory raw;
  for (const auto& o : need(doc, "objects", "category")) raw.objects.push_back(str(o, "object name"));
  std::map<std::string, std::pair<std::string, std::string>> ends;
  for (const auto& o : raw.objects) ends["id:" + o] = {o, o};
  if (doc.contains("arrows")) {
    for (const auto& a : doc["arrows"]) {
      RawCategory::RawArrow ra{str(need(a, "name", "arrow"), "arrow name"), str(need(a, "src", "arrow"), "src"),
                               str(need(a, "dst", "arrow"), "dst")};
      ends[ra.name] = {ra.src, ra.dst};
      raw.arrows.push_back(std::move(ra));
    }
  }
  if (doc.contains("compose")) {
    const json& comp = doc["compose"];
    if (!comp.is_object()) malformed("compose must be an object {\"g.f\": \"h\"}");
    for (const auto& [key, h] : comp.items()) {
      auto [g, f] = split_composite(key, ends);
      raw.compose.push_back({g, f, str(h, "composite")});
    }
  }
  return validate_category(raw);
}

json category_to_json(const FinCategory& C) {
  json objects = json::array(), arrows = json::array(), compose = json::object();
  for (ObjId c = 0; c < C.num_objects(); ++c) objects.push_back(C.object_name(c));
  for (ArrowId a = 0; a < C.num_arrows(); ++a) {
    if (C.is_identity(a)) continue;
    arrows.push_back({{"name", C.arrow_name(a)}, {"src", C.object_name(C.src(a))}, {"dst", C.object_name(C.dst(a))}});
  }
  for (ArrowId f = 0; f < C.num_arrows(); ++f) {
    if (C.is_identity(f)) continue;
    for (ArrowId g : C.out_of(C.dst(f))) {
      if (C.is_identity(g)) continue;
      compose[C.arrow_name(g) + "." + C.arrow_name(f)] = C.arrow_name(C.compose(g, f));
    }
  }
  return {{"objects", objects}, {"arrows", arrows}, {"compose", compose}};
}

// ---- frames -----------------------------------------------------------------------------------------

FramePtr parse_frame(const json& doc) {
  std::vector<std::string> names;
  for (const auto& e : need(doc, "elements", "frame")) names.push_back(str(e, "element name"));
  std::vector<std::pair<Elem, Elem>> leq;
  if (doc.contains("leq")) {
    for (const auto& p : doc["leq"]) {
      if (!p.is_array() || p.size() != 2) malformed("leq entries are pairs [\"x\",\"y\"]", {{"entry", p}});
      leq.emplace_back(elem_of(names, str(p[0], "element"), "frame"), elem_of(names, str(p[1], "element"), "frame"));
    }
  }
  return FinFrame::from_order(std::move(names), leq);
}

json frame_to_json(const FinFrame& L) {
  json leq = json::array();
  for (auto [a, b] : L.covers()) leq.push_back({L.name(a), L.name(b)});
  return {{"elements", L.names()}, {"leq", leq}};
}

std::vector<Elem> parse_map(const std::vector<std::string>& from, const std::vector<std::string>& to, const json& doc,
                            const std::string& what) {
  if (!doc.is_object()) malformed(what + " must be an object mapping element names", {{"in", what}});
  std::vector<Elem> m(from.size(), 0);
  std::vector<bool> seen(from.size(), false);
  for (const auto& [k, v] : doc.items()) {
    Elem a = elem_of(from, k, what);
    m[a] = elem_of(to, str(v, what), what);
    seen[a] = true;
  }
  for (Elem a = 0; a < from.size(); ++a)
    if (!seen[a]) malformed(what + " is not total: missing " + from[a], {{"in", what}, {"element", from[a]}});
  return m;
}

json map_to_json(const std::vector<std::string>& from, const std::vector<std::string>& to, const std::vector<Elem>& m) {
  json j = json::object();
  for (Elem a = 0; a < m.size(); ++a) j[from[a]] = to[m[a]];
  return j;
}

// ---- presentations ----------------------------------------------------------------------------------

PresentationPtr parse_presentation(const Document& d) {
  const json& doc = d.value;
  CategoryPtr C = parse_category(resolve_ref(d, need(doc, "base", "presentation")).value);
  const json& fib = need(doc, "fibres", "presentation");
  std::vector<FramePtr> fibres;
  for (ObjId c = 0; c < C->num_objects(); ++c) {
    const std::string& name = C->object_name(c);
    if (!fib.contains(name)) malformed("no fibre for object " + name, {{"object", name}});
    fibres.push_back(parse_frame(resolve_ref(d, fib[name]).value));
  }
  const json empty = json::object();
  const json& tr = doc.contains("transitions") ? doc["transitions"] : empty;
  std::vector<std::vector<Elem>> maps(C->num_arrows());
  for (ArrowId g = 0; g < C->num_arrows(); ++g) {
    const auto& from = fibres[C->dst(g)]->names();
    const auto& to = fibres[C->src(g)]->names();
    const std::string& name = C->arrow_name(g);
    if (!tr.contains(name) || tr[name] == "id") {
      if (!tr.contains(name) && !C->is_identity(g)) malformed("no transition for arrow " + name, {{"arrow", name}});
      for (const auto& v : from) maps[g].push_back(elem_of(to, v, name));
      continue;
    }
    maps[g] = parse_map(from, to, tr[name], "transition " + name);
  }
  return validate_presentation(C, std::move(fibres), maps);
}

json presentation_to_json(const IntLocalePresentation& P) {
  const FinCategory& C = *P.base;
  json fibres = json::object(), tr = json::object();
  for (ObjId c = 0; c < C.num_objects(); ++c) fibres[C.object_name(c)] = frame_to_json(P.fibre(c));
  for (ArrowId g = 0; g < C.num_arrows(); ++g) {
    if (C.is_identity(g)) continue;
    tr[C.arrow_name(g)] = map_to_json(P.fibre(C.dst(g)).names(), P.fibre(C.src(g)).names(), P.transitions[g].hom.map);
  }
  return {{"base", category_to_json(C)}, {"fibres", fibres}, {"transitions", tr}};
}

// ---- topologies -------------------------------------------------------------------------------------

std::vector<Sieve> parse_covers(const FinCategory& C, const json& doc) {
  const json& covers = need(doc, "covers", "topology");
  if (!covers.is_object()) malformed("covers must map objects to lists of sieves");
  std::vector<Sieve> out;
  for (const auto& [obj, list] : covers.items()) {
    ObjId c = object_of(C, obj);
    for (const auto& s : list) {
      Sieve S = empty_sieve(C, c);
      for (const auto& a : s) {
        ArrowId f = arrow_of(C, str(a, "arrow"));
        if (C.dst(f) != c) malformed("arrow " + C.arrow_name(f) + " does not end at " + obj, {{"object", obj}, {"arrow", C.arrow_name(f)}});
        S.arrows.set(C.local_index(f));
      }
      out.push_back(std::move(S));
    }
  }
  return out;
}

GrothendieckTopology parse_topology(CategoryPtr C, const json* doc, const Budget& budget) {
  if (doc == nullptr || doc->is_null()) return trivial_topology(C);
  SieveSpace space = SieveSpace::build(C, budget.sieves);
  return validate_topology(C, parse_covers(*C, *doc), space);
}

json topology_to_json(const FinCategory& C, const GrothendieckTopology& J, const SieveSpace& space) {
  json covers = json::object();
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    json list = json::array();
    for (const auto& S : J.canonical_covering(c, space)) list.push_back(sieve_to_json(C, S));
    covers[C.object_name(c)] = list;
  }
  return {{"covers", covers}};
}

// ---- functors ---------------------------------------------------------------------------------------

FinFunctor parse_functor(CategoryPtr source, CategoryPtr target, const json& doc) {
  const json& objs = need(doc, "objects", "functor");
  std::vector<ObjId> on_obj(source->num_objects());
  for (ObjId c = 0; c < source->num_objects(); ++c) {
    const std::string& n = source->object_name(c);
    if (!objs.contains(n)) malformed("functor does not map object " + n, {{"object", n}});
    on_obj[c] = object_of(*target, str(objs[n], "object"));
  }
  const json empty = json::object();
  const json& arrs = doc.contains("arrows") ? doc["arrows"] : empty;
  std::vector<ArrowId> on_arr(source->num_arrows());
  for (ArrowId a = 0; a < source->num_arrows(); ++a) {
    const std::string& n = source->arrow_name(a);
    if (arrs.contains(n)) {
      on_arr[a] = arrow_of(*target, str(arrs[n], "arrow"));
    } else if (source->is_identity(a)) {
      on_arr[a] = target->identity(on_obj[source->src(a)]);
    } else {
      malformed("functor does not map arrow " + n, {{"arrow", n}});
    }
  }
  return validate_functor(std::move(source), std::move(target), std::move(on_obj), std::move(on_arr));
}

json functor_to_json(const FinFunctor& F) {
  json objs = json::object(), arrs = json::object();
  for (ObjId c = 0; c < F.source->num_objects(); ++c)
    objs[F.source->object_name(c)] = F.target->object_name(F.obj(c));
  for (ArrowId a = 0; a < F.source->num_arrows(); ++a) {
    if (F.source->is_identity(a)) continue;
    arrs[F.source->arrow_name(a)] = F.target->arrow_name(F.arr(a));
  }
  return {{"source", category_to_json(*F.source)},
          {"target", category_to_json(*F.target)},
          {"objects", objs},
          {"arrows", arrs}};
}

// ---- morphisms and nuclei ---------------------------------------------------------------------------

IntLocaleMorphism parse_morphism(const Document& d) {
  PresentationPtr src = parse_presentation(resolve_ref(d, need(d.value, "source", "morphism")));
  PresentationPtr tgt = parse_presentation(resolve_ref(d, need(d.value, "target", "morphism")));
  const FinCategory& C = *src->base;
  const json& comps = need(d.value, "components", "morphism");
  std::vector<std::vector<Elem>> f(C.num_objects());
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    const std::string& n = C.object_name(c);
    if (!comps.contains(n)) malformed("no component at object " + n, {{"object", n}});
    if (c >= tgt->base->num_objects()) malformed("source and target presentations have different bases");
    f[c] = parse_map(tgt->fibre(c).names(), src->fibre(c).names(), comps[n], "component " + n);
  }
  return validate_morphism(src, tgt, f);
}

json morphism_to_json(const IntLocaleMorphism& f, bool embed) {
  const FinCategory& C = *f.source->base;
  json comps = json::object();
  for (ObjId c = 0; c < C.num_objects(); ++c)
    comps[C.object_name(c)] = map_to_json(f.target->fibre(c).names(), f.source->fibre(c).names(), f.f_inv[c].map);
  json j = {{"components", comps}};
  if (embed) {
    j["source"] = presentation_to_json(*f.source);
    j["target"] = presentation_to_json(*f.target);
  }
  return j;
}

std::vector<EndoMap> parse_components(const IntLocalePresentation& P, const json& comps) {
  const FinCategory& C = *P.base;
  std::vector<EndoMap> out(C.num_objects());
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    const std::string& n = C.object_name(c);
    if (!comps.contains(n)) malformed("no component at object " + n, {{"object", n}});
    out[c] = parse_map(P.fibre(c).names(), P.fibre(c).names(), comps[n], "component " + n);
  }
  return out;
}

json components_to_json(const IntLocalePresentation& P, const std::vector<EndoMap>& comps) {
  json j = json::object();
  for (ObjId c = 0; c < P.base->num_objects(); ++c)
    j[P.base->object_name(c)] = map_to_json(P.fibre(c).names(), P.fibre(c).names(), comps[c]);
  return j;
}

InternalNucleus parse_nucleus(const Document& d, bool prenucleus) {
  PresentationPtr P = parse_presentation(resolve_ref(d, need(d.value, "presentation", "nucleus")));
  auto comps = parse_components(*P, need(d.value, "components", "nucleus"));
  return prenucleus ? validate_internal_prenucleus(P, std::move(comps)) : validate_internal_nucleus(P, std::move(comps));
}

json nucleus_to_json(const InternalNucleus& j) {
  return {{"presentation", presentation_to_json(*j.P)}, {"components", components_to_json(*j.P, j.components)}};
}

// ---- presheaves -------------------------------------------------------------------------------------

Presheaf parse_presheaf(CategoryPtr C, const json& doc) {
  const json& sets = need(doc, "sets", "presheaf");
  std::vector<std::vector<std::string>> names(C->num_objects());
  for (ObjId c = 0; c < C->num_objects(); ++c) {
    const std::string& n = C->object_name(c);
    if (!sets.contains(n)) malformed("no set for object " + n, {{"object", n}});
    for (const auto& x : sets[n]) names[c].push_back(str(x, "set element"));
  }
  const json empty = json::object();
  const json& maps = doc.contains("maps") ? doc["maps"] : empty;
  std::vector<std::vector<Elem>> tr(C->num_arrows());
  for (ArrowId f = 0; f < C->num_arrows(); ++f) {
    const std::string& n = C->arrow_name(f);
    const auto& from = names[C->dst(f)];
    const auto& to = names[C->src(f)];
    if (!maps.contains(n)) {
      if (!C->is_identity(f)) malformed("no map for arrow " + n, {{"arrow", n}});
      for (Elem x = 0; x < from.size(); ++x) tr[f].push_back(x);
      continue;
    }
    tr[f] = parse_map(from, to, maps[n], "map " + n);
  }
  return validate_presheaf(std::move(C), std::move(names), std::move(tr));
}

// ---- DOT --------------------------------------------------------------------------------------------

std::string category_dot(const FinCategory& C) {
  std::ostringstream o;
  o << "digraph category {\n";
  for (ObjId c = 0; c < C.num_objects(); ++c) o << "  " << quote(C.object_name(c)) << ";\n";
  for (ArrowId a = 0; a < C.num_arrows(); ++a) {
    if (C.is_identity(a)) continue;
    o << "  " << quote(C.object_name(C.src(a))) << " -> " << quote(C.object_name(C.dst(a)))
      << " [label=" << quote(C.arrow_name(a)) << "];\n";
  }
  o << "}\n";
  return o.str();
}

std::string frame_dot(const FinFrame& L, const std::string& name) {
  std::ostringstream o;
  o << "digraph " << quote(name) << " {\n  rankdir=BT;\n";
  for (Elem e = 0; e < L.size(); ++e) o << "  " << quote(L.name(e)) << ";\n";
  for (auto [a, b] : L.covers()) o << "  " << quote(L.name(a)) << " -> " << quote(L.name(b)) << ";\n";
  o << "}\n";
  return o.str();
}

}  // namespace locforge
