#include "locforge/commands.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "locforge/gen.hpp"

namespace locforge {

namespace {

struct Ctx {
  const std::vector<Document>& in;
  const CommandOptions& opts;
  std::string text;

  const Document& doc(std::size_t i) const {
    if (i >= in.size()) fail(ErrorKind::MalformedDocument, "missing input document #" + std::to_string(i + 1));
    return in[i];
  }
};

json report_of(const Verdict& v) {
  json r = json::object();
  r["verdict"] = std::string(to_string(v.status));
  r["witnesses"] = v.witnesses;
  return r;
}

Verdict from_bool(bool ok, json witness) {
  Verdict v;
  if (!ok) v.add_failure(std::move(witness));
  return v;
}

json error_witness(const Error& e) {
  return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"detail", e.witness()}};
}

// A presentation document, or a report that embeds one (e.g. the output of `omega`).
PresentationPtr presentation_input(const Document& d) {
  if (document_kind(d.value) == "report" && d.value.contains("presentation"))
    return parse_presentation({d.value["presentation"], d.dir});
  return parse_presentation(d);
}

const json* optional_key(const json& doc, const char* key) {
  return doc.contains(key) ? &doc[key] : nullptr;
}

std::string oracle_label(OracleMode m) {
  switch (m) {
    case OracleMode::always: return "always";
    case OracleMode::never: return "never";
    default: return "auto";
  }
}

// ---- commands -------------------------------------------------------------------------------------

json cmd_validate(Ctx& x) {
  const Document& d = x.doc(0);
  std::string kind = document_kind(d.value);
  json r;
  try {
    if (kind == "category") {
      auto C = parse_category(d.value);
      r = {{"objects", C->num_objects()}, {"arrows", C->num_arrows()}};
    } else if (kind == "frame") {
      auto L = parse_frame(d.value);
      r = {{"elements", L->size()}, {"height", L->height()}};
    } else if (kind == "presentation") {
      auto P = parse_presentation(d);
      r = {{"objects", P->base->num_objects()}};
    } else if (kind == "topology") {
      auto C = parse_category(resolve_ref(d, d.value["category"]).value);
      parse_topology(C, &d.value, x.opts.budget);
      r = json::object();
    } else if (kind == "functor") {
      auto S = parse_category(resolve_ref(d, d.value["source"]).value);
      auto T = parse_category(resolve_ref(d, d.value["target"]).value);
      parse_functor(S, T, d.value);
      r = json::object();
    } else if (kind == "morphism") {
      parse_morphism(d);
      r = json::object();
    } else if (kind == "nucleus") {
      parse_nucleus(d);
      r = json::object();
    } else if (kind == "presheaf") {
      auto C = parse_category(resolve_ref(d, d.value["category"]).value);
      parse_presheaf(C, d.value);
      r = json::object();
    } else {
      fail(ErrorKind::UnsupportedDocument, "cannot tell what kind of document this is");
    }
    r.update(report_of(Verdict{}));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedDocument || e.kind() == ErrorKind::UnsupportedDocument ||
        e.kind() == ErrorKind::BudgetExceeded)
      throw;
    Verdict v;
    v.add_failure(error_witness(e));
    r = report_of(v);
  }
  r["kind"] = kind;
  return r;
}

json cmd_check_rbc(Ctx& x) {
  auto P = presentation_input(x.doc(0));
  RBCResult res = check_relative_BC(P, x.opts.budget, x.opts.oracle);
  json r = res.to_json();
  r["oracle_mode"] = oracle_label(x.opts.oracle);
  return r;
}

json cmd_check_bc_pullbacks(Ctx& x) {
  return report_of(check_BC_pullbacks(*presentation_input(x.doc(0))));
}

struct SiteFunctor {
  FinFunctor F;
  GrothendieckTopology J, K;
};

SiteFunctor site_functor(const Ctx& x) {
  const Document& d = x.doc(0);
  auto S = parse_category(resolve_ref(d, d.value.at("source")).value);
  auto T = parse_category(resolve_ref(d, d.value.at("target")).value);
  FinFunctor F = parse_functor(S, T, d.value);
  return {F, parse_topology(S, optional_key(d.value, "source_topology"), x.opts.budget),
          parse_topology(T, optional_key(d.value, "target_topology"), x.opts.budget)};
}

json cmd_check_site_morphism(Ctx& x) {
  auto s = site_functor(x);
  return report_of(check_morphism_of_sites(s.F, s.J, s.K));
}

json cmd_check_comorphism(Ctx& x) {
  auto s = site_functor(x);
  return report_of(check_comorphism(s.F, s.J, s.K));
}

json cmd_check_sheaf(Ctx& x) {
  const Document& d = x.doc(0);
  if (!d.value.contains("category")) fail(ErrorKind::MalformedDocument, "presheaf document lacks \"category\"");
  auto C = parse_category(resolve_ref(d, d.value["category"]).value);
  Presheaf P = parse_presheaf(C, d.value);
  auto J = parse_topology(C, optional_key(d.value, "topology"), x.opts.budget);
  return report_of(check_sheaf(P, J, x.opts.budget.maps));
}

json cmd_omega(Ctx& x) {
  auto C = parse_category(x.doc(0).value);
  auto P = omega_presentation(C, x.opts.budget.sieves);
  RBCResult res = check_relative_BC(P, x.opts.budget, x.opts.oracle);
  json r = res.to_json();
  r["presentation"] = presentation_to_json(*P);
  return r;
}

json cmd_omega_sheaf(Ctx& x) {
  auto P = presentation_input(x.doc(0));
  KLSite site = build_kl_site(P, x.opts.budget);
  try {
    OmegaSheaf os = omega_sheaf_of(site, x.opts.budget);
    json r = report_of(os.sheaf);
    json carriers = json::object();
    const auto& T = *site.gc.cat();
    for (ObjId o = 0; o < T.num_objects(); ++o) carriers[T.object_name(o)] = os.presheaf.size(o);
    r["carrier_sizes"] = carriers;
    return r;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotInternalLocale) throw;
    Verdict v;
    v.status = Status::inapplicable;
    v.witnesses.push_back(error_witness(e));
    return report_of(v);
  }
}

json cmd_glue(Ctx& x) {
  const Document& d = x.doc(0);
  std::vector<PresentationPtr> parts;
  for (const auto& p : d.value.at("parts")) parts.push_back(parse_presentation(resolve_ref(d, p)));
  FramePtr middle = parse_frame(resolve_ref(d, d.value.at("middle")).value);
  const json& emb = d.value.at("embeddings");
  if (!emb.is_array() || emb.size() != parts.size())
    fail(ErrorKind::MalformedDocument, "one embedding per part is required");
  std::vector<std::vector<Elem>> embeddings;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto t = terminal_object(*parts[i]->base);
    if (!t) fail(ErrorKind::MissingTerminal, "part " + std::to_string(i) + " has no terminal object", {{"part", i}});
    embeddings.push_back(parse_map(middle->names(), parts[i]->fibre(*t).names(), emb[i], "embedding " + std::to_string(i)));
  }
  GlueResult g = glue(parts, middle, embeddings, x.opts.budget);
  Verdict v = g.verdict;
  if (!g.agree) v.add_failure({{"check", "agreement"}, {"glued_rbc", g.glued_rbc.primary}});
  json r = report_of(v);
  r["glued_rbc"] = g.glued_rbc.to_json();
  r["agree"] = g.agree;
  if (g.glued) r["presentation"] = presentation_to_json(*g.glued);
  return r;
}

json cmd_monoid(Ctx& x) {
  const Document& d = x.doc(0);
  auto M = parse_category(resolve_ref(d, d.value.at("monoid")).value);
  auto L = parse_frame(resolve_ref(d, d.value.at("frame")).value);
  const json& act = d.value.at("action");
  std::vector<std::vector<Elem>> action(M->num_arrows());
  for (ArrowId m = 0; m < M->num_arrows(); ++m) {
    const std::string& n = M->arrow_name(m);
    if (act.contains(n)) {
      action[m] = parse_map(L->names(), L->names(), act[n], "action " + n);
    } else if (M->is_identity(m)) {
      for (Elem e = 0; e < L->size(); ++e) action[m].push_back(e);
    } else {
      fail(ErrorKind::MalformedDocument, "no action for " + n, {{"arrow", n}});
    }
  }
  MonoidResult mr = from_monoid_action(M, L, action, x.opts.budget);
  Verdict v = mr.divisor;
  if (!mr.agree) v.add_failure({{"check", "agreement"}, {"rbc", mr.rbc.primary}});
  json r = report_of(v);
  r["rbc"] = mr.rbc.to_json();
  r["agree"] = mr.agree;
  return r;
}

json cmd_morphism_validate(Ctx& x) {
  try {
    IntLocaleMorphism f = parse_morphism(x.doc(0));
    json r = report_of(Verdict{});
    r["morphism"] = morphism_to_json(f, false);
    return r;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotAHom && e.kind() != ErrorKind::NotNatural && e.kind() != ErrorKind::NotAdjointNatural)
      throw;
    Verdict v;
    v.add_failure(error_witness(e));
    return report_of(v);
  }
}

json cmd_surjective(Ctx& x) {
  IntLocaleMorphism f = parse_morphism(x.doc(0));
  SurjectivityReport s = is_surjective(f, x.opts.budget);
  Verdict v = from_bool(s.pointwise, s.witness);
  if (!s.agree()) v.add_failure({{"check", "agreement"}, {"detail", s.to_json()}});
  json r = report_of(v);
  r["surjectivity"] = s.to_json();
  return r;
}

json cmd_embedding(Ctx& x) {
  IntLocaleMorphism f = parse_morphism(x.doc(0));
  json w = json::object();
  for (ObjId c = 0; c < f.source->base->num_objects(); ++c)
    if (!is_surjective(f.f_inv[c].map, f.source->fibre(c).size())) {
      w = {{"object", f.source->base->object_name(c)}};
      break;
    }
  return report_of(from_bool(is_embedding(f), w));
}

json cmd_factorize(Ctx& x) {
  IntLocaleMorphism f = parse_morphism(x.doc(0));
  Factorization fz = factorize(f, x.opts.budget);
  SurjectivityReport s = is_surjective(fz.s, x.opts.budget);
  bool emb = is_embedding(fz.e);
  Verdict v;
  if (!fz.composite_ok) v.add_failure({{"check", "composite"}});
  if (!s.pointwise) v.add_failure({{"check", "surjective"}, {"detail", s.witness}});
  if (!emb) v.add_failure({{"check", "embedding"}});
  json r = report_of(v);
  r["middle"] = presentation_to_json(*fz.middle.presentation);
  r["s"] = morphism_to_json(fz.s, false);
  r["e"] = morphism_to_json(fz.e, false);
  r["nucleus"] = components_to_json(*f.target, fz.nucleus.components);
  return r;
}

json cmd_terminal_omega(Ctx& x) {
  auto P = presentation_input(x.doc(0));
  try {
    TerminalResult t = terminal_into_omega(P, x.opts.budget);
    json r = report_of(from_bool(t.count == 1, {{"count", t.count}}));
    r["count"] = t.count;
    r["canonical"] = t.canonical;
    r["morphism"] = morphism_to_json(t.morphism, false);
    return r;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotInternalLocale) throw;
    Verdict v;
    v.status = Status::inapplicable;
    v.witnesses.push_back(error_witness(e));
    return report_of(v);
  }
}

json cmd_nuclei_enumerate(Ctx& x) {
  const Document& d = x.doc(0);
  json list = json::array();
  if (document_kind(d.value) == "frame") {
    auto L = parse_frame(d.value);
    for (const auto& j : enumerate_nuclei(*L, x.opts.budget.maps))
      list.push_back(map_to_json(L->names(), L->names(), j));
  } else {
    auto P = presentation_input(d);
    for (const auto& j : enumerate_internal_nuclei(P, x.opts.budget)) list.push_back(components_to_json(*P, j.components));
  }
  json r = report_of(Verdict{});
  r["count"] = list.size();
  r["nuclei"] = list;
  return r;
}

json cmd_nuclei_frame(Ctx& x) {
  auto P = presentation_input(x.doc(0));
  NucleiFrame nf = nuclei_frame(P, x.opts.budget);
  Verdict v = nf.lattice_ops;
  json proj = json::object();
  for (ObjId c = 0; c < P->base->num_objects(); ++c) {
    const auto& o = nf.projection_open[c];
    proj[P->base->object_name(c)] = {{"open", o.frobenius && o.heyting}, {"witness", o.witness}};
    if (!(o.frobenius && o.heyting)) v.add_failure({{"projection", P->base->object_name(c)}, {"detail", o.witness}});
  }
  json r = report_of(v);
  json nuclei = json::object();
  for (Elem i = 0; i < nf.nuclei.size(); ++i) nuclei[nf.frame->name(i)] = components_to_json(*P, nf.nuclei[i].components);
  r["frame"] = frame_to_json(*nf.frame);
  r["dot"] = frame_dot(*nf.frame, "nuclei");
  r["nuclei"] = nuclei;
  r["projections"] = proj;
  return r;
}

json cmd_nucleation(Ctx& x) {
  InternalNucleus p = parse_nucleus(x.doc(0), true);
  InternalNucleus j = internal_nucleation(p.P, p.components);
  json stages = json::object();
  for (ObjId c = 0; c < p.P->base->num_objects(); ++c)
    stages[p.P->base->object_name(c)] = nucleation(p.P->fibre(c), p.components[c]).stages.size();
  json r = report_of(Verdict{});
  r["nucleus"] = components_to_json(*p.P, j.components);
  r["stages"] = stages;
  return r;
}

json cmd_lt_roundtrip(Ctx& x) {
  const Document& d = x.doc(0);
  PresentationPtr P;
  std::vector<InternalNucleus> js;
  if (document_kind(d.value) == "nucleus") {
    InternalNucleus j = parse_nucleus(d);
    P = j.P;
    js.push_back(j);
  } else {
    P = presentation_input(d);
    js = enumerate_internal_nuclei(P, x.opts.budget);
  }
  KLSite site = build_kl_site(P, x.opts.budget, false);
  Verdict v;
  for (const auto& j : js) {
    json comps = components_to_json(*P, j.components);
    Sublocale s = sublocale_of(j, x.opts.budget);
    if (!(nucleus_of_embedding(s.embedding) == j)) v.add_failure({{"round_trip", "sublocale"}, {"nucleus", comps}});
    LTCandidate lt = lt_from_internal_nucleus(j, site.gc);
    if (auto bad = lt_violation(*P, site.gc, lt)) v.add_failure({{"round_trip", "lt"}, {"nucleus", comps}, {"law", *bad}});
    if (!(internal_nucleus_from_lt(P, site.gc, lt) == j)) v.add_failure({{"round_trip", "lt"}, {"nucleus", comps}});
  }
  json r = report_of(v);
  r["nuclei"] = js.size();
  return r;
}

json cmd_mixing_square(Ctx& x) {
  const Document& d = x.doc(0);
  const json& cats = d.value.at("categories");
  const json& fun = d.value.at("functors");
  std::map<std::string, CategoryPtr> C;
  for (const char* k : {"C", "D", "E", "F"}) {
    if (!cats.contains(k)) fail(ErrorKind::MalformedDocument, std::string("mixing square lacks category ") + k);
    C[k] = parse_category(resolve_ref(d, cats[k]).value);
  }
  auto functor = [&](const char* name, const char* s, const char* t) {
    if (!fun.contains(name)) fail(ErrorKind::MalformedDocument, std::string("mixing square lacks functor ") + name);
    return parse_functor(C[s], C[t], resolve_ref(d, fun[name]).value);
  };
  FinFunctor A = functor("A", "C", "E"), B = functor("B", "D", "F"), F = functor("F", "C", "D"),
             G = functor("G", "E", "F");
  const json empty = json::object();
  const json& tops = d.value.contains("topologies") ? d.value["topologies"] : empty;
  auto top = [&](const char* k) { return parse_topology(C[k], optional_key(tops, k), x.opts.budget); };
  std::vector<ArrowId> iso;
  const json& isoj = d.value.contains("iso") ? d.value["iso"] : empty;
  for (ObjId c = 0; c < C["C"]->num_objects(); ++c) {
    const std::string& n = C["C"]->object_name(c);
    if (isoj.contains(n)) {
      auto a = C["F"]->find_arrow(isoj[n].get<std::string>());
      if (!a) fail(ErrorKind::MalformedDocument, "unknown iso arrow", {{"object", n}});
      iso.push_back(*a);
    } else {
      iso.push_back(C["F"]->identity(B.obj(F.obj(c))));
    }
  }
  MixingSquare ms = mixing_square(A, B, F, G, top("C"), top("D"), top("E"), top("F"), iso, x.opts.budget);
  Verdict v;
  for (auto [label, part] : {std::pair{"hypotheses", &ms.hypotheses}, std::pair{"comorphism", &ms.comorphism},
                             std::pair{"square", &ms.square}})
    for (const auto& w : part->witnesses) v.add_failure({{"part", label}, {"detail", w}});
  if (!ms.hypotheses.ok() && v.witnesses.empty()) v.status = ms.hypotheses.status;
  json r = report_of(v);
  r["hypotheses"] = ms.hypotheses.ok();
  r["comorphism"] = ms.comorphism.ok();
  r["square"] = ms.square.ok();
  return r;
}

json cmd_export_dot(Ctx& x) {
  const Document& d = x.doc(0);
  std::string kind = document_kind(d.value);
  if (kind == "category") {
    x.text = category_dot(*parse_category(d.value));
  } else if (kind == "frame") {
    x.text = frame_dot(*parse_frame(d.value));
  } else if (kind == "nuclei-frame-report") {
    x.text = frame_dot(*parse_frame(d.value.at("frame")), "nuclei");
  } else {
    fail(ErrorKind::UnsupportedDocument, "export-dot takes a category, a frame or a nuclei-frame report",
         {{"kind", kind}});
  }
  json r = report_of(Verdict{});
  r["kind"] = kind;
  return r;
}

void write_json(const std::filesystem::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) fail(ErrorKind::MalformedDocument, "cannot write " + p.string());
  out << j.dump(2) << "\n";
}

json cmd_gen(Ctx& x) {
  if (x.opts.out_dir.empty()) fail(ErrorKind::MalformedDocument, "gen needs an output directory");
  std::filesystem::create_directories(x.opts.out_dir);
  GenSpec spec;
  spec.seed = x.opts.seed != 0 ? x.opts.seed : seed_from_env();
  spec.count = x.opts.count;
  json artifacts = json::array();
  auto emit = [&](const std::string& name, const json& doc) {
    write_json(x.opts.out_dir / (name + ".json"), doc);
    artifacts.push_back(name + ".json");
  };
  const char* frame_names[] = {"frm2", "ch3", "dia", "ch4", "bool3"};
  auto frames = frame_corpus();
  for (std::size_t i = 0; i < frames.size(); ++i) emit("frame-" + std::string(frame_names[i]), frame_to_json(*frames[i]));
  emit("category-wedge", category_to_json(*wedge_category()));
  emit("category-span", category_to_json(*span_category()));
  emit("category-arrow", category_to_json(*arrow_category()));
  json expected = json::object();
  for (const auto& np : gen_presentations(spec)) {
    emit(np.name, presentation_to_json(*np.P));
    if (np.name.rfind("random-", 0) != 0) expected[np.name] = np.internal_locale ? "pass" : "fail";
  }

  // Inputs for the commands that take more than a presentation.
  auto ch3 = fixture("terminal-ch3").P;
  auto ch4 = fixture("terminal-ch4").P;
  auto z2d = fixture("z2-diamond").P;
  emit("morphism-id-z2-diamond", morphism_to_json(identity_morphism(z2d)));
  for (const auto& f : enumerate_morphisms(ch3, ch3, x.opts.budget))
    if (!is_injective(f.f_inv[0].map) && !is_surjective(f.f_inv[0].map, 3)) {
      emit("morphism-collapse-ch3", morphism_to_json(f));
      break;
    }
  emit("nucleus-terminal-ch3", nucleus_to_json(enumerate_internal_nuclei(ch3, x.opts.budget)[1]));
  emit("prenucleus-terminal-ch4", nucleus_to_json({ch4, {{1, 2, 3, 3}}}));
  {
    auto plans = gen_glue_plans(spec);
    GluePlan g = plans.front();
    for (const auto& p : plans)
      if (glue(p.parts, p.middle, p.embeddings, x.opts.budget).verdict.ok()) {
        g = p;
        break;
      }
    json parts = json::array(), emb = json::array();
    for (std::size_t i = 0; i < g.parts.size(); ++i) {
      parts.push_back(presentation_to_json(*g.parts[i]));
      auto t = *terminal_object(*g.parts[i]->base);
      emb.push_back(map_to_json(g.middle->names(), g.parts[i]->fibre(t).names(), g.embeddings[i]));
    }
    emit("glue-plan", {{"parts", parts}, {"middle", frame_to_json(*g.middle)}, {"embeddings", emb}});
  }
  emit("monoid-z2-diamond", {{"monoid", category_to_json(*cyclic_group_category(2))},
                             {"frame", frame_to_json(*diamond_frame())},
                             {"action", {{"s", {{"0", "0"}, {"a", "b"}, {"b", "a"}, {"1", "1"}}}}}});
  json wedge = category_to_json(*wedge_category());
  emit("functor-wedge-terminal", {{"source", wedge},
                                  {"target", category_to_json(*terminal_category())},
                                  {"objects", {{"1", "*"}, {"2", "*"}, {"3", "*"}}},
                                  {"arrows", {{"f", "id:*"}, {"g", "id:*"}}}});
  emit("presheaf-wedge-point", {{"category", wedge},
                                {"sets", {{"1", {"x"}}, {"2", {"x"}}, {"3", {"x"}}}},
                                {"maps", {{"f", {{"x", "x"}}}, {"g", {{"x", "x"}}}}}});
  json id_arrow = {{"objects", {{"0", "0"}, {"1", "1"}}}, {"arrows", {{"f", "f"}}}};
  json arrow = category_to_json(*arrow_category());
  emit("mixing-square-arrow", {{"categories", {{"C", arrow}, {"D", arrow}, {"E", arrow}, {"F", arrow}}},
                               {"functors", {{"A", id_arrow}, {"B", id_arrow}, {"F", id_arrow}, {"G", id_arrow}}}});
  json r = report_of(Verdict{});
  r["seed"] = spec.seed;
  r["artifacts"] = artifacts;
  r["expected_rbc"] = expected;
  return r;
}

using Handler = std::function<json(Ctx&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"validate", cmd_validate},
      {"check-rbc", cmd_check_rbc},
      {"check-bc-pullbacks", cmd_check_bc_pullbacks},
      {"check-site-morphism", cmd_check_site_morphism},
      {"check-comorphism", cmd_check_comorphism},
      {"check-sheaf", cmd_check_sheaf},
      {"omega", cmd_omega},
      {"omega-sheaf", cmd_omega_sheaf},
      {"glue", cmd_glue},
      {"monoid", cmd_monoid},
      {"morphism-validate", cmd_morphism_validate},
      {"surjective", cmd_surjective},
      {"embedding", cmd_embedding},
      {"factorize", cmd_factorize},
      {"terminal-omega", cmd_terminal_omega},
      {"nuclei-enumerate", cmd_nuclei_enumerate},
      {"nuclei-frame", cmd_nuclei_frame},
      {"nucleation", cmd_nucleation},
      {"lt-roundtrip", cmd_lt_roundtrip},
      {"mixing-square", cmd_mixing_square},
      {"export-dot", cmd_export_dot},
      {"gen", cmd_gen},
  };
  return h;
}

int exit_code_of(const std::string& verdict) {
  if (verdict == "pass") return 0;
  if (verdict == "budget-exceeded") return 3;
  return 1;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

CommandResult run_command(const std::string& command, const std::vector<Document>& inputs, const CommandOptions& opts) {
  CommandResult out;
  auto it = handlers().find(command);
  if (it == handlers().end()) {
    out.exit_code = 2;
    out.diagnostics = "unknown command " + command;
    return out;
  }
  Ctx ctx{inputs, opts, {}};
  auto t0 = std::chrono::steady_clock::now();
  json body;
  try {
    body = it->second(ctx);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) {
      out.exit_code = 2;
      out.diagnostics = std::string(to_string(e.kind())) + ": " + e.what();
      if (!e.witness().empty()) out.diagnostics += " " + e.witness().dump();
      return out;
    }
    Verdict v;
    v.status = Status::budget_exceeded;
    v.witnesses.push_back(error_witness(e));
    body = report_of(v);
  } catch (const json::exception& e) {
    out.exit_code = 2;
    out.diagnostics = std::string("MalformedDocument: ") + e.what();
    return out;
  } catch (const std::filesystem::filesystem_error& e) {
    out.exit_code = 2;
    out.diagnostics = e.what();
    return out;
  }
  json r = {{"schema", "1"}, {"command", command}};
  r.update(body);
  if (r["verdict"] == "fail" && r["witnesses"].empty())
    r["witnesses"].push_back({{"error", "InternalInconsistency"}, {"message", "fail without witness"}});
  r["budget"] = {{"sieves", opts.budget.sieves}, {"maps", opts.budget.maps}};
  if (opts.timing)
    r["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out.exit_code = exit_code_of(r["verdict"].get<std::string>());
  out.report = std::move(r);
  out.text = std::move(ctx.text);
  return out;
}

std::string render_text(const json& r) {
  std::ostringstream o;
  o << r.value("command", "?") << ": " << r.value("verdict", "?") << "\n";
  for (const auto& [k, v] : r.items()) {
    if (k == "command" || k == "verdict" || k == "schema" || k == "witnesses" || k == "dot") continue;
    if (v.is_primitive()) o << "  " << k << ": " << v.dump() << "\n";
  }
  if (r.contains("dot")) o << r["dot"].get<std::string>();
  for (const auto& w : r.value("witnesses", json::array())) o << "  witness: " << w.dump() << "\n";
  return o.str();
}

}  // namespace locforge
