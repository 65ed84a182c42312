#include "locforge/nuclei.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace locforge {

std::optional<json> prenucleus_violation(const FinFrame& L, const EndoMap& p) {
  if (p.size() != L.size()) return json{{"axiom", "total"}};
  for (Elem x : p)
    if (x >= L.size()) return json{{"axiom", "total"}};
  for (Elem x = 0; x < L.size(); ++x)
    if (!L.leq(x, p[x])) return json{{"axiom", "inflationary"}, {"element", L.name(x)}};
  for (Elem x = 0; x < L.size(); ++x)
    for (Elem y = x + 1; y < L.size(); ++y)
      if (p[L.meet(x, y)] != L.meet(p[x], p[y]))
        return json{{"axiom", "meet-preserving"}, {"elements", json::array({L.name(x), L.name(y)})}};
  return std::nullopt;
}

std::optional<json> nucleus_violation(const FinFrame& L, const EndoMap& j) {
  if (auto w = prenucleus_violation(L, j)) return w;
  for (Elem x = 0; x < L.size(); ++x)
    if (j[j[x]] != j[x]) return json{{"axiom", "idempotent"}, {"element", L.name(x)}};
  return std::nullopt;
}

Nucleus validate_nucleus(FramePtr L, EndoMap j) {
  if (auto w = nucleus_violation(*L, j)) fail(ErrorKind::NotANucleus, "not a nucleus", *w);
  return {std::move(L), std::move(j)};
}

Nucleus validate_prenucleus(FramePtr L, EndoMap p) {
  if (auto w = prenucleus_violation(*L, p)) fail(ErrorKind::NotAPreNucleus, "not a pre-nucleus", *w);
  return {std::move(L), std::move(p)};
}

namespace {

std::vector<EndoMap> enumerate_endos(const FinFrame& L, std::size_t budget, bool idempotent) {
  const std::size_t n = L.size();
  std::vector<EndoMap> out;
  EndoMap p(n);
  std::size_t nodes = 0;
  std::function<void(Elem)> rec = [&](Elem a) {
    if (a == n) {
      if (!(idempotent ? nucleus_violation(L, p) : prenucleus_violation(L, p))) out.push_back(p);
      return;
    }
    for (Elem v = 0; v < n; ++v) {
      if (++nodes > budget) fail(ErrorKind::BudgetExceeded, "nucleus enumeration budget exceeded");
      if (!L.leq(a, v)) continue;
      p[a] = v;
      bool ok = true;
      for (Elem x = 0; x <= a && ok; ++x) {
        Elem m = L.meet(a, x);
        if (m <= a && p[m] != L.meet(v, p[x])) ok = false;
      }
      if (ok && idempotent && v <= a && p[v] != v) ok = false;
      for (Elem x = 0; x < a && ok && idempotent; ++x)
        if (p[x] == a && v != a) ok = false;
      if (ok) rec(a + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace

std::vector<EndoMap> enumerate_nuclei(const FinFrame& L, std::size_t budget) { return enumerate_endos(L, budget, true); }

std::vector<EndoMap> enumerate_prenuclei(const FinFrame& L, std::size_t budget) {
  return enumerate_endos(L, budget, false);
}

Nucleation nucleation(const FinFrame& L, const EndoMap& p) {
  Nucleation r;
  r.stages.push_back(identity_map(L));
  for (;;) {
    const EndoMap& cur = r.stages.back();
    EndoMap next(L.size());
    for (Elem x = 0; x < L.size(); ++x) next[x] = p[cur[x]];
    if (next == cur) break;
    r.stages.push_back(std::move(next));
    // each orbit x <= p x <= p p x ... is a strictly rising chain until it stops
    if (r.stages.size() > L.height() + 1)
      fail(ErrorKind::InternalInconsistency, "nucleation exceeded the height bound", {{"height", L.height()}});
  }
  r.result = r.stages.back();
  return r;
}

EndoMap identity_map(const FinFrame& L) {
  EndoMap m(L.size());
  std::iota(m.begin(), m.end(), 0);
  return m;
}

EndoMap top_map(const FinFrame& L) { return EndoMap(L.size(), L.top()); }

EndoMap pointwise_meet(const FinFrame& L, const std::vector<EndoMap>& maps) {
  EndoMap m = top_map(L);
  for (const auto& p : maps)
    for (Elem x = 0; x < L.size(); ++x) m[x] = L.meet(m[x], p[x]);
  return m;
}

EndoMap pointwise_join(const FinFrame& L, const std::vector<EndoMap>& maps) {
  EndoMap m = identity_map(L);
  for (const auto& p : maps)
    for (Elem x = 0; x < L.size(); ++x) m[x] = L.join(m[x], p[x]);
  return m;
}

bool pointwise_leq(const FinFrame& L, const EndoMap& a, const EndoMap& b) {
  for (Elem x = 0; x < L.size(); ++x)
    if (!L.leq(a[x], b[x])) return false;
  return true;
}

// ---- internal nuclei --------------------------------------------------------------------------

namespace {

std::optional<json> naturality_failure(const IntLocalePresentation& P, const std::vector<EndoMap>& j, ArrowId g) {
  const FinCategory& C = *P.base;
  ObjId c = C.src(g), d = C.dst(g);
  for (Elem V = 0; V < P.fibre(d).size(); ++V)
    if (P.inv(g, j[d][V]) != j[c][P.inv(g, V)])
      return json{{"arrow", C.arrow_name(g)}, {"element", P.fibre(d).name(V)}};
  return std::nullopt;
}

InternalNucleus validate_family(PresentationPtr P, std::vector<EndoMap> components, bool idempotent) {
  const FinCategory& C = *P->base;
  if (components.size() != C.num_objects())
    fail(ErrorKind::NotANucleus, "one component per object is required");
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    auto w = idempotent ? nucleus_violation(P->fibre(c), components[c]) : prenucleus_violation(P->fibre(c), components[c]);
    if (w) {
      (*w)["object"] = C.object_name(c);
      fail(idempotent ? ErrorKind::NotANucleus : ErrorKind::NotAPreNucleus, "component fails the axioms", *w);
    }
  }
  for (ArrowId g = 0; g < C.num_arrows(); ++g)
    if (auto w = naturality_failure(*P, components, g)) fail(ErrorKind::NotNatural, "family is not natural", *w);
  return {std::move(P), std::move(components)};
}

}  // namespace

InternalNucleus validate_internal_nucleus(PresentationPtr P, std::vector<EndoMap> components) {
  return validate_family(std::move(P), std::move(components), true);
}

InternalNucleus validate_internal_prenucleus(PresentationPtr P, std::vector<EndoMap> components) {
  return validate_family(std::move(P), std::move(components), false);
}

InternalNucleus identity_nucleus(PresentationPtr P) {
  std::vector<EndoMap> comps;
  for (const auto& L : P->fibres) comps.push_back(identity_map(*L));
  return {std::move(P), comps};
}

InternalNucleus top_nucleus(PresentationPtr P) {
  std::vector<EndoMap> comps;
  for (const auto& L : P->fibres) comps.push_back(top_map(*L));
  return {std::move(P), comps};
}

std::vector<InternalNucleus> enumerate_internal_nuclei(PresentationPtr P, const Budget& budget) {
  const FinCategory& C = *P->base;
  const std::size_t n = C.num_objects();
  std::vector<std::vector<EndoMap>> cands;
  for (ObjId c = 0; c < n; ++c) cands.push_back(enumerate_nuclei(P->fibre(c), budget.maps));
  std::vector<std::vector<ArrowId>> ready(n);
  for (ArrowId g = 0; g < C.num_arrows(); ++g) ready[std::max(C.src(g), C.dst(g))].push_back(g);

  std::vector<InternalNucleus> out;
  std::vector<EndoMap> j(n);
  std::size_t nodes = 0;
  std::function<void(ObjId)> rec = [&](ObjId c) {
    if (c == n) {
      out.push_back({P, j});
      return;
    }
    for (const auto& k : cands[c]) {
      if (++nodes > budget.maps) fail(ErrorKind::BudgetExceeded, "internal nucleus enumeration budget exceeded");
      j[c] = k;
      bool ok = true;
      for (ArrowId g : ready[c])
        if (naturality_failure(*P, j, g)) {
          ok = false;
          break;
        }
      if (ok) rec(c + 1);
    }
  };
  rec(0);
  return out;
}

InternalNucleus internal_nucleation(PresentationPtr P, const std::vector<EndoMap>& prenucleus) {
  InternalNucleus p = validate_internal_prenucleus(P, prenucleus);
  std::vector<EndoMap> comps;
  for (ObjId c = 0; c < P->fibres.size(); ++c) comps.push_back(nucleation(P->fibre(c), p.components[c]).result);
  return validate_internal_nucleus(P, comps);
}

// ---- sublocales ---------------------------------------------------------------------------------

Sublocale sublocale_of(const InternalNucleus& j, const Budget& budget) {
  const IntLocalePresentation& P = *j.P;
  const FinCategory& C = *P.base;
  Sublocale out;
  std::vector<std::vector<std::int64_t>> pos(C.num_objects());
  std::vector<FramePtr> fibres;
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    auto& fx = out.fixed.emplace_back();
    pos[c].assign(P.fibre(c).size(), -1);
    for (Elem U = 0; U < P.fibre(c).size(); ++U)
      if (j.components[c][U] == U) {
        pos[c][U] = static_cast<std::int64_t>(fx.size());
        fx.push_back(U);
      }
    fibres.push_back(subposet_frame(P.fibre(c), fx));
  }
  std::vector<std::vector<Elem>> tr(C.num_arrows());
  for (ArrowId g = 0; g < C.num_arrows(); ++g)
    for (Elem V : out.fixed[C.dst(g)]) {
      std::int64_t p = pos[C.src(g)][P.inv(g, V)];
      if (p < 0) fail(ErrorKind::NotNatural, "transition leaves the fixed points", {{"arrow", C.arrow_name(g)}});
      tr[g].push_back(static_cast<Elem>(p));
    }
  out.presentation = validate_presentation(P.base, fibres, tr);

  // left adjoints of the restricted transitions are j_d . exists_g
  for (ArrowId g = 0; g < C.num_arrows(); ++g) {
    ObjId c = C.src(g), d = C.dst(g);
    for (Elem i = 0; i < out.fixed[c].size(); ++i) {
      Elem expect = j.components[d][P.ex(g, out.fixed[c][i])];
      if (out.fixed[d][out.presentation->ex(g, i)] != expect)
        fail(ErrorKind::InternalInconsistency, "sublocale left adjoint differs from j.exists",
             {{"arrow", C.arrow_name(g)}, {"element", P.fibre(c).name(out.fixed[c][i])}});
    }
  }
  out.rbc = check_relative_BC(out.presentation, budget, OracleMode::never);

  std::vector<std::vector<Elem>> comps(C.num_objects());
  for (ObjId c = 0; c < C.num_objects(); ++c)
    for (Elem U = 0; U < P.fibre(c).size(); ++U) comps[c].push_back(static_cast<Elem>(pos[c][j.components[c][U]]));
  out.embedding = validate_morphism(out.presentation, j.P, comps);
  return out;
}

InternalNucleus nucleus_of_embedding(const IntLocaleMorphism& f) {
  std::vector<EndoMap> comps;
  for (const auto& h : f.f_inv) {
    auto ra = right_adjoint(h);
    EndoMap m(h.map.size());
    for (Elem U = 0; U < m.size(); ++U) m[U] = ra[h.map[U]];
    comps.push_back(std::move(m));
  }
  return validate_internal_nucleus(f.target, comps);
}

// ---- Lawvere-Tierney ------------------------------------------------------------------------------

namespace {

struct CarrierIndex {
  std::vector<std::vector<Elem>> carriers;
  std::vector<std::vector<std::int64_t>> pos;

  Elem at(ObjId x, Elem V) const { return static_cast<Elem>(pos[x][V]); }
};

CarrierIndex carrier_index(const IntLocalePresentation& P, const GrothendieckConstruction& gc) {
  CarrierIndex ci{omega_carriers(P, gc), {}};
  for (ObjId x = 0; x < ci.carriers.size(); ++x) {
    ci.pos.emplace_back(P.fibre(gc.base_object(x)).size(), -1);
    for (Elem i = 0; i < ci.carriers[x].size(); ++i) ci.pos[x][ci.carriers[x][i]] = i;
  }
  return ci;
}

// Omega-presheaf transition along a: x -> y, W |-> g^{-1} W meet U, on carrier positions.
Elem omega_transition(const IntLocalePresentation& P, const GrothendieckConstruction& gc, const CarrierIndex& ci,
                      ArrowId a, Elem w) {
  const FinCategory& T = *gc.cat();
  ObjId x = T.src(a), y = T.dst(a);
  const FinFrame& Lc = P.fibre(gc.base_object(x));
  return ci.at(x, Lc.meet(P.inv(gc.base_arrow(a), ci.carriers[y][w]), gc.element(x)));
}

std::optional<json> lt_naturality_failure(const IntLocalePresentation& P, const GrothendieckConstruction& gc,
                                          const CarrierIndex& ci, const std::vector<EndoMap>& j, ArrowId a) {
  const FinCategory& T = *gc.cat();
  ObjId x = T.src(a), y = T.dst(a);
  for (Elem w = 0; w < ci.carriers[y].size(); ++w)
    if (j[x][omega_transition(P, gc, ci, a, w)] != omega_transition(P, gc, ci, a, j[y][w]))
      return json{{"law", "natural"},
                  {"arrow", T.arrow_name(a)},
                  {"element", P.fibre(gc.base_object(y)).name(ci.carriers[y][w])}};
  return std::nullopt;
}

}  // namespace

std::vector<std::vector<Elem>> omega_carriers(const IntLocalePresentation& P, const GrothendieckConstruction& gc) {
  std::vector<std::vector<Elem>> out;
  for (ObjId x = 0; x < gc.cat()->num_objects(); ++x) {
    const FinFrame& L = P.fibre(gc.base_object(x));
    auto& cx = out.emplace_back();
    for (Elem V = 0; V < L.size(); ++V)
      if (L.leq(V, gc.element(x))) cx.push_back(V);
  }
  return out;
}

std::optional<json> lt_violation(const IntLocalePresentation& P, const GrothendieckConstruction& gc,
                                 const LTCandidate& j) {
  const FinCategory& T = *gc.cat();
  CarrierIndex ci = carrier_index(P, gc);
  if (j.components.size() != T.num_objects()) return json{{"law", "total"}};
  for (ObjId x = 0; x < T.num_objects(); ++x) {
    const FinFrame& L = P.fibre(gc.base_object(x));
    const auto& car = ci.carriers[x];
    const auto& m = j.components[x];
    auto at = [&](const char* law, Elem w) {
      return json{{"law", law}, {"object", T.object_name(x)}, {"element", L.name(car[w])}};
    };
    if (m.size() != car.size()) return json{{"law", "total"}, {"object", T.object_name(x)}};
    Elem top = ci.at(x, gc.element(x));
    if (m[top] != top) return at("unit", top);
    for (Elem w = 0; w < car.size(); ++w)
      if (m[m[w]] != m[w]) return at("idempotent", w);
    for (Elem u = 0; u < car.size(); ++u)
      for (Elem w = u + 1; w < car.size(); ++w)
        if (car[m[ci.at(x, L.meet(car[u], car[w]))]] != L.meet(car[m[u]], car[m[w]])) return at("meet", u);
  }
  for (ArrowId a = 0; a < T.num_arrows(); ++a)
    if (auto w = lt_naturality_failure(P, gc, ci, j.components, a)) return w;
  return std::nullopt;
}

LTCandidate lt_from_internal_nucleus(const InternalNucleus& k, const GrothendieckConstruction& gc) {
  const IntLocalePresentation& P = *k.P;
  CarrierIndex ci = carrier_index(P, gc);
  LTCandidate out{ci.carriers, {}};
  for (ObjId x = 0; x < ci.carriers.size(); ++x) {
    ObjId c = gc.base_object(x);
    Elem U = gc.element(x);
    auto& m = out.components.emplace_back();
    for (Elem V : ci.carriers[x]) m.push_back(ci.at(x, P.fibre(c).meet(k.components[c][V], U)));
  }
  if (auto w = lt_violation(P, gc, out))
    fail(ErrorKind::InternalInconsistency, "k^f is not a Lawvere-Tierney topology", *w);
  return out;
}

InternalNucleus internal_nucleus_from_lt(PresentationPtr P, const GrothendieckConstruction& gc, const LTCandidate& j) {
  if (auto w = lt_violation(*P, gc, j)) fail(ErrorKind::NotANucleus, "not a Lawvere-Tierney topology", *w);
  std::vector<EndoMap> comps;
  for (ObjId c = 0; c < P->base->num_objects(); ++c) {
    ObjId x = gc.object(c, P->fibre(c).top());
    // the carrier at (c, top) is the whole fibre in element order
    EndoMap m;
    for (Elem w : j.components[x]) m.push_back(j.carriers[x][w]);
    comps.push_back(std::move(m));
  }
  return validate_internal_nucleus(P, comps);
}

std::vector<LTCandidate> enumerate_lt_candidates(const IntLocalePresentation& P, const GrothendieckConstruction& gc,
                                                 const Budget& budget) {
  const FinCategory& T = *gc.cat();
  const std::size_t n = T.num_objects();
  CarrierIndex ci = carrier_index(P, gc);
  std::vector<std::vector<EndoMap>> cands;
  for (ObjId x = 0; x < n; ++x)
    cands.push_back(enumerate_nuclei(*subposet_frame(P.fibre(gc.base_object(x)), ci.carriers[x]), budget.maps));
  std::vector<std::vector<ArrowId>> ready(n);
  for (ArrowId a = 0; a < T.num_arrows(); ++a) ready[std::max(T.src(a), T.dst(a))].push_back(a);

  std::vector<LTCandidate> out;
  std::vector<EndoMap> j(n);
  std::size_t nodes = 0;
  std::function<void(ObjId)> rec = [&](ObjId x) {
    if (x == n) {
      out.push_back({ci.carriers, j});
      return;
    }
    for (const auto& k : cands[x]) {
      if (++nodes > budget.maps) fail(ErrorKind::BudgetExceeded, "Lawvere-Tierney enumeration budget exceeded");
      j[x] = k;
      bool ok = true;
      for (ArrowId a : ready[x])
        if (lt_naturality_failure(P, gc, ci, j, a)) {
          ok = false;
          break;
        }
      if (ok) rec(x + 1);
    }
  };
  rec(0);
  return out;
}

// ---- N(L) -------------------------------------------------------------------------------------

InternalNucleus nuclei_meet(PresentationPtr P, const std::vector<InternalNucleus>& js) {
  std::vector<EndoMap> comps;
  for (ObjId c = 0; c < P->fibres.size(); ++c) {
    std::vector<EndoMap> at;
    for (const auto& j : js) at.push_back(j.components[c]);
    comps.push_back(pointwise_meet(P->fibre(c), at));
  }
  return validate_internal_nucleus(P, comps);
}

InternalNucleus nuclei_join(PresentationPtr P, const std::vector<InternalNucleus>& js) {
  std::vector<EndoMap> comps;
  for (ObjId c = 0; c < P->fibres.size(); ++c) {
    std::vector<EndoMap> at;
    for (const auto& j : js) at.push_back(j.components[c]);
    // the pointwise join need not preserve meets, but it lies between the parts and
    // their composite, so its iteration reaches the nucleation of the composite
    comps.push_back(nucleation(P->fibre(c), pointwise_join(P->fibre(c), at)).result);
  }
  return validate_internal_nucleus(P, comps);
}

FramePtr frame_of_nuclei(const FinFrame& L, const std::vector<EndoMap>& nuclei) {
  std::vector<std::string> names;
  std::vector<std::pair<Elem, Elem>> leq;
  for (Elem a = 0; a < nuclei.size(); ++a) {
    names.push_back("j" + std::to_string(a));
    for (Elem b = 0; b < nuclei.size(); ++b)
      if (pointwise_leq(L, nuclei[a], nuclei[b])) leq.push_back({a, b});
  }
  return FinFrame::from_order(names, leq);
}

bool NucleiFrame::ok() const {
  if (!lattice_ops.ok()) return false;
  for (const auto& r : projection_open)
    if (!r.frobenius || !r.heyting) return false;
  return projections.size() == projection_open.size();
}

NucleiFrame nuclei_frame(PresentationPtr P, const Budget& budget) {
  const FinCategory& C = *P->base;
  NucleiFrame out;
  out.nuclei = enumerate_internal_nuclei(P, budget);
  const auto& N = out.nuclei;
  std::vector<std::string> names;
  std::vector<std::pair<Elem, Elem>> leq;
  for (Elem a = 0; a < N.size(); ++a) {
    names.push_back("j" + std::to_string(a));
    for (Elem b = 0; b < N.size(); ++b) {
      bool le = true;
      for (ObjId c = 0; c < C.num_objects() && le; ++c)
        le = pointwise_leq(P->fibre(c), N[a].components[c], N[b].components[c]);
      if (le) leq.push_back({a, b});
    }
  }
  out.frame = FinFrame::from_order(names, leq);
  const FinFrame& F = *out.frame;

  auto index_of = [&](const InternalNucleus& j) -> std::optional<Elem> {
    auto it = std::find(N.begin(), N.end(), j);
    if (it == N.end()) return std::nullopt;
    return static_cast<Elem>(it - N.begin());
  };
  auto expect = [&](const char* op, const InternalNucleus& got, Elem want, json args) {
    auto i = index_of(got);
    if (!i || *i != want) out.lattice_ops.add_failure({{"op", op}, {"arguments", args}});
  };
  expect("meet", nuclei_meet(P, {}), F.top(), json::array());
  expect("join", nuclei_join(P, {}), F.bottom(), json::array());
  for (Elem a = 0; a < N.size(); ++a)
    for (Elem b = a; b < N.size(); ++b) {
      json args = json::array({F.name(a), F.name(b)});
      expect("meet", nuclei_meet(P, {N[a], N[b]}), F.meet(a, b), args);
      expect("join", nuclei_join(P, {N[a], N[b]}), F.join(a, b), args);
    }

  for (ObjId c = 0; c < C.num_objects(); ++c) {
    out.fibre_nuclei.push_back(enumerate_nuclei(P->fibre(c), budget.maps));
    const auto& Nc = out.fibre_nuclei.back();
    out.fibre_frames.push_back(frame_of_nuclei(P->fibre(c), Nc));
    std::vector<Elem> map;
    for (const auto& j : N)
      map.push_back(static_cast<Elem>(std::find(Nc.begin(), Nc.end(), j.components[c]) - Nc.begin()));
    try {
      out.projections.push_back(validate_frame_hom(out.frame, out.fibre_frames.back(), map));
      out.projection_open.push_back(open_report(out.projections.back()));
    } catch (const Error& e) {
      out.projection_open.push_back({false, false, {{"object", C.object_name(c)}, {"detail", e.witness()}}});
    }
  }
  return out;
}

// ---- factorisation ------------------------------------------------------------------------------

Factorization factorize(const IntLocaleMorphism& f, const Budget& budget) {
  InternalNucleus j = nucleus_of_embedding(f);
  Sublocale mid = sublocale_of(j, budget);
  const FinCategory& C = *f.source->base;
  std::vector<std::vector<Elem>> s_inv(C.num_objects());
  for (ObjId c = 0; c < C.num_objects(); ++c)
    for (Elem U : mid.fixed[c]) s_inv[c].push_back(f(c, U));
  IntLocaleMorphism s = validate_morphism(f.source, mid.presentation, s_inv);
  Factorization out{mid, s, mid.embedding, j, false};
  out.composite_ok = same_morphism(compose_morphisms(out.e, out.s), f);
  return out;
}

}  // namespace locforge
