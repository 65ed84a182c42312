#include "locforge/morphism.hpp"

#include <functional>

namespace locforge {

namespace {

// First failure of naturality or adjoint naturality along g, or nullopt.
std::optional<json> square_failure(const IntLocalePresentation& L1, const IntLocalePresentation& L2,
                                   const std::vector<std::vector<Elem>>& f, ArrowId g) {
  const FinCategory& C = *L1.base;
  ObjId c = C.src(g), d = C.dst(g);
  for (Elem V = 0; V < L2.fibre(d).size(); ++V)
    if (L1.inv(g, f[d][V]) != f[c][L2.inv(g, V)])
      return json{{"kind", "NotNatural"}, {"arrow", C.arrow_name(g)}, {"element", L2.fibre(d).name(V)}};
  for (Elem U = 0; U < L2.fibre(c).size(); ++U)
    if (L1.ex(g, f[c][U]) != f[d][L2.ex(g, U)])
      return json{{"kind", "NotAdjointNatural"}, {"arrow", C.arrow_name(g)}, {"element", L2.fibre(c).name(U)}};
  return std::nullopt;
}

void require_same_base(const IntLocalePresentation& a, const IntLocalePresentation& b) {
  const FinCategory& A = *a.base;
  const FinCategory& B = *b.base;
  bool same = A.num_objects() == B.num_objects() && A.num_arrows() == B.num_arrows();
  for (ObjId c = 0; same && c < A.num_objects(); ++c) same = A.object_name(c) == B.object_name(c);
  for (ArrowId g = 0; same && g < A.num_arrows(); ++g) same = A.arrow_name(g) == B.arrow_name(g);
  if (!same) fail(ErrorKind::MalformedDocument, "source and target presentations have different bases");
}

}  // namespace

IntLocaleMorphism validate_morphism(PresentationPtr source, PresentationPtr target,
                                    const std::vector<std::vector<Elem>>& f_inv) {
  require_same_base(*source, *target);
  const FinCategory& C = *source->base;
  if (f_inv.size() != C.num_objects()) fail(ErrorKind::NotAHom, "one component per object is required");
  IntLocaleMorphism f{source, target, {}};
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    try {
      f.f_inv.push_back(validate_frame_hom(target->fibres[c], source->fibres[c], f_inv[c]));
    } catch (const Error& e) {
      fail(e.kind(), std::string(e.what()) + " (component at " + C.object_name(c) + ")",
           {{"object", C.object_name(c)}, {"detail", e.witness()}});
    }
  }
  for (ArrowId g = 0; g < C.num_arrows(); ++g)
    if (auto w = square_failure(*source, *target, f_inv, g)) {
      bool nat = (*w)["kind"] == "NotNatural";
      fail(nat ? ErrorKind::NotNatural : ErrorKind::NotAdjointNatural,
           nat ? "components are not natural" : "components do not commute with the left adjoints", *w);
    }
  return f;
}

IntLocaleMorphism identity_morphism(PresentationPtr L) {
  IntLocaleMorphism f{L, L, {}};
  for (const auto& F : L->fibres) f.f_inv.push_back(identity_hom(F));
  return f;
}

IntLocaleMorphism compose_morphisms(const IntLocaleMorphism& g, const IntLocaleMorphism& f) {
  IntLocaleMorphism h{f.source, g.target, {}};
  for (std::size_t c = 0; c < f.f_inv.size(); ++c) h.f_inv.push_back(compose_homs(f.f_inv[c], g.f_inv[c]));
  return h;
}

bool same_morphism(const IntLocaleMorphism& a, const IntLocaleMorphism& b) {
  if (a.f_inv.size() != b.f_inv.size()) return false;
  for (std::size_t c = 0; c < a.f_inv.size(); ++c)
    if (a.f_inv[c].map != b.f_inv[c].map) return false;
  return true;
}

FinFunctor breve_functor(const IntLocaleMorphism& f, const GrothendieckConstruction& source_gc,
                         const GrothendieckConstruction& target_gc) {
  const FinCategory& T = *target_gc.cat();
  std::vector<ObjId> ob;
  std::vector<ArrowId> ar;
  for (ObjId x = 0; x < T.num_objects(); ++x) {
    ObjId c = target_gc.base_object(x);
    ob.push_back(source_gc.object(c, f(c, target_gc.element(x))));
  }
  for (ArrowId a = 0; a < T.num_arrows(); ++a) {
    ArrowId g = target_gc.base_arrow(a);
    auto lifted = source_gc.lift(g, source_gc.element(ob[T.src(a)]), source_gc.element(ob[T.dst(a)]));
    if (!lifted) fail(ErrorKind::NotNatural, "breve does not act on arrows", {{"arrow", T.arrow_name(a)}});
    ar.push_back(*lifted);
  }
  return validate_functor(target_gc.cat(), source_gc.cat(), ob, ar);
}

BreveResult breve(const IntLocaleMorphism& f, const KLSite& source_site, const KLSite& target_site) {
  if (!source_site.K || !target_site.K) fail(ErrorKind::InternalInconsistency, "breve needs the extensional K_L");
  BreveResult r{breve_functor(f, source_site.gc, target_site.gc), {}};
  r.site_morphism = check_morphism_of_sites(r.functor, *target_site.K, *source_site.K);
  if (!r.site_morphism.ok())
    fail(ErrorKind::InternalInconsistency, "breve(f) is not a morphism of sites", r.site_morphism.to_json());
  return r;
}

// ---- surjections and embeddings -------------------------------------------------------------

json SurjectivityReport::to_json() const {
  return {{"pointwise_injective", pointwise},
          {"cover_reflecting", cover_reflecting ? json(*cover_reflecting) : json(nullptr)},
          {"agree", agree()},
          {"witness", witness}};
}

SurjectivityReport is_surjective(const IntLocaleMorphism& f, const KLSite& source_site, const KLSite& target_site) {
  const FinCategory& C = *f.source->base;
  SurjectivityReport r;
  r.pointwise = true;
  for (ObjId c = 0; c < C.num_objects() && r.pointwise; ++c) {
    const auto& m = f.f_inv[c].map;
    for (Elem a = 0; a < m.size() && r.pointwise; ++a)
      for (Elem b = a + 1; b < m.size() && r.pointwise; ++b)
        if (m[a] == m[b]) {
          r.pointwise = false;
          const FinFrame& L2 = f.target->fibre(c);
          r.witness = {{"object", C.object_name(c)}, {"identified", json::array({L2.name(a), L2.name(b)})}};
        }
  }
  if (!target_site.space) return r;

  FinFunctor F = breve_functor(f, source_site.gc, target_site.gc);
  const FinCategory& T = *target_site.gc.cat();
  bool reflects = true;
  json cover_w;
  for (ObjId x = 0; x < T.num_objects() && reflects; ++x)
    for (const auto& S : target_site.space->on(x)) {
      if (is_KL_covering(*f.target, target_site.gc, S)) continue;
      if (is_KL_covering(*f.source, source_site.gc, image_sieve(F, S))) {
        reflects = false;
        cover_w = {{"object", T.object_name(x)}, {"sieve", sieve_to_json(T, S)}};
        break;
      }
    }
  r.cover_reflecting = reflects;
  if (r.pointwise && !reflects) r.witness = cover_w;
  return r;
}

SurjectivityReport is_surjective(const IntLocaleMorphism& f, const Budget& budget) {
  KLSite s1 = build_kl_site(f.source, budget, false);
  KLSite s2 = build_kl_site(f.target, budget, false);
  try {
    s2.space = std::make_shared<SieveSpace>(SieveSpace::build(s2.gc.cat(), budget.sieves));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
  }
  return is_surjective(f, s1, s2);
}

bool is_embedding(const IntLocaleMorphism& f) {
  for (std::size_t c = 0; c < f.f_inv.size(); ++c)
    if (!is_surjective(f.f_inv[c].map, f.source->fibres[c]->size())) return false;
  return true;
}

// ---- enumeration ----------------------------------------------------------------------------------

std::vector<IntLocaleMorphism> enumerate_morphisms(PresentationPtr source, PresentationPtr target,
                                                   const Budget& budget) {
  require_same_base(*source, *target);
  const FinCategory& C = *source->base;
  const std::size_t n = C.num_objects();
  std::vector<std::vector<FrameHom>> cands;
  for (ObjId c = 0; c < n; ++c) cands.push_back(enumerate_frame_homs(target->fibres[c], source->fibres[c], budget.maps));

  // arrows whose endpoints are both assigned once object c is
  std::vector<std::vector<ArrowId>> ready(n);
  for (ArrowId g = 0; g < C.num_arrows(); ++g) ready[std::max(C.src(g), C.dst(g))].push_back(g);

  std::vector<IntLocaleMorphism> out;
  std::vector<std::vector<Elem>> f(n);
  std::size_t nodes = 0;
  std::function<void(ObjId)> rec = [&](ObjId c) {
    if (c == n) {
      IntLocaleMorphism m{source, target, {}};
      for (ObjId d = 0; d < n; ++d) m.f_inv.push_back({target->fibres[d], source->fibres[d], f[d]});
      out.push_back(std::move(m));
      return;
    }
    for (const auto& h : cands[c]) {
      if (++nodes > budget.maps) fail(ErrorKind::BudgetExceeded, "morphism enumeration budget exceeded");
      f[c] = h.map;
      bool ok = true;
      for (ArrowId g : ready[c])
        if (square_failure(*source, *target, f, g)) {
          ok = false;
          break;
        }
      if (ok) rec(c + 1);
    }
  };
  rec(0);
  return out;
}

TerminalResult terminal_into_omega(PresentationPtr L, const Budget& budget) {
  if (auto w = rbc_primary_witness(*L, GrothendieckConstruction::build(L->indexed_poset(), budget)))
    fail(ErrorKind::NotInternalLocale, "presentation fails relative Beck-Chevalley", *w);
  const FinCategory& C = *L->base;
  PresentationPtr Om = omega_presentation(L->base, budget.sieves);

  // S |-> join over g in S of exists_g(top)
  std::vector<std::vector<Elem>> comp(C.num_objects());
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    const FinFrame& Lc = L->fibre(c);
    auto sieves = sieves_on(C, c, budget.sieves);
    for (const auto& S : sieves) {
      Elem acc = Lc.bottom();
      for (ArrowId g : sieve_arrows(C, S)) acc = Lc.join(acc, L->ex(g, L->fibre(C.src(g)).top()));
      comp[c].push_back(acc);
    }
  }
  auto all = enumerate_morphisms(L, Om, budget);
  TerminalResult r{identity_morphism(L), false, all.size()};
  try {
    r.morphism = validate_morphism(L, Om, comp);
    r.canonical = true;
  } catch (const Error&) {
    if (all.empty()) fail(ErrorKind::InternalInconsistency, "no morphism into Omega");
    r.morphism = all.front();
  }
  return r;
}

}  // namespace locforge
