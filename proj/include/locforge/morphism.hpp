#pragma once

#include <optional>
#include <vector>

#include "locforge/intloc.hpp"

namespace locforge {

// f: source -> target, stored by its inverse image f_inv[c]: target(c) -> source(c).
struct IntLocaleMorphism {
  PresentationPtr source, target;
  std::vector<FrameHom> f_inv;

  Elem operator()(ObjId c, Elem V) const { return f_inv[c].map[V]; }
};

// Throws NotAHom / NotNatural / NotAdjointNatural.
IntLocaleMorphism validate_morphism(PresentationPtr source, PresentationPtr target,
                                    const std::vector<std::vector<Elem>>& f_inv);
IntLocaleMorphism identity_morphism(PresentationPtr L);
IntLocaleMorphism compose_morphisms(const IntLocaleMorphism& g, const IntLocaleMorphism& f);  // g . f
bool same_morphism(const IntLocaleMorphism& a, const IntLocaleMorphism& b);

// (c,U) |-> (c, f_c U) as a functor C x| target -> C x| source.
FinFunctor breve_functor(const IntLocaleMorphism& f, const GrothendieckConstruction& source_gc,
                         const GrothendieckConstruction& target_gc);

struct BreveResult {
  FinFunctor functor;
  Verdict site_morphism;
};

// Sites must carry their extensional K_L.  Throws InternalInconsistency if the
// functor is not a morphism of sites.
BreveResult breve(const IntLocaleMorphism& f, const KLSite& source_site, const KLSite& target_site);

struct SurjectivityReport {
  bool pointwise = false;                 // every component injective
  std::optional<bool> cover_reflecting;   // unset when the sieve budget ran out
  json witness;                           // first non-injective pair / unreflected sieve
  bool agree() const { return !cover_reflecting || *cover_reflecting == pointwise; }
  json to_json() const;
};

SurjectivityReport is_surjective(const IntLocaleMorphism& f, const Budget& budget = {});
// Same, reusing prebuilt sites.
SurjectivityReport is_surjective(const IntLocaleMorphism& f, const KLSite& source_site, const KLSite& target_site);
bool is_embedding(const IntLocaleMorphism& f);

// All morphisms source -> target, lexicographic by object then component table.
std::vector<IntLocaleMorphism> enumerate_morphisms(PresentationPtr source, PresentationPtr target,
                                                   const Budget& budget = {});

struct TerminalResult {
  IntLocaleMorphism morphism;
  bool canonical = false;  // the join-of-images formula validated; otherwise found by search
  std::size_t count = 0;   // number of morphisms L -> Omega
};

// Throws NotInternalLocale; BudgetExceeded from the enumeration.
TerminalResult terminal_into_omega(PresentationPtr L, const Budget& budget = {});

}  // namespace locforge
