#pragma once

#include <optional>
#include <vector>

#include "locforge/morphism.hpp"

namespace locforge {

using EndoMap = std::vector<Elem>;

// First violated axiom as {"axiom", ...}, or nullopt.
std::optional<json> prenucleus_violation(const FinFrame& L, const EndoMap& p);
std::optional<json> nucleus_violation(const FinFrame& L, const EndoMap& j);

struct Nucleus {
  FramePtr frame;
  EndoMap map;
};

Nucleus validate_nucleus(FramePtr L, EndoMap j);     // throws NotANucleus
Nucleus validate_prenucleus(FramePtr L, EndoMap p);  // throws NotAPreNucleus

// Lexicographic in the map table.
std::vector<EndoMap> enumerate_nuclei(const FinFrame& L, std::size_t budget = Budget{}.maps);
std::vector<EndoMap> enumerate_prenuclei(const FinFrame& L, std::size_t budget = Budget{}.maps);

struct Nucleation {
  EndoMap result;
  std::vector<EndoMap> stages;  // p^0 = id, p^1 = p, ..., last = result
};

// Iterates an inflationary monotone p pointwise; the number of stages never exceeds
// the frame height + 1.
Nucleation nucleation(const FinFrame& L, const EndoMap& p);

EndoMap pointwise_meet(const FinFrame& L, const std::vector<EndoMap>& maps);  // empty: constant top
EndoMap pointwise_join(const FinFrame& L, const std::vector<EndoMap>& maps);  // empty: identity
bool pointwise_leq(const FinFrame& L, const EndoMap& a, const EndoMap& b);
EndoMap identity_map(const FinFrame& L);
EndoMap top_map(const FinFrame& L);

// ---- internal nuclei ----------------------------------------------------------------------

struct InternalNucleus {
  PresentationPtr P;
  std::vector<EndoMap> components;

  bool operator==(const InternalNucleus& o) const { return components == o.components; }
};

// Throws NotANucleus / NotAPreNucleus / NotNatural with (object | arrow, element).
InternalNucleus validate_internal_nucleus(PresentationPtr P, std::vector<EndoMap> components);
InternalNucleus validate_internal_prenucleus(PresentationPtr P, std::vector<EndoMap> components);
InternalNucleus identity_nucleus(PresentationPtr P);
InternalNucleus top_nucleus(PresentationPtr P);

// Natural families of per-fibre nuclei, lexicographic by object.
std::vector<InternalNucleus> enumerate_internal_nuclei(PresentationPtr P, const Budget& budget = {});
InternalNucleus internal_nucleation(PresentationPtr P, const std::vector<EndoMap>& prenucleus);

struct Sublocale {
  PresentationPtr presentation;      // L^j
  std::vector<std::vector<Elem>> fixed;  // fixed points of j_c, as elements of L(c)
  IntLocaleMorphism embedding;       // L^j -> L, inverse image U |-> j_c U
  RBCResult rbc;
};

Sublocale sublocale_of(const InternalNucleus& j, const Budget& budget = {});
// f_* . f^{-1} on the target.  A nucleus for any f; the bijection with sublocales needs an embedding.
InternalNucleus nucleus_of_embedding(const IntLocaleMorphism& f);

// ---- Lawvere-Tierney candidates on the Omega-presheaf of C x| L ----------------------------

struct LTCandidate {
  // components[x] acts on the carrier {V <= U} of x = (c,U), indexed by positions in carriers[x]
  std::vector<std::vector<Elem>> carriers;
  std::vector<EndoMap> components;

  bool operator==(const LTCandidate& o) const { return components == o.components; }
};

std::vector<std::vector<Elem>> omega_carriers(const IntLocalePresentation& P, const GrothendieckConstruction& gc);
std::optional<json> lt_violation(const IntLocalePresentation& P, const GrothendieckConstruction& gc,
                                 const LTCandidate& j);
// k^f at (c,U): V |-> k_c(V) meet U
LTCandidate lt_from_internal_nucleus(const InternalNucleus& k, const GrothendieckConstruction& gc);
// components at (c, top)
InternalNucleus internal_nucleus_from_lt(PresentationPtr P, const GrothendieckConstruction& gc, const LTCandidate& j);
// Natural families of per-object nuclei on the carriers (independent of the formula above).
std::vector<LTCandidate> enumerate_lt_candidates(const IntLocalePresentation& P, const GrothendieckConstruction& gc,
                                                 const Budget& budget = {});

// ---- the frame N(L) -------------------------------------------------------------------------

InternalNucleus nuclei_meet(PresentationPtr P, const std::vector<InternalNucleus>& js);
InternalNucleus nuclei_join(PresentationPtr P, const std::vector<InternalNucleus>& js);

struct NucleiFrame {
  std::vector<InternalNucleus> nuclei;  // element i of the frame
  FramePtr frame;
  Verdict lattice_ops;                  // binary meet/join agree with nuclei_meet/nuclei_join
  std::vector<std::vector<EndoMap>> fibre_nuclei;  // N(L_c) per object
  std::vector<FramePtr> fibre_frames;
  std::vector<FrameHom> projections;    // pi_c: N(L) -> N(L_c)
  std::vector<OpenReport> projection_open;

  bool ok() const;
};

NucleiFrame nuclei_frame(PresentationPtr P, const Budget& budget = {});
// N(L) for a single frame, ordered pointwise.
FramePtr frame_of_nuclei(const FinFrame& L, const std::vector<EndoMap>& nuclei);

// ---- factorisation ----------------------------------------------------------------------------

struct Factorization {
  Sublocale middle;
  IntLocaleMorphism s;  // source -> middle, injective components
  IntLocaleMorphism e;  // middle -> target, surjective components
  InternalNucleus nucleus;
  bool composite_ok = false;
};

Factorization factorize(const IntLocaleMorphism& f, const Budget& budget = {});

}  // namespace locforge
