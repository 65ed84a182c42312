#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "locforge/fincat.hpp"
#include "locforge/frame.hpp"
#include "locforge/sites.hpp"

namespace locforge {

// Contravariant functor from the base to frames and open maps: g: c -> d
// carries g^{-1}: L(d) -> L(c) together with its left adjoint exists_g.
class IntLocalePresentation {
 public:
  CategoryPtr base;
  std::vector<FramePtr> fibres;
  std::vector<OpenFrameHom> transitions;

  const FinFrame& fibre(ObjId c) const { return *fibres[c]; }
  Elem inv(ArrowId g, Elem V) const { return transitions[g].hom.map[V]; }
  Elem ex(ArrowId g, Elem U) const { return transitions[g].exists[U]; }
  IndexedPoset indexed_poset() const;
};

using PresentationPtr = std::shared_ptr<const IntLocalePresentation>;

// transitions[g] maps fibre(dst g) -> fibre(src g); identities must be identity maps.
// Throws NotFunctorial / NotOpen / NotAHom.
PresentationPtr validate_presentation(CategoryPtr base, std::vector<FramePtr> fibres,
                                      const std::vector<std::vector<Elem>>& transitions);
PresentationPtr constant_presentation(CategoryPtr base, FramePtr L);
bool same_presentation(const IntLocalePresentation& a, const IntLocalePresentation& b);

// The site (C x| L, K_L).  Sieves and the extensional K_L are only built on demand.
struct KLSite {
  PresentationPtr P;
  GrothendieckConstruction gc;
  std::shared_ptr<const SieveSpace> space;
  std::shared_ptr<const GrothendieckTopology> K;
};

KLSite build_kl_site(PresentationPtr P, const Budget& budget = {}, bool with_topology = true);

struct CoverClaim {
  ObjId object;  // (d, V) in C x| L
  Sieve sieve;
};

// V equals the join over S of exists_f U.
bool is_KL_covering(const IntLocalePresentation& P, const GrothendieckConstruction& gc, const Sieve& S);
Elem cover_join(const IntLocalePresentation& P, const GrothendieckConstruction& gc, const Sieve& S);

struct GeneratingCovers {
  std::vector<std::vector<ArrowId>> species_a;  // singletons (c,U) -> (d, exists_f U)
  std::vector<std::vector<ArrowId>> species_b;  // vertical families with join V
};
GeneratingCovers generating_covers(const IntLocalePresentation& P, const GrothendieckConstruction& gc, ObjId x,
                                   std::size_t budget = Budget{}.maps);

struct RBCResult {
  Verdict verdict;             // primary verdict; witness (h, S)
  bool primary = false;
  std::optional<bool> oracle;    // verbatim definition over all sieves
  std::optional<bool> topology;  // K_L passes the topology axioms
  bool oracle_budget_exceeded = false;

  json to_json() const;
};

RBCResult check_relative_BC(PresentationPtr P, const Budget& budget = {},
                            OracleMode mode = OracleMode::automatic);
// The two strategies on their own (used by tests and by check_relative_BC).
std::optional<json> rbc_primary_witness(const IntLocalePresentation& P, const GrothendieckConstruction& gc);
std::optional<json> rbc_oracle_witness(const IntLocalePresentation& P, const KLSite& site);

struct PullbackSquare {
  ArrowId k, g, f, h;  // k: P -> c, g: P -> d, f: c -> e, h: d -> e
};
std::vector<PullbackSquare> pullback_squares(const FinCategory& C, ArrowId f, ArrowId h);
Verdict check_BC_pullbacks(const IntLocalePresentation& P);

// Sieve frames with pullback transitions.
PresentationPtr omega_presentation(CategoryPtr C, std::size_t budget = Budget{}.sieves);

struct OmegaSheaf {
  Presheaf presheaf;  // on C x| L
  Verdict sheaf;
};
// Throws NotInternalLocale when P fails relative BC.
OmegaSheaf omega_sheaf_of(const KLSite& site, const Budget& budget = {});

struct GlueResult {
  PresentationPtr glued;
  Verdict verdict;  // parts pass relative BC and the embeddings are disjoint open embeddings
  RBCResult glued_rbc;
  bool agree = false;
};

std::optional<ObjId> terminal_object(const FinCategory& C);
// embeddings[i]: middle -> fibre of part i at its terminal object.
GlueResult glue(const std::vector<PresentationPtr>& parts, FramePtr middle,
                const std::vector<std::vector<Elem>>& embeddings, const Budget& budget = {});

struct MonoidResult {
  PresentationPtr presentation;
  Verdict divisor;
  RBCResult rbc;
  bool agree = false;
};

// action[m] is m^{-1}: L -> L for every arrow m (identity included).  Throws NotAnAction.
MonoidResult from_monoid_action(CategoryPtr M, FramePtr L, const std::vector<std::vector<Elem>>& action,
                                const Budget& budget = {});

struct SheafInternalResult {
  Verdict fibres_sheaf;  // (a)
  Verdict giraud;        // (b) J_p contained in K_L
  bool agree = false;
};

SheafInternalResult check_sheaf_internal(const KLSite& site, const GrothendieckTopology& J,
                                         const Budget& budget = {});

// The fibres as a presheaf on the base (carriers = frame elements).
Presheaf fibre_presheaf(const IntLocalePresentation& P);

}  // namespace locforge
