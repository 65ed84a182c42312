#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "locforge/fincat.hpp"

namespace locforge {

// Every sieve of a category, per object, with an index for lookups.
class SieveSpace {
 public:
  static SieveSpace build(CategoryPtr C, std::size_t budget = Budget{}.sieves);

  const CategoryPtr& cat() const { return cat_; }
  const std::vector<Sieve>& on(ObjId c) const { return sieves_[c]; }
  std::optional<std::size_t> index_of(const Sieve& S) const;

 private:
  CategoryPtr cat_;
  std::vector<std::vector<Sieve>> sieves_;
  std::vector<std::unordered_map<Bits, std::size_t>> index_;
};

// Extensional topology: a set of covering sieves per object.
class GrothendieckTopology {
 public:
  explicit GrothendieckTopology(CategoryPtr C);

  const CategoryPtr& cat() const { return cat_; }
  bool add(const Sieve& S);  // true if new
  bool covers(const Sieve& S) const { return sets_[S.base].count(S.arrows) != 0; }
  // Covering sieves on c, in insertion order.
  const std::vector<Sieve>& covering(ObjId c) const { return lists_[c]; }
  // Is some covering sieve on c contained in T?
  bool has_cover_inside(ObjId c, const Bits& T) const;
  // Covering sieves sorted in the canonical sieve order of the space.
  std::vector<Sieve> canonical_covering(ObjId c, const SieveSpace& space) const;
  bool operator==(const GrothendieckTopology& o) const;

 private:
  CategoryPtr cat_;
  std::vector<std::unordered_set<Bits>> sets_;
  std::vector<std::vector<Sieve>> lists_;
};

GrothendieckTopology trivial_topology(CategoryPtr C);

// Checks maximality, stability and transitivity; witnesses carry "axiom".
Verdict topology_axioms(const GrothendieckTopology& J, const SieveSpace& space);
// Throws NotMaximal / NotStable / NotTransitive.
GrothendieckTopology validate_topology(CategoryPtr C, const std::vector<Sieve>& covers,
                                       const SieveSpace& space);
// Least topology containing the generators.
GrothendieckTopology topology_closure(const SieveSpace& space, const std::vector<Sieve>& generators);

Verdict check_comorphism(const FinFunctor& F, const GrothendieckTopology& J, const GrothendieckTopology& K);
Verdict check_morphism_of_sites(const FinFunctor& F, const GrothendieckTopology& J, const GrothendieckTopology& K);

// Giraud topology of F against (D, K): closure of the sieves forced by cover lifting.
GrothendieckTopology giraud_topology(const FinFunctor& F, const GrothendieckTopology& K, const SieveSpace& source_space);

// ---- presheaves and sheaves ------------------------------------------------------------

struct Presheaf {
  CategoryPtr cat;
  std::vector<std::vector<std::string>> names;  // carrier of each object
  std::vector<std::vector<Elem>> transition;    // f: c -> d gives P(d) -> P(c)

  std::size_t size(ObjId c) const { return names[c].size(); }
};

// Throws NotFunctorial.
Presheaf validate_presheaf(CategoryPtr C, std::vector<std::vector<std::string>> names,
                           std::vector<std::vector<Elem>> transition);

// Every matching family for every covering sieve has exactly one amalgamation.
Verdict check_sheaf(const Presheaf& P, const GrothendieckTopology& J, std::size_t budget = Budget{}.maps);

// ---- comma sites and the mixing square ---------------------------------------------------

struct CommaSite {
  CommaCategory comma;
  GrothendieckTopology topology;  // sieves whose pi_D-image generates a K-cover
  Verdict axioms, pi_C_comorphism, i_F_morphism, pi_D_morphism, pi_D_comorphism;

  bool ok() const;
};

CommaSite comma_site(const FinFunctor& F, const GrothendieckTopology& J, const GrothendieckTopology& K,
                     const Budget& budget = {});

// Strict cartesian lifts for every (object, arrow into its image).
Verdict check_fibration(const FinFunctor& A);

struct MixingSquare {
  CommaSite left, right;  // (1_D | F) and (1_F | G)
  FinFunctor H;
  Verdict hypotheses;  // fibrations, (co)morphisms, naturality of the iso
  Verdict comorphism;  // H as a comorphism between the comma sites
  Verdict square;      // pi_E.H = A.pi_C and pi_F.H = B.pi_D

  bool ok() const { return hypotheses.ok() && comorphism.ok() && square.ok(); }
};

// A: C -> E, B: D -> F, F: C -> D, G: E -> F with iso[c]: B(F(c)) -> G(A(c)).
MixingSquare mixing_square(const FinFunctor& A, const FinFunctor& B, const FinFunctor& F, const FinFunctor& G,
                           const GrothendieckTopology& J, const GrothendieckTopology& K,
                           const GrothendieckTopology& L, const GrothendieckTopology& M,
                           const std::vector<ArrowId>& iso, const Budget& budget = {});

}  // namespace locforge
