#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "locforge/error.hpp"
#include "locforge/types.hpp"

namespace locforge {

struct Arrow {
  std::string name;
  ObjId src;
  ObjId dst;
};

// Category as given in a document: identities are implicit and named "id:<object>".
struct RawCategory {
  struct RawArrow {
    std::string name, src, dst;
  };
  struct RawComposite {
    std::string g, f, h;  // g.f = h
  };
  std::vector<std::string> objects;
  std::vector<RawArrow> arrows;
  std::vector<RawComposite> compose;
};

// Finite category with globally indexed arrows.  Arrows into an object are
// kept in ascending id order; the position of an arrow in that list is its
// "local index", which is what sieve bitsets are indexed by.
class FinCategory {
 public:
  using ComposeFn = std::function<ArrowId(ArrowId g, ArrowId f)>;

  // compose is called once for each composable pair (g, f) with dst(f) == src(g).
  static std::shared_ptr<const FinCategory> build(std::vector<std::string> objects,
                                                  std::vector<Arrow> arrows,
                                                  std::vector<ArrowId> identity,
                                                  const ComposeFn& compose,
                                                  bool check_associativity = true);

  std::size_t num_objects() const { return objects_.size(); }
  std::size_t num_arrows() const { return arrows_.size(); }

  const std::string& object_name(ObjId c) const { return objects_[c]; }
  const Arrow& arrow(ArrowId f) const { return arrows_[f]; }
  const std::string& arrow_name(ArrowId f) const { return arrows_[f].name; }
  ObjId src(ArrowId f) const { return arrows_[f].src; }
  ObjId dst(ArrowId f) const { return arrows_[f].dst; }
  ArrowId identity(ObjId c) const { return identity_[c]; }
  bool is_identity(ArrowId f) const { return identity_[arrows_[f].src] == f; }

  // g . f, defined when dst(f) == src(g).
  ArrowId compose(ArrowId g, ArrowId f) const { return comp_[g][local_[f]]; }

  const std::vector<ArrowId>& into(ObjId c) const { return into_[c]; }
  const std::vector<ArrowId>& out_of(ObjId c) const { return out_[c]; }
  std::vector<ArrowId> hom(ObjId a, ObjId b) const;
  std::size_t local_index(ArrowId f) const { return local_[f]; }

  std::optional<ObjId> find_object(std::string_view name) const;
  std::optional<ArrowId> find_arrow(std::string_view name) const;

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<ArrowId> identity_;
  std::vector<std::vector<ArrowId>> into_, out_;
  std::vector<std::uint32_t> local_;
  std::vector<std::vector<ArrowId>> comp_;
  std::unordered_map<std::string, ObjId> object_index_;
  std::unordered_map<std::string, ArrowId> arrow_index_;
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

// Validates raw tables: identities first (object order), then arrows in document order.
CategoryPtr validate_category(const RawCategory& raw);

// Small named categories used throughout the tests and fixtures.
CategoryPtr terminal_category();
CategoryPtr wedge_category();        // 1 -f-> 2 <-g- 3
CategoryPtr span_category();         // 1 <-f- 2 -g-> 3
CategoryPtr arrow_category();        // 0 -f-> 1
CategoryPtr chain_category(int n);   // 0 -> 1 -> ... -> n-1 with all composites
CategoryPtr monoid_category(const std::vector<std::string>& names,
                            const std::vector<std::vector<int>>& table);  // element 0 is the unit
CategoryPtr cyclic_group_category(int n);

// ---- sieves ------------------------------------------------------------------

// Bits are indexed by local index into `base`.
struct Sieve {
  ObjId base;
  Bits arrows;

  bool operator==(const Sieve& o) const { return base == o.base && arrows == o.arrows; }
};

Sieve empty_sieve(const FinCategory& C, ObjId c);
Sieve maximal_sieve(const FinCategory& C, ObjId c);
bool is_sieve(const FinCategory& C, const Sieve& S);
bool contains(const FinCategory& C, const Sieve& S, ArrowId f);
std::vector<ArrowId> sieve_arrows(const FinCategory& C, const Sieve& S);
json sieve_to_json(const FinCategory& C, const Sieve& S);

Sieve generate_sieve(const FinCategory& C, ObjId c, const std::vector<ArrowId>& family);
Sieve principal_sieve(const FinCategory& C, ArrowId f);
Sieve pullback_sieve(const FinCategory& C, const Sieve& S, ArrowId h);

// All sieves on c: the empty sieve first, the maximal sieve last, lexicographic
// in between (by deciding arrows in local-index order, "absent" before "present").
std::vector<Sieve> sieves_on(const FinCategory& C, ObjId c, std::size_t budget = Budget{}.sieves);

// ---- functors ----------------------------------------------------------------

struct FinFunctor {
  CategoryPtr source, target;
  std::vector<ObjId> on_objects;
  std::vector<ArrowId> on_arrows;

  ObjId obj(ObjId c) const { return on_objects[c]; }
  ArrowId arr(ArrowId f) const { return on_arrows[f]; }
};

FinFunctor validate_functor(CategoryPtr source, CategoryPtr target, std::vector<ObjId> on_objects,
                            std::vector<ArrowId> on_arrows);
FinFunctor identity_functor(CategoryPtr C);
FinFunctor compose_functors(const FinFunctor& G, const FinFunctor& F);  // G . F
bool same_functor(const FinFunctor& a, const FinFunctor& b);

// Sieve on F(c) generated by the images of the arrows of S.
Sieve image_sieve(const FinFunctor& F, const Sieve& S);

// ---- derived categories --------------------------------------------------------

struct CommaCategory {
  CategoryPtr cat;
  FinFunctor pi_C, pi_D, i_F;
  std::vector<std::pair<ObjId, ArrowId>> objects;  // (c, a: d -> F(c))
  std::vector<std::pair<ArrowId, ArrowId>> parts;  // arrow -> (g, h)

  std::optional<ObjId> find_object(ObjId c, ArrowId a) const;
  std::optional<ArrowId> find_arrow(ObjId x, ObjId y, ArrowId g, ArrowId h) const;
};

// (1_D | F) for F: C -> D.
CommaCategory comma_category(const FinFunctor& F, const Budget& budget = {});

// A contravariant poset-valued functor on a base category.
struct IndexedPoset {
  CategoryPtr base;
  std::vector<std::vector<std::string>> names;          // per object, fibre element names
  std::function<bool(ObjId, Elem, Elem)> leq;            // order in fibre(c)
  std::function<Elem(ArrowId, Elem)> reindex;            // g: c -> d maps fibre(d) -> fibre(c)
  std::vector<Elem> top;
};

// Total category of an indexed poset: objects (c, U); one arrow (c,U) -> (d,V)
// for each g: c -> d with U <= g^{-1}(V).
class GrothendieckConstruction {
 public:
  static GrothendieckConstruction build(const IndexedPoset& P, const Budget& budget = {});

  const CategoryPtr& cat() const { return cat_; }
  const FinFunctor& projection() const { return projection_; }
  const FinFunctor& section() const { return section_; }

  ObjId object(ObjId c, Elem U) const { return offset_[c] + U; }
  ObjId base_object(ObjId x) const { return objects_[x].first; }
  Elem element(ObjId x) const { return objects_[x].second; }
  ArrowId base_arrow(ArrowId a) const { return base_arrow_[a]; }
  // Arrow over base arrow g from (src g, U) to (dst g, V), if U <= g^{-1}V.
  std::optional<ArrowId> lift(ArrowId g, Elem U, Elem V) const;

 private:
  CategoryPtr cat_;
  FinFunctor projection_, section_;
  std::vector<ObjId> offset_;
  std::vector<std::pair<ObjId, Elem>> objects_;
  std::vector<ArrowId> base_arrow_;
  std::vector<std::vector<std::int32_t>> lift_;  // per base arrow, |fib src| x |fib dst|
  std::vector<std::size_t> dst_size_;
};

}  // namespace locforge
