#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "locforge/error.hpp"
#include "locforge/types.hpp"

namespace locforge {

// Finite frame = finite bounded distributive lattice.  Elements are indices;
// leq is a dense matrix and meet/join/implication are precomputed tables.
class FinFrame {
 public:
  // leq pairs are closed reflexively and transitively before validation.
  static std::shared_ptr<const FinFrame> from_order(std::vector<std::string> names,
                                                    const std::vector<std::pair<Elem, Elem>>& leq);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Elem e) const { return names_[e]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Elem> find(std::string_view name) const;

  bool leq(Elem a, Elem b) const { return leq_[a * size() + b] != 0; }
  Elem meet(Elem a, Elem b) const { return meet_[a * size() + b]; }
  Elem join(Elem a, Elem b) const { return join_[a * size() + b]; }
  Elem implies(Elem a, Elem b) const { return imp_[a * size() + b]; }
  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }

  template <class Range>
  Elem join_all(const Range& r) const {
    Elem acc = bottom_;
    for (Elem e : r) acc = join(acc, e);
    return acc;
  }
  template <class Range>
  Elem meet_all(const Range& r) const {
    Elem acc = top_;
    for (Elem e : r) acc = meet(acc, e);
    return acc;
  }

  // Length of the longest chain minus one.
  std::size_t height() const { return height_; }
  // Hasse diagram edges (a covered by b), in index order.
  std::vector<std::pair<Elem, Elem>> covers() const;

 private:
  std::vector<std::string> names_;
  std::vector<char> leq_;
  std::vector<Elem> meet_, join_, imp_;
  Elem bottom_ = 0, top_ = 0;
  std::size_t height_ = 0;
};

using FramePtr = std::shared_ptr<const FinFrame>;

// Element names: chain(2) = {0,1}, chain(3) = {0,a,1}, chain(n) = {0,a,b,...,1}.
FramePtr chain_frame(std::size_t n);
FramePtr two_frame();
FramePtr diamond_frame();  // {0, a, b, 1}
FramePtr boolean_frame(std::size_t k);
// Down-sets of a finite poset on points 0..n-1 (pairs (i, j) meaning i <= j).
FramePtr downset_frame(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& order);
// Induced sub-poset on the given elements, which must itself be a lattice.
FramePtr subposet_frame(const FinFrame& L, const std::vector<Elem>& elems);

std::optional<std::vector<Elem>> find_isomorphism(const FinFrame& A, const FinFrame& B);
bool same_frame(const FinFrame& A, const FinFrame& B);  // identical names and order

Elem heyting(const FinFrame& L, Elem U, Elem V);

// ---- homomorphisms ---------------------------------------------------------------

struct FrameHom {
  FramePtr source, target;
  std::vector<Elem> map;

  Elem operator()(Elem u) const { return map[u]; }
};

FrameHom validate_frame_hom(FramePtr source, FramePtr target, std::vector<Elem> map);
FrameHom identity_hom(FramePtr L);
FrameHom compose_homs(const FrameHom& g, const FrameHom& f);  // g . f
bool is_injective(const std::vector<Elem>& map);
bool is_surjective(const std::vector<Elem>& map, std::size_t codomain_size);

// U |-> meet { V | U <= h(V) }, verified against the adjunction law.
std::vector<Elem> left_adjoint(const FrameHom& h);
// U |-> join { V | h(V) <= U }, verified against the adjunction law.
std::vector<Elem> right_adjoint(const FrameHom& h);

struct AdjointPair {
  std::vector<Elem> lower, upper;
};

struct OpenFrameHom {
  FrameHom hom;
  std::vector<Elem> exists;  // left adjoint, target -> source
};

struct OpenReport {
  bool frobenius = false;
  bool heyting = false;
  json witness;  // first failure of whichever criterion failed
};

OpenReport open_report(const FrameHom& h);
// Throws NotOpen; InternalInconsistency if the two criteria disagree.
OpenFrameHom check_open(const FrameHom& h);

struct ImageFrame {
  FramePtr frame;
  FrameHom corestriction;       // source -> image, surjective
  std::vector<Elem> inclusion;  // image -> target
};

ImageFrame image_frame(const FrameHom& h);

// All frame homomorphisms source -> target in lexicographic order of their tables.
std::vector<FrameHom> enumerate_frame_homs(FramePtr source, FramePtr target, std::size_t budget = Budget{}.maps);

}  // namespace locforge
