#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "locforge/nuclei.hpp"

namespace locforge {

struct GenSpec {
  std::uint64_t seed = 0x10ca1e;
  std::size_t count = 20;          // random instances after the fixed corpus
  std::size_t max_objects = 3;
  std::size_t max_frame = 5;       // elements per fibre
  std::size_t max_points = 4;      // points of the posets whose down-sets are random frames
};

// LOCALE_FORGE_SEED if set, otherwise the default.
std::uint64_t seed_from_env(std::uint64_t fallback = GenSpec{}.seed);

// mt19937_64 with modulo reduction: the stream is identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(eng_() % n); }
  bool coin() { return (eng_() & 1) != 0; }

 private:
  std::mt19937_64 eng_;
};

// FRM2, CH3, DIA, CH4, 2^3.
std::vector<FramePtr> frame_corpus();
std::vector<FramePtr> gen_frames(const GenSpec& spec);
// Every finite frame with at most n elements (n <= 16), one per isomorphism class,
// by increasing size.  Includes the one-element frame.
std::vector<FramePtr> all_frames_up_to(std::size_t n);

struct NamedPresentation {
  std::string name;
  PresentationPtr P;
  bool internal_locale = false;  // expected relative BC verdict for corpus items
};

// Stable named fixtures (wedge-const-ch3, omega-wedge, z2-diamond, ...).
std::vector<NamedPresentation> presentation_corpus();
NamedPresentation fixture(const std::string& name);
// Corpus first, then random presentations over small categories.
std::vector<NamedPresentation> gen_presentations(const GenSpec& spec);
// Random presentations over small categories with all pullbacks.
std::vector<NamedPresentation> gen_pullback_presentations(const GenSpec& spec);

// Random open homomorphism source -> target, if any exists.
std::optional<FrameHom> random_open_hom(FramePtr source, FramePtr target, Rng& rng);

struct GluePlan {
  std::vector<PresentationPtr> parts;
  FramePtr middle;
  std::vector<std::vector<Elem>> embeddings;
};
std::vector<GluePlan> gen_glue_plans(const GenSpec& spec);

// Internal nuclei: exhaustive when within budget, otherwise random samples closed
// under binary meets and joins.  Always contains identity and top.
std::vector<InternalNucleus> gen_nuclei(PresentationPtr P, const GenSpec& spec, const Budget& budget = {});

struct FiniteMonoid {
  std::vector<std::string> names;       // element 0 is the unit
  std::vector<std::vector<int>> table;  // table[a][b] = a.b
  CategoryPtr category;
};
// Every monoid of order <= n up to isomorphism.
std::vector<FiniteMonoid> all_monoids_up_to(std::size_t n);

}  // namespace locforge
