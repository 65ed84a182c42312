#include "doctest.h"
#include "locforge/gen.hpp"
#include "oracles.hpp"

using namespace locforge;

TEST_CASE("frame corpus") {
  auto fs = frame_corpus();
  REQUIRE(fs.size() == 5);
  CHECK(same_frame(*fs[0], *two_frame()));
  for (auto L : gen_frames(GenSpec{})) {
    auto P = oracle::poset_of(*L);
    CHECK(oracle::is_lattice(P));
    CHECK_FALSE(oracle::distributivity_failure(P));
  }
}

TEST_CASE("generated presentations are deterministic and the corpus verdicts hold") {
  GenSpec spec;
  spec.count = 10;
  auto a = gen_presentations(spec), b = gen_presentations(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    CHECK(same_presentation(*a[i].P, *b[i].P));
  }
  for (const auto& np : presentation_corpus()) CHECK(check_relative_BC(np.P).primary == np.internal_locale);
  spec.seed += 1;
  auto c = gen_presentations(spec);
  bool differs = false;
  for (std::size_t i = presentation_corpus().size(); i < c.size(); ++i)
    differs = differs || a[i].name != c[i].name || !same_presentation(*a[i].P, *c[i].P);
  CHECK(differs);
}

TEST_CASE("generated nuclei") {
  auto P = fixture("terminal-ch3").P;
  auto ns = gen_nuclei(P, GenSpec{});
  CHECK(ns.size() == 4);
  CHECK(std::find(ns.begin(), ns.end(), identity_nucleus(P)) != ns.end());
  CHECK(std::find(ns.begin(), ns.end(), top_nucleus(P)) != ns.end());
}

TEST_CASE("small monoids") {
  // monoids of order 1, 2, 3 up to isomorphism: 1, 2, 7
  CHECK(all_monoids_up_to(1).size() == 1);
  CHECK(all_monoids_up_to(2).size() == 3);
  CHECK(all_monoids_up_to(3).size() == 10);
  for (const auto& m : all_monoids_up_to(3)) {
    const auto& t = m.table;
    for (std::size_t a = 0; a < t.size(); ++a)
      for (std::size_t b = 0; b < t.size(); ++b)
        for (std::size_t c = 0; c < t.size(); ++c) CHECK(t[t[a][b]][c] == t[a][t[b][c]]);
  }
}

TEST_CASE("glue plans") {
  GenSpec spec;
  spec.count = 10;
  for (const auto& plan : gen_glue_plans(spec)) {
    auto r = glue(plan.parts, plan.middle, plan.embeddings);
    CHECK(r.agree);
  }
}
