#include "doctest.h"
#include "locforge/intloc.hpp"
#include "oracles.hpp"

using namespace locforge;

namespace {

ObjId obj(const FinCategory& C, const char* n) { return *C.find_object(n); }
ArrowId arr(const FinCategory& C, const char* n) { return *C.find_arrow(n); }

}  // namespace

TEST_CASE("small categories validate") {
  auto T = terminal_category();
  CHECK(T->num_objects() == 1);
  CHECK(T->num_arrows() == 1);

  auto W = wedge_category();
  CHECK(W->num_objects() == 3);
  CHECK(W->num_arrows() == 5);
  CHECK(W->src(arr(*W, "f")) == obj(*W, "1"));
  CHECK(W->dst(arr(*W, "g")) == obj(*W, "2"));
}

TEST_CASE("composite on a non-composable pair is rejected") {
  RawCategory r;
  r.objects = {"1", "2"};
  r.arrows = {{"f", "1", "2"}};
  r.compose = {{"f", "f", "f"}};
  try {
    validate_category(r);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedTables);
  }
}

TEST_CASE("missing composite is rejected") {
  RawCategory r;
  r.objects = {"1", "2", "3"};
  r.arrows = {{"f", "1", "2"}, {"g", "2", "3"}};
  CHECK_THROWS_AS(validate_category(r), Error);
}

TEST_CASE("associativity on every composable triple") {
  for (auto C : {wedge_category(), span_category(), chain_category(4), cyclic_group_category(3)}) {
    for (ArrowId f = 0; f < C->num_arrows(); ++f)
      for (ArrowId g : C->out_of(C->dst(f)))
        for (ArrowId h : C->out_of(C->dst(g)))
          CHECK(C->compose(h, C->compose(g, f)) == C->compose(C->compose(h, g), f));
  }
}

TEST_CASE("sieve enumeration matches the closure oracle") {
  auto T = terminal_category();
  auto ts = sieves_on(*T, 0);
  REQUIRE(ts.size() == 2);
  CHECK(ts.front() == empty_sieve(*T, 0));
  CHECK(ts.back() == maximal_sieve(*T, 0));

  auto W = wedge_category();
  CHECK(sieves_on(*W, obj(*W, "1")).size() == 2);
  for (ObjId c = 0; c < W->num_objects(); ++c) CHECK(sieves_on(*W, c).size() == oracle::count_sieves(*W, c));
  CHECK(sieves_on(*W, obj(*W, "2")).size() == 5);

  for (auto C : {span_category(), chain_category(3), cyclic_group_category(2)})
    for (ObjId c = 0; c < C->num_objects(); ++c) CHECK(sieves_on(*C, c).size() == oracle::count_sieves(*C, c));
}

TEST_CASE("generated sieves") {
  auto W = wedge_category();
  ObjId two = obj(*W, "2");
  CHECK(generate_sieve(*W, two, {}) == empty_sieve(*W, two));
  CHECK(generate_sieve(*W, two, {W->identity(two)}) == maximal_sieve(*W, two));
  Sieve S = generate_sieve(*W, two, {arr(*W, "f")});
  auto members = sieve_arrows(*W, S);
  REQUIRE(members.size() == 1);
  CHECK(members[0] == arr(*W, "f"));
}

TEST_CASE("pullback sieves") {
  auto W = wedge_category();
  ObjId two = obj(*W, "2");
  Sieve S = generate_sieve(*W, two, {arr(*W, "f")});
  CHECK(pullback_sieve(*W, S, arr(*W, "g")) == empty_sieve(*W, obj(*W, "3")));
  CHECK(pullback_sieve(*W, S, W->identity(two)) == S);
  for (ArrowId h = 0; h < W->num_arrows(); ++h)
    CHECK(pullback_sieve(*W, maximal_sieve(*W, W->dst(h)), h) == maximal_sieve(*W, W->src(h)));
}

TEST_CASE("comma categories") {
  auto T = terminal_category();
  auto cT = comma_category(identity_functor(T));
  CHECK(cT.cat->num_objects() == 1);
  CHECK(cT.cat->num_arrows() == 1);

  auto W = wedge_category();
  auto cW = comma_category(identity_functor(W));
  CHECK(cW.cat->num_objects() == W->num_arrows());
  for (ObjId c = 0; c < W->num_objects(); ++c) {
    auto x = cW.find_object(c, W->identity(c));
    REQUIRE(x);
    CHECK(cW.i_F.obj(c) == *x);
  }
}

TEST_CASE("Grothendieck construction counts") {
  auto P = constant_presentation(terminal_category(), two_frame());
  auto gc = GrothendieckConstruction::build(P->indexed_poset());
  CHECK(gc.cat()->num_objects() == 2);
  CHECK(gc.cat()->num_arrows() == 3);
  for (ObjId x = 0; x < gc.cat()->num_objects(); ++x) CHECK(gc.projection().obj(x) == gc.base_object(x));

  auto Q = constant_presentation(wedge_category(), chain_frame(3));
  CHECK(GrothendieckConstruction::build(Q->indexed_poset()).cat()->num_objects() == 9);
}
