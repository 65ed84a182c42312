#include "doctest.h"
#include "locforge/gen.hpp"
#include "oracles.hpp"

using namespace locforge;

namespace {

Elem el(const FinFrame& L, const char* n) { return *L.find(n); }

FrameHom hom(FramePtr A, FramePtr B, std::vector<Elem> m) { return validate_frame_hom(A, B, std::move(m)); }

}  // namespace

TEST_CASE("chains and the diamond are frames") {
  auto F2 = two_frame();
  CHECK(F2->size() == 2);
  CHECK(F2->leq(F2->bottom(), F2->top()));
  auto C3 = chain_frame(3);
  CHECK(C3->height() == 2);
  CHECK(C3->names() == std::vector<std::string>{"0", "a", "1"});
  for (auto L : frame_corpus()) {
    auto P = oracle::poset_of(*L);
    CHECK(oracle::is_lattice(P));
    CHECK_FALSE(oracle::distributivity_failure(P));
  }
}

TEST_CASE("pentagon is rejected as non-distributive") {
  std::vector<std::string> n = {"0", "a", "b", "c", "1"};
  std::vector<std::pair<Elem, Elem>> leq = {{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}};
  oracle::Poset P;
  P.n = 5;
  P.le.assign(5, std::vector<bool>(5, false));
  for (Elem i = 0; i < 5; ++i) P.le[i][i] = true;
  for (auto [a, b] : leq) P.le[a][b] = true;
  P.le[0][2] = P.le[0][4] = P.le[1][4] = true;
  REQUIRE(oracle::is_lattice(P));
  CHECK(oracle::distributivity_failure(P));
  try {
    FinFrame::from_order(n, leq);
    FAIL("pentagon accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotDistributive);
    CHECK_FALSE(e.witness().empty());
  }
}

TEST_CASE("non-lattices are rejected") {
  CHECK_THROWS_AS(FinFrame::from_order({"0", "a", "b"}, {{0, 1}, {0, 2}}), Error);
  CHECK_THROWS_AS(FinFrame::from_order({"a", "b"}, {{0, 1}, {1, 0}}), Error);
}

TEST_CASE("Heyting implication") {
  auto C3 = chain_frame(3);
  auto D = diamond_frame();
  CHECK(C3->implies(el(*C3, "a"), el(*C3, "0")) == el(*C3, "0"));
  CHECK(D->implies(el(*D, "a"), el(*D, "b")) == el(*D, "b"));
  for (auto L : frame_corpus())
    for (Elem U = 0; U < L->size(); ++U) {
      CHECK(L->implies(U, L->top()) == L->top());
      for (Elem V = 0; V < L->size(); ++V) {
        Elem i = L->implies(U, V);
        CHECK(i == oracle::heyting(*L, U, V));
        CHECK(L->leq(L->meet(U, i), V));
        CHECK(L->leq(V, i));
      }
    }
}

TEST_CASE("frame homomorphisms") {
  auto F2 = two_frame(), C3 = chain_frame(3);
  CHECK_NOTHROW(identity_hom(C3));
  CHECK_NOTHROW(hom(C3, F2, {0, 0, 1}));
  CHECK_NOTHROW(hom(C3, F2, {0, 1, 1}));
  try {
    hom(C3, F2, {1, 1, 1});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAHom);
  }
  for (auto A : frame_corpus())
    for (auto B : frame_corpus()) {
      auto lib = enumerate_frame_homs(A, B);
      auto bf = oracle::frame_homs(*A, *B);
      REQUIRE(lib.size() == bf.size());
      for (std::size_t i = 0; i < lib.size(); ++i) CHECK(lib[i].map == bf[i]);
    }
}

TEST_CASE("adjoints") {
  auto F2 = two_frame(), C3 = chain_frame(3);
  auto id = identity_hom(C3);
  CHECK(left_adjoint(id) == id.map);
  CHECK(right_adjoint(id) == id.map);
  auto h = hom(F2, C3, {0, 2});
  CHECK(left_adjoint(h) == std::vector<Elem>{0, 1, 1});
  CHECK(right_adjoint(h) == std::vector<Elem>{0, 0, 1});
  CHECK(left_adjoint(h) == *oracle::left_adjoint(*F2, *C3, h.map));
}

TEST_CASE("open homomorphisms: both criteria agree with the oracle") {
  auto F2 = two_frame(), C3 = chain_frame(3), D = diamond_frame();
  auto r = open_report(hom(C3, F2, {0, 1, 1}));
  CHECK(r.frobenius);
  CHECK(r.heyting);
  // a |-> 0: exists(1 ^ h(a)) = 0 but exists(1) ^ a = a
  auto shut = open_report(hom(C3, F2, {0, 0, 1}));
  CHECK_FALSE(shut.frobenius);
  CHECK_FALSE(shut.heyting);
  auto collapse = hom(D, F2, {0, 1, 0, 1});
  auto rc = open_report(collapse);
  CHECK(rc.frobenius == rc.heyting);
  CHECK(rc.frobenius == oracle::is_open(*D, *F2, collapse.map));
  for (auto A : frame_corpus())
    for (auto B : frame_corpus())
      for (const auto& h : enumerate_frame_homs(A, B)) {
        auto rep = open_report(h);
        CHECK(rep.frobenius == rep.heyting);
        CHECK(rep.frobenius == oracle::is_open(*A, *B, h.map));
      }
  // isomorphisms are open
  auto swap = hom(D, D, {0, 2, 1, 3});
  CHECK_NOTHROW(check_open(swap));
}

TEST_CASE("images") {
  auto F2 = two_frame(), C3 = chain_frame(3);
  CHECK(image_frame(identity_hom(C3)).frame->size() == 3);
  CHECK(image_frame(hom(C3, F2, {0, 0, 1})).frame->size() == 2);
  auto im = image_frame(hom(F2, C3, {0, 2}));
  CHECK(oracle::isomorphic(*im.frame, *F2));
}

TEST_CASE("frame enumeration up to isomorphism") {
  // frames with at most n elements
  CHECK(all_frames_up_to(1).size() == 1);
  CHECK(all_frames_up_to(4).size() == 5);
  CHECK(all_frames_up_to(5).size() == 8);
  auto fs = all_frames_up_to(6);
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j) CHECK_FALSE(oracle::isomorphic(*fs[i], *fs[j]));
}
