#include "doctest.h"
#include "locforge/gen.hpp"
#include "oracles.hpp"

using namespace locforge;

namespace {

ObjId obj(const FinCategory& C, const char* n) { return *C.find_object(n); }
ArrowId arr(const FinCategory& C, const char* n) { return *C.find_arrow(n); }

// Every subset of non-maximal sieves, completed by the maximal ones, that passes the axioms.
std::vector<GrothendieckTopology> all_topologies(CategoryPtr C, const SieveSpace& space) {
  std::vector<Sieve> slots;
  for (ObjId c = 0; c < C->num_objects(); ++c)
    for (const auto& S : space.on(c))
      if (!(S == maximal_sieve(*C, c))) slots.push_back(S);
  REQUIRE(slots.size() <= 12);
  std::vector<GrothendieckTopology> out;
  for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    GrothendieckTopology J = trivial_topology(C);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) J.add(slots[i]);
    if (topology_axioms(J, space).ok()) out.push_back(J);
  }
  return out;
}

}  // namespace

TEST_CASE("trivial topologies are valid") {
  for (auto C : {terminal_category(), wedge_category(), span_category(), chain_category(3), cyclic_group_category(2)}) {
    auto space = SieveSpace::build(C);
    CHECK(topology_axioms(trivial_topology(C), space).ok());
  }
}

TEST_CASE("missing maximal sieve is rejected") {
  auto W = wedge_category();
  auto space = SieveSpace::build(W);
  std::vector<Sieve> covers = {maximal_sieve(*W, 0), maximal_sieve(*W, 1)};
  try {
    validate_topology(W, covers, space);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotMaximal);
  }
}

TEST_CASE("topology on the wedge with {f,g} covering 2 is decided by the axioms") {
  auto W = wedge_category();
  auto space = SieveSpace::build(W);
  ObjId two = obj(*W, "2");
  Sieve fg = generate_sieve(*W, two, {arr(*W, "f"), arr(*W, "g")});
  GrothendieckTopology J = trivial_topology(W);
  J.add(fg);
  // pulling {f,g} back along f or g gives a maximal sieve, so this is a topology
  CHECK(topology_axioms(J, space).ok());
  J.add(generate_sieve(*W, two, {arr(*W, "f")}));
  CHECK(topology_axioms(J, space).ok() == false);
}

TEST_CASE("closure agrees with the intersection of all topologies containing the generators") {
  for (auto C : {wedge_category(), arrow_category(), span_category()}) {
    auto space = SieveSpace::build(C);
    auto tops = all_topologies(C, space);
    CHECK(topology_closure(space, {}) == trivial_topology(C));
    for (ObjId c = 0; c < C->num_objects(); ++c)
      for (const auto& G : space.on(c)) {
        auto cl = topology_closure(space, {G});
        CHECK(topology_axioms(cl, space).ok());
        CHECK(topology_closure(space, [&] {
                std::vector<Sieve> all;
                for (ObjId d = 0; d < C->num_objects(); ++d)
                  for (const auto& S : cl.covering(d)) all.push_back(S);
                return all;
              }()) == cl);
        // intersection of every topology containing G
        for (ObjId d = 0; d < C->num_objects(); ++d)
          for (const auto& S : space.on(d)) {
            bool in_all = true;
            for (const auto& J : tops)
              if (J.covers(G) && !J.covers(S)) in_all = false;
            CHECK(cl.covers(S) == in_all);
          }
      }
  }
}

TEST_CASE("comorphisms") {
  auto W = wedge_category();
  auto J = trivial_topology(W);
  CHECK(check_comorphism(identity_functor(W), J, J).ok());

  auto P = fixture("omega-wedge").P;
  auto site = build_kl_site(P);
  CHECK(check_comorphism(site.gc.projection(), *site.K, trivial_topology(P->base)).ok());

  // * |-> 1 in 0 -> 1, where {f} covers 1
  auto A = arrow_category();
  auto T = terminal_category();
  FinFunctor F = validate_functor(T, A, {obj(*A, "1")}, {A->identity(obj(*A, "1"))});
  auto spaceA = SieveSpace::build(A);
  GrothendieckTopology K = trivial_topology(A);
  K.add(generate_sieve(*A, obj(*A, "1"), {arr(*A, "f")}));
  REQUIRE(topology_axioms(K, spaceA).ok());
  Verdict v = check_comorphism(F, trivial_topology(T), K);
  CHECK_FALSE(v.ok());
  CHECK(v.witnesses.front()["object"] == "*");
}

TEST_CASE("morphisms of sites") {
  auto W = wedge_category();
  auto J = trivial_topology(W);
  CHECK(check_morphism_of_sites(identity_functor(W), J, J).ok());

  auto T = terminal_category();
  FinFunctor inc = validate_functor(T, W, {obj(*W, "1")}, {W->identity(obj(*W, "1"))});
  Verdict v = check_morphism_of_sites(inc, trivial_topology(T), J);
  CHECK_FALSE(v.ok());
  bool cond2_at_3 = false;
  for (const auto& w : v.witnesses) cond2_at_3 |= w["condition"] == 2 && w["object"] == "3";
  CHECK(cond2_at_3);
}

TEST_CASE("sheaves") {
  auto W = wedge_category();
  Presheaf two = validate_presheaf(W, {{"x", "y"}, {"x", "y"}, {"x", "y"}},
                                   {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}});
  CHECK(check_sheaf(two, trivial_topology(W)).ok());

  // the empty sieve covering the point forces a one-element carrier
  auto T = terminal_category();
  auto space = SieveSpace::build(T);
  auto degenerate = validate_topology(T, {empty_sieve(*T, 0), maximal_sieve(*T, 0)}, space);
  Presheaf pt2 = validate_presheaf(T, {{"x", "y"}}, {{0, 1}});
  CHECK_FALSE(check_sheaf(pt2, degenerate).ok());
  CHECK_FALSE(oracle::is_sheaf(pt2, degenerate));
  Presheaf pt1 = validate_presheaf(T, {{"x"}}, {{0}});
  CHECK(check_sheaf(pt1, degenerate).ok());

  // a richer cover on the wedge, compared with the oracle
  auto spaceW = SieveSpace::build(W);
  GrothendieckTopology K = trivial_topology(W);
  K.add(generate_sieve(*W, obj(*W, "2"), {arr(*W, "f"), arr(*W, "g")}));
  for (auto maps : std::vector<std::vector<std::vector<Elem>>>{{{0, 1}, {0, 1}, {0, 1}, {0, 0}, {1, 1}},
                                                                {{0, 1}, {0, 1}, {0, 1}, {0, 1}, {1, 0}}}) {
    Presheaf Q = validate_presheaf(W, {{"x", "y"}, {"x", "y"}, {"x", "y"}}, maps);
    CHECK(check_sheaf(Q, K).ok() == oracle::is_sheaf(Q, K));
  }
  CHECK(check_sheaf(two, K).ok() == oracle::is_sheaf(two, K));
}

TEST_CASE("comma sites and the mixing square on identities") {
  auto W = wedge_category();
  auto J = trivial_topology(W);
  auto cs = comma_site(identity_functor(W), J, J);
  CHECK(cs.ok());
  auto id = identity_functor(W);
  std::vector<ArrowId> iso;
  for (ObjId c = 0; c < W->num_objects(); ++c) iso.push_back(W->identity(c));
  auto ms = mixing_square(id, id, id, id, J, J, J, J, iso);
  CHECK(ms.ok());
  for (ObjId x = 0; x < ms.left.comma.cat->num_objects(); ++x) {
    auto [c, a] = ms.left.comma.objects[x];
    auto [c2, a2] = ms.right.comma.objects[ms.H.obj(x)];
    CHECK(c2 == c);
    CHECK(a2 == a);
  }
}
