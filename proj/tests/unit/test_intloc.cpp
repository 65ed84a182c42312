#include "doctest.h"
#include "locforge/gen.hpp"
#include "oracles.hpp"

using namespace locforge;

namespace {

ObjId obj(const FinCategory& C, const char* n) { return *C.find_object(n); }
ArrowId arr(const FinCategory& C, const char* n) { return *C.find_arrow(n); }

std::vector<std::vector<Elem>> identity_transitions(const CategoryPtr& C, const FinFrame& L) {
  std::vector<std::vector<Elem>> tr(C->num_arrows());
  for (auto& t : tr)
    for (Elem V = 0; V < L.size(); ++V) t.push_back(V);
  return tr;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::InternalInconsistency;
}

// K_L straight from its definition: V is the join of exists_f U over the sieve.
bool kl_covers(const IntLocalePresentation& P, const GrothendieckConstruction& gc, const Sieve& S) {
  const FinCategory& T = *gc.cat();
  const FinFrame& Ld = P.fibre(gc.base_object(S.base));
  Elem j = Ld.bottom();
  for (ArrowId a : T.into(S.base))
    if (contains(T, S, a)) j = Ld.join(j, P.ex(gc.base_arrow(a), gc.element(T.src(a))));
  return j == gc.element(S.base);
}

}  // namespace

TEST_CASE("constant presentations are functorial") {
  auto P = constant_presentation(chain_category(3), diamond_frame());
  CHECK(P->fibres.size() == 3);
  for (ArrowId g = 0; g < P->base->num_arrows(); ++g)
    for (Elem V = 0; V < 4; ++V) CHECK(P->inv(g, V) == V);
}

TEST_CASE("a swap on a composite that is not the composite of the swaps is not functorial") {
  auto C = chain_category(3);
  auto L = diamond_frame();
  auto tr = identity_transitions(C, *L);
  tr[arr(*C, "0<2")] = {0, 2, 1, 3};
  CHECK(kind_of([&] { validate_presentation(C, {L, L, L}, tr); }) == ErrorKind::NotFunctorial);
}

TEST_CASE("transitions must be open frame homs") {
  auto A = arrow_category();
  auto tr = identity_transitions(A, *chain_frame(3));
  tr[arr(*A, "f")] = {0, 0, 2};  // a |-> 0 is a frame hom CH3 -> CH3, but not open
  auto L = chain_frame(3);
  ErrorKind k = kind_of([&] { validate_presentation(A, {L, L}, tr); });
  CHECK((k == ErrorKind::NotOpen || k == ErrorKind::NotAHom));
  tr[arr(*A, "f")] = {0, 2, 1};
  CHECK(kind_of([&] { validate_presentation(A, {L, L}, tr); }) == ErrorKind::NotAHom);
}

TEST_CASE("K_L coverings agree with the definition") {
  for (const char* name : {"omega-wedge", "wedge-const-ch3", "z2-diamond", "arrow-const-ch3"}) {
    auto P = fixture(name).P;
    auto site = build_kl_site(P, {}, false);
    const FinCategory& T = *site.gc.cat();
    for (ObjId x = 0; x < T.num_objects(); ++x)
      for (const auto& S : sieves_on(T, x)) CHECK(is_KL_covering(*P, site.gc, S) == kl_covers(*P, site.gc, S));
  }
}

TEST_CASE("generating covers") {
  auto P = fixture("wedge-const-ch3").P;
  auto gc = GrothendieckConstruction::build(P->indexed_poset());
  const FinCategory& B = *P->base;
  ObjId two = obj(B, "2");
  const FinFrame& L = P->fibre(two);
  for (Elem V = 0; V < L.size(); ++V) {
    auto g = generating_covers(*P, gc, gc.object(two, V));
    // species A: the identity with U = V plus one lift per incoming arrow
    CHECK(g.species_a.size() == 3);
    for (const auto& fam : g.species_a) CHECK(fam.size() == 1);
    std::size_t expected = 0;
    for (std::uint32_t s = 0; s < (1u << L.size()); ++s) {
      Elem j = L.bottom();
      for (Elem U = 0; U < L.size(); ++U)
        if (s >> U & 1) j = L.join(j, U);
      if (j == V) ++expected;
    }
    CHECK(g.species_b.size() == expected);
    for (const auto& fam : g.species_b) {
      Sieve S = generate_sieve(*gc.cat(), gc.object(two, V), fam);
      CHECK(is_KL_covering(*P, gc, S));
      for (ArrowId a : fam) CHECK(B.is_identity(gc.base_arrow(a)));
    }
  }
}

TEST_CASE("relative BC fails on the wedge with constant CH3 and names the witness") {
  auto r = check_relative_BC(fixture("wedge-const-ch3").P, {}, OracleMode::always);
  CHECK_FALSE(r.primary);
  REQUIRE(r.oracle.has_value());
  CHECK_FALSE(*r.oracle);
  REQUIRE(r.topology.has_value());
  CHECK_FALSE(*r.topology);
  REQUIRE(r.verdict.witnesses.size() >= 1);
  const json& w = r.verdict.witnesses[0];
  CHECK(w["arrow"] == "g");
  CHECK(w["generator"] == "f:(1,1)->(2,1)");
  CHECK(w["sieve"] == json({"f:(1,0)->(2,1)", "f:(1,a)->(2,1)", "f:(1,1)->(2,1)"}));
}

TEST_CASE("relative BC agrees with the corpus expectations and across strategies") {
  for (const auto& np : presentation_corpus()) {
    CAPTURE(np.name);
    auto r = check_relative_BC(np.P, {}, OracleMode::always);
    CHECK(r.primary == np.internal_locale);
    REQUIRE(r.oracle.has_value());
    CHECK(*r.oracle == r.primary);
    REQUIRE(r.topology.has_value());
    CHECK(*r.topology == r.primary);
  }
}

TEST_CASE("BC for pullbacks") {
  SUBCASE("the wedge has no pullback of f and g") {
    auto P = fixture("omega-wedge").P;
    Verdict v = check_BC_pullbacks(*P);
    CHECK(v.status == Status::inapplicable);
  }
  SUBCASE("groups have all pullbacks and agree with relative BC") {
    for (const char* name : {"z2-diamond", "z2-const-ch3"}) {
      auto P = fixture(name).P;
      Verdict v = check_BC_pullbacks(*P);
      CHECK(v.status != Status::inapplicable);
      CHECK(v.ok() == check_relative_BC(P).primary);
    }
  }
  SUBCASE("random pullback presentations") {
    GenSpec spec;
    spec.count = 15;
    for (const auto& np : gen_pullback_presentations(spec)) {
      CAPTURE(np.name);
      Verdict v = check_BC_pullbacks(*np.P);
      if (v.status == Status::inapplicable) continue;
      CHECK(v.ok() == check_relative_BC(np.P).primary);
    }
  }
}

TEST_CASE("omega presentations") {
  SUBCASE("terminal category gives the two-element frame") {
    auto P = omega_presentation(terminal_category());
    CHECK(oracle::isomorphic(P->fibre(0), *two_frame()));
  }
  SUBCASE("wedge fibres") {
    auto W = wedge_category();
    auto P = omega_presentation(W);
    CHECK(P->fibre(obj(*W, "1")).size() == 2);
    CHECK(P->fibre(obj(*W, "2")).size() == oracle::count_sieves(*W, obj(*W, "2")));
    CHECK(P->fibre(obj(*W, "2")).size() == 5);
    CHECK(P->fibre(obj(*W, "3")).size() == 2);
  }
  SUBCASE("transitions are pullback of sieves") {
    auto C = chain_category(3);
    auto P = omega_presentation(C);
    auto space = SieveSpace::build(C);
    for (ArrowId g = 0; g < C->num_arrows(); ++g) {
      const auto& from = space.on(C->dst(g));
      const auto& to = space.on(C->src(g));
      for (Elem V = 0; V < from.size(); ++V) CHECK(to[P->inv(g, V)] == pullback_sieve(*C, from[V], g));
    }
  }
}

TEST_CASE("the Omega-presheaf of C x| L") {
  auto P = fixture("omega-wedge").P;
  auto site = build_kl_site(P);
  auto om = omega_sheaf_of(site);
  const auto& gc = site.gc;
  const FinCategory& T = *gc.cat();
  for (ObjId x = 0; x < T.num_objects(); ++x) {
    const FinFrame& L = P->fibre(gc.base_object(x));
    std::size_t below = 0;
    for (Elem V = 0; V < L.size(); ++V) below += L.leq(V, gc.element(x));
    CHECK(om.presheaf.size(x) == below);
  }
  CHECK(om.sheaf.ok());
  CHECK(oracle::is_sheaf(om.presheaf, *site.K));
  CHECK(kind_of([&] { omega_sheaf_of(build_kl_site(fixture("wedge-const-ch3").P)); }) ==
        ErrorKind::NotInternalLocale);
}

TEST_CASE("gluing two points along Omega(2) rebuilds omega-wedge") {
  auto glued = fixture("wedge-glued-omega").P;
  auto om = fixture("omega-wedge").P;
  const FinCategory& G = *glued->base;
  const FinCategory& W = *om->base;
  CHECK(G.num_objects() == 3);
  CHECK(G.num_arrows() == W.num_arrows());
  std::vector<std::pair<const char*, const char*>> objs = {{"1.*", "1"}, {"2.*", "3"}, {"1", "2"}};
  for (auto [g, w] : objs) CHECK(glued->fibre(obj(G, g)).size() == om->fibre(obj(W, w)).size());
  CHECK(same_frame(glued->fibre(obj(G, "1")), om->fibre(obj(W, "2"))));
  std::vector<std::pair<const char*, const char*>> arrows = {{"f1", "f"}, {"f2", "g"}};
  for (auto [g, w] : arrows) {
    ArrowId a = arr(G, g), b = arr(W, w);
    for (Elem V = 0; V < om->fibre(W.dst(b)).size(); ++V) CHECK(glued->inv(a, V) == om->inv(b, V));
  }
  CHECK(check_relative_BC(glued).primary);
}

TEST_CASE("glue verdicts") {
  auto pt = constant_presentation(terminal_category(), two_frame());
  SUBCASE("a single part with the identity embedding") {
    auto r = glue({pt}, two_frame(), {{0, 1}});
    CHECK(r.verdict.ok());
    CHECK(r.glued_rbc.primary);
    CHECK(r.agree);
  }
  SUBCASE("overlapping embeddings fail") {
    auto ch = constant_presentation(terminal_category(), chain_frame(3));
    auto r = glue({ch, ch}, chain_frame(3), {{0, 1, 2}, {0, 1, 2}});
    CHECK_FALSE(r.verdict.ok());
    CHECK_FALSE(r.glued_rbc.primary);
    CHECK(r.agree);
  }
  SUBCASE("a part without a terminal object") {
    auto sp = constant_presentation(span_category(), two_frame());
    auto r = [&] { glue({sp}, two_frame(), {{0, 1}}); };
    ErrorKind k = kind_of(r);
    CHECK(k == ErrorKind::MissingTerminal);
  }
}

TEST_CASE("monoid actions") {
  SUBCASE("the trivial monoid always passes") {
    auto M = monoid_category({"1"}, {{0}});
    for (auto L : frame_corpus()) {
      auto r = from_monoid_action(M, L, {identity_map(*L)});
      CHECK(r.divisor.ok());
      CHECK(r.rbc.primary);
      CHECK(r.agree);
    }
  }
  SUBCASE("{1,e} with e idempotent fails on every nontrivial frame") {
    auto M = monoid_category({"1", "e"}, {{0, 1}, {1, 1}});
    for (auto L : frame_corpus()) {
      for (const auto& h : oracle::open_homs(*L, *L)) {
        std::vector<std::vector<Elem>> action = {identity_map(*L), h};
        if (!oracle::is_action(*M, action)) continue;
        auto r = from_monoid_action(M, L, action);
        CHECK_FALSE(r.divisor.ok());
        CHECK(oracle::divisor_condition(*M, *L, action) == false);
      }
    }
  }
  SUBCASE("{1,e} acting trivially: K_L is still stable, so the divisor condition is stricter") {
    // n = e, m = 1: the sieve generated by id is maximal, so its pullback is maximal too,
    // while the divisor set {k : ek = 1} is empty
    auto M = monoid_category({"1", "e"}, {{0, 1}, {1, 1}});
    auto L = two_frame();
    auto r = from_monoid_action(M, L, {{0, 1}, {0, 1}});
    CHECK_FALSE(r.divisor.ok());
    CHECK(r.divisor.witnesses[0]["n"] == "e");
    auto full = check_relative_BC(r.presentation, {}, OracleMode::always);
    CHECK(full.primary);
    CHECK(full.oracle == true);
    CHECK(full.topology == true);
    CHECK_FALSE(r.agree);
  }
  SUBCASE("Z/2 swapping the atoms of the diamond") {
    auto M = cyclic_group_category(2);
    auto L = diamond_frame();
    auto r = from_monoid_action(M, L, {{0, 1, 2, 3}, {0, 2, 1, 3}});
    CHECK(r.divisor.ok());
    CHECK(r.rbc.primary);
  }
  SUBCASE("non-actions are rejected") {
    // e.e = e, but the swap is not idempotent
    auto M = monoid_category({"1", "e"}, {{0, 1}, {1, 1}});
    CHECK(kind_of([&] { from_monoid_action(M, diamond_frame(), {{0, 1, 2, 3}, {0, 2, 1, 3}}); }) ==
          ErrorKind::NotAnAction);
  }
}

TEST_CASE("sheaf toposes on internal locales") {
  auto P = fixture("arrow-const-ch3").P;
  auto site = build_kl_site(P);
  auto J = trivial_topology(P->base);
  auto r = check_sheaf_internal(site, J);
  CHECK(r.agree);
  CHECK(r.fibres_sheaf.ok() == oracle::is_sheaf(fibre_presheaf(*P), J));
}

TEST_CASE("relative BC witnesses replay") {
  GenSpec spec;
  spec.count = 40;
  std::size_t replayed = 0;
  for (const auto& np : gen_presentations(spec)) {
    auto r = check_relative_BC(np.P, {}, OracleMode::never);
    if (r.primary) continue;
    CAPTURE(np.name);
    const json& w = r.verdict.witnesses.at(0);
    auto gc = GrothendieckConstruction::build(np.P->indexed_poset());
    const FinCategory& T = *gc.cat();
    ObjId x = *T.find_object(w["object"].get<std::string>());
    std::vector<ArrowId> fam;
    for (const auto& a : w["sieve"]) fam.push_back(*T.find_arrow(a.get<std::string>()));
    Sieve S = generate_sieve(T, x, fam);
    CHECK(is_KL_covering(*np.P, gc, S));
    ArrowId along = *T.find_arrow(w["along"].get<std::string>());
    CHECK(T.dst(along) == x);
    CHECK(np.P->base->arrow_name(gc.base_arrow(along)) == w["arrow"]);
    Sieve R = pullback_sieve(T, S, along);
    CHECK(sieve_to_json(T, R) == w["pullback"]);
    CHECK_FALSE(is_KL_covering(*np.P, gc, R));
    ++replayed;
  }
  CHECK(replayed > 0);
}
