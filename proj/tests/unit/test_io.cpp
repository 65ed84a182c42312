#include "doctest.h"
#include "locforge/gen.hpp"
#include "locforge/io.hpp"

using namespace locforge;

namespace {

Document inline_doc(json v) { return {std::move(v), "."}; }

}  // namespace

TEST_CASE("categories round-trip") {
  for (auto C : {terminal_category(), wedge_category(), span_category(), chain_category(3), cyclic_group_category(3)}) {
    auto D = parse_category(category_to_json(*C));
    REQUIRE(D->num_arrows() == C->num_arrows());
    for (ArrowId g = 0; g < C->num_arrows(); ++g)
      for (ArrowId f = 0; f < C->num_arrows(); ++f) {
        if (C->dst(f) != C->src(g)) continue;
        auto g2 = *D->find_arrow(C->arrow_name(g)), f2 = *D->find_arrow(C->arrow_name(f));
        CHECK(D->arrow_name(D->compose(g2, f2)) == C->arrow_name(C->compose(g, f)));
      }
  }
}

TEST_CASE("compose keys may contain dots") {
  json doc = {{"objects", {"p", "q", "r"}},
              {"arrows", {{{"name", "u.v"}, {"src", "p"}, {"dst", "q"}},
                          {{"name", "w"}, {"src", "q"}, {"dst", "r"}},
                          {{"name", "w.u.v"}, {"src", "p"}, {"dst", "r"}}}},
              {"compose", {{"w.u.v", "w.u.v"}}}};
  auto C = parse_category(doc);
  CHECK(C->compose(*C->find_arrow("w"), *C->find_arrow("u.v")) == *C->find_arrow("w.u.v"));
}

TEST_CASE("frames round-trip") {
  for (auto L : frame_corpus()) {
    auto M = parse_frame(frame_to_json(*L));
    CHECK(same_frame(*L, *M));
  }
  json pentagon = json::parse(R"({"elements": ["0", "a", "b", "c", "1"],
                                  "leq": [["0", "a"], ["a", "b"], ["0", "c"], ["b", "1"], ["c", "1"]]})");
  try {
    parse_frame(pentagon);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotDistributive);
  }
}

TEST_CASE("presentations, morphisms and nuclei round-trip") {
  for (const auto& np : presentation_corpus()) {
    CAPTURE(np.name);
    json j = presentation_to_json(*np.P);
    CHECK(document_kind(j) == "presentation");
    auto Q = parse_presentation(inline_doc(j));
    CHECK(same_presentation(*np.P, *Q));
    auto id = identity_morphism(np.P);
    json m = morphism_to_json(id);
    CHECK(document_kind(m) == "morphism");
    CHECK(same_morphism(parse_morphism(inline_doc(m)), identity_morphism(Q)));
    auto top = top_nucleus(np.P);
    json n = nucleus_to_json(top);
    CHECK(document_kind(n) == "nucleus");
    CHECK(parse_nucleus(inline_doc(n)).components == top.components);
  }
}

TEST_CASE("missing transitions for non-identity arrows are malformed") {
  json j = presentation_to_json(*fixture("arrow-const-ch3").P);
  j["transitions"].erase("f");
  try {
    parse_presentation(inline_doc(j));
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedDocument);
  }
}

TEST_CASE("partial maps are rejected") {
  CHECK_THROWS_AS(parse_map({"0", "1"}, {"0", "1"}, json{{"0", "0"}}, "map"), Error);
  CHECK(parse_map({"0", "1"}, {"x", "y"}, json{{"0", "y"}, {"1", "x"}}, "map") == std::vector<Elem>{1, 0});
}

TEST_CASE("DOT output") {
  std::string c = category_dot(*wedge_category());
  CHECK(c.rfind("digraph category {", 0) == 0);
  CHECK(c.find("id:") == std::string::npos);
  CHECK(c.find("label=\"f\"") != std::string::npos);
  std::string f = frame_dot(*two_frame(), "FRM2");
  CHECK(f.rfind("digraph \"FRM2\" {", 0) == 0);
  CHECK(f.find("rankdir=BT") != std::string::npos);
}
