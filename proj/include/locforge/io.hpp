#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "locforge/nuclei.hpp"

namespace locforge {

// A JSON document plus the directory that relative references inside it resolve against.
struct Document {
  json value;
  std::filesystem::path dir;
};

Document load_document(const std::filesystem::path& path);  // throws MalformedDocument
// Inline object, or a string path relative to the referring document.
Document resolve_ref(const Document& parent, const json& ref);

// What a document looks like: category, frame, presentation, morphism, nucleus,
// functor, presheaf, glue, monoid, mixing-square, nuclei-frame-report, or "" if unknown.
std::string document_kind(const json& doc);

CategoryPtr parse_category(const json& doc);
json category_to_json(const FinCategory& C);

FramePtr parse_frame(const json& doc);
json frame_to_json(const FinFrame& L);

PresentationPtr parse_presentation(const Document& doc);
json presentation_to_json(const IntLocalePresentation& P);

std::vector<Sieve> parse_covers(const FinCategory& C, const json& doc);
// Missing topology: the trivial one.
GrothendieckTopology parse_topology(CategoryPtr C, const json* doc, const Budget& budget);
json topology_to_json(const FinCategory& C, const GrothendieckTopology& J, const SieveSpace& space);

FinFunctor parse_functor(CategoryPtr source, CategoryPtr target, const json& doc);
json functor_to_json(const FinFunctor& F);

IntLocaleMorphism parse_morphism(const Document& doc);
json morphism_to_json(const IntLocaleMorphism& f, bool embed_presentations = true);

// Components need only be natural pre-nuclei when `prenucleus` is set.
InternalNucleus parse_nucleus(const Document& doc, bool prenucleus = false);
std::vector<EndoMap> parse_components(const IntLocalePresentation& P, const json& doc);
json components_to_json(const IntLocalePresentation& P, const std::vector<EndoMap>& comps);
json nucleus_to_json(const InternalNucleus& j);

Presheaf parse_presheaf(CategoryPtr C, const json& doc);

// Map document {"x": "y", ...} between two named carriers, required total.
std::vector<Elem> parse_map(const std::vector<std::string>& from, const std::vector<std::string>& to, const json& doc,
                            const std::string& what);
json map_to_json(const std::vector<std::string>& from, const std::vector<std::string>& to, const std::vector<Elem>& m);

// ---- DOT ------------------------------------------------------------------------------------------

std::string category_dot(const FinCategory& C);
std::string frame_dot(const FinFrame& L, const std::string& name = "frame");

}  // namespace locforge
