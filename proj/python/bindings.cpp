#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "locforge/commands.hpp"
#include "locforge/gen.hpp"

namespace py = pybind11;
using namespace locforge;

namespace {

OracleMode oracle_mode(const std::string& s) {
  if (s == "always") return OracleMode::always;
  if (s == "never") return OracleMode::never;
  if (s == "auto") return OracleMode::automatic;
  throw py::value_error("oracle must be always, auto or never");
}

// Documents arrive as JSON text; relative references resolve against base_dir.
py::tuple run(const std::string& command, const std::vector<std::string>& docs, const std::string& base_dir,
              std::size_t sieves, std::size_t maps, const std::string& oracle, const std::string& out_dir,
              std::uint64_t seed, std::size_t count) {
  CommandOptions opts;
  opts.budget.sieves = sieves;
  opts.budget.maps = maps;
  opts.oracle = oracle_mode(oracle);
  opts.out_dir = out_dir;
  opts.seed = seed;
  opts.count = count;
  std::vector<Document> in;
  for (const auto& d : docs) {
    json v = json::parse(d, nullptr, false);
    if (v.is_discarded()) return py::make_tuple(2, std::string(), std::string(), std::string("MalformedDocument: invalid JSON"));
    in.push_back({std::move(v), base_dir});
  }
  CommandResult r;
  {
    py::gil_scoped_release nogil;
    r = run_command(command, in, opts);
  }
  return py::make_tuple(r.exit_code, r.report.is_null() ? std::string() : r.report.dump(), r.text, r.diagnostics);
}

}  // namespace

PYBIND11_MODULE(_locforge, m) {
  m.doc() = "Finite internal locales: checks and constructions";

  Budget b;
  m.def("run", &run, py::arg("command"), py::arg("documents"), py::arg("base_dir") = ".",
        py::arg("budget_sieves") = b.sieves, py::arg("budget_maps") = b.maps, py::arg("oracle") = "auto",
        py::arg("out_dir") = "", py::arg("seed") = 0, py::arg("count") = 20);
  m.def("commands", &command_names);

  m.def("fixture_names", [] {
    std::vector<std::string> names;
    for (const auto& np : presentation_corpus()) names.push_back(np.name);
    return names;
  });
  m.def("fixture", [](const std::string& name) { return presentation_to_json(*fixture(name).P).dump(); });
  m.def("frame_corpus", [] {
    std::vector<std::string> out;
    for (const auto& L : frame_corpus()) out.push_back(frame_to_json(*L).dump());
    return out;
  });
  m.def("default_seed", [] { return seed_from_env(); });
}
