#include <cstdio>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "locforge/commands.hpp"

using namespace locforge;

int main(int argc, char** argv) {
  CLI::App app{"Finite internal locales: checks, constructions and fixtures", "locale-forge"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string format = "json", oracle = "auto";
  app.add_option("--budget-sieves", opts.budget.sieves, "sieves per object")->capture_default_str();
  app.add_option("--budget-maps", opts.budget.maps, "candidate assignments per enumeration")->capture_default_str();
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--oracle", oracle, "run brute-force cross-checks")->check(CLI::IsMember({"always", "auto", "never"}));
  app.add_flag("--timing", opts.timing, "add wall-clock timing to the report");

  const std::map<std::string, std::string> about = {
      {"validate", "validate any document"},
      {"check-rbc", "relative Beck-Chevalley condition of a presentation"},
      {"check-bc-pullbacks", "Beck-Chevalley condition for pullback squares"},
      {"check-site-morphism", "is a functor a morphism of sites"},
      {"check-comorphism", "is a functor a comorphism of sites"},
      {"check-sheaf", "sheaf condition of a presheaf"},
      {"omega", "sieve presentation of a category"},
      {"omega-sheaf", "Omega-presheaf on the total category and its sheaf verdict"},
      {"glue", "glue parts along disjoint open embeddings"},
      {"monoid", "presentation from a monoid action, divisor condition"},
      {"morphism-validate", "validate an internal locale morphism and its site morphism"},
      {"surjective", "pointwise injectivity against cover reflection"},
      {"embedding", "pointwise surjectivity of the components"},
      {"factorize", "surjection-embedding factorisation"},
      {"terminal-omega", "the unique morphism into Omega"},
      {"nuclei-enumerate", "all internal nuclei"},
      {"nuclei-frame", "the frame of internal nuclei and its projections"},
      {"nucleation", "least nucleus above an internal pre-nucleus"},
      {"lt-roundtrip", "nuclei against Lawvere-Tierney candidates"},
      {"mixing-square", "comma sites and the mixing functor"},
      {"export-dot", "DOT for a category, frame or nuclei-frame report"},
      {"gen", "write the fixture corpus and random instances"},
  };
  std::map<std::string, std::vector<std::string>> paths;
  for (const auto& name : command_names()) {
    auto it = about.find(name);
    auto* sub = app.add_subcommand(name, it == about.end() ? "" : it->second);
    sub->fallthrough();
    if (name == "gen") {
      sub->add_option("--out", opts.out_dir, "output directory")->required();
      sub->add_option("--count", opts.count, "random presentations after the corpus");
      sub->add_option("--seed", opts.seed, "overrides LOCALE_FORGE_SEED");
    } else {
      sub->add_option("documents", paths[name], "input documents")->required();
    }
  }

  CLI11_PARSE(app, argc, argv);
  opts.oracle = oracle == "always" ? OracleMode::always : oracle == "never" ? OracleMode::never : OracleMode::automatic;

  const std::string command = app.get_subcommands().front()->get_name();
  CommandResult res;
  try {
    std::vector<Document> docs;
    for (const auto& p : paths[command]) docs.push_back(load_document(p));
    res = run_command(command, docs, opts);
  } catch (const Error& e) {
    res.exit_code = 2;
    res.diagnostics = std::string(to_string(e.kind())) + ": " + e.what();
  }

  if (!res.diagnostics.empty()) std::cerr << "locale-forge: " << res.diagnostics << "\n";
  if (!res.text.empty()) {
    std::cout << res.text;
  } else if (!res.report.is_null()) {
    std::cout << (format == "text" ? render_text(res.report) : res.report.dump(2) + "\n");
  }
  return res.exit_code;
}
