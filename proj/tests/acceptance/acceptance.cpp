// Property checks at desk scale.  One PASS/FAIL line per criterion; exit status 1
// if any line fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "locforge/commands.hpp"
#include "locforge/gen.hpp"
#include "oracles.hpp"

using namespace locforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string str(const json& j) { return j.dump(); }

std::vector<NamedPresentation> internal_fixtures() {
  std::vector<NamedPresentation> out;
  for (auto& np : presentation_corpus())
    if (np.internal_locale) out.push_back(np);
  return out;
}

std::vector<std::pair<NamedPresentation, NamedPresentation>> same_base_pairs() {
  std::vector<std::pair<NamedPresentation, NamedPresentation>> out;
  auto fx = internal_fixtures();
  for (auto& a : fx)
    for (auto& b : fx)
      if (a.P->base == b.P->base || category_to_json(*a.P->base) == category_to_json(*b.P->base))
        out.push_back({a, b});
  return out;
}

// enumerate_morphisms needs the very same base object; rebuild b over a's base when only equal.
PresentationPtr rebase(const PresentationPtr& P, CategoryPtr base) {
  if (P->base == base) return P;
  std::vector<std::vector<Elem>> tr;
  for (const auto& t : P->transitions) tr.push_back(t.hom.map);
  return validate_presentation(base, P->fibres, tr);
}

Outcome witness_shape() {
  auto r = run_command("check-rbc", {{presentation_to_json(*fixture("wedge-const-ch3").P), "."}}, {});
  Outcome o;
  if (r.exit_code != 1 || r.report["verdict"] != "fail") return {false, "verdict " + str(r.report["verdict"])};
  const json& w = r.report["witnesses"][0];
  json sieve = {"f:(1,0)->(2,1)", "f:(1,a)->(2,1)", "f:(1,1)->(2,1)"};
  o.ok = w["arrow"] == "g" && w["generator"] == "f:(1,1)->(2,1)" && w["sieve"] == sieve && w["pullback"].empty();
  o.detail = "arrow " + str(w["arrow"]) + ", generator " + str(w["generator"]) + ", pullback " + str(w["pullback"]);
  return o;
}

Outcome three_way() {
  GenSpec spec;
  spec.count = 200;
  std::size_t checked = 0, skipped = 0, bad = 0;
  std::string first;
  for (const auto& np : gen_presentations(spec)) {
    auto r = check_relative_BC(np.P, {}, OracleMode::always);
    if (r.oracle_budget_exceeded || !r.oracle || !r.topology) {
      ++skipped;
      continue;
    }
    ++checked;
    if (*r.oracle != r.primary || *r.topology != r.primary) {
      if (!bad++) first = np.name;
    }
  }
  Outcome o{checked >= 200 && bad == 0, std::to_string(checked) + " presentations, " + std::to_string(bad) +
                                            " disagreements, " + std::to_string(skipped) + " over budget"};
  if (bad) o.detail += ", first " + first;
  return o;
}

Outcome pullback_bc() {
  GenSpec spec;
  spec.count = 60;
  std::size_t checked = 0, bad = 0;
  auto visit = [&](const NamedPresentation& np) {
    Verdict v = check_BC_pullbacks(*np.P);
    if (v.status == Status::inapplicable) return;
    ++checked;
    if (v.ok() != check_relative_BC(np.P, {}, OracleMode::never).primary) ++bad;
  };
  for (const auto& np : gen_pullback_presentations(spec)) visit(np);
  spec.count = 100;
  for (const auto& np : gen_presentations(spec)) visit(np);
  return {checked > 0 && bad == 0, std::to_string(checked) + " presentations with pullbacks, " + std::to_string(bad) +
                                       " disagreements"};
}

Outcome gluing() {
  GenSpec spec;
  spec.count = 120;
  std::size_t n = 0, pass = 0, bad = 0;
  for (const auto& plan : gen_glue_plans(spec)) {
    auto r = glue(plan.parts, plan.middle, plan.embeddings);
    ++n;
    pass += r.verdict.ok();
    if (!r.agree) ++bad;
  }
  return {n >= 100 && bad == 0 && pass > 0 && pass < n,
          std::to_string(n) + " part-lists (" + std::to_string(pass) + " glue), " + std::to_string(bad) +
              " disagreements"};
}

Outcome monoids() {
  std::size_t actions = 0, bad = 0, oracle_bad = 0;
  std::string first;
  auto frames = all_frames_up_to(4);
  for (const auto& m : all_monoids_up_to(3)) {
    const FinCategory& M = *m.category;
    for (const auto& L : frames) {
      auto opens = oracle::open_homs(*L, *L);
      std::vector<std::vector<Elem>> action(M.num_arrows());
      ArrowId unit = M.identity(0);
      action[unit] = identity_map(*L);
      std::vector<ArrowId> rest;
      for (ArrowId a = 0; a < M.num_arrows(); ++a)
        if (a != unit) rest.push_back(a);
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == rest.size()) {
          bool is_action = oracle::is_action(M, action);
          MonoidResult r;
          try {
            r = from_monoid_action(m.category, L, action);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotAnAction || is_action) ++oracle_bad;
            return;
          }
          if (!is_action) {
            ++oracle_bad;
            return;
          }
          ++actions;
          if (r.divisor.ok() != oracle::divisor_condition(M, *L, action)) ++oracle_bad;
          if (!r.agree && !bad++) {
            std::ostringstream s;
            s << "monoid of order " << m.names.size() << ", frame of size " << L->size() << ": divisor "
              << to_string(r.divisor.status) << ", relative BC " << (r.rbc.primary ? "pass" : "fail");
            first = s.str();
          }
          return;
        }
        for (const auto& h : opens) {
          action[rest[i]] = h;
          rec(i + 1);
        }
      };
      rec(0);
    }
  }
  // the idempotent monoid {1, e}
  auto E = monoid_category({"1", "e"}, {{0, 1}, {1, 1}});
  std::size_t e_actions = 0, e_rejected = 0, e_rbc_rejected = 0;
  for (const auto& L : frames) {
    if (L->size() < 2) continue;
    for (const auto& h : oracle::open_homs(*L, *L)) {
      std::vector<std::vector<Elem>> action = {identity_map(*L), h};
      if (!oracle::is_action(*E, action)) continue;
      auto r = from_monoid_action(E, L, action);
      ++e_actions;
      e_rejected += !r.divisor.ok();
      e_rbc_rejected += !r.rbc.primary;
    }
  }
  std::ostringstream s;
  s << actions << " actions, " << bad << " divisor/relative-BC disagreements, " << oracle_bad << " oracle mismatches; "
    << "{1,e}: divisor rejects " << e_rejected << "/" << e_actions << ", relative BC rejects " << e_rbc_rejected << "/"
    << e_actions;
  if (bad) s << "; first: " << first;
  return {bad == 0 && oracle_bad == 0 && e_actions > 0 && e_rejected == e_actions, s.str()};
}

Outcome site_morphisms() {
  std::size_t pairs = 0, skipped = 0, bad = 0, breve_bad = 0;
  std::string first;
  for (auto& [a, b] : same_base_pairs()) {
    auto S = a.P, T = rebase(b.P, a.P->base);
    std::vector<IntLocaleMorphism> fs;
    try {
      fs = enumerate_morphisms(S, T);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      ++skipped;
      continue;
    }
    auto count = oracle::count_site_morphisms_over_base(S, T);
    if (!count) {
      ++skipped;
      continue;
    }
    ++pairs;
    if (*count != fs.size() && !bad++)
      first = a.name + " -> " + b.name + ": " + std::to_string(fs.size()) + " vs " + std::to_string(*count);
    auto ss = build_kl_site(S), ts = build_kl_site(T);
    for (const auto& f : fs) {
      try {
        if (!breve(f, ss, ts).site_morphism.ok()) ++breve_bad;
      } catch (const Error&) {
        ++breve_bad;
      }
    }
  }
  Outcome o{pairs > 0 && bad == 0 && breve_bad == 0,
            std::to_string(pairs) + " fixture pairs, " + std::to_string(bad) + " count mismatches, " +
                std::to_string(breve_bad) + " breve failures, " + std::to_string(skipped) + " over budget"};
  if (bad) o.detail += "; first " + first;
  return o;
}

Outcome surjectivity() {
  std::size_t n = 0, bad = 0, skipped = 0;
  for (auto& [a, b] : same_base_pairs()) {
    auto S = a.P, T = rebase(b.P, a.P->base);
    std::vector<IntLocaleMorphism> fs;
    try {
      fs = enumerate_morphisms(S, T);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      ++skipped;
      continue;
    }
    auto ss = build_kl_site(S), ts = build_kl_site(T);
    for (const auto& f : fs) {
      auto r = is_surjective(f, ss, ts);
      if (!r.cover_reflecting) {
        ++skipped;
        continue;
      }
      ++n;
      if (!r.agree()) ++bad;
    }
  }
  return {n > 0 && bad == 0, std::to_string(n) + " morphisms, " + std::to_string(bad) + " disagreements, " +
                                 std::to_string(skipped) + " over budget"};
}

Outcome terminality() {
  std::size_t n = 0, bad = 0, skipped = 0;
  std::string first;
  for (const auto& np : internal_fixtures()) {
    try {
      auto r = terminal_into_omega(np.P);
      ++n;
      if (r.count != 1 && !bad++) first = np.name + " has " + std::to_string(r.count);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      ++skipped;
    }
  }
  return {n > 0 && bad == 0, std::to_string(n) + " fixtures, " + std::to_string(bad) + " without a unique map" +
                                 (bad ? " (" + first + ")" : "") + ", " + std::to_string(skipped) + " over budget"};
}

Outcome nucleus_bijections() {
  std::vector<PresentationPtr> ps = {fixture("omega-wedge").P, fixture("z2-diamond").P};
  for (const auto& L : all_frames_up_to(5)) ps.push_back(constant_presentation(terminal_category(), L));
  std::size_t nuclei = 0, bad = 0;
  for (const auto& P : ps) {
    auto gc = GrothendieckConstruction::build(P->indexed_poset());
    auto ks = enumerate_internal_nuclei(P);
    auto lts = enumerate_lt_candidates(*P, gc);
    if (ks.size() != lts.size()) ++bad;
    for (const auto& k : ks) {
      ++nuclei;
      auto sub = sublocale_of(k);
      if (!(nucleus_of_embedding(sub.embedding) == k)) ++bad;
      if (sublocale_of(nucleus_of_embedding(sub.embedding)).fixed != sub.fixed) ++bad;
      if (!(internal_nucleus_from_lt(P, gc, lt_from_internal_nucleus(k, gc)) == k)) ++bad;
    }
    for (const auto& lt : lts)
      if (!(lt_from_internal_nucleus(internal_nucleus_from_lt(P, gc, lt), gc) == lt)) ++bad;
  }
  return {bad == 0, std::to_string(ps.size()) + " presentations, " + std::to_string(nuclei) + " nuclei, " +
                        std::to_string(bad) + " round-trip failures"};
}

Outcome nucleus_counts() {
  std::size_t n2 = enumerate_nuclei(*two_frame()).size();
  std::size_t n3 = enumerate_nuclei(*chain_frame(3)).size();
  bool oracle_ok = n2 == oracle::nuclei(*two_frame()).size() && n3 == oracle::nuclei(*chain_frame(3)).size();
  auto N = nuclei_frame(fixture("terminal-ch3").P);
  bool dia = oracle::isomorphic(*N.frame, *diamond_frame());
  return {n2 == 2 && n3 == 4 && oracle_ok && dia, "FRM2 " + std::to_string(n2) + ", CH3 " + std::to_string(n3) +
                                                      ", N(CH3) " + (dia ? "" : "not ") + "isomorphic to DIA"};
}

Outcome nucleation_distributes() {
  std::size_t cases = 0, bad = 0;
  std::string first;
  for (const auto& L : all_frames_up_to(5)) {
    auto ns = enumerate_nuclei(*L);
    auto ps = enumerate_prenuclei(*L);
    std::vector<EndoMap> fam;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (!fam.empty()) {
        EndoMap q = pointwise_join(*L, fam);
        EndoMap rhs_inner = nucleation(*L, q).result;
        for (const auto& n : ns) {
          ++cases;
          EndoMap lhs = nucleation(*L, pointwise_meet(*L, {n, q})).result;
          EndoMap rhs = pointwise_meet(*L, {n, rhs_inner});
          if (lhs != rhs && !bad++) first = "frame of size " + std::to_string(L->size());
        }
      }
      if (fam.size() == 3) return;
      for (std::size_t i = from; i < ps.size(); ++i) {
        fam.push_back(ps[i]);
        rec(i);
        fam.pop_back();
      }
    };
    rec(0);
  }
  return {bad == 0, std::to_string(cases) + " (nucleus, family) cases, " + std::to_string(bad) + " failures" +
                        (bad ? "; first on " + first : "")};
}

Outcome nuclei_frames() {
  std::size_t n = 0, bad = 0, skipped = 0;
  std::string first;
  for (const auto& np : internal_fixtures()) {
    try {
      auto N = nuclei_frame(np.P);
      ++n;
      bool open = true;
      for (const auto& p : N.projection_open) open = open && p.frobenius && p.heyting;
      // the frame must survive a fresh validation from its order
      std::vector<std::pair<Elem, Elem>> leq;
      for (Elem a = 0; a < N.frame->size(); ++a)
        for (Elem b = 0; b < N.frame->size(); ++b)
          if (N.frame->leq(a, b)) leq.push_back({a, b});
      FinFrame::from_order(N.frame->names(), leq);
      if ((!N.ok() || !open) && !bad++) first = np.name;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) {
        if (!bad++) first = np.name + ": " + e.what();
        continue;
      }
      ++skipped;
    }
  }
  return {n > 0 && bad == 0, std::to_string(n) + " fixtures, " + std::to_string(bad) + " failures" +
                                 (bad ? " (" + first + ")" : "") + ", " + std::to_string(skipped) + " over budget"};
}

Outcome factorisation() {
  std::size_t n = 0, bad = 0, skipped = 0;
  for (auto& [a, b] : same_base_pairs()) {
    auto S = a.P, T = rebase(b.P, a.P->base);
    std::vector<IntLocaleMorphism> fs;
    try {
      fs = enumerate_morphisms(S, T);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      ++skipped;
      continue;
    }
    for (const auto& f : fs) {
      ++n;
      auto fz = factorize(f);
      bool ok = fz.composite_ok && is_surjective(fz.s).pointwise && is_embedding(fz.e);
      for (ObjId c = 0; c < S->base->num_objects() && ok; ++c)
        for (Elem V = 0; V < T->fibre(c).size() && ok; ++V) ok = f(c, V) == fz.s(c, fz.e(c, V));
      bad += !ok;
    }
  }
  return {n > 0 && bad == 0, std::to_string(n) + " morphisms, " + std::to_string(bad) + " failures, " +
                                 std::to_string(skipped) + " pairs over budget"};
}

Outcome omega_sheaves() {
  std::size_t n = 0, bad = 0, skipped = 0;
  std::string first;
  for (const auto& np : internal_fixtures()) {
    try {
      auto site = build_kl_site(np.P);
      auto om = omega_sheaf_of(site);
      ++n;
      if ((!om.sheaf.ok() || !oracle::is_sheaf(om.presheaf, *site.K)) && !bad++) first = np.name;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      ++skipped;
    }
  }
  return {n > 0 && bad == 0, std::to_string(n) + " fixtures, " + std::to_string(bad) + " non-sheaves" +
                                 (bad ? " (" + first + ")" : "") + ", " + std::to_string(skipped) + " over budget"};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  std::size_t reports = 0, bad = 0;
  const char* cmds[] = {"check-rbc", "omega-sheaf", "terminal-omega", "nuclei-enumerate", "nuclei-frame",
                        "lt-roundtrip", "check-bc-pullbacks"};
  for (const char* name : {"omega-wedge", "z2-diamond", "wedge-const-ch3", "terminal-dia"}) {
    Document d{presentation_to_json(*fixture(name).P), "."};
    for (const char* c : cmds) {
      auto a = run_command(c, {d}, {}), b = run_command(c, {d}, {});
      ++reports;
      if (a.exit_code != b.exit_code || a.report.dump(2) != b.report.dump(2)) ++bad;
    }
  }
  fs::path base = fs::temp_directory_path() / ("locforge-acceptance-" + std::to_string(::getpid()));
  CommandOptions o;
  o.seed = 12345;
  o.out_dir = base / "a";
  auto ga = run_command("gen", {}, o);
  o.out_dir = base / "b";
  auto gb = run_command("gen", {}, o);
  ++reports;
  if (ga.report.dump() != gb.report.dump()) ++bad;
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(base / "a")) {
    ++files;
    if (read_file(e.path()) != read_file(base / "b" / e.path().filename())) ++bad;
  }
  fs::remove_all(base);
  return {bad == 0 && files > 0, std::to_string(reports) + " reports and " + std::to_string(files) +
                                     " generated files, " + std::to_string(bad) + " differences"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> cs = {
      {"counterexample witness on wedge-const-ch3", witness_shape},
      {"three-way relative BC agreement", three_way},
      {"pullback BC agrees with relative BC", pullback_bc},
      {"gluing verdict agrees with relative BC", gluing},
      {"monoid divisor criterion", monoids},
      {"morphisms match site morphisms over the base", site_morphisms},
      {"surjectivity: injective components iff cover reflection", surjectivity},
      {"unique map into Omega", terminality},
      {"nucleus round trips", nucleus_bijections},
      {"nucleus counts and N(CH3)", nucleus_counts},
      {"nucleation distributes over nucleus meets", nucleation_distributes},
      {"pointwise frame of nuclei", nuclei_frames},
      {"image factorisation", factorisation},
      {"Omega-presheaf is a sheaf", omega_sheaves},
      {"reports are deterministic", determinism},
  };
  int failed = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    Outcome o;
    auto t = std::chrono::steady_clock::now();
    try {
      o = cs[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    failed += !o.ok;
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.ok ? "PASS" : "FAIL", i + 1, cs[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed in %.1fs\n", failed, cs.size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return failed == 0 ? 0 : 1;
}
