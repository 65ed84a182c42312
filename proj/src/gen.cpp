#include "locforge/gen.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace locforge {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* s = std::getenv("LOCALE_FORGE_SEED");
  if (!s || !*s) return fallback;
  return std::strtoull(s, nullptr, 0);
}

std::vector<FramePtr> frame_corpus() {
  return {two_frame(), chain_frame(3), diamond_frame(), chain_frame(4), boolean_frame(3)};
}

namespace {

using Order = std::vector<std::pair<std::size_t, std::size_t>>;

FramePtr random_downset_frame(Rng& rng, std::size_t max_points, std::size_t max_frame) {
  for (;;) {
    std::size_t n = 1 + rng.below(max_points);
    Order order;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.coin()) order.push_back({i, j});
    FramePtr L = downset_frame(n, order);
    if (L->size() <= max_frame) return L;
  }
}

// Down-set frames of every labelled poset on up to `points` points whose
// order relation only goes upward in label order (every poset has such a labelling).
void for_each_poset(std::size_t points, const std::function<void(std::size_t, const Order&)>& visit) {
  for (std::size_t n = 0; n <= points; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
    for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
      Order o;
      for (std::size_t b = 0; b < pairs.size(); ++b)
        if (mask >> b & 1) o.push_back(pairs[b]);
      visit(n, o);
    }
  }
}

FramePtr product_frame(const std::vector<FramePtr>& fs) {
  std::vector<std::vector<Elem>> tuples{{}};
  for (const auto& F : fs) {
    std::vector<std::vector<Elem>> next;
    for (const auto& t : tuples)
      for (Elem e = 0; e < F->size(); ++e) {
        auto u = t;
        u.push_back(e);
        next.push_back(u);
      }
    tuples = next;
  }
  std::vector<std::string> names;
  std::vector<std::pair<Elem, Elem>> leq;
  for (Elem a = 0; a < tuples.size(); ++a) {
    std::string nm = "(";
    for (std::size_t i = 0; i < fs.size(); ++i) nm += (i ? "," : "") + fs[i]->name(tuples[a][i]);
    names.push_back(nm + ")");
    for (Elem b = 0; b < tuples.size(); ++b) {
      bool le = true;
      for (std::size_t i = 0; i < fs.size() && le; ++i) le = fs[i]->leq(tuples[a][i], tuples[b][i]);
      if (le) leq.push_back({a, b});
    }
  }
  return FinFrame::from_order(names, leq);
}

// projection of a product frame onto factor i
std::vector<Elem> projection_map(const std::vector<FramePtr>& fs, std::size_t i) {
  std::size_t stride = 1;
  for (std::size_t k = i + 1; k < fs.size(); ++k) stride *= fs[k]->size();
  std::size_t size = 1;
  for (const auto& F : fs) size *= F->size();
  std::vector<Elem> m(size);
  for (std::size_t a = 0; a < size; ++a) m[a] = static_cast<Elem>(a / stride % fs[i]->size());
  return m;
}

// Free category on a finite DAG given by edges (src, dst); arrows are the paths.
struct FreeCategory {
  CategoryPtr cat;
  std::vector<std::vector<std::size_t>> path;  // arrow -> edge indices, first edge first
};

FreeCategory free_category(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                           const std::vector<std::string>& edge_names) {
  RawCategory r;
  for (std::size_t i = 0; i < n; ++i) r.objects.push_back(std::to_string(i));
  std::vector<std::vector<std::size_t>> paths;
  std::function<void(std::vector<std::size_t>)> extend = [&](std::vector<std::size_t> p) {
    paths.push_back(p);
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].first == edges[p.back()].second) {
        auto q = p;
        q.push_back(e);
        extend(q);
      }
  };
  for (std::size_t e = 0; e < edges.size(); ++e) extend({e});
  auto name = [&](const std::vector<std::size_t>& p) {
    std::string s;
    for (std::size_t k = p.size(); k-- > 0;) s += (s.empty() ? "" : ".") + edge_names[p[k]];
    return s;
  };
  std::map<std::vector<std::size_t>, std::string> names;
  for (const auto& p : paths) {
    names[p] = name(p);
    r.arrows.push_back({names[p], std::to_string(edges[p.front()].first), std::to_string(edges[p.back()].second)});
  }
  for (const auto& p : paths)
    for (const auto& q : paths)
      if (edges[p.back()].second == edges[q.front()].first) {
        auto pq = p;
        pq.insert(pq.end(), q.begin(), q.end());
        r.compose.push_back({names[q], names[p], names.at(pq)});
      }
  FreeCategory out{validate_category(r), {}};
  const FinCategory& C = *out.cat;
  out.path.resize(C.num_arrows());
  for (const auto& p : paths) out.path[*C.find_arrow(names[p])] = p;
  return out;
}

std::vector<FrameHom> open_homs(FramePtr source, FramePtr target) {
  std::vector<FrameHom> out;
  for (auto& h : enumerate_frame_homs(source, target)) {
    OpenReport r = open_report(h);
    if (r.frobenius && r.heyting) out.push_back(std::move(h));
  }
  return out;
}

std::vector<FramePtr> small_pool(const GenSpec& spec, Rng& rng) {
  std::vector<FramePtr> pool;
  for (const auto& F : all_frames_up_to(std::min<std::size_t>(spec.max_frame, 5)))
    if (F->size() > 1) pool.push_back(F);
  pool.push_back(random_downset_frame(rng, spec.max_points, spec.max_frame));
  return pool;
}

PresentationPtr presentation_on_free(const FreeCategory& fc, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                     Rng& rng, const std::vector<FramePtr>& pool) {
  const FinCategory& C = *fc.cat;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<FramePtr> fibres;
    for (ObjId c = 0; c < C.num_objects(); ++c) fibres.push_back(pool[rng.below(pool.size())]);
    std::vector<FrameHom> edge_hom;
    bool ok = true;
    for (auto [s, d] : edges) {
      auto h = random_open_hom(fibres[d], fibres[s], rng);
      if (!h) {
        ok = false;
        break;
      }
      edge_hom.push_back(*h);
    }
    if (!ok) continue;
    std::vector<std::vector<Elem>> tr(C.num_arrows());
    for (ArrowId a = 0; a < C.num_arrows(); ++a) {
      if (C.is_identity(a)) {
        tr[a].resize(fibres[C.src(a)]->size());
        std::iota(tr[a].begin(), tr[a].end(), 0);
        continue;
      }
      // path e1 then e2 ...: (ek...e1)^{-1} = e1^{-1} ... ek^{-1}
      const auto& p = fc.path[a];
      FrameHom acc = edge_hom[p.back()];
      for (std::size_t k = p.size() - 1; k-- > 0;) acc = compose_homs(edge_hom[p[k]], acc);
      tr[a] = acc.map;
    }
    return validate_presentation(fc.cat, fibres, tr);
  }
  return nullptr;
}

PresentationPtr group_presentation(int n, FramePtr L, Rng& rng) {
  CategoryPtr G = cyclic_group_category(n);
  std::vector<std::vector<Elem>> autos;
  for (const auto& h : enumerate_frame_homs(L, L)) {
    if (!is_injective(h.map)) continue;
    std::vector<Elem> pw(L->size());
    std::iota(pw.begin(), pw.end(), 0);
    for (int k = 0; k < n; ++k)
      for (auto& x : pw) x = h.map[x];
    bool order_divides = true;
    for (Elem x = 0; x < pw.size(); ++x) order_divides &= pw[x] == x;
    if (order_divides) autos.push_back(h.map);
  }
  const auto& s = autos[rng.below(autos.size())];
  std::vector<std::vector<Elem>> tr(G->num_arrows());
  // the arrow s^k acts by the k-th power of the chosen automorphism
  for (ArrowId a = 0; a < G->num_arrows(); ++a) {
    const std::string& nm = G->arrow_name(a);
    int k = nm == "id:*" ? 0 : (nm == "s" ? 1 : std::stoi(nm.substr(1)));
    std::vector<Elem> m(L->size());
    std::iota(m.begin(), m.end(), 0);
    for (int i = 0; i < k; ++i)
      for (auto& x : m) x = s[x];
    tr[a] = m;
  }
  return validate_presentation(G, std::vector<FramePtr>(1, L), tr);
}

std::vector<std::pair<std::size_t, std::size_t>> random_dag(Rng& rng, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      // orient by label to stay acyclic, but let either endpoint be the source
      bool forward = i < j;
      if (!forward) continue;
      std::size_t r = rng.below(6);
      if (r < 2) edges.push_back({i, j});
      else if (r < 4) edges.push_back({j, i});
      else if (r == 4 && rng.below(4) == 0) {  // occasionally a parallel pair
        edges.push_back({i, j});
        edges.push_back({i, j});
      }
    }
  // no cycles: j -> i and i -> j cannot both occur, and longer cycles are ruled out by the check below
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [s, d] : edges) adj[s].push_back(d);
  std::vector<int> state(n, 0);
  bool cyclic = false;
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    state[v] = 1;
    for (auto w : adj[v]) {
      if (state[w] == 1) cyclic = true;
      else if (state[w] == 0) dfs(w);
    }
    state[v] = 2;
  };
  for (std::size_t v = 0; v < n; ++v)
    if (!state[v]) dfs(v);
  if (cyclic) return random_dag(rng, n);
  return edges;
}

std::vector<std::string> edge_names(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

PresentationPtr glued(const std::vector<PresentationPtr>& parts, FramePtr middle,
                      const std::vector<std::vector<Elem>>& emb) {
  return glue(parts, middle, emb, Budget{}).glued;
}

}  // namespace

std::vector<FramePtr> gen_frames(const GenSpec& spec) {
  auto out = frame_corpus();
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(random_downset_frame(rng, spec.max_points, spec.max_frame));
  return out;
}

std::vector<FramePtr> all_frames_up_to(std::size_t n) {
  std::vector<FramePtr> found;
  // every finite distributive lattice is the down-set lattice of its join-irreducibles,
  // and a lattice with n elements has at most n - 1 of them
  std::size_t points = n == 0 ? 0 : std::min<std::size_t>(n - 1, 6);
  for_each_poset(points, [&](std::size_t k, const Order& o) {
    FramePtr L = downset_frame(k, o);
    if (L->size() > n) return;
    for (const auto& F : found)
      if (find_isomorphism(*F, *L)) return;
    found.push_back(L);
  });
  std::stable_sort(found.begin(), found.end(), [](const FramePtr& a, const FramePtr& b) { return a->size() < b->size(); });
  return found;
}

std::optional<FrameHom> random_open_hom(FramePtr source, FramePtr target, Rng& rng) {
  auto hs = open_homs(std::move(source), std::move(target));
  if (hs.empty()) return std::nullopt;
  return hs[rng.below(hs.size())];
}

// ---- fixtures -----------------------------------------------------------------------------------

std::vector<NamedPresentation> presentation_corpus() {
  std::vector<NamedPresentation> out;
  auto T = terminal_category();
  auto W = wedge_category();
  out.push_back({"arrow-const-ch3", constant_presentation(arrow_category(), chain_frame(3)), true});
  out.push_back({"wedge-const-ch3", constant_presentation(W, chain_frame(3)), false});
  out.push_back({"terminal-frm2", constant_presentation(T, two_frame()), true});
  out.push_back({"terminal-ch3", constant_presentation(T, chain_frame(3)), true});
  out.push_back({"terminal-dia", constant_presentation(T, diamond_frame()), true});
  out.push_back({"terminal-ch4", constant_presentation(T, chain_frame(4)), true});
  out.push_back({"terminal-bool3", constant_presentation(T, boolean_frame(3)), true});
  out.push_back({"chain3-const-dia", constant_presentation(chain_category(3), diamond_frame()), true});
  out.push_back({"z2-const-ch3", constant_presentation(cyclic_group_category(2), chain_frame(3)), true});
  out.push_back({"wedge-const-frm2", constant_presentation(W, two_frame()), false});
  out.push_back({"omega-terminal", omega_presentation(T), true});
  out.push_back({"omega-arrow", omega_presentation(arrow_category()), true});
  out.push_back({"omega-wedge", omega_presentation(W), true});
  out.push_back({"omega-span", omega_presentation(span_category()), true});
  out.push_back({"omega-chain3", omega_presentation(chain_category(3)), true});
  {
    auto G = cyclic_group_category(2);
    std::vector<std::vector<Elem>> tr(G->num_arrows());
    for (ArrowId a = 0; a < G->num_arrows(); ++a)
      tr[a] = G->is_identity(a) ? std::vector<Elem>{0, 1, 2, 3} : std::vector<Elem>{0, 2, 1, 3};
    out.push_back({"z2-diamond", validate_presentation(G, {diamond_frame()}, tr), true});
  }
  {
    auto pt = constant_presentation(T, two_frame());
    auto B = boolean_frame(2);
    std::vector<std::vector<Elem>> emb(2);
    std::vector<Elem> atoms;
    for (Elem e = 0; e < B->size(); ++e)
      if (e != B->bottom() && B->height() > 0) {
        bool atom = true;
        for (Elem x = 0; x < B->size(); ++x)
          if (x != B->bottom() && x != e && B->leq(x, e)) atom = false;
        if (atom) atoms.push_back(e);
      }
    for (std::size_t i = 0; i < 2; ++i)
      for (Elem V = 0; V < B->size(); ++V) emb[i].push_back(B->leq(atoms[i], V) ? 1 : 0);
    out.push_back({"wedge-glued-bool", glued({pt, pt}, B, emb), true});
  }
  {
    auto pt = constant_presentation(T, two_frame());
    auto Om = omega_presentation(W);
    ObjId two = *W->find_object("2");
    const FinFrame& M = Om->fibre(two);
    std::vector<std::vector<Elem>> emb(2);
    for (Elem V = 0; V < M.size(); ++V) {
      emb[0].push_back(Om->inv(*W->find_arrow("f"), V));
      emb[1].push_back(Om->inv(*W->find_arrow("g"), V));
    }
    out.push_back({"wedge-glued-omega", glued({pt, pt}, Om->fibres[two], emb), true});
  }
  return out;
}

NamedPresentation fixture(const std::string& name) {
  for (auto& p : presentation_corpus())
    if (p.name == name) return p;
  fail(ErrorKind::MalformedDocument, "unknown fixture " + name);
}

std::vector<NamedPresentation> gen_presentations(const GenSpec& spec) {
  auto out = presentation_corpus();
  Rng rng(spec.seed);
  auto pool = small_pool(spec, rng);
  std::size_t made = 0;
  while (made < spec.count) {
    std::size_t kind = rng.below(5);
    PresentationPtr P;
    std::string name;
    if (kind == 0) {
      int n = 2 + static_cast<int>(rng.below(2));
      P = group_presentation(n, pool[rng.below(pool.size())], rng);
      name = "random-z" + std::to_string(n);
    } else {
      std::size_t n = 1 + rng.below(spec.max_objects);
      auto edges = random_dag(rng, n);
      if (edges.empty()) continue;
      auto fc = free_category(n, edges, edge_names(edges.size()));
      P = presentation_on_free(fc, edges, rng, pool);
      name = "random-free";
    }
    if (!P) continue;
    out.push_back({name + "-" + std::to_string(made), P, false});
    ++made;
  }
  return out;
}

std::vector<NamedPresentation> gen_pullback_presentations(const GenSpec& spec) {
  std::vector<NamedPresentation> out;
  Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  auto pool = small_pool(spec, rng);
  const std::vector<std::vector<std::pair<std::size_t, std::size_t>>> shapes = {
      {{0, 1}}, {{0, 1}, {1, 2}}, {{1, 0}, {1, 2}}, {{0, 1}, {2, 1}}, {{0, 1}, {0, 1}}};
  std::size_t made = 0;
  while (made < spec.count) {
    std::size_t kind = rng.below(shapes.size() + 1);
    PresentationPtr P;
    if (kind == shapes.size()) {
      P = group_presentation(2 + static_cast<int>(rng.below(2)), pool[rng.below(pool.size())], rng);
    } else {
      const auto& e = shapes[kind];
      std::size_t n = 0;
      for (auto [s, d] : e) n = std::max({n, s + 1, d + 1});
      P = presentation_on_free(free_category(n, e, edge_names(e.size())), e, rng, pool);
    }
    if (!P) continue;
    out.push_back({"pullback-" + std::to_string(made), P, false});
    ++made;
  }
  return out;
}

std::vector<GluePlan> gen_glue_plans(const GenSpec& spec) {
  Rng rng(spec.seed ^ 0x51ed27ULL);
  auto pool = small_pool(spec, rng);
  const std::vector<std::vector<std::pair<std::size_t, std::size_t>>> shapes = {
      {}, {{0, 1}}, {{0, 1}, {1, 2}}, {{0, 2}, {1, 2}}};
  std::vector<GluePlan> out;
  while (out.size() < spec.count) {
    GluePlan plan;
    std::size_t k = 1 + rng.below(3);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& e = shapes[rng.below(shapes.size())];
      PresentationPtr P;
      if (e.empty()) {
        P = constant_presentation(terminal_category(), pool[rng.below(std::min<std::size_t>(pool.size(), 4))]);
      } else {
        std::size_t n = 0;
        for (auto [s, d] : e) n = std::max({n, s + 1, d + 1});
        // Mostly internal locales, so that the embeddings decide the verdict.
        bool want_locale = rng.below(8) != 0;
        auto C = free_category(n, e, edge_names(e.size()));
        for (int tries = 0; tries < 32; ++tries) {
          P = presentation_on_free(C, e, rng, pool);
          if (P && (!want_locale || check_relative_BC(P, {}, OracleMode::never).primary)) break;
        }
      }
      if (P) plan.parts.push_back(P);
    }
    if (plan.parts.empty()) continue;
    std::vector<FramePtr> tops;
    for (const auto& P : plan.parts) tops.push_back(P->fibres[*terminal_object(*P->base)]);
    std::size_t size = 1;
    for (const auto& F : tops) size *= F->size();
    if (rng.coin() && size <= 40) {
      // product of the terminal fibres with its projections: disjoint open embeddings
      plan.middle = product_frame(tops);
      for (std::size_t i = 0; i < tops.size(); ++i) plan.embeddings.push_back(projection_map(tops, i));
    } else {
      plan.middle = pool[rng.below(pool.size())];
      bool ok = true;
      for (const auto& F : tops) {
        auto h = random_open_hom(plan.middle, F, rng);
        if (!h) {
          ok = false;
          break;
        }
        plan.embeddings.push_back(h->map);
      }
      if (!ok) continue;
    }
    out.push_back(std::move(plan));
  }
  return out;
}

std::vector<InternalNucleus> gen_nuclei(PresentationPtr P, const GenSpec& spec, const Budget& budget) {
  try {
    return enumerate_internal_nuclei(P, budget);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
  }
  Rng rng(spec.seed);
  const std::size_t n = P->base->num_objects();
  std::vector<std::vector<EndoMap>> per;
  for (ObjId c = 0; c < n; ++c) per.push_back(enumerate_nuclei(P->fibre(c), budget.maps));
  std::vector<InternalNucleus> out{identity_nucleus(P), top_nucleus(P)};
  auto add = [&](const InternalNucleus& j) {
    if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
  };
  for (std::size_t t = 0; t < spec.count * 16; ++t) {
    std::vector<EndoMap> comps;
    for (ObjId c = 0; c < n; ++c) comps.push_back(per[c][rng.below(per[c].size())]);
    try {
      add(validate_internal_nucleus(P, comps));
    } catch (const Error&) {
    }
  }
  for (std::size_t a = 0; a < out.size() && out.size() < spec.count * 4; ++a)
    for (std::size_t b = 0; b < a; ++b) {
      add(nuclei_meet(P, {out[a], out[b]}));
      add(nuclei_join(P, {out[a], out[b]}));
    }
  return out;
}

std::vector<FiniteMonoid> all_monoids_up_to(std::size_t n) {
  std::vector<FiniteMonoid> out;
  const std::vector<std::string> letters = {"1", "a", "b", "c"};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<std::vector<int>>> found;
    std::vector<std::vector<int>> t(k, std::vector<int>(k, 0));
    for (std::size_t i = 0; i < k; ++i) t[0][i] = t[i][0] = static_cast<int>(i);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 1; i < k; ++i)
      for (std::size_t j = 1; j < k; ++j) cells.push_back({i, j});
    std::vector<int> perm(k);
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
      if (idx == cells.size()) {
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b)
            for (std::size_t c = 0; c < k; ++c)
              if (t[t[a][b]][c] != t[a][t[b][c]]) return;
        // skip tables isomorphic to one already found (permutations fixing the unit)
        std::iota(perm.begin(), perm.end(), 0);
        do {
          for (const auto& f : found) {
            bool same = true;
            for (std::size_t a = 0; a < k && same; ++a)
              for (std::size_t b = 0; b < k && same; ++b) same = perm[t[a][b]] == f[perm[a]][perm[b]];
            if (same) return;
          }
        } while (std::next_permutation(perm.begin() + 1, perm.end()));
        found.push_back(t);
        return;
      }
      auto [i, j] = cells[idx];
      for (std::size_t v = 0; v < k; ++v) {
        t[i][j] = static_cast<int>(v);
        rec(idx + 1);
      }
    };
    rec(0);
    for (const auto& f : found) {
      std::vector<std::string> names(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(k));
      out.push_back({names, f, monoid_category(names, f)});
    }
  }
  return out;
}

}  // namespace locforge
