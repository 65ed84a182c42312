#include "locforge/intloc.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace locforge {

IndexedPoset IntLocalePresentation::indexed_poset() const {
  IndexedPoset ip;
  ip.base = base;
  for (const auto& L : fibres) {
    ip.names.push_back(L->names());
    ip.top.push_back(L->top());
  }
  ip.leq = [this](ObjId c, Elem a, Elem b) { return fibres[c]->leq(a, b); };
  ip.reindex = [this](ArrowId g, Elem V) { return inv(g, V); };
  return ip;
}

PresentationPtr validate_presentation(CategoryPtr base, std::vector<FramePtr> fibres,
                                      const std::vector<std::vector<Elem>>& transitions) {
  const FinCategory& C = *base;
  if (fibres.size() != C.num_objects() || transitions.size() != C.num_arrows())
    fail(ErrorKind::NotFunctorial, "presentation tables have the wrong size");
  auto P = std::make_shared<IntLocalePresentation>();
  P->base = base;
  P->fibres = fibres;

  std::vector<FrameHom> homs;
  for (ArrowId g = 0; g < C.num_arrows(); ++g) {
    try {
      homs.push_back(validate_frame_hom(fibres[C.dst(g)], fibres[C.src(g)], transitions[g]));
    } catch (const Error& e) {
      fail(e.kind(), std::string(e.what()) + " (transition of " + C.arrow_name(g) + ")",
           {{"arrow", C.arrow_name(g)}, {"detail", e.witness()}});
    }
    if (C.is_identity(g))
      for (Elem V = 0; V < transitions[g].size(); ++V)
        if (transitions[g][V] != V)
          fail(ErrorKind::NotFunctorial, "identity transition is not the identity", {{"arrow", C.arrow_name(g)}});
  }
  for (ArrowId g = 0; g < C.num_arrows(); ++g)
    for (ArrowId h : C.out_of(C.dst(g))) {
      const auto& hg = transitions[C.compose(h, g)];
      for (Elem V = 0; V < hg.size(); ++V)
        if (hg[V] != transitions[g][transitions[h][V]])
          fail(ErrorKind::NotFunctorial, "(h.g)^{-1} differs from g^{-1}.h^{-1}",
               {{"pair", json::array({C.arrow_name(h), C.arrow_name(g)})},
                {"element", fibres[C.dst(h)]->name(V)}});
    }
  for (ArrowId g = 0; g < C.num_arrows(); ++g) {
    try {
      P->transitions.push_back(check_open(homs[g]));
    } catch (const Error& e) {
      fail(e.kind(), std::string(e.what()) + " (transition of " + C.arrow_name(g) + ")",
           {{"arrow", C.arrow_name(g)}, {"detail", e.witness()}});
    }
  }
  return P;
}

PresentationPtr constant_presentation(CategoryPtr base, FramePtr L) {
  std::vector<Elem> id(L->size());
  std::iota(id.begin(), id.end(), 0);
  std::vector<FramePtr> fibres(base->num_objects(), L);
  std::vector<std::vector<Elem>> tr(base->num_arrows(), id);
  return validate_presentation(base, fibres, tr);
}

bool same_presentation(const IntLocalePresentation& a, const IntLocalePresentation& b) {
  const FinCategory& A = *a.base;
  const FinCategory& B = *b.base;
  if (A.num_objects() != B.num_objects() || A.num_arrows() != B.num_arrows()) return false;
  for (ObjId c = 0; c < A.num_objects(); ++c)
    if (A.object_name(c) != B.object_name(c) || !same_frame(a.fibre(c), b.fibre(c))) return false;
  for (ArrowId g = 0; g < A.num_arrows(); ++g)
    if (A.arrow_name(g) != B.arrow_name(g) || a.transitions[g].hom.map != b.transitions[g].hom.map) return false;
  return true;
}

KLSite build_kl_site(PresentationPtr P, const Budget& budget, bool with_topology) {
  KLSite s{P, GrothendieckConstruction::build(P->indexed_poset(), budget), nullptr, nullptr};
  if (with_topology) {
    auto space = std::make_shared<SieveSpace>(SieveSpace::build(s.gc.cat(), budget.sieves));
    auto K = std::make_shared<GrothendieckTopology>(s.gc.cat());
    for (ObjId x = 0; x < s.gc.cat()->num_objects(); ++x)
      for (const auto& S : space->on(x))
        if (is_KL_covering(*P, s.gc, S)) K->add(S);
    s.space = space;
    s.K = K;
  }
  return s;
}

Elem cover_join(const IntLocalePresentation& P, const GrothendieckConstruction& gc, const Sieve& S) {
  const FinCategory& T = *gc.cat();
  const FinFrame& Ld = P.fibre(gc.base_object(S.base));
  Elem acc = Ld.bottom();
  for (ArrowId a : sieve_arrows(T, S)) acc = Ld.join(acc, P.ex(gc.base_arrow(a), gc.element(T.src(a))));
  return acc;
}

bool is_KL_covering(const IntLocalePresentation& P, const GrothendieckConstruction& gc, const Sieve& S) {
  return cover_join(P, gc, S) == gc.element(S.base);
}

GeneratingCovers generating_covers(const IntLocalePresentation& P, const GrothendieckConstruction& gc, ObjId x,
                                   std::size_t budget) {
  const FinCategory& B = *P.base;
  ObjId d = gc.base_object(x);
  Elem V = gc.element(x);
  const FinFrame& Ld = P.fibre(d);
  GeneratingCovers out;
  for (ArrowId f : B.into(d))
    for (Elem U = 0; U < P.fibre(B.src(f)).size(); ++U)
      if (P.ex(f, U) == V) out.species_a.push_back({*gc.lift(f, U, V)});
  const std::size_t n = Ld.size();
  if (n >= 63 || (std::size_t{1} << n) > budget)
    fail(ErrorKind::BudgetExceeded, "species-B enumeration exceeds the budget", {{"fibre_size", n}});
  for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
    Elem j = Ld.bottom();
    std::vector<ArrowId> fam;
    for (Elem U = 0; U < n; ++U)
      if (s >> U & 1) j = Ld.join(j, U);
    if (j != V) continue;
    for (Elem U = 0; U < n; ++U)
      if (s >> U & 1) fam.push_back(*gc.lift(B.identity(d), U, V));
    out.species_b.push_back(fam);
  }
  return out;
}

json RBCResult::to_json() const {
  json j = verdict.to_json();
  j["strategies"] = {{"primary", primary},
                     {"oracle", oracle ? json(*oracle) : json(nullptr)},
                     {"topology", topology ? json(*topology) : json(nullptr)}};
  j["oracle_budget_exceeded"] = oracle_budget_exceeded;
  return j;
}

namespace {

std::vector<Elem> top_down(const FinFrame& L) {
  std::vector<Elem> order(L.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> below(L.size(), 0);
  for (Elem a = 0; a < L.size(); ++a)
    for (Elem b = 0; b < L.size(); ++b) below[a] += L.leq(b, a);
  std::stable_sort(order.begin(), order.end(), [&](Elem a, Elem b) { return below[a] > below[b]; });
  return order;
}

json rbc_witness(const IntLocalePresentation& P, const GrothendieckConstruction& gc, ArrowId h, const Sieve& S,
                 Elem expected, Elem got) {
  const FinCategory& T = *gc.cat();
  const FinCategory& B = *P.base;
  ObjId d = gc.base_object(S.base);
  Elem V = gc.element(S.base);
  ArrowId hh = *gc.lift(h, P.inv(h, V), V);
  Sieve R = pullback_sieve(T, S, hh);
  return {{"arrow", B.arrow_name(h)},
          {"object", T.object_name(S.base)},
          {"sieve", sieve_to_json(T, S)},
          {"along", T.arrow_name(hh)},
          {"pullback", sieve_to_json(T, R)},
          {"expected", P.fibre(B.src(h)).name(expected)},
          {"join", P.fibre(B.src(h)).name(got)},
          {"base_object", B.object_name(d)}};
}

}  // namespace

std::optional<json> rbc_primary_witness(const IntLocalePresentation& P, const GrothendieckConstruction& gc) {
  const FinCategory& B = *P.base;
  for (ArrowId f = 0; f < B.num_arrows(); ++f) {
    ObjId c = B.src(f), d = B.dst(f);
    // commuting squares h.g = f.k for every h into d
    std::vector<std::vector<std::pair<ArrowId, ArrowId>>> squares;
    for (ArrowId h : B.into(d)) {
      auto& sq = squares.emplace_back();
      ObjId e = B.src(h);
      for (ArrowId g : B.into(e))
        for (ArrowId k : B.hom(B.src(g), c))
          if (B.compose(h, g) == B.compose(f, k)) sq.push_back({g, k});
    }
    for (Elem U : top_down(P.fibre(c))) {
      Elem V = P.ex(f, U);
      for (std::size_t i = 0; i < B.into(d).size(); ++i) {
        ArrowId h = B.into(d)[i];
        const FinFrame& Le = P.fibre(B.src(h));
        Elem lhs = P.inv(h, V);
        Elem rhs = Le.bottom();
        for (auto [g, k] : squares[i]) rhs = Le.join(rhs, P.ex(g, P.inv(k, U)));
        if (lhs != rhs) {
          Sieve S = principal_sieve(*gc.cat(), *gc.lift(f, U, V));
          json w = rbc_witness(P, gc, h, S, lhs, rhs);
          w["generator"] = gc.cat()->arrow_name(*gc.lift(f, U, V));
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<json> rbc_oracle_witness(const IntLocalePresentation& P, const KLSite& site) {
  const auto& gc = site.gc;
  const FinCategory& T = *gc.cat();
  const FinCategory& B = *P.base;
  for (ObjId x = 0; x < T.num_objects(); ++x) {
    ObjId d = gc.base_object(x);
    Elem V = gc.element(x);
    for (const auto& S : site.space->on(x)) {
      if (!is_KL_covering(P, gc, S)) continue;
      for (ArrowId h : B.into(d)) {
        Elem hV = P.inv(h, V);
        Sieve R = pullback_sieve(T, S, *gc.lift(h, hV, V));
        Elem j = cover_join(P, gc, R);
        if (j != hV) return rbc_witness(P, gc, h, S, hV, j);
      }
    }
  }
  return std::nullopt;
}

RBCResult check_relative_BC(PresentationPtr P, const Budget& budget, OracleMode mode) {
  RBCResult r;
  KLSite site = build_kl_site(P, budget, false);
  auto w = rbc_primary_witness(*P, site.gc);
  r.primary = !w;
  if (w) r.verdict.add_failure(*w);
  if (mode == OracleMode::never) return r;
  try {
    site = build_kl_site(P, budget, true);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    r.oracle_budget_exceeded = true;
    if (mode == OracleMode::always) r.verdict.status = Status::budget_exceeded;
    return r;
  }
  r.oracle = !rbc_oracle_witness(*P, site);
  r.topology = topology_axioms(*site.K, *site.space).ok();
  return r;
}

// ---- pullbacks ------------------------------------------------------------------------------

std::vector<PullbackSquare> pullback_squares(const FinCategory& C, ArrowId f, ArrowId h) {
  ObjId c = C.src(f), d = C.src(h);
  std::vector<PullbackSquare> out;
  auto cones = [&](ObjId q) {
    std::vector<std::pair<ArrowId, ArrowId>> v;
    for (ArrowId k : C.hom(q, c))
      for (ArrowId g : C.hom(q, d))
        if (C.compose(f, k) == C.compose(h, g)) v.push_back({k, g});
    return v;
  };
  for (ObjId p = 0; p < C.num_objects(); ++p)
    for (auto [k, g] : cones(p)) {
      bool universal = true;
      for (ObjId q = 0; q < C.num_objects() && universal; ++q)
        for (auto [k2, g2] : cones(q)) {
          int n = 0;
          for (ArrowId u : C.hom(q, p))
            if (C.compose(k, u) == k2 && C.compose(g, u) == g2) ++n;
          if (n != 1) {
            universal = false;
            break;
          }
        }
      if (universal) out.push_back({k, g, f, h});
    }
  return out;
}

Verdict check_BC_pullbacks(const IntLocalePresentation& P) {
  const FinCategory& C = *P.base;
  Verdict v;
  std::vector<json> missing;
  for (ArrowId f = 0; f < C.num_arrows(); ++f)
    for (ArrowId h : C.into(C.dst(f))) {
      auto sq = pullback_squares(C, f, h);
      if (sq.empty()) {
        missing.push_back({{"kind", "NoPullbacks"}, {"cospan", json::array({C.arrow_name(f), C.arrow_name(h)})}});
        continue;
      }
      for (const auto& s : sq) {
        const FinFrame& Lc = P.fibre(C.src(f));
        for (Elem U = 0; U < Lc.size(); ++U)
          if (P.ex(s.g, P.inv(s.k, U)) != P.inv(s.h, P.ex(s.f, U))) {
            v.add_failure({{"square",
                            {{"k", C.arrow_name(s.k)}, {"g", C.arrow_name(s.g)}, {"f", C.arrow_name(s.f)},
                             {"h", C.arrow_name(s.h)}}},
                           {"element", Lc.name(U)}});
            break;
          }
      }
    }
  if (v.ok() && !missing.empty()) {
    v.status = Status::inapplicable;
    v.witnesses = missing;
  }
  return v;
}

// ---- Omega ----------------------------------------------------------------------------------

PresentationPtr omega_presentation(CategoryPtr C, std::size_t budget) {
  std::vector<FramePtr> fibres;
  std::vector<std::unordered_map<Bits, Elem>> index;
  std::vector<std::vector<Sieve>> all;
  for (ObjId c = 0; c < C->num_objects(); ++c) {
    auto S = sieves_on(*C, c, budget);
    std::vector<std::string> names;
    std::vector<std::pair<Elem, Elem>> leq;
    auto& idx = index.emplace_back();
    for (Elem i = 0; i < S.size(); ++i) {
      std::string nm = "{";
      for (ArrowId f : sieve_arrows(*C, S[i])) nm += (nm.size() > 1 ? "," : "") + C->arrow_name(f);
      names.push_back(nm + "}");
      idx[S[i].arrows] = i;
      for (Elem j = 0; j < S.size(); ++j)
        if (S[i].arrows.is_subset_of(S[j].arrows)) leq.push_back({i, j});
    }
    fibres.push_back(FinFrame::from_order(names, leq));
    all.push_back(std::move(S));
  }
  std::vector<std::vector<Elem>> tr;
  for (ArrowId g = 0; g < C->num_arrows(); ++g) {
    auto& m = tr.emplace_back();
    for (const auto& S : all[C->dst(g)]) m.push_back(index[C->src(g)].at(pullback_sieve(*C, S, g).arrows));
  }
  return validate_presentation(C, fibres, tr);
}

OmegaSheaf omega_sheaf_of(const KLSite& site, const Budget& budget) {
  const IntLocalePresentation& P = *site.P;
  const auto& gc = site.gc;
  if (auto w = rbc_primary_witness(P, gc))
    fail(ErrorKind::NotInternalLocale, "presentation fails relative Beck-Chevalley", *w);
  const FinCategory& T = *gc.cat();
  std::vector<std::vector<std::string>> names(T.num_objects());
  std::vector<std::vector<std::int64_t>> pos(T.num_objects());
  for (ObjId x = 0; x < T.num_objects(); ++x) {
    const FinFrame& L = P.fibre(gc.base_object(x));
    pos[x].assign(L.size(), -1);
    for (Elem V = 0; V < L.size(); ++V)
      if (L.leq(V, gc.element(x))) {
        pos[x][V] = static_cast<std::int64_t>(names[x].size());
        names[x].push_back(L.name(V));
      }
  }
  std::vector<std::vector<Elem>> tr(T.num_arrows());
  for (ArrowId a = 0; a < T.num_arrows(); ++a) {
    ObjId x = T.src(a), y = T.dst(a);
    const FinFrame& Lc = P.fibre(gc.base_object(x));
    const FinFrame& Ld = P.fibre(gc.base_object(y));
    Elem U = gc.element(x);
    for (Elem W = 0; W < Ld.size(); ++W) {
      if (pos[y][W] < 0) continue;
      tr[a].push_back(static_cast<Elem>(pos[x][Lc.meet(P.inv(gc.base_arrow(a), W), U)]));
    }
  }
  OmegaSheaf out{validate_presheaf(gc.cat(), names, tr), {}};
  if (!site.K) fail(ErrorKind::InternalInconsistency, "omega_sheaf_of needs the extensional K_L");
  out.sheaf = check_sheaf(out.presheaf, *site.K, budget.maps);
  return out;
}

// ---- gluing ---------------------------------------------------------------------------------

std::optional<ObjId> terminal_object(const FinCategory& C) {
  for (ObjId t = 0; t < C.num_objects(); ++t) {
    bool term = true;
    for (ObjId x = 0; x < C.num_objects() && term; ++x) term = C.hom(x, t).size() == 1;
    if (term) return t;
  }
  return std::nullopt;
}

GlueResult glue(const std::vector<PresentationPtr>& parts, FramePtr middle,
                const std::vector<std::vector<Elem>>& embeddings, const Budget& budget) {
  if (embeddings.size() != parts.size()) fail(ErrorKind::MalformedDocument, "one embedding per part is required");
  struct ArrowInfo {
    int kind;  // 0 part arrow, 1 arrow to the new terminal, 2 identity of the new terminal
    std::size_t part;
    std::uint32_t local;  // arrow (kind 0) or object (kind 1) in the part
  };
  std::vector<std::string> objects;
  std::vector<ObjId> obj_offset, arr_offset;
  std::vector<ObjId> terminals;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const FinCategory& C = *parts[i]->base;
    auto t = terminal_object(C);
    if (!t) fail(ErrorKind::MissingTerminal, "part " + std::to_string(i + 1) + " has no terminal object", {{"part", i + 1}});
    terminals.push_back(*t);
    obj_offset.push_back(static_cast<ObjId>(objects.size()));
    for (ObjId c = 0; c < C.num_objects(); ++c) objects.push_back(std::to_string(i + 1) + "." + C.object_name(c));
  }
  const ObjId top = static_cast<ObjId>(objects.size());
  objects.push_back("1");

  std::vector<Arrow> arrows;
  std::vector<ArrowInfo> info;
  std::vector<ArrowId> identity(objects.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const FinCategory& C = *parts[i]->base;
    arr_offset.push_back(static_cast<ArrowId>(arrows.size()));
    for (ArrowId a = 0; a < C.num_arrows(); ++a) {
      ObjId s = obj_offset[i] + C.src(a), d = obj_offset[i] + C.dst(a);
      if (C.is_identity(a)) identity[s] = static_cast<ArrowId>(arrows.size());
      arrows.push_back({C.is_identity(a) ? "id:" + objects[s] : std::to_string(i + 1) + "." + C.arrow_name(a), s, d});
      info.push_back({0, i, a});
    }
  }
  identity[top] = static_cast<ArrowId>(arrows.size());
  arrows.push_back({"id:1", top, top});
  info.push_back({2, 0, 0});
  std::vector<std::vector<ArrowId>> to_top(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const FinCategory& C = *parts[i]->base;
    for (ObjId c = 0; c < C.num_objects(); ++c) {
      std::string nm = "f" + std::to_string(i + 1);
      if (c != terminals[i]) nm += "." + C.object_name(c);
      to_top[i].push_back(static_cast<ArrowId>(arrows.size()));
      arrows.push_back({nm, obj_offset[i] + c, top});
      info.push_back({1, i, c});
    }
  }
  auto compose = [&](ArrowId q, ArrowId p) -> ArrowId {
    if (arrows[p].src == arrows[p].dst && identity[arrows[p].src] == p) return q;
    if (arrows[q].src == arrows[q].dst && identity[arrows[q].src] == q) return p;
    const ArrowInfo &iq = info[q], &ip = info[p];
    const FinCategory& C = *parts[ip.part]->base;
    if (iq.kind == 0) return arr_offset[ip.part] + C.compose(iq.local, ip.local);
    return to_top[ip.part][C.src(ip.local)];  // (x -> top) . (w -> x) = (w -> top)
  };
  auto D = FinCategory::build(objects, arrows, identity, compose);

  std::vector<FramePtr> fibres;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (const auto& L : parts[i]->fibres) fibres.push_back(L);
  fibres.push_back(middle);
  std::vector<std::vector<Elem>> tr;
  for (ArrowId a = 0; a < arrows.size(); ++a) {
    const ArrowInfo& in = info[a];
    if (in.kind == 0) {
      tr.push_back(parts[in.part]->transitions[in.local].hom.map);
    } else if (in.kind == 2) {
      std::vector<Elem> id(middle->size());
      std::iota(id.begin(), id.end(), 0);
      tr.push_back(id);
    } else {
      const IntLocalePresentation& Pi = *parts[in.part];
      ArrowId bang = Pi.base->hom(in.local, terminals[in.part]).front();
      std::vector<Elem> m;
      for (Elem V = 0; V < middle->size(); ++V) m.push_back(Pi.inv(bang, embeddings[in.part].at(V)));
      tr.push_back(m);
    }
  }

  GlueResult out;
  out.glued = validate_presentation(D, fibres, tr);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto r = check_relative_BC(parts[i], budget, OracleMode::never);
    if (!r.primary) out.verdict.add_failure({{"part", i + 1}, {"relative_bc", r.verdict.witnesses.front()}});
  }
  const IntLocalePresentation& G = *out.glued;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    ArrowId fi = to_top[i][terminals[i]];
    const FinFrame& Li = G.fibre(G.base->src(fi));
    for (std::size_t j = 0; j < parts.size(); ++j) {
      ArrowId fj = to_top[j][terminals[j]];
      const FinFrame& Lj = G.fibre(G.base->src(fj));
      for (Elem V = 0; V < Li.size(); ++V) {
        Elem back = G.inv(fj, G.ex(fi, V));
        Elem want = i == j ? V : Lj.bottom();
        if (back != want) {
          out.verdict.add_failure({{"equation", i == j ? "open embedding" : "disjointness"},
                                   {"parts", json::array({i + 1, j + 1})},
                                   {"element", Li.name(V)},
                                   {"value", Lj.name(back)}});
          break;
        }
      }
    }
  }
  out.glued_rbc = check_relative_BC(out.glued, budget, OracleMode::never);
  out.agree = out.verdict.ok() == out.glued_rbc.primary;
  return out;
}

// ---- monoid actions ---------------------------------------------------------------------------

MonoidResult from_monoid_action(CategoryPtr M, FramePtr L, const std::vector<std::vector<Elem>>& action,
                                const Budget& budget) {
  if (M->num_objects() != 1) fail(ErrorKind::NotAnAction, "a monoid has exactly one object");
  MonoidResult out;
  try {
    out.presentation = validate_presentation(M, {L}, action);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotFunctorial) fail(ErrorKind::NotAnAction, e.what(), e.witness());
    throw;
  }
  const IntLocalePresentation& P = *out.presentation;
  for (ArrowId n = 0; n < M->num_arrows(); ++n)
    for (ArrowId m = 0; m < M->num_arrows(); ++m)
      for (Elem U = 0; U < L->size(); ++U) {
        Elem lhs = P.inv(n, P.ex(m, U));
        Elem rhs = L->bottom();
        for (ArrowId k = 0; k < M->num_arrows(); ++k)
          if (M->compose(n, k) == m) rhs = L->join(rhs, P.ex(k, U));
        if (lhs != rhs) {
          if (out.divisor.ok())
            out.divisor.add_failure({{"n", M->arrow_name(n)}, {"m", M->arrow_name(m)}, {"element", L->name(U)},
                                     {"lhs", L->name(lhs)}, {"rhs", L->name(rhs)}});
        }
      }
  out.rbc = check_relative_BC(out.presentation, budget, OracleMode::never);
  out.agree = out.divisor.ok() == out.rbc.primary;
  return out;
}

// ---- sheaf toposes ------------------------------------------------------------------------------

Presheaf fibre_presheaf(const IntLocalePresentation& P) {
  std::vector<std::vector<std::string>> names;
  for (const auto& L : P.fibres) names.push_back(L->names());
  std::vector<std::vector<Elem>> tr;
  for (const auto& t : P.transitions) tr.push_back(t.hom.map);
  return validate_presheaf(P.base, names, tr);
}

SheafInternalResult check_sheaf_internal(const KLSite& site, const GrothendieckTopology& J, const Budget& budget) {
  const IntLocalePresentation& P = *site.P;
  if (auto w = rbc_primary_witness(P, site.gc))
    fail(ErrorKind::NotInternalLocale, "presentation fails relative Beck-Chevalley", *w);
  if (!site.K) fail(ErrorKind::InternalInconsistency, "check_sheaf_internal needs the extensional K_L");
  SheafInternalResult r;
  r.fibres_sheaf = check_sheaf(fibre_presheaf(P), J, budget.maps);
  GrothendieckTopology Jp = giraud_topology(site.gc.projection(), J, *site.space);
  const FinCategory& T = *site.gc.cat();
  for (ObjId x = 0; x < T.num_objects() && r.giraud.ok(); ++x)
    for (const auto& S : Jp.canonical_covering(x, *site.space))
      if (!site.K->covers(S)) {
        r.giraud.add_failure({{"object", T.object_name(x)}, {"sieve", sieve_to_json(T, S)}});
        break;
      }
  r.agree = r.fibres_sheaf.ok() == r.giraud.ok();
  return r;
}

}  // namespace locforge
