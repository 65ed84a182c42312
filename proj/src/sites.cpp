#include "locforge/sites.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace locforge {

SieveSpace SieveSpace::build(CategoryPtr C, std::size_t budget) {
  SieveSpace s;
  s.cat_ = C;
  for (ObjId c = 0; c < C->num_objects(); ++c) {
    s.sieves_.push_back(sieves_on(*C, c, budget));
    auto& idx = s.index_.emplace_back();
    for (std::size_t i = 0; i < s.sieves_.back().size(); ++i) idx.emplace(s.sieves_.back()[i].arrows, i);
  }
  return s;
}

std::optional<std::size_t> SieveSpace::index_of(const Sieve& S) const {
  auto it = index_[S.base].find(S.arrows);
  if (it == index_[S.base].end()) return std::nullopt;
  return it->second;
}

GrothendieckTopology::GrothendieckTopology(CategoryPtr C)
    : cat_(std::move(C)), sets_(cat_->num_objects()), lists_(cat_->num_objects()) {}

bool GrothendieckTopology::add(const Sieve& S) {
  if (!sets_[S.base].insert(S.arrows).second) return false;
  lists_[S.base].push_back(S);
  return true;
}

bool GrothendieckTopology::has_cover_inside(ObjId c, const Bits& T) const {
  for (const auto& S : lists_[c])
    if (S.arrows.is_subset_of(T)) return true;
  return false;
}

std::vector<Sieve> GrothendieckTopology::canonical_covering(ObjId c, const SieveSpace& space) const {
  std::vector<Sieve> out;
  for (const auto& S : space.on(c))
    if (covers(S)) out.push_back(S);
  return out;
}

bool GrothendieckTopology::operator==(const GrothendieckTopology& o) const {
  return cat_ == o.cat_ && sets_ == o.sets_;
}

GrothendieckTopology trivial_topology(CategoryPtr C) {
  GrothendieckTopology J(C);
  for (ObjId c = 0; c < C->num_objects(); ++c) J.add(maximal_sieve(*C, c));
  return J;
}

namespace {

// {f into c | f^*R covering}
Bits local_cover_set(const FinCategory& C, const GrothendieckTopology& J, const Sieve& R) {
  const auto& in = C.into(R.base);
  Bits T(in.size());
  for (std::size_t i = 0; i < in.size(); ++i)
    if (J.covers(pullback_sieve(C, R, in[i]))) T.set(i);
  return T;
}

}  // namespace

Verdict topology_axioms(const GrothendieckTopology& J, const SieveSpace& space) {
  const FinCategory& C = *J.cat();
  Verdict v;
  bool stab_failed = false, trans_failed = false;
  for (ObjId c = 0; c < C.num_objects(); ++c)
    if (!J.covers(maximal_sieve(C, c))) {
      v.add_failure({{"axiom", "maximality"}, {"object", C.object_name(c)}});
      break;
    }
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    for (const auto& S : J.covering(c)) {
      if (stab_failed) break;
      for (ArrowId h : C.into(c)) {
        if (!J.covers(pullback_sieve(C, S, h))) {
          stab_failed = true;
          v.add_failure({{"axiom", "stability"},
                         {"object", C.object_name(c)},
                         {"sieve", sieve_to_json(C, S)},
                         {"arrow", C.arrow_name(h)}});
          break;
        }
      }
    }
    if (trans_failed) continue;
    for (const auto& R : space.on(c)) {
      if (J.covers(R)) continue;
      Bits T = local_cover_set(C, J, R);
      for (const auto& S : J.covering(c))
        if (S.arrows.is_subset_of(T)) {
          trans_failed = true;
          v.add_failure({{"axiom", "transitivity"},
                         {"object", C.object_name(c)},
                         {"sieve", sieve_to_json(C, R)},
                         {"cover", sieve_to_json(C, S)}});
          break;
        }
      if (trans_failed) break;
    }
  }
  return v;
}

GrothendieckTopology validate_topology(CategoryPtr C, const std::vector<Sieve>& covers, const SieveSpace& space) {
  GrothendieckTopology J(C);
  for (const auto& S : covers) {
    if (!is_sieve(*C, S)) fail(ErrorKind::MalformedDocument, "listed cover is not a sieve", {{"sieve", sieve_to_json(*C, S)}});
    J.add(S);
  }
  Verdict v = topology_axioms(J, space);
  if (!v.ok()) {
    const json& w = v.witnesses.front();
    std::string axiom = w.at("axiom");
    ErrorKind k = axiom == "maximality" ? ErrorKind::NotMaximal
                  : axiom == "stability" ? ErrorKind::NotStable
                                         : ErrorKind::NotTransitive;
    fail(k, "topology axiom fails: " + axiom, w);
  }
  return J;
}

GrothendieckTopology topology_closure(const SieveSpace& space, const std::vector<Sieve>& generators) {
  const FinCategory& C = *space.cat();
  GrothendieckTopology J(space.cat());
  for (ObjId c = 0; c < C.num_objects(); ++c) J.add(maximal_sieve(C, c));
  for (const auto& S : generators) J.add(S);
  bool changed = true;
  while (changed) {
    changed = false;
    for (ObjId c = 0; c < C.num_objects(); ++c) {
      // covering(c) may grow while we pull back along identities; index loop on purpose
      for (std::size_t i = 0; i < J.covering(c).size(); ++i) {
        Sieve S = J.covering(c)[i];
        for (ArrowId h : C.into(c)) changed |= J.add(pullback_sieve(C, S, h));
      }
    }
    for (ObjId c = 0; c < C.num_objects(); ++c)
      for (const auto& R : space.on(c)) {
        if (J.covers(R)) continue;
        if (J.has_cover_inside(c, local_cover_set(C, J, R))) changed |= J.add(R);
      }
  }
  return J;
}

Verdict check_comorphism(const FinFunctor& F, const GrothendieckTopology& J, const GrothendieckTopology& K) {
  const FinCategory& C = *F.source;
  const FinCategory& D = *F.target;
  Verdict v;
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    const auto& in = C.into(c);
    for (const auto& S : K.covering(F.obj(c))) {
      Bits R(in.size());
      for (std::size_t i = 0; i < in.size(); ++i)
        if (S.arrows.test(D.local_index(F.arr(in[i])))) R.set(i);
      if (!J.has_cover_inside(c, R))
        v.add_failure({{"object", C.object_name(c)}, {"sieve", sieve_to_json(D, S)}});
    }
  }
  return v;
}

Verdict check_morphism_of_sites(const FinFunctor& F, const GrothendieckTopology& J, const GrothendieckTopology& K) {
  const FinCategory& C = *F.source;
  const FinCategory& D = *F.target;
  Verdict v;

  // (1) covering families are sent to covering families
  for (ObjId c = 0; c < C.num_objects(); ++c)
    for (const auto& S : J.covering(c))
      if (!K.covers(image_sieve(F, S)))
        v.add_failure({{"condition", 1}, {"object", C.object_name(c)}, {"sieve", sieve_to_json(C, S)}});

  // (2) every d is covered by arrows d' -> d with d' mapping into the image
  std::vector<char> reaches(D.num_objects(), 0);
  for (ObjId d2 = 0; d2 < D.num_objects(); ++d2)
    for (ObjId c = 0; c < C.num_objects() && !reaches[d2]; ++c)
      if (!D.hom(d2, F.obj(c)).empty()) reaches[d2] = 1;
  for (ObjId d = 0; d < D.num_objects(); ++d) {
    const auto& in = D.into(d);
    Bits T(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
      if (reaches[D.src(in[i])]) T.set(i);
    if (!K.has_cover_inside(d, T)) v.add_failure({{"condition", 2}, {"object", D.object_name(d)}});
  }

  // (3) relative binary products
  for (ObjId c1 = 0; c1 < C.num_objects(); ++c1)
    for (ObjId c2 = 0; c2 < C.num_objects(); ++c2) {
      // pairs (F(f1).k, F(f2).k) reachable from each d'
      std::vector<std::set<std::pair<ArrowId, ArrowId>>> reach(D.num_objects());
      for (ObjId c = 0; c < C.num_objects(); ++c)
        for (ArrowId f1 : C.hom(c, c1))
          for (ArrowId f2 : C.hom(c, c2))
            for (ArrowId k : D.into(F.obj(c)))
              reach[D.src(k)].insert({D.compose(F.arr(f1), k), D.compose(F.arr(f2), k)});
      for (ObjId d = 0; d < D.num_objects(); ++d)
        for (ArrowId g1 : D.hom(d, F.obj(c1)))
          for (ArrowId g2 : D.hom(d, F.obj(c2))) {
            const auto& in = D.into(d);
            Bits T(in.size());
            for (std::size_t i = 0; i < in.size(); ++i) {
              ArrowId h = in[i];
              if (reach[D.src(h)].count({D.compose(g1, h), D.compose(g2, h)})) T.set(i);
            }
            if (!K.has_cover_inside(d, T))
              v.add_failure({{"condition", 3},
                             {"objects", json::array({C.object_name(c1), C.object_name(c2)})},
                             {"arrows", json::array({D.arrow_name(g1), D.arrow_name(g2)})}});
          }
    }

  // (4) relative equalizers
  for (ObjId c1 = 0; c1 < C.num_objects(); ++c1)
    for (ObjId c = 0; c < C.num_objects(); ++c) {
      auto par = C.hom(c1, c);
      for (ArrowId f1 : par)
        for (ArrowId f2 : par) {
          std::vector<std::set<ArrowId>> reach(D.num_objects());
          for (ArrowId e : C.into(c1))
            if (C.compose(f1, e) == C.compose(f2, e))
              for (ArrowId k : D.into(F.obj(C.src(e)))) reach[D.src(k)].insert(D.compose(F.arr(e), k));
          for (ArrowId g : D.into(F.obj(c1))) {
            if (D.compose(F.arr(f1), g) != D.compose(F.arr(f2), g)) continue;
            ObjId d = D.src(g);
            const auto& in = D.into(d);
            Bits T(in.size());
            for (std::size_t i = 0; i < in.size(); ++i)
              if (reach[D.src(in[i])].count(D.compose(g, in[i]))) T.set(i);
            if (!K.has_cover_inside(d, T))
              v.add_failure({{"condition", 4},
                             {"arrows", json::array({C.arrow_name(f1), C.arrow_name(f2)})},
                             {"equalized", D.arrow_name(g)}});
          }
        }
    }
  return v;
}

GrothendieckTopology giraud_topology(const FinFunctor& F, const GrothendieckTopology& K, const SieveSpace& source_space) {
  const FinCategory& C = *F.source;
  const FinCategory& D = *F.target;
  std::vector<Sieve> gens;
  for (ObjId x = 0; x < C.num_objects(); ++x) {
    const auto& in = C.into(x);
    for (const auto& R : K.covering(F.obj(x))) {
      Sieve S = empty_sieve(C, x);
      for (std::size_t i = 0; i < in.size(); ++i)
        if (R.arrows.test(D.local_index(F.arr(in[i])))) S.arrows.set(i);
      gens.push_back(S);
    }
  }
  return topology_closure(source_space, gens);
}

// ---- presheaves ---------------------------------------------------------------------------

Presheaf validate_presheaf(CategoryPtr C, std::vector<std::vector<std::string>> names,
                           std::vector<std::vector<Elem>> transition) {
  Presheaf P{C, std::move(names), std::move(transition)};
  if (P.names.size() != C->num_objects() || P.transition.size() != C->num_arrows())
    fail(ErrorKind::NotFunctorial, "presheaf tables have the wrong size");
  for (ArrowId f = 0; f < C->num_arrows(); ++f) {
    const auto& t = P.transition[f];
    if (t.size() != P.size(C->dst(f))) fail(ErrorKind::NotFunctorial, "transition is not total", {{"arrow", C->arrow_name(f)}});
    for (Elem x : t)
      if (x >= P.size(C->src(f)))
        fail(ErrorKind::NotFunctorial, "transition value out of range", {{"arrow", C->arrow_name(f)}});
    if (C->is_identity(f))
      for (Elem x = 0; x < t.size(); ++x)
        if (t[x] != x) fail(ErrorKind::NotFunctorial, "identity not preserved", {{"arrow", C->arrow_name(f)}});
  }
  for (ArrowId f = 0; f < C->num_arrows(); ++f)
    for (ArrowId g : C->out_of(C->dst(f))) {
      const auto& gf = P.transition[C->compose(g, f)];
      for (Elem x = 0; x < gf.size(); ++x)
        if (gf[x] != P.transition[f][P.transition[g][x]])
          fail(ErrorKind::NotFunctorial, "composite not preserved",
               {{"pair", json::array({C->arrow_name(g), C->arrow_name(f)})}, {"element", P.names[C->dst(g)][x]}});
    }
  return P;
}

Verdict check_sheaf(const Presheaf& P, const GrothendieckTopology& J, std::size_t budget) {
  const FinCategory& C = *P.cat;
  Verdict v;
  std::size_t nodes = 0;
  for (ObjId c = 0; c < C.num_objects() && v.ok(); ++c) {
    for (const auto& S : J.covering(c)) {
      auto arrows = sieve_arrows(C, S);
      const std::size_t m = arrows.size();
      std::vector<std::int64_t> pos(C.into(c).size(), -1);
      for (std::size_t i = 0; i < m; ++i) pos[C.local_index(arrows[i])] = static_cast<std::int64_t>(i);

      // amalgamation map x |-> (P(f)x)_f
      std::map<std::vector<Elem>, Elem> amalg;
      json witness;
      for (Elem x = 0; x < P.size(c) && witness.is_null(); ++x) {
        std::vector<Elem> fam(m);
        for (std::size_t i = 0; i < m; ++i) fam[i] = P.transition[arrows[i]][x];
        auto [it, fresh] = amalg.emplace(fam, x);
        if (!fresh)
          witness = {{"object", C.object_name(c)},
                     {"sieve", sieve_to_json(C, S)},
                     {"reason", "two amalgamations"},
                     {"elements", json::array({P.names[c][it->second], P.names[c][x]})}};
      }

      // enumerate matching families; every one must be in the image
      std::vector<std::int64_t> val(m, -1);
      std::vector<std::size_t> trail;
      std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        while (i < m && val[i] >= 0) ++i;
        if (i == m) {
          std::vector<Elem> fam(val.begin(), val.end());
          if (!amalg.count(fam)) {
            json fj = json::object();
            for (std::size_t k = 0; k < m; ++k) fj[C.arrow_name(arrows[k])] = P.names[C.src(arrows[k])][fam[k]];
            witness = {{"object", C.object_name(c)},
                       {"sieve", sieve_to_json(C, S)},
                       {"reason", "no amalgamation"},
                       {"family", fj}};
            return false;
          }
          return true;
        }
        ArrowId f = arrows[i];
        for (Elem x = 0; x < P.size(C.src(f)); ++x) {
          if (++nodes > budget) fail(ErrorKind::BudgetExceeded, "matching-family enumeration budget exceeded");
          std::size_t mark = trail.size();
          bool ok = true;
          for (ArrowId k : C.into(C.src(f))) {
            std::size_t j = static_cast<std::size_t>(pos[C.local_index(C.compose(f, k))]);
            std::int64_t want = P.transition[k][x];
            if (val[j] < 0) {
              val[j] = want;
              trail.push_back(j);
            } else if (val[j] != want) {
              ok = false;
              break;
            }
          }
          bool cont = ok ? rec(i + 1) : true;
          while (trail.size() > mark) {
            val[trail.back()] = -1;
            trail.pop_back();
          }
          if (!cont) return false;
        }
        return true;
      };
      if (witness.is_null()) rec(0);
      if (!witness.is_null()) {
        v.add_failure(witness);
        break;
      }
    }
  }
  return v;
}

// ---- comma sites ------------------------------------------------------------------------------

bool CommaSite::ok() const {
  return axioms.ok() && pi_C_comorphism.ok() && i_F_morphism.ok() && pi_D_morphism.ok() && pi_D_comorphism.ok();
}

CommaSite comma_site(const FinFunctor& F, const GrothendieckTopology& J, const GrothendieckTopology& K,
                     const Budget& budget) {
  Verdict pre = check_morphism_of_sites(F, J, K);
  if (!pre.ok()) fail(ErrorKind::CoverLiftFail, "comma_site needs a morphism of sites", pre.to_json());
  CommaCategory comma = comma_category(F, budget);
  SieveSpace space = SieveSpace::build(comma.cat, budget.sieves);
  GrothendieckTopology Kt(comma.cat);
  for (ObjId x = 0; x < comma.cat->num_objects(); ++x)
    for (const auto& S : space.on(x))
      if (K.covers(image_sieve(comma.pi_D, S))) Kt.add(S);
  CommaSite out{comma, Kt, {}, {}, {}, {}, {}};
  out.axioms = topology_axioms(Kt, space);
  out.pi_C_comorphism = check_comorphism(comma.pi_C, Kt, J);
  out.i_F_morphism = check_morphism_of_sites(comma.i_F, J, Kt);
  out.pi_D_morphism = check_morphism_of_sites(comma.pi_D, Kt, K);
  out.pi_D_comorphism = check_comorphism(comma.pi_D, Kt, K);
  return out;
}

Verdict check_fibration(const FinFunctor& A) {
  const FinCategory& C = *A.source;
  const FinCategory& E = *A.target;
  Verdict v;
  for (ObjId c = 0; c < C.num_objects(); ++c)
    for (ArrowId u : E.into(A.obj(c))) {
      bool found = false;
      for (ArrowId phi : C.into(c)) {
        if (A.arr(phi) != u) continue;
        ObjId c1 = C.src(phi);
        bool cartesian = true;
        for (ArrowId psi : C.into(c)) {
          ObjId c2 = C.src(psi);
          for (ArrowId w : E.hom(A.obj(c2), A.obj(c1))) {
            if (E.compose(u, w) != A.arr(psi)) continue;
            int n = 0;
            for (ArrowId chi : C.hom(c2, c1))
              if (C.compose(phi, chi) == psi && A.arr(chi) == w) ++n;
            if (n != 1) cartesian = false;
          }
          if (!cartesian) break;
        }
        if (cartesian) {
          found = true;
          break;
        }
      }
      if (!found) v.add_failure({{"object", C.object_name(c)}, {"arrow", E.arrow_name(u)}});
    }
  return v;
}

MixingSquare mixing_square(const FinFunctor& A, const FinFunctor& B, const FinFunctor& F, const FinFunctor& G,
                           const GrothendieckTopology& J, const GrothendieckTopology& K,
                           const GrothendieckTopology& L, const GrothendieckTopology& M,
                           const std::vector<ArrowId>& iso, const Budget& budget) {
  const FinCategory& C = *A.source;
  const FinCategory& Fc = *B.target;
  Verdict hyp;
  auto absorb = [&](const char* what, const Verdict& w) {
    for (const auto& x : w.witnesses) hyp.add_failure({{"hypothesis", what}, {"detail", x}});
  };
  Verdict fa = check_fibration(A), fb = check_fibration(B);
  if (!fa.ok()) fail(ErrorKind::NotCartesianLift, "A is not a fibration", fa.witnesses.front());
  if (!fb.ok()) fail(ErrorKind::NotCartesianLift, "B is not a fibration", fb.witnesses.front());
  absorb("A comorphism", check_comorphism(A, J, L));
  absorb("B comorphism", check_comorphism(B, K, M));
  if (iso.size() != C.num_objects()) fail(ErrorKind::MalformedDocument, "iso needs one component per object");
  for (ObjId c = 0; c < C.num_objects(); ++c) {
    ArrowId p = iso[c];
    if (Fc.src(p) != B.obj(F.obj(c)) || Fc.dst(p) != G.obj(A.obj(c)))
      fail(ErrorKind::MalformedDocument, "iso component has the wrong endpoints", {{"object", C.object_name(c)}});
    bool invertible = false;
    for (ArrowId q : Fc.hom(Fc.dst(p), Fc.src(p)))
      if (Fc.is_identity(Fc.compose(q, p)) && Fc.is_identity(Fc.compose(p, q))) invertible = true;
    if (!invertible) hyp.add_failure({{"hypothesis", "iso invertible"}, {"object", C.object_name(c)}});
  }
  for (ArrowId g = 0; g < C.num_arrows(); ++g)
    if (Fc.compose(G.arr(A.arr(g)), iso[C.src(g)]) != Fc.compose(iso[C.dst(g)], B.arr(F.arr(g))))
      hyp.add_failure({{"hypothesis", "iso natural"}, {"arrow", C.arrow_name(g)}});

  MixingSquare out{comma_site(F, J, K, budget), comma_site(G, L, M, budget), {}, hyp, {}, {}};
  const CommaCategory& left = out.left.comma;
  const CommaCategory& right = out.right.comma;
  std::vector<ObjId> ho;
  std::vector<ArrowId> ha;
  for (auto [c, a] : left.objects) {
    auto y = right.find_object(A.obj(c), Fc.compose(iso[c], B.arr(a)));
    if (!y) fail(ErrorKind::InternalInconsistency, "H object missing in the target comma category");
    ho.push_back(*y);
  }
  for (ArrowId p = 0; p < left.cat->num_arrows(); ++p) {
    auto [g, h] = left.parts[p];
    auto q = right.find_arrow(ho[left.cat->src(p)], ho[left.cat->dst(p)], A.arr(g), B.arr(h));
    if (!q) fail(ErrorKind::InternalInconsistency, "H arrow missing in the target comma category");
    ha.push_back(*q);
  }
  out.H = validate_functor(left.cat, right.cat, ho, ha);
  out.comorphism = check_comorphism(out.H, out.left.topology, out.right.topology);
  if (!same_functor(compose_functors(right.pi_C, out.H), compose_functors(A, left.pi_C)))
    out.square.add_failure({{"square", "pi_E.H = A.pi_C"}});
  if (!same_functor(compose_functors(right.pi_D, out.H), compose_functors(B, left.pi_D)))
    out.square.add_failure({{"square", "pi_F.H = B.pi_D"}});
  return out;
}

}  // namespace locforge
