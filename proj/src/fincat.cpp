#include "locforge/fincat.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace locforge {

namespace {

json arrow_names(const std::vector<Arrow>& arrows, std::initializer_list<ArrowId> ids) {
  json j = json::array();
  for (ArrowId a : ids) j.push_back(arrows[a].name);
  return j;
}

}  // namespace

CategoryPtr FinCategory::build(std::vector<std::string> objects, std::vector<Arrow> arrows,
                               std::vector<ArrowId> identity, const ComposeFn& compose,
                               bool check_associativity) {
  auto C = std::make_shared<FinCategory>();
  const std::size_t n_obj = objects.size(), n_arr = arrows.size();
  if (identity.size() != n_obj) fail(ErrorKind::MalformedTables, "identity table has wrong size");

  for (ObjId c = 0; c < n_obj; ++c)
    if (!C->object_index_.emplace(objects[c], c).second)
      fail(ErrorKind::MalformedTables, "duplicate object " + objects[c], {{"object", objects[c]}});
  for (ArrowId f = 0; f < n_arr; ++f) {
    if (arrows[f].src >= n_obj || arrows[f].dst >= n_obj)
      fail(ErrorKind::MalformedTables, "arrow endpoint out of range", {{"arrow", arrows[f].name}});
    if (!C->arrow_index_.emplace(arrows[f].name, f).second)
      fail(ErrorKind::MalformedTables, "duplicate arrow " + arrows[f].name, {{"arrow", arrows[f].name}});
  }
  for (ObjId c = 0; c < n_obj; ++c) {
    ArrowId i = identity[c];
    if (i >= n_arr || arrows[i].src != c || arrows[i].dst != c)
      fail(ErrorKind::MalformedTables, "bad identity for " + objects[c], {{"object", objects[c]}});
  }

  C->into_.assign(n_obj, {});
  C->out_.assign(n_obj, {});
  C->local_.assign(n_arr, 0);
  for (ArrowId f = 0; f < n_arr; ++f) {
    C->local_[f] = static_cast<std::uint32_t>(C->into_[arrows[f].dst].size());
    C->into_[arrows[f].dst].push_back(f);
    C->out_[arrows[f].src].push_back(f);
  }

  C->comp_.assign(n_arr, {});
  for (ArrowId g = 0; g < n_arr; ++g) {
    const auto& fs = C->into_[arrows[g].src];
    auto& row = C->comp_[g];
    row.resize(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
      ArrowId f = fs[i];
      ArrowId h = compose(g, f);
      if (h >= n_arr || arrows[h].src != arrows[f].src || arrows[h].dst != arrows[g].dst)
        fail(ErrorKind::MalformedTables, "composite " + arrows[g].name + "." + arrows[f].name + " has wrong endpoints",
             {{"pair", arrow_names(arrows, {g, f})}});
      row[i] = h;
    }
  }

  C->objects_ = std::move(objects);
  C->arrows_ = std::move(arrows);
  C->identity_ = std::move(identity);

  const auto& A = C->arrows_;
  for (ArrowId f = 0; f < n_arr; ++f) {
    if (C->compose(C->identity(A[f].dst), f) != f || C->compose(f, C->identity(A[f].src)) != f)
      fail(ErrorKind::MalformedTables, "identity law fails for " + A[f].name, {{"arrow", A[f].name}});
  }
  if (check_associativity) {
    for (ArrowId f = 0; f < n_arr; ++f)
      for (ArrowId g : C->out_[A[f].dst])
        for (ArrowId h : C->out_[A[g].dst])
          if (C->compose(h, C->compose(g, f)) != C->compose(C->compose(h, g), f))
            fail(ErrorKind::MalformedTables, "associativity fails", {{"triple", arrow_names(A, {h, g, f})}});
  }
  return C;
}

std::vector<ArrowId> FinCategory::hom(ObjId a, ObjId b) const {
  std::vector<ArrowId> out;
  for (ArrowId f : into_[b])
    if (arrows_[f].src == a) out.push_back(f);
  return out;
}

std::optional<ObjId> FinCategory::find_object(std::string_view name) const {
  auto it = object_index_.find(std::string(name));
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ArrowId> FinCategory::find_arrow(std::string_view name) const {
  auto it = arrow_index_.find(std::string(name));
  if (it == arrow_index_.end()) return std::nullopt;
  return it->second;
}

CategoryPtr validate_category(const RawCategory& raw) {
  std::map<std::string, ObjId> obj;
  for (const auto& o : raw.objects)
    if (!obj.emplace(o, static_cast<ObjId>(obj.size())).second)
      fail(ErrorKind::MalformedTables, "duplicate object " + o, {{"object", o}});

  std::vector<Arrow> arrows;
  std::vector<ArrowId> identity;
  for (ObjId c = 0; c < raw.objects.size(); ++c) {
    identity.push_back(static_cast<ArrowId>(arrows.size()));
    arrows.push_back({"id:" + raw.objects[c], c, c});
  }
  std::map<std::string, ArrowId> by_name;
  for (ArrowId a = 0; a < arrows.size(); ++a) by_name[arrows[a].name] = a;
  for (const auto& ra : raw.arrows) {
    auto s = obj.find(ra.src), d = obj.find(ra.dst);
    if (s == obj.end() || d == obj.end())
      fail(ErrorKind::MalformedTables, "arrow " + ra.name + " has an unknown endpoint", {{"arrow", ra.name}});
    if (by_name.count(ra.name))
      fail(ErrorKind::MalformedTables, "duplicate or reserved arrow name " + ra.name, {{"arrow", ra.name}});
    by_name[ra.name] = static_cast<ArrowId>(arrows.size());
    arrows.push_back({ra.name, s->second, d->second});
  }

  std::map<std::pair<ArrowId, ArrowId>, ArrowId> table;
  for (const auto& rc : raw.compose) {
    auto g = by_name.find(rc.g), f = by_name.find(rc.f), h = by_name.find(rc.h);
    if (g == by_name.end() || f == by_name.end() || h == by_name.end())
      fail(ErrorKind::MalformedTables, "composition entry names an unknown arrow",
           {{"entry", rc.g + "." + rc.f}});
    if (arrows[f->second].dst != arrows[g->second].src)
      fail(ErrorKind::MalformedTables, "composition entry on a non-composable pair",
           {{"pair", json::array({rc.g, rc.f})}});
    auto [it, fresh] = table.emplace(std::make_pair(g->second, f->second), h->second);
    if (!fresh && it->second != h->second)
      fail(ErrorKind::MalformedTables, "conflicting composition entries", {{"pair", json::array({rc.g, rc.f})}});
  }

  auto is_id = [&](ArrowId a) { return identity[arrows[a].src] == a; };
  auto compose = [&](ArrowId g, ArrowId f) -> ArrowId {
    auto it = table.find({g, f});
    if (it != table.end()) return it->second;
    if (is_id(g)) return f;
    if (is_id(f)) return g;
    fail(ErrorKind::MalformedTables, "missing composite " + arrows[g].name + "." + arrows[f].name,
         {{"pair", json::array({arrows[g].name, arrows[f].name})}});
  };
  return FinCategory::build(raw.objects, arrows, identity, compose);
}

// ---- named categories -------------------------------------------------------------

CategoryPtr terminal_category() {
  RawCategory r;
  r.objects = {"*"};
  return validate_category(r);
}

CategoryPtr wedge_category() {
  RawCategory r;
  r.objects = {"1", "2", "3"};
  r.arrows = {{"f", "1", "2"}, {"g", "3", "2"}};
  return validate_category(r);
}

CategoryPtr span_category() {
  RawCategory r;
  r.objects = {"1", "2", "3"};
  r.arrows = {{"f", "2", "1"}, {"g", "2", "3"}};
  return validate_category(r);
}

CategoryPtr arrow_category() {
  RawCategory r;
  r.objects = {"0", "1"};
  r.arrows = {{"f", "0", "1"}};
  return validate_category(r);
}

CategoryPtr chain_category(int n) {
  RawCategory r;
  for (int i = 0; i < n; ++i) r.objects.push_back(std::to_string(i));
  auto name = [](int i, int j) { return std::to_string(i) + "<" + std::to_string(j); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) r.arrows.push_back({name(i, j), std::to_string(i), std::to_string(j)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) r.compose.push_back({name(j, k), name(i, j), name(i, k)});
  return validate_category(r);
}

CategoryPtr monoid_category(const std::vector<std::string>& names, const std::vector<std::vector<int>>& table) {
  RawCategory r;
  r.objects = {"*"};
  auto nm = [&](int i) { return i == 0 ? std::string("id:*") : names[i]; };
  for (std::size_t i = 1; i < names.size(); ++i) r.arrows.push_back({names[i], "*", "*"});
  for (std::size_t i = 1; i < names.size(); ++i)
    for (std::size_t j = 1; j < names.size(); ++j) r.compose.push_back({nm(i), nm(j), nm(table[i][j])});
  return validate_category(r);
}

CategoryPtr cyclic_group_category(int n) {
  std::vector<std::string> names;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    names.push_back(i == 0 ? "e" : (i == 1 ? "s" : "s" + std::to_string(i)));
    for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return monoid_category(names, table);
}

// ---- sieves -----------------------------------------------------------------------

Sieve empty_sieve(const FinCategory& C, ObjId c) { return {c, Bits(C.into(c).size())}; }

Sieve maximal_sieve(const FinCategory& C, ObjId c) {
  Bits b(C.into(c).size());
  b.set();
  return {c, b};
}

bool contains(const FinCategory& C, const Sieve& S, ArrowId f) {
  return C.dst(f) == S.base && S.arrows.test(C.local_index(f));
}

bool is_sieve(const FinCategory& C, const Sieve& S) {
  const auto& in = C.into(S.base);
  if (S.arrows.size() != in.size()) return false;
  for (std::size_t i = S.arrows.find_first(); i != Bits::npos; i = S.arrows.find_next(i)) {
    ArrowId f = in[i];
    for (ArrowId k : C.into(C.src(f)))
      if (!S.arrows.test(C.local_index(C.compose(f, k)))) return false;
  }
  return true;
}

std::vector<ArrowId> sieve_arrows(const FinCategory& C, const Sieve& S) {
  std::vector<ArrowId> out;
  const auto& in = C.into(S.base);
  for (std::size_t i = S.arrows.find_first(); i != Bits::npos; i = S.arrows.find_next(i)) out.push_back(in[i]);
  return out;
}

json sieve_to_json(const FinCategory& C, const Sieve& S) {
  json a = json::array();
  for (ArrowId f : sieve_arrows(C, S)) a.push_back(C.arrow_name(f));
  return a;
}

Sieve principal_sieve(const FinCategory& C, ArrowId f) {
  Sieve S = empty_sieve(C, C.dst(f));
  for (ArrowId k : C.into(C.src(f))) S.arrows.set(C.local_index(C.compose(f, k)));
  return S;
}

Sieve generate_sieve(const FinCategory& C, ObjId c, const std::vector<ArrowId>& family) {
  Sieve S = empty_sieve(C, c);
  for (ArrowId f : family) {
    if (C.dst(f) != c)
      fail(ErrorKind::TargetMismatch, "arrow " + C.arrow_name(f) + " does not target " + C.object_name(c),
           {{"arrow", C.arrow_name(f)}, {"object", C.object_name(c)}});
    S.arrows |= principal_sieve(C, f).arrows;
  }
  return S;
}

Sieve pullback_sieve(const FinCategory& C, const Sieve& S, ArrowId h) {
  ObjId e = C.src(h);
  Sieve R = empty_sieve(C, e);
  const auto& in = C.into(e);
  for (std::size_t j = 0; j < in.size(); ++j)
    if (S.arrows.test(C.local_index(C.compose(h, in[j])))) R.arrows.set(j);
  return R;
}

std::vector<Sieve> sieves_on(const FinCategory& C, ObjId c, std::size_t budget) {
  const auto& in = C.into(c);
  const std::size_t n = in.size();
  std::vector<Bits> down(n), up(n, Bits(n));
  for (std::size_t i = 0; i < n; ++i) down[i] = principal_sieve(C, in[i]).arrows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = down[i].find_first(); j != Bits::npos; j = down[i].find_next(j)) up[j].set(i);

  std::vector<Sieve> out;
  // Each decided arrow forces its whole down-set in, or its whole up-set out.
  std::function<void(std::size_t, const Bits&, const Bits&)> rec = [&](std::size_t i, const Bits& in_set,
                                                                          const Bits& out_set) {
    while (i < n && (in_set.test(i) || out_set.test(i))) ++i;
    if (i == n) {
      if (out.size() >= budget)
        fail(ErrorKind::BudgetExceeded, "sieve budget exceeded on " + C.object_name(c),
             {{"object", C.object_name(c)}, {"budget", budget}});
      out.push_back({c, in_set});
      return;
    }
    rec(i + 1, in_set, out_set | up[i]);
    rec(i + 1, in_set | down[i], out_set);
  };
  rec(0, Bits(n), Bits(n));
  return out;
}

// ---- functors ---------------------------------------------------------------------

FinFunctor validate_functor(CategoryPtr source, CategoryPtr target, std::vector<ObjId> on_objects,
                            std::vector<ArrowId> on_arrows) {
  const FinCategory& C = *source;
  const FinCategory& D = *target;
  if (on_objects.size() != C.num_objects() || on_arrows.size() != C.num_arrows())
    fail(ErrorKind::NotFunctorial, "functor tables have the wrong size");
  for (ObjId c = 0; c < C.num_objects(); ++c)
    if (on_objects[c] >= D.num_objects()) fail(ErrorKind::NotFunctorial, "object image out of range");
  for (ArrowId f = 0; f < C.num_arrows(); ++f) {
    ArrowId Ff = on_arrows[f];
    if (Ff >= D.num_arrows() || D.src(Ff) != on_objects[C.src(f)] || D.dst(Ff) != on_objects[C.dst(f)])
      fail(ErrorKind::NotFunctorial, "arrow " + C.arrow_name(f) + " is sent to an arrow with the wrong endpoints",
           {{"arrow", C.arrow_name(f)}});
  }
  for (ObjId c = 0; c < C.num_objects(); ++c)
    if (on_arrows[C.identity(c)] != D.identity(on_objects[c]))
      fail(ErrorKind::NotFunctorial, "identity of " + C.object_name(c) + " not preserved",
           {{"object", C.object_name(c)}});
  for (ArrowId f = 0; f < C.num_arrows(); ++f)
    for (ArrowId g : C.out_of(C.dst(f)))
      if (on_arrows[C.compose(g, f)] != D.compose(on_arrows[g], on_arrows[f]))
        fail(ErrorKind::NotFunctorial, "composite not preserved",
             {{"pair", json::array({C.arrow_name(g), C.arrow_name(f)})}});
  return {std::move(source), std::move(target), std::move(on_objects), std::move(on_arrows)};
}

FinFunctor identity_functor(CategoryPtr C) {
  std::vector<ObjId> o(C->num_objects());
  std::vector<ArrowId> a(C->num_arrows());
  for (ObjId i = 0; i < o.size(); ++i) o[i] = i;
  for (ArrowId i = 0; i < a.size(); ++i) a[i] = i;
  return {C, C, o, a};
}

FinFunctor compose_functors(const FinFunctor& G, const FinFunctor& F) {
  FinFunctor H{F.source, G.target, {}, {}};
  for (ObjId c : F.on_objects) H.on_objects.push_back(G.on_objects[c]);
  for (ArrowId f : F.on_arrows) H.on_arrows.push_back(G.on_arrows[f]);
  return H;
}

bool same_functor(const FinFunctor& a, const FinFunctor& b) {
  return a.source == b.source && a.target == b.target && a.on_objects == b.on_objects &&
         a.on_arrows == b.on_arrows;
}

Sieve image_sieve(const FinFunctor& F, const Sieve& S) {
  std::vector<ArrowId> fam;
  for (ArrowId f : sieve_arrows(*F.source, S)) fam.push_back(F.on_arrows[f]);
  return generate_sieve(*F.target, F.on_objects[S.base], fam);
}

// ---- comma category -----------------------------------------------------------------

CommaCategory comma_category(const FinFunctor& F, const Budget& budget) {
  const FinCategory& C = *F.source;
  const FinCategory& D = *F.target;
  CommaCategory out;
  std::vector<std::string> names;
  for (ObjId c = 0; c < C.num_objects(); ++c)
    for (ArrowId a : D.into(F.obj(c))) {
      out.objects.push_back({c, a});
      names.push_back("(" + C.object_name(c) + "," + D.arrow_name(a) + ")");
    }

  std::vector<Arrow> arrows;
  std::vector<std::pair<ArrowId, ArrowId>> parts;  // (g, h)
  std::vector<ArrowId> identity(out.objects.size());
  std::map<std::array<std::uint32_t, 4>, ArrowId> index;
  for (ObjId y = 0; y < out.objects.size(); ++y) {
    auto [c, a] = out.objects[y];
    ObjId d = D.src(a);
    for (ObjId x = 0; x < out.objects.size(); ++x) {
      auto [c2, a2] = out.objects[x];
      ObjId d2 = D.src(a2);
      for (ArrowId g : C.hom(c2, c))
        for (ArrowId h : D.hom(d2, d)) {
          if (D.compose(a, h) != D.compose(F.arr(g), a2)) continue;
          ArrowId id = static_cast<ArrowId>(arrows.size());
          if (arrows.size() >= budget.arrows)
            fail(ErrorKind::BudgetExceeded, "comma category exceeds the arrow budget", {{"budget", budget.arrows}});
          bool ident = x == y && C.is_identity(g) && D.is_identity(h);
          if (ident) identity[x] = id;
          arrows.push_back({ident ? "id:" + names[x]
                                  : "(" + C.arrow_name(g) + "," + D.arrow_name(h) + "):" + names[x] + "->" + names[y],
                            x, y});
          parts.push_back({g, h});
          index[{x, y, g, h}] = id;
        }
    }
  }
  out.parts = parts;
  auto compose = [&](ArrowId q, ArrowId p) {
    ArrowId g = C.compose(parts[q].first, parts[p].first);
    ArrowId h = D.compose(parts[q].second, parts[p].second);
    return index.at({arrows[p].src, arrows[q].dst, g, h});
  };
  out.cat = FinCategory::build(names, arrows, identity, compose);

  std::vector<ObjId> pc, pd, ic;
  std::vector<ArrowId> pca, pda, ica;
  for (auto [c, a] : out.objects) {
    pc.push_back(c);
    pd.push_back(D.src(a));
  }
  for (auto [g, h] : parts) {
    pca.push_back(g);
    pda.push_back(h);
  }
  std::map<std::pair<ObjId, ArrowId>, ObjId> obj_index;
  for (ObjId x = 0; x < out.objects.size(); ++x) obj_index[out.objects[x]] = x;
  for (ObjId c = 0; c < C.num_objects(); ++c) ic.push_back(obj_index.at({c, D.identity(F.obj(c))}));
  for (ArrowId g = 0; g < C.num_arrows(); ++g) {
    ObjId x = ic[C.src(g)], y = ic[C.dst(g)];
    ica.push_back(index.at({x, y, g, F.arr(g)}));
  }
  out.pi_C = validate_functor(out.cat, F.source, pc, pca);
  out.pi_D = validate_functor(out.cat, F.target, pd, pda);
  out.i_F = validate_functor(F.source, out.cat, ic, ica);
  return out;
}

std::optional<ObjId> CommaCategory::find_object(ObjId c, ArrowId a) const {
  for (ObjId x = 0; x < objects.size(); ++x)
    if (objects[x].first == c && objects[x].second == a) return x;
  return std::nullopt;
}

std::optional<ArrowId> CommaCategory::find_arrow(ObjId x, ObjId y, ArrowId g, ArrowId h) const {
  for (ArrowId p : cat->into(y))
    if (cat->src(p) == x && parts[p].first == g && parts[p].second == h) return p;
  return std::nullopt;
}

// ---- Grothendieck construction --------------------------------------------------------

GrothendieckConstruction GrothendieckConstruction::build(const IndexedPoset& P, const Budget& budget) {
  const FinCategory& B = *P.base;
  GrothendieckConstruction G;
  std::vector<std::string> names;
  for (ObjId c = 0; c < B.num_objects(); ++c) {
    G.offset_.push_back(static_cast<ObjId>(G.objects_.size()));
    for (Elem U = 0; U < P.names[c].size(); ++U) {
      G.objects_.push_back({c, U});
      names.push_back("(" + B.object_name(c) + "," + P.names[c][U] + ")");
    }
  }

  std::vector<Arrow> arrows;
  std::vector<ArrowId> identity(G.objects_.size());
  G.lift_.resize(B.num_arrows());
  G.dst_size_.resize(B.num_arrows());
  for (ArrowId g = 0; g < B.num_arrows(); ++g) {
    ObjId c = B.src(g), d = B.dst(g);
    const std::size_t ns = P.names[c].size(), nd = P.names[d].size();
    G.dst_size_[g] = nd;
    G.lift_[g].assign(ns * nd, -1);
    for (Elem V = 0; V < nd; ++V) {
      Elem gV = P.reindex(g, V);
      for (Elem U = 0; U < ns; ++U) {
        if (!P.leq(c, U, gV)) continue;
        if (arrows.size() >= budget.arrows)
          fail(ErrorKind::BudgetExceeded, "Grothendieck construction exceeds the arrow budget",
               {{"budget", budget.arrows}});
        ArrowId id = static_cast<ArrowId>(arrows.size());
        ObjId x = G.offset_[c] + U, y = G.offset_[d] + V;
        bool ident = B.is_identity(g) && U == V;
        if (ident) identity[x] = id;
        arrows.push_back({ident ? "id:" + names[x] : B.arrow_name(g) + ":" + names[x] + "->" + names[y], x, y});
        G.base_arrow_.push_back(g);
        G.lift_[g][U * nd + V] = static_cast<std::int32_t>(id);
      }
    }
  }

  auto compose = [&](ArrowId q, ArrowId p) -> ArrowId {
    ArrowId gk = B.compose(G.base_arrow_[q], G.base_arrow_[p]);
    return static_cast<ArrowId>(
        G.lift_[gk][G.objects_[arrows[p].src].second * G.dst_size_[gk] + G.objects_[arrows[q].dst].second]);
  };
  // Associativity is inherited from the base since arrows are determined by their base arrow.
  G.cat_ = FinCategory::build(names, arrows, identity, compose, false);

  std::vector<ObjId> po, so;
  std::vector<ArrowId> pa, sa;
  for (auto [c, U] : G.objects_) po.push_back(c);
  pa = G.base_arrow_;
  for (ObjId c = 0; c < B.num_objects(); ++c) so.push_back(G.offset_[c] + P.top[c]);
  for (ArrowId g = 0; g < B.num_arrows(); ++g) sa.push_back(*G.lift(g, P.top[B.src(g)], P.top[B.dst(g)]));
  G.projection_ = validate_functor(G.cat_, P.base, po, pa);
  G.section_ = validate_functor(P.base, G.cat_, so, sa);
  return G;
}

std::optional<ArrowId> GrothendieckConstruction::lift(ArrowId g, Elem U, Elem V) const {
  std::int32_t a = lift_[g][U * dst_size_[g] + V];
  if (a < 0) return std::nullopt;
  return static_cast<ArrowId>(a);
}

}  // namespace locforge
