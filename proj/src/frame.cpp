#include "locforge/frame.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace locforge {

FramePtr FinFrame::from_order(std::vector<std::string> names, const std::vector<std::pair<Elem, Elem>>& leq) {
  const std::size_t n = names.size();
  if (n == 0) fail(ErrorKind::NotALattice, "a frame needs at least one element");
  auto L = std::make_shared<FinFrame>();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (names[i] == names[j]) fail(ErrorKind::NotAPartialOrder, "duplicate element " + names[i], {{"element", names[i]}});

  std::vector<Bits> up(n, Bits(n));
  for (std::size_t i = 0; i < n; ++i) up[i].set(i);
  for (auto [a, b] : leq) {
    if (a >= n || b >= n) fail(ErrorKind::NotAPartialOrder, "order pair out of range");
    up[a].set(b);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (up[i].test(k)) up[i] |= up[k];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (up[i].test(j) && up[j].test(i))
        fail(ErrorKind::NotAPartialOrder, "antisymmetry fails", {{"pair", json::array({names[i], names[j]})}});

  L->names_ = std::move(names);
  L->leq_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) L->leq_[i * n + j] = up[i].test(j);

  auto lub = [&](Elem a, Elem b, bool upper) -> std::optional<Elem> {
    // least upper bound (upper) or greatest lower bound (!upper)
    std::optional<Elem> best;
    for (Elem m = 0; m < n; ++m) {
      bool bound = upper ? (L->leq(a, m) && L->leq(b, m)) : (L->leq(m, a) && L->leq(m, b));
      if (!bound) continue;
      if (!best || (upper ? L->leq(m, *best) : L->leq(*best, m))) best = m;
    }
    if (!best) return std::nullopt;
    for (Elem m = 0; m < n; ++m) {
      bool bound = upper ? (L->leq(a, m) && L->leq(b, m)) : (L->leq(m, a) && L->leq(m, b));
      if (bound && !(upper ? L->leq(*best, m) : L->leq(m, *best))) return std::nullopt;
    }
    return best;
  };
  L->meet_.resize(n * n);
  L->join_.resize(n * n);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a; b < n; ++b) {
      auto m = lub(a, b, false), j = lub(a, b, true);
      if (!m || !j)
        fail(ErrorKind::NotALattice, std::string("no ") + (!m ? "meet" : "join") + " for a pair",
             {{"pair", json::array({L->names_[a], L->names_[b]})}, {"missing", !m ? "meet" : "join"}});
      L->meet_[a * n + b] = L->meet_[b * n + a] = *m;
      L->join_[a * n + b] = L->join_[b * n + a] = *j;
    }
  L->bottom_ = 0;
  L->top_ = 0;
  for (Elem a = 1; a < n; ++a) {
    L->bottom_ = L->meet(L->bottom_, a);
    L->top_ = L->join(L->top_, a);
  }
  for (Elem v = 0; v < n; ++v)
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (L->meet(v, L->join(a, b)) != L->join(L->meet(v, a), L->meet(v, b)))
          fail(ErrorKind::NotDistributive, "distributivity fails",
               {{"triple", json::array({L->names_[v], L->names_[a], L->names_[b]})}});

  L->imp_.resize(n * n);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      Elem acc = L->bottom_;
      for (Elem w = 0; w < n; ++w)
        if (L->leq(L->meet(w, a), b)) acc = L->join(acc, w);
      L->imp_[a * n + b] = acc;
    }

  // Longest chain: process elements by number of elements below them.
  std::vector<Elem> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> below(n, 0);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) below[a] += L->leq(b, a);
  std::stable_sort(order.begin(), order.end(), [&](Elem x, Elem y) { return below[x] < below[y]; });
  std::vector<std::size_t> depth(n, 0);
  for (Elem a : order)
    for (Elem b = 0; b < n; ++b)
      if (b != a && L->leq(b, a)) depth[a] = std::max(depth[a], depth[b] + 1);
  L->height_ = depth[L->top_];
  return L;
}

std::optional<Elem> FinFrame::find(std::string_view name) const {
  for (Elem e = 0; e < names_.size(); ++e)
    if (names_[e] == name) return e;
  return std::nullopt;
}

std::vector<std::pair<Elem, Elem>> FinFrame::covers() const {
  std::vector<std::pair<Elem, Elem>> out;
  const std::size_t n = size();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      if (a == b || !leq(a, b)) continue;
      bool direct = true;
      for (Elem m = 0; m < n && direct; ++m)
        if (m != a && m != b && leq(a, m) && leq(m, b)) direct = false;
      if (direct) out.push_back({a, b});
    }
  return out;
}

// ---- standard frames --------------------------------------------------------------

FramePtr chain_frame(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) names.push_back("0");
    else if (i + 1 == n) names.push_back("1");
    else names.push_back(std::string(1, static_cast<char>('a' + (i - 1))));
  }
  std::vector<std::pair<Elem, Elem>> leq;
  for (Elem i = 0; i + 1 < n; ++i) leq.push_back({i, i + 1});
  return FinFrame::from_order(names, leq);
}

FramePtr two_frame() { return chain_frame(2); }

FramePtr diamond_frame() { return FinFrame::from_order({"0", "a", "b", "1"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

FramePtr boolean_frame(std::size_t k) {
  const std::size_t n = std::size_t{1} << k;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < n; ++s) {
    if (s == 0) { names.push_back("0"); continue; }
    if (s + 1 == n) { names.push_back("1"); continue; }
    std::string nm;
    for (std::size_t i = 0; i < k; ++i)
      if (s >> i & 1) nm += static_cast<char>('x' + i);
    names.push_back(nm);
  }
  std::vector<std::pair<Elem, Elem>> leq;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < k; ++i)
      if (!(s >> i & 1)) leq.push_back({static_cast<Elem>(s), static_cast<Elem>(s | (std::size_t{1} << i))});
  return FinFrame::from_order(names, leq);
}

FramePtr downset_frame(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& order) {
  std::vector<Bits> below(n, Bits(n));
  for (std::size_t i = 0; i < n; ++i) below[i].set(i);
  for (auto [i, j] : order) below[j].set(i);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (below[i].test(k)) below[i] |= below[k];

  std::vector<Bits> sets;
  for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
    Bits b(n, s);
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i)
      if (b.test(i) && !below[i].is_subset_of(b)) closed = false;
    if (closed) sets.push_back(b);
  }
  std::stable_sort(sets.begin(), sets.end(), [](const Bits& a, const Bits& b) { return a.count() < b.count(); });
  std::vector<std::string> names;
  for (const auto& s : sets) {
    std::string nm = "{";
    for (std::size_t i = s.find_first(); i != Bits::npos; i = s.find_next(i)) {
      if (nm.size() > 1) nm += ",";
      nm += std::to_string(i);
    }
    names.push_back(nm + "}");
  }
  std::vector<std::pair<Elem, Elem>> leq;
  for (Elem a = 0; a < sets.size(); ++a)
    for (Elem b = 0; b < sets.size(); ++b)
      if (sets[a].is_subset_of(sets[b])) leq.push_back({a, b});
  return FinFrame::from_order(names, leq);
}

FramePtr subposet_frame(const FinFrame& L, const std::vector<Elem>& elems) {
  std::vector<std::string> names;
  for (Elem e : elems) names.push_back(L.name(e));
  std::vector<std::pair<Elem, Elem>> leq;
  for (Elem a = 0; a < elems.size(); ++a)
    for (Elem b = 0; b < elems.size(); ++b)
      if (L.leq(elems[a], elems[b])) leq.push_back({a, b});
  return FinFrame::from_order(names, leq);
}

std::optional<std::vector<Elem>> find_isomorphism(const FinFrame& A, const FinFrame& B) {
  const std::size_t n = A.size();
  if (B.size() != n) return std::nullopt;
  std::vector<Elem> map(n);
  std::vector<char> used(n, 0);
  std::function<bool(Elem)> rec = [&](Elem a) -> bool {
    if (a == n) return true;
    for (Elem b = 0; b < n; ++b) {
      if (used[b]) continue;
      bool ok = true;
      for (Elem x = 0; x < a && ok; ++x)
        ok = A.leq(x, a) == B.leq(map[x], b) && A.leq(a, x) == B.leq(b, map[x]);
      if (!ok) continue;
      used[b] = 1;
      map[a] = b;
      if (rec(a + 1)) return true;
      used[b] = 0;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return map;
}

bool same_frame(const FinFrame& A, const FinFrame& B) {
  if (A.names() != B.names()) return false;
  for (Elem a = 0; a < A.size(); ++a)
    for (Elem b = 0; b < A.size(); ++b)
      if (A.leq(a, b) != B.leq(a, b)) return false;
  return true;
}

Elem heyting(const FinFrame& L, Elem U, Elem V) { return L.implies(U, V); }

// ---- homomorphisms -------------------------------------------------------------------

FrameHom validate_frame_hom(FramePtr source, FramePtr target, std::vector<Elem> map) {
  const FinFrame& S = *source;
  const FinFrame& T = *target;
  if (map.size() != S.size()) fail(ErrorKind::NotAHom, "map is not total");
  for (Elem e : map)
    if (e >= T.size()) fail(ErrorKind::NotAHom, "map value out of range");
  if (map[S.bottom()] != T.bottom()) fail(ErrorKind::NotAHom, "bottom not preserved", {{"law", "bottom"}});
  if (map[S.top()] != T.top()) fail(ErrorKind::NotAHom, "top not preserved", {{"law", "top"}});
  for (Elem a = 0; a < S.size(); ++a)
    for (Elem b = a + 1; b < S.size(); ++b) {
      if (map[S.meet(a, b)] != T.meet(map[a], map[b]))
        fail(ErrorKind::NotAHom, "meet not preserved", {{"law", "meet"}, {"pair", json::array({S.name(a), S.name(b)})}});
      if (map[S.join(a, b)] != T.join(map[a], map[b]))
        fail(ErrorKind::NotAHom, "join not preserved", {{"law", "join"}, {"pair", json::array({S.name(a), S.name(b)})}});
    }
  return {std::move(source), std::move(target), std::move(map)};
}

FrameHom identity_hom(FramePtr L) {
  std::vector<Elem> m(L->size());
  std::iota(m.begin(), m.end(), 0);
  return {L, L, m};
}

FrameHom compose_homs(const FrameHom& g, const FrameHom& f) {
  std::vector<Elem> m(f.map.size());
  for (Elem u = 0; u < m.size(); ++u) m[u] = g.map[f.map[u]];
  return {f.source, g.target, m};
}

bool is_injective(const std::vector<Elem>& map) {
  std::vector<Elem> s = map;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool is_surjective(const std::vector<Elem>& map, std::size_t codomain_size) {
  std::vector<char> hit(codomain_size, 0);
  for (Elem e : map) hit[e] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

std::vector<Elem> left_adjoint(const FrameHom& h) {
  const FinFrame& S = *h.source;
  const FinFrame& T = *h.target;
  std::vector<Elem> la(T.size());
  for (Elem U = 0; U < T.size(); ++U) {
    Elem acc = S.top();
    for (Elem V = 0; V < S.size(); ++V)
      if (T.leq(U, h(V))) acc = S.meet(acc, V);
    la[U] = acc;
  }
  for (Elem U = 0; U < T.size(); ++U)
    for (Elem V = 0; V < S.size(); ++V)
      if (S.leq(la[U], V) != T.leq(U, h(V)))
        fail(ErrorKind::NoLeftAdjoint, "adjunction law fails", {{"pair", json::array({T.name(U), S.name(V)})}});
  return la;
}

std::vector<Elem> right_adjoint(const FrameHom& h) {
  const FinFrame& S = *h.source;
  const FinFrame& T = *h.target;
  std::vector<Elem> ra(T.size());
  for (Elem U = 0; U < T.size(); ++U) {
    Elem acc = S.bottom();
    for (Elem V = 0; V < S.size(); ++V)
      if (T.leq(h(V), U)) acc = S.join(acc, V);
    ra[U] = acc;
  }
  for (Elem U = 0; U < T.size(); ++U)
    for (Elem V = 0; V < S.size(); ++V)
      if (T.leq(h(V), U) != S.leq(V, ra[U]))
        fail(ErrorKind::InternalInconsistency, "right adjoint law fails",
             {{"pair", json::array({S.name(V), T.name(U)})}});
  return ra;
}

OpenReport open_report(const FrameHom& h) {
  const FinFrame& S = *h.source;
  const FinFrame& T = *h.target;
  OpenReport r;
  r.frobenius = true;
  r.heyting = true;
  json frob_w, heyt_w;
  std::vector<Elem> ex;
  try {
    ex = left_adjoint(h);
  } catch (const Error& e) {
    r.frobenius = false;
    frob_w = {{"criterion", "left-adjoint"}, {"detail", e.witness()}};
  }
  if (r.frobenius) {
    for (Elem U = 0; U < T.size() && r.frobenius; ++U)
      for (Elem V = 0; V < S.size() && r.frobenius; ++V)
        if (ex[T.meet(U, h(V))] != S.meet(ex[U], V)) {
          r.frobenius = false;
          frob_w = {{"criterion", "frobenius"}, {"pair", json::array({T.name(U), S.name(V)})}};
        }
  }
  for (Elem a = 0; a < S.size() && r.heyting; ++a)
    for (Elem b = 0; b < S.size() && r.heyting; ++b)
      if (h(S.implies(a, b)) != T.implies(h(a), h(b))) {
        r.heyting = false;
        heyt_w = {{"criterion", "heyting"}, {"pair", json::array({S.name(a), S.name(b)})}};
      }
  r.witness = !r.frobenius ? frob_w : heyt_w;
  return r;
}

OpenFrameHom check_open(const FrameHom& h) {
  OpenReport r = open_report(h);
  if (r.frobenius != r.heyting)
    fail(ErrorKind::InternalInconsistency, "Frobenius and Heyting criteria disagree", r.witness);
  if (!r.frobenius) fail(ErrorKind::NotOpen, "frame homomorphism is not open", r.witness);
  return {h, left_adjoint(h)};
}

ImageFrame image_frame(const FrameHom& h) {
  std::vector<Elem> elems;
  for (Elem e = 0; e < h.target->size(); ++e)
    if (std::find(h.map.begin(), h.map.end(), e) != h.map.end()) elems.push_back(e);
  ImageFrame out;
  out.frame = subposet_frame(*h.target, elems);
  out.inclusion = elems;
  std::vector<Elem> core(h.map.size());
  for (Elem u = 0; u < core.size(); ++u)
    core[u] = static_cast<Elem>(std::find(elems.begin(), elems.end(), h.map[u]) - elems.begin());
  out.corestriction = validate_frame_hom(h.source, out.frame, core);
  return out;
}

std::vector<FrameHom> enumerate_frame_homs(FramePtr source, FramePtr target, std::size_t budget) {
  const FinFrame& S = *source;
  const FinFrame& T = *target;
  const std::size_t n = S.size();
  std::vector<FrameHom> out;
  std::vector<Elem> map(n);
  std::size_t nodes = 0;
  std::function<void(Elem)> rec = [&](Elem a) {
    if (a == n) {
      // pruning above only sees pairs whose meet/join was already assigned
      for (Elem x = 0; x < n; ++x)
        for (Elem y = x + 1; y < n; ++y)
          if (map[S.meet(x, y)] != T.meet(map[x], map[y]) || map[S.join(x, y)] != T.join(map[x], map[y])) return;
      out.push_back({source, target, map});
      return;
    }
    for (Elem v = 0; v < T.size(); ++v) {
      if (++nodes > budget) fail(ErrorKind::BudgetExceeded, "frame homomorphism enumeration budget exceeded");
      if (a == S.bottom() && v != T.bottom()) continue;
      if (a == S.top() && v != T.top()) continue;
      map[a] = v;
      bool ok = true;
      for (Elem x = 0; x <= a && ok; ++x) {
        Elem m = S.meet(a, x), j = S.join(a, x);
        if (m <= a && map[m] != T.meet(v, map[x])) ok = false;
        if (ok && j <= a && map[j] != T.join(v, map[x])) ok = false;
      }
      if (ok) rec(a + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace locforge
