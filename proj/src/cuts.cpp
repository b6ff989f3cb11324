#include "mvtsp/cuts.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace mvtsp {

std::vector<std::vector<int>> positive_components(const WeightMatrix& w) {
  const int k = static_cast<int>(w.size());
  std::vector<int> comp(k, -1);
  std::vector<std::vector<int>> out;
  for (int start = 0; start < k; ++start) {
    if (comp[start] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack{start};
    comp[start] = id;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      out[id].push_back(a);
      for (int b = 0; b < k; ++b) {
        if (b != a && comp[b] < 0 && sgn(w[a][b]) > 0) {
          comp[b] = id;
          stack.push_back(b);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

Rational cut_weight(const WeightMatrix& w, const std::vector<bool>& side) {
  Rational total = 0;
  const std::size_t k = w.size();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (side[a] != side[b]) total += w[a][b];
    }
  }
  return total;
}

CutResult min_st_cut(const WeightMatrix& w, int source, int sink) {
  const int k = static_cast<int>(w.size());
  if (source == sink) throw StructuralError("source equals sink");
  WeightMatrix residual = w;
  for (int a = 0; a < k; ++a) residual[a][a] = 0;
  Rational flow = 0;
  while (true) {
    std::vector<int> parent(k, -1);
    parent[source] = source;
    std::deque<int> queue{source};
    while (!queue.empty() && parent[sink] < 0) {
      const int a = queue.front();
      queue.pop_front();
      for (int b = 0; b < k; ++b) {
        if (parent[b] < 0 && sgn(residual[a][b]) > 0) {
          parent[b] = a;
          queue.push_back(b);
        }
      }
    }
    if (parent[sink] < 0) {
      CutResult out;
      out.value = flow;
      out.side.assign(k, false);
      for (int a = 0; a < k; ++a) out.side[a] = parent[a] >= 0;
      return out;
    }
    Rational push = residual[parent[sink]][sink];
    for (int b = sink; b != source; b = parent[b]) push = std::min(push, residual[parent[b]][b]);
    for (int b = sink; b != source; b = parent[b]) {
      residual[parent[b]][b] -= push;
      residual[b][parent[b]] += push;
    }
    flow += push;
  }
}

CutResult global_min_cut(const WeightMatrix& w) {
  const int k = static_cast<int>(w.size());
  if (k < 2) throw StructuralError("global min cut needs two vertices");
  WeightMatrix g = w;
  for (int a = 0; a < k; ++a) g[a][a] = 0;
  // members[a]: original vertices merged into super-vertex a.
  std::vector<std::vector<int>> members(k);
  for (int a = 0; a < k; ++a) members[a] = {a};
  std::vector<int> alive(k);
  std::iota(alive.begin(), alive.end(), 0);
  CutResult best;
  bool have = false;
  while (alive.size() > 1) {
    std::vector<Rational> key(k);
    std::vector<bool> added(k, false);
    int prev = -1, last = -1;
    for (std::size_t step = 0; step < alive.size(); ++step) {
      int pick = -1;
      for (int a : alive) {
        if (!added[a] && (pick < 0 || key[a] > key[pick])) pick = a;
      }
      added[pick] = true;
      prev = last;
      last = pick;
      for (int a : alive) {
        if (!added[a]) key[a] += g[pick][a];
      }
    }
    // Cut of the phase: `last` against the rest.
    if (!have || key[last] < best.value) {
      have = true;
      best.value = key[last];
      best.side.assign(k, false);
      for (int a : members[last]) best.side[a] = true;
    }
    for (int a : alive) {
      if (a == prev || a == last) continue;
      g[prev][a] += g[last][a];
      g[a][prev] = g[prev][a];
    }
    members[prev].insert(members[prev].end(), members[last].begin(), members[last].end());
    alive.erase(std::find(alive.begin(), alive.end(), last));
  }
  if (best.side[0]) best.side.flip();
  return best;
}

}  // namespace mvtsp
