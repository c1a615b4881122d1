#include "maderkit/subdivision.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace maderkit {

namespace {

std::string arc_key(const Arc& a) { return std::to_string(a.tail) + "->" + std::to_string(a.head); }

EmbeddingCheck fail(std::string clause) { return {false, std::move(clause)}; }

}  // namespace

EmbeddingCheck verify_embedding(const Digraph& host, const Digraph& pattern,
                                const SubdivisionEmbedding& e) {
  if (static_cast<int>(e.branch.size()) != pattern.order()) return fail("branch map size");
  VertexSet branch_set;
  for (int b : e.branch) {
    if (b < 0 || b >= host.order()) return fail("branch vertex out of range");
    if (branch_set.contains(b)) return fail("branch map not injective");
    branch_set.insert(b);
  }
  const std::vector<Arc> arcs = pattern.arcs();
  for (const Arc& a : arcs)
    if (!e.routes.contains(a)) return fail("missing route " + arc_key(a));
  if (e.routes.size() != arcs.size()) return fail("route for a non-arc");
  VertexSet interiors;
  for (const auto& [arc, path] : e.routes) {
    for (int v : path)
      if (v < 0 || v >= host.order()) return fail("route " + arc_key(arc) + " leaves the host");
    if (path.size() < 2 || !is_dipath(host, path)) return fail("route " + arc_key(arc) + " not a dipath");
    if (path.front() != e.branch[arc.tail] || path.back() != e.branch[arc.head]) {
      return fail("route " + arc_key(arc) + " has wrong endpoints");
    }
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const int v = path[i];
      if (branch_set.contains(v)) return fail("interior meets branch vertex");
      if (interiors.contains(v)) return fail("interior overlap");
      interiors.insert(v);
    }
  }
  return {};
}

namespace {

class Searcher {
 public:
  Searcher(const Digraph& host, const Digraph& pattern) : d_(host), f_(pattern) {
    for (int p = 0; p < f_.order(); ++p) {
      if (f_.out_degree(p) + f_.in_degree(p) == 0) {
        ++isolated_;
      } else {
        pattern_order_.push_back(p);
      }
    }
    auto by_degree = [](const Digraph& g) {
      return [&g](int a, int b) {
        return g.out_degree(a) + g.in_degree(a) > g.out_degree(b) + g.in_degree(b);
      };
    };
    std::stable_sort(pattern_order_.begin(), pattern_order_.end(), by_degree(f_));
    host_order_.resize(static_cast<std::size_t>(d_.order()));
    std::iota(host_order_.begin(), host_order_.end(), 0);
    std::stable_sort(host_order_.begin(), host_order_.end(), by_degree(d_));
    branch_.assign(static_cast<std::size_t>(f_.order()), -1);
  }

  std::optional<SubdivisionEmbedding> run() {
    if (f_.order() > d_.order()) return std::nullopt;
    if (!assign(0, VertexSet{})) return std::nullopt;
    // Isolated pattern vertices take the smallest unused host vertices.
    VertexSet used = VertexSet::of(branch_);
    for (int p = 0; p < f_.order(); ++p) {
      if (branch_[p] >= 0) continue;
      for (const auto& [arc, path] : routes_) used |= VertexSet::of(path);
      const int v = (d_.vertices() - used).first();
      branch_[p] = v;
      used.insert(v);
    }
    return SubdivisionEmbedding{branch_, routes_};
  }

 private:
  bool assign(std::size_t i, VertexSet used) {
    if (i == pattern_order_.size()) return route_all(used);
    const int p = pattern_order_[i];
    for (int v : host_order_) {
      if (used.contains(v)) continue;
      if (d_.out_degree(v) < f_.out_degree(p) || d_.in_degree(v) < f_.in_degree(p)) continue;
      branch_[p] = v;
      if (consistent(p, used | VertexSet::single(v)) && assign(i + 1, used | VertexSet::single(v))) {
        return true;
      }
      branch_[p] = -1;
    }
    return false;
  }

  // Every arc between mapped pattern vertices needs a host dipath that
  // avoids the other branch vertices.
  bool consistent(int p, VertexSet mapped) const {
    const VertexSet free = d_.vertices() - mapped;
    auto routable = [&](int a, int b) {
      if (d_.has_arc(a, b)) return true;
      return reachable(d_, d_.out_neighbors(a) & free, free).intersects(d_.in_neighbors(b));
    };
    for (int q : f_.out_neighbors(p))
      if (branch_[q] >= 0 && !routable(branch_[p], branch_[q])) return false;
    for (int q : f_.in_neighbors(p))
      if (branch_[q] >= 0 && !routable(branch_[q], branch_[p])) return false;
    return true;
  }

  bool route_all(VertexSet branch_set) {
    routes_.clear();
    std::vector<Arc> pending;
    // A direct host arc uses no interior vertex, so it is never worse
    // than any longer route.
    for (const Arc& a : f_.arcs()) {
      const int s = branch_[a.tail];
      const int t = branch_[a.head];
      if (d_.has_arc(s, t)) {
        routes_[a] = {s, t};
      } else {
        pending.push_back(a);
      }
    }
    if (d_.order() - branch_set.size() - isolated_ < 0) return false;
    return route(pending, branch_set);
  }

  VertexSet region(const Arc& a, VertexSet used) const {
    const VertexSet free = d_.vertices() - used;
    const int s = branch_[a.tail];
    const int t = branch_[a.head];
    return reachable(d_, d_.out_neighbors(s) & free, free) & reaching(d_, d_.in_neighbors(t) & free, free);
  }

  bool route(std::vector<Arc>& pending, VertexSet used) {
    if (pending.empty()) return d_.order() - used.size() >= isolated_;
    std::size_t pick = 0;
    int best = 1 << 30;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const int size = region(pending[i], used).size();
      if (size == 0) return false;
      if (size < best) {
        best = size;
        pick = i;
      }
    }
    const Arc arc = pending[pick];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
    const VertexSet allowed = region(arc, used);
    Dipath path{branch_[arc.tail]};
    const bool ok = extend(arc, path, VertexSet{}, VertexSet{}, allowed, pending, used);
    pending.insert(pending.begin() + static_cast<std::ptrdiff_t>(pick), arc);
    return ok;
  }

  // Only chordless routes are tried: a route with a forward chord can be
  // shortcut onto a subset of its vertices. `shadow` holds the
  // out-neighbours of the path vertices before the last one.
  bool extend(const Arc& arc, Dipath& path, VertexSet interior, VertexSet shadow, VertexSet allowed,
              std::vector<Arc>& pending, VertexSet used) {
    const int last = path.back();
    const int target = branch_[arc.head];
    if (path.size() > 1 && d_.has_arc(last, target)) {
      path.push_back(target);
      routes_[arc] = path;
      if (route(pending, used | interior)) return true;
      routes_.erase(arc);
      path.pop_back();
      return false;
    }
    const VertexSet avail = allowed - interior;
    const VertexSet can_finish = reaching(d_, d_.in_neighbors(target) & avail, avail);
    for (int w : (d_.out_neighbors(last) & can_finish) - shadow) {
      path.push_back(w);
      if (extend(arc, path, interior | VertexSet::single(w), shadow | d_.out_neighbors(last), allowed,
                 pending, used)) {
        return true;
      }
      path.pop_back();
    }
    return false;
  }

  const Digraph& d_;
  const Digraph& f_;
  std::vector<int> pattern_order_;
  std::vector<int> host_order_;
  std::vector<int> branch_;
  std::map<Arc, Dipath> routes_;
  int isolated_ = 0;
};

}  // namespace

std::optional<SubdivisionEmbedding> contains_subdivision(const Digraph& host, const Digraph& pattern) {
  return Searcher(host, pattern).run();
}

namespace {

void all_dipaths(const Digraph& d, Dipath& path, VertexSet on_path, std::vector<std::vector<Dipath>>& by_end) {
  for (int w : d.out_neighbors(path.back())) {
    if (on_path.contains(w)) continue;
    path.push_back(w);
    by_end[w].push_back(path);
    all_dipaths(d, path, on_path | VertexSet::single(w), by_end);
    path.pop_back();
  }
}

bool choose_routes(const std::vector<std::vector<const Dipath*>>& options, std::size_t i, VertexSet used) {
  if (i == options.size()) return true;
  for (const Dipath* p : options[i]) {
    VertexSet inner;
    for (std::size_t j = 1; j + 1 < p->size(); ++j) inner.insert((*p)[j]);
    if (inner.intersects(used)) continue;
    if (choose_routes(options, i + 1, used | inner)) return true;
  }
  return false;
}

}  // namespace

bool brute_force_oracle(const Digraph& host, const Digraph& pattern) {
  if (host.order() > kOracleMaxHost || pattern.order() > kOracleMaxPattern) {
    throw OracleSizeError("brute_force_oracle: host <= 6 and pattern <= 4 vertices");
  }
  const int n = host.order();
  const int m = pattern.order();
  if (m > n) return false;
  // paths[s][t]: every dipath from s to t
  std::vector<std::vector<std::vector<Dipath>>> paths(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    paths[s].assign(static_cast<std::size_t>(n), {});
    Dipath start{s};
    all_dipaths(host, start, VertexSet::single(s), paths[s]);
  }
  const std::vector<Arc> arcs = pattern.arcs();
  std::vector<int> branch(static_cast<std::size_t>(m));
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + m, true);
  do {
    std::vector<int> chosen;
    for (int v = 0; v < n; ++v)
      if (pick[v]) chosen.push_back(v);
    do {
      const VertexSet branch_set = VertexSet::of(chosen);
      std::vector<std::vector<const Dipath*>> options;
      for (const Arc& a : arcs) {
        std::vector<const Dipath*> opts;
        for (const Dipath& p : paths[chosen[a.tail]][chosen[a.head]]) {
          bool clean = true;
          for (std::size_t j = 1; j + 1 < p.size(); ++j) clean = clean && !branch_set.contains(p[j]);
          if (clean) opts.push_back(&p);
        }
        options.push_back(std::move(opts));
      }
      if (choose_routes(options, 0, VertexSet{})) return true;
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

SubdivisionEmbedding reverse_embedding(const SubdivisionEmbedding& e) {
  SubdivisionEmbedding r{e.branch, {}};
  for (const auto& [arc, path] : e.routes) r.routes[{arc.head, arc.tail}] = Dipath(path.rbegin(), path.rend());
  return r;
}

SubdivisionEmbedding restrict_embedding(const SubdivisionEmbedding& e, const Digraph& sub) {
  SubdivisionEmbedding r{e.branch, {}};
  for (const Arc& a : sub.arcs()) r.routes[a] = e.routes.at(a);
  return r;
}

std::string embedding_to_json(const SubdivisionEmbedding& e) {
  nlohmann::ordered_json j;
  j["branch"] = nlohmann::ordered_json::object();
  for (std::size_t p = 0; p < e.branch.size(); ++p) j["branch"][std::to_string(p)] = e.branch[p];
  j["routes"] = nlohmann::ordered_json::object();
  for (const auto& [arc, path] : e.routes) j["routes"][arc_key(arc)] = path;
  return j.dump();
}

SubdivisionEmbedding embedding_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    SubdivisionEmbedding e;
    const auto& branch = j.at("branch");
    e.branch.assign(branch.size(), -1);
    for (const auto& [key, value] : branch.items()) {
      const std::size_t p = std::stoul(key);
      if (p >= e.branch.size()) throw std::invalid_argument("branch keys must be 0..n-1");
      e.branch[p] = value.get<int>();
    }
    for (const auto& [key, value] : j.at("routes").items()) {
      const auto sep = key.find("->");
      if (sep == std::string::npos) throw std::invalid_argument("route key '" + key + "' is not u->v");
      const Arc a{std::stoi(key.substr(0, sep)), std::stoi(key.substr(sep + 2))};
      e.routes[a] = value.get<Dipath>();
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("embedding JSON: ") + ex.what());
  }
}

}  // namespace maderkit
