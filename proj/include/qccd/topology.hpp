#pragma once

#include <algorithm>
#include <charconv>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qccd/errors.hpp"

namespace qccd {

struct Trap {
  int id = 0;
  int capacity = 2;
  friend bool operator==(const Trap&, const Trap&) = default;
};

struct Junction {
  int id = 0;
  int degree = 2;  // number of channels meeting at the junction
  friend bool operator==(const Junction&, const Junction&) = default;
};

struct ShuttlePath {
  int trap_a = 0;
  int trap_b = 0;
  int segments = 1;
  std::vector<int> junctions;  // junction ids crossed, in travel order a -> b
  friend bool operator==(const ShuttlePath&, const ShuttlePath&) = default;
};

/// Trap/junction layout of a QCCD device.
struct Topology {
  std::string name;
  std::vector<Trap> traps;
  std::vector<ShuttlePath> paths;
  std::vector<Junction> junctions;

  int trap_count() const noexcept { return static_cast<int>(traps.size()); }
  int total_capacity() const noexcept {
    return std::accumulate(traps.begin(), traps.end(), 0,
                           [](int acc, const Trap& t) { return acc + t.capacity; });
  }
  int max_capacity() const noexcept {
    int m = 0;
    for (const auto& t : traps) m = std::max(m, t.capacity);
    return m;
  }

  std::vector<int> junction_degrees(const ShuttlePath& p) const {
    std::vector<int> out;
    out.reserve(p.junctions.size());
    for (int j : p.junctions) out.push_back(junctions.at(static_cast<std::size_t>(j)).degree);
    return out;
  }

  void validate() const {
    if (traps.empty()) throw InvalidArgument("topology has no traps");
    for (std::size_t i = 0; i < traps.size(); ++i) {
      if (traps[i].id != static_cast<int>(i)) throw InvalidArgument("trap ids must be dense 0..n-1");
      if (traps[i].capacity < 2) {
        throw InvalidArgument("trap " + std::to_string(i) + " capacity must be >= 2");
      }
    }
    for (std::size_t i = 0; i < junctions.size(); ++i) {
      if (junctions[i].id != static_cast<int>(i)) {
        throw InvalidArgument("junction ids must be dense 0..n-1");
      }
      if (junctions[i].degree < 1) throw InvalidArgument("junction degree must be >= 1");
    }
    const int n = trap_count();
    std::vector<int> parent(traps.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& p : paths) {
      if (p.trap_a < 0 || p.trap_a >= n || p.trap_b < 0 || p.trap_b >= n) {
        throw InvalidArgument("path references an unknown trap");
      }
      if (p.trap_a == p.trap_b) throw InvalidArgument("path endpoints must be distinct traps");
      if (p.segments < 1) throw InvalidArgument("path segments must be >= 1");
      for (int j : p.junctions) {
        if (j < 0 || j >= static_cast<int>(junctions.size())) {
          throw InvalidArgument("path references an unknown junction");
        }
      }
      parent[find(p.trap_a)] = find(p.trap_b);
    }
    for (int t = 1; t < n; ++t) {
      if (find(t) != find(0)) throw InvalidArgument("topology is not connected");
    }
  }
};

enum class TopologyFamily { L, G, S };

/// Linear chain: each hop crosses one 2-way junction over two segments.
inline Topology make_linear(int n, int capacity) {
  if (n < 2) throw InvalidArgument("L-series needs at least 2 traps");
  if (capacity < 2) throw InvalidArgument("capacity must be >= 2");
  Topology t;
  t.name = "L" + std::to_string(n) + ":" + std::to_string(capacity);
  for (int i = 0; i < n; ++i) t.traps.push_back({i, capacity});
  for (int i = 0; i + 1 < n; ++i) {
    t.junctions.push_back({i, 2});
    t.paths.push_back({i, i + 1, 2, {i}});
  }
  return t;
}

/// Row-major grid. Every path between grid neighbours crosses one junction
/// whose degree is the larger number of grid neighbours of its two endpoint
/// traps (2 at corners, 3 on borders, 4 inside), floored at 2.
inline Topology make_grid(int rows, int cols, int capacity) {
  if (rows < 1 || cols < 1 || rows * cols < 2) throw InvalidArgument("G-series needs rows*cols >= 2");
  if (capacity < 2) throw InvalidArgument("capacity must be >= 2");
  Topology t;
  t.name = "G" + std::to_string(rows) + "x" + std::to_string(cols) + ":" + std::to_string(capacity);
  auto id = [cols](int r, int c) { return r * cols + c; };
  auto neighbours = [rows, cols](int r, int c) {
    return (r > 0) + (r + 1 < rows) + (c > 0) + (c + 1 < cols);
  };
  for (int i = 0; i < rows * cols; ++i) t.traps.push_back({i, capacity});
  auto connect = [&](int r0, int c0, int r1, int c1) {
    int degree = std::max({neighbours(r0, c0), neighbours(r1, c1), 2});
    int j = static_cast<int>(t.junctions.size());
    t.junctions.push_back({j, degree});
    t.paths.push_back({id(r0, c0), id(r1, c1), 2, {j}});
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) connect(r, c, r, c + 1);
      if (r + 1 < rows) connect(r, c, r + 1, c);
    }
  }
  return t;
}

/// Fully connected through one central n-way junction; every path has two
/// segments.
inline Topology make_star(int n, int capacity) {
  if (n < 2) throw InvalidArgument("S-series needs at least 2 traps");
  if (capacity < 2) throw InvalidArgument("capacity must be >= 2");
  Topology t;
  t.name = "S" + std::to_string(n) + ":" + std::to_string(capacity);
  for (int i = 0; i < n; ++i) t.traps.push_back({i, capacity});
  t.junctions.push_back({0, n});
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) t.paths.push_back({a, b, 2, {0}});
  }
  return t;
}

/// Builds a family member. For L and S, `a` is the trap count and `b` is
/// ignored; for G, `a` x `b` is rows x cols.
inline Topology build_topology(TopologyFamily family, int a, int b, int capacity) {
  switch (family) {
    case TopologyFamily::L: return make_linear(a, capacity);
    case TopologyFamily::G: return make_grid(a, b, capacity);
    case TopologyFamily::S: return make_star(a, capacity);
  }
  throw InvalidArgument("unknown topology family");
}

// Default per-trap capacities used for the reference device sizes.
inline int default_capacity(TopologyFamily family, int a, int b) {
  if (family == TopologyFamily::G && a == 2 && b == 3) return 17;
  if (family == TopologyFamily::G && a == 3 && b == 3) return 12;
  if (family == TopologyFamily::L && a == 6) return 17;
  return 22;
}

/// Parses `L4`, `S4`, `G2x3`, optionally suffixed with `:capacity`.
/// `capacity_override` > 0 wins over both the suffix and the default.
inline Topology parse_topology_spec(std::string_view spec, int capacity_override = 0) {
  auto fail = [&]() -> Topology {
    throw InvalidArgument("bad topology spec '" + std::string(spec) +
                          "' (expected L<n>, S<n> or G<r>x<c>, optionally :capacity)");
  };
  auto to_int = [&](std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  if (spec.empty()) return fail();
  auto colon = spec.find(':');
  auto shape = spec.substr(0, colon);
  int capacity = 0;
  if (colon != std::string_view::npos && !to_int(spec.substr(colon + 1), capacity)) return fail();
  TopologyFamily family;
  switch (shape.front()) {
    case 'L': case 'l': family = TopologyFamily::L; break;
    case 'G': case 'g': family = TopologyFamily::G; break;
    case 'S': case 's': family = TopologyFamily::S; break;
    default: return fail();
  }
  shape.remove_prefix(1);
  if (!shape.empty() && shape.front() == '-') shape.remove_prefix(1);
  int a = 0, b = 0;
  if (family == TopologyFamily::G) {
    auto x = shape.find_first_of("xX");
    if (x == std::string_view::npos || !to_int(shape.substr(0, x), a) ||
        !to_int(shape.substr(x + 1), b)) {
      return fail();
    }
  } else if (!to_int(shape, a)) {
    return fail();
  }
  if (capacity_override > 0) capacity = capacity_override;
  if (capacity == 0) capacity = default_capacity(family, a, b);
  return build_topology(family, a, b, capacity);
}

inline nlohmann::json to_json(const Topology& t) {
  nlohmann::json j;
  j["name"] = t.name;
  j["traps"] = nlohmann::json::array();
  for (const auto& trap : t.traps) j["traps"].push_back({{"id", trap.id}, {"capacity", trap.capacity}});
  j["junctions"] = nlohmann::json::array();
  for (const auto& jn : t.junctions) j["junctions"].push_back({{"id", jn.id}, {"degree", jn.degree}});
  j["paths"] = nlohmann::json::array();
  for (const auto& p : t.paths) {
    j["paths"].push_back({{"trap_a", p.trap_a},
                          {"trap_b", p.trap_b},
                          {"segments", p.segments},
                          {"junctions", p.junctions}});
  }
  return j;
}

/// Accepts either the family form {"family":"G","rows":2,"cols":3,"capacity":17}
/// (L/S use "n") or the explicit {"traps":[...],"paths":[...],"junctions":[...]}.
inline Topology topology_from_json(const nlohmann::json& j, int capacity_override = 0) {
  try {
    if (!j.is_object()) throw InvalidArgument("topology config must be a JSON object");
    if (j.contains("family")) {
      const std::string fam = j.at("family").get<std::string>();
      int capacity = capacity_override > 0 ? capacity_override : j.value("capacity", 0);
      if (fam == "G") {
        int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
        if (capacity == 0) capacity = default_capacity(TopologyFamily::G, rows, cols);
        return make_grid(rows, cols, capacity);
      }
      if (fam == "L" || fam == "S") {
        auto family = fam == "L" ? TopologyFamily::L : TopologyFamily::S;
        int n = j.at("n").get<int>();
        if (capacity == 0) capacity = default_capacity(family, n, 0);
        return build_topology(family, n, 0, capacity);
      }
      throw InvalidArgument("unknown topology family '" + fam + "'");
    }
    Topology t;
    t.name = j.value("name", std::string("custom"));
    for (const auto& tj : j.at("traps")) {
      Trap trap{tj.at("id").get<int>(), tj.at("capacity").get<int>()};
      if (capacity_override > 0) trap.capacity = capacity_override;
      t.traps.push_back(trap);
    }
    if (j.contains("junctions")) {
      for (const auto& jj : j.at("junctions")) {
        t.junctions.push_back({jj.at("id").get<int>(), jj.at("degree").get<int>()});
      }
    }
    for (const auto& pj : j.at("paths")) {
      ShuttlePath p;
      p.trap_a = pj.at("trap_a").get<int>();
      p.trap_b = pj.at("trap_b").get<int>();
      p.segments = pj.value("segments", 1);
      if (pj.contains("junctions")) p.junctions = pj.at("junctions").get<std::vector<int>>();
      t.paths.push_back(std::move(p));
    }
    std::sort(t.traps.begin(), t.traps.end(), [](const Trap& a, const Trap& b) { return a.id < b.id; });
    std::sort(t.junctions.begin(), t.junctions.end(),
              [](const Junction& a, const Junction& b) { return a.id < b.id; });
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("topology schema error: ") + e.what());
  }
}

}  // namespace qccd
