#pragma once

// Deterministic benchmark circuit generators.
//
// Two-qubit gate counts per generator:
//   qft(n)              n(n-1)     (each controlled phase = 2 cx)
//   bv(n)               popcount(secret), n for the default all-ones secret
//   qaoa_chain(n, L)    (n-1)L
//   alt(n, L)           (n-1)L     (one layer = even bricks + odd bricks)
//   cuccaro_adder(b)    16b + 1    (Toffoli = 6 cx)
//   heisenberg(n, S)    3(n-1)S

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "qccd/circuit.hpp"
#include "qccd/errors.hpp"

namespace qccd {

enum class Benchmark { Qft, Bv, QaoaChain, Alt, CuccaroAdder, Heisenberg };

struct BenchmarkParams {
  int layers = 20;          // qaoa_chain, alt
  int trotter_steps = 96;   // heisenberg
  std::string secret;       // bv; empty means all ones
};

inline std::string_view benchmark_name(Benchmark b) {
  switch (b) {
    case Benchmark::Qft: return "qft";
    case Benchmark::Bv: return "bv";
    case Benchmark::QaoaChain: return "qaoa_chain";
    case Benchmark::Alt: return "alt";
    case Benchmark::CuccaroAdder: return "cuccaro_adder";
    case Benchmark::Heisenberg: return "heisenberg";
  }
  return "?";
}

inline Benchmark parse_benchmark_name(std::string_view name) {
  if (name == "qft") return Benchmark::Qft;
  if (name == "bv") return Benchmark::Bv;
  if (name == "qaoa_chain" || name == "qaoa") return Benchmark::QaoaChain;
  if (name == "alt") return Benchmark::Alt;
  if (name == "cuccaro_adder" || name == "adder") return Benchmark::CuccaroAdder;
  if (name == "heisenberg") return Benchmark::Heisenberg;
  throw InvalidArgument("unknown benchmark '" + std::string(name) + "'");
}

namespace bench_detail {

// Standard 6-cx Toffoli decomposition; `t` is the target.
inline void toffoli(Circuit& c, QubitId a, QubitId b, QubitId t) {
  c.add_one_qubit("h", t);
  c.add_two_qubit("cx", b, t);
  c.add_one_qubit("tdg", t);
  c.add_two_qubit("cx", a, t);
  c.add_one_qubit("t", t);
  c.add_two_qubit("cx", b, t);
  c.add_one_qubit("tdg", t);
  c.add_two_qubit("cx", a, t);
  c.add_one_qubit("t", b);
  c.add_one_qubit("t", t);
  c.add_one_qubit("h", t);
  c.add_two_qubit("cx", a, b);
  c.add_one_qubit("t", a);
  c.add_one_qubit("tdg", b);
  c.add_two_qubit("cx", a, b);
}

inline void controlled_phase(Circuit& c, QubitId control, QubitId target, double theta) {
  c.add_one_qubit("u1", control, {theta / 2});
  c.add_two_qubit("cx", control, target);
  c.add_one_qubit("u1", target, {-theta / 2});
  c.add_two_qubit("cx", control, target);
  c.add_one_qubit("u1", target, {theta / 2});
}

inline Circuit qft(int n) {
  Circuit c(n, "qft_" + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    c.add_one_qubit("h", i);
    for (int j = i + 1; j < n; ++j) {
      controlled_phase(c, j, i, std::numbers::pi / std::ldexp(1.0, j - i));
    }
  }
  return c;
}

inline Circuit bv(int n, const std::string& secret) {
  std::string bits = secret.empty() ? std::string(static_cast<std::size_t>(n), '1') : secret;
  if (static_cast<int>(bits.size()) != n || bits.find_first_not_of("01") != std::string::npos) {
    throw InvalidArgument("bv secret must be a " + std::to_string(n) + "-character bit string");
  }
  Circuit c(n + 1, "bv_" + std::to_string(n));
  c.add_one_qubit("x", n);
  for (int q = 0; q <= n; ++q) c.add_one_qubit("h", q);
  for (int q = 0; q < n; ++q) {
    if (bits[static_cast<std::size_t>(q)] == '1') c.add_two_qubit("cx", q, n);
  }
  for (int q = 0; q < n; ++q) c.add_one_qubit("h", q);
  return c;
}

inline Circuit qaoa_chain(int n, int layers) {
  Circuit c(n, "qaoa_chain_" + std::to_string(n));
  for (int q = 0; q < n; ++q) c.add_one_qubit("h", q);
  for (int l = 0; l < layers; ++l) {
    const double gamma = 0.5 + 0.01 * l;
    const double beta = 0.3 + 0.01 * l;
    for (int q = 0; q + 1 < n; ++q) c.add_two_qubit("rzz", q, q + 1, {gamma});
    for (int q = 0; q < n; ++q) c.add_one_qubit("rx", q, {2 * beta});
  }
  return c;
}

inline Circuit alt(int n, int layers) {
  Circuit c(n, "alt_" + std::to_string(n));
  for (int l = 0; l < layers; ++l) {
    for (int parity = 0; parity < 2; ++parity) {
      for (int q = 0; q < n; ++q) c.add_one_qubit("ry", q, {0.1 * (l + 1)});
      for (int q = parity; q + 1 < n; q += 2) c.add_two_qubit("cz", q, q + 1);
    }
  }
  return c;
}

// Ripple-carry adder on 2*bits+2 qubits laid out as cin, (b0,a0), (b1,a1), ..., cout.
inline Circuit cuccaro_adder(int bits) {
  const int n = 2 * bits + 2;
  Circuit c(n, "cuccaro_adder_" + std::to_string(bits));
  auto b = [](int i) { return 1 + 2 * i; };
  auto a = [](int i) { return 2 + 2 * i; };
  const int cin = 0;
  const int cout = n - 1;
  auto maj = [&](int x, int y, int z) {
    c.add_two_qubit("cx", z, y);
    c.add_two_qubit("cx", z, x);
    toffoli(c, x, y, z);
  };
  auto uma = [&](int x, int y, int z) {
    toffoli(c, x, y, z);
    c.add_two_qubit("cx", z, x);
    c.add_two_qubit("cx", x, y);
  };
  maj(cin, b(0), a(0));
  for (int i = 1; i < bits; ++i) maj(a(i - 1), b(i), a(i));
  c.add_two_qubit("cx", a(bits - 1), cout);
  for (int i = bits - 1; i >= 1; --i) uma(a(i - 1), b(i), a(i));
  uma(cin, b(0), a(0));
  return c;
}

inline Circuit heisenberg(int n, int steps) {
  Circuit c(n, "heisenberg_" + std::to_string(n));
  const double dt = 0.1;
  for (int s = 0; s < steps; ++s) {
    for (int q = 0; q + 1 < n; ++q) {
      c.add_two_qubit("rxx", q, q + 1, {2 * dt});
      c.add_two_qubit("ryy", q, q + 1, {2 * dt});
      c.add_two_qubit("rzz", q, q + 1, {2 * dt});
    }
  }
  return c;
}

}  // namespace bench_detail

inline Circuit gen_benchmark(Benchmark kind, int size, const BenchmarkParams& params = {}) {
  if (size < 2) {
    throw InvalidArgument(std::string(benchmark_name(kind)) + " size must be >= 2, got " +
                          std::to_string(size));
  }
  switch (kind) {
    case Benchmark::Qft: return bench_detail::qft(size);
    case Benchmark::Bv: return bench_detail::bv(size, params.secret);
    case Benchmark::QaoaChain:
      if (params.layers < 1) throw InvalidArgument("layers must be >= 1");
      return bench_detail::qaoa_chain(size, params.layers);
    case Benchmark::Alt:
      if (params.layers < 1) throw InvalidArgument("layers must be >= 1");
      return bench_detail::alt(size, params.layers);
    case Benchmark::CuccaroAdder: return bench_detail::cuccaro_adder(size);
    case Benchmark::Heisenberg:
      if (params.trotter_steps < 1) throw InvalidArgument("steps must be >= 1");
      return bench_detail::heisenberg(size, params.trotter_steps);
  }
  throw InvalidArgument("unknown benchmark");
}

struct GeneratorSpec {
  Benchmark kind = Benchmark::Qft;
  int size = 2;
  BenchmarkParams params;
};

/// Parses `name:size[:key=value,...]`, e.g. `qaoa_chain:16:layers=4`.
/// Keys: layers, steps, secret.
inline GeneratorSpec parse_generator_spec(std::string_view text) {
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw InvalidArgument("bad integer '" + std::string(s) + "' in generator spec '" +
                            std::string(text) + "'");
    }
    return v;
  };
  auto c1 = text.find(':');
  if (c1 == std::string_view::npos) {
    throw InvalidArgument("generator spec must be name:size[:key=value,...], got '" +
                          std::string(text) + "'");
  }
  GeneratorSpec spec;
  spec.kind = parse_benchmark_name(text.substr(0, c1));
  auto rest = text.substr(c1 + 1);
  auto c2 = rest.find(':');
  spec.size = to_int(rest.substr(0, c2));
  if (c2 == std::string_view::npos) return spec;
  auto opts = rest.substr(c2 + 1);
  while (!opts.empty()) {
    auto comma = opts.find(',');
    auto kv = opts.substr(0, comma);
    auto eq = kv.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("expected key=value in generator spec, got '" + std::string(kv) + "'");
    }
    auto key = kv.substr(0, eq);
    auto value = kv.substr(eq + 1);
    if (key == "layers") {
      spec.params.layers = to_int(value);
    } else if (key == "steps") {
      spec.params.trotter_steps = to_int(value);
    } else if (key == "secret") {
      spec.params.secret = std::string(value);
    } else {
      throw InvalidArgument("unknown generator option '" + std::string(key) + "'");
    }
    if (comma == std::string_view::npos) break;
    opts.remove_prefix(comma + 1);
  }
  return spec;
}

inline Circuit gen_benchmark(const GeneratorSpec& spec) {
  return gen_benchmark(spec.kind, spec.size, spec.params);
}

}  // namespace qccd
