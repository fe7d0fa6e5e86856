#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qccd/errors.hpp"

namespace qccd {

using QubitId = int;
using GateId = int;

enum class GateKind { OneQubit, TwoQubit };

struct Gate {
  GateId id = 0;
  GateKind kind = GateKind::OneQubit;
  std::string label;
  std::array<QubitId, 2> qubits{-1, -1};
  // Rotation angles in radians; carried for round-tripping, never interpreted.
  std::vector<double> params;

  bool two_qubit() const noexcept { return kind == GateKind::TwoQubit; }
  std::span<const QubitId> operands() const noexcept {
    return {qubits.data(), two_qubit() ? 2u : 1u};
  }
  bool acts_on(QubitId q) const noexcept {
    return qubits[0] == q || (two_qubit() && qubits[1] == q);
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Ordered gate list over a fixed qubit register. Gate ids are dense and
/// equal to their position in the list.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits, std::string name = {})
      : n_qubits_(n_qubits), name_(std::move(name)) {
    if (n_qubits < 0) throw InvalidArgument("negative qubit count");
  }

  int n_qubits() const noexcept { return n_qubits_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }
  const Gate& operator[](GateId id) const { return gates_.at(static_cast<std::size_t>(id)); }

  GateId add_one_qubit(std::string label, QubitId q, std::vector<double> params = {}) {
    check_qubit(q);
    Gate g;
    g.id = static_cast<GateId>(gates_.size());
    g.kind = GateKind::OneQubit;
    g.label = std::move(label);
    g.qubits = {q, -1};
    g.params = std::move(params);
    gates_.push_back(std::move(g));
    return gates_.back().id;
  }

  GateId add_two_qubit(std::string label, QubitId a, QubitId b, std::vector<double> params = {}) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw InvalidArgument("two-qubit gate '" + label + "' on identical qubits");
    Gate g;
    g.id = static_cast<GateId>(gates_.size());
    g.kind = GateKind::TwoQubit;
    g.label = std::move(label);
    g.qubits = {a, b};
    g.params = std::move(params);
    gates_.push_back(std::move(g));
    return gates_.back().id;
  }

  std::size_t two_qubit_count() const noexcept {
    std::size_t n = 0;
    for (const auto& g : gates_) n += g.two_qubit() ? 1 : 0;
    return n;
  }
  std::size_t one_qubit_count() const noexcept { return gates_.size() - two_qubit_count(); }

 private:
  void check_qubit(QubitId q) const {
    if (q < 0 || q >= n_qubits_) {
      throw InvalidArgument("qubit index " + std::to_string(q) + " out of range [0, " +
                            std::to_string(n_qubits_) + ")");
    }
  }

  int n_qubits_ = 0;
  std::string name_;
  std::vector<Gate> gates_;
};

}  // namespace qccd
