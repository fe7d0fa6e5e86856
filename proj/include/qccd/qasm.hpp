#pragma once

// OpenQASM 2.0 subset reader/writer.
//
// Supported: a single qreg, creg (ignored), barrier (ignored), measure
// (ignored), and the gate names listed in the tables below. A `swap` statement
// is expanded into three `cx` gates.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qccd/circuit.hpp"
#include "qccd/errors.hpp"

namespace qccd {

namespace qasm_detail {

struct GateSignature {
  std::string_view name;
  int arity;
  int min_params;
  int max_params;
};

inline constexpr GateSignature kGateTable[] = {
    {"id", 1, 0, 0},   {"h", 1, 0, 0},    {"x", 1, 0, 0},    {"y", 1, 0, 0},
    {"z", 1, 0, 0},    {"s", 1, 0, 0},    {"sdg", 1, 0, 0},  {"t", 1, 0, 0},
    {"tdg", 1, 0, 0},  {"sx", 1, 0, 0},   {"rx", 1, 1, 1},   {"ry", 1, 1, 1},
    {"rz", 1, 1, 1},   {"u1", 1, 1, 1},   {"u2", 1, 2, 2},   {"u3", 1, 3, 3},
    {"u", 1, 3, 3},    {"cx", 2, 0, 0},   {"CX", 2, 0, 0},   {"cz", 2, 0, 0},
    {"cp", 2, 1, 1},   {"cu1", 2, 1, 1},  {"swap", 2, 0, 0}, {"rzz", 2, 1, 1},
    {"rxx", 2, 1, 1},  {"ryy", 2, 1, 1},  {"ms", 2, 0, 1},
};

inline const GateSignature* find_gate(std::string_view name) {
  for (const auto& sig : kGateTable) {
    if (sig.name == name) return &sig;
  }
  return nullptr;
}

// Recursive-descent evaluator for parameter expressions: numbers, pi,
// + - * / ^, unary minus and parentheses.
class ExprParser {
 public:
  ExprParser(std::string_view text, int line) : text_(text), line_(line) {}

  double parse() {
    double v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
    return v;
  }

 private:
  double expr() {
    double v = term();
    for (;;) {
      skip_ws();
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = power();
    for (;;) {
      skip_ws();
      if (eat('*')) {
        v *= power();
      } else if (eat('/')) {
        v /= power();
      } else {
        return v;
      }
    }
  }

  double power() {
    double base = unary();
    skip_ws();
    if (eat('^')) return std::pow(base, power());
    return base;
  }

  double unary() {
    skip_ws();
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }

  double primary() {
    skip_ws();
    if (eat('(')) {
      double v = expr();
      skip_ws();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return std::numbers::pi;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    if (start == pos_) fail("expected number in parameter expression");
    std::string token(text_.substr(start, pos_ - start));
    char* end = nullptr;
    double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) fail("bad number '" + token + "'");
    return v;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t depth = 0, start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && depth > 0) --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

inline bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

struct Statement {
  std::string text;
  int line;
};

// Splits source into ';'-terminated statements with comments removed.
inline std::vector<Statement> statements(std::string_view text) {
  std::vector<Statement> out;
  std::string current;
  int line = 1;
  int stmt_line = 1;
  bool in_stmt = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      if (i < text.size()) {
        ++line;
        current.push_back(' ');
      }
      continue;
    }
    if (c == '\n') {
      ++line;
      current.push_back(' ');
      continue;
    }
    if (c == ';') {
      out.push_back({std::string(trim(current)), stmt_line});
      current.clear();
      in_stmt = false;
      continue;
    }
    if (!in_stmt && !std::isspace(static_cast<unsigned char>(c))) {
      in_stmt = true;
      stmt_line = line;
    }
    current.push_back(c);
  }
  if (!trim(current).empty()) throw ParseError(stmt_line, "missing ';' at end of statement");
  return out;
}

}  // namespace qasm_detail

/// Parses an OpenQASM 2.0 program into a Circuit. Throws ParseError (with the
/// offending line) on syntax errors, unsupported gates and out-of-range
/// qubit indices.
inline Circuit parse_qasm(std::string_view text, std::string name = {}) {
  using namespace qasm_detail;
  std::optional<Circuit> circuit;
  std::string qreg_name;

  auto parse_index = [](std::string_view arg, int line, std::string& reg) -> std::optional<int> {
    auto lb = arg.find('[');
    if (lb == std::string_view::npos) {
      if (!is_ident(arg)) throw ParseError(line, "bad operand '" + std::string(arg) + "'");
      reg = std::string(arg);
      return std::nullopt;
    }
    auto rb = arg.find(']', lb);
    if (rb == std::string_view::npos || trim(arg.substr(rb + 1)) != "") {
      throw ParseError(line, "bad operand '" + std::string(arg) + "'");
    }
    reg = std::string(trim(arg.substr(0, lb)));
    auto digits = trim(arg.substr(lb + 1, rb - lb - 1));
    if (digits.empty()) throw ParseError(line, "empty index in '" + std::string(arg) + "'");
    int value = 0;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParseError(line, "bad index in '" + std::string(arg) + "'");
      }
      value = value * 10 + (c - '0');
    }
    return value;
  };

  for (const auto& stmt : statements(text)) {
    std::string_view s = stmt.text;
    const int line = stmt.line;
    if (s.empty()) continue;

    std::size_t head_end = 0;
    while (head_end < s.size() && (std::isalnum(static_cast<unsigned char>(s[head_end])) ||
                                   s[head_end] == '_')) {
      ++head_end;
    }
    std::string_view head = s.substr(0, head_end);
    std::string_view rest = trim(s.substr(head_end));

    if (head == "OPENQASM" || head == "include" || head == "barrier") continue;
    if (head == "creg") continue;
    if (head == "measure") continue;
    if (head == "qreg") {
      if (circuit) throw ParseError(line, "only a single qreg is supported");
      std::string reg;
      auto size = parse_index(rest, line, reg);
      if (!size || !is_ident(reg)) throw ParseError(line, "malformed qreg declaration");
      qreg_name = reg;
      circuit.emplace(*size, name);
      continue;
    }
    if (head.empty()) throw ParseError(line, "syntax error near '" + std::string(s) + "'");

    const GateSignature* sig = find_gate(head);
    if (sig == nullptr) throw ParseError(line, "unsupported gate '" + std::string(head) + "'");
    if (!circuit) throw ParseError(line, "gate before qreg declaration");

    std::vector<double> params;
    if (!rest.empty() && rest.front() == '(') {
      int depth = 0;
      std::size_t close = std::string_view::npos;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] == '(') ++depth;
        if (rest[i] == ')' && --depth == 0) {
          close = i;
          break;
        }
      }
      if (close == std::string_view::npos) throw ParseError(line, "missing ')'");
      auto inner = trim(rest.substr(1, close - 1));
      if (!inner.empty()) {
        for (auto piece : split(inner, ',')) params.push_back(ExprParser(piece, line).parse());
      }
      rest = trim(rest.substr(close + 1));
    }
    if (static_cast<int>(params.size()) < sig->min_params ||
        static_cast<int>(params.size()) > sig->max_params) {
      throw ParseError(line, "wrong parameter count for '" + std::string(head) + "'");
    }

    auto args = split(rest, ',');
    if (static_cast<int>(args.size()) != sig->arity) {
      throw ParseError(line, "'" + std::string(head) + "' expects " +
                                 std::to_string(sig->arity) + " operand(s)");
    }
    std::vector<std::optional<int>> idx;
    for (auto arg : args) {
      std::string reg;
      auto i = parse_index(arg, line, reg);
      if (reg != qreg_name) throw ParseError(line, "unknown register '" + reg + "'");
      if (i && *i >= circuit->n_qubits()) {
        throw ParseError(line, "qubit index " + std::to_string(*i) + " out of range for " +
                                   qreg_name + "[" + std::to_string(circuit->n_qubits()) + "]");
      }
      idx.push_back(i);
    }

    std::string label(head == "CX" ? std::string_view("cx") : head);
    try {
      if (sig->arity == 1) {
        if (idx[0]) {
          circuit->add_one_qubit(label, *idx[0], params);
        } else {
          for (int q = 0; q < circuit->n_qubits(); ++q) circuit->add_one_qubit(label, q, params);
        }
      } else {
        if (!idx[0] || !idx[1]) throw ParseError(line, "register broadcast unsupported for '" + label + "'");
        if (label == "swap") {
          circuit->add_two_qubit("cx", *idx[0], *idx[1]);
          circuit->add_two_qubit("cx", *idx[1], *idx[0]);
          circuit->add_two_qubit("cx", *idx[0], *idx[1]);
        } else {
          circuit->add_two_qubit(label, *idx[0], *idx[1], params);
        }
      }
    } catch (const InvalidArgument& e) {
      throw ParseError(line, e.what());
    }
  }
  if (!circuit) throw ParseError(1, "no qreg declaration");
  return std::move(*circuit);
}

/// Writes a circuit as OpenQASM 2.0 with a single register `q`.
inline std::string emit_qasm(const Circuit& circuit) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  out << "qreg q[" << circuit.n_qubits() << "];\n";
  out << std::setprecision(17);
  for (const auto& g : circuit.gates()) {
    out << g.label;
    if (!g.params.empty()) {
      out << '(';
      for (std::size_t i = 0; i < g.params.size(); ++i) out << (i ? "," : "") << g.params[i];
      out << ')';
    }
    out << " q[" << g.qubits[0] << ']';
    if (g.two_qubit()) out << ",q[" << g.qubits[1] << ']';
    out << ";\n";
  }
  return out.str();
}

}  // namespace qccd
