#pragma once

// Reverse-mode differentiation on an explicit tape, plus Jet2: a value with
// its first and second derivative along one input, generic over the scalar.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace symcat::ad {

class Tape {
 public:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t push(std::uint32_t a, double da, std::uint32_t b, double db) {
    nodes_.push_back({a, b, da, db});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }
  std::uint32_t leaf() { return push(kNone, 0.0, kNone, 0.0); }
  std::size_t size() const { return nodes_.size(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }
  void clear() { nodes_.clear(); }

  /// Adjoints of every node with respect to node `out`.
  std::vector<double> adjoints(std::uint32_t out) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    adj[out] = 1.0;
    for (std::size_t k = out + 1; k-- > 0;) {
      const auto& n = nodes_[k];
      if (adj[k] == 0.0) continue;
      if (n.a != kNone) adj[n.a] += n.da * adj[k];
      if (n.b != kNone) adj[n.b] += n.db * adj[k];
    }
    return adj;
  }

 private:
  struct Node {
    std::uint32_t a, b;
    double da, db;
  };
  std::vector<Node> nodes_;
};

/// A tape variable, or a constant when `tape` is null.
struct Var {
  double v = 0.0;
  Tape* tape = nullptr;
  std::uint32_t id = Tape::kNone;

  Var() = default;
  Var(double x) : v(x) {}  // NOLINT: constants lift implicitly
  Var(double x, Tape* t, std::uint32_t i) : v(x), tape(t), id(i) {}

  static Var leaf(Tape& t, double x) { return {x, &t, t.leaf()}; }
  bool constant() const { return tape == nullptr; }
};

namespace detail {
inline Var unary(const Var& a, double value, double da) {
  if (a.constant()) return Var(value);
  return {value, a.tape, a.tape->push(a.id, da, Tape::kNone, 0.0)};
}
inline Var binary(const Var& a, const Var& b, double value, double da, double db) {
  if (a.constant() && b.constant()) return Var(value);
  Tape* t = a.constant() ? b.tape : a.tape;
  return {value, t, t->push(a.id, a.constant() ? 0.0 : da, b.id, b.constant() ? 0.0 : db)};
}
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) { return detail::binary(a, b, a.v + b.v, 1.0, 1.0); }
inline Var operator-(const Var& a, const Var& b) { return detail::binary(a, b, a.v - b.v, 1.0, -1.0); }
inline Var operator*(const Var& a, const Var& b) { return detail::binary(a, b, a.v * b.v, b.v, a.v); }
inline Var operator/(const Var& a, const Var& b) {
  const double q = a.v / b.v;
  return detail::binary(a, b, q, 1.0 / b.v, -q / b.v);
}
inline Var operator-(const Var& a) { return detail::unary(a, -a.v, -1.0); }
inline Var tanh(const Var& a) {
  const double t = std::tanh(a.v);
  return detail::unary(a, t, 1.0 - t * t);
}
inline double primal(const Var& a) { return a.v; }

/// u, du/dx and d2u/dx2 carried together through an expression.
template <class S>
struct Jet2 {
  S v{}, d1{}, d2{};

  static Jet2 variable(double x) { return {S(x), S(1.0), S(0.0)}; }
  static Jet2 constant(const S& c) { return {c, S(0.0), S(0.0)}; }
};

template <class S>
Jet2<S> operator+(const Jet2<S>& a, const Jet2<S>& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
template <class S>
Jet2<S> operator-(const Jet2<S>& a, const Jet2<S>& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
template <class S>
Jet2<S> operator*(const Jet2<S>& a, const Jet2<S>& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * (a.d1 * b.d1) + a.v * b.d2};
}
/// Product with a quantity that does not depend on x.
template <class S>
Jet2<S> scale(const S& w, const Jet2<S>& a) {
  return {w * a.v, w * a.d1, w * a.d2};
}
template <class S>
Jet2<S> tanh(const Jet2<S>& a) {
  using std::tanh;
  const S t = tanh(a.v);
  const S dt = 1.0 - t * t;  // tanh'
  const S ddt = -2.0 * (t * dt);  // tanh''
  return {t, dt * a.d1, dt * a.d2 + ddt * (a.d1 * a.d1)};
}
template <class S>
Jet2<S> cos(const Jet2<S>& a) {
  using std::cos;
  using std::sin;
  const S c = cos(a.v);
  const S s = sin(a.v);
  return {c, -(s * a.d1), -(s * a.d2) - c * (a.d1 * a.d1)};
}

}  // namespace symcat::ad
