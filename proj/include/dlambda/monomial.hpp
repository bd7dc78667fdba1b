#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <functional>

#include "dlambda/errors.hpp"
#include "dlambda/vartable.hpp"

namespace dlambda {

/// Exponent vector indexed by VarTable position. Also used as a
/// derivative multi-index by the operator engine.
class Monomial {
 public:
  using Storage = std::array<std::uint8_t, kMaxVariables>;

  Monomial() noexcept { e_.fill(0); }

  static Monomial unit(std::size_t var, unsigned power = 1) {
    Monomial m;
    m.set(var, power);
    return m;
  }

  unsigned operator[](std::size_t i) const noexcept { return e_[i]; }
  void set(std::size_t i, unsigned v) {
    if (v > 255) throw ExponentOverflow();
    e_[i] = static_cast<std::uint8_t>(v);
  }

  unsigned degree() const noexcept {
    unsigned d = 0;
    for (auto x : e_) d += x;
    return d;
  }
  bool is_one() const noexcept {
    return std::all_of(e_.begin(), e_.end(), [](std::uint8_t x) { return x == 0; });
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVariables; ++i) {
      unsigned s = unsigned(e_[i]) + o.e_[i];
      if (s > 255) throw ExponentOverflow();
      r.e_[i] = static_cast<std::uint8_t>(s);
    }
    return r;
  }
  bool divides(const Monomial& o) const noexcept {
    for (std::size_t i = 0; i < kMaxVariables; ++i)
      if (e_[i] > o.e_[i]) return false;
    return true;
  }
  /// Caller guarantees o divides *this.
  Monomial operator/(const Monomial& o) const noexcept {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVariables; ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
  }
  static Monomial min(const Monomial& a, const Monomial& b) noexcept {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVariables; ++i) r.e_[i] = std::min(a.e_[i], b.e_[i]);
    return r;
  }
  static Monomial max(const Monomial& a, const Monomial& b) noexcept {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVariables; ++i) r.e_[i] = std::max(a.e_[i], b.e_[i]);
    return r;
  }

  /// Lexicographic comparison in VarTable order.
  int compare(const Monomial& o) const noexcept { return std::memcmp(e_.data(), o.e_.data(), kMaxVariables); }
  bool operator==(const Monomial& o) const noexcept { return compare(o) == 0; }
  bool operator!=(const Monomial& o) const noexcept { return compare(o) != 0; }
  bool operator<(const Monomial& o) const noexcept { return compare(o) < 0; }

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : e_) h = (h ^ x) * 1099511628211ull;
    return h;
  }

 private:
  Storage e_;
};

/// Descending lexicographic order (leading term first).
struct LexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept { return a.compare(b) > 0; }
};

/// Higher total degree first, ties broken by descending lex.
struct DegLexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.compare(b) > 0;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

}  // namespace dlambda
