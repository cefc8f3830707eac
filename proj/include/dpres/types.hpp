#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dpres {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

// Weights and distances are exact: generator weights grow like (2an)^i and
// overflow any fixed-width type almost immediately.
using Weight = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A distance; disengaged means UNREACHABLE. There is no numeric infinity
// anywhere in the library — unreachable is a distinguished value.
using Dist = std::optional<Weight>;

inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();
inline constexpr EdgeId kInvalidEdge = std::numeric_limits<EdgeId>::max();

// Precondition or malformed-input violation: the caller handed us something
// the contract rejects. The CLI maps this to exit code 2.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A checked mathematical property failed on concrete data. Carries a minimal
// witness in the message. The CLI maps this to exit code 1.
struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// floor(a/b) for b > 0.
inline Weight floor_div(const Weight& a, const Weight& b) {
  Weight q = a / b;  // truncates toward zero
  if ((a < 0) != (b < 0) && q * b != a) --q;
  return q;
}

// ceil(a/b) for b > 0.
inline Weight ceil_div(const Weight& a, const Weight& b) {
  return -floor_div(-a, b);
}

inline Weight floor_rational(const Rational& r) {
  return floor_div(numerator(r), denominator(r));
}

inline Weight ceil_rational(const Rational& r) {
  return ceil_div(numerator(r), denominator(r));
}

// floor(x^(1/k)) by binary search on the bit length; exact for any size.
inline Weight iroot(const Weight& x, unsigned k) {
  if (x < 0) throw ArgumentError("iroot of a negative value");
  if (k == 0) throw ArgumentError("iroot with k = 0");
  if (x <= 1 || k == 1) return x;
  Weight lo = 1, hi = Weight(1) << (boost::multiprecision::msb(x) / k + 1);
  while (lo < hi) {  // invariant: lo^k <= x < (hi+1)^k
    Weight mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, k) <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

// Parses "7", "3/2", "1.5" into an exact rational. Decimal forms are exact
// (finite decimals only), which is all the CLI promises.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw ArgumentError("empty rational literal");
  auto slash = s.find('/');
  auto dot = s.find('.');
  try {
    if (slash != std::string::npos) {
      Weight num(s.substr(0, slash));
      Weight den(s.substr(slash + 1));
      if (den == 0) throw ArgumentError("rational with zero denominator: " + s);
      return Rational(num, den);
    }
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      Weight num(digits);
      Weight den = 1;
      for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
      return Rational(num, den);
    }
    return Rational(Weight(s));
  } catch (const std::runtime_error& e) {
    throw ArgumentError("bad rational literal '" + s + "': " + e.what());
  }
}

inline std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// ---- deterministic randomness -------------------------------------------
// std::uniform_int_distribution and std::shuffle are implementation-defined;
// tests freeze expected values, so all draws go through these helpers.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform draw from [0, bound) by rejection; bound > 0
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw ArgumentError("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  // uniform in [lo, hi] inclusive
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw ArgumentError("Rng::between: empty range");
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

  // k distinct values from [0, n), in sorted order
  std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n,
                                                        std::uint64_t k) {
    if (k > n) throw ArgumentError("sample size exceeds population");
    // Floyd's algorithm keeps this cheap for k << n.
    std::vector<std::uint64_t> out;
    std::vector<bool> seen;
    seen.assign(n, false);
    for (std::uint64_t j = n - k; j < n; ++j) {
      std::uint64_t t = below(j + 1);
      if (seen[t]) t = j;
      seen[t] = true;
      out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dpres
