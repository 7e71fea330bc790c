#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ostat/error.hpp"
#include "ostat/rng.hpp"

namespace ostat {

/// A real number or one of the two symbolic infinities.
///
/// The infinities never take part in arithmetic: CDFs map them straight to
/// exactly 0 and exactly 1.
class ExtendedReal {
 public:
  enum class Kind { neg_inf, finite, pos_inf };

  constexpr ExtendedReal(double v) : kind_(Kind::finite), value_(v) {}  // NOLINT: implicit by intent

  static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::neg_inf); }
  static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::pos_inf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::finite; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::pos_inf; }

  /// The finite value. Only meaningful when is_finite().
  constexpr double value() const { return value_; }

  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (!a.is_finite()) return std::partial_ordering::equivalent;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }

  std::string to_string() const {
    if (is_neg_inf()) return "-inf";
    if (is_pos_inf()) return "+inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
  }

 private:
  constexpr explicit ExtendedReal(Kind k) : kind_(k), value_(0.0) {}

  Kind kind_;
  double value_;
};

/// A probability in [0, 1]. Construction clamps round-off excursions.
class Probability {
 public:
  constexpr Probability() = default;

  static constexpr Probability clamped(double raw) { return Probability(std::clamp(raw, 0.0, 1.0)); }

  constexpr double value() const { return value_; }
  constexpr operator double() const { return value_; }  // NOLINT

 private:
  constexpr explicit Probability(double v) : value_(v) {}
  double value_ = 0.0;
};

namespace dist {

struct Uniform {
  double a;
  double b;
};

struct Exponential {
  double rate;
};

struct StandardNormal {};

struct PointMass {
  double c;
};

struct Discrete {
  std::vector<double> support;
  std::vector<double> probs;
  std::vector<double> cumulative;  // cumulative[i] = sum of probs[0..i], clamped to [0,1]
};

}  // namespace dist

namespace detail {

inline double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Acklam's rational approximation followed by one Halley step against erfc;
// the refined result is accurate to a few ulp over (0, 1).
inline double standard_normal_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = standard_normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace detail

/// A univariate distribution, immutable after construction.
///
/// Every factory validates its parameters and throws ValidationError; once
/// constructed, cdf() and sample() never fail.
class Distribution {
 public:
  using Variant = std::variant<dist::Uniform, dist::Exponential, dist::StandardNormal, dist::PointMass, dist::Discrete>;

  static Distribution uniform(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
      throw ValidationError("uniform: requires finite a < b");
    }
    return Distribution(dist::Uniform{a, b});
  }

  static Distribution exponential(double rate) {
    if (!std::isfinite(rate) || !(rate > 0.0)) throw ValidationError("exponential: rate must be finite and > 0");
    return Distribution(dist::Exponential{rate});
  }

  static Distribution standard_normal() { return Distribution(dist::StandardNormal{}); }

  static Distribution point_mass(double c) {
    if (!std::isfinite(c)) throw ValidationError("point_mass: c must be finite");
    return Distribution(dist::PointMass{c});
  }

  static Distribution discrete(std::vector<double> support, std::vector<double> probs) {
    if (support.empty()) throw ValidationError("discrete: support must be non-empty");
    if (support.size() != probs.size()) throw ValidationError("discrete: support and probs differ in length");
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (!std::isfinite(support[i])) throw ValidationError("discrete: support values must be finite");
      if (i > 0 && !(support[i - 1] < support[i])) {
        throw ValidationError("discrete: support must be strictly ascending");
      }
      if (!std::isfinite(probs[i]) || !(probs[i] > 0.0)) throw ValidationError("discrete: probs must be positive");
    }
    std::vector<double> cumulative(probs.size());
    double running = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      running += probs[i];
      cumulative[i] = std::min(running, 1.0);
    }
    if (std::abs(running - 1.0) > 1e-12) throw ValidationError("discrete: probs must sum to 1 within 1e-12");
    return Distribution(dist::Discrete{std::move(support), std::move(probs), std::move(cumulative)});
  }

  const Variant& variant() const { return impl_; }

  bool is_discrete() const { return std::holds_alternative<dist::Discrete>(impl_); }
  bool is_point_mass() const { return std::holds_alternative<dist::PointMass>(impl_); }

  /// Kind name as used in the JSON representation.
  std::string_view kind_name() const {
    return std::visit(
        [](const auto& d) -> std::string_view {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, dist::Uniform>) return "uniform";
          if constexpr (std::is_same_v<T, dist::Exponential>) return "exponential";
          if constexpr (std::is_same_v<T, dist::StandardNormal>) return "standard_normal";
          if constexpr (std::is_same_v<T, dist::PointMass>) return "point_mass";
          if constexpr (std::is_same_v<T, dist::Discrete>) return "discrete";
        },
        impl_);
  }

  /// F(x) for a finite x, clamped to [0, 1].
  double cdf(double x) const {
    return std::visit(
        [x](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, dist::Uniform>) {
            if (x <= d.a) return 0.0;
            if (x >= d.b) return 1.0;
            return (x - d.a) / (d.b - d.a);
          } else if constexpr (std::is_same_v<T, dist::Exponential>) {
            return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x);
          } else if constexpr (std::is_same_v<T, dist::StandardNormal>) {
            return std::clamp(detail::standard_normal_cdf(x), 0.0, 1.0);
          } else if constexpr (std::is_same_v<T, dist::PointMass>) {
            return x >= d.c ? 1.0 : 0.0;
          } else {
            // Right-continuous: a support point equal to x counts as <= x.
            const auto it = std::upper_bound(d.support.begin(), d.support.end(), x);
            if (it == d.support.begin()) return 0.0;
            return d.cumulative[static_cast<std::size_t>(it - d.support.begin()) - 1];
          }
        },
        impl_);
  }

  /// F(x) with the sentinels mapped to exactly 0 and 1.
  double cdf(const ExtendedReal& x) const {
    if (x.is_neg_inf()) return 0.0;
    if (x.is_pos_inf()) return 1.0;
    return cdf(x.value());
  }

  /// Inverse-CDF draw.
  double sample(Rng& rng) const {
    // Open interval (0, 1) so quantiles stay finite.
    const double u = (static_cast<double>(rng.next_u64() >> 11) + 0.5) * 0x1.0p-53;
    return std::visit(
        [u](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, dist::Uniform>) {
            return d.a + (d.b - d.a) * u;
          } else if constexpr (std::is_same_v<T, dist::Exponential>) {
            return -std::log1p(-u) / d.rate;
          } else if constexpr (std::is_same_v<T, dist::StandardNormal>) {
            return detail::standard_normal_quantile(u);
          } else if constexpr (std::is_same_v<T, dist::PointMass>) {
            return d.c;
          } else {
            const auto it = std::upper_bound(d.cumulative.begin(), d.cumulative.end(), u);
            const auto idx = std::min(static_cast<std::size_t>(it - d.cumulative.begin()), d.support.size() - 1);
            return d.support[idx];
          }
        },
        impl_);
  }

  /// Discrete support and probabilities; a point mass is reported as a
  /// one-point support. Throws TypeError for continuous kinds.
  std::pair<std::vector<double>, std::vector<double>> discrete_table() const {
    if (const auto* d = std::get_if<dist::Discrete>(&impl_)) return {d->support, d->probs};
    if (const auto* p = std::get_if<dist::PointMass>(&impl_)) return {{p->c}, {1.0}};
    throw TypeError("distribution of kind '" + std::string(kind_name()) + "' is not discrete");
  }

 private:
  explicit Distribution(Variant v) : impl_(std::move(v)) {}

  Variant impl_;
};

/// F(x) as a Probability; NEG_INF maps to 0 and POS_INF to 1 exactly.
inline Probability eval_cdf(const Distribution& d, const ExtendedReal& x) { return Probability::clamped(d.cdf(x)); }

inline double sample(const Distribution& d, Rng& rng) { return d.sample(rng); }

// JSON ----------------------------------------------------------------------

namespace detail {

inline double json_number(const nlohmann::json& j, const char* field, const std::string& where) {
  if (!j.contains(field)) throw ValidationError(where + ": missing field '" + field + "'");
  const auto& v = j.at(field);
  if (!v.is_number()) throw ValidationError(where + ": field '" + field + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> json_number_array(const nlohmann::json& j, const char* field, const std::string& where) {
  if (!j.contains(field) || !j.at(field).is_array()) {
    throw ValidationError(where + ": field '" + field + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j.at(field)) {
    if (!v.is_number()) throw ValidationError(where + ": field '" + field + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// Parse {"kind": ..., params...}. `where` prefixes diagnostics.
inline Distribution distribution_from_json(const nlohmann::json& j, const std::string& where = "dist") {
  if (!j.is_object()) throw ValidationError(where + ": must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ValidationError(where + ": missing string field 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "uniform") {
      return Distribution::uniform(detail::json_number(j, "a", where), detail::json_number(j, "b", where));
    }
    if (kind == "exponential") return Distribution::exponential(detail::json_number(j, "rate", where));
    if (kind == "standard_normal") return Distribution::standard_normal();
    if (kind == "point_mass") return Distribution::point_mass(detail::json_number(j, "c", where));
    if (kind == "discrete") {
      return Distribution::discrete(detail::json_number_array(j, "support", where),
                                    detail::json_number_array(j, "probs", where));
    }
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0) throw;
    throw ValidationError(where + ": " + msg);
  }
  throw ValidationError(where + ".kind: unknown distribution kind '" + kind + "'");
}

inline nlohmann::json to_json(const Distribution& d) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, dist::Uniform>) return {{"kind", "uniform"}, {"a", v.a}, {"b", v.b}};
        if constexpr (std::is_same_v<T, dist::Exponential>) return {{"kind", "exponential"}, {"rate", v.rate}};
        if constexpr (std::is_same_v<T, dist::StandardNormal>) return {{"kind", "standard_normal"}};
        if constexpr (std::is_same_v<T, dist::PointMass>) return {{"kind", "point_mass"}, {"c", v.c}};
        if constexpr (std::is_same_v<T, dist::Discrete>) {
          return {{"kind", "discrete"}, {"support", v.support}, {"probs", v.probs}};
        }
      },
      d.variant());
}

}  // namespace ostat
