#pragma once

// Real quaternions q = w + xi + yj + zk and dual quaternions q0 + q1*eps
// (eps^2 = 0). Component order is (w, x, y, z) everywhere.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dqm {

/// Imaginary unit selecting the involution q -> -eta q* eta.
enum class EtaAxis { i, j, k };

inline char to_char(EtaAxis eta) {
  switch (eta) {
    case EtaAxis::i: return 'i';
    case EtaAxis::j: return 'j';
    case EtaAxis::k: return 'k';
  }
  return '?';
}

inline EtaAxis eta_from_string(std::string_view s) {
  if (s == "i") return EtaAxis::i;
  if (s == "j") return EtaAxis::j;
  if (s == "k") return EtaAxis::k;
  throw std::invalid_argument("eta must be one of i, j, k (got '" + std::string(s) + "')");
}

inline constexpr EtaAxis kAllEtas[] = {EtaAxis::i, EtaAxis::j, EtaAxis::k};

template <typename Scalar = double>
struct Quaternion {
  Scalar w{0}, x{0}, y{0}, z{0};

  constexpr Quaternion() = default;
  constexpr Quaternion(Scalar w_, Scalar x_ = 0, Scalar y_ = 0, Scalar z_ = 0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion unit(EtaAxis eta) {
    switch (eta) {
      case EtaAxis::i: return {0, 1, 0, 0};
      case EtaAxis::j: return {0, 0, 1, 0};
      case EtaAxis::k: return {0, 0, 0, 1};
    }
    return {};
  }

  constexpr bool operator==(Quaternion const&) const = default;

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  constexpr Quaternion conjugate() const { return {w, -x, -y, -z}; }

  constexpr Scalar squared_norm() const { return w * w + x * x + y * y + z * z; }

  Scalar norm() const { return std::sqrt(squared_norm()); }

  constexpr Quaternion& operator+=(Quaternion const& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(Quaternion const& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
};

template <typename Scalar>
constexpr Quaternion<Scalar> operator+(Quaternion<Scalar> a, Quaternion<Scalar> const& b) {
  return a += b;
}

template <typename Scalar>
constexpr Quaternion<Scalar> operator-(Quaternion<Scalar> a, Quaternion<Scalar> const& b) {
  return a -= b;
}

// Hamilton product; ij = k, jk = i, ki = j.
template <typename Scalar>
constexpr Quaternion<Scalar> operator*(Quaternion<Scalar> const& a, Quaternion<Scalar> const& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

template <typename Scalar>
constexpr Quaternion<Scalar> operator*(Scalar s, Quaternion<Scalar> const& q) {
  return {s * q.w, s * q.x, s * q.y, s * q.z};
}

template <typename Scalar>
constexpr Quaternion<Scalar> operator*(Quaternion<Scalar> const& q, Scalar s) {
  return s * q;
}

/// -eta q* eta. For eta = i this negates the i-coefficient and keeps j, k.
template <typename Scalar>
constexpr Quaternion<Scalar> eta_conjugate(Quaternion<Scalar> const& q, EtaAxis eta) {
  auto const u = Quaternion<Scalar>::unit(eta);
  return -(u * q.conjugate() * u);
}

namespace detail {

inline std::string format_coefficient(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Renders as `a+bi+cj+dk` with explicit signs, e.g. `1-2i+0j+3k`.
template <typename Scalar>
std::string to_string(Quaternion<Scalar> const& q) {
  auto term = [](Scalar v, char const* unit) {
    auto s = detail::format_coefficient(static_cast<double>(v));
    if (s.front() != '-') s.insert(s.begin(), '+');
    return s + unit;
  };
  return detail::format_coefficient(static_cast<double>(q.w)) + term(q.x, "i") +
         term(q.y, "j") + term(q.z, "k");
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, Quaternion<Scalar> const& q) {
  return os << to_string(q);
}

template <typename Scalar = double>
struct DualQuaternion {
  Quaternion<Scalar> std_part{};
  Quaternion<Scalar> inf_part{};

  constexpr bool operator==(DualQuaternion const&) const = default;

  constexpr DualQuaternion conjugate() const {
    return {std_part.conjugate(), inf_part.conjugate()};
  }
};

template <typename Scalar>
constexpr DualQuaternion<Scalar> operator+(DualQuaternion<Scalar> const& a,
                                           DualQuaternion<Scalar> const& b) {
  return {a.std_part + b.std_part, a.inf_part + b.inf_part};
}

template <typename Scalar>
constexpr DualQuaternion<Scalar> operator-(DualQuaternion<Scalar> const& a,
                                           DualQuaternion<Scalar> const& b) {
  return {a.std_part - b.std_part, a.inf_part - b.inf_part};
}

// (a0 + a1 eps)(b0 + b1 eps) = a0 b0 + (a0 b1 + a1 b0) eps; order of factors kept.
template <typename Scalar>
constexpr DualQuaternion<Scalar> operator*(DualQuaternion<Scalar> const& a,
                                           DualQuaternion<Scalar> const& b) {
  return {a.std_part * b.std_part, a.std_part * b.inf_part + a.inf_part * b.std_part};
}

template <typename Scalar>
constexpr DualQuaternion<Scalar> eta_conjugate(DualQuaternion<Scalar> const& d, EtaAxis eta) {
  return {eta_conjugate(d.std_part, eta), eta_conjugate(d.inf_part, eta)};
}

/// Renders as `(<std> | <inf>)`.
template <typename Scalar>
std::string to_string(DualQuaternion<Scalar> const& d) {
  return "(" + to_string(d.std_part) + " | " + to_string(d.inf_part) + ")";
}

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, DualQuaternion<Scalar> const& d) {
  return os << to_string(d);
}

}  // namespace dqm
