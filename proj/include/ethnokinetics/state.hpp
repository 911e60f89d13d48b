#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace ethnokinetics {

struct population_tag {};
struct log_tag {};

/// Fixed-size real vector. The tag keeps population coordinates and
/// log-coordinates from being mixed by accident; derivatives share the
/// type of the state they belong to.
template <std::size_t N, class Tag = population_tag>
struct BasicState {
  static constexpr std::size_t dimension = N;
  using tag_type = Tag;

  std::array<double, N> v{};

  constexpr BasicState() = default;
  constexpr explicit BasicState(const std::array<double, N>& values) : v(values) {}
  template <class... Ts>
    requires(sizeof...(Ts) == N && N > 1)
  constexpr BasicState(Ts... values) : v{static_cast<double>(values)...} {}
  constexpr BasicState(double value)
    requires(N == 1)
      : v{value} {}

  static constexpr std::size_t size() noexcept { return N; }
  constexpr double& operator[](std::size_t i) noexcept { return v[i]; }
  constexpr const double& operator[](std::size_t i) const noexcept { return v[i]; }
  constexpr auto begin() noexcept { return v.begin(); }
  constexpr auto end() noexcept { return v.end(); }
  constexpr auto begin() const noexcept { return v.begin(); }
  constexpr auto end() const noexcept { return v.end(); }

  constexpr BasicState& operator+=(const BasicState& o) noexcept {
    for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
    return *this;
  }
  constexpr BasicState& operator-=(const BasicState& o) noexcept {
    for (std::size_t i = 0; i < N; ++i) v[i] -= o.v[i];
    return *this;
  }
  constexpr BasicState& operator*=(double s) noexcept {
    for (auto& c : v) c *= s;
    return *this;
  }

  friend constexpr BasicState operator+(BasicState a, const BasicState& b) noexcept { return a += b; }
  friend constexpr BasicState operator-(BasicState a, const BasicState& b) noexcept { return a -= b; }
  friend constexpr BasicState operator*(BasicState a, double s) noexcept { return a *= s; }
  friend constexpr BasicState operator*(double s, BasicState a) noexcept { return a *= s; }
  friend constexpr bool operator==(const BasicState&, const BasicState&) = default;
};

template <std::size_t N>
using State = BasicState<N, population_tag>;

using State2 = State<2>;
using State3 = State<3>;
using State6 = State<6>;
using LogState3 = BasicState<3, log_tag>;

template <std::size_t N, class Tag>
double norm(const BasicState<N, Tag>& s) {
  double acc = 0.0;
  for (double c : s) acc += c * c;
  return std::sqrt(acc);
}

template <std::size_t N, class Tag>
double max_abs_diff(const BasicState<N, Tag>& a, const BasicState<N, Tag>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

template <std::size_t N, class Tag>
bool all_finite(const BasicState<N, Tag>& s) {
  for (double c : s)
    if (!std::isfinite(c)) return false;
  return true;
}

inline LogState3 to_log(const State3& s) {
  return LogState3{std::log(s[0]), std::log(s[1]), std::log(s[2])};
}

inline State3 from_log(const LogState3& v) {
  return State3{std::exp(v[0]), std::exp(v[1]), std::exp(v[2])};
}

}  // namespace ethnokinetics
