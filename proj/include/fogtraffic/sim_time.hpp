#pragma once

#include <compare>
#include <cmath>
#include <cstdint>
#include <limits>

namespace fogtraffic {

/// Simulated time in integer milliseconds. Used both for instants and for
/// offsets between instants.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime ms(std::int64_t v) { return SimTime{v}; }
  static SimTime seconds(double s) { return SimTime{std::llround(s * 1000.0)}; }
  static constexpr SimTime max() { return SimTime{std::numeric_limits<std::int64_t>::max()}; }

  constexpr std::int64_t count() const { return ms_; }
  constexpr double to_seconds() const { return static_cast<double>(ms_) / 1000.0; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime& operator+=(SimTime o) {
    ms_ += o.ms_;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    ms_ -= o.ms_;
    return *this;
  }
  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.ms_ + b.ms_}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.ms_ - b.ms_}; }
  friend constexpr SimTime operator*(SimTime a, std::int64_t k) { return SimTime{a.ms_ * k}; }
  friend constexpr SimTime operator*(std::int64_t k, SimTime a) { return SimTime{a.ms_ * k}; }

 private:
  constexpr explicit SimTime(std::int64_t v) : ms_(v) {}
  std::int64_t ms_ = 0;
};

namespace literals {
constexpr SimTime operator""_ms(unsigned long long v) { return SimTime::ms(static_cast<std::int64_t>(v)); }
constexpr SimTime operator""_s(unsigned long long v) { return SimTime::ms(static_cast<std::int64_t>(v) * 1000); }
}  // namespace literals

}  // namespace fogtraffic
