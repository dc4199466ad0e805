#include "fogtraffic/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fogtraffic {

namespace {
__extension__ typedef __int128 wide_int;
}  // namespace

std::uint64_t total_vehicles(std::span<const std::uint64_t> counts) {
  if (counts.empty()) throw std::invalid_argument("total_vehicles needs at least one road");
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

SimTime cycle_time(std::uint64_t total, SimTime crossing_time) {
  if (crossing_time <= SimTime{}) throw std::invalid_argument("crossing time must be positive");
  return crossing_time * static_cast<std::int64_t>(total);
}

std::optional<double> road_share(std::uint64_t road_count, std::uint64_t total) {
  if (total == 0) return std::nullopt;
  if (road_count > total) throw std::invalid_argument("road count exceeds total");
  return static_cast<double>(road_count) / static_cast<double>(total);
}

SimTime green_time(double share, SimTime cycle) {
  if (share < 0 || share > 1) throw std::invalid_argument("share must lie in [0, 1]");
  if (cycle < SimTime{}) throw std::invalid_argument("cycle must be non-negative");
  return SimTime::ms(static_cast<std::int64_t>(std::floor(share * static_cast<double>(cycle.count()))));
}

std::vector<SimTime> allocate_green(std::span<const std::uint64_t> counts, SimTime crossing_time) {
  const std::uint64_t total = total_vehicles(counts);
  const SimTime cycle = cycle_time(total, crossing_time);
  std::vector<SimTime> out(counts.size());
  if (total == 0) return out;
  // Exact rational share: floor(count * cycle / total), computed in integers.
  SimTime assigned;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const wide_int num = static_cast<wide_int>(counts[i]) * cycle.count();
    out[i] = SimTime::ms(static_cast<std::int64_t>(num / static_cast<wide_int>(total)));
    assigned += out[i];
  }
  out.back() += cycle - assigned;
  return out;
}

std::size_t road_capacity(double length_m, double car_length_m, double gap_m) {
  if (!(length_m > 0) || !(car_length_m > 0) || !(gap_m >= 0)) {
    throw std::invalid_argument("road geometry must be positive");
  }
  // Small epsilon so 400 / 5.0 does not land just below 80.
  return static_cast<std::size_t>(std::floor(length_m / (car_length_m + gap_m) + 1e-9));
}

const char* to_string(Signal s) {
  switch (s) {
    case Signal::Red: return "red";
    case Signal::Yellow: return "yellow";
    case Signal::Green: return "green";
  }
  return "unknown";
}

bool RoadState::arrive(Vehicle v) {
  ++arrived_;
  if (queue_.size() >= capacity_) {
    ++blocked_;
    return false;
  }
  queue_.push_back(std::move(v));
  return true;
}

std::optional<Vehicle> RoadState::serve_slot(SimTime t) {
  if (queue_.empty() || queue_.front().arrival_time > t) return std::nullopt;
  Vehicle v = std::move(queue_.front());
  queue_.pop_front();
  v.crossed_time = t;
  crossed_.push_back(v);
  return v;
}

std::vector<Vehicle> RoadState::discharge(SimTime green_start, SimTime window, SimTime crossing_time) {
  if (crossing_time <= SimTime{}) throw std::invalid_argument("crossing time must be positive");
  std::vector<Vehicle> out;
  const std::int64_t slots = window.count() / crossing_time.count();
  for (std::int64_t i = 1; i <= slots && !queue_.empty(); ++i) {
    if (auto v = serve_slot(green_start + crossing_time * i)) out.push_back(std::move(*v));
  }
  return out;
}

const char* to_string(ArrivalSpec::Kind kind) {
  switch (kind) {
    case ArrivalSpec::Kind::Deterministic: return "deterministic";
    case ArrivalSpec::Kind::Poisson: return "poisson";
    case ArrivalSpec::Kind::Trace: return "trace";
  }
  return "unknown";
}

void ArrivalSpec::validate() const {
  switch (kind) {
    case Kind::Deterministic:
      if (!(interval_s > 0)) throw std::invalid_argument("deterministic arrivals need interval_s > 0");
      if (batch == 0) throw std::invalid_argument("deterministic arrivals need batch >= 1");
      if (offset_s && *offset_s < 0) throw std::invalid_argument("offset_s must be non-negative");
      break;
    case Kind::Poisson:
      if (!(rate_per_s > 0)) throw std::invalid_argument("poisson arrivals need rate_per_s > 0");
      break;
    case Kind::Trace:
      for (std::size_t i = 0; i < times_s.size(); ++i) {
        if (times_s[i] < 0) throw std::invalid_argument("trace times must be non-negative");
        if (i > 0 && times_s[i] < times_s[i - 1]) throw std::invalid_argument("trace times must be sorted");
      }
      break;
  }
}

ArrivalProcess::ArrivalProcess(ArrivalSpec spec, Rng rng) : spec_(std::move(spec)), rng_(rng) { spec_.validate(); }

std::optional<std::pair<SimTime, std::uint32_t>> ArrivalProcess::next() {
  switch (spec_.kind) {
    case ArrivalSpec::Kind::Deterministic: {
      const double first = spec_.offset_s.value_or(spec_.interval_s);
      const double t = first + spec_.interval_s * static_cast<double>(emitted_++);
      return std::pair{SimTime::seconds(t), spec_.batch};
    }
    case ArrivalSpec::Kind::Poisson:
      clock_s_ += rng_.exponential(spec_.rate_per_s);
      ++emitted_;
      return std::pair{SimTime::seconds(clock_s_), std::uint32_t{1}};
    case ArrivalSpec::Kind::Trace:
      if (emitted_ >= spec_.times_s.size()) return std::nullopt;
      return std::pair{SimTime::seconds(spec_.times_s[emitted_++]), std::uint32_t{1}};
  }
  return std::nullopt;
}

}  // namespace fogtraffic
