#include "fogtraffic/controllers.hpp"

#include <algorithm>

namespace fogtraffic {

LedAssignment LedAssignment::from_signals(std::span<const Signal> signals) {
  LedAssignment a(signals.size());
  for (std::size_t r = 0; r < signals.size(); ++r) {
    switch (signals[r]) {
      case Signal::Red: a.set(r, LedColor::Red); break;
      case Signal::Yellow: a.set(r, LedColor::Yellow); break;
      case Signal::Green: a.set(r, LedColor::Green); break;
    }
  }
  return a;
}

void LedAssignment::set(std::size_t road, LedColor color) {
  Lamps& l = lamps_.at(road);
  l = {false, false, false};
  l[static_cast<int>(color)] = true;
}

LedColor LedAssignment::active(std::size_t road) const {
  const Lamps& l = lamps_.at(road);
  for (int c = 0; c < 3; ++c) {
    if (l[c]) return static_cast<LedColor>(c);
  }
  throw ControllerError("road " + std::to_string(road + 1) + " has no lit LED");
}

void LedAssignment::validate() const {
  std::size_t greens = 0;
  for (std::size_t r = 0; r < lamps_.size(); ++r) {
    const auto lit = std::count(lamps_[r].begin(), lamps_[r].end(), true);
    if (lit != 1) {
      throw ControllerError("road " + std::to_string(r + 1) + " has " + std::to_string(lit) +
                            " lit LEDs, expected exactly one");
    }
    if (lamps_[r][static_cast<int>(LedColor::Green)]) ++greens;
  }
  if (greens > 1) throw ControllerError("more than one road is green");
}

LedAssignment path(std::size_t source, std::size_t destination, std::size_t roads) {
  if (source >= roads || destination >= roads) throw ControllerError("path: unknown road");
  if (source == destination) throw ControllerError("path: source and destination are the same road");
  LedAssignment a(roads);
  a.set(source, LedColor::Green);
  return a;
}

std::vector<Phase> PhasePlan::served() const {
  std::vector<Phase> out;
  std::copy_if(phases.begin(), phases.end(), std::back_inserter(out),
               [](const Phase& p) { return p.green > SimTime{}; });
  return out;
}

SimTime PhasePlan::green_total() const {
  SimTime total;
  for (const Phase& p : phases) total += p.green;
  return total;
}

std::size_t PhasePlan::yellow_count() const {
  const std::size_t n = served().size();
  return n > 1 && yellow > SimTime{} ? n - 1 : 0;
}

SimTime PhasePlan::length() const {
  return green_total() + yellow * static_cast<std::int64_t>(yellow_count()) + idle;
}

std::vector<SignalInterval> PhasePlan::timeline(SimTime start) const {
  std::vector<SignalInterval> out;
  const auto s = served();
  SimTime t = start;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.push_back({t, t + s[i].green, s[i].road, Signal::Green});
    t += s[i].green;
    if (i + 1 < s.size() && yellow > SimTime{}) {
      out.push_back({t, t + yellow, s[i].road, Signal::Yellow});
      t += yellow;
    }
  }
  return out;
}

PhasePlan itcms_plan(std::span<const std::uint64_t> counts, const ItcmsParams& params, SimTime yellow) {
  PhasePlan plan{.phases = {}, .yellow = yellow, .idle = {}};
  const std::vector<SimTime> greens = allocate_green(counts, params.crossing_time);
  for (std::size_t r = 0; r < counts.size(); ++r) plan.phases.push_back({r, greens[r]});
  if (plan.green_total() == SimTime{}) plan.idle = params.min_cycle;
  return plan;
}

PhasePlan stl_plan(const std::vector<bool>& congested, const StlParams& params, SimTime yellow) {
  if (congested.empty()) throw ControllerError("stl_plan needs at least one road");
  PhasePlan plan{.phases = {}, .yellow = yellow, .idle = {}};
  for (std::size_t r = 0; r < congested.size(); ++r) {
    plan.phases.push_back({r, congested[r] ? params.base_green + params.extension : params.base_green});
  }
  return plan;
}

PhasePlan iov_plan(std::span<const std::uint64_t> occupancy, const IovParams& params, SimTime yellow) {
  PhasePlan plan{.phases = {}, .yellow = yellow, .idle = {}};
  const auto cap = static_cast<std::uint64_t>(road_capacity(params.road_length_m, params.car_length_m, params.gap_m));
  for (std::size_t r = 0; r < occupancy.size(); ++r) {
    plan.phases.push_back({r, params.headway * static_cast<std::int64_t>(std::min(occupancy[r], cap))});
  }
  if (plan.green_total() == SimTime{}) plan.idle = params.min_cycle;
  return plan;
}

std::vector<bool> stl_congestion(std::span<const std::uint64_t> counts, std::span<const std::size_t> capacities,
                                 double threshold) {
  std::vector<bool> out(counts.size());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    out[r] = static_cast<double>(counts[r]) >= threshold * static_cast<double>(capacities[r]);
  }
  return out;
}

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Itcms: return "itcms";
    case ControllerKind::Stl: return "stl";
    case ControllerKind::Iov: return "iov";
  }
  return "unknown";
}

ControllerKind parse_controller(const std::string& name) {
  if (name == "itcms") return ControllerKind::Itcms;
  if (name == "stl") return ControllerKind::Stl;
  if (name == "iov") return ControllerKind::Iov;
  throw ControllerError("unknown controller '" + name + "' (valid: itcms, stl, iov)");
}

PhasePlan plan_cycle(const ControllerConfig& config, const CycleSnapshot& snapshot) {
  switch (config.kind) {
    case ControllerKind::Itcms: return itcms_plan(snapshot.counts, config.itcms, config.yellow);
    case ControllerKind::Stl:
      return stl_plan(stl_congestion(snapshot.counts, snapshot.capacities, config.stl.congestion_threshold),
                      config.stl, config.yellow);
    case ControllerKind::Iov: {
      if (config.iov_occupancy == IovOccupancy::Sensed) return iov_plan(snapshot.counts, config.iov, config.yellow);
      std::vector<std::uint64_t> estimate(snapshot.since_last_green.size());
      for (std::size_t r = 0; r < estimate.size(); ++r) {
        estimate[r] = static_cast<std::uint64_t>(snapshot.since_last_green[r].count() / config.iov.headway.count());
      }
      return iov_plan(estimate, config.iov, config.yellow);
    }
  }
  throw ControllerError("unhandled controller kind");
}

}  // namespace fogtraffic
