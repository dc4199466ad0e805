#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogtraffic/sim_time.hpp"
#include "fogtraffic/topology.hpp"
#include "fogtraffic/traffic.hpp"

namespace fogtraffic {

class ControllerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Which of the three LEDs (red, yellow, green) is lit on every road.
class LedAssignment {
 public:
  using Lamps = std::array<bool, 3>;  // indexed by LedColor

  explicit LedAssignment(std::size_t roads) : lamps_(roads, Lamps{true, false, false}) {}
  explicit LedAssignment(std::vector<Lamps> lamps) : lamps_(std::move(lamps)) {}

  static LedAssignment from_signals(std::span<const Signal> signals);

  std::size_t roads() const { return lamps_.size(); }
  const Lamps& lamps(std::size_t road) const { return lamps_.at(road); }
  void set(std::size_t road, LedColor color);
  /// The single lit LED of a road. Requires validate() to pass.
  LedColor active(std::size_t road) const;

  /// Throws ControllerError unless every road has exactly one lit LED and at
  /// most one road shows green.
  void validate() const;

  bool operator==(const LedAssignment&) const = default;

 private:
  std::vector<Lamps> lamps_;
};

/// Give the source road a clear path: its LED goes green, every other road red.
LedAssignment path(std::size_t source, std::size_t destination, std::size_t roads);

struct Phase {
  std::size_t road;
  SimTime green;
};

struct SignalInterval {
  SimTime start;
  SimTime end;
  std::size_t road;
  Signal signal;
};

/// One signal cycle. Roads with non-zero green are served in order with a
/// yellow between consecutive greens; all other roads stay red. A plan with
/// no green at all is an all-red idle period.
struct PhasePlan {
  std::vector<Phase> phases;
  SimTime yellow;
  SimTime idle;

  std::vector<Phase> served() const;
  SimTime green_total() const;
  std::size_t yellow_count() const;
  SimTime length() const;
  /// Green and yellow intervals relative to the cycle start.
  std::vector<SignalInterval> timeline(SimTime start = {}) const;
};

struct ItcmsParams {
  SimTime crossing_time = SimTime::ms(2500);
  SimTime min_cycle = SimTime::ms(10000);
};

struct StlParams {
  SimTime base_green = SimTime::ms(30000);
  SimTime extension = SimTime::ms(16000);
  double congestion_threshold = 0.5;  // fraction of road capacity
};

struct IovParams {
  SimTime headway = SimTime::ms(2500);
  double car_length_m = 4.5;
  double gap_m = 0.5;
  double road_length_m = 400;
  SimTime min_cycle = SimTime::ms(10000);
};

PhasePlan itcms_plan(std::span<const std::uint64_t> counts, const ItcmsParams& params, SimTime yellow);
PhasePlan stl_plan(const std::vector<bool>& congested, const StlParams& params, SimTime yellow);
PhasePlan iov_plan(std::span<const std::uint64_t> occupancy, const IovParams& params, SimTime yellow);

/// STL's congestion trigger: queue >= threshold * capacity.
std::vector<bool> stl_congestion(std::span<const std::uint64_t> counts, std::span<const std::size_t> capacities,
                                 double threshold);

enum class ControllerKind { Itcms, Stl, Iov };
const char* to_string(ControllerKind kind);
ControllerKind parse_controller(const std::string& name);

/// How the IoV baseline learns road occupancy.
///  EntryModel: assumes one vehicle enters every headway while the road is
///              not green, capped at road capacity.
///  Sensed:     uses the same reported queue counts as the other controllers.
enum class IovOccupancy { EntryModel, Sensed };

struct ControllerConfig {
  ControllerKind kind = ControllerKind::Itcms;
  SimTime yellow = SimTime::ms(5000);
  ItcmsParams itcms;
  StlParams stl;
  IovParams iov;
  IovOccupancy iov_occupancy = IovOccupancy::EntryModel;
};

/// What a controller sees at the start of a cycle.
struct CycleSnapshot {
  std::vector<std::uint64_t> counts;          // last reported queue counts
  std::vector<std::size_t> capacities;
  std::vector<SimTime> since_last_green;      // time each road has not been green
};

PhasePlan plan_cycle(const ControllerConfig& config, const CycleSnapshot& snapshot);

}  // namespace fogtraffic
