#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fogtraffic/controllers.hpp"
#include "fogtraffic/des.hpp"
#include "fogtraffic/network.hpp"
#include "fogtraffic/rng.hpp"
#include "fogtraffic/scenario.hpp"

namespace fogtraffic {

/// One traversal of camera -> picture-capture -> slot-detector ->
/// signal-controller -> LED.
struct LoopSample {
  std::size_t road;
  std::uint64_t frame_id;
  SimTime created_at;
  SimTime committed_at;
  bool led_changed;

  SimTime latency() const { return committed_at - created_at; }
};

struct LedCommit {
  std::size_t road;
  SimTime at;
  LedColor color;
};

/// Mean loop latency in seconds; empty when there are no samples.
std::optional<double> loop_delay(std::span<const SimTime> samples);
std::optional<double> loop_delay(std::span<const LoopSample> samples);

/// The camera/LED application: periodic frames from every camera, image
/// processing on the fog node, signal decisions on the proxy (the one device
/// that sees every road), LED actuation and archival on the cloud.
class Application {
 public:
  struct Hooks {
    std::function<std::size_t(std::size_t road)> queue_length;                 // what the camera sees
    std::function<void(std::size_t road, std::uint64_t count)> on_slot_status;  // controller input
    std::function<LedAssignment()> current_assignment;                         // current signal aspects
  };

  Application(Simulator& sim, const Topology& topology, Network& network, Processing& processing,
              const ScenarioConfig& config, const RngStream& rng, Hooks hooks);

  void start_sensors();
  /// Emits a FRAME every period, the first one at t = period.
  void start_sensor(std::size_t road, SimTime period);
  void stop_sensors();

  /// Runs picture-capture and slot-detector for a frame delivered to the
  /// road's fog node, then fans out SLOT_STATUS and CLOUD_ARCHIVE.
  void on_frame(std::size_t road, Tuple frame);

  /// Sends LED_COMMAND tuples for the road's LEDs whose state differs from
  /// what was last commanded. Returns the number of tuples sent. on_commit
  /// runs once every sent command has been applied, or immediately with
  /// changed = false when nothing needed sending.
  std::size_t update_leds(std::size_t road, const LedAssignment& assignment, std::function<void(bool changed)> on_commit);

  LedColor committed_led(std::size_t road) const { return committed_.at(road); }
  LedColor commanded_led(std::size_t road) const { return commanded_.at(road); }

  const std::vector<LoopSample>& samples() const { return samples_; }
  const std::vector<LedCommit>& led_commits() const { return commits_; }
  const std::vector<std::vector<SimTime>>& frame_times() const { return frame_times_; }
  std::uint64_t frames_emitted() const { return frames_emitted_; }
  std::uint64_t frames_processed() const { return frames_processed_; }
  std::uint64_t archives_received() const { return archives_received_; }
  std::uint64_t slot_status_handled() const { return slot_status_handled_; }
  std::uint64_t led_commands_sent() const { return led_commands_sent_; }

 private:
  void emit_frame(std::size_t road, SimTime period);
  void on_slot_status(Tuple status);
  Tuple make_tuple(TupleType type, std::string source, std::string destination, double cpu, double nw);

  Simulator& sim_;
  const Topology& topo_;
  Network& net_;
  Processing& proc_;
  const ScenarioConfig& config_;
  Hooks hooks_;
  std::vector<Rng> camera_rng_;
  std::vector<std::optional<EventId>> sensor_events_;
  std::vector<LedColor> committed_;
  std::vector<LedColor> commanded_;
  std::vector<LoopSample> samples_;
  std::vector<LedCommit> commits_;
  std::vector<std::vector<SimTime>> frame_times_;
  std::uint64_t next_tuple_id_ = 1;
  std::uint64_t frames_emitted_ = 0;
  std::uint64_t frames_processed_ = 0;
  std::uint64_t archives_received_ = 0;
  std::uint64_t slot_status_handled_ = 0;
  std::uint64_t led_commands_sent_ = 0;
};

}  // namespace fogtraffic
