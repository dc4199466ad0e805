#include "fogtraffic/app.hpp"

#include <memory>
#include <numeric>
#include <stdexcept>

namespace fogtraffic {

std::optional<double> loop_delay(std::span<const SimTime> samples) {
  if (samples.empty()) return std::nullopt;
  std::int64_t total = 0;
  for (SimTime s : samples) total += s.count();
  return static_cast<double>(total) / static_cast<double>(samples.size()) / 1000.0;
}

std::optional<double> loop_delay(std::span<const LoopSample> samples) {
  std::vector<SimTime> latencies;
  latencies.reserve(samples.size());
  for (const LoopSample& s : samples) latencies.push_back(s.latency());
  return loop_delay(latencies);
}

Application::Application(Simulator& sim, const Topology& topology, Network& network, Processing& processing,
                         const ScenarioConfig& config, const RngStream& rng, Hooks hooks)
    : sim_(sim),
      topo_(topology),
      net_(network),
      proc_(processing),
      config_(config),
      hooks_(std::move(hooks)),
      sensor_events_(topology.fog_count()),
      committed_(topology.fog_count(), LedColor::Red),
      commanded_(topology.fog_count(), LedColor::Red),
      frame_times_(topology.fog_count()) {
  for (std::size_t r = 0; r < topology.fog_count(); ++r) {
    camera_rng_.push_back(rng.substream("camera-" + std::to_string(r + 1)));
  }
}

Tuple Application::make_tuple(TupleType type, std::string source, std::string destination, double cpu, double nw) {
  Tuple t;
  t.id = next_tuple_id_++;
  t.type = type;
  t.source = std::move(source);
  t.destination = std::move(destination);
  t.cpu_length = cpu;
  t.nw_length = nw;
  t.created_at = sim_.now();
  return t;
}

void Application::start_sensors() {
  for (std::size_t r = 0; r < topo_.fog_count(); ++r) start_sensor(r, SimTime::seconds(config_.sensor.period_s));
}

void Application::start_sensor(std::size_t road, SimTime period) {
  if (period <= SimTime{}) throw std::invalid_argument("sensor period must be positive");
  sensor_events_.at(road) =
      sim_.schedule(EventKind::SensorEmit, period, [this, road, period] { emit_frame(road, period); });
}

void Application::stop_sensors() {
  for (auto& ev : sensor_events_) {
    if (ev) sim_.cancel(*ev);
    ev.reset();
  }
}

void Application::emit_frame(std::size_t road, SimTime period) {
  Rng& rng = camera_rng_[road];
  const double cpu = rng.uniform(config_.sensor.cpu_min_mi, config_.sensor.cpu_max_mi);
  const double nw = rng.uniform(config_.sensor.nw_min_kb, config_.sensor.nw_max_kb);
  const NodeId cam = topo_.camera(road);
  const NodeId fog = topo_.fog(road);
  Tuple frame = make_tuple(TupleType::Frame, topo_.node(cam).name, "picture-capture", cpu, nw);
  frame.road = road;
  frame.frame_id = frame.id;
  frame.loop_start = sim_.now();
  frame.vehicle_count = hooks_.queue_length ? hooks_.queue_length(road) : 0;
  ++frames_emitted_;
  frame_times_[road].push_back(sim_.now());
  net_.transmit(std::move(frame), cam, fog, [this, road](Tuple t) { on_frame(road, std::move(t)); });
  sensor_events_[road] =
      sim_.schedule(EventKind::SensorEmit, period, [this, road, period] { emit_frame(road, period); });
}

void Application::on_frame(std::size_t road, Tuple frame) {
  const NodeId fog = topo_.fog(road);
  // picture-capture runs on the frame's own cpu length.
  proc_.execute(fog, std::move(frame), [this, road, fog](Tuple captured) {
    Tuple detect = captured;
    detect.destination = "slot-detector";
    detect.cpu_length = config_.app.slot_detector_mi;
    proc_.execute(fog, std::move(detect), [this, road, fog](Tuple detected) {
      ++frames_processed_;
      const std::string& fog_name = topo_.node(fog).name;

      Tuple archive = make_tuple(TupleType::CloudArchive, fog_name, "cloud-archive", config_.app.cloud_archive_mi,
                                 config_.app.archive_kb.value_or(detected.nw_length));
      archive.road = road;
      archive.frame_id = detected.frame_id;
      net_.transmit(std::move(archive), fog, topo_.cloud(), [this](Tuple a) {
        proc_.execute(topo_.cloud(), std::move(a), [this](Tuple) { ++archives_received_; });
      });

      Tuple status = make_tuple(TupleType::SlotStatus, fog_name, "signal-controller",
                                config_.app.signal_controller_mi, config_.app.slot_status_kb);
      status.road = road;
      status.frame_id = detected.frame_id;
      status.loop_start = detected.loop_start;
      status.vehicle_count = detected.vehicle_count;
      net_.transmit(std::move(status), fog, topo_.proxy(), [this](Tuple s) {
        proc_.execute(topo_.proxy(), std::move(s), [this](Tuple done) { on_slot_status(std::move(done)); });
      });
    });
  });
}

void Application::on_slot_status(Tuple status) {
  ++slot_status_handled_;
  const std::size_t road = status.road;
  if (hooks_.on_slot_status) hooks_.on_slot_status(road, status.vehicle_count);
  const LedAssignment assignment =
      hooks_.current_assignment ? hooks_.current_assignment() : LedAssignment(topo_.fog_count());
  update_leds(road, assignment,
              [this, road, frame_id = status.frame_id, start = status.loop_start](bool changed) {
                samples_.push_back({road, frame_id, start, sim_.now(), changed});
              });
}

std::size_t Application::update_leds(std::size_t road, const LedAssignment& assignment,
                                     std::function<void(bool)> on_commit) {
  if (assignment.roads() != topo_.fog_count()) throw ControllerError("LED assignment covers the wrong number of roads");
  assignment.validate();
  const LedColor desired = assignment.active(road);
  const LedColor previous = commanded_.at(road);
  if (desired == previous) {
    if (on_commit) on_commit(false);
    return 0;
  }
  commanded_[road] = desired;

  const NodeId origin = topo_.proxy();
  auto remaining = std::make_shared<int>(2);
  auto finish = [this, remaining, on_commit]() {
    if (--*remaining == 0 && on_commit) on_commit(true);
  };

  Tuple off = make_tuple(TupleType::LedCommand, topo_.node(origin).name, "", 0, config_.app.led_command_kb);
  const NodeId off_led = topo_.led(road, previous);
  off.destination = topo_.node(off_led).name;
  off.road = road;
  net_.transmit(std::move(off), origin, off_led, [finish](Tuple) { finish(); });

  Tuple on = make_tuple(TupleType::LedCommand, topo_.node(origin).name, "", 0, config_.app.led_command_kb);
  const NodeId on_led = topo_.led(road, desired);
  on.destination = topo_.node(on_led).name;
  on.road = road;
  on.led_on = desired;
  net_.transmit(std::move(on), origin, on_led, [this, road, desired, finish](Tuple) {
    committed_[road] = desired;
    commits_.push_back({road, sim_.now(), desired});
    finish();
  });
  led_commands_sent_ += 2;
  return 2;
}

}  // namespace fogtraffic
