#include "fogtraffic/simulation.hpp"

#include <chrono>

namespace fogtraffic {

std::uint64_t RunRecord::total_arrived() const {
  std::uint64_t n = 0;
  for (const auto& r : roads) n += r.arrived;
  return n;
}
std::uint64_t RunRecord::total_crossed() const {
  std::uint64_t n = 0;
  for (const auto& r : roads) n += r.crossed.size();
  return n;
}
std::uint64_t RunRecord::total_blocked() const {
  std::uint64_t n = 0;
  for (const auto& r : roads) n += r.blocked;
  return n;
}
std::uint64_t RunRecord::total_queued() const {
  std::uint64_t n = 0;
  for (const auto& r : roads) n += r.queued.size();
  return n;
}

namespace {

ScenarioConfig validated(ScenarioConfig c) {
  c.validate();
  return c;
}

}  // namespace

Simulation::Simulation(ScenarioConfig config)
    : config_(validated(std::move(config))),
      controller_(config_.controller),
      crossing_time_(SimTime::seconds(config_.traffic.crossing_time_s)),
      rng_(config_.seed),
      topology_(build_topology(standard_description(config_.topology_params()))),
      network_(sim_, topology_),
      processing_(sim_, topology_),
      assignment_(static_cast<std::size_t>(config_.roads)) {
  controller_.itcms.crossing_time = crossing_time_;
  const auto n = static_cast<std::size_t>(config_.roads);
  for (std::size_t r = 0; r < n; ++r) {
    const double length = config_.traffic.length_of(r);
    roads_.emplace_back(r, length, road_capacity(length, config_.traffic.car_length_m, config_.traffic.gap_m));
    arrivals_.emplace_back(config_.traffic.arrival_of(r), rng_.substream("arrivals-" + std::to_string(r + 1)));
    destination_rng_.push_back(rng_.substream("destination-" + std::to_string(r + 1)));
  }
  sensed_.assign(n, 0);
  last_green_end_.assign(n, SimTime{});
  open_intervals_.resize(n);

  Application::Hooks hooks;
  hooks.queue_length = [this](std::size_t road) { return roads_[road].queue_length(); };
  hooks.on_slot_status = [this](std::size_t road, std::uint64_t count) { sensed_[road] = count; };
  hooks.current_assignment = [this] { return assignment_; };
  app_ = std::make_unique<Application>(sim_, topology_, network_, processing_, config_, rng_, std::move(hooks));
}

void Simulation::schedule_traffic(EventKind kind, SimTime at, std::function<void()> fn) {
  auto id = std::make_shared<EventId>();
  *id = sim_.schedule_at(kind, at, [this, id, fn = std::move(fn)] {
    traffic_events_.erase(*id);
    fn();
  });
  traffic_events_.insert(*id);
}

void Simulation::schedule_next_arrival(std::size_t road) {
  auto next = arrivals_[road].next();
  if (!next) return;
  const auto [at, batch] = *next;
  if (at > SimTime::seconds(config_.duration_s)) return;
  schedule_traffic(EventKind::VehicleArrival, std::max(at, sim_.now()), [this, road, batch] {
    const std::size_t n = roads_.size();
    for (std::uint32_t b = 0; b < batch; ++b) {
      Vehicle v;
      v.id = next_vehicle_id_++;
      v.source_road = road;
      if (n > 1) {
        const std::size_t k = destination_rng_[road].index(n - 1);
        v.destination_road = k >= road ? k + 1 : k;
      } else {
        v.destination_road = road;  // single approach: the only exit is straight on
      }
      v.arrival_time = sim_.now();
      roads_[road].arrive(std::move(v));
    }
    schedule_next_arrival(road);
  });
}

void Simulation::set_signal(std::size_t road, Signal signal) {
  auto& open = open_intervals_[road];
  if (open) {
    open->end = sim_.now();
    if (open->end > open->start) timeline_.push_back(*open);
    open.reset();
  }
  roads_[road].set_signal(signal);
  if (signal != Signal::Red) open = SignalInterval{sim_.now(), sim_.now(), road, signal};
}

void Simulation::refresh_assignment(std::optional<std::size_t> green_road) {
  if (green_road && roads_.size() > 1 && !roads_[*green_road].queue().empty()) {
    assignment_ = path(*green_road, roads_[*green_road].queue().front().destination_road, roads_.size());
  } else {
    std::vector<Signal> signals;
    for (const auto& r : roads_) signals.push_back(r.signal());
    assignment_ = LedAssignment::from_signals(signals);
  }
  assignment_.validate();
}

void Simulation::start_cycle() {
  cycle_starts_.push_back(sim_.now());
  CycleSnapshot snap;
  snap.counts = sensed_;
  for (std::size_t r = 0; r < roads_.size(); ++r) {
    snap.capacities.push_back(roads_[r].capacity());
    snap.since_last_green.push_back(sim_.now() - last_green_end_[r]);
  }
  PhasePlan plan = plan_cycle(controller_, snap);
  auto served = std::make_shared<const std::vector<Phase>>(plan.served());
  const SimTime idle = plan.idle;
  plans_.push_back(std::move(plan));
  if (served->empty()) {
    schedule_traffic(EventKind::PhaseChange, sim_.now() + std::max(idle, SimTime::ms(1)), [this] { start_cycle(); });
    return;
  }
  run_phase(std::move(served), 0);
}

// Each green is followed by a yellow of the same road; the plan's yellows sit
// between greens and the last one clears the intersection for the next cycle.
void Simulation::run_phase(std::shared_ptr<const std::vector<Phase>> served, std::size_t index) {
  const Phase phase = (*served)[index];
  const std::size_t road = phase.road;
  const SimTime start = sim_.now();
  set_signal(road, Signal::Green);
  refresh_assignment(road);

  const std::int64_t slots = phase.green.count() / crossing_time_.count();
  for (std::int64_t i = 1; i <= slots; ++i) {
    schedule_traffic(EventKind::VehicleCross, start + crossing_time_ * i,
                     [this, road] { roads_[road].serve_slot(sim_.now()); });
  }

  auto next = [this, served, index] {
    if (index + 1 < served->size()) {
      run_phase(served, index + 1);
    } else {
      start_cycle();
    }
  };
  const SimTime yellow = controller_.yellow;
  schedule_traffic(EventKind::PhaseChange, start + phase.green, [this, road, yellow, next] {
    last_green_end_[road] = sim_.now();
    if (yellow > SimTime{}) {
      set_signal(road, Signal::Yellow);
      refresh_assignment(std::nullopt);
      schedule_traffic(EventKind::PhaseChange, sim_.now() + yellow, [this, road, next] {
        set_signal(road, Signal::Red);
        refresh_assignment(std::nullopt);
        next();
      });
    } else {
      set_signal(road, Signal::Red);
      refresh_assignment(std::nullopt);
      next();
    }
  });
}

void Simulation::stop() {
  for (EventId id : traffic_events_) sim_.cancel(id);
  traffic_events_.clear();
  app_->stop_sensors();
  for (auto& open : open_intervals_) {
    if (open) {
      open->end = sim_.now();
      if (open->end > open->start) timeline_.push_back(*open);
      open.reset();
    }
  }
}

RunRecord Simulation::run() {
  if (ran_) throw std::logic_error("Simulation::run may only be called once");
  ran_ = true;
  const auto wall_start = std::chrono::steady_clock::now();
  const SimTime duration = SimTime::seconds(config_.duration_s);

  for (std::size_t r = 0; r < roads_.size(); ++r) schedule_next_arrival(r);
  app_->start_sensors();
  start_cycle();

  RunSummary summary = sim_.run_until(duration);
  stop();
  if (config_.drain) {
    RunSummary tail = sim_.run_to_completion();
    summary.events_dispatched += tail.events_dispatched;
    summary.clock = tail.clock;
  }
  const auto wall_end = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.config = config_;
  rec.kernel = summary;
  rec.duration = duration;
  rec.elapsed = sim_.now();
  rec.wall_seconds = std::chrono::duration<double>(wall_end - wall_start).count();
  for (const RoadState& road : roads_) {
    rec.roads.push_back({road.road_id(), road.capacity(), road.arrived(), road.blocked(), road.crossed_vehicles(),
                         std::vector<Vehicle>(road.queue().begin(), road.queue().end())});
  }
  rec.signal_timeline = timeline_;
  rec.cycle_starts = cycle_starts_;
  rec.plans = plans_;
  rec.loop_samples = app_->samples();
  rec.led_commits = app_->led_commits();
  rec.frame_times = app_->frame_times();
  rec.network_usage = network_.network_usage();
  rec.transmissions = network_.log();
  rec.tuples = {app_->frames_emitted(),      app_->frames_processed(),  app_->archives_received(),
                app_->slot_status_handled(), app_->led_commands_sent(), network_.sent(),
                network_.delivered(),        network_.in_flight()};
  rec.energy = energy_report(topology_, processing_, rec.elapsed);
  return rec;
}

RunRecord simulate(const ScenarioConfig& config) {
  Simulation sim(config);
  return sim.run();
}

}  // namespace fogtraffic
