#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "plyse/config.hpp"

namespace plyse {

struct RandomEvent {
  int a = 0;           // primary user active
  double e_h = 0.0;    // harvested energy, J
  double h = 0.0;      // WD -> MS gain
  double g_bar = 0.0;  // PT -> MS gain
  double h_bar = 0.0;  // WD -> PR gain

  bool operator==(const RandomEvent&) const = default;
};

inline constexpr double kSpeedOfLight = 3e8;

double path_loss(double d, double sigma, const SystemParams& p);
double sinr(const RandomEvent& ev, const SystemParams& p);

// Separate engines per random process so that switching the activity model
// leaves the channel and energy draws untouched.
struct EventRng {
  explicit EventRng(std::uint64_t seed);

  std::mt19937_64 channel;
  std::mt19937_64 activity;
  std::mt19937_64 energy;
  int prev_a = -1;  // -1 before the first slot
};

RandomEvent sample_event(EventRng& rng, const SystemParams& p);

// Source of per-slot events for the engine: either freshly sampled or replayed.
class EventSource {
 public:
  EventSource(const SystemParams& p, std::uint64_t seed);
  explicit EventSource(std::vector<RandomEvent> replay);

  RandomEvent next();
  bool replaying() const { return replay_; }
  std::size_t size() const { return events_.size(); }

 private:
  const SystemParams* params_ = nullptr;
  EventRng rng_{0};
  bool replay_ = false;
  std::vector<RandomEvent> events_;
  std::size_t pos_ = 0;
};

// CSV: slot,a,e_h,h,g_bar,h_bar. Written with 17 significant digits so a
// replay reproduces the original run exactly.
void write_event_trace(std::ostream& out, const std::vector<RandomEvent>& events);
std::vector<RandomEvent> read_event_trace(std::istream& in);

}  // namespace plyse
