#include "plyse/environment.hpp"

#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace plyse {

namespace {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

// Uniform in [0,1) from 53 random bits; avoids implementation-defined
// distribution objects so traces match across standard libraries.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

double exp1(std::mt19937_64& g) { return -std::log1p(-unit(g)); }

}  // namespace

double path_loss(double d, double sigma, const SystemParams& p) {
  if (!(d > 0.0) || !(sigma > 0.0)) throw std::invalid_argument("path_loss: d and sigma must be > 0");
  return p.G_A * std::pow(kSpeedOfLight / (4.0 * std::numbers::pi * p.f_c * d), sigma);
}

double sinr(const RandomEvent& ev, const SystemParams& p) {
  return ev.h / (ev.a * p.P_B * ev.g_bar + p.W * p.delta_s2);
}

EventRng::EventRng(std::uint64_t seed)
    : channel(make_stream(seed, 1)), activity(make_stream(seed, 2)), energy(make_stream(seed, 3)) {}

RandomEvent sample_event(EventRng& rng, const SystemParams& p) {
  RandomEvent ev;
  // Exp(1) is strictly positive except with probability 2^-53; keep gains > 0.
  auto fade = [&] {
    double s = exp1(rng.channel);
    return s > 0.0 ? s : 0x1.0p-53;
  };
  ev.h = fade() * path_loss(p.d_h, p.sigma_h, p);
  ev.g_bar = fade() * path_loss(p.d_g, p.sigma_g, p);
  ev.h_bar = fade() * path_loss(p.d_hbar, p.sigma_hbar, p);

  double u = unit(rng.activity);
  if (p.pu_model == PuModel::IidBernoulli || rng.prev_a < 0) {
    ev.a = u < p.a_bar ? 1 : 0;
  } else if (rng.prev_a == 0) {
    ev.a = u < markov_p01(p) ? 1 : 0;
  } else {
    ev.a = u < markov_p10(p) ? 0 : 1;
  }
  rng.prev_a = ev.a;

  ev.e_h = unit(rng.energy) * p.E_max_h;
  return ev;
}

EventSource::EventSource(const SystemParams& p, std::uint64_t seed) : params_(&p), rng_(seed) {}

EventSource::EventSource(std::vector<RandomEvent> replay) : replay_(true), events_(std::move(replay)) {}

RandomEvent EventSource::next() {
  if (!replay_) return sample_event(rng_, *params_);
  if (pos_ >= events_.size()) throw std::out_of_range("event trace exhausted");
  return events_[pos_++];
}

void write_event_trace(std::ostream& out, const std::vector<RandomEvent>& events) {
  out << "slot,a,e_h,h,g_bar,h_bar\n";
  char buf[160];
  for (std::size_t t = 0; t < events.size(); ++t) {
    const auto& e = events[t];
    std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g,%.17g,%.17g\n", t, e.a, e.e_h, e.h, e.g_bar, e.h_bar);
    out << buf;
  }
}

std::vector<RandomEvent> read_event_trace(std::istream& in) {
  std::vector<RandomEvent> events;
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("slot", 0) == 0) continue;
    }
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw std::runtime_error("event trace line " + std::to_string(lineno) + ": expected 6 columns");
    RandomEvent e;
    try {
      e.a = std::stoi(cells[1]);
      e.e_h = std::stod(cells[2]);
      e.h = std::stod(cells[3]);
      e.g_bar = std::stod(cells[4]);
      e.h_bar = std::stod(cells[5]);
    } catch (const std::exception&) {
      throw std::runtime_error("event trace line " + std::to_string(lineno) + ": bad number");
    }
    if ((e.a != 0 && e.a != 1) || !(e.h > 0) || !(e.g_bar > 0) || !(e.h_bar > 0) || !(e.e_h >= 0))
      throw std::runtime_error("event trace line " + std::to_string(lineno) + ": value out of range");
    events.push_back(e);
  }
  return events;
}

}  // namespace plyse
