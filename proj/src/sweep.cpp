#include "xxzbell/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace xxzbell {

void SweepConfig::validate() const {
  if (delta_grid.empty()) throw DimensionMismatch("SweepConfig: empty delta_grid");
  for (size_t i = 1; i < delta_grid.size(); ++i) {
    if (delta_grid[i] <= delta_grid[i - 1]) {
      throw DimensionMismatch("SweepConfig: delta_grid must be strictly increasing");
    }
  }
  if (n_list.empty()) throw DimensionMismatch("SweepConfig: empty n_list");
  for (int n : n_list) {
    if (n < 1 || n > 12) throw ResourceLimit("SweepConfig: n must be in [1, 12]");
  }
  if (objectives.empty()) throw DimensionMismatch("SweepConfig: no objectives");
  if (bond_dim < 1) throw DimensionMismatch("SweepConfig: bond_dim must be >= 1");
  if (restarts < 0) throw DimensionMismatch("SweepConfig: restarts must be >= 0");
}

std::vector<double> default_delta_grid() {
  // Hundredths to keep the grid exactly representable and refinement-safe.
  std::vector<double> grid;
  for (int h = 0; h <= 300;) {
    grid.push_back(h / 100.0);
    h += (h >= 80 && h < 120) ? 1 : 5;
  }
  return grid;
}

int violation_order(Objective objective, int n, double value) {
  int best = 0;
  for (int m = (objective == Objective::mermin ? 1 : 2); m <= n - 1; m += 2) {
    if (value > std::pow(2.0, 0.5 * (m - 1))) best = m;
  }
  return best;
}

HierarchyLabels classify_hierarchy(const SweepRecord& record) {
  const int m = violation_order(record.objective, record.n, record.value_best);
  HierarchyLabels labels;
  if (m == 0) {
    labels.nonlocality = "no violation";
    labels.depth_lower_bound = 1;
  } else {
    labels.nonlocality = "(" + std::to_string(record.n) + "," +
                         std::to_string(record.n - m) + ")-type nonlocality";
    labels.depth_lower_bound = m + 1;
  }
  return labels;
}

namespace {

MeasurementFrame placeholder_frame(int n) {
  MeasurementFrame f;
  f.n = n;
  f.a.assign(n, UnitVector3{});
  f.a_prime.assign(n, UnitVector3{});
  return f;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  const EvolutionSchedule cold_schedule = default_schedule();
  EvolutionSchedule warm_schedule;
  for (const auto& stage : cold_schedule) {
    if (stage.tau <= 0.011) warm_schedule.push_back(stage);
  }

  struct FrameMemory {
    std::vector<MeasurementFrame> xy, xz, full;
  };
  std::map<std::pair<int, size_t>, FrameMemory> frame_memory;

  std::vector<SweepRecord> records;
  records.reserve(config.delta_grid.size() * config.n_list.size() * config.objectives.size());
  MpsState previous_state;
  bool have_previous = false;

  for (double delta : config.delta_grid) {
    const XxzCoupling coupling{delta};
    MpsState state;
    bool state_ok = true;
    bool state_converged = false;
    try {
      if (config.warm_start && have_previous) {
        auto [s, report] =
            ground_state_from(previous_state, coupling, config.bond_dim, warm_schedule);
        state = std::move(s);
        state_converged = report.converged;
      } else {
        auto [s, report] = ground_state(coupling, config.bond_dim, cold_schedule, config.seed);
        state = std::move(s);
        state_converged = report.converged;
      }
      previous_state = state;
      have_previous = true;
    } catch (const Error&) {
      state_ok = false;
      have_previous = false;
    }

    std::map<int, ReducedDensityMatrix> rdms;
    for (int n : config.n_list) {
      for (size_t oi = 0; oi < config.objectives.size(); ++oi) {
        const Objective objective = config.objectives[oi];
        SweepRecord rec;
        rec.delta = delta;
        rec.n = n;
        rec.objective = objective;
        rec.frame = placeholder_frame(n);
        if (n <= 4) rec.value_full = 0.0;

        if (state_ok) {
          try {
            const int restarts = config.restarts_for(n);
            FrameMemory& memory = frame_memory[{n, oi}];
            const std::vector<MeasurementFrame> empty;
            const bool use_memory = config.warm_start;

            std::optional<BellEvaluator> evaluator;
            if (n <= 6) {
              auto it = rdms.find(n);
              if (it == rdms.end()) {
                it = rdms.emplace(n, reduced_density_matrix(state, n)).first;
              }
              evaluator.emplace(it->second);
            } else {
              evaluator.emplace(state, n);
            }

            const OptimizationResult xy =
                optimize(objective, *evaluator, {PlaneKind::xy}, restarts, config.seed,
                         use_memory ? memory.xy : empty);
            const OptimizationResult xz =
                optimize(objective, *evaluator, {PlaneKind::xz}, restarts, config.seed,
                         use_memory ? memory.xz : empty);
            std::optional<OptimizationResult> full;
            if (n <= 4) {
              full = optimize(objective, *evaluator, {PlaneKind::full}, restarts, config.seed,
                              use_memory ? memory.full : empty);
            }

            rec.value_xy = xy.value;
            rec.value_xz = xz.value;
            // Tie-break to xy for stable crossing detection.
            const bool xz_wins = xz.value > xy.value + 1e-10;
            rec.winning_plane = xz_wins ? PlaneKind::xz : PlaneKind::xy;
            rec.value_best = xz_wins ? xz.value : xy.value;
            rec.frame = xz_wins ? xz.frame : xy.frame;
            rec.converged = state_converged && xy.converged && xz.converged;
            if (full) {
              rec.value_full = full->value;
              rec.converged = rec.converged && full->converged;
              if (full->value > rec.value_best) {
                rec.value_best = full->value;
                rec.frame = full->frame;
              }
            }
            rec.violation_order_m = violation_order(objective, n, rec.value_best);
            rec.depth_lower_bound = std::max(1, rec.violation_order_m + 1);

            memory.xy.assign(1, xy.frame);
            memory.xz.assign(1, xz.frame);
            if (full) memory.full.assign(1, full->frame);
          } catch (const Error&) {
            rec.converged = false;
          }
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

FeatureReport detect_features(const std::vector<SweepRecord>& records) {
  std::map<std::pair<int, int>, std::vector<const SweepRecord*>> groups;
  for (const auto& r : records) {
    groups[{r.n, static_cast<int>(r.objective)}].push_back(&r);
  }

  FeatureReport report;
  for (const auto& [key, group] : groups) {
    if (group.size() < 3) {
      throw InsufficientGrid("detect_features: need at least 3 grid points per curve");
    }
    const int n = key.first;
    const Objective objective = static_cast<Objective>(key.second);

    for (size_t i = 1; i + 1 < group.size(); ++i) {
      if (group[i]->value_best < group[i - 1]->value_best &&
          group[i]->value_best < group[i + 1]->value_best) {
        report.local_minima.push_back(
            {group[i]->delta, group[i - 1]->delta, group[i + 1]->delta, n, objective});
      }
    }
    for (size_t i = 0; i + 1 < group.size(); ++i) {
      if (group[i]->winning_plane != group[i + 1]->winning_plane) {
        report.plane_crossings.push_back({group[i]->delta, group[i + 1]->delta, n, objective});
      }
    }
    for (int m = (objective == Objective::mermin ? 1 : 2); m <= n - 1; m += 2) {
      const double threshold = std::pow(2.0, 0.5 * (m - 1));
      for (size_t i = 0; i + 1 < group.size(); ++i) {
        if ((group[i]->value_best > threshold) != (group[i + 1]->value_best > threshold)) {
          report.violation_onsets.push_back(
              {group[i]->delta, group[i + 1]->delta, n, objective, m});
        }
      }
    }
  }
  return report;
}

std::string objective_name(Objective objective) {
  return objective == Objective::mermin ? "mermin" : "svetlichny";
}

Objective parse_objective(const std::string& name) {
  if (name == "mermin") return Objective::mermin;
  if (name == "svetlichny") return Objective::svetlichny;
  throw MalformedCsv("unknown objective: " + name);
}

std::string plane_name(PlaneKind kind) {
  switch (kind) {
    case PlaneKind::full: return "full";
    case PlaneKind::xy: return "xy";
    case PlaneKind::xz: return "xz";
  }
  throw DimensionMismatch("plane_name: bad enum");
}

PlaneKind parse_plane(const std::string& name) {
  if (name == "full") return PlaneKind::full;
  if (name == "xy") return PlaneKind::xy;
  if (name == "xz") return PlaneKind::xz;
  throw MalformedCsv("unknown plane: " + name);
}

namespace {

const char* kCsvHeader =
    "delta,n,objective,value_xy,value_xz,value_full,value_best,winning_plane,"
    "violation_order_m,depth_lower_bound,converged,frame_angles";

std::string fmt(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", x);
  return buffer;
}

std::string frame_angles(const MeasurementFrame& f) {
  std::string out;
  auto append = [&](const UnitVector3& v) {
    if (!out.empty()) out += ';';
    out += "(" + fmt(v.theta()) + ";" + fmt(v.phi()) + ")";
  };
  for (const auto& v : f.a) append(v);
  for (const auto& v : f.a_prime) append(v);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(s);
  while (std::getline(in, token, sep)) out.push_back(token);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  size_t used = 0;
  const double value = std::stod(s, &used);
  if (used != s.size()) throw MalformedCsv("bad float: " + s);
  return value;
}

MeasurementFrame parse_frame(int n, const std::string& field) {
  const std::vector<std::string> tokens = split(field, ';');
  if (static_cast<int>(tokens.size()) != 4 * n) {
    throw MalformedCsv("frame_angles: expected " + std::to_string(4 * n) + " tokens");
  }
  MeasurementFrame f;
  f.n = n;
  for (int k = 0; k < 2 * n; ++k) {
    const std::string& t_theta = tokens[2 * k];
    const std::string& t_phi = tokens[2 * k + 1];
    if (t_theta.empty() || t_theta.front() != '(' || t_phi.empty() || t_phi.back() != ')') {
      throw MalformedCsv("frame_angles: malformed pair");
    }
    const double theta = parse_double(t_theta.substr(1));
    const double phi = parse_double(t_phi.substr(0, t_phi.size() - 1));
    (k < n ? f.a : f.a_prime).push_back(UnitVector3::from_angles(theta, phi));
  }
  return f;
}

}  // namespace

void write_csv(const std::vector<SweepRecord>& records, const std::string& path,
               const SweepConfig* config) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open " + path);

  out << "# xxzbell sweep v" << kVersion << "\n";
  if (config) {
    out << "# config: D=" << config->bond_dim << " restarts="
        << (config->restarts > 0 ? std::to_string(config->restarts) : std::string("auto"))
        << " seed=" << config->seed << " warm_start=" << (config->warm_start ? 1 : 0) << "\n";
    out << "# delta_grid:";
    for (double d : config->delta_grid) out << " " << fmt(d);
    out << "\n# n_list:";
    for (int n : config->n_list) out << " " << n;
    out << "\n# objectives:";
    for (Objective o : config->objectives) out << " " << objective_name(o);
    out << "\n";
  }
  out << kCsvHeader << "\n";

  for (const auto& r : records) {
    out << fmt(r.delta) << ',' << r.n << ',' << objective_name(r.objective) << ','
        << fmt(r.value_xy) << ',' << fmt(r.value_xz) << ','
        << (r.value_full ? fmt(*r.value_full) : std::string()) << ',' << fmt(r.value_best)
        << ',' << plane_name(r.winning_plane) << ',' << r.violation_order_m << ','
        << r.depth_lower_bound << ',' << (r.converged ? 1 : 0) << ','
        << frame_angles(r.frame) << "\n";
  }
  if (!out) throw IoError("write_csv: write failed for " + path);
}

std::vector<SweepRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("read_csv: cannot open " + path);

  std::string line;
  bool saw_header = false;
  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != kCsvHeader) throw MalformedCsv("read_csv: unexpected header: " + line);
      saw_header = true;
      continue;
    }
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 12) throw MalformedCsv("read_csv: expected 12 fields");
    SweepRecord r;
    try {
      r.delta = parse_double(fields[0]);
      r.n = std::stoi(fields[1]);
      r.objective = parse_objective(fields[2]);
      r.value_xy = parse_double(fields[3]);
      r.value_xz = parse_double(fields[4]);
      if (!fields[5].empty()) r.value_full = parse_double(fields[5]);
      r.value_best = parse_double(fields[6]);
      r.winning_plane = parse_plane(fields[7]);
      r.violation_order_m = std::stoi(fields[8]);
      r.depth_lower_bound = std::stoi(fields[9]);
      r.converged = fields[10] == "1";
      r.frame = parse_frame(r.n, fields[11]);
    } catch (const std::exception& e) {
      throw MalformedCsv(std::string("read_csv: ") + e.what());
    }
    records.push_back(std::move(r));
  }
  if (!saw_header) throw MalformedCsv("read_csv: missing header row");
  return records;
}

}  // namespace xxzbell
