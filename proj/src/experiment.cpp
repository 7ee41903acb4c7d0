#include "polsec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "polsec/metrics.hpp"

namespace polsec {

namespace {

constexpr std::uint64_t kTrialShardSize = 32;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> snr_grid(const ExperimentConfig& cfg) {
  std::vector<double> grid;
  if (cfg.snr_step_db <= 0.0 || cfg.snr_stop_db <= cfg.snr_start_db) {
    grid.push_back(cfg.snr_start_db);
    return grid;
  }
  for (int k = 0;; ++k) {
    const double v = cfg.snr_start_db + k * cfg.snr_step_db;
    if (v > cfg.snr_stop_db + 1e-9) break;
    grid.push_back(v);
  }
  return grid;
}

SecretPattern draw_pattern(const ExperimentConfig& cfg, std::optional<double> theta_override,
                           RngStream& rng) {
  switch (cfg.scheme) {
    case Scheme::Golden:
      return random_golden(rng);
    case Scheme::Rotation:
      if (theta_override) return random_rotation(rng, *theta_override);
      if (cfg.theta_band) return random_rotation(rng);
      return random_rotation(rng, cfg.theta.value_or(M_PI));
    case Scheme::Opposite:
      return random_opposite(rng);
    case Scheme::None:
    default:
      return RotationPattern{0.0, 0.0, 0.0};
  }
}

struct PointCounters {
  std::uint64_t legit_errors = 0;
  std::uint64_t eve_errors = 0;
  std::uint64_t bits = 0;
  std::uint64_t symbols = 0;
  double legit_disp = 0.0;
  double eve_disp = 0.0;

  PointCounters& operator+=(const PointCounters& o) {
    legit_errors += o.legit_errors;
    eve_errors += o.eve_errors;
    bits += o.bits;
    symbols += o.symbols;
    legit_disp += o.legit_disp;
    eve_disp += o.eve_disp;
    return *this;
  }
};

// Blocks are padded up to a whole number of symbols.
std::size_t block_length(const ExperimentConfig& cfg, const SphereConstellation& c) {
  const std::size_t bps = static_cast<std::size_t>(c.bits_per_symbol);
  const std::size_t symbols = (static_cast<std::size_t>(cfg.block_bits) + bps - 1) / bps;
  return symbols * bps;
}

PointCounters run_point(const ExperimentConfig& cfg, const SphereConstellation& constellation,
                        const ChannelConfig& channel, std::optional<double> theta_override,
                        std::uint64_t point_index, int workers) {
  const std::size_t block_len = block_length(cfg, constellation);
  const int shards = shard_count(cfg.trials, kTrialShardSize);
  std::vector<PointCounters> partial(static_cast<std::size_t>(shards));

  run_shards(shards, workers, [&](int s) {
    PointCounters acc;
    const std::uint64_t begin = static_cast<std::uint64_t>(s) * kTrialShardSize;
    const std::uint64_t end = std::min(cfg.trials, begin + kTrialShardSize);
    std::vector<std::uint8_t> bits(block_len);
    for (std::uint64_t t = begin; t < end; ++t) {
      RngStream rng = RngStream::derive(cfg.seed, point_index, t);
      const CipherContext ctx =
          CipherContext::make(draw_pattern(cfg, theta_override, rng), constellation);
      for (auto& b : bits) b = rng.bit() ? 1 : 0;
      const TrialResult res = run_trial(ctx, channel, bits, rng);
      for (std::size_t i = 0; i < block_len; ++i) {
        acc.legit_errors += bits[i] != res.legit_bits[i];
        acc.eve_errors += bits[i] != res.eve_bits[i];
      }
      acc.bits += block_len;
      acc.symbols += res.symbols;
      acc.legit_disp += res.legit_displacement;
      acc.eve_disp += res.eve_displacement;
    }
    partial[static_cast<std::size_t>(s)] = acc;
  });

  PointCounters total;
  for (const auto& p : partial) total += p;
  return total;
}

ResultRecord base_record(const ExperimentConfig& cfg, const std::string& scheme,
                         const std::string& role, double snr_db, double parameter) {
  ResultRecord rec;
  rec.experiment = to_string(cfg.kind);
  rec.scheme = scheme;
  rec.m = cfg.m;
  rec.snr_db = snr_db;
  rec.parameter = parameter;
  rec.role = role;
  return rec;
}

double binomial_sigma(std::uint64_t errors, std::uint64_t bits) {
  if (bits == 0) return 0.0;
  const double p = static_cast<double>(errors) / static_cast<double>(bits);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

void push_ber_records(std::vector<ResultRecord>& out, const ExperimentConfig& cfg,
                      const PointCounters& c, double snr_db, double parameter,
                      const std::vector<std::pair<std::string, double>>& extra_aux) {
  const double symbols = std::max<double>(1.0, static_cast<double>(c.symbols));
  for (const bool eve : {false, true}) {
    ResultRecord rec = base_record(cfg, to_string(cfg.scheme), eve ? "eve" : "legit", snr_db,
                                   parameter);
    rec.errors = eve ? c.eve_errors : c.legit_errors;
    rec.bits = c.bits;
    rec.ber = c.bits ? static_cast<double>(rec.errors) / static_cast<double>(c.bits) : 0.0;
    rec.aux.emplace_back("ber_sigma", binomial_sigma(rec.errors, rec.bits));
    rec.aux.emplace_back("msd", (eve ? c.eve_disp : c.legit_disp) / symbols);
    for (const auto& a : extra_aux) rec.aux.push_back(a);
    out.push_back(std::move(rec));
  }
}

std::vector<ResultRecord> run_ber_sweep(const ExperimentConfig& cfg, int workers) {
  const SphereConstellation constellation = build_constellation(cfg.m);
  const std::vector<double> grid = snr_grid(cfg);
  std::vector<ResultRecord> records;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    ChannelConfig channel;
    channel.snr_db = grid[p];
    const PointCounters c = run_point(cfg, constellation, channel, std::nullopt, p, workers);
    push_ber_records(records, cfg, c, grid[p], grid[p], {});
  }
  return records;
}

std::vector<ResultRecord> run_rotation_sweep(const ExperimentConfig& cfg, int workers) {
  const SphereConstellation constellation = build_constellation(cfg.m);
  std::vector<ResultRecord> records;
  for (int k = 0; k < cfg.theta_steps; ++k) {
    const double theta =
        cfg.theta_start + k * (cfg.theta_stop - cfg.theta_start) / cfg.theta_steps;
    ChannelConfig channel;
    channel.snr_db = cfg.snr_start_db;
    const PointCounters c = run_point(cfg, constellation, channel, theta,
                                      static_cast<std::uint64_t>(k), workers);
    const MuellerMatrix m = rotation_mueller(RotationPattern{0.0, 0.0, theta});
    push_ber_records(records, cfg, c, cfg.snr_start_db, theta,
                     {{"trace", m.trace()}, {"q", amount_of_transformation(m)}});
  }
  return records;
}

std::vector<ResultRecord> run_q_vs_trace(const ExperimentConfig& cfg, int workers) {
  std::vector<ResultRecord> records(cfg.trials);
  const int shards = shard_count(cfg.trials, 256);
  run_shards(shards, workers, [&](int s) {
    const std::uint64_t begin = static_cast<std::uint64_t>(s) * 256;
    const std::uint64_t end = std::min(cfg.trials, begin + 256);
    for (std::uint64_t t = begin; t < end; ++t) {
      RngStream rng = RngStream::derive(cfg.seed, 0, t);
      const MuellerMatrix m = random_physical_mueller(rng);
      const auto [lower, upper] = transformation_bounds(m);
      ResultRecord rec = base_record(cfg, "none", "none", 0.0, m.trace());
      rec.aux.emplace_back("q", amount_of_transformation(m));
      rec.aux.emplace_back("q_lower", lower);
      rec.aux.emplace_back("q_upper", upper);
      records[t] = std::move(rec);
    }
  });
  return records;
}

std::vector<ResultRecord> run_stokes_stats(const ExperimentConfig& cfg, int workers) {
  const std::vector<double> grid = snr_grid(cfg);
  std::vector<ResultRecord> records;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double gamma = std::pow(10.0, grid[p] / 10.0);
    const double p_x = kSymbolBranchPower;
    const double sigma_w2 = p_x / gamma;
    const StokesMoments measured = measure_stokes_moments(
        p_x, sigma_w2, cfg.trials, derive_seed(cfg.seed, p), workers);
    const StokesMoments predicted = predicted_stokes_moments(p_x, sigma_w2);
    ResultRecord rec = base_record(cfg, "none", "none", grid[p], gamma);
    rec.aux.emplace_back("mean0_meas", measured.mean(0));
    rec.aux.emplace_back("mean0_pred", predicted.mean(0));
    for (int k = 0; k < 4; ++k) {
      rec.aux.emplace_back("var" + std::to_string(k) + "_meas", measured.variance(k));
      rec.aux.emplace_back("var" + std::to_string(k) + "_pred", predicted.variance(k));
    }
    rec.aux.emplace_back("var_gap_meas", measured.variance(2) - measured.variance(0));
    rec.aux.emplace_back("var_gap_pred", 2.0 * p_x * p_x);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ResultRecord> run_snr_transform(const ExperimentConfig& cfg, int workers) {
  const std::vector<double> grid = snr_grid(cfg);
  std::vector<ResultRecord> records;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double gamma = std::pow(10.0, grid[p] / 10.0);
    const Eigen::Vector4d measured =
        measure_stokes_snr(gamma, cfg.trials, derive_seed(cfg.seed, p), workers);
    const Eigen::Vector4d predicted = stokes_snr(gamma);
    ResultRecord rec = base_record(cfg, "none", "none", grid[p], gamma);
    for (int k = 0; k < 4; ++k) {
      rec.aux.emplace_back("snr" + std::to_string(k) + "_meas", measured(k));
      rec.aux.emplace_back("snr" + std::to_string(k) + "_pred", predicted(k));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ResultRecord> run_imperfection_sweep(const ExperimentConfig& cfg, int workers) {
  const SphereConstellation constellation = build_constellation(cfg.m);
  const Complex endpoint(cfg.xi_re, cfg.xi_im);
  std::vector<ResultRecord> records;
  for (int k = 0; k < cfg.xi_steps; ++k) {
    const double frac = cfg.xi_steps > 1 ? static_cast<double>(k) / (cfg.xi_steps - 1) : 1.0;
    const Complex xi = endpoint * frac;
    ChannelConfig channel;
    channel.snr_db = cfg.snr_start_db;
    channel.impairment = cfg.impairment == Impairment::Kind::Unbalanced
                             ? Impairment::unbalanced(xi)
                             : Impairment::cross_polarization(xi);
    const PointCounters c = run_point(cfg, constellation, channel, std::nullopt,
                                      static_cast<std::uint64_t>(k), workers);
    const double parameter = cfg.xi_im == 0.0 ? xi.real() : std::abs(xi);
    push_ber_records(records, cfg, c, cfg.snr_start_db, parameter, {});
  }
  return records;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::BerSweep: return "ber_sweep";
    case ExperimentKind::RotationSweep: return "rotation_sweep";
    case ExperimentKind::QVsTrace: return "q_vs_trace";
    case ExperimentKind::StokesStats: return "stokes_stats";
    case ExperimentKind::SnrTransform: return "snr_transform";
    case ExperimentKind::ImperfectionSweep: return "imperfection_sweep";
  }
  return "unknown";
}

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Golden: return "golden";
    case Scheme::Rotation: return "rotation";
    case Scheme::Opposite: return "opposite";
    case Scheme::None: return "none";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (block_bits < 1) throw std::invalid_argument("config: block-bits must be >= 1");
  if (m != 2 && m != 4 && m != 8 && m != 16 && m != 32) {
    throw std::invalid_argument("config: m must be one of 2, 4, 8, 16, 32");
  }
  if (snr_stop_db < snr_start_db) {
    throw std::invalid_argument("config: snr-stop must not be below snr-start");
  }
  if ((theta || theta_band) && scheme != Scheme::Rotation) {
    throw std::invalid_argument("config: rotation angle options require scheme=rotation");
  }
  if (theta && !(*theta >= 0.0 && *theta < 2.0 * M_PI)) {
    throw std::invalid_argument("config: theta must lie in [0, 2*pi)");
  }
  if (kind == ExperimentKind::RotationSweep) {
    if (scheme != Scheme::Rotation) {
      throw std::invalid_argument("config: rotation-sweep requires scheme=rotation");
    }
    if (theta_steps < 1 || theta_stop <= theta_start) {
      throw std::invalid_argument("config: empty rotation angle grid");
    }
  }
  if (kind == ExperimentKind::ImperfectionSweep) {
    if (xi_steps < 1) throw std::invalid_argument("config: xi-steps must be >= 1");
    if (std::norm(Complex(xi_re, xi_im)) > 1.0 + 1e-12) {
      throw std::invalid_argument("config: |xi| must not exceed 1");
    }
    if (impairment == Impairment::Kind::Generic) {
      throw std::invalid_argument("config: imperfection-sweep needs cross or unbalanced");
    }
  }
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  switch (cfg.kind) {
    case ExperimentKind::BerSweep: return run_ber_sweep(cfg, workers);
    case ExperimentKind::RotationSweep: return run_rotation_sweep(cfg, workers);
    case ExperimentKind::QVsTrace: return run_q_vs_trace(cfg, workers);
    case ExperimentKind::StokesStats: return run_stokes_stats(cfg, workers);
    case ExperimentKind::SnrTransform: return run_snr_transform(cfg, workers);
    case ExperimentKind::ImperfectionSweep: return run_imperfection_sweep(cfg, workers);
  }
  throw std::invalid_argument("run_experiment: unknown kind");
}

std::string csv_string(const std::vector<ResultRecord>& records) {
  std::size_t max_aux = 0;
  for (const auto& r : records) max_aux = std::max(max_aux, r.aux.size());

  std::string out = "experiment,scheme,m,snr_db,parameter,role,errors,bits,ber";
  for (std::size_t k = 1; k <= max_aux; ++k) {
    out += ",aux" + std::to_string(k) + "_name,aux" + std::to_string(k);
  }
  out += "\n";

  for (const auto& r : records) {
    out += r.experiment + "," + r.scheme + "," + std::to_string(r.m) + ",";
    out += format_real(r.snr_db) + "," + format_real(r.parameter) + "," + r.role + ",";
    out += std::to_string(r.errors) + "," + std::to_string(r.bits) + "," + format_real(r.ber);
    for (std::size_t k = 0; k < max_aux; ++k) {
      if (k < r.aux.size()) {
        out += "," + r.aux[k].first + "," + format_real(r.aux[k].second);
      } else {
        out += ",,";
      }
    }
    out += "\n";
  }
  return out;
}

void emit_csv(const std::vector<ResultRecord>& records, const std::string& path) {
  const std::string text = csv_string(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << text;
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::vector<ResultRecord> parse_csv(const std::string& text) {
  std::vector<ResultRecord> records;
  std::stringstream ss(text);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    // getline drops a trailing empty field after a final comma
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (fields.size() < 9) throw std::runtime_error("parse_csv: malformed row '" + line + "'");
    ResultRecord rec;
    rec.experiment = fields[0];
    rec.scheme = fields[1];
    rec.m = std::stoi(fields[2]);
    rec.snr_db = std::stod(fields[3]);
    rec.parameter = std::stod(fields[4]);
    rec.role = fields[5];
    rec.errors = std::stoull(fields[6]);
    rec.bits = std::stoull(fields[7]);
    rec.ber = std::stod(fields[8]);
    for (std::size_t k = 9; k + 1 < fields.size(); k += 2) {
      if (fields[k].empty()) continue;
      rec.aux.emplace_back(fields[k], std::stod(fields[k + 1]));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ResultRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> pts;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

// Curves per experiment kind; (x, y, log-y, scatter) layout decisions.
struct PlotLayout {
  std::vector<Series> series;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  bool scatter = false;
};

PlotLayout layout_records(const std::vector<ResultRecord>& records) {
  const std::string kind = records.front().experiment;
  PlotLayout layout;

  auto aux_value = [](const ResultRecord& r, const std::string& name) -> std::optional<double> {
    for (const auto& a : r.aux) {
      if (a.first == name) return a.second;
    }
    return std::nullopt;
  };

  if (kind == "ber_sweep" || kind == "rotation_sweep" || kind == "imperfection_sweep") {
    layout.log_y = true;
    layout.x_label = kind == "ber_sweep" ? "SNR (dB)"
                     : kind == "rotation_sweep" ? "rotation angle (rad)"
                                                : "impairment factor";
    layout.y_label = "BER";
    std::map<std::string, Series> by_key;
    for (const auto& r : records) {
      const std::string key = r.scheme + " " + r.role;
      by_key[key].label = key;
      const double x = kind == "ber_sweep" ? r.snr_db : r.parameter;
      by_key[key].pts.emplace_back(x, r.ber);
    }
    for (auto& [key, s] : by_key) layout.series.push_back(std::move(s));
  } else if (kind == "q_vs_trace") {
    layout.scatter = true;
    layout.x_label = "trace";
    layout.y_label = "amount of transformation";
    Series q{"q", {}}, lo{"q_lower", {}}, hi{"q_upper", {}};
    for (const auto& r : records) {
      if (auto v = aux_value(r, "q")) q.pts.emplace_back(r.parameter, *v);
      if (auto v = aux_value(r, "q_lower")) lo.pts.emplace_back(r.parameter, *v);
      if (auto v = aux_value(r, "q_upper")) hi.pts.emplace_back(r.parameter, *v);
    }
    layout.series = {std::move(q), std::move(lo), std::move(hi)};
  } else {
    layout.x_label = "SNR (dB)";
    layout.y_label = kind == "stokes_stats" ? "variance" : "Stokes SNR";
    std::map<std::string, Series> by_name;
    for (const auto& r : records) {
      for (const auto& a : r.aux) {
        if (a.first.find("mean") == 0 || a.first.find("gap") != std::string::npos) continue;
        by_name[a.first].label = a.first;
        by_name[a.first].pts.emplace_back(r.snr_db, a.second);
      }
    }
    for (auto& [key, s] : by_name) layout.series.push_back(std::move(s));
  }
  return layout;
}

}  // namespace

std::string plot_svg(const std::vector<ResultRecord>& records) {
  if (records.empty()) throw std::invalid_argument("plot: no records");
  for (const auto& r : records) {
    if (r.experiment != records.front().experiment) {
      throw std::invalid_argument("plot: records of mixed experiment kinds");
    }
  }
  PlotLayout layout = layout_records(records);

  // Drop non-positive points on a log axis.
  if (layout.log_y) {
    for (auto& s : layout.series) {
      std::erase_if(s.pts, [](const auto& p) { return !(p.second > 0.0); });
    }
  }
  std::erase_if(layout.series, [](const Series& s) { return s.pts.empty(); });
  if (layout.series.empty()) throw std::invalid_argument("plot: no plottable points");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : layout.series) {
    for (const auto& [x, y] : s.pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      const double yv = layout.log_y ? std::log10(y) : y;
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  }
  if (xmax <= xmin) { xmax = xmin + 1.0; xmin -= 1.0; }
  if (ymax <= ymin) { ymax = ymin + 1.0; ymin -= 1.0; }
  const double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  const double width = 760, height = 480;
  const double left = 78, right = width - 190, top = 36, bottom = height - 56;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  auto sy = [&](double y) {
    const double v = layout.log_y ? std::log10(y) : y;
    return bottom - (v - ymin) / (ymax - ymin) * (bottom - top);
  };

  std::string svg;
  char buf[512];
  auto append = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    svg += buf;
  };

  append("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
         "viewBox=\"0 0 %g %g\">\n", width, height, width, height);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  append("<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
         left, top, right - left, bottom - top);
  append("<text x=\"%g\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">%s</text>\n",
         left, records.front().experiment.c_str());

  // axis ticks
  for (int k = 0; k <= 5; ++k) {
    const double x = xmin + k * (xmax - xmin) / 5.0;
    append("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", sx(x), bottom,
           sx(x), bottom + 4);
    append("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"10\" "
           "text-anchor=\"middle\">%.3g</text>\n", sx(x), bottom + 16, x);
  }
  for (int k = 0; k <= 5; ++k) {
    const double v = ymin + k * (ymax - ymin) / 5.0;
    const double y = bottom - k * (bottom - top) / 5.0;
    append("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", left - 4, y,
           left, y);
    append("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"10\" "
           "text-anchor=\"end\">%.3g</text>\n", left - 7, y + 3,
           layout.log_y ? std::pow(10.0, v) : v);
  }
  append("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">%s</text>\n", (left + right) / 2, height - 16,
         layout.x_label.c_str());
  append("<text x=\"18\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 18 %g)\" text-anchor=\"middle\">%s</text>\n",
         (top + bottom) / 2, (top + bottom) / 2, layout.y_label.c_str());

  for (std::size_t i = 0; i < layout.series.size(); ++i) {
    const Series& s = layout.series[i];
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (layout.scatter) {
      for (const auto& [x, y] : s.pts) {
        append("<circle cx=\"%g\" cy=\"%g\" r=\"1.6\" fill=\"%s\"/>\n", sx(x), sy(y), color);
      }
    } else {
      auto pts = s.pts;
      std::sort(pts.begin(), pts.end());
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += color;
      svg += "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : pts) append("%g,%g ", sx(x), sy(y));
      svg += "\"/>\n";
      for (const auto& [x, y] : pts) {
        append("<circle cx=\"%g\" cy=\"%g\" r=\"2.4\" fill=\"%s\"/>\n", sx(x), sy(y), color);
      }
    }
    const double ly = top + 16 + 16 * static_cast<double>(i);
    append("<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>\n",
           right + 10, ly - 4, right + 34, ly - 4, color);
    append("<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\">%s</text>\n",
           right + 40, ly, s.label.c_str());
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::vector<ResultRecord>& records, const std::string& path) {
  const std::string svg = plot_svg(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_plot: cannot open " + path);
  out << svg;
  if (!out) throw std::runtime_error("emit_plot: write failed for " + path);
}

}  // namespace polsec
