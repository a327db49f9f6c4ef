#include "ldnet/cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ldnet/empirical.hpp"
#include "ldnet/numeric.hpp"
#include "ldnet/rate.hpp"
#include "ldnet/rncheck.hpp"

namespace ldnet::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  out << content;
  out.flush();
  if (!out.good()) throw std::runtime_error("failed writing " + path.string());
}

json base_json(const RunConfig& cfg) {
  json j;
  j["version"] = kVersion;
  j["seed"] = cfg.seed;
  j["config"] = json::parse(cfg.echo);
  return j;
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
  MeanSe out;
  const std::size_t n = xs.size();
  out.mean = pairwise_sum(xs) / static_cast<double>(n);
  if (n < 2) return out;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = xs[i] - out.mean;
    d2[i] = d * d;
  }
  out.se = std::sqrt(pairwise_sum(d2) / static_cast<double>(n - 1) /
                     static_cast<double>(n));
  return out;
}

std::vector<fs::path> cmd_simulate(const RunConfig& cfg, const RunOptions& opt,
                                   const fs::path& out) {
  const ModelParams& p = cfg.model;
  const int N = p.num_neurons();
  const int R = cfg.simulate.replicates;
  rng::Stream stream(cfg.seed);
  TorusSpectrum spectrum = build_torus_spectrum(cfg.kernel, p);

  std::vector<PathConfiguration> paths(R);
  parallel_for(static_cast<std::size_t>(R), opt.threads, [&](std::size_t r) {
    WeightMatrix J = sample_weights(spectrum, stream, static_cast<uint32_t>(r));
    paths[r] = simulate_network(p, J, stream, static_cast<uint32_t>(r));
  });

  std::ostringstream csv;
  csv << "replicate,neuron";
  for (int t = 0; t <= p.T; ++t) csv << ",u_" << t;
  csv << "\n";
  for (int r = 0; r < R; ++r)
    for (int row = 0; row < N; ++row) {
      csv << r << "," << (row - p.n);
      for (int t = 0; t <= p.T; ++t)
        csv << "," << fmt17(paths[r].values(row, t));
      csv << "\n";
    }

  json j = base_json(cfg);
  j["replicates"] = R;
  json neurons = json::array();
  for (int row = 0; row < N; ++row) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(R) * (p.T + 1));
    for (int r = 0; r < R; ++r)
      for (int t = 0; t <= p.T; ++t) vals.push_back(paths[r].values(row, t));
    double mean = pairwise_sum(vals) / vals.size();
    double var = 0.0;
    if (vals.size() > 1) {
      std::vector<double> d2(vals.size());
      for (std::size_t i = 0; i < vals.size(); ++i) {
        double d = vals[i] - mean;
        d2[i] = d * d;
      }
      var = pairwise_sum(d2) / (vals.size() - 1);
    }
    neurons.push_back({{"neuron", row - p.n}, {"mean", mean}, {"variance", var}});
  }
  j["neurons"] = neurons;

  write_file(out / "paths.csv", csv.str());
  write_json(out / "summary.json", j);
  return {out / "paths.csv", out / "summary.json"};
}

void append_grid_header(std::ostringstream& csv, const char* prefix, int T) {
  for (int s = 1; s <= T; ++s)
    for (int t = 1; t <= T; ++t)
      csv << "," << prefix << "_re_" << s << "_" << t << "," << prefix << "_im_"
          << s << "_" << t;
}

void append_grid_row(std::ostringstream& csv, const Eigen::MatrixXcd& m) {
  for (int s = 0; s < m.rows(); ++s)
    for (int t = 0; t < m.cols(); ++t)
      csv << "," << fmt17(m(s, t).real()) << "," << fmt17(m(s, t).imag());
}

std::vector<fs::path> cmd_rate(const RunConfig& cfg, const RunOptions&,
                               const fs::path& out) {
  const ModelParams& p = cfg.model;
  QuadratureSpec quad{cfg.rate.quad_order};
  rng::Stream stream(cfg.seed);

  GammaReport rep;
  MeasureStats stats;
  if (cfg.rate.source == "simulation") {
    TorusSpectrum spectrum = build_torus_spectrum(cfg.kernel, p);
    WeightMatrix J = sample_weights(spectrum, stream, 0);
    EmpiricalMeasure em{simulate_network(p, J, stream, 0)};
    rep = gamma_report(em, cfg.kernel, p);
    stats = stats_of_empirical(em, p);
  } else {
    StationaryGaussianMeasure g = cfg.measure.build(p);
    rep = gamma_report(g, cfg.kernel, p, quad);
    stats = stats_of_gaussian(g, p, p.n, quad);
  }

  SpectralGrid Kgrid = dft_sequence(build_K_sequence(stats, cfg.kernel, p));
  SpectralGrid Agrid = build_A_grid(Kgrid, p.sigma);

  std::ostringstream csv;
  csv << "m,omega";
  append_grid_header(csv, "k", p.T);
  append_grid_header(csv, "a", p.T);
  csv << "\n";
  for (int m = -p.n; m <= p.n; ++m) {
    csv << m << "," << fmt17(Kgrid.omega(m));
    append_grid_row(csv, Kgrid.value(m));
    append_grid_row(csv, Agrid.value(m));
    csv << "\n";
  }

  json j = base_json(cfg);
  j["source"] = cfg.rate.source;
  j["gamma1_n"] = rep.gamma1_n;
  j["gamma2_n"] = rep.gamma2_n;
  j["gamma_n"] = rep.gamma_n;
  j["gamma1_lim"] = rep.gamma1_lim;
  j["gamma2_lim"] = rep.gamma2_lim;
  j["gamma_lim"] = rep.gamma_lim;
  j["beta2"] = rep.beta2;
  j["gamma1_grid"] = rep.gamma1_grid;

  write_file(out / "spectral_grid.csv", csv.str());
  write_json(out / "gamma_report.json", j);
  return {out / "spectral_grid.csv", out / "gamma_report.json"};
}

std::vector<fs::path> cmd_rncheck(const RunConfig& cfg, const RunOptions& opt,
                                  const fs::path& out) {
  const ModelParams& p = cfg.model;
  rng::Stream stream(cfg.seed);
  json j = base_json(cfg);
  j["mode"] = cfg.rncheck.mode;
  j["samples"] = cfg.rncheck.samples;

  if (cfg.rncheck.mode == "identity") {
    PathConfiguration u = simulate_reference(p, stream, 0);
    RnReport rep = rn_check(u, cfg.kernel, p, cfg.rncheck.samples, stream,
                            opt.threads, cfg.rncheck.warn_nats);
    j["mc_log"] = rep.mc_log;
    j["mc_se"] = rep.mc_se;
    j["analytic"] = rep.analytic;
    j["z"] = rep.z;
    j["unreliable"] = rep.unreliable;
  } else {
    PushforwardReport rep =
        pushforward_check(cfg.rncheck.functional, cfg.kernel, p,
                          cfg.rncheck.samples, stream, opt.threads,
                          cfg.rncheck.warn_nats);
    j["lhs"] = rep.lhs;
    j["lhs_se"] = rep.lhs_se;
    j["rhs"] = rep.rhs;
    j["rhs_se"] = rep.rhs_se;
    j["z"] = rep.z;
    j["unreliable"] = rep.unreliable;
  }

  write_json(out / "rn_report.json", j);
  return {out / "rn_report.json"};
}

std::vector<fs::path> cmd_entropy(const RunConfig& cfg, const RunOptions&,
                                  const fs::path& out) {
  const ModelParams& p = cfg.model;
  QuadratureSpec quad{cfg.entropy.quad_order};
  StationaryGaussianMeasure g = cfg.measure.build(p);
  HReport h = rate_function_H(g, cfg.kernel, p, cfg.entropy.windows, quad);

  std::ostringstream csv;
  csv << "n,a_n\n";
  for (std::size_t i = 0; i < h.entropy.windows.size(); ++i)
    csv << h.entropy.windows[i] << "," << fmt17(h.entropy.values[i]) << "\n";

  json j = base_json(cfg);
  j["windows"] = h.entropy.windows;
  j["a_last"] = h.entropy.value;
  j["a_increment"] = h.entropy.increment;
  j["i3"] = h.i3;
  j["gamma1"] = h.gamma1;
  j["gamma2"] = h.gamma2;
  j["H"] = h.value;

  write_file(out / "entropy_table.csv", csv.str());
  write_json(out / "h_report.json", j);
  return {out / "entropy_table.csv", out / "h_report.json"};
}

std::vector<fs::path> cmd_converge(const RunConfig& cfg, const RunOptions&,
                                   const fs::path& out) {
  const ModelParams& p = cfg.model;
  QuadratureSpec quad{cfg.converge.quad_order};
  StationaryGaussianMeasure g = cfg.measure.build(p);

  MeasureStats lim_stats = stats_of_gaussian(g, p, g.support(), quad);
  LimitSpectralDensity density(lim_stats, cfg.kernel, p);
  int grid_used = 0;
  double g1l = gamma1_limit(density, p.sigma, {}, &grid_used);
  double g2l = gamma2_limit(g, cfg.kernel, p, quad);

  std::ostringstream csv;
  csv << "n,gamma1_n,gamma1_lim,abs_err1,gamma2_n,gamma2_lim,abs_err2\n";
  for (int w : cfg.converge.windows) {
    ModelParams pw = p;
    pw.n = w;
    MeasureStats stats = stats_of_gaussian(g, pw, w, quad);
    SpectralGrid Kgrid = dft_sequence(build_K_sequence(stats, cfg.kernel, pw));
    double g1n = gamma1_finite(Kgrid, p.sigma);
    double g2n = gamma2_finite(g, cfg.kernel, pw, quad);
    csv << w << "," << fmt17(g1n) << "," << fmt17(g1l) << ","
        << fmt17(std::abs(g1n - g1l)) << "," << fmt17(g2n) << "," << fmt17(g2l)
        << "," << fmt17(std::abs(g2n - g2l)) << "\n";
  }

  json j = base_json(cfg);
  j["windows"] = cfg.converge.windows;
  j["gamma1_lim"] = g1l;
  j["gamma2_lim"] = g2l;
  j["gamma1_grid"] = grid_used;

  write_file(out / "converge.csv", csv.str());
  write_json(out / "converge.json", j);
  return {out / "converge.csv", out / "converge.json"};
}

std::vector<fs::path> cmd_sample_weights(const RunConfig& cfg, const RunOptions& opt,
                                         const fs::path& out) {
  const ModelParams& p = cfg.model;
  const int N = p.num_neurons();
  const int R = cfg.sample_weights.samples;
  rng::Stream stream(cfg.seed);
  TorusSpectrum spectrum = build_torus_spectrum(cfg.kernel, p);

  std::vector<std::pair<int, int>> lags = {{0, 0}};
  if (p.n >= 1) {
    lags.push_back({1, 0});
    lags.push_back({0, 1});
    lags.push_back({1, 1});
  }
  const double m0 = p.j_bar / N;

  std::vector<double> means(R);
  std::vector<std::vector<double>> prods(lags.size(), std::vector<double>(R));
  parallel_for(static_cast<std::size_t>(R), opt.threads, [&](std::size_t r) {
    WeightMatrix J = sample_weights(spectrum, stream, static_cast<uint32_t>(r));
    means[r] = J.entries.mean();
    for (std::size_t li = 0; li < lags.size(); ++li) {
      auto [dk, dl] = lags[li];
      double acc = 0.0;
      for (int i = 0; i < N; ++i)
        for (int jj = 0; jj < N; ++jj)
          acc += (J.entries(i, jj) - m0) *
                 (J.entries((i + dk) % N, (jj + dl) % N) - m0);
      prods[li][r] = acc / (static_cast<double>(N) * N);
    }
  });

  WeightMatrix first = sample_weights(spectrum, stream, 0);
  std::ostringstream csv;
  for (int c = 0; c < N; ++c) csv << (c ? "," : "") << "j_" << (c - p.n);
  csv << "\n";
  for (int i = 0; i < N; ++i) {
    for (int c = 0; c < N; ++c)
      csv << (c ? "," : "") << fmt17(first.entries(i, c));
    csv << "\n";
  }

  json j = base_json(cfg);
  MeanSe entry = mean_and_se(means);
  j["entry_mean"] = {{"estimate", entry.mean},
                     {"target", m0},
                     {"se", entry.se}};
  json covs = json::array();
  for (std::size_t li = 0; li < lags.size(); ++li) {
    MeanSe ms = mean_and_se(prods[li]);
    covs.push_back({{"k", lags[li].first},
                    {"l", lags[li].second},
                    {"estimate", ms.mean},
                    {"target", cfg.kernel(lags[li].first, lags[li].second) / N},
                    {"se", ms.se}});
  }
  j["covariances"] = covs;

  write_file(out / "weights.csv", csv.str());
  write_json(out / "weight_moments.json", j);
  return {out / "weights.csv", out / "weight_moments.json"};
}

}  // namespace

int run_command(const std::string& name, const RunConfig& cfg,
                const RunOptions& opt) {
  if (opt.threads < 1) throw ConfigError("threads must be >= 1");
  fs::path out = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out.string());

  auto t0 = std::chrono::steady_clock::now();
  std::vector<fs::path> files;
  if (name == "simulate")
    files = cmd_simulate(cfg, opt, out);
  else if (name == "rate")
    files = cmd_rate(cfg, opt, out);
  else if (name == "rncheck")
    files = cmd_rncheck(cfg, opt, out);
  else if (name == "entropy")
    files = cmd_entropy(cfg, opt, out);
  else if (name == "converge")
    files = cmd_converge(cfg, opt, out);
  else if (name == "sample-weights")
    files = cmd_sample_weights(cfg, opt, out);
  else
    throw ConfigError("unknown command '" + name + "'");

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  for (const auto& f : files) std::printf("%s\n", f.string().c_str());
  std::fprintf(stderr, "%s: wall clock %.3f s\n", name.c_str(), secs);
  return 0;
}

}  // namespace ldnet::cli
