#include "ldnet/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "json.hpp"

namespace ldnet::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail(path + "." + it.key(), "unknown key");
  }
}

double get_num(const json& obj, const std::string& path, const char* key,
               double defv) {
  if (!obj.contains(key)) return defv;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int defv) {
  if (!obj.contains(key)) return defv;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool defv) {
  if (!obj.contains(key)) return defv;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& defv) {
  if (!obj.contains(key)) return defv;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<int> get_int_list(const json& obj, const std::string& path,
                              const char* key, std::vector<int> defv) {
  if (!obj.contains(key)) return defv;
  const json& v = obj.at(key);
  if (!v.is_array()) fail(path + "." + key, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(path + "." + key, "expected integers");
    out.push_back(e.get<int>());
  }
  return out;
}

Eigen::VectorXd get_vector(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path, "expected numbers");
    out(static_cast<int>(i)) = v[i].get<double>();
  }
  return out;
}

Eigen::MatrixXd get_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected an array of arrays");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) fail(path, "expected an array of arrays");
  Eigen::MatrixXd out(v.size(), cols);
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols) fail(path, "ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!v[r][c].is_number()) fail(path, "expected numbers");
      out(static_cast<int>(r), static_cast<int>(c)) = v[r][c].get<double>();
    }
  }
  return out;
}

ModelParams parse_model(const json& root) {
  if (!root.contains("model")) fail("model", "required section missing");
  const json& m = root.at("model");
  check_keys(m, "model",
             {"n", "T", "gamma", "sigma", "theta_bar", "theta_std", "j_bar",
              "gain", "init"});
  if (!m.contains("n")) fail("model.n", "required");
  if (!m.contains("T")) fail("model.T", "required");

  ModelParams p;
  p.n = get_int(m, "model", "n", 0);
  p.T = get_int(m, "model", "T", 1);
  p.gamma = get_num(m, "model", "gamma", p.gamma);
  p.sigma = get_num(m, "model", "sigma", p.sigma);
  p.theta_bar = get_num(m, "model", "theta_bar", p.theta_bar);
  p.theta_std = get_num(m, "model", "theta_std", p.theta_std);
  p.j_bar = get_num(m, "model", "j_bar", p.j_bar);

  if (m.contains("gain")) {
    const json& g = m.at("gain");
    check_keys(g, "model.gain", {"type", "slope"});
    std::string type = get_str(g, "model.gain", "type", "logistic");
    if (type != "logistic") fail("model.gain.type", "unknown gain '" + type + "'");
    p.gain = GainFunction::logistic(get_num(g, "model.gain", "slope", 1.0));
  }
  if (m.contains("init")) {
    const json& g = m.at("init");
    check_keys(g, "model.init", {"type", "mean", "std", "value"});
    std::string type = get_str(g, "model.init", "type", "gaussian");
    if (type == "gaussian") {
      p.init_law = InitLaw::gaussian(get_num(g, "model.init", "mean", 0.0),
                                     get_num(g, "model.init", "std", 1.0));
    } else if (type == "point") {
      p.init_law = InitLaw::point_mass(get_num(g, "model.init", "value", 0.0));
    } else {
      fail("model.init.type", "unknown init law '" + type + "'");
    }
  }

  auto violations = validate_params(p);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) {
      if (!msg.empty()) msg += "; ";
      msg += "model." + v;
    }
    throw ConfigError(msg);
  }
  return p;
}

CorrelationKernel parse_kernel(const json& root) {
  if (!root.contains("kernel")) return CorrelationKernel::dirac(1.0);
  const json& k = root.at("kernel");
  check_keys(k, "kernel",
             {"type", "j_var", "a", "rho1", "rho2", "k_half", "l_half", "values"});
  std::string type = get_str(k, "kernel", "type", "dirac");
  try {
    if (type == "dirac")
      return CorrelationKernel::dirac(get_num(k, "kernel", "j_var", 1.0));
    if (type == "separable_geometric")
      return CorrelationKernel::separable_geometric(
          get_num(k, "kernel", "a", 1.0), get_num(k, "kernel", "rho1", 0.5),
          get_num(k, "kernel", "rho2", 0.5));
    if (type == "table") {
      if (!k.contains("values")) fail("kernel.values", "required for table kernels");
      return CorrelationKernel::table(get_matrix(k.at("values"), "kernel.values"),
                                      get_int(k, "kernel", "k_half", 0),
                                      get_int(k, "kernel", "l_half", 0));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }
  fail("kernel.type", "unknown kernel '" + type + "'");
}

MeasureSpec parse_measure(const json& root) {
  MeasureSpec spec;
  if (!root.contains("measure")) return spec;
  const json& m = root.at("measure");
  check_keys(m, "measure",
             {"type", "delta", "mean", "time_cov", "cross_rho", "support",
              "bartlett"});
  std::string type = get_str(m, "measure", "type", "reference");
  if (type == "reference") {
    spec.type = MeasureSpec::Type::reference;
  } else if (type == "shifted_reference") {
    spec.type = MeasureSpec::Type::shifted_reference;
    spec.delta = get_num(m, "measure", "delta", 0.0);
  } else if (type == "separable") {
    spec.type = MeasureSpec::Type::separable;
    if (!m.contains("mean")) fail("measure.mean", "required");
    if (!m.contains("time_cov")) fail("measure.time_cov", "required");
    spec.mean = get_vector(m.at("mean"), "measure.mean");
    spec.time_cov = get_matrix(m.at("time_cov"), "measure.time_cov");
    spec.cross_rho = get_num(m, "measure", "cross_rho", 0.0);
    spec.support = get_int(m, "measure", "support", 0);
    spec.bartlett = get_bool(m, "measure", "bartlett", true);
  } else {
    fail("measure.type", "unknown measure '" + type + "'");
  }
  return spec;
}

PathFunctional parse_functional(const json& obj, const std::string& path) {
  check_keys(obj, path, {"kind", "t", "s", "k", "threshold"});
  PathFunctional f;
  std::string kind = get_str(obj, path, "kind", "one");
  if (kind == "one")
    f.kind = PathFunctional::Kind::one;
  else if (kind == "mean_gain")
    f.kind = PathFunctional::Kind::mean_gain;
  else if (kind == "lag_gain_correlation")
    f.kind = PathFunctional::Kind::lag_gain_correlation;
  else if (kind == "half_space_c")
    f.kind = PathFunctional::Kind::half_space_c;
  else
    fail(path + ".kind", "unknown functional '" + kind + "'");
  f.t = get_int(obj, path, "t", 0);
  f.s = get_int(obj, path, "s", 0);
  f.k = get_int(obj, path, "k", 0);
  f.threshold = get_num(obj, path, "threshold", 0.0);
  return f;
}

}  // namespace

StationaryGaussianMeasure MeasureSpec::build(const ModelParams& p) const {
  try {
    switch (type) {
      case Type::reference:
        return reference_gaussian_law(p);
      case Type::shifted_reference:
        return shifted_reference_law(p, delta);
      case Type::separable: {
        if (mean.size() != p.T + 1)
          throw std::invalid_argument("mean length must be T+1");
        if (time_cov.rows() != p.T + 1 || time_cov.cols() != p.T + 1)
          throw std::invalid_argument("time_cov must be (T+1)x(T+1)");
        return separable_gaussian_measure(mean, time_cov, cross_rho, support,
                                          bartlett);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
  throw ConfigError("measure: unknown type");
}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"model", "kernel", "measure", "seed", "simulate", "rate", "rncheck",
              "entropy", "converge", "sample_weights"});

  RunConfig cfg;
  cfg.model = parse_model(root);
  cfg.kernel = parse_kernel(root);
  cfg.measure = parse_measure(root);

  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !s.is_number_integer())
      fail("seed", "expected an unsigned integer");
    cfg.seed = s.get<uint64_t>();
  }

  if (root.contains("simulate")) {
    const json& b = root.at("simulate");
    check_keys(b, "simulate", {"replicates"});
    cfg.simulate.replicates = get_int(b, "simulate", "replicates", 1);
    if (cfg.simulate.replicates < 1) fail("simulate.replicates", "must be >= 1");
  }
  if (root.contains("rate")) {
    const json& b = root.at("rate");
    check_keys(b, "rate", {"source", "quad_order"});
    cfg.rate.source = get_str(b, "rate", "source", "gaussian");
    if (cfg.rate.source != "gaussian" && cfg.rate.source != "simulation")
      fail("rate.source", "must be 'gaussian' or 'simulation'");
    cfg.rate.quad_order = get_int(b, "rate", "quad_order", 32);
    if (cfg.rate.quad_order < 1) fail("rate.quad_order", "must be >= 1");
  }
  if (root.contains("rncheck")) {
    const json& b = root.at("rncheck");
    check_keys(b, "rncheck", {"mode", "samples", "warn_nats", "functional"});
    cfg.rncheck.mode = get_str(b, "rncheck", "mode", "identity");
    if (cfg.rncheck.mode != "identity" && cfg.rncheck.mode != "pushforward")
      fail("rncheck.mode", "must be 'identity' or 'pushforward'");
    cfg.rncheck.samples = get_int(b, "rncheck", "samples", 100000);
    if (cfg.rncheck.samples < 2) fail("rncheck.samples", "must be >= 2");
    cfg.rncheck.warn_nats = get_num(b, "rncheck", "warn_nats", 50.0);
    if (b.contains("functional"))
      cfg.rncheck.functional = parse_functional(b.at("functional"),
                                                "rncheck.functional");
  }
  if (root.contains("entropy")) {
    const json& b = root.at("entropy");
    check_keys(b, "entropy", {"windows", "quad_order"});
    cfg.entropy.windows = get_int_list(b, "entropy", "windows",
                                       cfg.entropy.windows);
    cfg.entropy.quad_order = get_int(b, "entropy", "quad_order", 32);
  }
  if (root.contains("converge")) {
    const json& b = root.at("converge");
    check_keys(b, "converge", {"windows", "quad_order"});
    cfg.converge.windows = get_int_list(b, "converge", "windows",
                                        cfg.converge.windows);
    if (cfg.converge.windows.empty()) fail("converge.windows", "must be nonempty");
    for (int w : cfg.converge.windows)
      if (w < 0) fail("converge.windows", "entries must be >= 0");
    cfg.converge.quad_order = get_int(b, "converge", "quad_order", 32);
  }
  if (root.contains("sample_weights")) {
    const json& b = root.at("sample_weights");
    check_keys(b, "sample_weights", {"samples"});
    cfg.sample_weights.samples = get_int(b, "sample_weights", "samples", 1000);
    if (cfg.sample_weights.samples < 2) fail("sample_weights.samples", "must be >= 2");
  }

  cfg.echo = root.dump();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace ldnet::cli
