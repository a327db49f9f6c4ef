#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ldnet/gaussian_measure.hpp"
#include "ldnet/model.hpp"
#include "ldnet/rncheck.hpp"

namespace ldnet::cli {

// Anything wrong with the configuration document or flag values. Mapped to
// exit status 2; numeric failures during a run map to 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Gaussian test measure selector for rate/entropy/converge runs.
struct MeasureSpec {
  enum class Type { reference, shifted_reference, separable };
  Type type = Type::reference;
  double delta = 0.0;        // shifted_reference
  Eigen::VectorXd mean;      // separable, length T+1
  Eigen::MatrixXd time_cov;  // separable, (T+1)x(T+1)
  double cross_rho = 0.0;
  int support = 0;
  bool bartlett = true;

  StationaryGaussianMeasure build(const ModelParams& p) const;
};

struct SimulateBlock {
  int replicates = 1;
};

struct RateBlock {
  std::string source = "gaussian";  // "gaussian" | "simulation"
  int quad_order = 32;
};

struct RnCheckBlock {
  std::string mode = "identity";  // "identity" | "pushforward"
  int samples = 100000;
  double warn_nats = 50.0;
  PathFunctional functional;  // pushforward mode only
};

struct EntropyBlock {
  std::vector<int> windows = {2, 4, 8, 16, 32};
  int quad_order = 32;
};

struct ConvergeBlock {
  std::vector<int> windows = {1, 2, 4, 8};
  int quad_order = 32;
};

struct SampleWeightsBlock {
  int samples = 1000;
};

struct RunConfig {
  ModelParams model;
  CorrelationKernel kernel = CorrelationKernel::dirac(1.0);
  MeasureSpec measure;
  SimulateBlock simulate;
  RateBlock rate;
  RnCheckBlock rncheck;
  EntropyBlock entropy;
  ConvergeBlock converge;
  SampleWeightsBlock sample_weights;
  uint64_t seed = 0;
  std::string echo;  // canonical serialization of the parsed document
};

// Strict parser: unknown keys anywhere are an error, messages name the full
// key path. model.n and model.T are required, everything else defaults.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace ldnet::cli
