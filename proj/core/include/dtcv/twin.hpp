#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dtcv/plant.hpp"
#include "dtcv/trace.hpp"

namespace dtcv {

/// Twin inputs: the eleven plant observables of a row followed by alpha, beta, delta.
inline constexpr std::size_t kFeatureCount = 14;
using Features = std::array<double, kFeatureCount>;
/// Outputs in the order of predicted_signals().
using Prediction = std::array<std::int64_t, kPredCount>;

const std::array<std::string_view, kFeatureCount>& feature_names();
Features features_of(const TraceRow& row, const PlantParams& p);

/// Clamps to signal ranges, rounds, thresholds booleans at 0.5.
Prediction finish(std::span<const double> raw);

class Surrogate {
 public:
  virtual ~Surrogate() = default;

  /// Prediction for row t from truth rows [0, t]. The default feeds row t-1 (row 0 at t = 0).
  virtual Prediction predict(const Trace& truth, std::size_t t, const PlantParams& p) const;
  /// Throws Error on a schema mismatch.
  Prediction predict_features(std::span<const double> input) const;
  virtual std::string kind() const = 0;
  virtual nlohmann::json to_json() const;

 protected:
  virtual Prediction evaluate(const Features& x) const = 0;
};

using SurrogatePtr = std::shared_ptr<const Surrogate>;

/// Reads the current truth row back: pred_X(t) = X(t).
SurrogatePtr perfect_twin();

/// Same outputs for every input.
SurrogatePtr constant_surrogate(const Prediction& value);

/// y = W x + b with the given weights (kPredCount x kFeatureCount, row-major).
SurrogatePtr affine_surrogate(std::vector<double> weights, std::vector<double> bias,
                              std::string kind = "affine");

/// Random non-negative weights: componentwise larger inputs never give smaller outputs.
SurrogatePtr monotone_surrogate(std::uint64_t seed);
/// Negated weights of monotone_surrogate(seed) with a bias keeping outputs in range.
SurrogatePtr anti_monotone_surrogate(std::uint64_t seed);

/// Ridge least squares on standardized features and a few interaction terms.
SurrogatePtr fit(const std::vector<Trace>& traces, const std::vector<PlantParams>& params,
                 std::uint64_t seed = 0, double ridge = 1e-6);

SurrogatePtr surrogate_from_json(const nlohmann::json& j);
SurrogatePtr load_surrogate(const std::filesystem::path& path);
void save_surrogate(const Surrogate& s, const std::filesystem::path& path);

enum class FaultKind { StuckOutput, AdditiveNoise, Bias, Lag };

struct FaultSpec {
  FaultKind kind = FaultKind::StuckOutput;
  Signal signal = Signal::pred_Bo_T;
  double amplitude = 0.0;     // noise
  std::uint64_t seed = 0;     // noise
  double offset = 0.0;        // bias
  std::int64_t steps = 0;     // lag
  std::int64_t t_from = 0;    // activation window, rows, inclusive
  std::int64_t t_to = 0;

  friend bool operator==(const FaultSpec&, const FaultSpec&) = default;
};

std::string_view fault_kind_name(FaultKind k);
FaultKind fault_kind_from_name(std::string_view name);

/// Throws Error for a signal outside the twin's outputs or an inverted window.
SurrogatePtr inject_fault(SurrogatePtr inner, const FaultSpec& f);

struct RolloutOptions {
  /// Feed the twin's pred_W_A back into the burner controller (takes effect next step).
  bool alarm_feedback = false;
};

/// Runs the plant and the twin side by side.
Trace rollout(const Surrogate& s, const PlantParams& p, std::int64_t horizon,
              std::uint64_t seed = 0, const RolloutOptions& opts = {});

/// Adds pred_* columns to an existing truth trace.
Trace apply_twin(const Surrogate& s, Trace truth, const PlantParams& p);

}  // namespace dtcv
