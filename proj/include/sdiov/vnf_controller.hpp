#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdiov/ids.hpp"
#include "sdiov/pid.hpp"
#include "sdiov/predictor.hpp"

namespace sdiov {

struct VnfLoad {
  VnfId vnf;
  double load = 0.0;  // CPU units, the instance's own demand plus its sessions
};

// What the VNF controller sees of one server.
struct PmView {
  PmId pm;
  bool on = true;
  bool draining = false;
  double cpu_capacity = 1000.0;
  double utilization = 0.0;            // measured this period
  double predicted_utilization = 0.0;  // filled in by vnf_tick
  std::vector<VnfLoad> vnfs;

  double load() const;
  bool active() const { return on && !draining; }
};

struct WorldView {
  std::vector<PmView> pms;  // every server, sorted by id
  bool migrations_in_flight = false;
};

enum class ActionKind { PowerOn, PowerOff, Migrate };

const char* to_string(ActionKind k);

struct PlanAction {
  ActionKind kind = ActionKind::Migrate;
  PmId pm;  // PowerOn / PowerOff target
  VnfId vnf;
  PmId src;
  PmId dst;

  static PlanAction power_on(PmId pm) { return {ActionKind::PowerOn, pm, {}, {}, {}}; }
  static PlanAction power_off(PmId pm) { return {ActionKind::PowerOff, pm, {}, {}, {}}; }
  static PlanAction migrate(VnfId v, PmId s, PmId d) { return {ActionKind::Migrate, {}, v, s, d}; }
  friend bool operator==(const PlanAction& a, const PlanAction& b);
};

using Plan = std::vector<PlanAction>;

struct VnfControllerParams {
  double target_temperature = 0.6;  // TT
  PidGains gains;
  double dt = 1.0;
  double integral_limit = 10.0;
  double alpha = 0.2;
  double beta = 0.8;
  double theta = 0.0;
  double deadband = 0.05;
  std::size_t window = 8;
  double step_size = 0.5;  // xi
  // Upper bound on a consolidation destination's load, as a fraction of its
  // capacity. Empty means: the utilization whose temperature sits at the top
  // of the deadband, so consolidating never lands the system straight in the
  // reduction branch.
  std::optional<double> consolidation_ceiling;
  // Control periods after start during which no plan is emitted, so the
  // first decision rests on predictors with some history.
  std::size_t startup_hold = 0;

  double effective_ceiling() const;
};

struct VnfControllerState {
  explicit VnfControllerState(const VnfControllerParams& params = {});

  VnfControllerParams params;
  std::map<PmId, NlmsState> per_pm_predictors;
  PidState pid;
  double temperature_threshold = 0.5;
  double last_system_temperature = 0.0;
  double last_w = 0.0;
  std::size_t ticks = 0;
};

enum class Branch { None, Deadband, Waiting, Reduction, Increase };

const char* to_string(Branch b);

struct VnfTickResult {
  Plan plan;
  Branch branch = Branch::None;
  double w = 0.0;
  double system_temperature = 0.0;
  double temperature_threshold = 0.0;
  std::vector<std::string> warnings;
};

// 0 below alpha, 1 above beta, linear in between.
double pm_temperature(double x_hat, double alpha, double beta);

// Arithmetic mean; throws NoActivePm when empty.
double system_temperature(std::span<const double> temps);

// Powers down the floor(n/2) active servers with the lowest predicted CPU,
// moving each one's VNFs (largest first) onto survivors scanned from the
// highest id down, subject to the destination ceiling. A source whose VNFs do
// not all fit keeps all of them and stays on. Throws NothingToDo when n < 2.
Plan temperature_increase_plan(const WorldView& world, double ceiling_fraction = 1.0);

struct ReductionPlan {
  Plan plan;
  bool truncated = false;  // standby pool smaller than ceil(n/2)
};

// For the ceil(n/2) most loaded active servers (bounded by the standby pool),
// powers on a standby server and moves floor(count/2) of the source's VNFs,
// largest first, onto it. VNFs that would overfill it are passed over. Throws NoStandbyPm when the pool is empty and
// NoActivePm when nothing is active.
ReductionPlan temperature_reduction_plan(const WorldView& world);

// One control period of the VNF controller. The temperature loop is
// direct-acting: w rises with the system temperature, and w >= theta selects
// the reduction branch.
VnfTickResult vnf_tick(VnfControllerState& state, WorldView& world);

}  // namespace sdiov
