#include "pparab/params.hpp"

#include <cmath>
#include <stdexcept>

#include "pparab/certifier.hpp"
#include "json.hpp"

namespace pparab {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_base_ranges(const ParamSet& ps) {
  require(std::isfinite(ps.p) && std::isfinite(ps.gamma) && std::isfinite(ps.s) &&
              std::isfinite(ps.epsilon),
          "parameters must be finite");
  require(ps.p > 1.0, "p > 1 violated");
  require(ps.gamma > -1.0, "gamma > -1 violated");
  require(ps.epsilon >= 0.0, "epsilon >= 0 violated");
}

}  // namespace

ParamSet validate_params(const ParamSet& params, Purpose purpose) {
  check_base_ranges(params);
  switch (purpose) {
    case Purpose::w22:
      require(params.p >= 3.0, "3 <= p violated");
      require(params.p <= 40.0, "p <= 40 violated");
      require(params.gamma < 1.0, "gamma < 1 violated");
      break;
    case Purpose::general_s:
      if (admissible_s(params.p, params.gamma, params.s) == SBranch::inadmissible)
        throw std::invalid_argument(
            "s outside both admissible branches: needs s > max{gamma+1-p, -2-gamma} or "
            "-2-gamma >= s > max{gamma+1-p, 2p-4-gamma-2 sqrt(2(p-1)(p-2-gamma))}");
      break;
    case Purpose::solver:
      require(params.epsilon > 0.0, "epsilon > 0 violated (solver)");
      break;
  }
  return params;
}

WeightRecipe w22_weights(const ParamSet& params) {
  WeightRecipe w;
  w.w1 = params.p - params.gamma;
  w.w2 = 2.0;
  w.w3 = 1.0 - params.p;
  w.w4 = 2.0 * (std::sqrt(2.0) - 1.0);
  w.a = 1.0 - params.gamma;
  w.b = 2.0 * std::sqrt(2.0);
  w.eta = 0.0;
  return w;
}

SweepPoint make_sweep_point(double kappa, const ParamSet& params) {
  SweepPoint pt;
  pt.kappa = kappa;
  pt.theta = 1.0 - kappa;
  pt.P_theta = (params.p - 2.0) * pt.theta + 1.0;
  pt.S_theta = 1.0 + params.s * pt.theta;
  pt.K_theta = 1.0 + params.gamma * pt.theta;
  return pt;
}

std::string params_to_json(const ParamSet& params) {
  nlohmann::json j;
  j["p"] = params.p;
  j["gamma"] = params.gamma;
  j["s"] = params.s;
  j["epsilon"] = params.epsilon;
  return j.dump();
}

ParamSet params_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ParamSet ps;
  ps.p = j.at("p").get<double>();
  ps.gamma = j.at("gamma").get<double>();
  ps.s = j.value("s", 0.0);
  ps.epsilon = j.value("epsilon", 0.0);
  return ps;
}

}  // namespace pparab
