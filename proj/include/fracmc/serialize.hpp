#pragma once

#include <json.hpp>

#include "fracmc/estimate.hpp"
#include "fracmc/flow.hpp"
#include "fracmc/probes.hpp"

namespace fracmc {

inline nlohmann::json to_json(const Estimate& e) {
  return nlohmann::json{{"value", e.value},
                        {"std_error", e.std_error},
                        {"trunc_bound", e.trunc_bound},
                        {"n_eval", e.n_eval},
                        {"seed", e.seed}};
}

inline Estimate estimate_from_json(const nlohmann::json& j) {
  Estimate e;
  e.value = j.at("value").get<double>();
  e.std_error = j.at("std_error").get<double>();
  e.trunc_bound = j.at("trunc_bound").get<double>();
  e.n_eval = j.at("n_eval").get<int64_t>();
  e.seed = j.at("seed").get<uint64_t>();
  return e;
}

inline const char* to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::ConsistentWithCritical: return "ConsistentWithCritical";
    case ProbeVerdict::ViolatesCriticality: return "ViolatesCriticality";
    case ProbeVerdict::NoContact: return "NoContact";
  }
  return "?";
}

inline const char* to_string(FlowVerdict v) {
  switch (v) {
    case FlowVerdict::ConvergedCritical: return "ConvergedCritical";
    case FlowVerdict::MaxSteps: return "MaxSteps";
    case FlowVerdict::Degenerated: return "Degenerated";
  }
  return "?";
}

template <int N>
inline nlohmann::json to_json(const ContactReport<N>& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.contact_points)
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  nlohmann::json evals = nlohmann::json::array();
  for (const auto& p : r.evaluation_points)
    evals.push_back(std::vector<double>(p.begin(), p.end()));
  nlohmann::json fmc = nlohmann::json::array();
  for (const auto& e : r.fmc_at_contact) fmc.push_back(to_json(e));
  return nlohmann::json{{"lambda_star", r.lambda_star},
                        {"contact_points", pts},
                        {"evaluation_points", evals},
                        {"fmc_at_contact", fmc},
                        {"verdict", to_string(r.verdict)}};
}

}  // namespace fracmc
