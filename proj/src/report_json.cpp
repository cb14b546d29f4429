#include "actsig/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace actsig {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // round-trip through the 9-digit text so the serializer emits exactly that
  return std::strtod(format_number(v).c_str(), nullptr);
}

json to_json(const Signature& s) {
  return {{"name", s.name},
          {"sigma", json_number(s.sigma)},
          {"m1", json_number(s.m1)},
          {"g1", json_number(s.g1)},
          {"g2", json_number(s.g2)},
          {"m2", json_number(s.m2)},
          {"eta", json_number(s.eta)},
          {"alpha_plus", json_number(s.alpha_plus)},
          {"alpha_minus", json_number(s.alpha_minus)},
          {"tv", json_number(s.tv)},
          {"c_phi", json_number(s.c_phi)},
          {"g4", json_number(s.g4)},
          {"m2_prime", json_number(s.m2_prime)},
          {"order", s.order}};
}

json to_json(const ComponentRow& r) {
  return {{"activation", r.name},  {"sigma", json_number(r.sigma)}, {"m1", json_number(r.c.m1)},
          {"g1", json_number(r.c.g1)}, {"g2", json_number(r.c.g2)},    {"m2", json_number(r.c.m2)},
          {"eta", json_number(r.c.eta)}};
}

json to_json(const FixedPointReport& r) {
  json traj = json::array();
  for (double q : r.trajectory) traj.push_back(json_number(q));
  return {{"q_star", json_number(r.q_star)},
          {"f_prime", json_number(r.f_prime)},
          {"variance_stable", r.variance_stable},
          {"perturbation_stable", r.perturbation_stable},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"diverged", r.diverged},
          {"used_bisection", r.used_bisection},
          {"trajectory", traj}};
}

json to_json(const BiasDriftReport& r) {
  return {{"lhs", json_number(r.lhs)},
          {"rhs", json_number(r.rhs)},
          {"holds", r.holds},
          {"m1", json_number(r.m1)},
          {"c_phi", json_number(r.c_phi)}};
}

json to_json(const DescentReport& d) {
  json violations = json::array();
  for (const ProbeViolation& v : d.violations) {
    violations.push_back({{"x", json_number(v.x)}, {"lhs", json_number(v.lhs)}, {"rhs", json_number(v.rhs)}});
  }
  return {{"passed", d.passed},
          {"probes", d.probes},
          {"worst_slack", json_number(d.worst_slack)},
          {"worst_x", json_number(d.worst_x)},
          {"violations", violations}};
}

json to_json(const ContractionCertificate& c, const DescentReport& d) {
  json out = {{"a", json_number(c.a)},
              {"b", json_number(c.b)},
              {"L_T", json_number(c.lipschitz_T)},
              {"sup_slope_approximate", c.sup_slope_approximate},
              {"x_star", json_number(c.x_star)},
              {"c", json_number(c.descent_constant)},
              {"c_conservative", json_number(c.conservative_constant)},
              {"is_contraction", c.is_contraction},
              {"l2_gain", json_number(c.l2_gain)},
              {"worst_slack", json_number(d.worst_slack)}};
  out["violations"] = to_json(d)["violations"];
  out["passed"] = d.passed;
  return out;
}

json to_json(const L2Report& r) {
  json entries = json::array();
  for (const L2Entry& e : r.entries) {
    entries.push_back({{"h", json_number(e.h)},
                       {"ratio", json_number(e.ratio)},
                       {"std_error", json_number(e.std_error)},
                       {"holds", e.holds}});
  }
  return {{"a", json_number(r.a)},         {"sigma", json_number(r.sigma)}, {"g2", json_number(r.g2)},
          {"gain", json_number(r.gain)},   {"contraction", r.contraction},  {"samples", r.samples},
          {"seed", r.seed},                {"entries", entries},            {"all_hold", r.all_hold}};
}

json to_json(const KernelBoundReport& r) {
  return {{"dim", r.dim},
          {"norm_x", json_number(r.norm_x)},
          {"norm_y", json_number(r.norm_y)},
          {"g4_bound", json_number(r.bound)},
          {"bv_bound", r.bv_bound ? json_number(*r.bv_bound) : json(nullptr)},
          {"mc_value", json_number(r.mc_estimate.value)},
          {"mc_se", json_number(r.mc_estimate.std_error)},
          {"satisfied", r.satisfied}};
}

double z_score(const EstimateWithError& e, double reference) {
  const double diff = e.value - reference;
  if (e.std_error > 0.0) return diff / e.std_error;
  return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
}

json mc_record(const std::string& component, const EstimateWithError& e, double quadrature_ref) {
  const double z = z_score(e, quadrature_ref);
  return {{"component", component},
          {"value", json_number(e.value)},
          {"std_error", json_number(e.std_error)},
          {"samples", e.samples},
          {"seed", e.seed},
          {"quadrature_ref", json_number(quadrature_ref)},
          {"z_score", json_number(z)}};
}

}  // namespace actsig
