#pragma once

#include <string>

#include <json.hpp>

#include "actsig/activation.hpp"
#include "actsig/kernel.hpp"
#include "actsig/lyapunov.hpp"
#include "actsig/montecarlo.hpp"
#include "actsig/propagation.hpp"
#include "actsig/signature.hpp"

namespace actsig {

/// Nine significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

/// A JSON number rounded to nine significant digits, the string "inf" (or
/// "-inf") for infinities and null for NaN.
nlohmann::json json_number(double v);

nlohmann::json to_json(const Signature& s);
nlohmann::json to_json(const ComponentRow& r);
nlohmann::json to_json(const FixedPointReport& r);
nlohmann::json to_json(const BiasDriftReport& r);
nlohmann::json to_json(const ContractionCertificate& c, const DescentReport& d);
nlohmann::json to_json(const DescentReport& d);
nlohmann::json to_json(const L2Report& r);
nlohmann::json to_json(const KernelBoundReport& r);

/// (value - reference) / std_error; 0 when both the error and the difference vanish.
double z_score(const EstimateWithError& e, double reference);

/// {component, value, std_error, samples, seed, quadrature_ref, z_score}
nlohmann::json mc_record(const std::string& component, const EstimateWithError& e, double quadrature_ref);

}  // namespace actsig
