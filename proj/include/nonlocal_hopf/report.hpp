#pragma once

#include <string>

#include <json.hpp>

#include "nonlocal_hopf/hopf.hpp"
#include "nonlocal_hopf/linear_stability.hpp"
#include "nonlocal_hopf/normal_form.hpp"
#include "nonlocal_hopf/pde_sim.hpp"

namespace nlhopf {

inline constexpr const char* kToolVersion = "0.1.0";

using ojson = nlohmann::ordered_json;

/// Serializes with two-space indentation and every floating-point value
/// printed as %.17g, so parsing the text back yields identical doubles.
/// Non-finite values become null.
std::string dump_json(const ojson& j);

/// "%.17g" formatting shared with the CSV writers.
std::string format_double(double v);

ojson to_json(const ModelParams& p);
ojson to_json(const CriticalPoints& cp);
ojson to_json(const EllThresholds& t);
ojson to_json(const HopfPoint& h);
ojson to_json(const RegimeReport& r);
ojson to_json(const StabilityVerdict& v);
ojson to_json(const EigenData& e);
ojson to_json(const HopfNormalForm& nf);
ojson to_json(const G21Breakdown& g);
ojson to_json(const AsymptoticLimits& a);
ojson to_json(const OrbitDiagnostics& d);
ojson complex_json(std::complex<double> z);

}  // namespace nlhopf
