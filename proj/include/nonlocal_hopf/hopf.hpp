#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nonlocal_hopf/linear_stability.hpp"
#include "nonlocal_hopf/model.hpp"

namespace nlhopf {

enum class Profile { homogeneous, nonhomogeneous };

/// A parameter value where the mode-`mode` eigenvalue pair crosses the
/// imaginary axis.
struct HopfPoint {
    double lambda = 0.0;
    int mode = 1;
    double omega = 0.0;           // sqrt(D_mode(lambda))
    double transversality = 0.0;  // d Re(mu) / d lambda
    Profile profile = Profile::nonhomogeneous;
    double b_equivalent = 0.0;
    /// True when every other mode is stable at `lambda`, i.e. the crossing
    /// changes the stability of the equilibrium.
    bool primary = true;
};

/// The two roots of T_n(lambda) = 0 on either side of the trace maximum.
struct HopfPair {
    double minus = 0.0;  // below the maximum of the trace curve
    double plus = 0.0;   // above it
};

struct EllThresholds {
    std::optional<double> ell_1;
    std::optional<double> ell_tilde_plus;
    std::optional<double> ell_tilde_minus;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return x > lo && x < hi; }
};

/// Branches of the stability/Hopf case analysis.  The prefix names the
/// parameter family, the suffix the arrangement of Hopf points.
enum class Regime {
    unclassified,
    // beta >= 1: the homogeneous mode is always stable.
    strong_stable,
    strong_mode1_window,
    // beta < 1 but c > max p3: no homogeneous Hopf points.
    weak_stable,
    weak_mode1_window,
    // beta < 1, c < max p3 and the upper mode-0 root above the p2 peak.
    mode0_high_mode0_window,
    mode0_high_interleaved,
    mode0_high_mode1_outer,
    // beta < 1, c < max p3 and the upper mode-0 root below the p2 peak.
    mode0_low_mode0_window,
    mode0_low_two_windows,
    mode0_low_interleaved,
    mode0_low_mode1_outer,
};

std::string to_string(Regime r);
std::string to_string(Profile p);

/// Mode n >= 2 crossings.  They happen while mode 1 is already unstable and
/// are reported without further analysis.
struct HigherModeCrossing {
    int mode = 2;
    double lambda = 0.0;
};

struct RegimeReport {
    Regime regime = Regime::unclassified;
    std::string note;
    bool degenerate_boundary = false;
    /// The strict ordering of Hopf points that the selected branch predicts.
    bool ordering_holds = true;
    std::vector<Interval> stable_intervals;
    std::vector<Interval> unstable_intervals;
    std::vector<HopfPoint> hopf_points;  // ascending in lambda
    std::vector<HigherModeCrossing> higher_mode_crossings;
    EllThresholds thresholds;
    CriticalPoints critical;
};

std::optional<HopfPair> hopf_points_mode1(const ModelParams& params);
std::optional<HopfPair> hopf_points_mode0(const ModelParams& params);
EllThresholds ell_thresholds(const ModelParams& params);

double transversality(int mode, double lambda, const ModelParams& params);
double transversality(const HopfPoint& point, const ModelParams& params);

HopfPoint make_hopf_point(int mode, double lambda, const ModelParams& params);

/// True when d1/d2 exceeds max p1, which keeps every D_n positive.
bool determinant_condition_holds(const ModelParams& params);

RegimeReport regime_classify(const ModelParams& params);

}  // namespace nlhopf
