// analysis.hpp — Closed-form excitation-exchange period predictions, period
// extraction from simulated trajectories, coupling-vs-gap evaluators, and
// cutoff/series-order convergence scans.
//
// Period values are expressed in 1/nu1 time units to match trajectory grids.

#pragma once

#include "omsim/dynamics.hpp"
#include "omsim/model.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace omsim::analysis {

class undefined_period_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class degenerate_coupling_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class insufficient_oscillation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --------------------------- Period predictions ------------------------

enum class PeriodKind { OpticalExchange, OptomechExchange, MechanicalExchange };

struct PeriodPrediction {
    PeriodKind kind;
    double value = 0.0;                    // [1/nu1]
    std::array<int, 2> occupations{};      // mechanical occupations entering the dressing
    model::ModelParams params;             // snapshot of the inputs
};

// Optical beam-splitter exchange period
// 2*pi / { gamma e^{-a1^2/2} e^{-a2^2/2} 1F1[-n1;1;a1^2] 1F1[-n2;1;a2^2] }.
PeriodPrediction period_optical_bs(const model::ModelParams& params, int n1, int n2);

// Optomechanical exchange period of beam j (1|2), magnitude convention:
// 2*pi / { (Omega_j/2)(g_j/nu_j) e^{-a^2/2} 1F1[-n;2;a^2] }.
PeriodPrediction period_om(const model::ModelParams& params, int j, int n);

// Mechanical exchange period, magnitude convention:
// 2*pi / { gamma (g1 g2/(nu1 nu2)) e^{-a1^2/2} e^{-a2^2/2} 1F1[-n1;2;a1^2] 1F1[-n2;2;a2^2] }.
PeriodPrediction period_mec(const model::ModelParams& params, int n1, int n2);

struct EffectiveCouplings {
    std::array<double, 2> omega_eff{};  // Omega_j g_j / (2 nu_j)
    double gamma_eff = 0.0;             // gamma g1 g2 / (nu1 nu2)
    std::array<double, 2> kerr{};       // g_j^2 / nu_j
};

EffectiveCouplings effective_couplings(const model::ModelParams& params);

// --------------------------- Period extraction -------------------------

struct MeasuredPeriod {
    double value = 0.0;        // mean spacing of interpolated maxima
    double uncertainty = 0.0;  // stddev of the spacings (0 with a single spacing)
    int n_maxima = 0;
};

// Period from the mean spacing of quadratically interpolated local maxima.
// min_prominence (fraction of the series range) prunes ripple extrema:
// adjacent max/min pairs closer than the threshold are discarded. Throws
// insufficient_oscillation_error with fewer than two surviving maxima.
MeasuredPeriod extract_period(const std::vector<double>& times,
                              const std::vector<double>& values,
                              double min_prominence = 0.0);
MeasuredPeriod extract_period(const dyn::Trajectory& traj, const std::string& observable,
                              double min_prominence = 0.0);

// Centered moving average (window clamped at the series edges); used to
// expose slow envelopes under a fast carrier.
std::vector<double> moving_average(const std::vector<double>& values, long window);

// --------------------------- Gap-coupling fits -------------------------

enum class GapConfiguration { OnTop, SideBySide };

// Decay-law fit of the evanescent coupling vs nanobeam gap. On-top:
// A exp(-s/l). Side-by-side: A exp(-(c1 s + c2 s^2 + c3 s^3 + c4 s^4)).
// Coefficients are user inputs; the shipped defaults are synthetic
// placeholders, not fitted device values.
struct GapCouplingFit {
    GapConfiguration configuration = GapConfiguration::OnTop;
    double amplitude = 0.0;           // rad/s at s = 0
    double decay_length_nm = 1.0;     // on-top only
    std::array<double, 4> poly{};     // side-by-side c1..c4 [nm^-1 .. nm^-4]
    double s_min_nm = 0.0;
    double s_max_nm = 0.0;
};

// Throws std::invalid_argument when the fit is not positive and strictly
// decreasing over [s_min, s_max].
void validate_gap_fit(const GapCouplingFit& fit);

double gap_coupling(const GapCouplingFit& fit, double s_nm,
                    std::vector<std::string>* warnings = nullptr);

GapCouplingFit default_on_top_fit();
GapCouplingFit default_side_by_side_fit();

// --------------------------- Convergence scans -------------------------

struct ScanRunResult {
    std::vector<double> final_observables;
    double max_top_fock = 0.0;
};

using ScanRunner =
    std::function<ScanRunResult(const std::array<int, 4>& cutoffs, int series_order)>;

struct ScanRow {
    std::array<int, 4> cutoffs{};
    int series_order = 0;
    std::vector<double> final_observables;
    double max_delta_vs_prev = 0.0;
    double top_fock = 0.0;
    bool leak_flag = false;
};

struct ScanReport {
    std::vector<std::string> observable_names;
    std::vector<ScanRow> rows;
    double tolerance = 0.0;
    double leak_threshold = 0.0;
    bool converged = false;
};

// Runs the scenario at every rung of the ladders (orders outer, cutoffs
// inner); converged when the last two rows differ by less than `tolerance`
// in every observable. Rows whose top-Fock population exceeds
// `leak_threshold` are flagged as non-converged truncations.
ScanReport convergence_scan(const ScanRunner& runner,
                            const std::vector<std::array<int, 4>>& cutoff_ladder,
                            const std::vector<int>& order_ladder,
                            const std::vector<std::string>& observable_names,
                            double tolerance, double leak_threshold = 1e-6);

}  // namespace omsim::analysis
