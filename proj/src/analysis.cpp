#include "omsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace omsim::analysis {

namespace {

// dressing factor e^{-a^2/2} 1F1[-n; p; a^2] for one beam; a vanishing
// hypergeometric factor marks a physical decoupling point
double beam_dressing(const model::ModelParams& params, int beam, int p, int n,
                     const std::string& which) {
    const double a = params.alpha(beam);
    const double x = a * a;
    const double hyp = model::confluent_1F1_neg_int(n, p, x);
    if (std::abs(hyp) < 1e-10) {
        throw degenerate_coupling_error(which + ": 1F1[-" + std::to_string(n) + "; " +
                                        std::to_string(p) + "; (g" + std::to_string(beam) +
                                        "/nu" + std::to_string(beam) +
                                        ")^2] vanishes; dressed coupling is degenerate");
    }
    return std::exp(-0.5 * x) * hyp;
}

PeriodPrediction make_prediction(PeriodKind kind, double coupling_rad_per_sec,
                                 const model::ModelParams& params,
                                 std::array<int, 2> occupations,
                                 const std::string& which) {
    const double magnitude = std::abs(coupling_rad_per_sec);
    if (magnitude < 1e-300) {
        throw degenerate_coupling_error(which +
                                        ": dressed coupling vanishes at the requested "
                                        "mechanical occupations");
    }
    PeriodPrediction pred;
    pred.kind = kind;
    pred.value = 2.0 * M_PI * params.nu[0] / magnitude;  // [1/nu1]
    pred.occupations = occupations;
    pred.params = params;
    return pred;
}

}  // namespace

PeriodPrediction period_optical_bs(const model::ModelParams& params, int n1, int n2) {
    if (params.gamma <= 0.0) {
        throw undefined_period_error("period_optical_bs: undefined for gamma = 0");
    }
    if (n1 < 0 || n2 < 0) {
        throw std::invalid_argument("period_optical_bs: occupations must be nonnegative");
    }
    const double coupling =
        params.gamma * beam_dressing(params, 1, 1, n1, "period_optical_bs") *
        beam_dressing(params, 2, 1, n2, "period_optical_bs");
    return make_prediction(PeriodKind::OpticalExchange, coupling, params, {n1, n2},
                           "period_optical_bs");
}

PeriodPrediction period_om(const model::ModelParams& params, int j, int n) {
    if (j != 1 && j != 2) throw std::out_of_range("period_om: beam index must be 1 or 2");
    if (n < 0) throw std::invalid_argument("period_om: occupation must be nonnegative");
    const auto i = static_cast<size_t>(j - 1);
    if (params.Omega[i] * params.g[i] <= 0.0) {
        throw undefined_period_error("period_om: undefined for Omega_" + std::to_string(j) +
                                     " g_" + std::to_string(j) + " = 0");
    }
    const double ratio = params.g[i] / params.nu[i];
    const double coupling = 0.5 * params.Omega[i] * ratio * beam_dressing(params, j, 2, n, "period_om");
    return make_prediction(PeriodKind::OptomechExchange, coupling, params, {n, 0},
                           "period_om");
}

PeriodPrediction period_mec(const model::ModelParams& params, int n1, int n2) {
    if (params.gamma * params.g[0] * params.g[1] <= 0.0) {
        throw undefined_period_error("period_mec: undefined for gamma g1 g2 = 0");
    }
    if (n1 < 0 || n2 < 0) {
        throw std::invalid_argument("period_mec: occupations must be nonnegative");
    }
    const double coupling = params.gamma * (params.g[0] / params.nu[0]) *
                            (params.g[1] / params.nu[1]) *
                            beam_dressing(params, 1, 2, n1, "period_mec") *
                            beam_dressing(params, 2, 2, n2, "period_mec");
    return make_prediction(PeriodKind::MechanicalExchange, coupling, params, {n1, n2},
                           "period_mec");
}

EffectiveCouplings effective_couplings(const model::ModelParams& params) {
    EffectiveCouplings c;
    for (size_t j = 0; j < 2; ++j) {
        c.omega_eff[j] = params.Omega[j] * params.g[j] / (2.0 * params.nu[j]);
        c.kerr[j] = params.g[j] * params.g[j] / params.nu[j];
    }
    c.gamma_eff = params.gamma * params.g[0] * params.g[1] / (params.nu[0] * params.nu[1]);
    return c;
}

namespace {

struct Extremum {
    double t;
    double y;
    bool is_max;
};

// drops adjacent extremum pairs whose vertical span is below the threshold
// (ripple riding on a slower oscillation)
void prune_extrema(std::vector<Extremum>& ext, double threshold) {
    bool changed = true;
    while (changed && ext.size() >= 2) {
        changed = false;
        size_t best = 0;
        double best_span = std::numeric_limits<double>::max();
        for (size_t i = 0; i + 1 < ext.size(); ++i) {
            const double span = std::abs(ext[i].y - ext[i + 1].y);
            if (span < best_span) {
                best_span = span;
                best = i;
            }
        }
        if (best_span < threshold) {
            ext.erase(ext.begin() + static_cast<long>(best),
                      ext.begin() + static_cast<long>(best) + 2);
            changed = true;
        }
    }
}

}  // namespace

MeasuredPeriod extract_period(const std::vector<double>& times,
                              const std::vector<double>& values,
                              double min_prominence) {
    if (times.size() != values.size()) {
        throw std::invalid_argument("extract_period: times/values size mismatch");
    }
    std::vector<Extremum> extrema;
    for (size_t i = 1; i + 1 < values.size(); ++i) {
        const bool is_max = values[i] > values[i - 1] && values[i] > values[i + 1];
        const bool is_min = values[i] < values[i - 1] && values[i] < values[i + 1];
        if (!is_max && !is_min) continue;
        // quadratic interpolation through (i-1, i, i+1)
        const double y0 = values[i - 1], y1 = values[i], y2 = values[i + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        double shift = 0.0;
        if (denom != 0.0) shift = 0.5 * (y0 - y2) / denom;
        shift = std::clamp(shift, -0.5, 0.5);
        const double dt_left = times[i] - times[i - 1];
        const double dt_right = times[i + 1] - times[i];
        const double dt = shift >= 0.0 ? dt_right : dt_left;
        extrema.push_back({times[i] + shift * dt, values[i], is_max});
    }
    if (min_prominence > 0.0 && !values.empty()) {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        prune_extrema(extrema, min_prominence * (*hi - *lo));
    }
    std::vector<double> maxima;
    for (const auto& e : extrema) {
        if (e.is_max) maxima.push_back(e.t);
    }
    if (maxima.size() < 2) {
        throw insufficient_oscillation_error(
            "extract_period: fewer than two oscillation maxima in the series");
    }
    std::vector<double> spacings(maxima.size() - 1);
    for (size_t i = 0; i + 1 < maxima.size(); ++i) spacings[i] = maxima[i + 1] - maxima[i];
    const double mean =
        std::accumulate(spacings.begin(), spacings.end(), 0.0) / static_cast<double>(spacings.size());
    double var = 0.0;
    for (double s : spacings) var += (s - mean) * (s - mean);
    const double stddev =
        spacings.size() > 1 ? std::sqrt(var / static_cast<double>(spacings.size() - 1)) : 0.0;

    MeasuredPeriod out;
    out.value = mean;
    out.uncertainty = stddev;
    out.n_maxima = static_cast<int>(maxima.size());
    return out;
}

MeasuredPeriod extract_period(const dyn::Trajectory& traj, const std::string& observable,
                              double min_prominence) {
    return extract_period(traj.times, traj.series(observable), min_prominence);
}

std::vector<double> moving_average(const std::vector<double>& values, long window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    const long n = static_cast<long>(values.size());
    const long half = window / 2;
    std::vector<double> out(values.size());
    for (long i = 0; i < n; ++i) {
        const long lo = std::max(0L, i - half);
        const long hi = std::min(n - 1, i + half);
        double acc = 0.0;
        for (long k = lo; k <= hi; ++k) acc += values[static_cast<size_t>(k)];
        out[static_cast<size_t>(i)] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

// --------------------------- Gap-coupling fits -------------------------

namespace {

double gap_exponent(const GapCouplingFit& fit, double s) {
    if (fit.configuration == GapConfiguration::OnTop) return s / fit.decay_length_nm;
    double acc = 0.0;
    double power = s;
    for (int k = 0; k < 4; ++k) {
        acc += fit.poly[static_cast<size_t>(k)] * power;
        power *= s;
    }
    return acc;
}

}  // namespace

void validate_gap_fit(const GapCouplingFit& fit) {
    if (fit.amplitude <= 0.0) {
        throw std::invalid_argument("GapCouplingFit: amplitude must be positive");
    }
    if (fit.configuration == GapConfiguration::OnTop && fit.decay_length_nm <= 0.0) {
        throw std::invalid_argument("GapCouplingFit: decay length must be positive");
    }
    if (!(fit.s_max_nm > fit.s_min_nm)) {
        throw std::invalid_argument("GapCouplingFit: fitted range is empty");
    }
    double prev = gap_coupling(fit, fit.s_min_nm);
    for (int k = 1; k <= 100; ++k) {
        const double s = fit.s_min_nm + (fit.s_max_nm - fit.s_min_nm) * k / 100.0;
        const double value = gap_coupling(fit, s);
        if (!(value > 0.0) || value >= prev) {
            std::ostringstream msg;
            msg << "GapCouplingFit: coupling not positive and strictly decreasing at s = "
                << s << " nm";
            throw std::invalid_argument(msg.str());
        }
        prev = value;
    }
}

double gap_coupling(const GapCouplingFit& fit, double s_nm,
                    std::vector<std::string>* warnings) {
    if (warnings != nullptr && (s_nm < fit.s_min_nm || s_nm > fit.s_max_nm)) {
        std::ostringstream msg;
        msg << "gap_coupling: s = " << s_nm << " nm outside fitted range ["
            << fit.s_min_nm << ", " << fit.s_max_nm << "]";
        warnings->push_back(msg.str());
    }
    return fit.amplitude * std::exp(-gap_exponent(fit, s_nm));
}

GapCouplingFit default_on_top_fit() {
    // synthetic placeholder coefficients, not device-fitted values
    GapCouplingFit fit;
    fit.configuration = GapConfiguration::OnTop;
    fit.amplitude = 2.0 * M_PI * 4.0e12;
    fit.decay_length_nm = 75.0;
    fit.s_min_nm = 0.0;
    fit.s_max_nm = 400.0;
    return fit;
}

GapCouplingFit default_side_by_side_fit() {
    // synthetic placeholder coefficients, not device-fitted values
    GapCouplingFit fit;
    fit.configuration = GapConfiguration::SideBySide;
    fit.amplitude = 2.0 * M_PI * 8.0e11;
    fit.poly = {1.0 / 150.0, 2.0e-5, 1.0e-8, 5.0e-12};
    fit.s_min_nm = 0.0;
    fit.s_max_nm = 400.0;
    return fit;
}

// --------------------------- Convergence scans -------------------------

ScanReport convergence_scan(const ScanRunner& runner,
                            const std::vector<std::array<int, 4>>& cutoff_ladder,
                            const std::vector<int>& order_ladder,
                            const std::vector<std::string>& observable_names,
                            double tolerance, double leak_threshold) {
    if (cutoff_ladder.empty()) {
        throw std::invalid_argument("convergence_scan: empty cutoff ladder");
    }
    auto dim_of = [](const std::array<int, 4>& c) {
        long d = 1;
        for (int v : c) d *= v + 1;
        return d;
    };
    for (size_t i = 1; i < cutoff_ladder.size(); ++i) {
        if (dim_of(cutoff_ladder[i]) <= dim_of(cutoff_ladder[i - 1])) {
            throw std::invalid_argument("convergence_scan: cutoff ladder must be strictly increasing");
        }
    }
    for (size_t i = 1; i < order_ladder.size(); ++i) {
        if (order_ladder[i] <= order_ladder[i - 1]) {
            throw std::invalid_argument("convergence_scan: series-order ladder must be strictly increasing");
        }
    }

    ScanReport report;
    report.observable_names = observable_names;
    report.tolerance = tolerance;
    report.leak_threshold = leak_threshold;

    const std::vector<int> orders = order_ladder.empty() ? std::vector<int>{0} : order_ladder;
    for (int order : orders) {
        for (const auto& cutoffs : cutoff_ladder) {
            ScanRunResult result = runner(cutoffs, order);
            ScanRow row;
            row.cutoffs = cutoffs;
            row.series_order = order;
            row.final_observables = result.final_observables;
            row.top_fock = result.max_top_fock;
            row.leak_flag = result.max_top_fock > leak_threshold;
            if (!report.rows.empty()) {
                const auto& prev = report.rows.back().final_observables;
                double delta = 0.0;
                for (size_t k = 0; k < prev.size() && k < row.final_observables.size(); ++k) {
                    delta = std::max(delta, std::abs(prev[k] - row.final_observables[k]));
                }
                row.max_delta_vs_prev = delta;
            }
            report.rows.push_back(std::move(row));
        }
    }
    if (report.rows.size() >= 2) {
        const auto& last = report.rows.back();
        report.converged = last.max_delta_vs_prev < tolerance && !last.leak_flag;
    } else {
        report.converged = !report.rows.empty() && !report.rows.front().leak_flag;
    }
    return report;
}

}  // namespace omsim::analysis
