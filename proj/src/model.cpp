#include "omsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace omsim::model {

namespace {

using fock::Complex;
using fock::DenseMatrix;
using fock::ModeMatrix;
using fock::SparseMatrix;

constexpr int kMaxSeriesOrder = 60;

void check_beam(int j) {
    if (j != 1 && j != 2) {
        throw std::out_of_range("model: nanobeam index " + std::to_string(j) +
                                " must be 1 or 2");
    }
}

int opt_mode(int beam) { return beam - 1; }
int mec_mode(int beam) { return beam + 1; }

long double factorial_ld(int n) {
    long double f = 1.0L;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

ModeMatrix diag_mode_matrix(int levels, const std::function<double(int)>& f) {
    ModeMatrix m = ModeMatrix::Zero(levels, levels);
    for (int n = 0; n < levels; ++n) m(n, n) = f(n);
    return m;
}

// e^{-x/2} 1F1(-n; p; x) with x = ratio^2 (exact dressing) or its
// second-order expansion (leading dressing).
double dressing(double ratio, int p, int n, FMode mode) {
    const double x = ratio * ratio;
    if (mode == FMode::ExactHypergeometric) {
        return std::exp(-0.5 * x) * confluent_1F1_neg_int(n, p, x);
    }
    return 1.0 - (0.5 + static_cast<double>(n) / p) * x;
}

struct Builder {
    const fock::HilbertSpace& space;
    std::array<ModeMatrix, fock::kNumModes> factors{};

    explicit Builder(const fock::HilbertSpace& sp) : space(sp) {}

    Builder& set(int mode, ModeMatrix m) {
        factors[static_cast<size_t>(mode)] = std::move(m);
        return *this;
    }
    fock::OperatorMatrix embed(bool hermitian = false) const {
        return fock::embed_mode_ops(space, factors, hermitian);
    }
};

SparseMatrix plus_adjoint(const SparseMatrix& m) {
    return m + SparseMatrix(m.adjoint());
}

}  // namespace

// --------------------------- Parameters --------------------------------

std::vector<std::string> ModelParams::validate() const {
    std::vector<std::string> warnings;
    for (int b = 0; b < 2; ++b) {
        const auto i = static_cast<size_t>(b);
        if (nu[i] <= 0.0) {
            throw std::invalid_argument("ModelParams: nu" + std::to_string(b + 1) +
                                        " must be positive");
        }
        if (g[i] < 0.0 || Omega[i] < 0.0 || kappa_opt[i] < 0.0 || kappa_mec[i] < 0.0) {
            throw std::invalid_argument("ModelParams: couplings, drives and loss rates must be nonnegative");
        }
        const double a = std::abs(alpha(b + 1));
        if (a >= 1.0) {
            throw std::invalid_argument("ModelParams: |g" + std::to_string(b + 1) +
                                        "/nu" + std::to_string(b + 1) + "| = " +
                                        std::to_string(a) +
                                        " >= 1, outside series validity");
        }
        if (a > 0.3) {
            warnings.push_back("g" + std::to_string(b + 1) + "/nu" + std::to_string(b + 1) +
                               " = " + std::to_string(a) +
                               " > 0.3; parametric series converges slowly");
        }
    }
    if (gamma < 0.0) throw std::invalid_argument("ModelParams: gamma must be nonnegative");
    return warnings;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::FullLab: return "full-lab";
        case Regime::Rotating: return "rotating";
        case Regime::PolaronSeries: return "polaron-series";
        case Regime::Nbs: return "nbs";
        case Regime::Omc: return "omc";
        case Regime::Oms: return "oms";
    }
    return "unknown";
}

Regime regime_from_name(const std::string& name) {
    if (name == "full-lab") return Regime::FullLab;
    if (name == "rotating") return Regime::Rotating;
    if (name == "polaron-series") return Regime::PolaronSeries;
    if (name == "nbs") return Regime::Nbs;
    if (name == "omc") return Regime::Omc;
    if (name == "oms") return Regime::Oms;
    throw std::invalid_argument("unknown regime '" + name + "'");
}

std::string f_mode_name(FMode f) {
    return f == FMode::ExactHypergeometric ? "exact" : "leading";
}

FMode f_mode_from_name(const std::string& name) {
    if (name == "exact") return FMode::ExactHypergeometric;
    if (name == "leading") return FMode::LeadingOrder;
    throw std::invalid_argument("unknown f_mode '" + name + "' (exact|leading)");
}

// --------------------------- Time-dependent operators -------------------

fock::OperatorMatrix TimeDependentHamiltonian::evaluate(double t) const {
    SparseMatrix h = static_term;
    for (const auto& term : terms) {
        const Complex ph = std::polar(1.0, term.frequency * t);
        h = h + SparseMatrix(ph * term.op) + SparseMatrix(std::conj(ph) * term.op_dag);
    }
    return fock::make_operator(space, std::move(h), true);
}

void TimeDependentHamiltonian::apply(double t, const fock::Vector& in,
                                     fock::Vector& out) const {
    out.noalias() = static_term * in;
    for (const auto& term : terms) {
        const Complex ph = std::polar(1.0, term.frequency * t);
        out.noalias() += ph * (term.op * in);
        out.noalias() += std::conj(ph) * (term.op_dag * in);
    }
}

DenseMatrix TimeDependentHamiltonian::apply_matrix(double t, const DenseMatrix& m) const {
    DenseMatrix out = static_term * m;
    for (const auto& term : terms) {
        const Complex ph = std::polar(1.0, term.frequency * t);
        out.noalias() += ph * (term.op * m);
        out.noalias() += std::conj(ph) * (term.op_dag * m);
    }
    return out;
}

TimeDependentHamiltonian TimeDependentHamiltonian::scaled(double factor) const {
    TimeDependentHamiltonian h;
    h.space = space;
    h.static_term = factor * static_term;
    h.terms.reserve(terms.size());
    for (const auto& term : terms) {
        h.terms.push_back({SparseMatrix(factor * term.op), SparseMatrix(factor * term.op_dag),
                           term.frequency * factor});
    }
    return h;
}

TimeDependentHamiltonian TimeDependentHamiltonian::from_static(const fock::OperatorMatrix& h) {
    return TimeDependentHamiltonian{h.space, h.data, {}};
}

// --------------------------- Special functions -------------------------

double confluent_1F1_neg_int(long n, int b, double x) {
    if (n < 0) throw std::invalid_argument("confluent_1F1_neg_int: n must be nonnegative");
    if (n > 1000000) throw std::invalid_argument("confluent_1F1_neg_int: n too large");
    if (b < 1) throw std::invalid_argument("confluent_1F1_neg_int: b must be a positive integer");
    if (x < 0.0) throw std::invalid_argument("confluent_1F1_neg_int: x must be nonnegative");
    long double term = 1.0L;
    long double sum = 1.0L;
    for (long k = 0; k < n; ++k) {
        term *= -static_cast<long double>(n - k) * x /
                ((static_cast<long double>(b) + k) * (k + 1));
        sum += term;
    }
    return static_cast<double>(sum);
}

// --------------------------- Auxiliary operator ------------------------

fock::OperatorMatrix aux_F(const ModelParams& params, const fock::HilbertSpace& space,
                           int j, int p, int q) {
    check_beam(j);
    if (p < 1) throw std::invalid_argument("aux_F: p must be >= 1");
    if (q < 0) throw std::invalid_argument("aux_F: q must be >= 0");
    const double ratio = params.g[static_cast<size_t>(j - 1)] / params.nu[static_cast<size_t>(j - 1)];
    const double prefactor = std::pow(-ratio, q);
    return fock::op_function_of_number(space, mec_mode(j), [=](int n) {
        return prefactor * dressing(ratio, p, n, FMode::ExactHypergeometric);
    });
}

fock::OperatorMatrix aux_F_leading(const ModelParams& params,
                                   const fock::HilbertSpace& space, int j, int p,
                                   int q) {
    check_beam(j);
    if (p < 1) throw std::invalid_argument("aux_F_leading: p must be >= 1");
    if (q < 0) throw std::invalid_argument("aux_F_leading: q must be >= 0");
    const double ratio = params.g[static_cast<size_t>(j - 1)] / params.nu[static_cast<size_t>(j - 1)];
    const double prefactor = std::pow(-ratio, q);
    return fock::op_function_of_number(space, mec_mode(j), [=](int n) {
        return prefactor * dressing(ratio, p, n, FMode::LeadingOrder);
    });
}

// --------------------------- Hamiltonians ------------------------------

TimeDependentHamiltonian full_hamiltonian_terms(const ModelParams& params,
                                                const fock::HilbertSpace& space) {
    SparseMatrix h(space.dim, space.dim);
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        h = h + SparseMatrix(params.omega[i] * fock::number_op(space, opt_mode(j)).data);
        h = h + SparseMatrix(params.nu[i] * fock::number_op(space, mec_mode(j)).data);
        if (params.g[i] != 0.0) {
            const int lo = space.levels(opt_mode(j));
            const int lm = space.levels(mec_mode(j));
            auto om_coupling = Builder(space)
                                   .set(opt_mode(j), diag_mode_matrix(lo, [](int n) { return double(n); }))
                                   .set(mec_mode(j), fock::mode_creation(lm) + fock::mode_annihilation(lm))
                                   .embed(true);
            h = h - SparseMatrix(params.g[i] * om_coupling.data);
        }
    }
    if (params.gamma != 0.0) {
        auto hop = Builder(space)
                       .set(opt_mode(1), fock::mode_creation(space.levels(0)))
                       .set(opt_mode(2), fock::mode_annihilation(space.levels(1)))
                       .embed();
        h = h + SparseMatrix(params.gamma * plus_adjoint(hop.data));
    }

    TimeDependentHamiltonian tdh{space, std::move(h), {}};
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        if (params.Omega[i] == 0.0) continue;
        const int lo = space.levels(opt_mode(j));
        auto quad = Builder(space)
                        .set(opt_mode(j), fock::mode_creation(lo) + fock::mode_annihilation(lo))
                        .embed(true);
        SparseMatrix op = 0.5 * params.Omega[i] * quad.data;
        tdh.terms.push_back({op, SparseMatrix(op.adjoint()), params.omega_d[i]});
    }
    return tdh;
}

fock::OperatorMatrix full_hamiltonian(const ModelParams& params,
                                      const fock::HilbertSpace& space, double t) {
    return full_hamiltonian_terms(params, space).evaluate(t);
}

TimeDependentHamiltonian rotating_frame_terms(const ModelParams& params,
                                              const fock::HilbertSpace& space) {
    SparseMatrix h(space.dim, space.dim);
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        h = h + SparseMatrix(params.nu[i] * fock::number_op(space, mec_mode(j)).data);
        if (params.g[i] != 0.0) {
            const int lo = space.levels(opt_mode(j));
            const int lm = space.levels(mec_mode(j));
            auto om_coupling = Builder(space)
                                   .set(opt_mode(j), diag_mode_matrix(lo, [](int n) { return double(n); }))
                                   .set(mec_mode(j), fock::mode_creation(lm) + fock::mode_annihilation(lm))
                                   .embed(true);
            h = h - SparseMatrix(params.g[i] * om_coupling.data);
        }
    }

    TimeDependentHamiltonian tdh{space, std::move(h), {}};
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        if (params.Omega[i] == 0.0) continue;
        auto raise = Builder(space)
                         .set(opt_mode(j), fock::mode_creation(space.levels(opt_mode(j))))
                         .embed();
        SparseMatrix op = 0.5 * params.Omega[i] * raise.data;
        tdh.terms.push_back({op, SparseMatrix(op.adjoint()), params.detuning(j)});
    }
    if (params.gamma != 0.0) {
        auto hop = Builder(space)
                       .set(opt_mode(1), fock::mode_creation(space.levels(0)))
                       .set(opt_mode(2), fock::mode_annihilation(space.levels(1)))
                       .embed();
        SparseMatrix op = params.gamma * hop.data;
        tdh.terms.push_back({op, SparseMatrix(op.adjoint()), params.delta()});
    }
    return tdh;
}

fock::OperatorMatrix rotating_frame_hamiltonian(const ModelParams& params,
                                                const fock::HilbertSpace& space,
                                                double t) {
    return rotating_frame_terms(params, space).evaluate(t);
}

TimeDependentHamiltonian polaron_series_terms(const ModelParams& params,
                                              const fock::HilbertSpace& space,
                                              int series_order) {
    if (series_order < 0) {
        throw std::invalid_argument("polaron_series_terms: series_order must be >= 0");
    }
    if (series_order > kMaxSeriesOrder) {
        throw std::invalid_argument("polaron_series_terms: series_order above " +
                                    std::to_string(kMaxSeriesOrder));
    }

    // Kerr term -sum_j g_j^2/nu_j (n_opt_j)^2
    SparseMatrix h(space.dim, space.dim);
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        const double kerr = params.g[i] * params.g[i] / params.nu[i];
        if (kerr != 0.0) {
            h = h - SparseMatrix(
                        fock::op_function_of_number(space, opt_mode(j), [=](int n) {
                            return kerr * double(n) * double(n);
                        }).data);
        }
    }

    TimeDependentHamiltonian tdh{space, std::move(h), {}};

    // Drive series: terms grouped by sideband index d = p - q share a phase.
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        if (params.Omega[i] == 0.0) continue;
        const double a = params.alpha(j);
        const double envelope = 0.5 * params.Omega[i] * std::exp(-0.5 * a * a);
        const int lm = space.levels(mec_mode(j));
        std::map<int, ModeMatrix> by_sideband;
        for (int p = 0; p <= series_order; ++p) {
            for (int q = 0; p + q <= series_order; ++q) {
                const long double coeff = ((q % 2 == 0) ? 1.0L : -1.0L) *
                                          std::pow((long double)a, p + q) /
                                          (factorial_ld(p) * factorial_ld(q));
                if (coeff == 0.0L) continue;
                auto [it, inserted] = by_sideband.try_emplace(p - q, ModeMatrix::Zero(lm, lm));
                it->second += static_cast<double>(coeff) * fock::mode_ladder_product(lm, p, q);
            }
        }
        for (auto& [d, mech] : by_sideband) {
            if (mech.cwiseAbs().maxCoeff() == 0.0) continue;
            auto term = Builder(space)
                            .set(opt_mode(j), fock::mode_creation(space.levels(opt_mode(j))))
                            .set(mec_mode(j), mech)
                            .embed();
            SparseMatrix op = envelope * term.data;
            tdh.terms.push_back({op, SparseMatrix(op.adjoint()),
                                 params.detuning(j) + d * params.nu[i]});
        }
    }

    // Optical-coupling series over (r, s, u, v), grouped by (r-s, u-v).
    if (params.gamma != 0.0) {
        const double a1 = params.alpha(1);
        const double a2 = params.alpha(2);
        const double envelope = params.gamma * std::exp(-0.5 * (a1 * a1 + a2 * a2));
        const int l1 = space.levels(fock::kMec1);
        const int l2 = space.levels(fock::kMec2);
        std::map<std::pair<int, int>, SparseMatrix> groups;
        for (int r = 0; r <= series_order; ++r) {
            for (int s = 0; r + s <= series_order; ++s) {
                for (int u = 0; r + s + u <= series_order; ++u) {
                    for (int v = 0; r + s + u + v <= series_order; ++v) {
                        const long double coeff =
                            (((s + u) % 2 == 0) ? 1.0L : -1.0L) *
                            std::pow((long double)a1, r + s) * std::pow((long double)a2, u + v) /
                            (factorial_ld(r) * factorial_ld(s) * factorial_ld(u) * factorial_ld(v));
                        if (coeff == 0.0L) continue;
                        auto term = Builder(space)
                                        .set(opt_mode(1), fock::mode_creation(space.levels(0)))
                                        .set(opt_mode(2), fock::mode_annihilation(space.levels(1)))
                                        .set(fock::kMec1, fock::mode_ladder_product(l1, r, s))
                                        .set(fock::kMec2, fock::mode_ladder_product(l2, u, v))
                                        .embed();
                        SparseMatrix contribution = static_cast<double>(coeff) * term.data;
                        auto key = std::make_pair(r - s, u - v);
                        auto it = groups.find(key);
                        if (it == groups.end()) {
                            groups.emplace(key, std::move(contribution));
                        } else {
                            it->second = it->second + contribution;
                        }
                    }
                }
            }
        }
        for (auto& [key, op_raw] : groups) {
            SparseMatrix op = envelope * op_raw;
            if (fock::max_abs_entry(op) == 0.0) continue;
            tdh.terms.push_back({op, SparseMatrix(op.adjoint()),
                                 params.delta() + key.first * params.nu[0] +
                                     key.second * params.nu[1]});
        }
    }
    return tdh;
}

fock::OperatorMatrix h_polaron_series(const ModelParams& params,
                                      const fock::HilbertSpace& space, double t,
                                      int series_order) {
    return polaron_series_terms(params, space, series_order).evaluate(t);
}

fock::OperatorMatrix h_nbs(const ModelParams& params, const fock::HilbertSpace& space,
                           FMode f_mode) {
    SparseMatrix h(space.dim, space.dim);
    std::array<ModeMatrix, 2> f_diag;
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        const double ratio = params.g[i] / params.nu[i];
        const double kerr = params.g[i] * params.g[i] / params.nu[i];
        h = h - SparseMatrix(fock::op_function_of_number(space, opt_mode(j), [=](int n) {
                                 return kerr * double(n) * double(n);
                             }).data);
        const int lm = space.levels(mec_mode(j));
        f_diag[i] = diag_mode_matrix(lm, [&](int n) { return dressing(ratio, 1, n, f_mode); });
        if (params.Omega[i] != 0.0) {
            const int lo = space.levels(opt_mode(j));
            auto drive = Builder(space)
                             .set(opt_mode(j), fock::mode_creation(lo) + fock::mode_annihilation(lo))
                             .set(mec_mode(j), f_diag[i])
                             .embed(true);
            h = h + SparseMatrix(0.5 * params.Omega[i] * drive.data);
        }
    }
    if (params.gamma != 0.0) {
        auto hop = Builder(space)
                       .set(opt_mode(1), fock::mode_creation(space.levels(0)))
                       .set(opt_mode(2), fock::mode_annihilation(space.levels(1)))
                       .set(fock::kMec1, f_diag[0])
                       .set(fock::kMec2, f_diag[1])
                       .embed();
        h = h + SparseMatrix(params.gamma * plus_adjoint(hop.data));
    }
    return fock::make_operator(space, std::move(h), true);
}

namespace {

// Shared Kerr + sideband-drive part of the red-sideband regime Hamiltonians.
// The mechanical dressing uses the magnitude convention (g/nu)^1 so that the
// leading matrix elements reduce to -Omega_eff and -Gamma_eff.
SparseMatrix red_sideband_common(const ModelParams& params, const fock::HilbertSpace& space,
                                 FMode f_mode, std::array<ModeMatrix, 2>& f_diag) {
    SparseMatrix h(space.dim, space.dim);
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        const double ratio = params.g[i] / params.nu[i];
        const double kerr = params.g[i] * params.g[i] / params.nu[i];
        h = h - SparseMatrix(fock::op_function_of_number(space, opt_mode(j), [=](int n) {
                                 return kerr * double(n) * double(n);
                             }).data);
        const int lm = space.levels(mec_mode(j));
        f_diag[i] = diag_mode_matrix(
            lm, [&](int n) { return ratio * dressing(ratio, 2, n, f_mode); });
        if (params.Omega[i] != 0.0) {
            // a_j^dag (F after b_j) + h.c.
            auto t = Builder(space)
                         .set(opt_mode(j), fock::mode_creation(space.levels(opt_mode(j))))
                         .set(mec_mode(j), ModeMatrix(f_diag[i] * fock::mode_annihilation(lm)))
                         .embed();
            h = h - SparseMatrix(0.5 * params.Omega[i] * plus_adjoint(t.data));
        }
    }
    return h;
}

}  // namespace

fock::OperatorMatrix h_omc(const ModelParams& params, const fock::HilbertSpace& space,
                           FMode f_mode) {
    std::array<ModeMatrix, 2> f_diag;
    SparseMatrix h = red_sideband_common(params, space, f_mode, f_diag);
    if (params.gamma != 0.0) {
        const int l1 = space.levels(fock::kMec1);
        const int l2 = space.levels(fock::kMec2);
        // a_1^dag a_2 b_1^dag F_1 F_2 b_2 + h.c.
        auto t = Builder(space)
                     .set(opt_mode(1), fock::mode_creation(space.levels(0)))
                     .set(opt_mode(2), fock::mode_annihilation(space.levels(1)))
                     .set(fock::kMec1, ModeMatrix(fock::mode_creation(l1) * f_diag[0]))
                     .set(fock::kMec2, ModeMatrix(f_diag[1] * fock::mode_annihilation(l2)))
                     .embed();
        h = h - SparseMatrix(params.gamma * plus_adjoint(t.data));
    }
    return fock::make_operator(space, std::move(h), true);
}

fock::OperatorMatrix h_oms(const ModelParams& params, const fock::HilbertSpace& space,
                           FMode f_mode) {
    std::array<ModeMatrix, 2> f_diag;
    SparseMatrix h = red_sideband_common(params, space, f_mode, f_diag);
    if (params.gamma != 0.0) {
        const int l1 = space.levels(fock::kMec1);
        const int l2 = space.levels(fock::kMec2);
        // a_1^dag a_2 b_1^dag b_2^dag F_1 F_2 + h.c.
        auto t = Builder(space)
                     .set(opt_mode(1), fock::mode_creation(space.levels(0)))
                     .set(opt_mode(2), fock::mode_annihilation(space.levels(1)))
                     .set(fock::kMec1, ModeMatrix(fock::mode_creation(l1) * f_diag[0]))
                     .set(fock::kMec2, ModeMatrix(fock::mode_creation(l2) * f_diag[1]))
                     .embed();
        h = h - SparseMatrix(params.gamma * plus_adjoint(t.data));
    }
    return fock::make_operator(space, std::move(h), true);
}

// --------------------------- Losses ------------------------------------

std::vector<CollapseOp> drive_collapse_ops(const ModelParams& params,
                                           const fock::HilbertSpace& space) {
    std::vector<CollapseOp> ops;
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        if (params.kappa_opt[i] > 0.0) {
            ops.push_back({fock::annihilation(space, opt_mode(j)), params.kappa_opt[i],
                           "a" + std::to_string(j)});
        }
    }
    for (int j = 1; j <= 2; ++j) {
        const auto i = static_cast<size_t>(j - 1);
        if (params.kappa_mec[i] > 0.0) {
            ops.push_back({fock::annihilation(space, mec_mode(j)), params.kappa_mec[i],
                           "b" + std::to_string(j)});
        }
    }
    return ops;
}

}  // namespace omsim::model
