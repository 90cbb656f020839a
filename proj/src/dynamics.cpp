#include "omsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace omsim::dyn {

namespace {

using fock::Complex;
using fock::DenseMatrix;
using fock::SparseMatrix;
using fock::Vector;

// Dormand-Prince 5(4) coefficients (Hairer, Norsett & Wanner conventions).
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

using Rhs = std::function<void(double, const Vector&, Vector&)>;
using SampleSink = std::function<void(double, const Vector&)>;
using PostStep = std::function<void(Vector&)>;

// Adaptive DP5(4) with FSAL and the standard quartic dense-output
// interpolant; emits samples at the requested times from within each
// accepted step.
void integrate_dopri5(const Rhs& rhs, Vector& y, double t0, double t1, double rtol,
                      double atol, const std::vector<double>& samples,
                      const SampleSink& on_sample, const PostStep& post_step,
                      IntegratorStats& stats) {
    const long n = y.size();
    double t = t0;
    size_t next_sample = 0;

    while (next_sample < samples.size() && samples[next_sample] <= t0) {
        on_sample(samples[next_sample], y);
        ++next_sample;
    }
    if (t1 <= t0) return;

    Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y_stage(n), y_new(n), err_vec(n);
    rhs(t, y, k1);
    stats.rhs_evaluations += 1;

    double h = std::min((t1 - t0) / 100.0, 1.0 / std::max(1e-8, k1.norm() / std::max(1.0, y.norm())));
    h = std::max(h, 1e-12 * (t1 - t0));
    int consecutive_rejects = 0;

    while (t < t1) {
        h = std::min(h, t1 - t);
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
        if (h < h_min) {
            throw integrator_error("integrator: step size underflow at t = " + std::to_string(t), t);
        }

        y_stage = y + h * (a21 * k1);
        rhs(t + h / 5.0, y_stage, k2);
        y_stage = y + h * (a31 * k1 + a32 * k2);
        rhs(t + 3.0 * h / 10.0, y_stage, k3);
        y_stage = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + 4.0 * h / 5.0, y_stage, k4);
        y_stage = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + 8.0 * h / 9.0, y_stage, k5);
        y_stage = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, y_stage, k6);
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, y_new, k7);
        stats.rhs_evaluations += 6;

        err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double err_sq = 0.0;
        for (long i = 0; i < n; ++i) {
            const double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
            const double r = std::abs(err_vec(i)) / sc;
            err_sq += r * r;
        }
        double err = std::sqrt(err_sq / static_cast<double>(n));
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            // dense output for samples inside (t, t+h]
            if (next_sample < samples.size() && samples[next_sample] <= t + h + 1e-14 * std::abs(t + h)) {
                Vector rcont2 = y_new - y;
                Vector rcont3 = h * k1 - rcont2;
                Vector rcont4 = rcont2 - h * k7 - rcont3;
                Vector rcont5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (next_sample < samples.size() &&
                       samples[next_sample] <= t + h + 1e-14 * std::abs(t + h)) {
                    const double theta = (samples[next_sample] - t) / h;
                    if (theta >= 1.0 - 1e-12) {
                        on_sample(samples[next_sample], y_new);
                    } else {
                        Vector interp =
                            y + theta * (rcont2 +
                                         (1.0 - theta) *
                                             (rcont3 + theta * (rcont4 + (1.0 - theta) * rcont5)));
                        on_sample(samples[next_sample], interp);
                    }
                    ++next_sample;
                }
            }
            t += h;
            y.swap(y_new);
            if (post_step) {
                post_step(y);
                rhs(t, y, k1);
                stats.rhs_evaluations += 1;
            } else {
                k1.swap(k7);
            }
            stats.steps_accepted += 1;
            consecutive_rejects = 0;
            const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            h *= factor;
        } else {
            stats.steps_rejected += 1;
            if (++consecutive_rejects > 60) {
                throw integrator_error(
                    "integrator: tolerance unachievable near t = " + std::to_string(t) +
                        " (60 consecutive step rejections)",
                    t);
            }
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }
}

struct TopFockMasks {
    std::array<std::vector<long>, fock::kNumModes> indices;

    explicit TopFockMasks(const fock::HilbertSpace& sp) {
        for (int m = 0; m < fock::kNumModes; ++m) {
            if (sp.cutoffs[static_cast<size_t>(m)] == 0) continue;  // frozen mode
            for (long i = 0; i < sp.dim; ++i) {
                if (sp.occupation(i, m) == sp.cutoffs[static_cast<size_t>(m)]) {
                    indices[static_cast<size_t>(m)].push_back(i);
                }
            }
        }
    }
};

void record_top_fock(const TopFockMasks& masks, const std::function<double(long)>& population,
                     IntegratorStats& stats) {
    for (int m = 0; m < fock::kNumModes; ++m) {
        double p = 0.0;
        for (long i : masks.indices[static_cast<size_t>(m)]) p += population(i);
        stats.max_top_fock[static_cast<size_t>(m)] =
            std::max(stats.max_top_fock[static_cast<size_t>(m)], p);
    }
}

Complex trace_product(const SparseMatrix& a, const DenseMatrix& rho) {
    Complex acc(0.0);
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
            acc += it.value() * rho(it.col(), it.row());
        }
    }
    return acc;
}

}  // namespace

void TimeGrid::validate() const {
    if (!(t1 > t0)) throw std::invalid_argument("TimeGrid: t1 must be greater than t0");
    if (n_samples < 2) throw std::invalid_argument("TimeGrid: n_samples must be >= 2");
    if (!(tolerance > 0.0) || tolerance > 1e-3) {
        throw std::invalid_argument("TimeGrid: tolerance must lie in (0, 1e-3]");
    }
}

std::vector<double> TimeGrid::sample_times() const {
    std::vector<double> times(static_cast<size_t>(n_samples));
    for (long i = 0; i < n_samples; ++i) {
        times[static_cast<size_t>(i)] =
            t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    }
    times.back() = t1;
    return times;
}

const std::vector<double>& Trajectory::series(const std::string& name) const {
    for (size_t i = 0; i < observable_names.size(); ++i) {
        if (observable_names[i] == name) return observables[i];
    }
    throw std::out_of_range("Trajectory: no observable named '" + name + "'");
}

ObservableSet standard_observables(const fock::HilbertSpace& space) {
    ObservableSet obs;
    obs.emplace_back("n_opt1", fock::number_op(space, fock::kOpt1));
    obs.emplace_back("n_opt2", fock::number_op(space, fock::kOpt2));
    obs.emplace_back("n_mec1", fock::number_op(space, fock::kMec1));
    obs.emplace_back("n_mec2", fock::number_op(space, fock::kMec2));
    return obs;
}

Trajectory propagate_schrodinger(const model::TimeDependentHamiltonian& h,
                                 const fock::QuantumState& psi0, const TimeGrid& grid,
                                 const ObservableSet& observables) {
    grid.validate();
    if (psi0.kind != fock::StateKind::PureVector) {
        throw std::invalid_argument("propagate_schrodinger: pure-state input required");
    }
    if (psi0.space != h.space) {
        throw fock::dimension_mismatch_error("propagate_schrodinger: state/Hamiltonian space mismatch");
    }
    for (const auto& [name, op] : observables) {
        if (op.space != psi0.space) {
            throw fock::dimension_mismatch_error("propagate_schrodinger: observable '" + name +
                                                 "' on a different space");
        }
    }

    Trajectory traj;
    traj.frame = psi0.frame;
    traj.times = grid.sample_times();
    for (const auto& [name, op] : observables) traj.observable_names.push_back(name);
    traj.observable_names.push_back("norm");
    traj.observables.assign(traj.observable_names.size(), {});
    for (auto& col : traj.observables) col.reserve(traj.times.size());

    const TopFockMasks masks(psi0.space);
    double max_imag = 0.0;

    auto sink = [&](double /*t*/, const Vector& psi) {
        fock::QuantumState s = psi0;
        s.vec = psi;
        for (size_t k = 0; k < observables.size(); ++k) {
            const Complex v = s.vec.dot(observables[k].second.data * s.vec);
            max_imag = std::max(max_imag, std::abs(v.imag()));
            traj.observables[k].push_back(v.real());
        }
        const double norm = psi.norm();
        traj.observables.back().push_back(norm);
        traj.stats.norm_or_trace_drift =
            std::max(traj.stats.norm_or_trace_drift, std::abs(norm - 1.0));
        record_top_fock(masks, [&](long i) { return std::norm(psi(i)); }, traj.stats);
    };

    Vector y = psi0.vec;
    Vector scratch(y.size());
    auto rhs = [&](double t, const Vector& v, Vector& out) {
        h.apply(t, v, out);
        out *= Complex(0.0, -1.0);
    };

    try {
        integrate_dopri5(rhs, y, grid.t0, grid.t1, grid.tolerance, grid.tolerance * 1e-2,
                         grid.sample_times(), sink, nullptr, traj.stats);
    } catch (const integrator_error&) {
        throw;
    }
    (void)scratch;

    if (max_imag > 1e-8) {
        traj.stats.warnings.push_back("observable imaginary part up to " +
                                      std::to_string(max_imag));
    }
    return traj;
}

Trajectory propagate_lindblad(const model::TimeDependentHamiltonian& h,
                              const std::vector<model::CollapseOp>& collapse,
                              const fock::QuantumState& rho0, const TimeGrid& grid,
                              const ObservableSet& observables) {
    grid.validate();
    fock::QuantumState initial = rho0.to_density();
    if (initial.space != h.space) {
        throw fock::dimension_mismatch_error("propagate_lindblad: state/Hamiltonian space mismatch");
    }
    for (const auto& c : collapse) {
        if (c.rate < 0.0) {
            throw std::invalid_argument("propagate_lindblad: negative collapse rate for '" +
                                        c.label + "'");
        }
        if (c.op.space != initial.space) {
            throw fock::dimension_mismatch_error("propagate_lindblad: collapse operator '" +
                                                 c.label + "' on a different space");
        }
    }
    for (const auto& [name, op] : observables) {
        if (op.space != initial.space) {
            throw fock::dimension_mismatch_error("propagate_lindblad: observable '" + name +
                                                 "' on a different space");
        }
    }

    const long dim = initial.space.dim;

    struct Dissipator {
        SparseMatrix l;
        SparseMatrix ldag_l_half;  // rate/2 * L^dag L
        double rate;
    };
    std::vector<Dissipator> dis;
    for (const auto& c : collapse) {
        if (c.rate == 0.0) continue;
        SparseMatrix ldl = SparseMatrix(c.op.data.adjoint()) * c.op.data;
        dis.push_back({c.op.data, SparseMatrix(0.5 * c.rate * ldl), c.rate});
    }

    Trajectory traj;
    traj.frame = initial.frame;
    traj.times = grid.sample_times();
    for (const auto& [name, op] : observables) traj.observable_names.push_back(name);
    traj.observable_names.push_back("trace");
    traj.observables.assign(traj.observable_names.size(), {});

    const TopFockMasks masks(initial.space);
    double max_imag = 0.0;

    // positivity spot-check times: ~8 evenly spaced samples plus the last
    std::vector<size_t> check_at;
    const size_t stride = std::max<size_t>(1, traj.times.size() / 8);
    for (size_t i = 0; i < traj.times.size(); i += stride) check_at.push_back(i);
    if (check_at.back() != traj.times.size() - 1) check_at.push_back(traj.times.size() - 1);
    size_t sample_counter = 0;
    traj.stats.min_eigenvalue = 0.0;

    auto sink = [&](double t, const Vector& flat) {
        Eigen::Map<const DenseMatrix> rho(flat.data(), dim, dim);
        for (size_t k = 0; k < observables.size(); ++k) {
            const Complex v = trace_product(observables[k].second.data, rho);
            max_imag = std::max(max_imag, std::abs(v.imag()));
            traj.observables[k].push_back(v.real());
        }
        const double trace = rho.trace().real();
        traj.observables.back().push_back(trace);
        traj.stats.norm_or_trace_drift =
            std::max(traj.stats.norm_or_trace_drift, std::abs(trace - 1.0));
        record_top_fock(masks, [&](long i) { return rho(i, i).real(); }, traj.stats);

        if (dim <= 400 &&
            std::find(check_at.begin(), check_at.end(), sample_counter) != check_at.end()) {
            Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho, Eigen::EigenvaluesOnly);
            const double min_eig = es.eigenvalues().minCoeff();
            traj.stats.min_eigenvalue = std::min(traj.stats.min_eigenvalue, min_eig);
            if (min_eig < -1e-6) {
                traj.stats.warnings.push_back("density matrix eigenvalue " +
                                              std::to_string(min_eig) + " at t = " +
                                              std::to_string(t));
            }
        }
        ++sample_counter;
    };

    auto rhs = [&](double t, const Vector& flat, Vector& out) {
        Eigen::Map<const DenseMatrix> rho(flat.data(), dim, dim);
        DenseMatrix h_rho = h.apply_matrix(t, rho);
        DenseMatrix drho = Complex(0.0, -1.0) * (h_rho - h_rho.adjoint());
        for (const auto& d : dis) {
            DenseMatrix l_rho = d.l * rho;
            drho.noalias() += d.rate * (l_rho * d.l.adjoint());
            DenseMatrix anti = d.ldag_l_half * rho;
            drho -= anti;
            drho -= anti.adjoint();
        }
        out = Eigen::Map<const Vector>(drho.data(), dim * dim);
    };

    auto symmetrize = [&](Vector& flat) {
        Eigen::Map<DenseMatrix> rho(flat.data(), dim, dim);
        DenseMatrix sym = 0.5 * (rho + rho.adjoint());
        rho = sym;
    };

    Vector y = Eigen::Map<const Vector>(initial.rho.data(), dim * dim);
    integrate_dopri5(rhs, y, grid.t0, grid.t1, grid.tolerance, grid.tolerance * 1e-2,
                     grid.sample_times(), sink, symmetrize, traj.stats);

    if (max_imag > 1e-8) {
        traj.stats.warnings.push_back("observable imaginary part up to " +
                                      std::to_string(max_imag));
    }
    return traj;
}

fock::QuantumState build_initial_state(const fock::HilbertSpace& space,
                                       const std::vector<StateTerm>& terms,
                                       fock::Frame frame) {
    Vector v = Vector::Zero(space.dim);
    for (const auto& term : terms) {
        for (int m = 0; m < fock::kNumModes; ++m) {
            const int occ = term.occupations[static_cast<size_t>(m)];
            if (occ < 0 || occ > space.cutoffs[static_cast<size_t>(m)]) {
                std::ostringstream msg;
                msg << "build_initial_state: occupation " << occ << " of mode " << m
                    << " exceeds cutoff " << space.cutoffs[static_cast<size_t>(m)];
                throw std::invalid_argument(msg.str());
            }
        }
        v(space.index_of(term.occupations)) += term.amplitude;
    }
    const double norm = v.norm();
    if (norm < 1e-12) {
        throw std::invalid_argument("build_initial_state: state specification has zero norm");
    }
    v /= norm;
    return fock::QuantumState::pure(space, std::move(v), frame);
}

}  // namespace omsim::dyn
