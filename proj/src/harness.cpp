#include "sll/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sll/errors.hpp"
#include "sll/limits.hpp"
#include "sll/parallel.hpp"
#include "sll/splitting.hpp"

namespace sll {

namespace {

unsigned thread_count(const RunOptions& opts) {
    return opts.threads == 0 ? default_threads() : opts.threads;
}

FullParams params_for(const ExperimentConfig& cfg, double eps, double t_end) {
    FullParams p;
    p.eps = eps;
    p.alpha = cfg.alpha;
    p.dt = cfg.dt_full(eps);
    p.t_end = t_end;
    p.r = cfg.r;
    return p;
}

NoiseDriver driver_for(const NoiseModel& model, const ExperimentConfig& cfg, std::size_t replica) {
    return {&model, cfg.seed, static_cast<std::uint64_t>(replica), cfg.master_dt()};
}

std::size_t index_of(double t, double dt) { return static_cast<std::size_t>(std::llround(t / dt)); }

/// Runs f and tags a blow-up with the run that produced it.
template <class F>
auto tagged(double eps, std::uint64_t seed, std::size_t replica, F&& f) {
    try {
        return f();
    } catch (const BlowUpError& e) {
        throw BlowUpError(e.time(), "eps = " + std::to_string(eps) + ", seed = " +
                                        std::to_string(seed) + ", replica = " +
                                        std::to_string(replica) + ": " + e.what());
    }
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t k) {
    std::vector<double> out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out[r] = rows[r][k];
    return out;
}

double max_of(const std::vector<double>& x) {
    return x.empty() ? 0.0 : *std::max_element(x.begin(), x.end());
}

}  // namespace

bool ExperimentResult::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return !c.gating || c.pass; });
}

FullState make_initial(InitialData kind, double scale, const Grid1D& grid) {
    FullState s = FullState::zero(grid);
    switch (kind) {
        case InitialData::zero: break;
        case InitialData::cosine:
            s.u = grid.sample([&](double x) { return scale * std::cos(std::numbers::pi * x); });
            break;
        case InitialData::sine:
            s.u = grid.sample([&](double x) { return scale * std::sin(std::numbers::pi * x); });
            break;
        case InitialData::constant:
            s.u = grid.sample([&](double) { return scale; });
            break;
    }
    return s;
}

double probe_value(std::span<const double> u, double x, const Grid1D& grid) {
    grid.check(u);
    const double pos = x / grid.h() - 1.0;  // fractional node index
    if (pos <= 0.0) return u.front();
    const auto last = static_cast<double>(u.size() - 1);
    if (pos >= last) return u.back();
    const auto i = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * u[i] + w * u[i + 1];
}

// ---------------------------------------------------------------- converge

double slope_threshold(double alpha) { return alpha < 1.0 ? 0.8 * alpha - 0.05 : 0.8; }

ConvergenceReport run_convergence(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const Grid1D grid(cfg.n_interior);
    const NoiseModel model(grid, cfg.interior_noise(), cfg.boundary_noise());
    const bool wave = cfg.alpha > 1.0;
    const FullState init = make_initial(cfg.initial_data(), cfg.initial_scale, grid);

    ConvergenceReport rep;
    rep.alpha = cfg.alpha;
    rep.limit = wave ? "wave" : "parabolic";
    rep.threshold = slope_threshold(cfg.alpha);

    for (double eps : cfg.eps_ladder) {
        const FullParams p = params_for(cfg, eps, cfg.t_end);
        const double dt_lim = wave ? p.dt : cfg.dt_limit;
        const double dt_c = std::max(p.dt, dt_lim);
        const std::size_t coarse = index_of(cfg.t_end, dt_c);

        std::vector<FullState> wave_ref;
        if (wave) wave_ref = simulate_full(p, init, grid, NoiseDriver{}).states;

        auto errors = parallel_map<std::vector<double>>(
            cfg.replica_count(), thread_count(opts), [&](std::size_t rep_id) {
                return tagged(eps, cfg.seed, rep_id, [&] {
                    const auto drv = driver_for(model, cfg, rep_id);
                    const auto full = simulate_full(p, init, grid, drv).states;
                    std::vector<ParabolicState> para;
                    if (!wave) {
                        para = simulate_parabolic({init.u, init.delta, init.t}, eps, cfg.alpha,
                                                  dt_lim, cfg.t_end, grid, drv);
                    }
                    double su = 0.0, sd = 0.0;
                    InteriorField diff(grid.size());
                    for (std::size_t k = 1; k <= coarse; ++k) {
                        const double t = static_cast<double>(k) * dt_c;
                        const FullState& a = full[index_of(t, p.dt)];
                        const std::size_t j = index_of(t, dt_lim);
                        const InteriorField& ub = wave ? wave_ref[j].u : para[j].u;
                        const BoundaryField& db = wave ? wave_ref[j].delta : para[j].delta;
                        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a.u[i] - ub[i];
                        su += dt_c * squared_norm(diff, grid);
                        sd += dt_c * squared_norm(a.delta - db);
                    }
                    return std::vector<double>{std::sqrt(su), std::sqrt(sd)};
                });
            });
        rep.rows.push_back({eps, mean_se(column(errors, 0)), mean_se(column(errors, 1))});
    }

    rep.strictly_decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (!(rep.rows[i].err_u.mean < rep.rows[i - 1].err_u.mean)) rep.strictly_decreasing = false;
    }
    const bool positive = std::all_of(rep.rows.begin(), rep.rows.end(),
                                      [](const ConvergenceRow& r) { return r.err_u.mean > 0.0; });
    if (rep.rows.size() >= 2 && positive) {
        std::vector<double> x, y;
        for (const auto& r : rep.rows) {
            x.push_back(std::log(r.eps));
            y.push_back(std::log(r.err_u.mean));
        }
        rep.fit = fit_line(x, y);
    }
    rep.pass = rep.fit && rep.fit->slope >= rep.threshold && rep.strictly_decreasing;
    return rep;
}

ExperimentResult run_converge(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto rep = run_convergence(cfg, opts);
    ExperimentResult res;
    res.experiment = Experiment::converge;
    CsvTable t{"converge.csv", {"eps", "err_u_mean", "err_u_se", "err_delta_mean", "err_delta_se"}, {}};
    for (const auto& r : rep.rows) {
        t.rows.push_back({r.eps, r.err_u.mean, r.err_u.se, r.err_delta.mean, r.err_delta.se});
    }
    res.tables.push_back(std::move(t));

    Check slope{"slope", false, std::nan(""), rep.threshold, 0.0, true, ""};
    if (rep.fit) {
        slope.measured = rep.fit->slope;
        slope.pass = rep.fit->slope >= rep.threshold;
        slope.detail = "log-log slope of err_u versus eps, one-sided threshold";
    } else {
        slope.detail = "slope undefined: fewer than two ladder points or a zero error";
    }
    res.checks.push_back(slope);
    res.checks.push_back({"errors_strictly_decreasing", rep.strictly_decreasing,
                          rep.strictly_decreasing ? 1.0 : 0.0, 1.0, 0.0, true,
                          "err_u decreases along the eps ladder"});

    auto& s = res.summary;
    s["alpha"] = rep.alpha;
    s["limit"] = rep.limit;
    s["slope_defined"] = rep.fit.has_value();
    s["slope"] = rep.fit ? nlohmann::json(rep.fit->slope) : nlohmann::json(nullptr);
    s["intercept"] = rep.fit ? nlohmann::json(rep.fit->intercept) : nlohmann::json(nullptr);
    s["r2"] = rep.fit ? nlohmann::json(rep.fit->r2) : nlohmann::json(nullptr);
    s["threshold"] = rep.threshold;
    s["pass_slope"] = res.checks[0].pass;
    s["pass_monotone"] = rep.strictly_decreasing;
    s["coupling"] = "pathwise: full and limit runs share the Brownian increments";
    return res;
}

// ------------------------------------------------------------ energy audit

ExperimentResult run_energy_audit(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const Grid1D grid(cfg.n_interior);
    const NoiseModel model(grid, cfg.interior_noise(), cfg.boundary_noise());
    ExperimentResult res;
    res.experiment = Experiment::energy_audit;
    CsvTable mc{"energy_audit.csv",
                {"eps", "t", "residual_mean", "residual_se", "pathwise_mean", "pathwise_se"}, {}};
    CsvTable refine{"energy_refinement.csv", {"eps", "dt", "max_abs_residual"}, {}};
    const InitialData smooth =
        cfg.initial_data() == InitialData::zero ? InitialData::cosine : cfg.initial_data();

    for (double eps : cfg.eps_ladder) {
        const FullParams p = params_for(cfg, eps, cfg.t_end);
        const std::string tag = "eps=" + std::to_string(eps);

        // Noise-free, zero data.
        {
            const auto tr = simulate_full(p, FullState::zero(grid), grid, NoiseDriver{});
            const auto r = energy_residual(tr.ledger);
            double m = 0.0;
            for (double x : r) m = std::max(m, std::abs(x));
            res.checks.push_back({"zero_noise_residual " + tag, m <= 1e-10, m, 1e-10, 0.0, true,
                                  "max |residual| over the run"});
        }

        // Noisy ensemble; residual at T/4, T/2, T.
        const std::vector<std::size_t> probes{p.steps() / 4, p.steps() / 2, p.steps()};
        const FullState init = make_initial(cfg.initial_data(), cfg.initial_scale, grid);
        auto per_rep = parallel_map<std::vector<double>>(
            cfg.replica_count(), thread_count(opts), [&](std::size_t rep_id) {
                return tagged(eps, cfg.seed, rep_id, [&] {
                    SimulateOptions so;
                    so.keep_states = false;
                    const auto tr = simulate_full(p, init, grid, driver_for(model, cfg, rep_id), so);
                    const auto r = energy_residual(tr.ledger);
                    std::vector<double> out;
                    for (std::size_t k : probes) {
                        const auto& rec = tr.ledger[k];
                        out.push_back(r[k] + rec.stochastic[0] + rec.stochastic[1]);
                        out.push_back(r[k]);
                    }
                    return out;
                });
            });
        for (std::size_t j = 0; j < probes.size(); ++j) {
            const double t = static_cast<double>(probes[j]) * p.dt;
            const auto e = mean_se(column(per_rep, 2 * j));
            const auto w = mean_se(column(per_rep, 2 * j + 1));
            mc.rows.push_back({eps, t, e.mean, e.se, w.mean, w.se});
            const bool ok = std::abs(e.mean) <= 3.0 * e.se || (e.se == 0.0 && std::abs(e.mean) <= 1e-10);
            res.checks.push_back({"expected_residual " + tag + " t=" + std::to_string(t), ok, e.mean,
                                  3.0 * e.se, e.se, true,
                                  "mean of E(t) - E(0) + dissipation - cross - trace term"});
            const bool okw = std::abs(w.mean) <= 3.0 * w.se || (w.se == 0.0 && std::abs(w.mean) <= 1e-10);
            res.checks.push_back({"pathwise_residual " + tag + " t=" + std::to_string(t), okw, w.mean,
                                  3.0 * w.se, w.se, false,
                                  "as above, stochastic integrals included"});
        }

        // Deterministic refinement with smooth data.
        std::vector<double> maxima;
        for (double f : {1.0, 2.0, 4.0}) {
            FullParams q = p;
            q.dt = p.dt / f;
            const auto tr = simulate_full(q, make_initial(smooth, cfg.initial_scale, grid), grid,
                                          NoiseDriver{});
            double m = 0.0;
            for (double x : energy_residual(tr.ledger)) m = std::max(m, std::abs(x));
            maxima.push_back(m);
            refine.rows.push_back({eps, q.dt, m});
        }
        for (std::size_t k = 1; k < maxima.size(); ++k) {
            const double ratio = maxima[k] / maxima[k - 1];
            res.checks.push_back({"refinement_ratio " + tag + " step " + std::to_string(k),
                                  ratio >= 0.35 && ratio <= 0.65, ratio, 0.5, 0.0, true,
                                  "max |residual| ratio under dt halving, 0.5 +- 30%"});
        }
    }
    res.tables.push_back(std::move(mc));
    res.tables.push_back(std::move(refine));
    return res;
}

// ---------------------------------------------------------------- ou check

ExperimentResult run_ou_check(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const Grid1D grid(cfg.n_interior);
    const NoiseModel model(grid, cfg.interior_noise(), cfg.boundary_noise());
    ExperimentResult res;
    res.experiment = Experiment::ou_check;
    CsvTable t{"ou_check.csv", {"eps", "t", "channel", "mc_mean", "mc_se", "theory"}, {}};
    const double tr1 = model.trace_interior();
    const double tr2 = model.trace_boundary();

    for (double eps : cfg.eps_ladder) {
        const double dt = cfg.dt_full(eps);
        const OuCoefficients k(eps, cfg.alpha, dt);
        const double t_max = std::max(cfg.t_end, 5.0 * eps);
        const std::size_t steps = index_of(t_max, dt);
        const std::vector<std::size_t> probes{index_of(eps, dt), index_of(5.0 * eps, dt),
                                              index_of(cfg.t_end, dt)};
        const std::string tag = "eps=" + std::to_string(eps);
        // Per replica: |v3|^2 and |th3|^2 at the probes, then |v3(t_n)| for every n.
        const std::size_t path0 = 2 * probes.size();
        auto per_rep = parallel_map<std::vector<double>>(
            cfg.replica_count(), thread_count(opts), [&](std::size_t rep_id) {
                const auto drv = driver_for(model, cfg, rep_id);
                InteriorField v3 = grid.zeros();
                BoundaryField th3{};
                std::vector<double> out(path0 + steps, 0.0);
                for (std::size_t n = 0; n < steps; ++n) {
                    const auto inc = drv.increment(n, dt, grid);
                    v3 = ou_update(v3, k, inc.dW1);
                    th3 = ou_update(th3, k, inc.dW2);
                    for (std::size_t j = 0; j < probes.size(); ++j) {
                        if (probes[j] == n + 1) {
                            out[2 * j] = squared_norm(v3, grid);
                            out[2 * j + 1] = squared_norm(th3);
                        }
                    }
                    out[path0 + n] = std::sqrt(squared_norm(v3, grid));
                }
                return out;
            });
        for (std::size_t j = 0; j < probes.size(); ++j) {
            const double tj = static_cast<double>(probes[j]) * dt;
            for (int ch = 1; ch <= 2; ++ch) {
                const auto m = mean_se(column(per_rep, 2 * j + (ch - 1)));
                const double theory = ou_moment_theory(eps, cfg.alpha, ch == 1 ? tr1 : tr2, tj);
                t.rows.push_back({eps, tj, static_cast<double>(ch), m.mean, m.se, theory});
                const double rel = theory > 0.0 ? std::abs(m.mean - theory) / theory : std::abs(m.mean);
                const bool ok = theory > 0.0 ? rel <= 0.05 : m.mean <= 1e-12;
                res.checks.push_back({std::string(ch == 1 ? "ou_variance_W1 " : "ou_variance_W2 ") +
                                          tag + " t=" + std::to_string(tj),
                                      ok, rel, 0.05, m.se, ch == 1,
                                      "relative deviation of the MC second moment"});
            }
        }
        // E|v3(t)| <= TrQ1 at every step.
        double sup = 0.0, sup_se = 0.0;
        for (std::size_t n = 0; n < steps; ++n) {
            const auto m = mean_se(column(per_rep, path0 + n));
            if (m.mean > sup) {
                sup = m.mean;
                sup_se = m.se;
            }
        }
        res.checks.push_back({"ou_norm_bound " + tag, sup <= tr1 + 3.0 * sup_se, sup, tr1, sup_se,
                              true, "max over t of E|v3(t)| against TrQ1"});
    }
    res.tables.push_back(std::move(t));
    return res;
}

// ------------------------------------------------------------- split check

ExperimentResult run_split_check(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const Grid1D grid(cfg.n_interior);
    const NoiseModel model(grid, cfg.interior_noise(), cfg.boundary_noise());
    ExperimentResult res;
    res.experiment = Experiment::split_check;
    CsvTable gaps{"split_check.csv",
                  {"eps", "max_gap_v", "max_gap_theta", "max_dual_v2", "max_l2_v2", "max_theta2"}, {}};
    CsvTable audit{"split_audit.csv",
                   {"eps", "t", "v2_dual_mean", "v2_dual_se", "v2_l2_mean", "theta2_mean"}, {}};
    const FullState init = make_initial(cfg.initial_data(), cfg.initial_scale, grid);
    std::vector<double> dual_max;

    struct PerReplica {
        double gap_v = 0.0, gap_theta = 0.0;
        std::vector<SplitState> sampled;
    };
    for (double eps : cfg.eps_ladder) {
        const FullParams p = params_for(cfg, eps, cfg.t_end);
        const std::size_t stride = std::max<std::size_t>(1, p.steps() / 100);
        auto per_rep = parallel_map<PerReplica>(
            cfg.replica_count(), thread_count(opts), [&](std::size_t rep_id) {
                return tagged(eps, cfg.seed, rep_id, [&] {
                    const auto drv = driver_for(model, cfg, rep_id);
                    const auto tr = simulate_full(p, init, grid, drv);
                    const auto sp = split_run(tr.states, p, grid, drv);
                    PerReplica out{sp.max_gap_v(), sp.max_gap_theta(), {}};
                    for (std::size_t n = 0; n < sp.states.size(); n += stride) {
                        out.sampled.push_back(sp.states[n]);
                    }
                    return out;
                });
            });
        double gv = 0.0, gt = 0.0;
        std::vector<std::vector<SplitState>> ensemble;
        for (auto& r : per_rep) {
            gv = std::max(gv, r.gap_v);
            gt = std::max(gt, r.gap_theta);
            ensemble.push_back(std::move(r.sampled));
        }
        const std::string tag = "eps=" + std::to_string(eps);
        res.checks.push_back({"recombination_v " + tag, gv <= 1e-10, gv, 1e-10, 0.0, true,
                              "max |v - (v1 + v2 + v3)| over steps and replicas"});
        res.checks.push_back({"recombination_theta " + tag, gt <= 1e-10, gt, 1e-10, 0.0, true,
                              "max |theta - (th1 + th2 + th3)| over steps and replicas"});
        double m_dual = 0.0, m_l2 = 0.0, m_th = 0.0;
        if (ensemble.size() >= 2) {
            const auto a = h_minus1_audit(ensemble, grid);
            for (std::size_t k = 0; k < a.t.size(); ++k) {
                audit.rows.push_back({eps, a.t[k], a.v2_dual[k].mean, a.v2_dual[k].se,
                                      a.v2_l2[k].mean, a.theta2[k].mean});
                m_l2 = std::max(m_l2, a.v2_l2[k].mean);
                m_th = std::max(m_th, a.theta2[k].mean);
            }
            m_dual = a.max_v2_dual();
            dual_max.push_back(m_dual);
        }
        gaps.rows.push_back({eps, gv, gt, m_dual, m_l2, m_th});
    }
    if (dual_max.size() >= 2) {
        const double hi = max_of(dual_max);
        const double lo = *std::min_element(dual_max.begin(), dual_max.end());
        const double ratio = lo > 0.0 ? hi / lo : (hi > 0.0 ? INFINITY : 1.0);
        res.checks.push_back({"v2_dual_norm_uniformity", ratio <= 10.0, ratio, 10.0, 0.0, true,
                              "max/min over eps of max_t E|v2(t)|_{H^-1}"});
    }
    res.tables.push_back(std::move(gaps));
    res.tables.push_back(std::move(audit));
    return res;
}

// ------------------------------------------------------------- bound check

ExperimentResult run_bound_check(const ExperimentConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    const Grid1D grid(cfg.n_interior);
    const NoiseModel model(grid, cfg.interior_noise(), cfg.boundary_noise());
    ExperimentResult res;
    res.experiment = Experiment::bound_check;
    CsvTable bt{"bound_check.csv", {"eps", "t", "kinetic_mean", "kinetic_se", "bound"}, {}};
    CsvTable ut{"uniform_bound.csv", {"eps", "potential_mean", "potential_se"}, {}};
    constexpr std::size_t kProbes = 20;
    const double noise_level = model.trace_interior() + model.trace_boundary();
    std::vector<double> potential;

    for (double eps : cfg.eps_ladder) {
        const FullParams p = params_for(cfg, eps, cfg.t_end);
        const std::string tag = "eps=" + std::to_string(eps);
        std::vector<std::size_t> probe_idx;
        for (std::size_t k = 1; k <= kProbes; ++k) {
            probe_idx.push_back(index_of(cfg.t_end * static_cast<double>(k) / kProbes, p.dt));
        }
        // Moments of one replica at step 0 and the probe steps.
        auto moments = [&](const FullState& init, std::size_t rep_id) {
            return tagged(eps, cfg.seed, rep_id, [&] {
                std::vector<MomentSample> out;
                std::size_t step = 0, next = 0;
                SimulateOptions so;
                so.keep_states = false;
                so.observer = [&](const FullState& s) {
                    if (step == 0 || (next < probe_idx.size() && step == probe_idx[next])) {
                        out.push_back(moments_of(s, grid));
                        if (step != 0) ++next;
                    }
                    ++step;
                };
                simulate_full(p, init, grid, driver_for(model, cfg, rep_id), so);
                return out;
            });
        };

        const FullState init = make_initial(cfg.initial_data(), cfg.initial_scale, grid);
        auto ens = parallel_map<std::vector<MomentSample>>(
            cfg.replica_count(), thread_count(opts),
            [&](std::size_t rep_id) { return moments(init, rep_id); });
        const MomentSample m0 = moments_of(init, grid);
        const double start = m0.v + m0.theta;
        const double floor = 0.5 * std::pow(eps, 2.0 * cfg.alpha - 1.0) * noise_level;
        double worst = 0.0;
        bool ok = true;
        for (std::size_t k = 0; k < probe_idx.size(); ++k) {
            std::vector<double> kin(ens.size());
            for (std::size_t r = 0; r < ens.size(); ++r) kin[r] = ens[r][k + 1].v + ens[r][k + 1].theta;
            const auto m = mean_se(kin);
            const double t = static_cast<double>(probe_idx[k]) * p.dt;
            const double bound = start * std::exp(-2.0 * t / eps) + floor;
            bt.rows.push_back({eps, t, m.mean, m.se, bound});
            const double allowed = bound + 3.0 * m.se + 1e-12;
            ok = ok && m.mean <= allowed;
            worst = std::max(worst, m.mean / allowed);
        }
        res.checks.push_back({"moment_bound " + tag, ok, worst, 1.0, 0.0, true,
                              "max over probes of E(|v|^2 + |theta|^2) / (bound + 3 SE)"});

        const FullState uinit = make_initial(cfg.uniform_initial, cfg.initial_scale, grid);
        auto uens = parallel_map<std::vector<MomentSample>>(
            cfg.replica_count(), thread_count(opts),
            [&](std::size_t rep_id) { return moments(uinit, rep_id); });
        std::vector<double> q(uens.size());
        for (std::size_t r = 0; r < uens.size(); ++r) {
            const auto& s = uens[r].back();
            q[r] = s.grad + s.u + s.delta;
        }
        const auto mq = mean_se(q);
        ut.rows.push_back({eps, mq.mean, mq.se});
        potential.push_back(mq.mean);
    }
    if (potential.size() >= 2) {
        const double hi = max_of(potential);
        const double lo = *std::min_element(potential.begin(), potential.end());
        const double ratio = lo > 0.0 ? hi / lo : (hi > 0.0 ? INFINITY : 1.0);
        res.checks.push_back({"uniform_in_eps", ratio <= 10.0, ratio, 10.0, 0.0, true,
                              "max/min over eps of E(|grad u|^2 + |u|^2 + |delta|^2)(T)"});
    }
    res.tables.push_back(std::move(bt));
    res.tables.push_back(std::move(ut));
    return res;
}

// ---------------------------------------------------------------- simulate

ExperimentResult run_simulate(const ExperimentConfig& cfg, const RunOptions&) {
    cfg.validate();
    const Grid1D grid(cfg.n_interior);
    const NoiseModel model(grid, cfg.interior_noise(), cfg.boundary_noise());
    const double eps = cfg.eps_ladder.front();
    const FullParams p = params_for(cfg, eps, cfg.t_end);
    ExperimentResult res;
    res.experiment = Experiment::simulate;
    CsvTable t{"trajectory.csv",
               {"t", "u_0.25", "u_0.5", "u_0.75", "norm_u", "norm_v", "abs_delta", "abs_theta", "energy"},
               {}};
    SimulateOptions so;
    so.keep_states = false;
    so.observer = [&](const FullState& s) {
        t.rows.push_back({s.t, probe_value(s.u, 0.25, grid), probe_value(s.u, 0.5, grid),
                          probe_value(s.u, 0.75, grid), norms(s.u, grid).l2, norms(s.v, grid).l2,
                          norms(s.delta).l2, norms(s.theta).l2, pseudo_energy(s, p.r, eps, grid)});
        res.snapshots.push_back(s.u);
    };
    bool finite = true;
    std::string detail = "trajectory stayed finite";
    try {
        tagged(eps, cfg.seed, 0, [&] {
            return simulate_full(p, make_initial(cfg.initial_data(), cfg.initial_scale, grid), grid,
                                 driver_for(model, cfg, 0), so);
        });
    } catch (const BlowUpError& e) {
        finite = false;
        detail = e.what();
    }
    res.checks.push_back({"finite", finite, finite ? 1.0 : 0.0, 1.0, 0.0, true, detail});
    res.summary["eps"] = eps;
    res.summary["steps"] = p.steps();
    res.tables.push_back(std::move(t));
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    if (!cfg.experiment) throw ConfigError("no experiment selected");
    switch (*cfg.experiment) {
        case Experiment::converge: return run_converge(cfg, opts);
        case Experiment::energy_audit: return run_energy_audit(cfg, opts);
        case Experiment::ou_check: return run_ou_check(cfg, opts);
        case Experiment::split_check: return run_split_check(cfg, opts);
        case Experiment::bound_check: return run_bound_check(cfg, opts);
        case Experiment::simulate: return run_simulate(cfg, opts);
    }
    throw ConfigError("unknown experiment");
}

}  // namespace sll
