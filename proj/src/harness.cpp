#include "dcflow/harness.hpp"

#include "dcflow/energy.hpp"
#include "dcflow/errors.hpp"
#include "dcflow/monotone.hpp"
#include "dcflow/zbus.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

namespace dcflow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// 53-bit uniform in [0,1); avoids the implementation-defined distributions so
// that snapshots are reproducible across standard libraries
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { // inclusive bounds
    const int span = hi - lo + 1;
    int v = lo + static_cast<int>(uniform01(rng) * span);
    return std::min(v, hi);
}

} // namespace

bool method_succeeded(const SolveResult& result, Method method) {
    if (result.status != SolveStatus::Converged) return false;
    return method == Method::Monotone ? result.in_band : true;
}

std::vector<double> oracle_single_pbus(const DerivedModel& model) {
    if (model.P != 1)
        throw std::invalid_argument("oracle_single_pbus: exactly one load bus required");
    const double a = model.c(0);
    const double b = -model.k(0);
    const double c0 = model.p(0);
    const double disc = b * b - 4.0 * a * c0;
    if (disc < 0.0) throw std::runtime_error("NoPositiveRoot: negative discriminant");
    const double sq = std::sqrt(disc);
    // stable quadratic roots
    const double qq = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    std::vector<double> roots;
    const double r1 = qq / a;
    if (r1 > 0.0) roots.push_back(r1);
    if (qq != 0.0) {
        const double r2 = c0 / qq;
        if (r2 > 0.0 && std::abs(r2 - r1) > 1e-14 * std::max(1.0, std::abs(r1)))
            roots.push_back(r2);
    } else if (b != 0.0) {
        // qq == 0 means c0 == 0: the second root is 0, never positive
    }
    if (roots.empty()) throw std::runtime_error("NoPositiveRoot: no positive real root");
    std::sort(roots.rbegin(), roots.rend());
    return roots;
}

std::vector<Vec> oracle_multistart(const DerivedModel& model, int starts, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed));
    std::vector<Vec> roots;
    const double scale = std::max(1.0, model.p.size() > 0 ? model.p.lpNorm<Eigen::Infinity>() : 0.0);

    for (int s = 0; s < starts; ++s) {
        Vec v(model.P);
        for (int i = 0; i < model.P; ++i) v(i) = uniform(rng, 0.1, 2.0);

        bool ok = false;
        for (int it = 0; it < 100; ++it) {
            if (!v.allFinite() || v.lpNorm<Eigen::Infinity>() > 1e6) break;
            if (v.cwiseAbs().minCoeff() < 1e-12) break;

            Vec coupling = Vec::Zero(model.P);
            for (const auto& e : model.pp_edges) {
                coupling(e.n) += e.g * v(e.m);
                coupling(e.m) += e.g * v(e.n);
            }
            const Vec r = model.c.cwiseProduct(v.cwiseProduct(v)) - v.cwiseProduct(coupling) -
                          model.k.cwiseProduct(v) + model.p;
            const double rn = r.lpNorm<Eigen::Infinity>();
            if (rn <= 1e-11 * scale) {
                ok = true;
                break;
            }

            Mat J = Mat::Zero(model.P, model.P);
            for (const auto& e : model.pp_edges) {
                J(e.n, e.m) = -e.g * v(e.n);
                J(e.m, e.n) = -e.g * v(e.m);
            }
            for (int i = 0; i < model.P; ++i) J(i, i) = 2.0 * model.c(i) * v(i) - coupling(i) - model.k(i);

            Eigen::FullPivLU<Mat> lu(J);
            if (!lu.isInvertible()) break;
            const Vec delta = lu.solve(-r);

            // damping on the residual norm
            double step = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt) {
                const Vec cand = v + step * delta;
                if (cand.allFinite() && cand.cwiseAbs().minCoeff() > 1e-12) {
                    Vec cc = Vec::Zero(model.P);
                    for (const auto& e : model.pp_edges) {
                        cc(e.n) += e.g * cand(e.m);
                        cc(e.m) += e.g * cand(e.n);
                    }
                    const Vec rc = model.c.cwiseProduct(cand.cwiseProduct(cand)) -
                                   cand.cwiseProduct(cc) - model.k.cwiseProduct(cand) + model.p;
                    if (rc.norm() < r.norm()) {
                        v = cand;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (!moved) break;
        }

        if (ok && model.P > 0 && v.minCoeff() > 0.0) {
            bool fresh = true;
            for (const Vec& known : roots)
                if ((known - v).lpNorm<Eigen::Infinity>() < 1e-5) {
                    fresh = false;
                    break;
                }
            if (fresh) roots.push_back(v);
        }
    }

    std::sort(roots.begin(), roots.end(), [](const Vec& a, const Vec& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a(i) != b(i)) return a(i) > b(i);
        return false;
    });
    return roots;
}

Network generate_network(NetKind kind, int n_buses, std::uint64_t seed) {
    if (n_buses < 2) throw std::invalid_argument("generate_network: need at least 2 buses");
    std::mt19937_64 rng(splitmix64(seed));

    Network net;
    net.band = VoltageBand::from_voltages(0.9, 1.1);
    net.q = NormOrder::Two;
    net.buses.push_back(Bus::constant_voltage(0, 1.0));
    for (int i = 1; i < n_buses; ++i) {
        // nominal pu load at 1 pu voltage; the power base is the largest
        // source, so per-bus draws sit well below 1
        const double load = uniform(rng, 0.02, 0.12);
        ZipAggregate zip;
        zip.g0 = 0.3 * load;
        zip.i0 = 0.3 * load;
        zip.p0 = 0.4 * load;
        net.buses.push_back(Bus::zip_bus(i, zip));
    }

    std::set<std::pair<int, int>> used;
    for (int i = 1; i < n_buses; ++i) {
        const int parent = uniform_int(rng, 0, i - 1);
        net.lines.push_back({parent, i, uniform(rng, 5.0, 50.0)});
        used.insert(std::minmax(parent, i));
    }
    if (kind == NetKind::Meshed) {
        const int chords = (n_buses + 3) / 4;
        int added = 0;
        int guard = 0;
        while (added < chords && ++guard < 100000) {
            const int a = uniform_int(rng, 0, n_buses - 1);
            const int b = uniform_int(rng, 0, n_buses - 1);
            if (a == b) continue;
            if (!used.insert(std::minmax(a, b)).second) continue;
            net.lines.push_back({std::min(a, b), std::max(a, b), uniform(rng, 5.0, 50.0)});
            ++added;
        }
    }
    return net;
}

McSummary run_monte_carlo(const Network& base, const McConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_monte_carlo: trials must be >= 1");
    auto finite_range = [](const std::pair<double, double>& r) {
        return std::isfinite(r.first) && std::isfinite(r.second) && r.first <= r.second;
    };
    if (!finite_range(cfg.p_scale_range) || !finite_range(cfg.iz_scale_range))
        throw std::invalid_argument("run_monte_carlo: scale ranges must be finite with lo <= hi");
    if (cfg.iz_scale_range.first < 0.0)
        throw std::invalid_argument("run_monte_carlo: current/conductance scales must be >= 0");
    validate(base);

    McSummary summary;
    summary.trials = cfg.trials;
    if (cfg.trial_csv)
        *cfg.trial_csv << "trial,contraction_feasible,monotone_conditions,local_convexity,"
                          "zbus,monotone,energy,agree,max_pairwise\n";

    SolveOptions fixed_opts;
    fixed_opts.tol = 1e-6;
    fixed_opts.max_iter = 20000;
    SolveOptions energy_opts;
    energy_opts.tol = kEnergyDefaultTol;
    energy_opts.max_iter = 20000;

    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(trial))));
        Network net = base;
        std::sort(net.buses.begin(), net.buses.end(),
                  [](const Bus& a, const Bus& b) { return a.id < b.id; });
        for (Bus& b : net.buses) {
            if (b.type != BusType::Zip) continue;
            const double sp = uniform(rng, cfg.p_scale_range.first, cfg.p_scale_range.second);
            const double si = uniform(rng, cfg.iz_scale_range.first, cfg.iz_scale_range.second);
            const double sg = uniform(rng, cfg.iz_scale_range.first, cfg.iz_scale_range.second);
            b.zip.p0 *= sp;
            b.zip.i0 *= si;
            b.zip.g0 *= sg;
        }

        const DerivedModel model = derive(net);
        const ConditionReport report = build_report(model, net.band, net.q);

        const ZbusSolve zb = solve_zbus(model, net.band, fixed_opts);
        const SolveResult mono = solve_monotone(model, net.band, fixed_opts);
        const SolveResult en = solve_energy(model, net.band, energy_opts);

        const bool zbus_ok = method_succeeded(zb.result, Method::ZBus);
        const bool mono_ok = method_succeeded(mono, Method::Monotone);
        const bool energy_ok = method_succeeded(en, Method::EnergyFunction);

        std::vector<const Vec*> converged;
        if (zb.result.status == SolveStatus::Converged) converged.push_back(&zb.result.v);
        if (mono.status == SolveStatus::Converged) converged.push_back(&mono.v);
        if (en.status == SolveStatus::Converged) converged.push_back(&en.v);

        double max_pairwise = 0.0;
        for (size_t i = 0; i < converged.size(); ++i)
            for (size_t j = i + 1; j < converged.size(); ++j)
                max_pairwise = std::max(
                    max_pairwise, (*converged[i] - *converged[j]).lpNorm<Eigen::Infinity>());
        const bool agree = !converged.empty() && max_pairwise < 1e-5;
        summary.worst_disagreement = std::max(summary.worst_disagreement, max_pairwise);
        if (agree)
            ++summary.agree_count;
        else
            ++summary.fail_count;

        auto tally = [](ConditionCell& cell, bool cond, bool success) {
            if (cond)
                (success ? cell.cond_true_success : cell.cond_true_fail)++;
            else
                (success ? cell.cond_false_success : cell.cond_false_fail)++;
        };
        tally(summary.contraction, report.contraction.feasible, zbus_ok);
        tally(summary.monotone_pair, report.monotone_current.ok && report.monotone_power.ok,
              mono_ok);
        tally(summary.local_convexity, report.local_convexity.ok, energy_ok);

        if (cfg.trial_csv)
            *cfg.trial_csv << trial << ',' << report.contraction.feasible << ','
                           << (report.monotone_current.ok && report.monotone_power.ok) << ','
                           << report.local_convexity.ok << ',' << to_string(zb.result.status)
                           << ',' << to_string(mono.status) << ',' << to_string(en.status) << ','
                           << agree << ',' << max_pairwise << '\n';
    }
    return summary;
}

} // namespace dcflow
