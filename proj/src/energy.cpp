#include "dcflow/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace dcflow {

namespace {

constexpr double kValueFloor = -1e12;
constexpr double kRhoCeiling = 50.0;

void check_rho(const DerivedModel& model, const Vec& rho) {
    if (rho.size() != model.P) throw std::invalid_argument("energy: wrong vector length");
    if (!rho.allFinite()) throw std::invalid_argument("energy: rho must be finite");
}

Vec half_exp(const Vec& rho) {
    Vec e = (0.5 * rho).array().exp();
    if (!e.allFinite()) throw std::overflow_error("Overflow: exp(rho/2) left the double range");
    return e;
}

bool band_contains(const Vec& v, const VoltageBand& band) {
    constexpr double slack = 1e-9;
    return v.size() == 0 ||
           (v.minCoeff() >= band.v_lo() - slack && v.maxCoeff() <= band.v_hi() + slack);
}

} // namespace

double energy_value(const DerivedModel& model, const Vec& rho) {
    check_rho(model, rho);
    const Vec he = half_exp(rho);           // e^{rho/2}
    const Vec fe = he.cwiseProduct(he);     // e^{rho}
    if (!fe.allFinite()) throw std::overflow_error("Overflow: exp(rho) left the double range");
    double value = (model.c.cwiseProduct(fe) - 2.0 * model.k.cwiseProduct(he) +
                    model.p.cwiseProduct(rho))
                       .sum();
    for (const auto& e : model.pp_edges) value -= 2.0 * e.g * he(e.n) * he(e.m);
    if (!std::isfinite(value)) throw std::overflow_error("Overflow: energy value is not finite");
    return value;
}

Vec energy_gradient(const DerivedModel& model, const Vec& rho) {
    check_rho(model, rho);
    const Vec he = half_exp(rho);
    const Vec fe = he.cwiseProduct(he);
    if (!fe.allFinite()) throw std::overflow_error("Overflow: exp(rho) left the double range");
    Vec coupling = Vec::Zero(model.P);
    for (const auto& e : model.pp_edges) {
        coupling(e.n) += e.g * he(e.m);
        coupling(e.m) += e.g * he(e.n);
    }
    Vec g = model.c.cwiseProduct(fe) - he.cwiseProduct(coupling) - model.k.cwiseProduct(he) +
            model.p;
    if (!g.allFinite()) throw std::overflow_error("Overflow: gradient is not finite");
    return g;
}

HessianBundle hessian(const DerivedModel& model, const Vec& rho) {
    check_rho(model, rho);
    HessianBundle b;
    const Vec he = half_exp(rho);
    Vec coupling = Vec::Zero(model.P);   // sum_m g_nm e^{rho_m/2}
    for (const auto& e : model.pp_edges) {
        coupling(e.n) += e.g * he(e.m);
        coupling(e.m) += e.g * he(e.n);
    }

    b.H = Mat::Zero(model.P, model.P);
    for (const auto& e : model.pp_edges) {
        const double off = -0.5 * e.g * he(e.n) * he(e.m);
        b.H(e.n, e.m) = off;
        b.H(e.m, e.n) = off;
    }
    for (int i = 0; i < model.P; ++i)
        b.H(i, i) = he(i) * (model.c(i) * he(i) - 0.5 * model.k(i) - 0.5 * coupling(i));

    b.K_diag = Vec(model.P);
    for (int i = 0; i < model.P; ++i)
        b.K_diag(i) = model.c(i) - model.k(i) / he(i) - coupling(i) / he(i);
    b.H_tilde = model.G + Mat(b.K_diag.asDiagonal());
    if (!b.H.allFinite() || !b.H_tilde.allFinite())
        throw std::overflow_error("Overflow: Hessian is not finite");
    b.lambda_min_tilde = model.P > 0 ? min_eigenvalue_sym(b.H_tilde) : 0.0;
    return b;
}

EnergyState evaluate_energy_state(const DerivedModel& model, const Vec& rho) {
    EnergyState s;
    s.rho = rho;
    s.value = energy_value(model, rho);
    s.grad_norm_inf =
        model.P > 0 ? energy_gradient(model, rho).lpNorm<Eigen::Infinity>() : 0.0;
    return s;
}

SolveResult solve_energy(const DerivedModel& model, const VoltageBand& band,
                         const SolveOptions& opts, std::optional<Vec> init_rho) {
    if (opts.tol <= 0.0 || opts.max_iter < 1)
        throw std::invalid_argument("solve_energy: tol must be > 0 and max_iter >= 1");

    SolveResult res;
    Vec rho = init_rho ? std::move(*init_rho) : Vec::Zero(model.P);
    if (rho.size() != model.P) throw std::invalid_argument("solve_energy: init has wrong length");

    auto finish = [&](SolveStatus status) {
        res.status = status;
        res.v = (0.5 * rho).array().exp();
        res.in_band = band_contains(res.v, band);
        if (model.P == 0)
            res.residual_inf = 0.0;
        else if (res.v.allFinite() && res.v.minCoeff() > 0.0)
            res.residual_inf = residual(model, res.v).lpNorm<Eigen::Infinity>();
        return res;
    };

    double gamma0 = 1.0;
    double value = 0.0;
    try {
        if (model.P > 0) {
            const double scale = induced_norm(hessian(model, rho).H, NormOrder::Two);
            if (scale > 0.0) gamma0 = 0.9 / scale;
        }
        value = energy_value(model, rho);
    } catch (const std::overflow_error&) {
        return finish(SolveStatus::Diverged);
    }

    res.status = SolveStatus::MaxIterations;
    for (int it = 1; it <= opts.max_iter; ++it) {
        Vec grad;
        try {
            grad = energy_gradient(model, rho);
        } catch (const std::overflow_error&) {
            return finish(SolveStatus::Diverged);
        }
        const double grad_inf = model.P > 0 ? grad.lpNorm<Eigen::Infinity>() : 0.0;
        if (opts.record_trace) {
            res.trace.push_back(grad_inf);
            res.energy_trace.push_back(value);
        }
        res.iterations = it;
        if (grad_inf <= opts.tol) return finish(SolveStatus::Converged);
        if (value < kValueFloor || (model.P > 0 && rho.lpNorm<Eigen::Infinity>() > kRhoCeiling))
            return finish(SolveStatus::Diverged);

        // halve the step until the energy decreases; the slack keeps progress
        // alive once decrements drop below representable changes of E
        const double slack = 1e-12 * std::max(1.0, std::abs(value));
        double gamma = gamma0;
        bool accepted = false;
        for (int bt = 0; bt < 80 && !accepted; ++bt) {
            Vec cand = rho - gamma * grad;
            double cand_value;
            try {
                cand_value = energy_value(model, cand);
            } catch (const std::overflow_error&) {
                gamma *= 0.5;
                continue;
            }
            if (cand_value <= value + slack) {
                rho = std::move(cand);
                value = cand_value;
                accepted = true;
            } else {
                gamma *= 0.5;
            }
        }
        if (!accepted) break; // numerical floor: no descent direction left
    }
    return finish(res.status);
}

} // namespace dcflow
