#include "dcflow/model.hpp"

#include "dcflow/errors.hpp"

#include <Eigen/Cholesky>

#include <stdexcept>
#include <string>

namespace dcflow {

DerivedModel derive(const Network& net) {
    validate(net);

    DerivedModel m;
    m.band = net.band;
    m.q = net.q;

    const int n = static_cast<int>(net.buses.size());
    std::vector<const Bus*> by_id(static_cast<size_t>(n), nullptr);
    for (const Bus& b : net.buses) by_id[static_cast<size_t>(b.id)] = &b;

    m.bus_to_p.assign(static_cast<size_t>(n), -1);
    for (int id = 0; id < n; ++id) {
        if (by_id[static_cast<size_t>(id)]->type == BusType::Zip) {
            m.bus_to_p[static_cast<size_t>(id)] = static_cast<int>(m.pbus_ids.size());
            m.pbus_ids.push_back(id);
        }
    }
    m.P = static_cast<int>(m.pbus_ids.size());

    m.c = Vec::Zero(m.P);
    m.k = Vec::Zero(m.P);
    m.gn = Vec::Zero(m.P);
    m.p = Vec::Zero(m.P);
    m.boundary = Vec::Zero(m.P);
    m.G = Mat::Zero(m.P, m.P);

    for (int i = 0; i < m.P; ++i) {
        const Bus& b = *by_id[static_cast<size_t>(m.pbus_ids[static_cast<size_t>(i)])];
        m.c(i) = b.zip.g0;
        m.p(i) = b.zip.p0;
        m.k(i) = -b.zip.i0;
    }

    for (const Line& l : net.lines) {
        const int pf = m.bus_to_p[static_cast<size_t>(l.from)];
        const int pt = m.bus_to_p[static_cast<size_t>(l.to)];
        if (pf >= 0) {
            m.c(pf) += l.g;
            m.gn(pf) += l.g;
        }
        if (pt >= 0) {
            m.c(pt) += l.g;
            m.gn(pt) += l.g;
        }
        if (pf >= 0 && pt >= 0) {
            m.G(pf, pt) -= l.g;
            m.G(pt, pf) -= l.g;
            auto [lo, hi] = std::minmax(pf, pt);
            m.pp_edges.push_back({lo, hi, l.g});
        } else if (pf >= 0) {
            const double inj = l.g * by_id[static_cast<size_t>(l.to)]->v;
            m.boundary(pf) += inj;
            m.k(pf) += inj;
        } else if (pt >= 0) {
            const double inj = l.g * by_id[static_cast<size_t>(l.from)]->v;
            m.boundary(pt) += inj;
            m.k(pt) += inj;
        }
    }
    m.G.diagonal() = m.c;

    if (m.P == 0) {
        m.Z = Mat::Zero(0, 0);
        m.d = Vec::Zero(0);
        return m;
    }

    Eigen::LLT<Mat> llt(m.G);
    if (llt.info() != Eigen::Success)
        throw ValidationError("SingularG: reduced Laplacian is not positive definite");
    m.Z = llt.solve(Mat::Identity(m.P, m.P));
    m.d = llt.solve(m.k);

    const double inv_err = (m.G * m.Z - Mat::Identity(m.P, m.P)).cwiseAbs().maxCoeff();
    if (!std::isfinite(inv_err) || inv_err > 1e-8)
        throw ValidationError("SingularG: inverse verification failed, max |GZ-I| = " +
                              std::to_string(inv_err));
    return m;
}

Vec residual(const DerivedModel& model, const Vec& v) {
    if (v.size() != model.P) throw std::invalid_argument("residual: wrong vector length");
    if (model.P > 0 && v.minCoeff() <= 0.0)
        throw std::domain_error("NonPositiveVoltage: residual requires v > 0 entrywise");
    Vec coupling = Vec::Zero(model.P);
    for (const auto& e : model.pp_edges) {
        coupling(e.n) += e.g * v(e.m);
        coupling(e.m) += e.g * v(e.n);
    }
    return model.c.cwiseProduct(v.cwiseProduct(v)) - v.cwiseProduct(coupling) -
           model.k.cwiseProduct(v) + model.p;
}

} // namespace dcflow
