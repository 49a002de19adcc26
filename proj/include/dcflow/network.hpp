#pragma once

#include "dcflow/numerics.hpp"

#include <cmath>
#include <vector>

namespace dcflow {

enum class BusType { ConstantVoltage, Zip };

/// Aggregate ZIP components of one bus: constant-current draw i0 (>= 0),
/// constant-power draw p0 (positive = load, negative = generation) and
/// constant-conductance load g0 (>= 0). All per unit.
struct ZipAggregate {
    double i0 = 0.0;
    double p0 = 0.0;
    double g0 = 0.0;

    [[nodiscard]] bool all_zero() const { return i0 == 0.0 && p0 == 0.0 && g0 == 0.0; }
};

struct Bus {
    int id = 0;
    BusType type = BusType::Zip;
    double v = 0.0;     // fixed voltage, constant-voltage buses only
    ZipAggregate zip;   // load aggregate, ZIP buses only

    static Bus constant_voltage(int id, double v) {
        Bus b;
        b.id = id;
        b.type = BusType::ConstantVoltage;
        b.v = v;
        return b;
    }
    static Bus zip_bus(int id, ZipAggregate z = {}) {
        Bus b;
        b.id = id;
        b.type = BusType::Zip;
        b.zip = z;
        return b;
    }
};

/// A line between two buses with conductance g > 0 (pu). Parallel lines must
/// be pre-merged by summing conductances; duplicates are rejected.
struct Line {
    int from = 0;
    int to = 0;
    double g = 0.0;
};

/// Operating band on squared voltages, 0 < u_lo < u_hi. Case files specify the
/// band as voltages (v_min, v_max) which are squared on construction.
struct VoltageBand {
    double u_lo = 0.81;
    double u_hi = 1.21;

    [[nodiscard]] double v_lo() const { return std::sqrt(u_lo); }
    [[nodiscard]] double v_hi() const { return std::sqrt(u_hi); }

    static VoltageBand from_voltages(double v_min, double v_max) {
        return VoltageBand{v_min * v_min, v_max * v_max};
    }
};

/// A DC network: bus 0 is the slack (constant-voltage) bus, ids are dense
/// 0..N, the undirected line graph must be connected.
struct Network {
    std::vector<Bus> buses;
    std::vector<Line> lines;
    VoltageBand band;
    NormOrder q = NormOrder::Two;
};

/// Checks every Network invariant (dense unique ids, slack is constant-voltage,
/// positive fixed voltages, non-negative i0/g0, line endpoints exist, g > 0,
/// no self-loops or duplicate pairs, graph connected). Throws ValidationError
/// naming the offending element.
void validate(const Network& net);

} // namespace dcflow
