#pragma once

#include "dcflow/model.hpp"
#include "dcflow/network.hpp"

namespace testutil {

/// The two-bus workhorse: slack at v0 joined by one line of conductance
/// g_line to a single ZIP bus.
inline dcflow::Network two_bus(double p0, double i0, double g0 = 1.0, double g_line = 10.0,
                               double v0 = 1.0) {
    dcflow::Network net;
    net.buses.push_back(dcflow::Bus::constant_voltage(0, v0));
    net.buses.push_back(dcflow::Bus::zip_bus(1, {i0, p0, g0}));
    net.lines.push_back({0, 1, g_line});
    net.band = dcflow::VoltageBand::from_voltages(0.9, 1.1);
    net.q = dcflow::NormOrder::Two;
    return net;
}

// the four loading scenarios of the two-bus system (p0, i0)
inline dcflow::Network two_bus_a() { return two_bus(-1.0, 1.0); }
inline dcflow::Network two_bus_b() { return two_bus(-2.0, 1.0); }
inline dcflow::Network two_bus_c() { return two_bus(-2.0, 10.0); }
inline dcflow::Network two_bus_d() { return two_bus(-5.0, 20.0); }

// closed-form positive roots of the four scenarios
inline constexpr double kRootA = 0.91728817670449772; // (9+sqrt(125))/22
inline constexpr double kRootB = 1.0;
inline constexpr double kRootC = 0.42640143271122083; // sqrt(2/11)
inline constexpr double kRootD = 0.35857017363628714; // (-10+sqrt(320))/22

} // namespace testutil
