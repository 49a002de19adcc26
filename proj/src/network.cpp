#include "dcflow/network.hpp"

#include "dcflow/errors.hpp"

#include <queue>
#include <set>
#include <string>

namespace dcflow {

void validate(const Network& net) {
    const int n = static_cast<int>(net.buses.size());
    if (n == 0) throw ValidationError("network has no buses");

    std::vector<bool> seen(static_cast<size_t>(n), false);
    bool any_voltage = false;
    for (const Bus& b : net.buses) {
        if (b.id < 0 || b.id >= n)
            throw ValidationError("bus id " + std::to_string(b.id) + " is outside the dense range 0.." +
                                  std::to_string(n - 1));
        if (seen[static_cast<size_t>(b.id)])
            throw ValidationError("duplicate bus id " + std::to_string(b.id));
        seen[static_cast<size_t>(b.id)] = true;
        if (b.type == BusType::ConstantVoltage) {
            any_voltage = true;
            if (!(b.v > 0.0))
                throw ValidationError("constant-voltage bus " + std::to_string(b.id) +
                                      " must have v > 0");
        } else {
            if (b.zip.i0 < 0.0)
                throw ValidationError("bus " + std::to_string(b.id) + ": i0 must be >= 0");
            if (b.zip.g0 < 0.0)
                throw ValidationError("bus " + std::to_string(b.id) + ": g0 must be >= 0");
        }
    }
    if (!any_voltage) throw ValidationError("NoVoltageBus: network has no constant-voltage bus");

    for (const Bus& b : net.buses)
        if (b.id == 0 && b.type != BusType::ConstantVoltage)
            throw ValidationError("slack bus 0 must be a constant-voltage bus");

    if (!(net.band.u_lo > 0.0 && net.band.u_lo < net.band.u_hi))
        throw ValidationError("voltage band requires 0 < u_lo < u_hi");

    std::set<std::pair<int, int>> pairs;
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (size_t i = 0; i < net.lines.size(); ++i) {
        const Line& l = net.lines[i];
        const std::string tag = "line " + std::to_string(l.from) + "-" + std::to_string(l.to);
        if (l.from < 0 || l.from >= n || l.to < 0 || l.to >= n)
            throw ValidationError(tag + ": endpoint does not exist");
        if (l.from == l.to) throw ValidationError(tag + ": self-loops are not allowed");
        if (!(l.g > 0.0)) throw ValidationError("NonPositiveConductance: " + tag);
        auto key = std::minmax(l.from, l.to);
        if (!pairs.insert(key).second)
            throw ValidationError("DuplicateLine: " + tag + " (merge parallel lines by summing g)");
        adj[static_cast<size_t>(l.from)].push_back(l.to);
        adj[static_cast<size_t>(l.to)].push_back(l.from);
    }

    // connectivity by BFS from the slack bus
    std::vector<bool> reached(static_cast<size_t>(n), false);
    std::queue<int> frontier;
    frontier.push(0);
    reached[0] = true;
    int count = 1;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int w : adj[static_cast<size_t>(u)]) {
            if (!reached[static_cast<size_t>(w)]) {
                reached[static_cast<size_t>(w)] = true;
                ++count;
                frontier.push(w);
            }
        }
    }
    if (count != n) {
        int missing = 0;
        for (int i = 0; i < n; ++i)
            if (!reached[static_cast<size_t>(i)]) {
                missing = i;
                break;
            }
        throw ValidationError("DisconnectedGraph: bus " + std::to_string(missing) +
                              " is not connected to the slack bus");
    }
}

} // namespace dcflow
