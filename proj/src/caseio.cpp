#include "dcflow/caseio.hpp"

#include "dcflow/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace dcflow {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* field, const std::string& where) {
    if (!j.contains(field) || !j.at(field).is_number())
        throw ParseError(where + ": missing or non-numeric field '" + field + "'");
    return j.at(field).get<double>();
}

double optional_number(const json& j, const char* field, double fallback,
                       const std::string& where) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number())
        throw ParseError(where + ": field '" + field + "' must be a number");
    return j.at(field).get<double>();
}

int require_int(const json& j, const char* field, const std::string& where) {
    if (!j.contains(field) || !j.at(field).is_number_integer())
        throw ParseError(where + ": missing or non-integer field '" + field + "'");
    return j.at(field).get<int>();
}

json margin_to_json(const MarginCheck& check, const DerivedModel* /*unused*/ = nullptr) {
    json j;
    j["ok"] = check.ok;
    if (check.worst_bus >= 0) {
        j["worst_bus"] = check.worst_bus;
        j["worst_margin"] = check.worst_margin;
    } else {
        j["worst_bus"] = nullptr;
        j["worst_margin"] = nullptr;
    }
    // unconstrained buses carry an infinite margin; emit null explicitly
    j["margins"] = json::array();
    for (Eigen::Index i = 0; i < check.margins.size(); ++i) {
        const double m = check.margins(i);
        j["margins"].push_back(std::isfinite(m) ? json(m) : json(nullptr));
    }
    return j;
}

json cell_to_json(const ConditionCell& cell) {
    return json{{"cond_true_success", cell.cond_true_success},
                {"cond_true_fail", cell.cond_true_fail},
                {"cond_false_success", cell.cond_false_success},
                {"cond_false_fail", cell.cond_false_fail}};
}

} // namespace

Network parse_case(const json& j) {
    if (!j.is_object()) throw ParseError("case: top level must be an object");
    Network net;

    if (!j.contains("buses") || !j.at("buses").is_array() || j.at("buses").empty())
        throw ParseError("case: 'buses' must be a non-empty array");
    for (const json& jb : j.at("buses")) {
        const int id = require_int(jb, "id", "bus");
        const std::string where = "bus " + std::to_string(id);
        if (!jb.contains("type") || !jb.at("type").is_string())
            throw ParseError(where + ": missing 'type' (\"V\" or \"P\")");
        const std::string type = jb.at("type").get<std::string>();
        if (type == "V") {
            net.buses.push_back(Bus::constant_voltage(id, require_number(jb, "v", where)));
        } else if (type == "P") {
            ZipAggregate zip;
            zip.i0 = optional_number(jb, "i0", 0.0, where);
            zip.p0 = optional_number(jb, "p0", 0.0, where);
            zip.g0 = optional_number(jb, "g0", 0.0, where);
            net.buses.push_back(Bus::zip_bus(id, zip));
        } else {
            throw ParseError(where + ": unknown type '" + type + "'");
        }
    }

    if (!j.contains("lines") || !j.at("lines").is_array())
        throw ParseError("case: 'lines' must be an array");
    for (const json& jl : j.at("lines")) {
        Line l;
        l.from = require_int(jl, "from", "line");
        l.to = require_int(jl, "to", "line");
        l.g = require_number(jl, "g", "line " + std::to_string(l.from) + "-" + std::to_string(l.to));
        net.lines.push_back(l);
    }

    if (j.contains("band")) {
        const json& jb = j.at("band");
        const double v_min = require_number(jb, "v_min", "band");
        const double v_max = require_number(jb, "v_max", "band");
        if (!(v_min > 0.0 && v_min < v_max))
            throw ParseError("band: requires 0 < v_min < v_max");
        net.band = VoltageBand::from_voltages(v_min, v_max);
    }

    if (j.contains("q")) {
        if (!j.at("q").is_number_integer()) throw ParseError("case: 'q' must be 1, 2 or 0 (inf)");
        try {
            net.q = norm_order_from_int(j.at("q").get<int>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("case: ") + e.what());
        }
    }
    return net;
}

Network parse_case_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("case: invalid JSON");
    return parse_case(j);
}

Network load_case(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open case file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_case_text(buffer.str());
}

json case_to_json(const Network& net) {
    json j;
    j["buses"] = json::array();
    for (const Bus& b : net.buses) {
        if (b.type == BusType::ConstantVoltage)
            j["buses"].push_back({{"id", b.id}, {"type", "V"}, {"v", b.v}});
        else
            j["buses"].push_back({{"id", b.id},
                                  {"type", "P"},
                                  {"i0", b.zip.i0},
                                  {"p0", b.zip.p0},
                                  {"g0", b.zip.g0}});
    }
    j["lines"] = json::array();
    for (const Line& l : net.lines)
        j["lines"].push_back({{"from", l.from}, {"to", l.to}, {"g", l.g}});
    j["band"] = {{"v_min", net.band.v_lo()}, {"v_max", net.band.v_hi()}};
    j["q"] = norm_order_to_int(net.q);
    return j;
}

json report_to_json(const ConditionReport& report) {
    json j;
    j["monotone_current"] = margin_to_json(report.monotone_current);
    j["monotone_power"] = margin_to_json(report.monotone_power);
    j["global_convexity"] = margin_to_json(report.global_convexity);
    j["local_convexity"] = margin_to_json(report.local_convexity);
    j["lambda_min_g"] = report.lambda_min_g;

    json ball;
    const BallAnalysis& b = report.contraction;
    ball["beta"] = b.beta;
    ball["d_min"] = b.d_min;
    ball["d_max"] = b.d_max;
    ball["feasible"] = b.feasible;
    ball["r_under"] = b.r_under ? json(*b.r_under) : json(nullptr);
    ball["r_over"] = b.r_over ? json(*b.r_over) : json(nullptr);
    ball["ball_in_box"] = b.ball_in_box ? json(*b.ball_in_box) : json(nullptr);
    ball["box_in_ball"] = b.box_in_ball ? json(*b.box_in_ball) : json(nullptr);
    j["contraction"] = ball;

    j["recommended"] = {{"method", method_name(report.recommended.method)},
                        {"rationale", report.recommended.rationale}};
    return j;
}

json result_to_json(const SolveResult& result, const std::string& method) {
    json j;
    j["method"] = method;
    j["status"] = to_string(result.status);
    j["iterations"] = result.iterations;
    j["residual_inf"] = result.residual_inf; // NaN serializes as null
    j["in_band"] = result.in_band;
    j["v"] = json::array();
    for (Eigen::Index i = 0; i < result.v.size(); ++i) j["v"].push_back(result.v(i));
    return j;
}

json diagnostics_to_json(const ZbusDiagnostics& diag) {
    json j;
    j["alpha_theoretical"] =
        diag.alpha_theoretical ? json(*diag.alpha_theoretical) : json(nullptr);
    j["r_used"] = diag.r_used ? json(*diag.r_used) : json(nullptr);
    j["alpha_empirical"] = diag.alpha_empirical;
    j["alpha_empirical_in_ball"] = diag.alpha_empirical_in_ball;
    j["stayed_in_uniqueness_ball"] = diag.stayed_in_uniqueness_ball;
    j["averaging_engaged"] = diag.averaging_engaged;
    j["monotone_route_ok"] = diag.monotone_route_ok;
    j["feasible"] = diag.ball.feasible;
    return j;
}

json mc_summary_to_json(const McSummary& summary) {
    json j;
    j["trials"] = summary.trials;
    j["agree_count"] = summary.agree_count;
    j["fail_count"] = summary.fail_count;
    j["worst_disagreement"] = summary.worst_disagreement;
    j["conditions"] = {{"contraction", cell_to_json(summary.contraction)},
                       {"monotone", cell_to_json(summary.monotone_pair)},
                       {"local_convexity", cell_to_json(summary.local_convexity)}};
    return j;
}

void write_trace_csv(std::ostream& os, const SolveResult& result) {
    std::ostringstream line;
    line.precision(17);
    if (!result.energy_trace.empty()) {
        os << "iter,energy,grad_inf\n";
        for (size_t i = 0; i < result.trace.size(); ++i) {
            line.str("");
            line << i + 1 << ',' << result.energy_trace[i] << ',' << result.trace[i] << '\n';
            os << line.str();
        }
    } else {
        os << "iter,inf_norm_diff\n";
        for (size_t i = 0; i < result.trace.size(); ++i) {
            line.str("");
            line << i + 1 << ',' << result.trace[i] << '\n';
            os << line.str();
        }
    }
}

} // namespace dcflow
