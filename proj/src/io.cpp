#include "hawkesn/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hawkesn {

using ordered_json = nlohmann::ordered_json;

std::string size_distribution_to_csv(const SizeDistribution& d) {
    std::ostringstream out;
    out.precision(17);
    out << "size,probability\n";
    for (std::size_t k = 0; k < d.p.size(); ++k) out << k << ',' << d.p[k] << '\n';
    return out.str();
}

std::string size_distribution_to_json(const SizeDistribution& d) {
    ordered_json j = d.p;
    return j.dump();
}

std::string trajectory_to_csv(const SirTrajectory& tr) {
    std::ostringstream out;
    out.precision(17);
    out << "time,S,I,R\n";
    for (std::size_t k = 0; k < tr.size(); ++k)
        out << tr.t[k] << ',' << tr.s[k] << ',' << tr.i[k] << ',' << tr.r[k] << '\n';
    return out.str();
}

namespace {

const char* verdict_name(NVerdict v) {
    switch (v) {
        case NVerdict::ValidN: return "valid-N";
        case NVerdict::NoValidN: return "no-valid-N";
        default: return "not-applicable";
    }
}

}  // namespace

std::string fit_report_to_json(const FitReport& report, int indent) {
    ordered_json j;
    ordered_json params;
    if (std::holds_alternative<HawkesNParams>(report.params)) {
        const auto& p = report.hawkesn_params();
        params["model"] = "hawkesn";
        params["mu"] = p.mu;
        params["kappa"] = p.kappa;
        params["theta"] = p.theta;
        params["n_pop"] = p.n_pop;
        params["n_pop_rounded"] = std::isfinite(p.n_pop)
                                      ? ordered_json(static_cast<long>(std::llround(p.n_pop)))
                                      : ordered_json(nullptr);
        if (p.eta) {
            params["eta"] = *p.eta;
            params["alpha"] = p.alpha;
        }
    } else {
        const auto& p = report.sir_params();
        params["model"] = "sir-stochastic";
        params["beta"] = p.beta;
        params["gamma"] = p.gamma;
        params["n_pop"] = p.n_pop;
        params["n_pop_rounded"] = static_cast<long>(std::llround(p.n_pop));
        params["i0"] = p.i0;
    }
    j["params"] = params;
    j["log_likelihood"] = report.log_likelihood;
    j["converged"] = report.converged;
    j["verdict"] = verdict_name(report.verdict);
    j["statistic_s"] = report.statistic_s;
    if (report.fixed_n) {
        j["fixed_n"] = std::isfinite(*report.fixed_n) ? ordered_json(*report.fixed_n)
                                                      : ordered_json("infinity");
    } else {
        j["fixed_n"] = nullptr;
    }
    j["start_seed"] = report.start_seed;
    j["best_start"] = report.best_start;
    ordered_json starts = ordered_json::array();
    for (const auto& s : report.starts) {
        ordered_json js;
        js["x0"] = s.x0;
        js["log_likelihood"] = std::isfinite(s.log_likelihood) ? ordered_json(s.log_likelihood)
                                                               : ordered_json(nullptr);
        js["iterations"] = s.iterations;
        js["converged"] = s.converged;
        starts.push_back(js);
    }
    j["starts"] = starts;
    return indent >= 0 ? j.dump(indent) : j.dump();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace hawkesn
