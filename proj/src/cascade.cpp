#include "hawkesn/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hawkesn {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                 ": malformed number '" + s + "'");
    }
}

std::string trim(std::string s) {
    const auto issp = [](unsigned char ch) { return std::isspace(ch) != 0; };
    while (!s.empty() && issp(s.back())) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && issp(s[b])) ++b;
    return s.substr(b);
}

}  // namespace

bool Cascade::has_ties() const noexcept {
    return std::adjacent_find(times.begin(), times.end()) != times.end();
}

void Cascade::validate(bool require_normalized) const {
    if (times.empty()) throw std::invalid_argument("cascade is empty");
    if (!std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("ordering error: event times are not sorted");
    if (times.front() < 0.0) throw std::invalid_argument("domain error: negative event time");
    if (require_normalized && times.front() != 0.0)
        throw std::invalid_argument("cascade not normalized: first event time != 0");
    if (!marks.empty()) {
        if (marks.size() != times.size())
            throw std::invalid_argument("marks/times length mismatch");
        for (double m : marks)
            if (!(m >= 1.0)) throw std::invalid_argument("domain error: mark < 1");
    }
}

bool HawkesNParams::infinite_pop() const noexcept { return std::isinf(n_pop); }

void HawkesNParams::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
    if (!(n_pop >= 1.0)) throw std::invalid_argument("n_pop must be >= 1");
    if (mu < 0.0) throw std::invalid_argument("mu must be >= 0");
    if (eta) {
        if (!(alpha > 1.0)) throw std::invalid_argument("alpha must be > 1");
        // eta = 0 collapses the mark factor and is accepted as the unmarked limit
        if (!(*eta >= 0.0 && *eta < alpha - 1.0))
            throw std::invalid_argument("eta must lie in [0, alpha - 1)");
    }
}

void SirParams::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (!(n_pop >= 1.0)) throw std::invalid_argument("n_pop must be >= 1");
    if (i0 < 1 || static_cast<double>(i0) > n_pop)
        throw std::invalid_argument("i0 must satisfy 1 <= i0 <= n_pop");
}

std::vector<double> SirRealization::infection_times() const {
    std::vector<double> out;
    for (const auto& e : events)
        if (e.kind == SirEventKind::Infection) out.push_back(e.time);
    return out;
}

std::vector<double> SirRealization::recovery_times() const {
    std::vector<double> out;
    for (const auto& e : events)
        if (e.kind == SirEventKind::Recovery) out.push_back(e.time);
    return out;
}

std::size_t SirRealization::infection_count() const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.kind == SirEventKind::Infection;
    return n;
}

Cascade SirRealization::as_cascade() const {
    Cascade c;
    c.times.assign(static_cast<std::size_t>(i0), 0.0);
    for (const auto& e : events)
        if (e.kind == SirEventKind::Infection) c.times.push_back(e.time);
    return c;
}

void SirRealization::validate() const {
    if (i0 < 0) throw std::invalid_argument("i0 must be >= 0");
    long infected = i0;
    double prev = 0.0;
    std::size_t infections = 0;
    for (const auto& e : events) {
        if (e.time < prev) throw std::invalid_argument("events not sorted by time");
        prev = e.time;
        if (e.kind == SirEventKind::Infection) {
            ++infections;
            ++infected;
        } else {
            --infected;
        }
        if (infected < 0)
            throw std::invalid_argument("recovery without a matching infectious individual");
    }
    if (n_pop && static_cast<double>(infections) > *n_pop - static_cast<double>(i0))
        throw std::invalid_argument("more infections than susceptibles");
}

Cascade parse_cascade_csv(const std::string& text, bool has_marks) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse error: empty file");
    auto header = split_line(line);
    for (auto& h : header) h = trim(h);
    const auto time_it = std::find(header.begin(), header.end(), "time");
    if (time_it == header.end()) throw std::runtime_error("parse error: missing 'time' column");
    const std::size_t time_col = static_cast<std::size_t>(time_it - header.begin());
    std::size_t mark_col = std::numeric_limits<std::size_t>::max();
    if (has_marks) {
        const auto mark_it = std::find(header.begin(), header.end(), "magnitude");
        if (mark_it == header.end())
            throw std::runtime_error("parse error: missing 'magnitude' column");
        mark_col = static_cast<std::size_t>(mark_it - header.begin());
    }

    Cascade c;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() <= time_col || (has_marks && fields.size() <= mark_col))
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": missing field");
        c.times.push_back(parse_number(trim(fields[time_col]), line_no));
        if (has_marks) c.marks.push_back(parse_number(trim(fields[mark_col]), line_no));
    }
    if (c.times.empty()) throw std::runtime_error("parse error: no events");

    c.validate(/*require_normalized=*/false);
    c.t0_offset = c.times.front();
    for (auto& t : c.times) t -= c.t0_offset;
    return c;
}

Cascade load_cascade(const std::string& path, bool has_marks) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_cascade_csv(buf.str(), has_marks);
}

std::string cascade_to_csv(const Cascade& c) {
    std::ostringstream out;
    out.precision(17);
    out << (c.has_marks() ? "time,magnitude\n" : "time\n");
    for (std::size_t j = 0; j < c.times.size(); ++j) {
        out << c.times[j];
        if (c.has_marks()) out << ',' << c.marks[j];
        out << '\n';
    }
    return out.str();
}

void save_cascade(const Cascade& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << cascade_to_csv(c);
}

CascadeSplit split_cascade(const Cascade& c, double fraction) {
    if (c.empty()) throw std::invalid_argument("cannot split an empty cascade");
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("fraction must lie in (0, 1]");
    const auto n = c.times.size();
    const auto k = std::min(n, static_cast<std::size_t>(
                                   std::ceil(fraction * static_cast<double>(n))));
    CascadeSplit out;
    out.observed.times.assign(c.times.begin(), c.times.begin() + k);
    out.holdout.times.assign(c.times.begin() + k, c.times.end());
    if (c.has_marks()) {
        out.observed.marks.assign(c.marks.begin(), c.marks.begin() + k);
        out.holdout.marks.assign(c.marks.begin() + k, c.marks.end());
    }
    out.observed.t0_offset = c.t0_offset;
    out.holdout.t0_offset = c.t0_offset;
    return out;
}

SirRealization parse_sir_realization_csv(const std::string& text, int i0,
                                         std::optional<double> n_pop) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse error: empty file");
    auto header = split_line(line);
    for (auto& h : header) h = trim(h);
    const auto time_it = std::find(header.begin(), header.end(), "time");
    const auto kind_it = std::find(header.begin(), header.end(), "kind");
    if (time_it == header.end() || kind_it == header.end())
        throw std::runtime_error("parse error: need 'time' and 'kind' columns");
    const std::size_t time_col = static_cast<std::size_t>(time_it - header.begin());
    const std::size_t kind_col = static_cast<std::size_t>(kind_it - header.begin());

    SirRealization r;
    r.i0 = i0;
    r.n_pop = n_pop;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() <= std::max(time_col, kind_col))
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": missing field");
        SirEvent e;
        e.time = parse_number(trim(fields[time_col]), line_no);
        const std::string kind = trim(fields[kind_col]);
        if (kind == "I")
            e.kind = SirEventKind::Infection;
        else if (kind == "R")
            e.kind = SirEventKind::Recovery;
        else
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": kind must be I or R");
        r.events.push_back(e);
    }
    r.validate();
    return r;
}

SirRealization load_sir_realization(const std::string& path, int i0, std::optional<double> n_pop) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sir_realization_csv(buf.str(), i0, n_pop);
}

std::string sir_realization_to_csv(const SirRealization& r) {
    std::ostringstream out;
    out.precision(17);
    out << "time,kind\n";
    for (const auto& e : r.events)
        out << e.time << ',' << (e.kind == SirEventKind::Infection ? 'I' : 'R') << '\n';
    return out.str();
}

void save_sir_realization(const SirRealization& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << sir_realization_to_csv(r);
}

}  // namespace hawkesn
