#include "ddtopt/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ddtopt {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_torque_csv(std::ostream& os, const TorqueTrajectory& traj) {
    os << "t,v,theta,omega,u1,u2\n";
    for (const auto& s : traj.samples)
        os << format_double(s.t) << ',' << format_double(s.q.v) << ','
           << format_double(s.q.theta) << ',' << format_double(s.q.omega) << ','
           << format_double(s.u1) << ',' << format_double(s.u2) << '\n';
}

void write_kinematic_csv(std::ostream& os, const KinematicTrajectory& traj) {
    os << "t,x,y,theta,v,omega,phiR,phiL\n";
    for (const auto& s : traj.samples)
        os << format_double(s.t) << ',' << format_double(s.pose.x) << ','
           << format_double(s.pose.y) << ',' << format_double(s.pose.theta) << ','
           << format_double(s.pose.v) << ',' << format_double(s.pose.omega) << ','
           << format_double(s.phi_R) << ',' << format_double(s.phi_L) << '\n';
}

void write_events_csv(std::ostream& os, const std::vector<Event>& events) {
    os << "t,event\n";
    for (const auto& e : events) os << format_double(e.t) << ',' << e.what << '\n';
}

void write_plan(std::ostream& os, const PhasePlan& plan) {
    for (const auto& [phase, dur] : plan.phases)
        os << phase_name(phase) << ',' << format_double(dur) << '\n';
    os << "total," << format_double(plan.total_time()) << '\n';
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + " from '" + s + "'");
    }
}

}  // namespace

PhasePlan read_plan(std::istream& is) {
    PhasePlan plan;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split(line, ',');
        if (cols.empty()) continue;
        if (cols[0] == "total" || cols[0] == "kind") continue;
        if (cols.size() != 2)
            throw std::invalid_argument("plan line must be 'phase,duration': " + line);
        const auto phase = phase_from_name(cols[0]);
        if (!phase) throw std::invalid_argument("unknown phase name: " + cols[0]);
        plan.phases.emplace_back(*phase, parse_double(cols[1], "duration"));
    }
    plan.kind = infer_plan_kind(plan);
    return normalized(std::move(plan));
}

PhasePlan read_plan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open plan file: " + path);
    return read_plan(in);
}

RefSignal read_ref_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open reference file: " + path);
    RefSignal ref;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first && line.rfind("t,", 0) == 0) {
            first = false;
            continue;  // header
        }
        first = false;
        const auto cols = split(line, ',');
        if (cols.size() != 3)
            throw std::invalid_argument("reference line must be 't,vdx,vdy': " + line);
        ref.samples.push_back({parse_double(cols[0], "t"), parse_double(cols[1], "vdx"),
                               parse_double(cols[2], "vdy")});
    }
    if (ref.samples.empty()) throw std::invalid_argument("reference file is empty: " + path);
    std::sort(ref.samples.begin(), ref.samples.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return ref;
}

}  // namespace ddtopt
