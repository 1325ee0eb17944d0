#include "sclab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace sclab::cfg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& v, bool& ok) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    ok = true;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            ok = false;
            return out;
        }
        char* end = nullptr;
        double d = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0') {
            ok = false;
            return out;
        }
        out.push_back(d);
    }
    if (out.empty()) ok = false;
    return out;
}

struct Parser {
    ExperimentSpec spec;
    std::vector<ConfigError> errors;
    int line = 0;

    void err(const std::string& m) { errors.push_back({line, m}); }

    bool num(const std::string& v, double& out) {
        char* end = nullptr;
        out = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0') {
            err("expected a number, got '" + v + "'");
            return false;
        }
        return true;
    }
    bool integer(const std::string& v, long long& out) {
        char* end = nullptr;
        out = std::strtoll(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0') {
            err("expected an integer, got '" + v + "'");
            return false;
        }
        return true;
    }
    void dval(const std::string& v, double& target) {
        double d;
        if (num(v, d)) target = d;
    }
    void list(const std::string& v, std::vector<double>& target) {
        bool ok;
        auto l = parse_list(v, ok);
        if (ok)
            target = l;
        else
            err("expected a comma-separated number list, got '" + v + "'");
    }

    void key(const std::string& section, const std::string& k, const std::string& v) {
        long long i;
        if (section == "experiment") {
            if (k == "name") spec.name = v;
            else if (k == "task") {
                const auto& tasks = known_tasks();
                if (std::find(tasks.begin(), tasks.end(), v) == tasks.end())
                    err("unknown task '" + v + "'");
                else
                    spec.task = v;
            } else if (k == "seed") {
                if (integer(v, i)) spec.seed = static_cast<uint64_t>(i);
            } else if (k == "output_dir") spec.output_dir = v;
            else err("unknown key '" + k + "' in [experiment]");
        } else if (section == "grid") {
            if (k == "dim") {
                if (integer(v, i)) {
                    if (i != 1 && i != 2) err("dim out of {1,2}");
                    else spec.dim = static_cast<int>(i);
                }
            } else if (k == "n") {
                if (integer(v, i)) {
                    if (i < 4) err("n out of [4, inf)");
                    else spec.n = static_cast<int>(i);
                }
            } else err("unknown key '" + k + "' in [grid]");
        } else if (section == "flux") {
            if (k == "kind") {
                if (v != "burgers" && v != "linear" && v != "polynomial" && v != "zero")
                    err("unknown flux kind '" + v + "'");
                else
                    spec.flux_kind = v;
            } else if (k == "c") list(v, spec.linear_c);
            else if (k == "coeffs") list(v, spec.poly_coeffs);
            else err("unknown key '" + k + "' in [flux]");
        } else if (section == "noise") {
            if (k == "k") {
                if (integer(v, i)) {
                    if (i < 1) err("K out of [1, inf)");
                    else spec.K = static_cast<int>(i);
                }
            } else if (k == "sigma") {
                dval(v, spec.sigma);
                if (spec.sigma < 0) err("sigma out of [0, inf)");
            } else if (k == "q") {
                dval(v, spec.q);
                if (spec.q < 1) err("q out of [1, inf)");
            } else if (k == "b0") dval(v, spec.b0);
            else if (k == "b1") dval(v, spec.b1);
            else err("unknown key '" + k + "' in [noise]");
        } else if (section == "initial") {
            if (k == "kind") {
                if (v != "riemann" && v != "constant" && v != "cosine")
                    err("unknown initial kind '" + v + "'");
                else
                    spec.init_kind = v;
            } else if (k == "left") dval(v, spec.init_left);
            else if (k == "right") dval(v, spec.init_right);
            else if (k == "value") dval(v, spec.init_value);
            else if (k == "amplitude") dval(v, spec.init_amplitude);
            else if (k == "freq") {
                if (integer(v, i)) spec.init_freq = static_cast<int>(i);
            } else err("unknown key '" + k + "' in [initial]");
        } else if (section == "control") {
            if (k == "kind") {
                if (v != "zero" && v != "constant" && v != "file")
                    err("unknown control kind '" + v + "'");
                else
                    spec.control_kind = v;
            } else if (k == "level") list(v, spec.control_level);
            else if (k == "file") spec.control_file = v;
            else err("unknown key '" + k + "' in [control]");
        } else if (section == "time") {
            if (k == "t") {
                dval(v, spec.T);
                if (!(spec.T > 0)) err("T out of (0, inf)");
            } else if (k == "steps") {
                if (integer(v, i)) {
                    if (i < 1) err("steps out of [1, inf)");
                    else spec.steps = static_cast<int>(i);
                }
            } else err("unknown key '" + k + "' in [time]");
        } else if (section == "solver") {
            if (k == "cfl") {
                dval(v, spec.cfl);
                if (!(spec.cfl > 0 && spec.cfl <= 1)) err("cfl out of (0,1]");
            } else if (k == "scheme") {
                if (v != "engquist_osher" && v != "godunov")
                    err("unknown scheme '" + v + "'");
                else
                    spec.scheme = v;
            } else if (k == "eta") {
                dval(v, spec.eta);
                if (spec.eta < 0) err("eta out of [0, inf)");
            } else if (k == "r") {
                double d;
                if (num(v, d)) {
                    if (!(d > 0)) err("R out of (0, inf)");
                    else spec.R = d;
                }
            } else if (k == "eps") {
                dval(v, spec.eps);
                if (spec.eps < 0) err("eps out of [0, inf)");
            } else err("unknown key '" + k + "' in [solver]");
        } else if (section == "mc") {
            if (k == "n_traj") {
                if (integer(v, i)) {
                    if (i < 100) err("n_traj out of [100, inf)");
                    else spec.n_traj = static_cast<uint64_t>(i);
                }
            } else if (k == "eps_list") list(v, spec.eps_list);
            else if (k == "event") {
                if (v != "mean_threshold" && v != "l1_ball_complement")
                    err("unknown event '" + v + "'");
                else
                    spec.event_kind = v;
            } else if (k == "threshold") {
                dval(v, spec.event_threshold);
                if (spec.event_threshold < 0) err("threshold out of [0, inf)");
            } else if (k == "ref") dval(v, spec.event_ref);
            else if (k == "action_star") dval(v, spec.action_star);
            else err("unknown key '" + k + "' in [mc]");
        } else if (section == "minimize") {
            if (k == "delta_target") {
                dval(v, spec.delta_target);
                if (!(spec.delta_target > 0)) err("delta_target out of (0, inf)");
            } else if (k == "shift") dval(v, spec.target_shift);
            else if (k == "steps") {
                if (integer(v, i)) {
                    if (i < 1) err("steps out of [1, inf)");
                    else spec.opt_steps = static_cast<int>(i);
                }
            } else err("unknown key '" + k + "' in [minimize]");
        } else if (section == "condb") {
            if (k == "n_traj") {
                if (integer(v, i)) spec.n_traj = static_cast<uint64_t>(i);
            } else if (k == "eps_list") list(v, spec.eps_list);
            else if (k == "m") dval(v, spec.M);
            else if (k == "delta") dval(v, spec.delta);
            else err("unknown key '" + k + "' in [condb]");
        } else if (section == "weakprobe") {
            if (k == "amplitude") dval(v, spec.osc_amplitude);
            else if (k == "mode") {
                if (integer(v, i)) {
                    if (i < 1) err("mode out of [1, K]");
                    else spec.osc_mode = static_cast<int>(i);
                }
            } else if (k == "eps_list") list(v, spec.eps_list);
            else if (k == "m") dval(v, spec.M);
            else err("unknown key '" + k + "' in [weakprobe]");
        } else if (section == "kinetic") {
            if (k == "xi_min") dval(v, spec.xi_min);
            else if (k == "xi_max") dval(v, spec.xi_max);
            else if (k == "points") {
                if (integer(v, i)) {
                    if (i < 16) err("points out of [16, inf)");
                    else spec.xi_points = static_cast<int>(i);
                }
            } else err("unknown key '" + k + "' in [kinetic]");
        }
    }
};

}  // namespace

const std::vector<std::string>& known_tasks() {
    static const std::vector<std::string> tasks = {
        "solve",  "skeleton", "parabolic",  "mc",           "minimize",
        "cond-b", "weak-probe", "kinetic-check", "action", "ldp-fit"};
    return tasks;
}

ParseResult parse_config(const std::string& text) {
    Parser p;
    std::set<std::string> known = {"experiment", "grid",     "flux",   "noise",
                                   "initial",    "control",  "time",   "solver",
                                   "mc",         "minimize", "condb",  "weakprobe",
                                   "kinetic"};
    std::set<std::string> seen;
    std::string section;
    bool section_known = true;

    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
        ++p.line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                p.err("malformed section header '" + s + "'");
                section_known = false;
                continue;
            }
            section = trim(s.substr(1, s.size() - 2));
            std::transform(section.begin(), section.end(), section.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            section_known = known.count(section) > 0;
            if (!section_known)
                p.err("unknown section [" + section + "]");
            else
                seen.insert(section);
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            p.err("expected 'key = value', got '" + s + "'");
            continue;
        }
        if (section.empty()) {
            p.err("key outside any section");
            continue;
        }
        if (!section_known) continue;  // already reported once
        std::string k = trim(s.substr(0, eq));
        std::string v = trim(s.substr(eq + 1));
        std::transform(k.begin(), k.end(), k.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        p.key(section, k, v);
    }

    for (const char* req : {"grid", "flux", "noise", "time"})
        if (!seen.count(req))
            p.errors.push_back({0, std::string("missing section [") + req + "]"});

    // cross-field checks
    p.line = 0;
    if (p.spec.control_kind == "constant" && p.spec.control_level.empty())
        p.err("[control] kind = constant requires level");
    if (p.spec.control_kind == "file" && p.spec.control_file.empty())
        p.err("[control] kind = file requires file");
    if (!(p.spec.xi_min < p.spec.xi_max)) p.err("[kinetic] xi_min < xi_max required");
    if (p.spec.osc_mode > p.spec.K) p.err("[weakprobe] mode out of [1, K]");

    return {std::move(p.spec), std::move(p.errors)};
}

}  // namespace sclab::cfg
