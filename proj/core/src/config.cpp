#include "leflab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace leflab::config {

namespace {

std::vector<double> parse_double_list(const std::string& text, int line, int col) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("expected a number, found '" + tok + "'", line, col);
        }
    }
    if (out.empty()) throw ConfigError("empty number list", line, col);
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

double parse_double(const std::string& text, int line, int col) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, found '" + text + "'", line, col);
    }
}

int parse_int(const std::string& text, int line, int col) {
    double v = parse_double(text, line, col);
    if (v != std::floor(v)) throw ConfigError("expected an integer", line, col);
    return static_cast<int>(v);
}

}  // namespace

SuiteConfig parse_suite_config(const std::string& text) {
    SuiteConfig cfg;
    harness::Scenario* current = nullptr;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        int first = 0;
        while (first < static_cast<int>(line.size()) &&
               (line[first] == ' ' || line[first] == '\t'))
            ++first;
        line.erase(0, first);
        line.erase(line.find_last_not_of(" \t\r") + 1);
        if (line.empty()) continue;
        const int col = first + 1;

        if (line == "}") {
            if (!current) throw ConfigError("'}' without an open scenario block", line_no, col);
            current = nullptr;
            continue;
        }

        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::string rest;
        std::getline(ls, rest);
        rest.erase(0, rest.find_first_not_of(" \t="));
        rest.erase(rest.find_last_not_of(" \t") + 1);

        if (key == "scenario") {
            if (current)
                throw ConfigError("nested scenario blocks are not allowed", line_no, col);
            std::istringstream rs(rest);
            std::string name, brace;
            rs >> name >> brace;
            if (name.empty()) throw ConfigError("scenario needs a name", line_no, col);
            if (brace != "{")
                throw ConfigError("expected '{' after the scenario name", line_no, col);
            harness::Scenario s;
            s.name = name;
            s.tolerance = cfg.tolerance;
            s.heat_tolerance = cfg.heat_tolerance;
            s.t_grid = cfg.t_grid;
            s.cutoff = cfg.cutoff;
            s.seed_grid = cfg.seed_grid;
            cfg.scenarios.push_back(std::move(s));
            current = &cfg.scenarios.back();
            continue;
        }

        if (rest.empty()) throw ConfigError("key '" + key + "' needs a value", line_no, col);

        if (!current) {
            if (key == "tolerance") cfg.tolerance = parse_double(rest, line_no, col);
            else if (key == "heat_tolerance") cfg.heat_tolerance = parse_double(rest, line_no, col);
            else if (key == "t_grid") cfg.t_grid = parse_double_list(rest, line_no, col);
            else if (key == "cutoff") cfg.cutoff = parse_double(rest, line_no, col);
            else if (key == "seed_grid") cfg.seed_grid = parse_int(rest, line_no, col);
            else if (key == "jobs") cfg.jobs = parse_int(rest, line_no, col);
            else throw ConfigError("unknown global key '" + key + "'", line_no, col);
            continue;
        }

        harness::Scenario& s = *current;
        if (key == "model") s.model_name = rest;
        else if (key == "resolution") s.resolution = parse_int(rest, line_no, col);
        else if (key == "collar_width") s.collar_width = parse_double(rest, line_no, col);
        else if (key == "c") s.c = parse_double(rest, line_no, col);
        else if (key == "boundary_map") s.boundary_map = rest;
        else if (key == "profile") {
            if (rest == "one-crossing") s.profile.kind = selfmap::ProfileSpec::Kind::one_crossing;
            else if (rest == "no-crossing") s.profile.kind = selfmap::ProfileSpec::Kind::no_crossing;
            else throw ConfigError("profile must be one-crossing|no-crossing", line_no, col);
        } else if (key == "interior_slope") s.profile.interior_slope = parse_double(rest, line_no, col);
        else if (key == "crossing") s.profile.crossing = parse_double(rest, line_no, col);
        else if (key == "crossing_slope") s.profile.crossing_slope = parse_double(rest, line_no, col);
        else if (key == "routes") s.routes = parse_string_list(rest);
        else if (key == "tolerance") s.tolerance = parse_double(rest, line_no, col);
        else if (key == "heat_tolerance") s.heat_tolerance = parse_double(rest, line_no, col);
        else if (key == "t_grid") s.t_grid = parse_double_list(rest, line_no, col);
        else if (key == "cutoff") s.cutoff = parse_double(rest, line_no, col);
        else if (key == "seed_grid") s.seed_grid = parse_int(rest, line_no, col);
        else throw ConfigError("unknown scenario key '" + key + "'", line_no, col);
    }
    if (current) throw ConfigError("unterminated scenario block", line_no, 1);
    return cfg;
}

SuiteConfig load_suite_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path, 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_suite_config(ss.str());
}

void validate_suite(const SuiteConfig& cfg) {
    for (const auto& s : cfg.scenarios) {
        auto bad = [&](const std::string& why) {
            throw ConfigError("scenario '" + s.name + "': " + why, 0, 0);
        };
        const catalog::ModelDescriptor* desc = nullptr;
        try {
            desc = &catalog::descriptor(s.model_name);
        } catch (const std::exception& ex) {
            bad(ex.what());
        }
        if (s.resolution != 0 && s.resolution < desc->min_resolution)
            bad("resolution below minimum " + std::to_string(desc->min_resolution));
        if (s.collar_width != 0 &&
            (s.collar_width <= 0 || s.collar_width > desc->max_collar))
            bad("collar width out of range");
        if (s.c <= 0) bad("c must be positive");
        if (std::abs(s.c - 1.0) < 1e-12) bad("c must differ from 1");
        try {
            selfmap::BoundaryIsometry::parse(s.boundary_map);
        } catch (const std::exception& ex) {
            bad(ex.what());
        }
        for (const auto& r : s.routes)
            if (r != "simplicial" && r != "analytic" && r != "heat")
                bad("unknown route '" + r + "'");
        if (s.routes.empty()) bad("no routes enabled");
        if (s.t_grid.size() < 4) bad("t_grid needs at least 4 points");
        for (std::size_t i = 1; i < s.t_grid.size(); ++i)
            if (!(s.t_grid[i] < s.t_grid[i - 1])) bad("t_grid must be strictly decreasing");
    }
}

}  // namespace leflab::config
