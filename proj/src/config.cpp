#include "parafree/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "parafree/field_io.hpp"
#include "parafree/model_fields.hpp"

namespace parafree {

namespace {

std::string trim(const std::string& s) {
    const std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const std::size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_words(const std::string& s) {
    std::vector<std::string> words;
    std::istringstream in(s);
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) parts.push_back(trim(part));
    return parts;
}

const std::set<std::string> kEstimators = {"thickness", "nondegeneracy", "growth", "decay",
                                           "monotonicity"};

struct Parser {
    std::string path;
    int line_no = 0;
    std::string section;
    std::set<std::string> seen;
    RunConfig cfg;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(path + " line " + std::to_string(line_no) + ": " + msg);
    }

    double number(const std::string& key, const std::string& text) const {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != text.size() || text.empty()) {
            fail("[" + section + "] " + key + " expects a number, got '" + text + "'");
        }
        return v;
    }

    int integer(const std::string& key, const std::string& text) const {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(text, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != text.size() || text.empty()) {
            fail("[" + section + "] " + key + " expects an integer, got '" + text + "'");
        }
        return v;
    }

    std::vector<double> numbers(const std::string& key, const std::string& text) const {
        std::vector<double> values;
        for (const std::string& w : split_words(text)) values.push_back(number(key, w));
        return values;
    }

    /// Semicolon-separated groups of numbers (policy matrices, base points).
    std::vector<std::vector<double>> number_rows(const std::string& key,
                                                 const std::string& text) const {
        std::vector<std::vector<double>> rows;
        for (const std::string& part : split_on(text, ';')) {
            if (part.empty()) continue;
            rows.push_back(numbers(key, part));
            if (rows.back().empty()) rows.pop_back();
        }
        return rows;
    }

    void enter_section(const std::string& name) {
        static const std::set<std::string> known = {"operator", "grid", "problem", "analysis",
                                                    "output"};
        if (!known.count(name)) fail("unknown section [" + name + "]");
        section = name;
        if (name == "analysis") cfg.has_analysis = true;
    }

    void assign(const std::string& key, const std::string& value) {
        if (section.empty()) fail("key '" + key + "' appears before any section");
        if (!seen.insert(section + "." + key).second) {
            fail("[" + section + "] repeats key '" + key + "'");
        }
        if (section == "operator") {
            if (key == "kind") cfg.op_kind = value;
            else if (key == "lambda_lo") cfg.lambda_lo = number(key, value);
            else if (key == "lambda_hi") cfg.lambda_hi = number(key, value);
            else if (key == "sense") cfg.sense = value;
            else if (key == "family") cfg.family = number_rows(key, value);
            else fail("[operator] has no key '" + key + "'");
        } else if (section == "grid") {
            if (key == "n") cfg.n = integer(key, value);
            else if (key == "nx") cfg.nx = integer(key, value);
            else if (key == "L") cfg.L = number(key, value);
            else if (key == "t0") cfg.t0 = number(key, value);
            else if (key == "t1") cfg.t1 = number(key, value);
            else fail("[grid] has no key '" + key + "'");
        } else if (section == "problem") {
            if (key == "mode") cfg.mode = value;
            else if (key == "data") cfg.data = value;
            else if (key == "mask") cfg.mask_file = value;
            else if (key == "direction") cfg.direction = numbers(key, value);
            else if (key == "K") cfg.K = number(key, value);
            else if (key == "field_scale") cfg.field_scale = number(key, value);
            else if (key == "max_mask_iters") cfg.max_mask_iters = integer(key, value);
            else if (key == "net_points") cfg.net_points = integer(key, value);
            else if (key == "tol") cfg.tol = number(key, value);
            else if (key == "max_sweeps") cfg.max_sweeps = integer(key, value);
            else fail("[problem] has no key '" + key + "'");
        } else if (section == "analysis") {
            if (key == "estimators") cfg.estimators = split_words(value);
            else if (key == "points") cfg.points = number_rows(key, value);
            else if (key == "radii") cfg.radii = numbers(key, value);
            else if (key == "rho") cfg.rho = number(key, value);
            else if (key == "p") cfg.p = number(key, value);
            else if (key == "c0") cfg.c0 = number(key, value);
            else if (key == "e") cfg.e = numbers(key, value);
            else if (key == "epsilon") cfg.epsilon = number(key, value);
            else if (key == "k_max") cfg.k_max = integer(key, value);
            else if (key == "nx_ref") cfg.nx_ref = integer(key, value);
            else fail("[analysis] has no key '" + key + "'");
        } else {  // output
            if (key == "dir") cfg.out_dir = value;
            else fail("[output] has no key '" + key + "'");
        }
    }
};

[[noreturn]] void reject(const std::string& msg) { throw ConfigError(msg); }

void require(bool ok, const std::string& msg) {
    if (!ok) reject(msg);
}

double norm_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    Parser parser;
    parser.path = path;
    std::string line;
    while (std::getline(in, line)) {
        ++parser.line_no;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#' || body[0] == ';') continue;
        if (body.front() == '[') {
            if (body.back() != ']') parser.fail("malformed section header '" + body + "'");
            parser.enter_section(trim(body.substr(1, body.size() - 2)));
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) parser.fail("expected key = value, got '" + body + "'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) parser.fail("empty key before '='");
        parser.assign(key, value);
    }
    validate_config(parser.cfg);
    return parser.cfg;
}

void validate_config(const RunConfig& cfg) {
    // [operator]
    const bool linear = cfg.op_kind == "linear";
    const bool bellman = cfg.op_kind == "bellman";
    require(linear || bellman || cfg.op_kind == "pucci_plus" || cfg.op_kind == "pucci_minus",
            "[operator] kind '" + cfg.op_kind +
                "' is not one of linear, bellman, pucci_plus, pucci_minus");
    require(cfg.lambda_lo > 0.0, "[operator] lambda_lo must be positive");
    require(cfg.lambda_lo <= cfg.lambda_hi, "[operator] lambda_lo must not exceed lambda_hi");
    require(cfg.sense == "max" || cfg.sense == "min",
            "[operator] sense must be max or min, got '" + cfg.sense + "'");
    require(!bellman || !cfg.family.empty(), "[operator] family is required for a bellman operator");
    require(linear || bellman || cfg.family.empty(),
            "[operator] family only applies to linear and bellman operators");
    require(!linear || cfg.family.size() <= 1, "[operator] a linear operator takes one family row");

    // [grid]
    require(cfg.n == 1 || cfg.n == 2, "[grid] n must be 1 or 2");
    require(cfg.nx >= 3 && cfg.nx % 2 == 1, "[grid] nx must be odd and at least 3");
    require(cfg.L > 0.0, "[grid] L must be positive");
    require(cfg.t0 < cfg.t1, "[grid] t0 must lie below t1");
    const std::size_t row_len = cfg.n == 1 ? 1 : 3;
    for (const auto& row : cfg.family) {
        require(row.size() == row_len,
                "[operator] family rows need " + std::to_string(row_len) +
                    " entries in dimension " + std::to_string(cfg.n));
    }

    // [problem]
    require(cfg.mode == "value" || cfg.mode == "gradient",
            "[problem] mode must be value or gradient, got '" + cfg.mode + "'");
    require(!cfg.data.empty(), "[problem] data must name a fixture or a field file");
    if (!data_is_fixture(cfg)) {
        require(std::filesystem::exists(cfg.data),
                "[problem] data file '" + cfg.data + "' does not exist");
    }
    if (!cfg.mask_file.empty()) {
        require(std::filesystem::exists(cfg.mask_file),
                "[problem] mask file '" + cfg.mask_file + "' does not exist");
    }
    if (!cfg.direction.empty()) {
        require(cfg.direction.size() == static_cast<std::size_t>(cfg.n),
                "[problem] direction needs " + std::to_string(cfg.n) + " entries");
        require(norm_of(cfg.direction) > 0.0, "[problem] direction must be nonzero");
    }
    require(cfg.K > 0.0, "[problem] K must be positive");
    require(cfg.field_scale > 0.0, "[problem] field_scale must be positive");
    require(cfg.max_mask_iters >= 1, "[problem] max_mask_iters must be at least 1");
    require(cfg.net_points >= 2, "[problem] net_points must be at least 2");
    require(cfg.tol > 0.0, "[problem] tol must be positive");
    require(cfg.max_sweeps >= 1, "[problem] max_sweeps must be at least 1");

    // [analysis]
    for (const std::string& name : cfg.estimators) {
        require(kEstimators.count(name) != 0, "[analysis] unknown estimator '" + name + "'");
    }
    for (const auto& row : cfg.points) {
        require(row.size() == static_cast<std::size_t>(cfg.n) + 1,
                "[analysis] points entries need " + std::to_string(cfg.n + 1) +
                    " coordinates (x" + std::string(cfg.n == 2 ? ", y" : "") + ", t)");
        for (const double v : row) require(std::isfinite(v), "[analysis] points must be finite");
    }
    for (const double r : cfg.radii) require(r > 0.0, "[analysis] radii must be positive");
    require(cfg.rho > 0.0 && cfg.rho < 1.0, "[analysis] rho must lie in (0, 1)");
    require(cfg.p >= 1.0, "[analysis] p must be at least 1");
    require(cfg.c0 >= 0.0, "[analysis] c0 must be nonnegative");
    if (!cfg.e.empty()) {
        require(cfg.e.size() == static_cast<std::size_t>(cfg.n) + 1,
                "[analysis] e needs " + std::to_string(cfg.n) + " spatial entries plus a time entry");
        require(norm_of(cfg.e) > 0.0, "[analysis] e must be nonzero");
    }
    require(cfg.epsilon >= 0.0, "[analysis] epsilon must be nonnegative");
    require(cfg.k_max >= 0, "[analysis] k_max must be nonnegative");
    require(cfg.nx_ref == 0 || (cfg.nx_ref >= 9 && cfg.nx_ref % 2 == 1),
            "[analysis] nx_ref must be 0 (automatic) or odd and at least 9");

    // [output]
    require(!cfg.out_dir.empty(), "[output] dir must be nonempty");
}

Operator operator_from_config(const RunConfig& cfg) {
    try {
        if (cfg.op_kind == "pucci_plus") return make_pucci_plus(cfg.n, cfg.lambda_lo, cfg.lambda_hi);
        if (cfg.op_kind == "pucci_minus") {
            return make_pucci_minus(cfg.n, cfg.lambda_lo, cfg.lambda_hi);
        }
        auto matrix = [&](const std::vector<double>& row) {
            return cfg.n == 1 ? SymMat::make(1, row[0], 0.0, 0.0)
                              : SymMat::make(2, row[0], row[1], row[2]);
        };
        if (cfg.op_kind == "linear") {
            return make_linear(cfg.family.empty() ? SymMat::identity(cfg.n)
                                                  : matrix(cfg.family.front()));
        }
        std::vector<SymMat> family;
        family.reserve(cfg.family.size());
        for (const auto& row : cfg.family) family.push_back(matrix(row));
        return make_bellman(cfg.n, std::move(family),
                            cfg.sense == "max" ? PolicySense::Max : PolicySense::Min);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("[operator] ") + e.what());
    }
}

Grid grid_from_config(const RunConfig& cfg) {
    try {
        return make_grid(cfg.n, cfg.nx, cfg.L, cfg.t0, cfg.t1);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("[grid] ") + e.what());
    }
}

FreeBoundaryParams params_from_config(const RunConfig& cfg) {
    FreeBoundaryParams params;
    params.rule = cfg.mode == "value" ? MaskRule::ValueThreshold : MaskRule::GradientThreshold;
    params.field_scale = cfg.field_scale;
    params.max_mask_iters = cfg.max_mask_iters;
    params.net_points = cfg.net_points;
    params.tol = cfg.tol;
    params.max_sweeps = cfg.max_sweeps;
    return params;
}

bool data_is_fixture(const RunConfig& cfg) {
    return cfg.data == "halfspace" || cfg.data == "nonconvex" || cfg.data == "caloric";
}

namespace {

void unit_direction(const RunConfig& cfg, double* e) {
    e[0] = 1.0;
    e[1] = 0.0;
    if (!cfg.direction.empty()) {
        const double norm = norm_of(cfg.direction);
        e[0] = cfg.direction[0] / norm;
        if (cfg.n == 2) e[1] = cfg.direction[1] / norm;
    }
}

}  // namespace

Field data_from_config(const RunConfig& cfg, const Operator& op) {
    if (!data_is_fixture(cfg)) {
        try {
            return read_field(cfg.data);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("[problem] ") + e.what());
        }
    }
    const Grid g = grid_from_config(cfg);
    if (cfg.data == "halfspace") {
        double e[2];
        unit_direction(cfg, e);
        return make_halfspace_field(g, op, e);
    }
    if (cfg.data == "nonconvex") return make_nonconvex_field(g);
    return make_caloric_field(g);
}

Mask mask_from_config(const RunConfig& cfg, const Field& u) {
    if (!cfg.mask_file.empty()) {
        Mask m;
        try {
            m = read_mask(cfg.mask_file);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("[problem] ") + e.what());
        }
        if (!m.grid.same_layout(u.grid)) {
            reject("[problem] mask file '" + cfg.mask_file + "' does not match the data grid");
        }
        return m;
    }
    if (cfg.data == "halfspace") {
        double e[2];
        unit_direction(cfg, e);
        return make_halfspace_mask(u.grid, e);
    }
    if (cfg.data == "nonconvex") return make_nonconvex_mask(u.grid);
    if (cfg.data == "caloric") return make_mask(u.grid, true);
    return apply_mask_rule(u, params_from_config(cfg).rule, cfg.field_scale);
}

void validate_points(const RunConfig& cfg, const Grid& g) {
    const double pad_x = 1e-9 * g.h;
    const double pad_t = 1e-9 * g.dt;
    for (const auto& row : cfg.points) {
        bool inside = std::abs(row[0]) <= g.L + pad_x;
        if (cfg.n == 2) inside = inside && std::abs(row[1]) <= g.L + pad_x;
        const double t = row.back();
        inside = inside && t >= g.t0 - pad_t && t <= g.t1 + pad_t;
        if (!inside) {
            std::string text;
            for (const double v : row) text += (text.empty() ? "" : " ") + std::to_string(v);
            reject("[analysis] point (" + text + ") lies outside the grid box");
        }
    }
}

}  // namespace parafree
