#include "dgdiss/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace dgdiss {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string s = "invalid scenario config:";
    for (const auto& i : items)
        s += "\n  - " + i;
    return s;
}

class Reader {
public:
    explicit Reader(const json& doc) : doc_(doc) {
        if (!doc_.is_object())
            errors_.push_back("<root>: expected a JSON object");
    }

    template <class T>
    void get(const std::string& key, T& out) {
        seen_.insert(key);
        if (!doc_.is_object() || !doc_.contains(key))
            return;
        try {
            out = doc_.at(key).get<T>();
        } catch (const json::exception&) {
            errors_.push_back(key + ": wrong type (" + doc_.at(key).dump() + ")");
        }
    }

    const json* raw(const std::string& key) {
        seen_.insert(key);
        if (!doc_.is_object() || !doc_.contains(key))
            return nullptr;
        return &doc_.at(key);
    }

    void finish(const std::string& prefix) {
        if (!doc_.is_object())
            return;
        for (const auto& [k, v] : doc_.items())
            if (!seen_.count(k))
                errors_.push_back(prefix + k + ": unknown key");
    }

    std::vector<std::string> errors_;

private:
    const json& doc_;
    std::set<std::string> seen_;
};

template <class T>
bool enum_from(const std::string& s, const std::vector<std::pair<std::string, T>>& table, T& out) {
    for (const auto& [name, value] : table)
        if (name == s) {
            out = value;
            return true;
        }
    return false;
}

const std::vector<std::pair<std::string, Problem>> kProblems{
    {"heat", Problem::Heat}, {"advection_diffusion", Problem::AdvectionDiffusion}, {"burgers", Problem::Burgers}};
const std::vector<std::pair<std::string, Integrator>> kIntegrators{{"midpoint", Integrator::Midpoint},
                                                                   {"rk4", Integrator::Rk4}};
const std::vector<std::pair<std::string, EvaluationPoint>> kEval{{"midpoint", EvaluationPoint::Midpoint},
                                                                 {"endpoint", EvaluationPoint::Endpoint}};

const std::map<std::string, std::set<std::string>> kInitialParams{
    {"constant", {"value"}},
    {"sine", {"amplitude", "wavenumber", "offset"}},
    {"steep", {"amplitude", "width", "offset"}},
    {"taylor_green", {"amplitude"}},
    {"random", {"amplitude", "modes"}},
};

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::invalid_argument(join(problems)), problems_(problems) {}

ScenarioConfig parse_config(const json& doc) {
    ScenarioConfig c;
    Reader r(doc);

    std::string s;
    if (r.raw("problem")) {
        r.get("problem", s);
        if (!enum_from(s, kProblems, c.problem))
            r.errors_.push_back("problem: expected heat, advection_diffusion or burgers");
    }
    r.get("dim", c.dim);
    r.get("order", c.order);
    bool comps_given = r.raw("components") != nullptr;
    r.get("components", c.components);
    r.get("nu", c.nu);
    r.get("allow_sub_threshold_lambda", c.allow_sub_threshold_lambda);
    r.get("t_end", c.t_end);
    r.get("dt", c.dt);
    r.get("output", c.output);
    r.get("snapshot", c.snapshot);
    r.get("seed", c.seed);
    r.get("advection_velocity", c.advection_velocity);
    r.get("volume_quadrature_points", c.volume_quadrature_points);
    r.get("nonlinear_tolerance", c.nonlinear_tolerance);
    r.get("max_nonlinear_iterations", c.max_nonlinear_iterations);
    if (r.raw("integrator")) {
        r.get("integrator", s);
        if (!enum_from(s, kIntegrators, c.integrator))
            r.errors_.push_back("integrator: expected midpoint or rk4");
    }
    if (r.raw("evaluate_at")) {
        r.get("evaluate_at", s);
        if (!enum_from(s, kEval, c.evaluate_at))
            r.errors_.push_back("evaluate_at: expected midpoint or endpoint");
    }
    if (!comps_given)
        c.components = 1;

    auto per_axis = [&](const std::string& key, auto& out) {
        using V = typename std::decay_t<decltype(out)>::value_type;
        const json* j = r.raw(key);
        if (!j)
            return out.assign(static_cast<std::size_t>(std::max(c.dim, 1)), out.empty() ? V{} : out.front());
        try {
            if (j->is_array())
                out = j->get<std::vector<V>>();
            else
                out.assign(static_cast<std::size_t>(std::max(c.dim, 1)), j->get<V>());
        } catch (const json::exception&) {
            r.errors_.push_back(key + ": expected a number or an array of numbers");
        }
    };
    per_axis("cells_per_axis", c.cells_per_axis);
    per_axis("box_length", c.box_length);

    if (const json* l = r.raw("lambda")) {
        if (l->is_number()) {
            c.lambda = {LambdaMode::FactorOfStar, l->get<double>()};
        } else {
            Reader lr(*l);
            std::string mode = "factor";
            lr.get("mode", mode);
            lr.get("value", c.lambda.value);
            if (mode == "factor")
                c.lambda.mode = LambdaMode::FactorOfStar;
            else if (mode == "absolute")
                c.lambda.mode = LambdaMode::Absolute;
            else
                lr.errors_.push_back("mode: expected factor or absolute");
            lr.finish("lambda.");
            for (const auto& e : lr.errors_)
                r.errors_.push_back(e.rfind("lambda.", 0) == 0 ? e : "lambda." + e);
        }
    }

    if (const json* ic = r.raw("initial")) {
        if (!ic->is_object() || !ic->contains("name") || !ic->at("name").is_string()) {
            r.errors_.push_back("initial: expected an object with a string \"name\"");
        } else {
            c.initial.name = ic->at("name").get<std::string>();
            c.initial.params.clear();
            const auto known = kInitialParams.find(c.initial.name);
            if (known == kInitialParams.end())
                r.errors_.push_back("initial.name: unknown initial condition '" + c.initial.name + "'");
            for (const auto& [k, v] : ic->items()) {
                if (k == "name")
                    continue;
                if (known != kInitialParams.end() && !known->second.count(k))
                    r.errors_.push_back("initial." + k + ": unknown key");
                else if (!v.is_number())
                    r.errors_.push_back("initial." + k + ": expected a number");
                else
                    c.initial.params[k] = v.get<double>();
            }
        }
    }
    r.finish("");
    if (!r.errors_.empty())
        throw ConfigError(r.errors_);
    try {
        validate(c);
    } catch (const std::invalid_argument& e) {
        std::vector<std::string> items;
        std::istringstream is(e.what());
        std::string line;
        std::getline(is, line);
        while (std::getline(is, line))
            items.push_back(line.substr(line.find("- ") == std::string::npos ? 0 : line.find("- ") + 2));
        throw ConfigError(items);
    }
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError({path + ": cannot open"});
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({path + ": " + e.what()});
    }
    return parse_config(doc);
}

json config_to_json(const ScenarioConfig& c) {
    json ic = {{"name", c.initial.name}};
    for (const auto& [k, v] : c.initial.params)
        ic[k] = v;
    json j = {
        {"problem", to_string(c.problem)},
        {"dim", c.dim},
        {"cells_per_axis", c.cells_per_axis},
        {"box_length", c.box_length},
        {"order", c.order},
        {"components", c.components},
        {"nu", c.nu},
        {"lambda", {{"mode", to_string(c.lambda.mode)}, {"value", c.lambda.value}}},
        {"allow_sub_threshold_lambda", c.allow_sub_threshold_lambda},
        {"t_end", c.t_end},
        {"dt", c.dt},
        {"initial", ic},
        {"output", c.output},
        {"snapshot", c.snapshot},
        {"seed", c.seed},
        {"integrator", to_string(c.integrator)},
        {"evaluate_at", to_string(c.evaluate_at)},
        {"volume_quadrature_points", c.volume_quadrature_points},
        {"nonlinear_tolerance", c.nonlinear_tolerance},
        {"max_nonlinear_iterations", c.max_nonlinear_iterations},
    };
    if (!c.advection_velocity.empty())
        j["advection_velocity"] = c.advection_velocity;
    return j;
}

json ledger_metadata(const ScenarioConfig& config, const ResolvedPenalty& penalty) {
    // Output locations are not part of the scenario identity.
    json echo = config_to_json(config);
    echo.erase("output");
    echo.erase("snapshot");
    return {{"config", echo}, {"lambda", penalty.lambda},     {"lambda_star", penalty.lambda_star},
            {"certified", penalty.certified},   {"seed", config.seed},          {"code_version", kCodeVersion},
            {"nu", config.nu},                  {"a_columns_scaled_by_nu", true}, {"columns", ledger_columns()}};
}

void write_ledger_header(std::ostream& os, const json& metadata) {
    os << "# " << metadata.dump() << '\n';
    const auto& cols = ledger_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << cols[i];
    os << '\n';
}

void write_ledger_row(std::ostream& os, const DissipationSample& r) {
    const double v[] = {r.t,           r.kinetic_energy, r.dKdt,         r.a_total,         r.a_phy_sigma,
                        r.a_num_sigma, r.a_phy_broken,   r.a_num_broken, r.convective_rate, r.eps_tot};
    char buf[32];
    for (std::size_t i = 0; i < std::size(v); ++i) {
        std::snprintf(buf, sizeof buf, "%.16e", v[i]);
        os << (i ? "," : "") << buf;
    }
    os << '\n';
}

Ledger read_ledger(std::istream& is) {
    Ledger l;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("ledger: missing metadata line");
    l.metadata = json::parse(line.substr(2));
    if (!std::getline(is, line))
        throw std::runtime_error("ledger: missing header row");
    std::string expected;
    for (const auto& c : ledger_columns())
        expected += (expected.empty() ? "" : ",") + c;
    if (line != expected)
        throw std::runtime_error("ledger: unexpected header '" + line + "'");
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::vector<double> v;
        std::string cell;
        while (std::getline(ls, cell, ','))
            v.push_back(std::stod(cell));
        if (v.size() != ledger_columns().size())
            throw std::runtime_error("ledger: row with " + std::to_string(v.size()) + " columns");
        DissipationSample r;
        r.t = v[0];
        r.kinetic_energy = v[1];
        r.dKdt = v[2];
        r.a_total = v[3];
        r.a_phy_sigma = v[4];
        r.a_num_sigma = v[5];
        r.a_phy_broken = v[6];
        r.a_num_broken = v[7];
        r.convective_rate = v[8];
        r.eps_tot = v[9];
        l.rows.push_back(r);
    }
    return l;
}

}  // namespace dgdiss
