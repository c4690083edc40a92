#include "zevca/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <sstream>

namespace zevca {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

double parse_double(const Entry& e, const std::string& field) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(e.line, field + ": expected a finite number, got '" + e.value + "'");
    }
}

int parse_int(const Entry& e, const std::string& field) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        if (v < INT_MIN || v > INT_MAX) throw std::out_of_range("overflow");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError(e.line, field + ": expected an integer, got '" + e.value + "'");
    }
}

std::vector<double> parse_double_list(const Entry& e, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(e.line, field + ": empty list element");
        Entry tmp{item, e.line, false};
        out.push_back(parse_double(tmp, field));
    }
    if (out.empty()) throw ConfigError(e.line, field + ": list must not be empty");
    return out;
}

std::vector<int> parse_int_list(const Entry& e, const std::string& field) {
    std::vector<int> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(e.line, field + ": empty list element");
        Entry tmp{item, e.line, false};
        out.push_back(parse_int(tmp, field));
    }
    if (out.empty()) throw ConfigError(e.line, field + ": list must not be empty");
    return out;
}

Entry* find(Section& section, const std::string& key) {
    auto it = section.find(key);
    if (it == section.end()) return nullptr;
    it->second.used = true;
    return &it->second;
}

void reject_unused(const std::map<std::string, Section>& sections) {
    for (const auto& [name, section] : sections)
        for (const auto& [key, entry] : section)
            if (!entry.used)
                throw ConfigError(entry.line, "unknown key '" + key + "' in section [" + name + "]");
}

PotentialSpec assemble_potential(Section& section, int section_line) {
    Entry* kind = find(section, "kind");
    if (!kind) throw ConfigError(section_line, "[potential] requires a 'kind' key");
    const std::string k = lower(trim(kind->value));
    if (k == "eckart") {
        Entry* height = find(section, "height");
        Entry* beta = find(section, "beta");
        if (!height || !beta)
            throw ConfigError(kind->line, "eckart potential requires 'height' and 'beta'");
        return EckartBarrier{parse_double(*height, "potential.height"),
                             parse_double(*beta, "potential.beta")};
    }
    if (k == "quartic") {
        Entry* a = find(section, "a");
        Entry* b = find(section, "b");
        if (!a || !b) throw ConfigError(kind->line, "quartic potential requires 'a' and 'b'");
        return QuarticPotential{parse_double(*a, "potential.a"), parse_double(*b, "potential.b")};
    }
    if (k == "morse") {
        Entry* depth = find(section, "depth");
        Entry* alpha = find(section, "alpha");
        if (!depth || !alpha)
            throw ConfigError(kind->line, "morse potential requires 'depth' and 'alpha'");
        return MorsePotential{parse_double(*depth, "potential.depth"),
                              parse_double(*alpha, "potential.alpha")};
    }
    if (k == "harmonic") {
        Entry* mass = find(section, "mass");
        Entry* omega = find(section, "omega");
        if (!mass || !omega)
            throw ConfigError(kind->line, "harmonic potential requires 'mass' and 'omega'");
        return HarmonicPotential{parse_double(*mass, "potential.mass"),
                                 parse_double(*omega, "potential.omega")};
    }
    if (k == "polynomial") {
        Entry* coeffs = find(section, "coeffs");
        if (!coeffs) throw ConfigError(kind->line, "polynomial potential requires 'coeffs'");
        return PolynomialPotential{parse_double_list(*coeffs, "potential.coeffs")};
    }
    throw ConfigError(kind->line, "unknown potential kind '" + k +
                                      "' (expected eckart|quartic|morse|harmonic|polynomial)");
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
    static const std::vector<std::string> known_sections = {"experiment", "potential", "gaussian",
                                                            "integration", "oracle"};

    std::istringstream stream(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        // strip trailing comment, then whitespace
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty() || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
            current = lower(trim(line.substr(1, line.size() - 2)));
            if (std::find(known_sections.begin(), known_sections.end(), current) ==
                known_sections.end())
                throw ConfigError(line_no, "unknown section [" + current + "]");
            section_lines.emplace(current, line_no);
            sections[current]; // create
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "expected 'key = value', got '" + line + "'");
        if (current.empty())
            throw ConfigError(line_no, "key outside any [section]");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (value.empty()) throw ConfigError(line_no, "empty value for key '" + key + "'");
        auto [it, inserted] = sections[current].emplace(key, Entry{value, line_no, false});
        if (!inserted)
            throw ConfigError(line_no, "duplicate key '" + key + "' in section [" + current + "]");
    }

    ExperimentConfig cfg;

    // [experiment]
    if (!sections.count("experiment"))
        throw ConfigError(0, "missing required section [experiment]");
    Section& exp = sections["experiment"];
    if (Entry* kind = find(exp, "kind")) {
        const std::string k = lower(trim(kind->value));
        if (k == "tunnel") cfg.experiment = ExperimentKind::Tunnel;
        else if (k == "eigen") cfg.experiment = ExperimentKind::Eigen;
        else if (k == "compare") cfg.experiment = ExperimentKind::Compare;
        else throw ConfigError(kind->line, "experiment.kind must be tunnel|eigen|compare");
    } else {
        throw ConfigError(section_lines["experiment"], "[experiment] requires 'kind'");
    }
    if (Entry* e = find(exp, "x0")) cfg.x0 = parse_double(*e, "experiment.x0");
    if (Entry* e = find(exp, "n_list")) cfg.n_list = parse_int_list(*e, "experiment.n_list");
    if (Entry* e = find(exp, "mass")) cfg.mass = parse_double(*e, "experiment.mass");
    if (Entry* e = find(exp, "hbar")) cfg.hbar = parse_double(*e, "experiment.hbar");
    if (Entry* e = find(exp, "output_dir")) cfg.output_dir = e->value;

    // [potential]
    if (!sections.count("potential"))
        throw ConfigError(0, "missing required section [potential]");
    cfg.potential = assemble_potential(sections["potential"], section_lines["potential"]);

    // [gaussian]
    if (!sections.count("gaussian")) throw ConfigError(0, "missing required section [gaussian]");
    Section& gauss = sections["gaussian"];
    if (Entry* e = find(gauss, "alpha0")) cfg.gaussian.alpha0 = parse_double(*e, "gaussian.alpha0");
    else throw ConfigError(section_lines["gaussian"], "[gaussian] requires 'alpha0'");
    if (Entry* e = find(gauss, "xc")) cfg.gaussian.xc = parse_double(*e, "gaussian.xc");
    if (Entry* e = find(gauss, "pc")) cfg.gaussian.pc = parse_double(*e, "gaussian.pc");
    Entry* g_re = find(gauss, "gamma0_re");
    Entry* g_im = find(gauss, "gamma0_im");
    if (g_re || g_im) {
        if (!g_re || !g_im)
            throw ConfigError((g_re ? g_re : g_im)->line,
                              "gamma0_re and gamma0_im must be given together");
        cfg.gaussian.gamma0 = cplx{parse_double(*g_re, "gaussian.gamma0_re"),
                                   parse_double(*g_im, "gaussian.gamma0_im")};
        cfg.gamma0_explicit = true;
    }

    // [integration]
    if (Section* integ = sections.count("integration") ? &sections["integration"] : nullptr) {
        if (Entry* e = find(*integ, "dt")) cfg.integration.dt = parse_double(*e, "integration.dt");
        if (Entry* e = find(*integ, "t_final"))
            cfg.integration.t_final = parse_double(*e, "integration.t_final");
        if (Entry* e = find(*integ, "scheme")) {
            const std::string s = lower(trim(e->value));
            if (s == "rk4") cfg.integration.scheme = Scheme::RK4;
            else if (s == "rk45") cfg.integration.scheme = Scheme::RK45;
            else throw ConfigError(e->line, "integration.scheme must be rk4|rk45");
        }
        if (Entry* e = find(*integ, "abs_tol"))
            cfg.integration.abs_tol = parse_double(*e, "integration.abs_tol");
        if (Entry* e = find(*integ, "rel_tol"))
            cfg.integration.rel_tol = parse_double(*e, "integration.rel_tol");
        if (Entry* e = find(*integ, "record_stride"))
            cfg.integration.record_stride = parse_int(*e, "integration.record_stride");
    }

    // [oracle]
    if (Section* orc = sections.count("oracle") ? &sections["oracle"] : nullptr) {
        if (Entry* e = find(*orc, "xmin")) cfg.oracle.xmin = parse_double(*e, "oracle.xmin");
        if (Entry* e = find(*orc, "xmax")) cfg.oracle.xmax = parse_double(*e, "oracle.xmax");
        if (Entry* e = find(*orc, "npoints")) cfg.oracle.npoints = parse_int(*e, "oracle.npoints");
        if (Entry* e = find(*orc, "dt")) cfg.oracle.dt = parse_double(*e, "oracle.dt");
        if (Entry* e = find(*orc, "t_final"))
            cfg.oracle.t_final = parse_double(*e, "oracle.t_final");
        if (Entry* e = find(*orc, "record_stride"))
            cfg.oracle.record_stride = parse_int(*e, "oracle.record_stride");
    }

    reject_unused(sections);
    validate_config(cfg);
    return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
    validate(cfg.potential);
    if (!(cfg.gaussian.alpha0 > 0.0)) throw ConfigError(0, "gaussian.alpha0 must be > 0");
    if (!std::isfinite(cfg.x0)) throw ConfigError(0, "experiment.x0 must be finite");
    if (!(cfg.mass > 0.0)) throw ConfigError(0, "experiment.mass must be > 0");
    if (!(cfg.hbar > 0.0)) throw ConfigError(0, "experiment.hbar must be > 0");
    if (cfg.n_list.empty()) throw ConfigError(0, "experiment.n_list must not be empty");
    for (int n : cfg.n_list)
        if (n < 0 || n > kMaxOrder)
            throw ConfigError(0, "experiment.n_list entries must lie in [0, " +
                                     std::to_string(kMaxOrder) + "]");
    try {
        validate(cfg.integration);
    } catch (const std::exception& e) {
        throw ConfigError(0, e.what());
    }
    if (!(cfg.oracle.xmax > cfg.oracle.xmin)) throw ConfigError(0, "oracle.xmax must exceed xmin");
    if (cfg.oracle.npoints < 256 || (cfg.oracle.npoints & (cfg.oracle.npoints - 1)) != 0)
        throw ConfigError(0, "oracle.npoints must be a power of two >= 256");
    if (!(cfg.oracle.dt > 0.0)) throw ConfigError(0, "oracle.dt must be > 0");
    if (cfg.oracle.t_final < 0.0) throw ConfigError(0, "oracle.t_final must be >= 0");
    if (cfg.oracle.record_stride < 0) throw ConfigError(0, "oracle.record_stride must be >= 0");
    if (cfg.output_dir.empty()) throw ConfigError(0, "experiment.output_dir must not be empty");
}

namespace {

nlohmann::json potential_to_json(const PotentialSpec& p) {
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EckartBarrier>)
                return {{"kind", "eckart"}, {"height", v.height}, {"beta", v.beta}};
            else if constexpr (std::is_same_v<T, QuarticPotential>)
                return {{"kind", "quartic"}, {"a", v.a}, {"b", v.b}};
            else if constexpr (std::is_same_v<T, MorsePotential>)
                return {{"kind", "morse"}, {"depth", v.depth}, {"alpha", v.alpha}};
            else if constexpr (std::is_same_v<T, HarmonicPotential>)
                return {{"kind", "harmonic"}, {"mass", v.mass}, {"omega", v.omega}};
            else
                return {{"kind", "polynomial"}, {"coeffs", v.coeffs}};
        },
        p);
}

PotentialSpec potential_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "eckart")
        return EckartBarrier{j.at("height").get<double>(), j.at("beta").get<double>()};
    if (kind == "quartic")
        return QuarticPotential{j.at("a").get<double>(), j.at("b").get<double>()};
    if (kind == "morse")
        return MorsePotential{j.at("depth").get<double>(), j.at("alpha").get<double>()};
    if (kind == "harmonic")
        return HarmonicPotential{j.at("mass").get<double>(), j.at("omega").get<double>()};
    if (kind == "polynomial")
        return PolynomialPotential{j.at("coeffs").get<std::vector<double>>()};
    throw ConfigError(0, "unknown potential kind in JSON: " + kind);
}

std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Tunnel: return "tunnel";
        case ExperimentKind::Eigen: return "eigen";
        case ExperimentKind::Compare: return "compare";
    }
    return "tunnel";
}

} // namespace

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = {{"kind", kind_name(cfg.experiment)}, {"x0", cfg.x0},
                       {"n_list", cfg.n_list},              {"mass", cfg.mass},
                       {"hbar", cfg.hbar},                  {"output_dir", cfg.output_dir}};
    j["potential"] = potential_to_json(cfg.potential);
    j["gaussian"] = {{"alpha0", cfg.gaussian.alpha0},
                     {"xc", cfg.gaussian.xc},
                     {"pc", cfg.gaussian.pc},
                     {"gamma0_re", cfg.gaussian.gamma0.real()},
                     {"gamma0_im", cfg.gaussian.gamma0.imag()},
                     {"gamma0_explicit", cfg.gamma0_explicit}};
    j["integration"] = {{"dt", cfg.integration.dt},
                        {"t_final", cfg.integration.t_final},
                        {"scheme", cfg.integration.scheme == Scheme::RK4 ? "rk4" : "rk45"},
                        {"abs_tol", cfg.integration.abs_tol},
                        {"rel_tol", cfg.integration.rel_tol},
                        {"record_stride", cfg.integration.record_stride}};
    j["oracle"] = {{"xmin", cfg.oracle.xmin},       {"xmax", cfg.oracle.xmax},
                   {"npoints", cfg.oracle.npoints}, {"dt", cfg.oracle.dt},
                   {"t_final", cfg.oracle.t_final}, {"record_stride", cfg.oracle.record_stride}};
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    const auto& exp = j.at("experiment");
    const std::string kind = exp.at("kind").get<std::string>();
    if (kind == "tunnel") cfg.experiment = ExperimentKind::Tunnel;
    else if (kind == "eigen") cfg.experiment = ExperimentKind::Eigen;
    else if (kind == "compare") cfg.experiment = ExperimentKind::Compare;
    else throw ConfigError(0, "unknown experiment kind in JSON: " + kind);
    cfg.x0 = exp.at("x0").get<double>();
    cfg.n_list = exp.at("n_list").get<std::vector<int>>();
    cfg.mass = exp.at("mass").get<double>();
    cfg.hbar = exp.at("hbar").get<double>();
    cfg.output_dir = exp.at("output_dir").get<std::string>();

    cfg.potential = potential_from_json(j.at("potential"));

    const auto& gauss = j.at("gaussian");
    cfg.gaussian.alpha0 = gauss.at("alpha0").get<double>();
    cfg.gaussian.xc = gauss.at("xc").get<double>();
    cfg.gaussian.pc = gauss.at("pc").get<double>();
    cfg.gaussian.gamma0 =
        cplx{gauss.at("gamma0_re").get<double>(), gauss.at("gamma0_im").get<double>()};
    cfg.gamma0_explicit = gauss.at("gamma0_explicit").get<bool>();

    const auto& integ = j.at("integration");
    cfg.integration.dt = integ.at("dt").get<double>();
    cfg.integration.t_final = integ.at("t_final").get<double>();
    cfg.integration.scheme =
        integ.at("scheme").get<std::string>() == "rk45" ? Scheme::RK45 : Scheme::RK4;
    cfg.integration.abs_tol = integ.at("abs_tol").get<double>();
    cfg.integration.rel_tol = integ.at("rel_tol").get<double>();
    cfg.integration.record_stride = integ.at("record_stride").get<int>();

    const auto& orc = j.at("oracle");
    cfg.oracle.xmin = orc.at("xmin").get<double>();
    cfg.oracle.xmax = orc.at("xmax").get<double>();
    cfg.oracle.npoints = orc.at("npoints").get<int>();
    cfg.oracle.dt = orc.at("dt").get<double>();
    cfg.oracle.t_final = orc.at("t_final").get<double>();
    cfg.oracle.record_stride = orc.at("record_stride").get<int>();

    validate_config(cfg);
    return cfg;
}

} // namespace zevca
