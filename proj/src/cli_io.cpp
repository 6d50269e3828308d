#include "fockfisher/cli_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace fockfisher {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        if (!trim(item).empty())
            parts.push_back(trim(item));
    return parts;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw ConfigError("field '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        bad(key, "expected a real number, got '" + text + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        bad(key, "expected an integer, got '" + text + "'");
    return static_cast<int>(v);
}

// "1,2,5..7" -> {1,2,5,6,7}
std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
    std::vector<int> out;
    for (const std::string& part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(key, part));
            continue;
        }
        const int lo = parse_int(key, part.substr(0, dots));
        const int hi = parse_int(key, part.substr(dots + 2));
        if (hi < lo)
            bad(key, "empty range '" + part + "'");
        for (int i = lo; i <= hi; ++i)
            out.push_back(i);
    }
    if (out.empty())
        bad(key, "empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const std::string& part : split(text, ','))
        out.push_back(parse_double(key, part));
    if (out.empty())
        bad(key, "empty list");
    return out;
}

double parse_eta(const std::string& key, const std::string& text) {
    const double v = parse_double(key, text);
    if (v < 0.0 || v > 1.0)
        bad(key, "surviving fraction must lie in [0,1], got " + text);
    return v;
}

void check_delta_value(const std::string& key, double d) {
    if (d < 0.0)
        bad(key, "Delta must be >= 0");
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& values) {
    std::vector<std::string> parts;
    for (T v : values) {
        if constexpr (std::is_integral_v<T>)
            parts.push_back(std::to_string(v));
        else
            parts.push_back(format_number(v));
    }
    return join(parts, ",");
}

std::string state_spec_text(const StateSpec& s) {
    switch (s.family) {
    case StateFamily::hb:
        return "hb:" + std::to_string(s.photons);
    case StateFamily::noon:
        return "noon:" + std::to_string(s.photons);
    case StateFamily::ghb:
        break;
    }
    return "ghb:" + std::to_string(s.input_a) + "," + std::to_string(s.photons - s.input_a);
}

std::string config_json(const RunOptions& options, const std::string& command) {
    json j;
    j["command"] = command;
    for (const auto& [k, v] : options.echo())
        j[k] = v;
    return j.dump();
}

// Finite long doubles outside double range are kept as strings.
json number_json(long double v) {
    if (std::isfinite(v) && std::isfinite(static_cast<double>(v)) &&
        (v == 0.0L || static_cast<double>(v) != 0.0))
        return json(std::stod(format_number(v)));
    return json(format_number(v));
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

std::vector<Loss> losses_from(const RunOptions& o) {
    if (o.eta_a || o.eta_b)
        return {Loss{o.eta_a.value_or(1.0), o.eta_b.value_or(1.0)}};
    std::vector<Loss> out;
    for (double e : o.etas.empty() ? std::vector<double>{1.0} : o.etas)
        out.push_back(Loss::symmetric(e));
    return out;
}

std::string loss_tag(const Loss& loss) {
    if (loss.eta_a == loss.eta_b)
        return "eta" + format_number(loss.eta_a);
    return "eta" + format_number(loss.eta_a) + "_" + format_number(loss.eta_b);
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string format_number(long double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", value);
    return buf;
}

StateSpec parse_state_spec(const std::string& text) {
    const std::string t = trim(text);
    const auto colon = t.find(':');
    if (colon == std::string::npos)
        bad("state", "expected ghb:<n>,<N-n> | hb:<N> | noon:<N>, got '" + text + "'");
    const std::string family = t.substr(0, colon);
    const std::string args = t.substr(colon + 1);
    StateSpec spec;
    if (family == "ghb") {
        const auto parts = split(args, ',');
        if (parts.size() != 2)
            bad("state", "ghb needs two occupations ghb:<n>,<N-n>, got '" + text + "'");
        const int n = parse_int("state", parts[0]);
        const int rest = parse_int("state", parts[1]);
        if (n < 0 || rest < 0 || n + rest < 1)
            bad("state", "ghb occupations must be >= 0 with N >= 1");
        spec = StateSpec::ghb(n, n + rest);
    } else if (family == "hb") {
        const int N = parse_int("state", args);
        if (N < 2)
            bad("state", "hb needs N >= 2");
        spec = StateSpec::hb(N);
    } else if (family == "noon") {
        const int N = parse_int("state", args);
        if (N < 1)
            bad("state", "noon needs N >= 1");
        spec = StateSpec::noon(N);
    } else {
        bad("state", "unknown family '" + family + "'");
    }
    if (spec.photons > kMaxPhotons)
        bad("state", "N above " + std::to_string(kMaxPhotons));
    return spec;
}

const std::vector<std::string>& option_keys() {
    static const std::vector<std::string> keys = {
        "state", "families", "photons", "k", "phi", "delta", "delta-range", "eta", "eta-a",
        "eta-b", "grid-points", "grid-halfwidth", "environment", "out", "format", "axis",
        "cutoff-tol"};
    return keys;
}

void apply_option(RunOptions& o, const std::string& key, const std::string& value) {
    if (key == "state") {
        o.states.clear();
        for (const std::string& s : split(value, ';'))
            o.states.push_back(parse_state_spec(s));
    } else if (key == "families") {
        o.families = split(value, ',');
        for (const std::string& f : o.families) {
            if (f == "hb" || f == "noon")
                continue;
            if (f.rfind("ghb", 0) != 0 || f.size() == 3)
                bad(key, "expected ghb<k>, hb or noon, got '" + f + "'");
            if (parse_int(key, f.substr(3)) < 0)
                bad(key, "ghb<k> needs k >= 0");
        }
    } else if (key == "photons" || key == "N") {
        o.photons = parse_int_list(key, value);
        for (int N : o.photons)
            if (N < 1 || N > kMaxPhotons)
                bad(key, "photon numbers must lie in [1, " + std::to_string(kMaxPhotons) + "]");
    } else if (key == "k") {
        o.ks = parse_int_list(key, value);
        for (int k : o.ks)
            if (k < 0)
                bad(key, "k must be >= 0");
    } else if (key == "phi") {
        o.phi = parse_double(key, value);
    } else if (key == "delta") {
        o.deltas = parse_double_list(key, value);
        for (double d : o.deltas)
            check_delta_value(key, d);
    } else if (key == "delta-range") {
        const auto parts = split(value, ':');
        if (parts.size() != 3)
            bad(key, "expected a:b:steps, got '" + value + "'");
        const double a = parse_double(key, parts[0]);
        const double b = parse_double(key, parts[1]);
        const int steps = parse_int(key, parts[2]);
        if (steps < 2 || !(b > a))
            bad(key, "need b > a and steps >= 2");
        if (a < kMinSweepDelta)
            bad(key, "lower bound below " + format_number(kMinSweepDelta) +
                         " (F_Q[Delta,Delta] vanishes at Delta = 0)");
        o.deltas.clear();
        for (int i = 0; i < steps; ++i)
            o.deltas.push_back(a + (b - a) * i / (steps - 1));
    } else if (key == "eta") {
        o.etas.clear();
        for (const std::string& e : split(value, ','))
            o.etas.push_back(parse_eta(key, e));
        if (o.etas.empty())
            bad(key, "empty list");
    } else if (key == "eta-a") {
        o.eta_a = parse_eta(key, value);
    } else if (key == "eta-b") {
        o.eta_b = parse_eta(key, value);
    } else if (key == "grid-points") {
        const int n = parse_int(key, value);
        if (n < 3 || n % 2 == 0)
            bad(key, "Simpson grid needs an odd count >= 3");
        o.grid.points = n;
    } else if (key == "grid-halfwidth") {
        const double L = parse_double(key, value);
        if (!(L > 0.0))
            bad(key, "half width must be positive");
        o.grid.half_width = L;
    } else if (key == "environment") {
        if (value == "traced")
            o.environment = EnvironmentAccess::traced;
        else if (value == "resolved")
            o.environment = EnvironmentAccess::resolved;
        else
            bad(key, "expected traced or resolved");
    } else if (key == "out") {
        o.out = trim(value);
    } else if (key == "format") {
        if (value == "csv")
            o.format = OutputFormat::csv;
        else if (value == "json")
            o.format = OutputFormat::json;
        else
            bad(key, "expected csv or json");
    } else if (key == "axis") {
        if (value == "delta")
            o.axis = SweepAxis::delta;
        else if (value == "photons")
            o.axis = SweepAxis::photons;
        else if (value == "family")
            o.axis = SweepAxis::family;
        else
            bad(key, "expected delta, photons or family");
    } else if (key == "cutoff-tol") {
        const double t = parse_double(key, value);
        if (!(t > 0.0))
            bad(key, "tolerance must be positive");
        o.cutoff_tolerance = t;
    } else {
        throw ConfigError("unknown field '" + key + "'");
    }
}

std::map<std::string, std::string> RunOptions::echo() const {
    std::map<std::string, std::string> m;
    std::vector<std::string> st;
    for (const StateSpec& s : states)
        st.push_back(state_spec_text(s));
    m["state"] = join(st, ";");
    m["families"] = join(families, ",");
    m["photons"] = join_numbers(photons);
    m["k"] = join_numbers(ks);
    m["phi"] = format_number(phi);
    m["delta"] = join_numbers(deltas);
    m["eta"] = join_numbers(etas);
    m["eta-a"] = eta_a ? format_number(*eta_a) : "";
    m["eta-b"] = eta_b ? format_number(*eta_b) : "";
    m["grid-points"] = std::to_string(grid.points);
    m["grid-halfwidth"] = grid.half_width ? format_number(*grid.half_width) : "default";
    m["environment"] = environment == EnvironmentAccess::traced ? "traced" : "resolved";
    m["format"] = format == OutputFormat::csv ? "csv" : "json";
    m["axis"] = axis == SweepAxis::delta ? "delta" : axis == SweepAxis::photons ? "photons" : "family";
    m["cutoff-tol"] = format_number(cutoff_tolerance);
    return m;
}

std::vector<ConfigEntry> read_config(std::istream& in) {
    std::vector<ConfigEntry> entries;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto sep = line.find('=');
        if (sep == std::string::npos)
            sep = line.find_first_of(" \t");
        if (sep == std::string::npos)
            throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, sep));
        if (key.rfind("--", 0) == 0)
            key.erase(0, 2);
        entries.push_back({key, trim(line.substr(sep + 1)), number});
    }
    return entries;
}

void load_config_file(RunOptions& options, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::vector<ConfigEntry> entries;
    try {
        entries = read_config(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ":" + e.what());
    }
    for (const ConfigEntry& e : entries) {
        try {
            apply_option(options, e.key, e.value);
        } catch (const ConfigError& err) {
            throw ConfigError(path.string() + ":" + std::to_string(e.line) + ": " + err.what());
        }
    }
}

const std::vector<std::string>& table_columns() {
    static const std::vector<std::string> columns = {
        "label", "N",      "n",     "delta_part", "Delta", "eta_a", "eta_b", "Upsilon",
        "Sigma2", "FC_pp", "FC_dd", "FQ_pp",      "FQ_dd", "HCR",   "flags"};
    return columns;
}

void write_table_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& config_json) {
    out << "# fockfisher " << kEngineVersion << " config: " << config_json << "\n";
    out << "# parameter order (phi, Delta); pp = (phi,phi), dd = (Delta,Delta); "
           "phi and Delta in radians, eta and Upsilon dimensionless\n";
    out << join(table_columns(), ",") << "\n";
    for (const SweepRow& r : rows) {
        out << csv_quote(r.label) << ',' << r.photons << ',' << r.input_a << ',' << r.partition
            << ',' << format_number(r.delta) << ',' << format_number(r.eta_a) << ','
            << format_number(r.eta_b) << ',' << format_number(r.upsilon) << ','
            << format_number(r.sigma2) << ',' << format_number(r.fc_phase) << ','
            << format_number(r.fc_diffusion) << ',' << format_number(r.fq_phase) << ','
            << format_number(r.fq_diffusion) << ',' << format_number(r.hcr) << ',' << r.flags
            << "\n";
    }
}

void write_table_json(std::ostream& out, const std::vector<SweepRow>& rows,
                      const std::string& config_json) {
    json j;
    j["engine"] = "fockfisher";
    j["version"] = kEngineVersion;
    j["config"] = json::parse(config_json);
    j["parameter_order"] = {"phi", "Delta"};
    j["columns"] = table_columns();
    json data = json::array();
    for (const SweepRow& r : rows) {
        data.push_back({r.label, r.photons, r.input_a, r.partition, std::stod(format_number(r.delta)),
                        std::stod(format_number(r.eta_a)), std::stod(format_number(r.eta_b)),
                        std::stod(format_number(r.upsilon)), number_json(r.sigma2),
                        number_json(r.fc_phase), number_json(r.fc_diffusion),
                        number_json(r.fq_phase), number_json(r.fq_diffusion), number_json(r.hcr),
                        r.flags});
    }
    j["rows"] = std::move(data);
    out << j.dump(1) << "\n";
}

int cmd_single(const RunOptions& o, std::ostream& out) {
    if (o.states.size() != 1)
        throw ConfigError("field 'state': single needs exactly one state");
    if (o.deltas.size() != 1)
        throw ConfigError("field 'delta': single needs exactly one value");
    const auto losses = losses_from(o);
    if (losses.size() != 1)
        throw ConfigError("field 'eta': single needs exactly one value");

    ScenarioConfig c;
    c.state = o.states.front();
    c.phi = o.phi;
    c.delta = o.deltas.front();
    c.eta_a = losses.front().eta_a;
    c.eta_b = losses.front().eta_b;
    c.grid = o.grid;
    c.environment = o.environment;

    const ProbeState state = c.state.build();
    const QuadGrid grid = c.grid.build(state.total_photons);
    const FisherPair pair = evaluate(c);

    auto abs_matrix = [&](const Eigen::Matrix2d& m) {
        return "[[" + format_number(pair.absolute(m(0, 0))) + ", " +
               format_number(pair.absolute(m(0, 1))) + "], [" +
               format_number(pair.absolute(m(1, 0))) + ", " +
               format_number(pair.absolute(m(1, 1))) + "]]";
    };
    const long double w = pair.absolute(pair.commutator_trace(0, 1).imag());
    const long double w_re = pair.absolute(pair.commutator_trace(0, 1).real());
    const long double comm_norm = pair.absolute(pair.sld_commutator_norm);

    std::optional<std::string> undefined;
    double upsilon = 0.0;
    long double sigma2 = 0.0, hcr = 0.0;
    try {
        upsilon = tradeoff_upsilon(pair);
        sigma2 = qcr_sum(pair);
        hcr = hcr_unit_cost(pair);
    } catch (const SingularFisherError& e) {
        undefined = e.what();
    }

    if (o.format == OutputFormat::json) {
        json j;
        j["config"] = json::parse(config_json(o, "single"));
        j["state"] = state.label();
        j["N"] = state.total_photons;
        j["parameter_order"] = {"phi", "Delta"};
        j["F_C"] = abs_matrix(pair.classical);
        j["F_Q"] = abs_matrix(pair.quantum);
        j["trace_rho_commutator"] = {{"re", number_json(w_re)}, {"im", number_json(w)}};
        j["sld_commutator_norm"] = number_json(comm_norm);
        j["log_scale"] = pair.log_scale;
        if (undefined) {
            j["undefined"] = *undefined;
        } else {
            j["Upsilon"] = upsilon;
            j["Sigma2"] = number_json(sigma2);
            j["HCR"] = number_json(hcr);
        }
        j["flags"] = correlated_estimators(pair) ? "offdiag" : "";
        out << j.dump(1) << "\n";
        return undefined ? 1 : 0;
    }

    out << "state                 " << state.label() << "  (N=" << state.total_photons
        << ", n=" << state.input_a << ", delta_part=" << state.partition() << ")\n";
    out << "phi [rad]             " << format_number(c.phi) << "\n";
    out << "Delta [rad]           " << format_number(c.delta) << "\n";
    out << "eta_a, eta_b          " << format_number(c.eta_a) << ", " << format_number(c.eta_b)
        << "\n";
    out << "grid                  " << grid.points_per_axis << " points/axis, half width "
        << format_number(grid.half_width) << "\n";
    out << "parameter order       (phi, Delta)\n";
    out << "F_C                   " << abs_matrix(pair.classical) << "\n";
    out << "F_Q                   " << abs_matrix(pair.quantum) << "\n";
    out << "W                     [[0, " << format_number(w_re) << (w < 0 ? " - " : " + ")
        << format_number(std::abs(w)) << "i], [-(...), 0]]\n";
    out << "Tr(rho[L_phi,L_D])    " << format_number(w_re) << " + " << format_number(w) << "i\n";
    out << "||[L_phi,L_D]||_F     " << format_number(comm_norm) << "\n";
    if (undefined) {
        out << "Upsilon, Sigma^2, HCR undefined: " << *undefined << "\n";
        return 1;
    }
    out << "Upsilon               " << format_number(upsilon) << "\n";
    out << "Sigma^2               " << format_number(sigma2) << "\n";
    out << "HCR (G = I)           " << format_number(hcr) << "\n";
    if (correlated_estimators(pair))
        out << "flags                 offdiag (Fisher off-diagonals above tolerance)\n";
    return 0;
}

std::vector<std::string> cmd_sweep(const RunOptions& o) {
    const auto start = std::chrono::steady_clock::now();
    const std::string config = config_json(o, "sweep");
    const std::vector<Loss> losses = losses_from(o);
    const std::string ext = o.format == OutputFormat::csv ? ".csv" : ".json";

    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + o.out.string() + ": " +
                                 ec.message());

    std::vector<std::string> files;
    json flagged = json::array();
    json skipped = json::array();

    auto write_rows = [&](const std::string& name, const std::vector<SweepRow>& rows) {
        const std::filesystem::path path = o.out / name;
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + path.string());
        if (o.format == OutputFormat::csv)
            write_table_csv(f, rows, config);
        else
            write_table_json(f, rows, config);
        if (!f)
            throw std::runtime_error("write failed for " + path.string());
        files.push_back(name);
        for (const SweepRow& r : rows)
            if (!r.flags.empty())
                flagged.push_back({{"file", name}, {"label", r.label}, {"Delta", r.delta},
                                   {"eta_a", r.eta_a}, {"eta_b", r.eta_b}, {"flags", r.flags}});
    };
    auto record_skipped = [&](const std::vector<SkippedPoint>& points) {
        for (const SkippedPoint& s : points)
            skipped.push_back({{"label", s.label}, {"Delta", s.delta}, {"eta_a", s.eta_a},
                               {"eta_b", s.eta_b}, {"reason", s.reason}});
    };
    auto rows_for = [](const SweepTable& t, const Loss& loss) {
        std::vector<SweepRow> rows;
        for (const SweepRow& r : t.rows)
            if (r.eta_a == loss.eta_a && r.eta_b == loss.eta_b)
                rows.push_back(r);
        return rows;
    };

    switch (o.axis) {
    case SweepAxis::delta: {
        DeltaSweepConfig c;
        c.states = o.states;
        const std::vector<int> Ns = o.photons.empty() ? std::vector<int>{4, 5, 6} : o.photons;
        std::vector<std::string> families = o.families;
        if (families.empty() && o.states.empty())
            families = {"ghb0", "hb", "noon"};
        for (const std::string& f : families)
            for (int N : Ns) {
                if (f == "hb") {
                    if (N >= 2)
                        c.states.push_back(StateSpec::hb(N));
                } else if (f == "noon") {
                    c.states.push_back(StateSpec::noon(N));
                } else {
                    const int k = std::stoi(f.substr(3));
                    if (k <= N)
                        c.states.push_back(StateSpec::ghb(k, N));
                }
            }
        c.losses = losses;
        if (!o.deltas.empty())
            c.deltas = o.deltas;
        c.phi = o.phi;
        c.grid = o.grid;
        const SweepTable t = sweep_delta(c);
        for (const Loss& loss : losses)
            write_rows("delta_" + loss_tag(loss) + ext, rows_for(t, loss));
        record_skipped(t.skipped);
        break;
    }
    case SweepAxis::photons: {
        PhotonSweepConfig c;
        if (!o.ks.empty())
            c.families = o.ks;
        if (!o.families.empty()) {
            c.include_noon = false;
            for (const std::string& f : o.families)
                if (f == "noon")
                    c.include_noon = true;
        }
        if (!o.photons.empty()) {
            c.min_photons = *std::min_element(o.photons.begin(), o.photons.end());
            c.max_photons = *std::max_element(o.photons.begin(), o.photons.end());
        }
        if (o.deltas.size() > 1)
            throw ConfigError("field 'delta': the photons axis takes a single Delta");
        if (!o.deltas.empty())
            c.delta = o.deltas.front();
        c.losses = losses;
        c.phi = o.phi;
        c.grid = o.grid;
        const SweepTable t = sweep_photon_number(c);
        for (const Loss& loss : losses)
            write_rows("photons_" + loss_tag(loss) + ext, rows_for(t, loss));
        record_skipped(t.skipped);
        break;
    }
    case SweepAxis::family: {
        FamilySweepConfig c;
        if (o.photons.size() > 1)
            throw ConfigError("field 'photons': the family axis takes a single N");
        if (!o.photons.empty())
            c.photons = o.photons.front();
        c.losses = losses;
        if (!o.deltas.empty())
            c.deltas = o.deltas;
        c.phi = o.phi;
        c.grid = o.grid;
        c.cutoff_tolerance = o.cutoff_tolerance;
        const FamilySweep fs = sweep_family(c);
        const std::string stem = "family_N" + std::to_string(c.photons);
        for (const Loss& loss : losses)
            write_rows(stem + "_" + loss_tag(loss) + ext, rows_for(fs.table, loss));
        record_skipped(fs.table.skipped);

        const std::string name = stem + "_cutoffs" + ext;
        std::ofstream f(o.out / name, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + (o.out / name).string());
        if (o.format == OutputFormat::csv) {
            f << "# fockfisher " << kEngineVersion << " config: " << config << "\n";
            f << "# Delta_cutoff in radians; reference Upsilon at Delta = "
              << format_number(kSaturationDelta) << ", relative tolerance "
              << format_number(c.cutoff_tolerance) << "\n";
            f << "label,N,n,delta_part,eta_a,eta_b,Delta_cutoff\n";
            for (const CutoffRow& r : fs.cutoffs)
                f << csv_quote(r.label) << ',' << r.photons << ',' << r.input_a << ','
                  << r.partition << ',' << format_number(r.eta_a) << ','
                  << format_number(r.eta_b) << ','
                  << (r.cutoff ? format_number(*r.cutoff) : std::string("not-found")) << "\n";
        } else {
            json j;
            j["config"] = json::parse(config);
            j["columns"] = {"label", "N", "n", "delta_part", "eta_a", "eta_b", "Delta_cutoff"};
            json rows = json::array();
            for (const CutoffRow& r : fs.cutoffs)
                rows.push_back({r.label, r.photons, r.input_a, r.partition, r.eta_a, r.eta_b,
                                r.cutoff ? json(*r.cutoff) : json("not-found")});
            j["rows"] = std::move(rows);
            f << j.dump(1) << "\n";
        }
        files.push_back(name);
        break;
    }
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest;
    manifest["engine"] = "fockfisher";
    manifest["version"] = kEngineVersion;
    manifest["config"] = json::parse(config);
    manifest["grid"] = {{"points_per_axis", o.grid.points},
                        {"half_width", o.grid.half_width ? json(*o.grid.half_width)
                                                         : json("sqrt(2N+1)+4")},
                        {"rule", "composite Simpson"}};
    manifest["parameter_order"] = {"phi", "Delta"};
    manifest["files"] = files;
    manifest["diagnostics"] = {{"flagged_rows", flagged}, {"skipped_points", skipped}};
    manifest["timing"] = {{"timestamp", iso_timestamp()}, {"wall_clock_seconds", seconds}};
    std::ofstream mf(o.out / "manifest.json");
    if (!mf)
        throw std::runtime_error("cannot write " + (o.out / "manifest.json").string());
    mf << manifest.dump(1) << "\n";
    files.push_back("manifest.json");
    return files;
}

int cmd_validate(const RunOptions& options, std::ostream& out) {
    const std::vector<CheckResult> results = run_validation(options);
    int failures = 0;
    for (const CheckResult& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty())
            out << ": " << r.detail;
        out << "\n";
        failures += r.passed ? 0 : 1;
    }
    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
        << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace fockfisher
