#include "superint/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "superint/analysis.hpp"
#include "superint/errors.hpp"
#include "superint/niven.hpp"
#include "superint/qes.hpp"

namespace superint {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::vector<std::string>& valid_keys() {
    static const std::vector<std::string> keys = {
        "model", "omega", "k1",     "k2",   "sign1", "sign2",  "n",    "d2",     "q",    "q1",   "q2",
        "basis", "grid",  "format", "out",  "kind",  "axis",   "count", "energy", "lambda", "smax", "method",
        "radius"};
    return keys;
}

std::string key_list() {
    std::string s;
    for (const auto& k : valid_keys()) s += (s.empty() ? "" : ", ") + k;
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Settings from flags, with config-file values filling the gaps.
class Settings {
public:
    std::map<std::string, std::string> values;

    bool has(const std::string& k) const { return values.count(k) > 0; }
    std::string str(const std::string& k, const std::string& def) const {
        const auto it = values.find(k);
        return it == values.end() ? def : it->second;
    }
    double real(const std::string& k, double def) const {
        if (!has(k)) return def;
        const std::string& v = values.at(k);
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size() || v.empty() || !std::isfinite(x))
            throw UsageError("value of '" + k + "' is not a finite number: '" + v + "'");
        return x;
    }
    int integer(const std::string& k, int def) const {
        if (!has(k)) return def;
        const std::string& v = values.at(k);
        std::size_t pos = 0;
        long x = 0;
        try {
            x = std::stol(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size() || v.empty()) throw UsageError("value of '" + k + "' is not an integer: '" + v + "'");
        return static_cast<int>(x);
    }
    Sign sign(const std::string& k) const {
        const std::string v = str(k, "+");
        if (v == "+" || v == "plus") return Sign::Plus;
        if (v == "-" || v == "minus") return Sign::Minus;
        throw UsageError("value of '" + k + "' must be + or -, got '" + v + "'");
    }
};

void merge_config(Settings& s, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (std::find(valid_keys().begin(), valid_keys().end(), key) == valid_keys().end())
            throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'; valid keys: " + key_list());
        s.values.emplace(key, value);  // flags already present win
    }
}

// ---- output ----

void dump_number(double x, std::string& out) {
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    if (x == 0.0) x = 0.0;  // no "-0" in output
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

void dump(const Json& j, std::string& out, int depth) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(k).dump() + ": ";
            dump(v, out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        bool scalars = true;
        for (const auto& v : j) scalars = scalars && !v.is_structured();
        if (scalars) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump(j[i], out, depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump(j[i], out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float:
        dump_number(j.get<double>(), out);
        return;
    default:
        out += j.dump();
    }
}

std::string to_text(const Json& j) {
    std::string s;
    dump(j, s, 0);
    return s + "\n";
}

std::string csv_number(double x) {
    if (x == 0.0) x = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---- models ----

struct Context {
    Settings s;
    std::string model_name;
    ModelV1 v1;
    ModelV2 v2;
    int n = 0;
    double d2 = 1.0;
};

Context build_context(const Settings& s) {
    Context c;
    c.s = s;
    c.model_name = s.str("model", "v1");
    c.n = s.integer("n", 1);
    if (c.n < 0) throw DomainError("n must be nonnegative");
    if (c.model_name == "v1") {
        c.v1 = {s.real("omega", 1.0), s.real("k1", 0.0), s.real("k2", 1.5), s.sign("sign2")};
        if (s.has("sign1")) throw UsageError("sign1 applies to model v2 only");
        c.v1.validate();
    } else if (c.model_name == "v2") {
        c.v2 = {s.real("omega", 1.0), s.real("k1", 1.5), s.real("k2", 1.5), s.sign("sign1"), s.sign("sign2")};
        c.v2.validate();
    } else {
        throw UsageError("model must be v1 or v2, got '" + c.model_name + "'");
    }
    c.d2 = s.real("d2", 1.0);
    return c;
}

Json params_json(const Context& c, bool with_d2) {
    Json p;
    if (c.model_name == "v1") {
        p["omega"] = c.v1.omega;
        p["k1"] = c.v1.k1;
        p["k2"] = c.v1.k2;
        p["sign2"] = sign_symbol(c.v1.sign2);
    } else {
        p["omega"] = c.v2.omega;
        p["k1"] = c.v2.k1;
        p["k2"] = c.v2.k2;
        p["sign1"] = sign_symbol(c.v2.sign1);
        p["sign2"] = sign_symbol(c.v2.sign2);
        if (with_d2) p["d2"] = c.d2;
    }
    return p;
}

double energy_of(const Context& c) { return c.model_name == "v1" ? energy_level(c.v1, c.n) : energy_level(c.v2, c.n); }

std::vector<QesSolution> solve(const Context& c) {
    return c.model_name == "v1" ? solve_parabolic(c.v1, c.n) : solve_elliptic(c.v2, c.n, c.d2);
}

Json header(const Context& c, bool with_d2) {
    Json j;
    j["model"] = c.model_name;
    j["params"] = params_json(c, with_d2);
    j["n"] = c.n;
    return j;
}

Json state_json(const QesSolution& s) {
    Json st;
    st["q"] = s.q;
    st["lambda"] = s.lambda;
    st["q1"] = s.q1;
    st["q2"] = s.q2;
    st["coefficients"] = s.coeffs;
    st["zeros"] = s.zeros;
    return st;
}

struct Output {
    std::string text;
    std::string summary;
};

bool csv_format(const Context& c) {
    const std::string f = c.s.str("format", "json");
    if (f != "json" && f != "csv") throw UsageError("format must be json or csv");
    return f == "csv";
}

// ---- commands ----

Output cmd_spectrum(const Context& c) {
    const auto sols = solve(c);
    Json j = header(c, c.model_name == "v2");
    j["energy"] = energy_of(c);
    Json states = Json::array();
    for (const auto& s : sols) states.push_back(state_json(s));
    j["states"] = states;
    std::string summary = "spectrum: " + c.model_name + " n=" + std::to_string(c.n) + " lambdas:";
    for (const auto& s : sols) summary += " " + csv_number(s.lambda);
    if (csv_format(c)) {
        std::string t = "q,lambda,q1,q2\n";
        for (const auto& s : sols)
            t += std::to_string(s.q) + "," + csv_number(s.lambda) + "," + std::to_string(s.q1) + "," +
                 std::to_string(s.q2) + "\n";
        return {t, summary};
    }
    return {to_text(j), summary};
}

Output cmd_sepconst(const Context& c) {
    const auto rec = c.model_name == "v1" ? build_parabolic_recurrence(c.v1, c.n)
                                          : build_elliptic_recurrence(c.v2, c.n, c.d2);
    const auto spec = separation_eigenvalues(rec);
    Json j = header(c, c.model_name == "v2");
    j["lambdas"] = spec.lambdas;
    std::string summary = "sepconst:";
    for (double l : spec.lambdas) summary += " " + csv_number(l);
    if (csv_format(c)) {
        std::string t = "q,lambda\n";
        for (std::size_t q = 0; q < spec.lambdas.size(); ++q) t += std::to_string(q) + "," + csv_number(spec.lambdas[q]) + "\n";
        return {t, summary};
    }
    return {to_text(j), summary};
}

Output cmd_eigvec(const Context& c) {
    const auto sols = solve(c);
    const int q = c.s.integer("q", 0);
    if (q < 0 || q > c.n) throw DomainError("q must lie in 0..n");
    const auto& s = sols[q];
    const auto rec = c.model_name == "v1" ? build_parabolic_recurrence(c.v1, c.n)
                                          : build_elliptic_recurrence(c.v2, c.n, c.d2);
    Json j = header(c, c.model_name == "v2");
    j["state"] = state_json(s);
    j["row_residual"] = row_residual(rec, s.lambda, s.coeffs);
    if (csv_format(c)) {
        std::string t = "s,coefficient\n";
        for (std::size_t i = 0; i < s.coeffs.size(); ++i) t += std::to_string(i) + "," + csv_number(s.coeffs[i]) + "\n";
        return {t, "eigvec: q=" + std::to_string(q) + " lambda=" + csv_number(s.lambda)};
    }
    return {to_text(j), "eigvec: q=" + std::to_string(q) + " lambda=" + csv_number(s.lambda)};
}

Wavefunction2D build_state(const Context& c, std::string basis) {
    const int q1 = c.s.integer("q1", c.n), q2 = c.s.integer("q2", 0);
    if (c.model_name == "v1") {
        if (basis.empty()) basis = "parabolic";
        if (basis == "parabolic") return normalized(assemble_wavefunction_2d(c.v1, c.n, q1, q2));
        if (basis == "cartesian") return make_cartesian_v1(c.v1, q1, q2);
        throw UsageError("basis for v1 must be cartesian or parabolic");
    }
    if (basis.empty()) basis = "elliptic";
    if (basis == "elliptic") return normalized(assemble_wavefunction_2d(c.v2, c.n, q1, q2, c.d2));
    if (basis == "cartesian") return make_cartesian_v2(c.v2, q1, q2);
    if (basis == "polar") return make_polar(c.v2, q1, q2);
    throw UsageError("basis for v2 must be cartesian, polar or elliptic");
}

Output cmd_wavefn(const Context& c) {
    const auto state = build_state(c, c.s.str("basis", ""));
    if (state.n != c.n) throw LabelingError("labels must add up to n");
    const int grid = c.s.integer("grid", 41);
    if (grid < 2 || grid > 2000) throw DomainError("grid must lie in 2..2000");
    const auto box = sampling_box(state);
    const double r = c.s.real("radius", std::max(box.x1 - box.x0, box.y1) * 0.5);
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    // Cell-centred samples keep every point off the singular axes.
    auto axis = [&](double lo, double hi, int i) { return lo + (hi - lo) * (i + 0.5) / grid; };
    CoordSystem sys = CoordSystem::Cartesian;
    double a0 = 0, a1 = 0, b0 = 0, b1 = 0;
    switch (state.basis) {
    case WaveBasis::CartesianV1:
        a0 = box.x0, a1 = box.x1, b0 = 0.0, b1 = r;
        break;
    case WaveBasis::CartesianV2:
        a0 = 0.0, a1 = r, b0 = 0.0, b1 = r;
        break;
    case WaveBasis::Parabolic:
        sys = CoordSystem::Parabolic;
        a0 = -std::sqrt(2.0 * r), a1 = std::sqrt(2.0 * r), b0 = 0.0, b1 = std::sqrt(2.0 * r);
        break;
    case WaveBasis::Polar:
        sys = CoordSystem::Polar;
        a0 = 0.0, a1 = r, b0 = 0.0, b1 = 0.5 * std::numbers::pi;
        break;
    case WaveBasis::Elliptic:
        sys = CoordSystem::Elliptic;
        a0 = 0.0, a1 = std::acosh(std::max(1.0, 2.0 * r / std::sqrt(c.d2))), b0 = 0.0, b1 = 0.5 * std::numbers::pi;
        break;
    }
    std::string t = "u1,u2,x,y,value\n";
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double u1 = axis(a0, a1, i), u2 = axis(b0, b1, j);
            const auto p = coordinate_map({sys, u1, u2, state.basis == WaveBasis::Elliptic ? std::sqrt(c.d2) : 0.0});
            t += csv_number(u1) + "," + csv_number(u2) + "," + csv_number(p.x) + "," + csv_number(p.y) + "," +
                 csv_number(state.value_native(u1, u2)) + "\n";
        }
    }
    return {t, "wavefn: " + std::to_string(grid * grid) + " samples"};
}

Output cmd_gram(const Context& c) {
    std::string basis = c.s.str("basis", c.model_name == "v1" ? "parabolic" : "elliptic");
    std::vector<Wavefunction2D> states;
    std::vector<std::pair<int, int>> labels;
    if (basis == "parabolic" || basis == "elliptic") {
        for (const auto& s : solve(c)) {
            labels.emplace_back(s.q1, s.q2);
            states.push_back(c.model_name == "v1" ? normalized(assemble_wavefunction_2d(c.v1, c.n, s.q1, s.q2))
                                                  : normalized(assemble_wavefunction_2d(c.v2, c.n, s.q1, s.q2, c.d2)));
        }
    } else {
        for (int a = 0; a <= c.n; ++a) {
            Context cc = c;
            cc.s.values["q1"] = std::to_string(a);
            cc.s.values["q2"] = std::to_string(c.n - a);
            states.push_back(build_state(cc, basis));
            labels.emplace_back(a, c.n - a);
        }
    }
    const auto g = gram_matrix(states);
    const double dev = (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    Json j = header(c, basis == "elliptic");
    j["basis"] = basis;
    Json lab = Json::array(), rows = Json::array();
    for (const auto& [a, b] : labels) lab.push_back(Json::array({a, b}));
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
        std::vector<double> row(g.cols());
        for (Eigen::Index k = 0; k < g.cols(); ++k) row[k] = g(r, k);
        rows.push_back(row);
    }
    j["labels"] = lab;
    j["gram"] = rows;
    j["max_deviation"] = dev;
    return {to_text(j), "gram: max deviation from identity " + csv_number(dev)};
}

Output cmd_interbasis(const Context& c) {
    if (c.model_name != "v1") throw UsageError("interbasis applies to model v1");
    const std::string method = c.s.str("method", "projection");
    InterbasisMethod m;
    if (method == "projection") m = InterbasisMethod::Projection;
    else if (method == "closed") m = InterbasisMethod::ClosedSum;
    else throw UsageError("method must be projection or closed");
    const auto w = interbasis_matrix(c.v1, c.n, m);
    const auto rep = interbasis_report(c.v1, c.n);
    Json j = header(c, false);
    j["method"] = method;
    Json rows = Json::array(), splits = Json::array();
    for (Eigen::Index r = 0; r < w.W.rows(); ++r) {
        std::vector<double> row(w.W.cols());
        for (Eigen::Index k = 0; k < w.W.cols(); ++k) row[k] = w.W(r, k);
        rows.push_back(row);
        splits.push_back(Json::array({w.splits[r].first, w.splits[r].second}));
    }
    j["splits"] = splits;
    j["W"] = rows;
    j["orthonormality_error"] = (w.W * w.W.transpose() - Eigen::MatrixXd::Identity(w.W.rows(), w.W.rows())).cwiseAbs().maxCoeff();
    Json r;
    r["closed_vs_projection"] = rep.closed_vs_projection;
    r["printed_by_n1_parity_vs_projection"] = rep.printed_n1_vs_projection;
    r["printed_by_n_parity_vs_projection"] = rep.printed_n_vs_projection;
    r["agree"] = rep.agree;
    j["report"] = r;
    return {to_text(j), "interbasis: closed sum vs projection " + csv_number(rep.closed_vs_projection)};
}

Output cmd_niven(const Context& c) {
    if (c.model_name != "v1") throw UsageError("niven applies to model v1");
    const std::string method = c.s.str("method", "independent");
    SeedMode mode;
    if (method == "independent") mode = SeedMode::Independent;
    else if (method == "recurrence") mode = SeedMode::FromRecurrence;
    else throw UsageError("method for niven must be independent or recurrence");
    const auto cfgs = solve_zero_system(c.v1, c.n, mode);
    const auto spec = separation_eigenvalues(build_parabolic_recurrence(c.v1, c.n)).lambdas;
    Json j = header(c, false);
    Json arr = Json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        Json e;
        const double l = lambda_from_zeros(c.v1, cfgs[i]);
        e["zeros"] = cfgs[i].zeros;
        e["residual"] = cfgs[i].residual;
        e["lambda"] = l;
        e["determinant_lambda"] = spec[i];
        worst = std::max(worst, std::fabs(l - spec[i]));
        arr.push_back(e);
    }
    j["configurations"] = arr;
    j["max_lambda_difference"] = worst;
    return {to_text(j), "niven: " + std::to_string(cfgs.size()) + " configurations, max |lambda difference| " +
                            csv_number(worst)};
}

Output cmd_limits(const Context& c) {
    if (c.model_name != "v2") throw UsageError("limits applies to model v2");
    const std::string kind = c.s.str("kind", "d0");
    const int q = c.s.integer("q", 0);
    LimitReport rep;
    if (kind == "d0")
        rep = limit_check(c.v2, c.n, q, LimitKind::PolarD0, {1e-3, 2e-3, 4e-3});
    else if (kind == "dinf")
        rep = limit_check(c.v2, c.n, q, LimitKind::CartesianDInf, {300.0, 350.0, 400.0, 450.0, 500.0});
    else
        throw UsageError("kind must be d0 or dinf");
    Json j = header(c, false);
    j["kind"] = kind;
    j["q"] = q;
    j["label"] = rep.label;
    j["d2"] = rep.d2;
    j["lambdas"] = rep.lambdas;
    if (kind == "d0") j["predicted_intercept"] = rep.predicted_intercept;
    j["fitted_intercept"] = rep.fitted_intercept;
    j["fitted_slope"] = rep.fitted_slope;
    j["predicted_slope"] = rep.predicted_slope;
    j["error"] = rep.error;
    if (kind == "dinf") {
        j["free_fit_c4"] = rep.free_fit_c4;
        j["free_fit_residual"] = rep.free_fit_residual;
    }
    j["converged"] = rep.converged;
    return {to_text(j), "limits: " + kind + " error " + csv_number(rep.error) + (rep.converged ? " (converged)" : " (not converged)")};
}

Output cmd_oracle(const Context& c) {
    const std::string axis = c.s.str("axis", "real");
    const int count = c.s.integer("count", axis == "2d" ? 6 : c.n + 1);
    OracleResult r;
    if (axis == "2d") {
        r = c.model_name == "v1" ? oracle_energy_2d(Model{c.v1}, count) : oracle_energy_2d(Model{c.v2}, count);
    } else if (axis == "real" || axis == "imag") {
        const OracleAxis ax = axis == "real" ? OracleAxis::Real : OracleAxis::Imaginary;
        const double e = c.s.real("energy", energy_of(c));
        r = c.model_name == "v1" ? oracle_lambda_1d(c.v1, e, ax, count) : oracle_lambda_1d(c.v2, c.d2, e, ax, count);
    } else {
        throw UsageError("axis must be real, imag or 2d");
    }
    Json j = header(c, c.model_name == "v2" && axis != "2d");
    j["axis"] = axis;
    j["values"] = r.values;
    j["error_estimate"] = r.error_estimate;
    std::string summary = "oracle:";
    for (double v : r.values) summary += " " + csv_number(v);
    return {to_text(j), summary};
}

Output cmd_asymptotics(const Context& c) {
    const int smax = c.s.integer("smax", 400);
    if (smax < 4) throw DomainError("smax must be at least 4");
    const double lambda = c.s.real("lambda", 1.0);
    Json j = header(c, c.model_name == "v2");
    TailProbe p;
    if (c.model_name == "v1") {
        const double e = c.s.real("energy", energy_of(c) + 0.37 * c.v1.omega);
        p = tail_asymptotics_probe(c.v1, e, lambda, smax);
        j["energy"] = e;
        Json growth = Json::array();
        for (double z : {2.0, 4.0, 6.0, 8.0}) {
            Json g;
            g["z"] = z;
            g["log_abs_series"] = parabolic_abs_series_log(c.v1, e, lambda, std::max(smax, 600), z);
            g["log_cosh"] = std::log(std::cosh(0.5 * c.v1.omega * z * z));
            growth.push_back(g);
        }
        j["growth"] = growth;
    } else {
        const double e = c.s.real("energy", energy_of(c) + 0.37 * c.v2.omega);
        p = tail_asymptotics_probe(c.v2, c.d2, e, lambda, smax);
        j["energy"] = e;
    }
    j["lambda"] = lambda;
    j["smax"] = smax;
    j["limit_estimate"] = p.limit_estimate;
    j["expected_limit"] = p.expected_limit;
    j["relative_deviation"] = std::fabs(p.limit_estimate / p.expected_limit - 1.0);
    return {to_text(j), "asymptotics: estimate " + csv_number(p.limit_estimate) + " expected " + csv_number(p.expected_limit)};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra and bases of the two singular-oscillator superintegrable systems"};
    app.require_subcommand(1, 1);
    std::map<std::string, std::string> flags;
    std::string config;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"spectrum", "separation constants, polynomial coefficients and zeros"},
        {"sepconst", "separation constants only (any d2 for v2, including 0 and negative)"},
        {"eigvec", "coefficient vector of state q"},
        {"wavefn", "sample a normalized state on a grid (CSV)"},
        {"gram", "Gram matrix of the states of level n in one basis"},
        {"interbasis", "Cartesian-parabolic expansion coefficients (v1, k1 = 0)"},
        {"niven", "zero configurations of the Niven system"},
        {"limits", "elliptic D^2 -> 0 or D^2 -> infinity check"},
        {"oracle", "finite-difference eigenvalues (1D axis or 2D)"},
        {"asymptotics", "off-spectrum coefficient tail ratios"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "file of 'key = value' lines; flags win");
        for (const auto& key : valid_keys()) {
            sub->add_option_function<std::string>(
                "--" + key, [&flags, key](const std::string& v) { flags[key] = v; }, key);
        }
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\nvalid keys: " << key_list() << "\n";
        return kExitValidation;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    Output result;
    std::string out_path;
    try {
        Settings s;
        s.values = flags;
        if (!config.empty()) merge_config(s, config);
        const Context c = build_context(s);
        out_path = s.str("out", "");
        if (command == "spectrum") result = cmd_spectrum(c);
        else if (command == "sepconst") result = cmd_sepconst(c);
        else if (command == "eigvec") result = cmd_eigvec(c);
        else if (command == "wavefn") result = cmd_wavefn(c);
        else if (command == "gram") result = cmd_gram(c);
        else if (command == "interbasis") result = cmd_interbasis(c);
        else if (command == "niven") result = cmd_niven(c);
        else if (command == "limits") result = cmd_limits(c);
        else if (command == "oracle") result = cmd_oracle(c);
        else result = cmd_asymptotics(c);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::Domain:
        case ErrorKind::Branch:
        case ErrorKind::Labeling:
            return kExitValidation;
        case ErrorKind::Io:
            return kExitIo;
        default:
            return kExitNumerical;
        }
    }
    if (out_path.empty()) {
        out << result.text;
        return kExitOk;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!(f << result.text) || !f.flush()) {
        err << "error: cannot write '" << out_path << "'\n";
        return kExitIo;
    }
    out << result.summary << "\n";
    return kExitOk;
}

}  // namespace superint
