#include "commands.hpp"

#include "powermix/errors.hpp"
#include "powermix/grammar.hpp"
#include "powermix/moments.hpp"
#include "powermix/stieltjes.hpp"
#include "powermix/verifier.hpp"
#include "powermix/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace powermix::cli {

namespace {

using cplx = std::complex<double>;

double to_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("bad number '" + s + "' in " + what);
    }
    if (used != s.size()) throw UsageError("bad number '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void add_common_meta(Table& t, const std::string& command) {
    t.add_meta("command", command);
    t.add_meta("version", std::string(kVersion));
}

bool is_std_uniform(const Distribution& d) {
    return d.kind() == Kind::uniform && d.param(0) == 0.0 && d.param(1) == 1.0;
}

bool is_std_normal(const Distribution& d) {
    return d.kind() == Kind::normal && d.param(0) == 0.0 && d.param(1) == 1.0;
}

MixtureSpec need_mixture(const AnySpec& s, const std::string& what) {
    if (const auto* m = std::get_if<MixtureSpec>(&s)) return *m;
    throw UsageError(what + " needs a mixture spec (tsp(...) or directed(...))");
}

}  // namespace

std::vector<double> parse_real_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("grid must be a:b:steps, got '" + text + "'");
    const double a = to_number(parts[0], "grid");
    const double b = to_number(parts[1], "grid");
    const double steps = to_number(parts[2], "grid");
    if (steps < 1 || steps != std::floor(steps)) throw UsageError("grid steps must be a positive integer");
    const auto m = static_cast<std::size_t>(steps);
    std::vector<double> out(m);
    if (m == 1) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = i + 1 == m ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
    }
    return out;
}

std::vector<cplx> parse_complex_grid(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("complex grid must be re_a:re_b:steps,im");
    const double im = to_number(text.substr(comma + 1), "complex grid");
    std::vector<cplx> out;
    for (double re : parse_real_grid(text.substr(0, comma))) out.emplace_back(re, im);
    return out;
}

std::vector<cplx> parse_points(const std::string& text) {
    std::vector<cplx> out;
    for (const auto& tok : split(text, ',')) {
        if (tok.empty()) throw UsageError("empty point in '" + text + "'");
        if (tok.back() != 'i') {
            out.emplace_back(to_number(tok, "point list"), 0.0);
            continue;
        }
        const std::string body = tok.substr(0, tok.size() - 1);
        // split at the last sign that is not an exponent sign or the leading one
        std::size_t cut = std::string::npos;
        for (std::size_t i = body.size(); i-- > 1;) {
            if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
                cut = i;
                break;
            }
        }
        auto imag = [&](const std::string& s) {
            if (s.empty() || s == "+") return 1.0;
            if (s == "-") return -1.0;
            return to_number(s, "point list");
        };
        if (cut == std::string::npos) {
            out.emplace_back(0.0, imag(body));
        } else {
            out.emplace_back(to_number(body.substr(0, cut), "point list"), imag(body.substr(cut)));
        }
    }
    return out;
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Table cmd_sample(const std::string& spec_text, std::size_t count, std::uint64_t seed) {
    const AnySpec spec = parse_spec(spec_text);
    if (count == 0) throw UsageError("--n must be positive");
    Table t;
    add_common_meta(t, "sample");
    t.add_meta("spec", print(spec));
    t.add_meta("seed", std::to_string(seed));
    t.add_meta("count", std::to_string(count));
    std::vector<double> x;
    if (const auto* m = std::get_if<MixtureSpec>(&spec)) {
        x = chunked_sample(*m, count, seed, fnv1a("sample"));
    } else {
        Stream s = Stream(seed).split(fnv1a("sample"));
        x = std::get<Distribution>(spec).sample(s, count);
    }
    t.columns = {"i", "value"};
    t.rows.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        t.rows.push_back({static_cast<long long>(i), x[i]});
    }
    return t;
}

Table cmd_pdf(const std::string& spec_text, const std::vector<double>& grid) {
    const AnySpec spec = parse_spec(spec_text);
    std::function<double(double)> f;
    std::string method;
    if (const auto* d = std::get_if<Distribution>(&spec)) {
        if (d->is_atom()) throw DomainError("point_mass has no density");
        const Distribution law = *d;
        f = [law](double z) { return law.pdf(z); };
        method = "closed_form";
    } else {
        const MixtureSpec m = std::get<MixtureSpec>(spec);
        const bool unif = is_std_uniform(m.x1()) && is_std_uniform(m.x2());
        const Distribution& w = m.weight();
        if (m.family() == Family::undirected && unif && m.power_index()) {
            const double n = *m.power_index();
            f = [n](double z) { return tsp_pdf_uniform(n, z); };
            method = "closed_form_power_weight";
        } else if (m.family() == Family::undirected && unif && w.kind() == Kind::beta &&
                   w.param(0) > 1 && w.param(1) > 1) {
            const double a = w.param(0), b = w.param(1);
            f = [a, b](double z) { return tsp_pdf_uniform_betaweight(a, b, z); };
            method = "closed_form_beta_weight";
        } else {
            if (m.x1().is_atom() && m.x2().is_atom()) {
                // still well defined when the atoms differ
                if (m.x1() == m.x2()) throw DomainError("mixture of one atom has no density");
            }
            f = [m](double z) { return mixture_pdf_numeric(m, z); };
            method = "quadrature";
        }
    }
    Table t;
    add_common_meta(t, "pdf");
    t.add_meta("spec", print(spec));
    t.add_meta("method", method);
    t.columns = {"z", "pdf"};
    for (double z : grid) t.rows.push_back({z, f(z)});
    return t;
}

Result cmd_moments(const std::string& spec_text, int k_max, const std::string& method,
                   std::uint64_t seed, std::size_t mc_samples) {
    const MixtureSpec spec = need_mixture(parse_spec(spec_text), "moments");
    if (k_max < 1) throw UsageError("--kmax must be at least 1");
    static const std::vector<std::string> known{"a", "b", "c", "mc", "all"};
    if (std::find(known.begin(), known.end(), method) == known.end()) {
        throw UsageError("--method must be one of a, b, c, mc, all");
    }
    // cauchy and other heavy tails: no method applies
    require_finite_moments(spec);

    const bool tsp = spec.family() == Family::undirected;
    const auto n = spec.power_index();
    const bool all = method == "all";
    if (!tsp && method != "mc" && !all) {
        throw UsageError("closed methods apply to the tsp family only; use --method mc");
    }
    if ((method == "a" || method == "c") && !n) {
        throw UsageError("methods a and c need a power(n) weight");
    }

    // (method label, per-k reports)
    std::vector<std::pair<std::string, std::vector<MomentReport>>> cols;
    auto want = [&](const std::string& m) { return method == m || all; };

    if (tsp && n && (want("a") || want("c"))) {
        const auto os = order_stat_moments(spec.x1(), spec.x2(), k_max);
        if (want("a")) {
            std::vector<MomentReport> v;
            for (int k = 1; k <= k_max; ++k) v.push_back(moment_thm_a(os, *n, k));
            cols.emplace_back("a", v);
        }
        if (want("b")) {
            const auto jm = joint_moments(spec.x1(), spec.x2(), k_max);
            std::vector<MomentReport> v;
            for (int k = 1; k <= k_max; ++k) v.push_back(moment_thm_b(spec, k, jm));
            cols.emplace_back("b", v);
        }
        if (want("c")) {
            std::vector<MomentReport> v;
            for (int k = 1; k <= k_max; ++k) v.push_back(moment_thm_c(os, *n, k));
            cols.emplace_back("c", v);
        }
    } else if (tsp && want("b")) {
        const auto jm = joint_moments(spec.x1(), spec.x2(), k_max);
        std::vector<MomentReport> v;
        for (int k = 1; k <= k_max; ++k) v.push_back(moment_thm_b(spec, k, jm));
        cols.emplace_back("b", v);
    }
    if (want("mc")) {
        auto v = moments_monte_carlo(spec, k_max, mc_samples, seed);
        v.erase(v.begin());
        cols.emplace_back("mc", v);
    }
    if (all && tsp && n) {
        std::vector<MomentReport> v;
        const bool unif = is_std_uniform(spec.x1()) && is_std_uniform(spec.x2());
        const bool norm = is_std_normal(spec.x1()) && is_std_normal(spec.x2());
        for (int k = 1; k <= k_max; ++k) {
            if (unif) {
                v.push_back({k, uniform_moment_formula(*n, k), std::nullopt, MomentMethod::named_closed_form});
            } else if (norm && k <= 3) {
                v.push_back({k, normal_moment_formula(*n, k), std::nullopt, MomentMethod::named_closed_form});
            }
        }
        if (!v.empty()) cols.emplace_back("closed", v);
    }

    Table t;
    add_common_meta(t, "moments");
    t.add_meta("spec", print(spec));
    t.add_meta("method", method);
    t.add_meta("seed", std::to_string(seed));
    if (want("mc")) t.add_meta("mc_samples", std::to_string(mc_samples));
    t.columns = {"k", "method", "value", "std_error"};
    if (all) t.columns.push_back("delta");

    // reference per k for the delta column: the first exact value
    std::map<int, double> ref;
    for (const auto& [label, v] : cols) {
        for (const auto& r : v) {
            if (!r.std_error && !ref.count(r.k)) ref[r.k] = r.value;
        }
    }

    int exit_code = kOk;
    double max_delta = 0, worst_ratio = 0;
    for (int k = 1; k <= k_max; ++k) {
        std::vector<const MomentReport*> here;
        for (const auto& [label, v] : cols) {
            for (const auto& r : v) {
                if (r.k != k) continue;
                here.push_back(&r);
                std::vector<Cell> row{static_cast<long long>(k), std::string(method_name(r.method)),
                                      r.value};
                row.push_back(r.std_error ? Cell(*r.std_error) : Cell(std::string()));
                if (all) {
                    row.push_back(ref.count(k) ? Cell(r.value - ref[k]) : Cell(std::string()));
                }
                t.rows.push_back(std::move(row));
            }
        }
        if (!all) continue;
        for (std::size_t i = 0; i < here.size(); ++i) {
            for (std::size_t j = i + 1; j < here.size(); ++j) {
                const double d = std::fabs(here[i]->value - here[j]->value);
                const double se = std::hypot(here[i]->std_error.value_or(0.0),
                                             here[j]->std_error.value_or(0.0));
                const double allowed = std::max(1e-10, 4.0 * se);
                max_delta = std::max(max_delta, d);
                worst_ratio = std::max(worst_ratio, d / allowed);
            }
        }
    }
    if (all) {
        t.add_meta("max_delta", num(max_delta));
        t.add_meta("max_delta_over_allowed", num(worst_ratio));
        const bool pass = worst_ratio <= 1.0;
        t.add_meta("pass", pass ? "true" : "false");
        if (!pass) exit_code = kFailed;
    }
    return {std::move(t), exit_code};
}

namespace {

Scenario scenario_from_json(const nlohmann::json& j, std::size_t default_n, std::uint64_t seed) {
    if (!j.is_object()) throw UsageError("config: each scenario must be an object");
    Scenario s;
    if (!j.contains("id") || !j["id"].is_string()) throw UsageError("config: scenario needs an id");
    s.id = j["id"].get<std::string>();
    s.claim = j.value("claim", std::string());
    const std::string check = j.value("check", std::string("ks"));
    if (!check_from_name(check, s.check)) throw UsageError("config: unknown check '" + check + "'");
    if (j.contains("construction")) {
        s.construction = parse_mixture(j["construction"].get<std::string>());
    }
    if (j.contains("claimed")) s.claimed_law = parse_distribution(j["claimed"].get<std::string>());
    s.n = j.value("n", default_n);
    s.seed = j.value("seed", seed);
    if (!j.contains("threshold")) throw UsageError("config: scenario '" + s.id + "' needs a threshold");
    s.threshold = j["threshold"].get<double>();
    s.shift = j.value("shift", 8.0);
    if (!s.construction) throw UsageError("config: scenario '" + s.id + "' needs a construction");
    if (s.check != CheckKind::exactness && !s.claimed_law) {
        throw UsageError("config: scenario '" + s.id + "' needs a claimed law");
    }
    return s;
}

}  // namespace

Result cmd_verify(const VerifyOptions& opt) {
    const std::size_t n = opt.n.value_or(1000000);
    std::vector<Scenario> list;
    if (opt.all) list = scenario_catalog(n, opt.seed);
    for (const auto& id : opt.ids) {
        auto s = find_scenario(id, n, opt.seed);
        if (!s) throw UsageError("unknown scenario id '" + id + "'");
        list.push_back(*s);
    }
    if (opt.config) {
        std::ifstream in(*opt.config);
        if (!in) throw std::ios_base::failure("cannot read config " + *opt.config);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
        const auto& arr = j.is_object() && j.contains("scenarios") ? j["scenarios"] : j;
        if (!arr.is_array()) throw UsageError("config: expected a list of scenarios");
        try {
            for (const auto& e : arr) list.push_back(scenario_from_json(e, n, opt.seed));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
    }
    if (list.empty()) throw UsageError("verify needs --scenario, --all or --config");

    const auto reports = run_scenarios(list);
    Table t;
    add_common_meta(t, "verify");
    t.add_meta("seed", std::to_string(opt.seed));
    t.columns = {"id", "check", "statistic", "threshold", "pass", "n", "seed", "wall_time", "detail"};
    bool all_pass = true;
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        t.rows.push_back({r.id, std::string(check_name(r.check)), r.statistic, r.threshold,
                          std::string(r.pass ? "true" : "false"), static_cast<long long>(r.n),
                          static_cast<long long>(r.seed),
                          opt.wall_time ? Cell(r.wall_time) : Cell(std::string()), r.detail});
    }
    t.add_meta("scenarios", std::to_string(reports.size()));
    t.add_meta("pass", all_pass ? "true" : "false");
    return {std::move(t), all_pass ? kOk : kFailed};
}

std::vector<cplx> default_points(const std::string& identity) {
    if (identity == "lemma21") {
        std::vector<cplx> out;
        for (double x : parse_real_grid("2:10:17")) out.emplace_back(x, 0.0);
        return out;
    }
    if (identity == "thm441" || identity == "thm441_corrected") return {{2, 0}, {3, 0}, {1.5, 1.5}};
    return parse_complex_grid("-2:2:9,1.5");
}

Result cmd_stieltjes(const StieltjesOptions& opt) {
    static const std::vector<std::string> ids{"lemma21", "lemma22", "eq31", "thm441",
                                              "thm441_corrected"};
    if (std::find(ids.begin(), ids.end(), opt.identity) == ids.end()) {
        throw UsageError("unknown identity '" + opt.identity + "'");
    }
    const auto points = opt.points.empty() ? default_points(opt.identity) : opt.points;
    std::optional<Distribution> claimed;
    if (opt.claimed) claimed = parse_distribution(*opt.claimed);

    Table t;
    add_common_meta(t, "stieltjes");
    t.add_meta("identity", opt.identity);

    double tol = 0;
    std::vector<std::vector<Cell>> rows;
    double max_res = 0;
    auto record = [&](cplx z, std::optional<int> order, std::optional<cplx> res, std::string note) {
        const double a = res ? std::abs(*res) : std::numeric_limits<double>::infinity();
        max_res = std::max(max_res, a);
        std::vector<Cell> row{z.real(), z.imag()};
        if (opt.identity == "lemma21") row.push_back(static_cast<long long>(*order));
        row.push_back(res ? Cell(res->real()) : Cell(std::string()));
        row.push_back(res ? Cell(res->imag()) : Cell(std::string()));
        row.push_back(a);
        row.push_back(std::move(note));
        rows.push_back(std::move(row));
    };

    if (opt.identity == "lemma21") {
        tol = opt.tolerance.value_or(1e-11);
        t.add_meta("x1", num(opt.x1));
        t.add_meta("x2", num(opt.x2));
        for (const auto& z : points) {
            if (z.imag() != 0.0) throw UsageError("lemma21 takes real points");
            for (int k : opt.orders) {
                record(z, k, cplx(partial_fraction_residual(opt.x1, opt.x2, z.real(), k), 0.0), "");
            }
        }
    } else if (opt.identity == "lemma22") {
        const MixtureSpec m = need_mixture(parse_spec(opt.spec), "lemma22");
        t.add_meta("spec", print(m));
        if (claimed) t.add_meta("claimed", print(*claimed));
        tol = opt.tolerance.value_or(claimed ? 1e-8 : 1e-6);
        for (const auto& z : points) record(z, {}, directed_transform_residual(m, z, claimed), "");
    } else if (opt.identity == "eq31") {
        const AnySpec s = parse_spec(opt.spec);
        Distribution x = Distribution::point_mass(0);
        if (const auto* d = std::get_if<Distribution>(&s)) {
            x = *d;
        } else {
            const auto& m = std::get<MixtureSpec>(s);
            if (m.family() != Family::directed || m.power_index() != 2.0 || !(m.x1() == m.x2())) {
                throw UsageError("eq31 takes a law X or directed(n=2, x1=X, x2=X)");
            }
            x = m.x1();
        }
        t.add_meta("spec", print(s));
        if (claimed) t.add_meta("claimed", print(*claimed));
        tol = opt.tolerance.value_or(1e-6);
        for (const auto& z : points) record(z, {}, iid_square_residual(x, z, claimed), "");
    } else {
        const MixtureSpec m = need_mixture(parse_spec(opt.spec), opt.identity);
        if (m.family() != Family::undirected || m.power_index() != 2.0) {
            throw UsageError(opt.identity + " takes tsp(n=2, x1=..., x2=...)");
        }
        t.add_meta("spec", print(m));
        tol = opt.tolerance.value_or(1e-5);
        const bool corrected = opt.identity == "thm441_corrected";
        for (const auto& z : points) {
            require_off_support(z, {m.x1(), m.x2()});
            try {
                record(z, {},
                       corrected ? tsp_third_derivative_residual_corrected(m.x1(), m.x2(), z)
                                 : tsp_third_derivative_residual(m.x1(), m.x2(), z),
                       "");
            } catch (const DivergenceError& e) {
                record(z, {}, std::nullopt, std::string("divergent: ") + e.what());
            }
        }
    }

    t.columns = {"re", "im"};
    if (opt.identity == "lemma21") t.columns.push_back("n");
    for (const char* c : {"residual_re", "residual_im", "abs_residual", "note"}) t.columns.push_back(c);
    t.rows = std::move(rows);
    const bool pass = max_res <= tol;
    t.add_meta("tolerance", num(tol));
    t.add_meta("max_residual", num(max_res));
    t.add_meta("pass", pass ? "true" : "false");
    return {std::move(t), pass ? kOk : kFailed};
}

}  // namespace powermix::cli
