#include "commands.hpp"

#include "powermix/errors.hpp"
#include "powermix/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace powermix;
using namespace powermix::cli;

namespace {

struct OutputOptions {
    std::string out;
    std::string format = "csv";
    bool no_timestamp = false;
};

void add_output_flags(CLI::App* sub, OutputOptions& o) {
    sub->add_option("--out", o.out, "Output file (default: stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp header line");
}

int emit(Table t, const OutputOptions& o) {
    if (!o.no_timestamp) t.meta.insert(t.meta.begin() + 1, {"timestamp", timestamp_utc()});
    auto write = [&](std::ostream& os) {
        if (o.format == "json") {
            write_json(os, t);
        } else {
            write_csv(os, t);
        }
    };
    if (o.out.empty()) {
        write(std::cout);
        std::cout.flush();
        return std::cout ? kOk : kIo;
    }
    std::ofstream f(o.out);
    if (!f) {
        std::cerr << "powermix: cannot open '" << o.out << "' for writing\n";
        return kIo;
    }
    write(f);
    f.close();
    if (!f) {
        std::cerr << "powermix: write to '" << o.out << "' failed\n";
        return kIo;
    }
    return kOk;
}

std::uint64_t default_seed() {
    if (const char* s = std::getenv("POWERMIX_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw UsageError(std::string("POWERMIX_SEED is not an unsigned integer: ") + s);
        }
    }
    return 42;
}

std::vector<std::complex<double>> parse_stieltjes_grid(const std::string& g) {
    if (g.find(':') == std::string::npos) return parse_points(g);
    if (g.find(',') == std::string::npos) {
        std::vector<std::complex<double>> out;
        for (double x : parse_real_grid(g)) out.emplace_back(x, 0.0);
        return out;
    }
    return parse_complex_grid(g);
}

int run(int argc, char** argv) {
    CLI::App app{"Power mixtures and two-sided power laws"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    const std::uint64_t seed0 = default_seed();
    OutputOptions out;
    int code = kOk;

    // sample
    auto* s = app.add_subcommand("sample", "Draw from a distribution or mixture");
    std::string s_spec;
    std::size_t s_n = 1000;
    std::uint64_t s_seed = seed0;
    s->add_option("spec", s_spec, "Spec string")->required();
    s->add_option("--n", s_n, "Number of draws");
    s->add_option("--seed", s_seed, "Seed (default: $POWERMIX_SEED or 42)");
    add_output_flags(s, out);
    s->callback([&] { code = emit(cmd_sample(s_spec, s_n, s_seed), out); });

    // pdf
    auto* p = app.add_subcommand("pdf", "Density on a grid");
    std::string p_spec, p_grid = "0:1:101";
    p->add_option("spec", p_spec, "Spec string")->required();
    p->add_option("--grid", p_grid, "a:b:steps, endpoints included");
    add_output_flags(p, out);
    p->callback([&] { code = emit(cmd_pdf(p_spec, parse_real_grid(p_grid)), out); });

    // moments
    auto* m = app.add_subcommand("moments", "Moments of a mixture");
    std::string m_spec, m_method = "all";
    int m_k = 4;
    std::uint64_t m_seed = seed0;
    std::size_t m_mc = 1000000;
    m->add_option("spec", m_spec, "Mixture spec")->required();
    m->add_option("--kmax", m_k, "Highest order");
    m->add_option("--method", m_method, "a, b, c, mc or all");
    m->add_option("--seed", m_seed, "Seed for the Monte Carlo method");
    m->add_option("--mc-n", m_mc, "Monte Carlo sample size");
    add_output_flags(m, out);
    m->callback([&] {
        auto r = cmd_moments(m_spec, m_k, m_method, m_seed, m_mc);
        const int w = emit(std::move(r.table), out);
        code = w != kOk ? w : r.exit_code;
    });

    // verify
    auto* v = app.add_subcommand("verify", "Run verification scenarios");
    VerifyOptions vo;
    vo.seed = seed0;
    std::size_t v_n = 0;
    std::string v_config;
    v->add_option("--scenario", vo.ids, "Scenario id (repeatable)");
    v->add_flag("--all", vo.all, "Run the whole catalog");
    v->add_option("--n", v_n, "Sample size");
    v->add_option("--seed", vo.seed, "Seed");
    v->add_option("--config", v_config, "JSON file with user scenarios");
    add_output_flags(v, out);
    v->callback([&] {
        if (v_n > 0) vo.n = v_n;
        if (!v_config.empty()) vo.config = v_config;
        vo.wall_time = !out.no_timestamp;
        auto r = cmd_verify(vo);
        const int w = emit(std::move(r.table), out);
        code = w != kOk ? w : r.exit_code;
    });

    // stieltjes
    auto* st = app.add_subcommand("stieltjes", "Residuals of Stieltjes-transform identities");
    StieltjesOptions so;
    std::string st_grid;
    double st_tol = -1;
    st->add_option("--identity", so.identity, "lemma21, lemma22, eq31, thm441 or thm441_corrected")
        ->required();
    st->add_option("spec", so.spec, "Spec string (not used by lemma21)");
    st->add_option("--claimed", so.claimed, "Claimed law of the mixture");
    st->add_option("--grid", st_grid, "re_a:re_b:steps,im | a:b:steps | point list");
    st->add_option("--tolerance", st_tol, "Pass tolerance");
    st->add_option("--x1", so.x1, "lemma21 first node");
    st->add_option("--x2", so.x2, "lemma21 second node");
    add_output_flags(st, out);
    st->callback([&] {
        if (so.identity != "lemma21" && so.spec.empty()) throw UsageError("missing spec string");
        if (!st_grid.empty()) so.points = parse_stieltjes_grid(st_grid);
        if (st_tol > 0) so.tolerance = st_tol;
        auto r = cmd_stieltjes(so);
        const int w = emit(std::move(r.table), out);
        code = w != kOk ? w : r.exit_code;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "powermix: parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "powermix: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "powermix: " << e.what() << '\n';
        return kUsage;
    } catch (const NoFiniteMomentError& e) {
        std::cerr << "powermix: no finite moments: " << e.what() << '\n';
        return kDomain;
    } catch (const DomainError& e) {
        std::cerr << "powermix: domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "powermix: I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "powermix: " << e.what() << '\n';
        return kUsage;
    }
}
