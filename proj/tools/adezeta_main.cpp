#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "adezeta/pipeline.hpp"

using namespace adezeta;

namespace {

JobConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    OrderedJson j = OrderedJson::parse(in);
    return JobConfig::from_json(j);
}

int run_zeta_cmd(JobConfig cfg) {
    auto res = run_zeta(cfg);
    if (cfg.format == "json") {
        std::cout << zeta_result_json(cfg, res).dump(2) << "\n";
    } else {
        std::cout << "f = " << cfg.poly << ",  p = " << cfg.p << "\n";
        std::cout << "mu = " << res.page.mu << ",  deg p(t) = " << res.zeta.deg()
                  << ",  N_target = " << res.n_target << ", N_work = " << res.n_work
                  << "\n";
        std::cout << "p(t) = " << int_poly_string(res.zeta.p_poly) << "\n";
        std::cout << "Z(t) = " << zeta_factor_string(res.zeta) << "\n";
        if (res.oracle_checked) {
            std::cout << "oracle counts:";
            for (auto& c : res.oracle_counts) std::cout << " " << c;
            std::cout << "  => " << (res.oracle_ok ? "consistent" : "INCONSISTENT")
                      << "\n";
        }
        std::cout << "weil: lead " << (res.weil.lead_ok ? "ok" : "FAIL") << ", roots "
                  << (res.weil.roots_ok ? "ok" : "warn") << "\n";
    }
    if (res.oracle_checked && !res.oracle_ok) return kInternalError;
    return kOk;
}

int run_e2_cmd(const std::string& poly) {
    QPoly f = poly_parse(poly);
    auto page = e2_basis(f);
    std::cout << page_report_json(page).dump(2) << "\n";
    return kOk;
}

int run_operators_cmd(const JobConfig& cfg) {
    QPoly f = poly_parse(cfg.poly);
    for (auto& s : cfg.singularities) {
        auto ops = transfer_operators(f, s, Int(cfg.p));
        std::cout << s.type.str() << " at [";
        for (int i = 0; i < 4; ++i) std::cout << (i ? ":" : "") << s.point[i];
        std::cout << "], chart " << kVarNames[s.pick_chart(Int(cfg.p))] << ":\n";
        for (auto& D : ops) std::cout << "  " << D.str() << "\n";
    }
    return kOk;
}

int run_count_cmd(const std::string& poly, uint64_t p, int ext) {
    QPoly f = poly_parse(poly);
    auto F = build_field(p, ext);
    std::cout << count_points(f, F) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zeta functions of ADE-singular hypersurfaces in P^3"};
    app.require_subcommand(1);

    std::string config_path, poly;
    int truncation = -1, precision = -1, oracle = -1, ext = 1, buffer = -1;
    uint64_t prime = 0;
    std::string format;

    auto* zeta = app.add_subcommand("zeta", "run the full pipeline");
    zeta->add_option("--config", config_path, "job config JSON")->required();
    zeta->add_option("--truncation", truncation, "Frobenius truncation K (default auto)");
    zeta->add_option("--precision", precision, "target p-adic precision (default auto)");
    zeta->add_option("--oracle", oracle, "brute-force depth R");
    zeta->add_option("--buffer", buffer, "working precision headroom");
    zeta->add_option("--format", format, "json|text");

    auto* e2 = app.add_subcommand("e2", "E2-page basis report");
    e2->add_option("--poly", poly, "polynomial in w,x,y,z");
    e2->add_option("--config", config_path, "job config JSON");

    auto* ops = app.add_subcommand("operators", "annihilator operators");
    ops->add_option("--config", config_path, "job config JSON")->required();

    auto* count = app.add_subcommand("count", "brute-force point count");
    count->add_option("--poly", poly, "polynomial in w,x,y,z")->required();
    count->add_option("--prime", prime, "prime p")->required();
    count->add_option("--ext", ext, "field extension degree r");

    CLI11_PARSE(app, argc, argv);

    try {
        if (zeta->parsed()) {
            JobConfig cfg = load_config(config_path);
            if (truncation >= 0) cfg.truncation = truncation;
            if (precision >= 0) cfg.precision = precision;
            if (oracle >= 0) cfg.oracle_depth = oracle;
            if (buffer >= 0) cfg.buffer = buffer;
            if (!format.empty()) cfg.format = format;
            return run_zeta_cmd(cfg);
        }
        if (e2->parsed()) {
            if (poly.empty()) {
                if (config_path.empty()) throw config_error("need --poly or --config");
                poly = load_config(config_path).poly;
            }
            return run_e2_cmd(poly);
        }
        if (ops->parsed()) return run_operators_cmd(load_config(config_path));
        if (count->parsed()) return run_count_cmd(poly, prime, ext);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const equisingularity_error& e) {
        std::cerr << "equisingularity error: " << e.what() << "\n";
        return kEquisingularityError;
    } catch (const parse_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const singularity_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return kPrecisionError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternalError;
    }
    return kOk;
}
