#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracle.hpp"
#include "reduction.hpp"

// Job configuration, pipeline orchestration and report assembly.

namespace adezeta {

using OrderedJson = nlohmann::ordered_json;

enum ExitCode {
    kOk = 0,
    kConfigError = 2,
    kEquisingularityError = 3,
    kPrecisionError = 4,
    kInternalError = 5,
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct equisingularity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JobConfig {
    std::string poly;
    uint64_t p = 0;
    std::vector<SingularityRecord> singularities;
    int truncation = 0;      // 0: automatic
    int precision = 0;       // 0: automatic (Weil bound)
    int buffer = 8;          // working-precision headroom
    int oracle_depth = 0;
    std::string format = "text";

    static JobConfig from_json(const OrderedJson& j) {
        JobConfig c;
        if (!j.contains("poly") || !j.contains("p"))
            throw config_error("config needs 'poly' and 'p'");
        c.poly = j.at("poly").get<std::string>();
        c.p = j.at("p").get<uint64_t>();
        if (j.contains("singularities")) {
            for (auto& s : j.at("singularities")) {
                SingularityRecord rec;
                std::array<Rational, 4> pt;
                auto arr = s.at("point");
                if (arr.size() != 4) throw config_error("point needs 4 coordinates");
                for (int i = 0; i < 4; ++i) {
                    std::string v = arr[size_t(i)].is_string()
                                        ? arr[size_t(i)].get<std::string>()
                                        : std::to_string(arr[size_t(i)].get<long long>());
                    auto slash = v.find('/');
                    if (slash == std::string::npos)
                        pt[size_t(i)] = Rational(Int(v));
                    else
                        pt[size_t(i)] = Rational(Int(v.substr(0, slash))) /
                                        Rational(Int(v.substr(slash + 1)));
                }
                rec.point = SingularityRecord::normalize_point(pt);
                rec.type = AdeType::parse(s.at("type").get<std::string>());
                if (s.contains("chart")) {
                    std::string ch = s.at("chart").get<std::string>();
                    for (int i = 0; i < 4; ++i)
                        if (ch == std::string(1, kVarNames[i])) rec.chart = i;
                }
                c.singularities.push_back(std::move(rec));
            }
        }
        if (j.contains("oracle_depth")) c.oracle_depth = j.at("oracle_depth").get<int>();
        if (j.contains("truncation")) c.truncation = j.at("truncation").get<int>();
        if (j.contains("precision")) c.precision = j.at("precision").get<int>();
        if (j.contains("buffer")) c.buffer = j.at("buffer").get<int>();
        return c;
    }
};

struct ZetaRunResult {
    ZetaFunction zeta;
    PageReport page;
    std::vector<Int> oracle_counts;
    bool oracle_checked = false;
    bool oracle_ok = true;
    WeilReport weil;
    PrecisionAudit audit;
    int n_target = 0;
    int n_work = 0;
    double seconds = 0.0;
};

inline ResidueRing make_ring(uint64_t p, int n_target, int& buffer) {
    for (;;) {
        try {
            return ResidueRing(p, n_target + buffer);
        } catch (const std::overflow_error&) {
            if (--buffer < 3)
                throw precision_error(
                    "p^{N_work} does not fit the 126-bit residue arithmetic even "
                    "with the minimal buffer");
        }
    }
}

inline ZetaRunResult run_zeta(const JobConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    QPoly f = poly_parse(cfg.poly);
    auto nd = f.homogeneous_degree();
    if (!nd || *nd < 3) throw config_error("f must be homogeneous of degree >= 3");

    ZetaRunResult out;
    out.page = e2_basis(f);
    int declared = 0;
    for (auto& s : cfg.singularities) {
        if (!is_singular_point(f, s.point))
            throw config_error("declared point is not a singular point of f");
        declared += s.type.milnor();
    }
    if (declared != out.page.mu)
        throw config_error("declared Milnor sum " + std::to_string(declared) +
                           " != computed global Milnor number " +
                           std::to_string(out.page.mu));
    if (!equisingularity_check(f, cfg.p))
        throw equisingularity_error(
            "the Jacobian quotient has p-torsion: the integer lift is not "
            "equisingular at p = " + std::to_string(cfg.p));

    int M = out.page.total_dim();
    out.n_target = std::max(cfg.precision, minimal_precision(M, cfg.p, cfg.p));
    int buffer = cfg.buffer;

    if (M == 0) {
        out.zeta = assemble_zeta({Int(1)}, cfg.p);
        out.n_work = 0;
    } else {
        for (int attempt = 0;; ++attempt) {
            ResidueRing R = make_ring(cfg.p, out.n_target, buffer);
            out.n_work = R.n_work;
            ReductionEngine engine(f, out.page, R, cfg.singularities);
            out.audit = PrecisionAudit{};
            out.audit.n_target = out.n_target;
            out.audit.n_work = R.n_work;
            RMatrix A;
            bool exhausted = false;
            try {
                A = engine.frobenius_matrix(out.n_target, cfg.truncation, &out.audit);
            } catch (const precision_error&) {
                if (attempt >= 2) throw;
                exhausted = true;
            }
            if (exhausted || out.audit.min_floor < out.n_target) {
                if (attempt < 2) {
                    int deficit = exhausted ? 8 : (out.n_target - out.audit.min_floor);
                    buffer += deficit + 2;
                    continue;
                }
                throw precision_error("precision exhausted: floor " +
                                      std::to_string(out.audit.min_floor) + " < target " +
                                      std::to_string(out.n_target));
            }
            auto cp = char_reciprocal_poly(R, A, engine.matrix_floor());
            out.zeta = assemble_zeta(lift_to_integers(R, cp, M, cfg.p, out.n_target), cfg.p);
            break;
        }
    }
    out.weil = weil_sanity(out.zeta.p_poly, cfg.p);
    if (cfg.oracle_depth > 0) {
        out.oracle_checked = true;
        for (int r = 1; r <= cfg.oracle_depth; ++r) {
            auto F = build_field(cfg.p, r);
            out.oracle_counts.push_back(count_points(f, F));
        }
        out.oracle_ok = zeta_series_check(out.zeta, out.oracle_counts);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    return out;
}

inline OrderedJson page_report_json(const PageReport& page) {
    OrderedJson entries = OrderedJson::array();
    for (auto& e : page.entries) {
        OrderedJson mons = OrderedJson::array();
        for (auto& m : e.reps) mons.push_back(monomial_str(m));
        entries.push_back({{"pole_order", e.pole},
                           {"degree", e.coeff_degree},
                           {"monomials", mons},
                           {"e1_sub_dim", e.e1_sub_dim}});
    }
    OrderedJson dims = OrderedJson::array();
    for (auto& [m, d] : page.top_dims) dims.push_back({{"degree", m}, {"dim", d}});
    return {{"mu", page.mu},
            {"stable_from", page.stable_top_degree},
            {"e2", entries},
            {"top_dims", dims}};
}

inline OrderedJson zeta_result_json(const JobConfig& cfg, const ZetaRunResult& r) {
    OrderedJson coeffs = OrderedJson::array();
    for (auto& c : r.zeta.p_poly) coeffs.push_back(c.str());
    OrderedJson counts = OrderedJson::array();
    for (auto& c : r.oracle_counts) counts.push_back(c.str());
    OrderedJson j{{"p", cfg.p},
                  {"f", cfg.poly},
                  {"p_of_t", coeffs},
                  {"zeta", {{"num", "1"}, {"den", zeta_factor_string(r.zeta)}}},
                  {"diagnostics",
                   {{"mu", r.page.mu},
                    {"e2_dim", r.page.total_dim()},
                    {"n_target", r.n_target},
                    {"n_work", r.n_work},
                    {"min_floor", r.audit.min_floor == (1 << 20) ? r.n_work
                                                                 : r.audit.min_floor},
                    {"weil_lead_ok", r.weil.lead_ok},
                    {"weil_roots_ok", r.weil.roots_ok},
                    {"seconds", r.seconds}}}};
    if (r.oracle_checked) {
        j["oracle"] = {{"counts", counts}, {"consistent", r.oracle_ok}};
    }
    return j;
}

}  // namespace adezeta
