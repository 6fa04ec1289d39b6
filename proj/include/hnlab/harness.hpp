#ifndef HNLAB_HARNESS_HPP
#define HNLAB_HARNESS_HPP

// Experiment configuration, deterministic orchestration, and report
// emission: one CSV + one JSON summary + one manifest per run. Every
// randomized estimator below draws from the config seed, so re-running a
// config reproduces all CSV numeric fields byte for byte.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hnlab/ballres.hpp"
#include "hnlab/multipoly.hpp"
#include "hnlab/phase.hpp"
#include "hnlab/polydisk.hpp"
#include "hnlab/schur1d.hpp"
#include "hnlab/semialg.hpp"
#include "hnlab/util.hpp"

namespace hnlab {

inline const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
    std::string kind;  // schur | phase | superres | lambda | ball | demo
    std::uint64_t seed = 0;
    int grid_log2 = 0;  // per-kind default applied when 0
    double compact_radius = 0.5;
    std::vector<double> schedule;  // kind-specific perturbation schedule
    std::string out_dir = "out";
    int threads = 1;
    nlohmann::json source;  // kind-specific source object

    // kind-specific knobs
    int count = 0;             // schur perturbations / ball corpus size
    double eps = 1e-3;         // schur certificate radius
    int truncation = 12;       // ball series truncation
    std::uint64_t lambda_samples = 1ull << 20;
    int fourier_bound = 4;     // phase box bound per axis
};

inline bool known_kind(const std::string& kind) {
    return kind == "schur" || kind == "phase" || kind == "superres" ||
           kind == "lambda" || kind == "ball" || kind == "demo";
}

inline ExperimentConfig default_config(const std::string& kind) {
    ExperimentConfig c;
    c.kind = kind;
    if (kind == "schur") {
        c.grid_log2 = 9;  // 512 boundary angles per circle
        c.count = 50;
        c.schedule = {0.1, 0.3, 0.5, 0.7, 0.9};
        c.source = {{"taylor", {{0.5, 0.0}, {0.75, 0.0}, {-0.375, 0.0}}}};
    } else if (kind == "phase") {
        c.grid_log2 = 12;
        c.source = {{"p", {{"dim", 1}, {"terms", {{{"alpha", {0}}, {"re", 1.0}, {"im", 0.0}}}}}},
                    {"m", {1}}};
    } else if (kind == "superres") {
        c.grid_log2 = 9;
        for (int k = 3; k <= 10; ++k) c.schedule.push_back(std::pow(2.0, -k));
        c.source = {{"p",
                     {{"dim", 2},
                      {"terms",
                       {{{"alpha", {0, 0}}, {"re", 2.0}, {"im", 0.0}},
                        {{"alpha", {1, 0}}, {"re", -1.0}, {"im", 0.0}},
                        {{"alpha", {0, 1}}, {"re", -1.0}, {"im", 0.0}}}}}},
                    {"m", {0, 0}}};
    } else if (kind == "lambda") {
        c.schedule = {0.05, 0.1, 0.2, 0.4, 0.5};
        c.source = {{"dim", 1}, {"terms", {{{"alpha", {1}}, {"c", 1.0}}}}};
    } else if (kind == "ball") {
        c.count = 100;
    } else if (kind == "demo") {
        c.count = 11;
        c.grid_log2 = 9;
    }
    return c;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    std::string kind = j.value("kind", std::string{});
    if (!known_kind(kind))
        throw std::invalid_argument("config: unknown or missing kind");
    ExperimentConfig c = default_config(kind);
    c.seed = j.value("seed", c.seed);
    if (j.contains("grid")) {
        int n = j.at("grid").get<int>();
        int lg = 0;
        while ((1 << lg) < n && lg < 30) ++lg;
        c.grid_log2 = lg;
        if ((1 << lg) != n) c.grid_log2 = -n;  // remembered for validation
    }
    c.grid_log2 = j.value("grid_log2", c.grid_log2);
    c.compact_radius = j.value("radius", c.compact_radius);
    if (j.contains("schedule")) c.schedule = j.at("schedule").get<std::vector<double>>();
    c.out_dir = j.value("out", c.out_dir);
    c.threads = j.value("threads", c.threads);
    if (j.contains("source")) c.source = j.at("source");
    c.count = j.value("count", c.count);
    c.eps = j.value("eps", c.eps);
    c.truncation = j.value("truncation", c.truncation);
    c.lambda_samples = j.value("lambda_samples", c.lambda_samples);
    c.fourier_bound = j.value("fourier_bound", c.fourier_bound);
    return c;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    return {{"kind", c.kind},
            {"seed", c.seed},
            {"grid_log2", c.grid_log2},
            {"radius", c.compact_radius},
            {"schedule", c.schedule},
            {"out", c.out_dir},
            {"threads", c.threads},
            {"source", c.source},
            {"count", c.count},
            {"eps", c.eps},
            {"truncation", c.truncation},
            {"lambda_samples", c.lambda_samples},
            {"fourier_bound", c.fourier_bound}};
}

inline std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> bad;
    if (!known_kind(c.kind)) bad.push_back("kind: unknown experiment kind");
    if (c.kind == "phase" || c.kind == "superres" || c.kind == "schur" || c.kind == "demo") {
        if (c.grid_log2 < 2 || c.grid_log2 > 20)
            bad.push_back("grid: resolution must be a power of two between 2^2 and 2^20");
    }
    if (c.compact_radius <= 0.0 || c.compact_radius >= 1.0)
        bad.push_back("radius: compact radius must lie in (0,1)");
    for (double s : c.schedule)
        if (!(s > 0.0))
            bad.push_back("schedule: entries must be positive");
    if (c.kind == "schur" || c.kind == "ball") {
        if (c.count < 1) bad.push_back("count: must be at least 1");
    }
    if (c.kind == "schur" && !(c.eps > 0.0))
        bad.push_back("eps: certificate radius must be positive");
    if (c.kind == "ball" && (c.truncation < 2 || c.truncation > 24))
        bad.push_back("truncation: series order must lie in [2, 24]");
    if (c.kind == "lambda" && c.lambda_samples < 1024)
        bad.push_back("lambda_samples: need at least 1024 sample points");
    return bad;
}

// ---------------------------------------------------------------------------
// Report writers.
// ---------------------------------------------------------------------------
namespace detail {

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_number(values[i]);
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

inline std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump(2) << '\n';
}

/// Rounds every number in a JSON tree to 12 significant digits.
inline nlohmann::json round_json(const nlohmann::json& j) {
    if (j.is_number_float()) return round12(j.get<double>());
    if (j.is_object()) {
        nlohmann::json o = nlohmann::json::object();
        for (auto it = j.begin(); it != j.end(); ++it) o[it.key()] = round_json(it.value());
        return o;
    }
    if (j.is_array()) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& v : j) a.push_back(round_json(v));
        return a;
    }
    return j;
}

struct Manifest {
    std::string config_hash;
    std::string started;
    std::string finished;
    nlohmann::json rows = nlohmann::json::array();

    void add_row(std::size_t index, const std::string& op, const std::string& tolerances,
                 const std::string& status) {
        rows.push_back({{"row", index}, {"op", op}, {"tolerances", tolerances}, {"status", status}});
    }

    nlohmann::json dump() const {
        return {{"config_hash", config_hash},
                {"version", kToolVersion},
                {"started", started},
                {"finished", finished},
                {"rows", rows}};
    }
};

inline std::string config_hash(const ExperimentConfig& c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(to_json(c).dump())));
    return buf;
}

inline Complex complex_from_pair(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline RationalInner source_rif(const ExperimentConfig& c) {
    return rif_from_denominator(cpoly_from_json(c.source.at("p")),
                                c.source.at("m").get<MultiIndex>());
}

inline RealPoly source_realpoly(const nlohmann::json& j) {
    RealPoly q;
    q.dim = j.at("dim").get<int>();
    for (const auto& t : j.at("terms")) {
        MultiIndex a = t.at("alpha").get<MultiIndex>();
        double v = t.at("c").get<double>();
        if (v != 0.0) q.terms[a] += v;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Experiment bodies. Each returns the process exit code.
// ---------------------------------------------------------------------------

/// Deterministic Schur perturbation corpus: perturbed terminated chains and
/// tail recombinations, rescaled until the section gap stays within eps.
inline std::vector<SchurPerturbation> make_schur_perturbations(
    const std::vector<Complex>& taylor, int count, double eps, std::uint64_t seed) {
    SchurAnalysis an = schur_parameters(taylor);
    const std::size_t k = an.chain.gamma.size() - 1;
    const int order = static_cast<int>(taylor.size()) - 1;
    std::vector<SchurPerturbation> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Rng rng(mix_seed(seed, 0x9e7 + static_cast<std::uint64_t>(i)));
        double sigma = 0.25 * eps;
        for (int attempt = 0; attempt < 60; ++attempt) {
            SchurChain chain = an.chain;
            const int kind = i % 3;
            Rng draw(mix_seed(seed, 0x51d + static_cast<std::uint64_t>(i) * 131 +
                                        static_cast<std::uint64_t>(attempt)));
            for (std::size_t j = 0; j < k; ++j) {
                Complex g = chain.gamma[j] + sigma * complex_normal(draw);
                if (std::abs(g) > 0.995) g *= 0.995 / std::abs(g);
                chain.gamma[j] = g;
            }
            CPoly num(1), den(1);
            if (kind == 0) {
                // stay a Blaschke product: rotate the boundary parameter
                chain.gamma[k] *= std::polar(1.0, sigma * normal01(draw));
                auto quad = wall_polynomials(chain);
                num = quad.A;
                den = quad.B;
            } else {
                // pull the last parameter inside and attach a constant tail
                chain.gamma[k] *= 1.0 - (0.1 + 0.9 * uniform01(draw)) * sigma;
                chain.terminated = false;
                auto quad = wall_polynomials(chain);
                Complex tail = (kind == 1) ? Complex{}
                                           : 0.5 * disk_point(draw, 1.0);
                CPoly z = CPoly::monomial(1, MultiIndex{1}, Complex{1.0, 0.0});
                num = quad.A + z * quad.Bstar * tail;
                den = quad.B + z * quad.Astar * tail;
            }
            BlaschkeRational g{num, den};
            auto t = g.taylor(order);
            double gap2 = 0.0;
            for (std::size_t j = 0; j < t.size(); ++j) gap2 += std::norm(t[j] - taylor[j]);
            if (std::sqrt(gap2) <= eps) {
                out.push_back({std::move(t), [g](Complex z0) { return g.eval(z0); }});
                break;
            }
            sigma *= 0.5;
        }
        (void)rng;
    }
    if (out.size() != static_cast<std::size_t>(count))
        throw std::domain_error("make_schur_perturbations: rescaling failed");
    return out;
}

inline int run_schur(const ExperimentConfig& c, Manifest& manifest,
                     nlohmann::json& summary) {
    std::vector<Complex> taylor;
    for (const auto& p : c.source.at("taylor")) taylor.push_back(complex_from_pair(p));
    auto cert = superres_bound_1d(taylor, c.eps, c.seed);
    auto perts = make_schur_perturbations(taylor, c.count, c.eps, c.seed);
    auto rows = verify_superres_1d(taylor, perts, c.schedule, cert, 1 << c.grid_log2);

    CsvWriter csv(std::filesystem::path(c.out_dir) / "schur.csv",
                  {"eps", "z_radius", "max_distance", "certified_bound", "violation"});
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        csv.row({r.eps, r.z_radius, r.max_distance, r.certified_bound, r.violation});
        manifest.add_row(i, "verify_superres_1d",
                         "certificate 4*M*eps/((L-M*eps)(1-|z|)); eps<=" +
                             csv_number(c.eps),
                         "ok");
        worst = std::max(worst, r.violation);
    }
    summary = {{"L", cert.L}, {"M", cert.M}, {"eps", cert.eps},
               {"rows", rows.size()}, {"max_violation", worst},
               {"certificate_is_fitted", true}};
    return worst > 0.0 ? 3 : 0;
}

inline int run_phase(const ExperimentConfig& c, Manifest& manifest,
                     nlohmann::json& summary) {
    RationalInner f = source_rif(c);
    CayleyInner phi{f};
    const int n = 1 << c.grid_log2;
    auto grid = phase_function(source_from_cayley(phi), n,
                               default_radius_schedule(), c.threads);
    save_phase_grid(grid, (std::filesystem::path(c.out_dir) / "phase.phg").string());

    MultiIndex bound(static_cast<std::size_t>(f.dim()), c.fourier_bound);
    auto table = fourier_coeffs(grid, bound);
    nlohmann::json coeffs = nlohmann::json::array();
    table.for_each([&](const std::vector<int>& a) {
        Complex v = table.at(a);
        coeffs.push_back({{"alpha", a}, {"re", v.real()}, {"im", v.imag()}});
    });
    write_json(std::filesystem::path(c.out_dir) / "fourier.json",
               round_json({{"dim", f.dim()}, {"bound", bound}, {"coeff", coeffs}}));

    // cross-validation against the universal maps on the Fourier box
    PowerSeries section = taylor_section(phi, bound);
    auto uni = universal_L({section, section.constant_term()});
    double cross = 0.0;
    uni.for_each([&](const std::vector<int>& a) {
        cross = std::max(cross, std::abs(uni.at(a) - table.at(a)));
    });

    auto pluri = pluriharmonic_check(table, 5e-3);
    std::vector<Complex> z_half(static_cast<std::size_t>(f.dim()), Complex{});
    z_half[0] = {0.5, 0.0};
    Complex rec = reconstruct_phi(grid, 0.0, z_half);

    manifest.add_row(0, "phase_function+fourier_coeffs",
                     "cross-validation vs universal_L; pluriharmonic tol 5e-3", "ok");
    summary = {{"grid", n},
               {"converged", grid.converged},
               {"cross_validation_max_gap", cross},
               {"pluriharmonic_pass", pluri.pass},
               {"pluriharmonic_max_mixed", pluri.max_mixed},
               {"reconstruct_at_half_re", rec.real()},
               {"reconstruct_at_half_im", rec.imag()},
               {"g_mean", table.at(std::vector<int>(static_cast<std::size_t>(f.dim()), 0)).real()}};
    return pluri.pass ? 0 : 3;
}

inline int run_superres(const ExperimentConfig& c, Manifest& manifest,
                        nlohmann::json& summary) {
    RationalInner f = source_rif(c);
    CayleyInner R{f};
    std::optional<CayleyInner> target;
    if (c.source.contains("target"))
        target = CayleyInner{rif_from_denominator(
            cpoly_from_json(c.source.at("target").at("p")),
            c.source.at("target").at("m").get<MultiIndex>())};
    auto res = superres_sweep(R, c.schedule, c.compact_radius, 1 << c.grid_log2,
                              target, c.seed, c.threads);

    CsvWriter csv(std::filesystem::path(c.out_dir) / "superres.csv",
                  {"t", "delta", "sup_dist", "phase_l1", "fourier_gap",
                   "bound_a_ratio", "bound_b_ratio"});
    bool monotone = true;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& r = res.rows[i];
        csv.row({r.t, r.delta, r.sup_dist, r.phase_l1, r.fourier_gap,
                 r.bound_a_ratio, r.bound_b_ratio});
        manifest.add_row(i, "superres_sweep",
                         "phase grid 2^" + std::to_string(c.grid_log2) +
                             "; sup over |z_j|=" + csv_number(c.compact_radius),
                         r.ok ? "ok" : ("error: " + r.error));
        if (i > 0 && r.sup_dist < res.rows[i - 1].sup_dist - 1e-12) monotone = false;
    }
    nlohmann::json charts = nlohmann::json::array();
    for (const auto& ch : res.charts)
        charts.push_back({{"chart", ch.chart},
                          {"admissible", ch.admissible},
                          {"m", ch.m},
                          {"q_m", ch.q_m},
                          {"q_total_degree", ch.q_total_degree}});
    summary = {{"kappa_pred", res.summary.kappa_pred},
               {"slope_fit", res.summary.slope_fit},
               {"A_fit", res.summary.A_fit},
               {"B_fit", res.summary.B_fit},
               {"C_fit", res.summary.C_fit},
               {"rho_empirical", res.summary.rho_empirical},
               {"bound_b_uniform", res.summary.bound_b_uniform},
               {"headline_uniform", res.summary.headline_uniform},
               {"fit_residual_rms", res.fit_residual_rms},
               {"indicator_misfit", res.indicator_misfit},
               {"sup_monotone", monotone},
               {"charts", charts}};
    bool ok_rows = true;
    for (const auto& r : res.rows) ok_rows &= r.ok;
    if (!ok_rows) return 2;
    return (res.summary.bound_b_uniform && monotone) ? 0 : 3;
}

inline int run_lambda(const ExperimentConfig& c, Manifest& manifest,
                      nlohmann::json& summary) {
    RealPoly q = source_realpoly(c.source);
    PushforwardPoly pf{q, 0, 0};
    auto adm = admissible_index(pf);
    auto fit = lambda_decay_check(q, adm, c.schedule,
                                  static_cast<std::size_t>(c.lambda_samples), c.seed);
    CsvWriter csv(std::filesystem::path(c.out_dir) / "lambda.csv", {"eps", "lambda"});
    for (std::size_t i = 0; i < fit.points.size(); ++i) {
        csv.row({fit.points[i].first, fit.points[i].second});
        manifest.add_row(i, "lambda_fn",
                         "bathtub with 2^" + std::to_string(63 - __builtin_clzll(c.lambda_samples)) +
                             " low-discrepancy points",
                         "ok");
    }
    summary = {{"m", adm.m},
               {"abs_m", abs_total(adm.m)},
               {"q_m", adm.q_m},
               {"c_fit", fit.c_fit},
               {"slope", fit.slope},
               {"expected_slope_bound", abs_total(adm.m) + 1}};
    return 0;
}

inline int run_ball(const ExperimentConfig& c, Manifest& manifest,
                    nlohmann::json& summary) {
    CsvWriter csv(std::filesystem::path(c.out_dir) / "ball.csv",
                  {"d", "rho", "lhs", "rhs", "slack"});
    double min_slack = std::numeric_limits<double>::infinity();
    double min_slack_sq = std::numeric_limits<double>::infinity();
    double max_iderr = 0.0;
    for (int i = 0; i < c.count; ++i) {
        Rng rng(mix_seed(c.seed, 0xba5e + static_cast<std::uint64_t>(i)));
        const int d = 2 + (i % 2);
        std::vector<Complex> center(static_cast<std::size_t>(d));
        double scale = 0.3 + 0.4 * uniform01(rng);
        {
            auto s = sphere_point(rng, d);
            for (int j = 0; j < d; ++j) center[static_cast<std::size_t>(j)] = scale * s[static_cast<std::size_t>(j)];
        }
        BallMap F = unitary_compose(random_unitary(d, rng), ball_automorphism(center));

        BallSelfMap f;
        const int kind = i % 3;
        if (kind == 0) {
            BallMap scaled = F;
            double s = 0.97 + 0.02 * uniform01(rng);
            for (std::size_t k = 1; k < scaled.a.size(); ++k) {
                for (auto& v : scaled.a[k]) v *= s;
                scaled.b[k] *= s;
            }
            f = self_map_from(scaled, c.truncation);
        } else if (kind == 1) {
            std::vector<Complex> center2(static_cast<std::size_t>(d));
            auto s2 = sphere_point(rng, d);
            double sc2 = 0.2 + 0.3 * uniform01(rng);
            for (int j = 0; j < d; ++j) center2[static_cast<std::size_t>(j)] = sc2 * s2[static_cast<std::size_t>(j)];
            BallMap G = unitary_compose(random_unitary(d, rng), ball_automorphism(center2));
            double eta = 0.02 + 0.05 * uniform01(rng);
            auto Fe = F;
            auto Ge = G;
            f.dim = d;
            f.series = ball_series(F, c.truncation) * (1.0 - eta) +
                       ball_series(G, c.truncation) * eta;
            f.eval = [Fe, Ge, eta](const std::vector<Complex>& z) {
                auto u = Fe.eval(z);
                auto v = Ge.eval(z);
                for (std::size_t j = 0; j < u.size(); ++j)
                    u[j] = (1.0 - eta) * u[j] + eta * v[j];
                return u;
            };
        } else {
            double eta = 0.001 + 0.01 * uniform01(rng);
            auto Fe = F;
            f.dim = d;
            f.series = ball_series(F, c.truncation) * (1.0 - 2.0 * eta);
            {
                MultiIndex e1(static_cast<std::size_t>(d), 0);
                e1[0] = 1;
                f.series.comp[0][e1] += eta;
            }
            f.eval = [Fe, eta](const std::vector<Complex>& z) {
                auto u = Fe.eval(z);
                for (auto& v : u) v *= 1.0 - 2.0 * eta;
                u[0] += eta * z[0];
                return u;
            };
        }
        auto row = verify_ball_bound(F, f, c.truncation, mix_seed(c.seed, static_cast<std::uint64_t>(i)));
        csv.row({static_cast<double>(row.d), row.rho, row.lhs, row.rhs, row.slack});
        manifest.add_row(static_cast<std::size_t>(i), "verify_ball_bound",
                         "slack tol -1e-6; boundary identity tol 1e-9",
                         "ok");
        min_slack = std::min(min_slack, row.slack);
        min_slack_sq = std::min(min_slack_sq, row.slack_bminsq);
        max_iderr = std::max(max_iderr, row.boundary_identity_error);
    }
    summary = {{"count", c.count},
               {"min_slack", min_slack},
               {"min_slack_bminsq_variant", min_slack_sq},
               {"max_boundary_identity_error", max_iderr}};
    return (min_slack >= -1e-6 && max_iderr <= 1e-9) ? 0 : 3;
}

inline int run_demo(const ExperimentConfig& c, Manifest& manifest,
                    nlohmann::json& summary) {
    auto rep = nonuniqueness_demo(c.count, 1 << c.grid_log2);
    CsvWriter csv(std::filesystem::path(c.out_dir) / "demo.csv",
                  {"lambda", "sup_f", "sup_g"});
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        csv.row({r.lambda, r.sup_f, r.sup_g});
        manifest.add_row(i, "nonuniqueness_demo", "sup-norm grids with 2 refinement levels", "ok");
        worst = std::max({worst, std::abs(r.sup_f - 1.0), std::abs(r.sup_g - 1.0)});
    }
    summary = {{"rows", rep.rows.size()},
               {"max_deviation_from_one", worst},
               {"affine_deviation", rep.affine_deviation}};
    return (worst <= 1e-4 && rep.affine_deviation == 0.0) ? 0 : 3;
}

}  // namespace detail

struct RunManifest {
    std::string config_hash;
    std::string version;
    std::string started;
    std::string finished;
};

/// Dispatches the experiment, writes CSV + JSON summary + manifest under
/// the configured output directory, and returns the process exit code:
/// 0 success, 1 config error, 2 math-domain error, 3 acceptance violation.
inline int run(const ExperimentConfig& c) {
    auto violations = validate(c);
    if (!violations.empty()) {
        for (const auto& v : violations) std::fprintf(stderr, "config error: %s\n", v.c_str());
        return 1;
    }
    std::filesystem::create_directories(c.out_dir);
    detail::Manifest manifest;
    manifest.config_hash = detail::config_hash(c);
    manifest.started = detail::iso_now();

    nlohmann::json summary;
    int code = 0;
    try {
        if (c.kind == "schur") code = detail::run_schur(c, manifest, summary);
        else if (c.kind == "phase") code = detail::run_phase(c, manifest, summary);
        else if (c.kind == "superres") code = detail::run_superres(c, manifest, summary);
        else if (c.kind == "lambda") code = detail::run_lambda(c, manifest, summary);
        else if (c.kind == "ball") code = detail::run_ball(c, manifest, summary);
        else if (c.kind == "demo") code = detail::run_demo(c, manifest, summary);
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "math-domain error: %s\n", e.what());
        code = 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        code = 1;
    }
    manifest.finished = detail::iso_now();
    if (code != 1) {
        detail::write_json(std::filesystem::path(c.out_dir) / (c.kind + "_summary.json"),
                           detail::round_json(summary));
        detail::write_json(std::filesystem::path(c.out_dir) / "manifest.json",
                           manifest.dump());
    }
    return code;
}

}  // namespace hnlab

#endif  // HNLAB_HARNESS_HPP
