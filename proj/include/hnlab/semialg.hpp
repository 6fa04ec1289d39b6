#ifndef HNLAB_SEMIALG_HPP
#define HNLAB_SEMIALG_HPP

// Torus chart decomposition, exact chart pushforwards of trigonometric
// polynomials, admissible indices, the sublevel-volume functional, and the
// polydisk superresolution sweep.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hnlab/multipoly.hpp"
#include "hnlab/phase.hpp"
#include "hnlab/polydisk.hpp"
#include "hnlab/util.hpp"

namespace hnlab {

// ---------------------------------------------------------------------------
// Real polynomials over t in [-1, 1]^d.
// ---------------------------------------------------------------------------
struct RealPoly {
    int dim = 1;
    std::map<MultiIndex, double> terms;

    double eval(const std::vector<double>& t) const {
        if (static_cast<int>(t.size()) != dim)
            throw std::invalid_argument("RealPoly::eval: point dimension mismatch");
        double acc = 0.0;
        for (const auto& [a, c] : terms) {
            double m = c;
            for (std::size_t j = 0; j < a.size(); ++j)
                for (int k = 0; k < a[j]; ++k) m *= t[j];
            acc += m;
        }
        return acc;
    }

    int total_degree() const {
        int deg = 0;
        for (const auto& [a, c] : terms) deg = std::max(deg, abs_total(a));
        return deg;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [a, c] : terms) m = std::max(m, std::abs(c));
        return m;
    }
};

// ---------------------------------------------------------------------------
// Charts. Chart id j in [0, 2^d); bit k set selects the mirrored chart on
// axis k:  Psi_1(t) = (1-t^2)/(1+t^2) + i 2t/(1+t^2),  Psi_2 = -Psi_1.
// ---------------------------------------------------------------------------
struct ChartAtlas {
    int dim = 1;
    unsigned chart_count() const { return 1u << dim; }
};

inline Complex psi1(double t) {
    double den = 1.0 + t * t;
    Complex xi{(1.0 - t * t) / den, 2.0 * t / den};
    return xi / std::abs(xi);  // |xi| = 1 exactly
}

inline std::vector<Complex> chart_map(int dim, unsigned chart, const std::vector<double>& t) {
    if (static_cast<int>(t.size()) != dim)
        throw std::invalid_argument("chart_map: point dimension mismatch");
    if (chart >= (1u << dim))
        throw std::invalid_argument("chart_map: chart id out of range");
    for (double v : t)
        if (v < -1.0 || v > 1.0)
            throw std::invalid_argument("chart_map: t outside [-1,1]^d");
    std::vector<Complex> xi(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        Complex v = psi1(t[k]);
        xi[k] = (chart >> k) & 1u ? -v : v;
    }
    return xi;
}

// ---------------------------------------------------------------------------
// Chart pushforward: clearing denominators in P(Phi_j(t)) with the factor
// prod_k (1+t_k^2)^{|n|} gives a real polynomial Q of total degree at most
// 2|n|d. The substitution uses xi_k = s_k (1+i t_k)/(1-i t_k), so
//   prod_k (1+t_k^2)^{|n|} xi^alpha
//     = prod_k s_k^{alpha_k} (1+i t_k)^{|n|+alpha_k} (1-i t_k)^{|n|-alpha_k},
// a polynomial whenever alpha_k <= |n|.
// ---------------------------------------------------------------------------
struct PushforwardPoly {
    RealPoly Q;
    unsigned chart = 0;
    int abs_n = 0;  // |n| of the source trigonometric polynomial
};

namespace detail {

/// Coefficients of s^a (1+it)^{p} (1-it)^{q} as a dense vector over degrees
/// 0..p+q.
inline std::vector<Complex> axis_factor(int sign_pow, int p, int q, bool sign_negative) {
    std::vector<Complex> plus(static_cast<std::size_t>(p) + 1);
    for (int j = 0; j <= p; ++j) {
        // binomial(p, j) * i^j
        double b = 1.0;
        for (int u = 0; u < j; ++u) b = b * (p - u) / (u + 1);
        Complex ipow{1.0, 0.0};
        switch (j & 3) {
            case 0: ipow = {1.0, 0.0}; break;
            case 1: ipow = {0.0, 1.0}; break;
            case 2: ipow = {-1.0, 0.0}; break;
            case 3: ipow = {0.0, -1.0}; break;
        }
        plus[static_cast<std::size_t>(j)] = b * ipow;
    }
    std::vector<Complex> out(static_cast<std::size_t>(p + q) + 1, Complex{});
    for (int j = 0; j <= p; ++j) {
        for (int k = 0; k <= q; ++k) {
            double b = 1.0;
            for (int u = 0; u < k; ++u) b = b * (q - u) / (u + 1);
            Complex ipow{1.0, 0.0};
            switch (k & 3) {
                case 0: ipow = {1.0, 0.0}; break;
                case 1: ipow = {0.0, -1.0}; break;
                case 2: ipow = {-1.0, 0.0}; break;
                case 3: ipow = {0.0, 1.0}; break;
            }
            out[static_cast<std::size_t>(j + k)] += plus[static_cast<std::size_t>(j)] * (b * ipow);
        }
    }
    if (sign_negative && (sign_pow & 1)) {
        for (Complex& c : out) c = -c;
    }
    return out;
}

/// Tensor product of per-axis coefficient vectors into a d-variate table.
inline void accumulate_tensor(std::map<MultiIndex, Complex>& acc,
                              const std::vector<std::vector<Complex>>& axes,
                              Complex weight) {
    const std::size_t d = axes.size();
    MultiIndex idx(d, 0);
    for (;;) {
        Complex c = weight;
        for (std::size_t k = 0; k < d; ++k) c *= axes[k][static_cast<std::size_t>(idx[k])];
        if (c != Complex{}) acc[idx] += c;
        std::size_t k = d;
        while (k-- > 0) {
            if (idx[k] + 1 < static_cast<int>(axes[k].size())) {
                ++idx[k];
                std::fill(idx.begin() + static_cast<long>(k) + 1, idx.end(), 0);
                break;
            }
            if (k == 0) return;
        }
    }
}

}  // namespace detail

inline PushforwardPoly pushforward_Q(const TrigPoly& p, unsigned chart, int abs_n) {
    const int d = p.dim;
    if (chart >= (1u << d))
        throw std::invalid_argument("pushforward_Q: chart id out of range");
    for (int j = 0; j < d; ++j)
        if (p.box.bound()[static_cast<std::size_t>(j)] > abs_n)
            throw std::invalid_argument("pushforward_Q: |n| below the multi-degree of P");

    std::map<MultiIndex, Complex> acc;
    std::size_t idx = 0;
    p.box.for_each([&](const MultiIndex& alpha) {
        double r = p.cos_coeff[idx];
        double rt = p.sin_coeff[idx];
        ++idx;
        if (r == 0.0 && rt == 0.0) return;
        // push of xi^alpha and of conj(xi)^alpha
        std::vector<std::vector<Complex>> fwd(static_cast<std::size_t>(d)),
            bwd(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            bool neg = (chart >> k) & 1u;
            int a = alpha[static_cast<std::size_t>(k)];
            fwd[static_cast<std::size_t>(k)] = detail::axis_factor(a, abs_n + a, abs_n - a, neg);
            bwd[static_cast<std::size_t>(k)] = detail::axis_factor(a, abs_n - a, abs_n + a, neg);
        }
        // r (U+V)/2 + rt (U-V)/(2i) with U = push conj(xi)^alpha and
        // V = push xi^alpha; 1/(2i) = -i/2.
        Complex cu{0.5 * r, -0.5 * rt};
        Complex cv{0.5 * r, 0.5 * rt};
        detail::accumulate_tensor(acc, bwd, cu);
        detail::accumulate_tensor(acc, fwd, cv);
    });

    RealPoly q;
    q.dim = d;
    double maxmag = 0.0;
    for (const auto& [a, c] : acc) maxmag = std::max(maxmag, std::abs(c));
    for (const auto& [a, c] : acc) {
        if (std::abs(c.imag()) > 1e-9 * std::max(1.0, maxmag))
            throw std::domain_error("pushforward_Q: non-real output coefficient");
        if (std::abs(c.real()) > 1e-12 * std::max(1.0, maxmag))
            q.terms[a] = c.real();
    }
    return PushforwardPoly{std::move(q), chart, abs_n};
}

// ---------------------------------------------------------------------------
// Admissible indices: a support index that sigma-lexicographically dominates
// every other nonzero coefficient. Permutations are tried in lexicographic
// order and the first verified pair is returned.
// ---------------------------------------------------------------------------
struct AdmissibleIndex {
    MultiIndex m;
    std::vector<int> sigma;  // axis order, most significant first
    double q_m = 0.0;
};

inline std::optional<AdmissibleIndex> try_admissible_index(const PushforwardPoly& pf) {
    const RealPoly& q = pf.Q;
    if (q.terms.empty()) return std::nullopt;
    if (q.total_degree() == 0) return std::nullopt;  // constant

    std::vector<int> sigma(static_cast<std::size_t>(q.dim));
    for (int j = 0; j < q.dim; ++j) sigma[static_cast<std::size_t>(j)] = j;

    auto sigma_less = [&](const MultiIndex& a, const MultiIndex& b) {
        for (int axis : sigma) {
            if (a[static_cast<std::size_t>(axis)] != b[static_cast<std::size_t>(axis)])
                return a[static_cast<std::size_t>(axis)] < b[static_cast<std::size_t>(axis)];
        }
        return false;
    };

    do {
        const MultiIndex* best = nullptr;
        for (const auto& [a, c] : q.terms)
            if (!best || sigma_less(*best, a)) best = &a;
        // dominance check against every other support index
        bool ok = true;
        for (const auto& [a, c] : q.terms) {
            if (a == *best) continue;
            if (!sigma_less(a, *best)) { ok = false; break; }
        }
        if (ok && abs_total(*best) > 0)
            return AdmissibleIndex{*best, sigma, q.terms.at(*best)};
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return std::nullopt;
}

inline AdmissibleIndex admissible_index(const PushforwardPoly& pf) {
    auto found = try_admissible_index(pf);
    if (!found)
        throw std::domain_error("admissible_index: no admissible index exists");
    return *found;
}

// ---------------------------------------------------------------------------
// Sublevel-volume functional by the bathtub principle: the infimum over
// densities 0 <= v <= 1 of mass eps is attained on the sublevel set of |Q|
// of measure eps, so sorting samples ascending and filling mass eps from
// the bottom converges to the infimum.
// ---------------------------------------------------------------------------
namespace detail {

/// Deterministic low-discrepancy points of [-1,1]^d (Kronecker sequence on
/// fractional parts of prime square roots, offset from the seed).
class LowDiscrepancy {
  public:
    LowDiscrepancy(int dim, std::uint64_t seed) : alpha_(static_cast<std::size_t>(dim)), state_(static_cast<std::size_t>(dim)) {
        static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
        Rng rng(mix_seed(seed, 0x10d));
        for (int j = 0; j < dim; ++j) {
            double s = std::sqrt(primes[j % 8]);
            alpha_[static_cast<std::size_t>(j)] = s - std::floor(s);
            state_[static_cast<std::size_t>(j)] = uniform01(rng);
        }
    }

    void next(std::vector<double>& t) {
        t.resize(alpha_.size());
        for (std::size_t j = 0; j < alpha_.size(); ++j) {
            state_[j] += alpha_[j];
            if (state_[j] >= 1.0) state_[j] -= 1.0;
            t[j] = 2.0 * state_[j] - 1.0;
        }
    }

  private:
    std::vector<double> alpha_;
    std::vector<double> state_;
};

}  // namespace detail

inline double lambda_fn(const RealPoly& q, double eps, std::size_t samples = 1u << 20,
                        std::uint64_t seed = 0) {
    const double volume = std::pow(2.0, q.dim);
    if (eps < 0.0 || eps > volume)
        throw std::invalid_argument("lambda_fn: eps outside [0, lambda(Delta)]");
    if (eps == 0.0) return 0.0;
    detail::LowDiscrepancy seq(q.dim, seed);
    std::vector<double> vals(samples);
    std::vector<double> t;
    for (std::size_t i = 0; i < samples; ++i) {
        seq.next(t);
        vals[i] = std::abs(q.eval(t));
    }
    std::sort(vals.begin(), vals.end());
    const double w = volume / static_cast<double>(samples);
    double mass = 0.0, acc = 0.0;
    for (double v : vals) {
        if (mass + w >= eps) {
            acc += v * (eps - mass);
            return acc;
        }
        acc += v * w;
        mass += w;
    }
    return acc;
}

struct LambdaDecayResult {
    double c_fit = 0.0;  // largest c with Lambda(eps) >= c eps^{|m|+1} on the grid
    double slope = 0.0;  // empirical log-log slope
    std::vector<std::pair<double, double>> points;  // (eps, Lambda)
};

inline LambdaDecayResult lambda_decay_check(const RealPoly& q, const AdmissibleIndex& m,
                                            const std::vector<double>& eps_grid,
                                            std::size_t samples = 1u << 20,
                                            std::uint64_t seed = 0) {
    if (eps_grid.size() < 2)
        throw std::invalid_argument("lambda_decay_check: need at least two eps values");
    LambdaDecayResult out;
    const double expo = static_cast<double>(abs_total(m.m) + 1);
    double c = std::numeric_limits<double>::infinity();
    std::vector<double> lx, ly;
    for (double eps : eps_grid) {
        double lam = lambda_fn(q, eps, samples, seed);
        out.points.emplace_back(eps, lam);
        if (eps > 0.0 && lam > 0.0) {
            c = std::min(c, lam / std::pow(eps, expo));
            lx.push_back(std::log(eps));
            ly.push_back(std::log(lam));
        }
    }
    out.c_fit = std::isfinite(c) ? c : 0.0;
    out.slope = (lx.size() >= 2) ? ls_slope(lx, ly) : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Superresolution sweep on the polydisk.
// ---------------------------------------------------------------------------
struct SweepRow {
    double t = 0.0;
    double delta = 0.0;        // ||T_n(R) - T_n(f_t)||_2
    double sup_dist = 0.0;     // sup over the compact K
    double phase_l1 = 0.0;     // ||g - h_t||_{L1(T^d)}
    double fourier_gap = 0.0;  // |int (g - h) P dTheta| via the moment form
    double bound_a_ratio = 0.0;
    double bound_b_ratio = 0.0;
    bool ok = true;
    std::string error;
};

struct ChartReport {
    unsigned chart = 0;
    bool admissible = false;
    MultiIndex m;
    double q_m = 0.0;
    int q_total_degree = 0;
};

struct SweepSummary {
    double kappa_pred = std::numeric_limits<double>::quiet_NaN();
    double slope_fit = 0.0;
    double A_fit = 0.0;
    double B_fit = 0.0;
    double C_fit = 0.0;
    double rho_empirical = 0.0;
    bool bound_b_uniform = false;
    bool headline_uniform = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by delta ascending
    SweepSummary summary;
    TrigPoly P;
    double fit_residual_rms = 0.0;   // rms of P - (2g-1) over the grid
    double indicator_misfit = 0.0;   // L1 misfit of chi_{P>0} against g
    std::vector<ChartReport> charts;
};

namespace detail {

/// Fits P of multi-degree <= n to 2g-1 in the least-squares sense on the
/// uniform grid; on that grid the normal equations diagonalize, so the
/// solution is the truncated Fourier expansion
///   r_0 = 2 g^(0) - 1,  r_a = 4 Re g^(a),  rt_a = 4 Im g^(a)  (a != 0).
inline TrigPoly fit_indicator_polynomial(const FourierTable& table, const MultiIndex& n) {
    TrigPoly p{IndexBox{n}};
    IndexBox box{n};
    box.for_each([&](const MultiIndex& a) {
        std::vector<int> sa(a.begin(), a.end());
        Complex ghat = table.at(sa);
        if (abs_total(a) == 0) {
            p.r(a) = 2.0 * ghat.real() - 1.0;
        } else {
            p.r(a) = 4.0 * ghat.real();
            p.rt(a) = 4.0 * ghat.imag();
        }
    });
    return p;
}

/// Sup of |R - f| over the distinguished boundary of the polydisk of radius
/// k_radius, with two refinement levels (d <= 2; coarse scan otherwise).
inline double sup_distance_on_compact(
    const std::function<Complex(const std::vector<Complex>&)>& a,
    const std::function<Complex(const std::vector<Complex>&)>& b,
    int dim, double k_radius, int grid) {
    auto value = [&](const std::vector<double>& theta) {
        std::vector<Complex> z(theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j)
            z[j] = std::polar(k_radius, theta[j]);
        return std::abs(a(z) - b(z));
    };
    if (dim == 1) {
        double best = 0.0, bestth = 0.0;
        for (int i = 0; i < grid; ++i) {
            double th = 2.0 * kPi * i / grid;
            double v = value({th});
            if (v > best) { best = v; bestth = th; }
        }
        double h = 2.0 * kPi / grid;
        const int sub = 64;
        for (int level = 0; level < 2; ++level) {
            double lo = bestth - h;
            for (int i = 0; i <= 2 * sub; ++i) {
                double th = lo + h * i / sub;
                double v = value({th});
                if (v > best) { best = v; bestth = th; }
            }
            h = 2.0 * h / sub;
        }
        return best;
    }
    if (dim == 2) {
        return grid_max_2d(
            [&](double t1, double t2) { return value({t1, t2}); },
            0.0, 2.0 * kPi, 0.0, 2.0 * kPi, grid);
    }
    // coarse odometer scan for higher dimensions
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    std::vector<double> theta(static_cast<std::size_t>(dim));
    double best = 0.0;
    const int g = std::max(8, grid / 8);
    for (;;) {
        for (int j = 0; j < dim; ++j)
            theta[static_cast<std::size_t>(j)] = 2.0 * kPi * idx[static_cast<std::size_t>(j)] / g;
        best = std::max(best, value(theta));
        int j = dim - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == g) {
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return best;
}

/// |sum_beta r_beta Re D(beta) + rt_beta Im D(beta)| over the nonnegative
/// box, D = g^ - h^.
inline double fourier_moment_gap(const TrigPoly& p, const FourierTable& g,
                                 const FourierTable& h) {
    double acc = 0.0;
    std::size_t idx = 0;
    p.box.for_each([&](const MultiIndex& a) {
        std::vector<int> sa(a.begin(), a.end());
        Complex diff = g.at(sa) - h.at(sa);
        acc += p.cos_coeff[idx] * diff.real() + p.sin_coeff[idx] * diff.imag();
        ++idx;
    });
    return std::abs(acc);
}

}  // namespace detail

/// Multi-degree of the Cayley inner function phi = (p + z^m p*)/(p - z^m p*).
inline MultiIndex cayley_multidegree(const CayleyInner& phi) {
    CPoly shift = CPoly::monomial(phi.f.dim(), phi.f.m, Complex{1.0, 0.0});
    MultiIndex dn = (phi.f.p + shift * phi.f.pstar).multi_degree();
    MultiIndex dd = (phi.f.p - shift * phi.f.pstar).multi_degree();
    for (std::size_t j = 0; j < dn.size(); ++j) dn[j] = std::max(dn[j], dd[j]);
    return dn;
}

/// Runs the sweep: fit P from the phase of R, push it through every chart,
/// predict kappa from the admissible indices, then drive Herglotz mixtures
/// f_t = (1-t) R + t G toward R and record all distances. Fitted constants
/// make both candidate inequalities tight envelopes over the sweep; the
/// headline form is additionally anchored at the largest delta and its
/// empirically valid range is reported.
inline SweepResult superres_sweep(const CayleyInner& R,
                                  std::vector<double> t_schedule,
                                  double k_radius, int n_grid,
                                  std::optional<CayleyInner> target = std::nullopt,
                                  std::uint64_t seed = 0, int threads = 1) {
    if (k_radius <= 0.0 || k_radius >= 1.0)
        throw std::invalid_argument("superres_sweep: compact radius must lie in (0,1)");
    if (t_schedule.empty())
        throw std::invalid_argument("superres_sweep: empty schedule");
    for (double t : t_schedule)
        if (t <= 0.0 || t > 1.0)
            throw std::invalid_argument("superres_sweep: mixture parameters must lie in (0,1]");
    (void)seed;

    const int d = R.dim();
    const MultiIndex n = cayley_multidegree(R);
    HerglotzSource src_R = source_from_cayley(R);
    HerglotzSource src_G = target ? source_from_cayley(*target)
                                  : source_constant(d, Complex{1.0, 0.0});

    SweepResult out{std::vector<SweepRow>{}, SweepSummary{}, TrigPoly{IndexBox{n}}, 0.0, 0.0, {}};

    // Phase and Fourier data of the source.
    PhaseGrid grid_R = phase_function(src_R, n_grid, default_radius_schedule(), threads);
    FourierTable ghat = fourier_coeffs(grid_R, n);
    out.P = detail::fit_indicator_polynomial(ghat, n);
    {
        double acc = 0.0;
        std::vector<double> theta;
        std::vector<Complex> xi(static_cast<std::size_t>(d));
        for (std::size_t idx = 0; idx < grid_R.samples.size(); ++idx) {
            detail::grid_angles(idx, d, n_grid, theta);
            for (std::size_t j = 0; j < xi.size(); ++j) xi[j] = std::polar(1.0, theta[j]);
            double r = out.P.eval(xi) - (2.0 * grid_R.samples[idx] - 1.0);
            acc += r * r;
        }
        out.fit_residual_rms = std::sqrt(acc / static_cast<double>(grid_R.samples.size()));
        out.indicator_misfit = indicator_fit(grid_R, out.P);
    }

    // Chart pushforwards and the predicted exponent.
    const int abs_n = abs_total(n);
    bool all_admissible = true;
    double kappa = std::numeric_limits<double>::infinity();
    for (unsigned chart = 0; chart < (1u << d); ++chart) {
        PushforwardPoly pf = pushforward_Q(out.P, chart, abs_n);
        ChartReport rep;
        rep.chart = chart;
        rep.q_total_degree = pf.Q.total_degree();
        auto adm = try_admissible_index(pf);
        if (adm) {
            rep.admissible = true;
            rep.m = adm->m;
            rep.q_m = adm->q_m;
            kappa = std::min(kappa, 1.0 / (abs_total(adm->m) + 1.0));
        } else {
            all_admissible = false;
        }
        out.charts.push_back(rep);
    }
    if (all_admissible) out.summary.kappa_pred = kappa;

    // Taylor side.
    PowerSeries taylor_R = taylor_section(R, n);
    PowerSeries taylor_G = target ? taylor_section(*target, n)
                                  : truncate(CPoly::constant(d, Complex{1.0, 0.0}), IndexBox{n});

    // Rows, largest mixture first so deltas ascend after the final sort.
    std::sort(t_schedule.begin(), t_schedule.end());
    for (double t : t_schedule) {
        SweepRow row;
        row.t = t;
        try {
            PowerSeries taylor_f = taylor_R * (1.0 - t) + taylor_G * t;
            row.delta = taylor_l2(taylor_R - taylor_f);
            HerglotzSource src_f = source_mixture(src_R, src_G, t);
            row.sup_dist = detail::sup_distance_on_compact(src_R.eval, src_f.eval, d,
                                                           k_radius, d == 1 ? 1024 : 256);
            PhaseGrid grid_f = phase_function(src_f, n_grid, default_radius_schedule(), threads);
            row.phase_l1 = phase_l1_distance(grid_R, grid_f);
            FourierTable hhat = fourier_coeffs(grid_f, n);
            row.fourier_gap = detail::fourier_moment_gap(out.P, ghat, hhat);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        out.rows.push_back(row);
    }
    std::sort(out.rows.begin(), out.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.delta < b.delta; });

    // Fits over the clean rows.
    std::vector<double> deltas, sups;
    for (const auto& row : out.rows)
        if (row.ok && row.delta > 0.0 && row.sup_dist > 0.0) {
            deltas.push_back(row.delta);
            sups.push_back(row.sup_dist);
        }
    if (deltas.size() >= 2) {
        std::vector<double> lx(deltas.size()), ly(deltas.size());
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            lx[i] = std::log(deltas[i]);
            ly[i] = std::log(sups[i]);
        }
        out.summary.slope_fit = ls_slope(lx, ly);
    }

    if (!deltas.empty() && std::isfinite(out.summary.kappa_pred)) {
        const double inv_kappa = 1.0 / out.summary.kappa_pred;
        // Least squares on (delta, delta^{1/kappa}), clipped nonnegative,
        // then scaled into a valid envelope.
        double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            double x1 = deltas[i], x2 = std::pow(deltas[i], inv_kappa);
            s11 += x1 * x1; s12 += x1 * x2; s22 += x2 * x2;
            b1 += x1 * sups[i]; b2 += x2 * sups[i];
        }
        double det = s11 * s22 - s12 * s12;
        double A = 0.0, B = 0.0;
        if (std::abs(det) > 1e-30) {
            A = (b1 * s22 - b2 * s12) / det;
            B = (s11 * b2 - s12 * b1) / det;
        }
        A = std::max(A, 0.0);
        B = std::max(B, 0.0);
        if (A == 0.0 && B == 0.0) {
            for (std::size_t i = 0; i < deltas.size(); ++i)
                A = std::max(A, sups[i] / deltas[i]);
        }
        double scale = 0.0;
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            double denom = A * deltas[i] + B * std::pow(deltas[i], inv_kappa);
            if (denom > 0.0) scale = std::max(scale, sups[i] / denom);
        }
        if (scale > 0.0) { A *= scale; B *= scale; }
        out.summary.A_fit = A;
        out.summary.B_fit = B;

        // Headline form sup^kappa <= C delta: envelope constant plus the
        // validity range of the constant anchored at the largest delta.
        double C = 0.0;
        for (std::size_t i = 0; i < deltas.size(); ++i)
            C = std::max(C, std::pow(sups[i], out.summary.kappa_pred) / deltas[i]);
        out.summary.C_fit = C;
        double c_anchor =
            std::pow(sups.back(), out.summary.kappa_pred) / deltas.back();
        double rho = 0.0;
        for (std::size_t i = deltas.size(); i-- > 0;) {
            bool ok_below = true;
            for (std::size_t j = 0; j <= i; ++j)
                if (std::pow(sups[j], out.summary.kappa_pred) > c_anchor * deltas[j] * (1.0 + 1e-12))
                    ok_below = false;
            if (ok_below) { rho = deltas[i]; break; }
        }
        out.summary.rho_empirical = rho;
        out.summary.headline_uniform = rho >= deltas.back();

        for (auto& row : out.rows) {
            if (!row.ok || row.delta <= 0.0) continue;
            double env_b = A * row.delta + B * std::pow(row.delta, inv_kappa);
            row.bound_b_ratio = env_b > 0.0 ? row.sup_dist / env_b : 0.0;
            row.bound_a_ratio = C > 0.0
                ? std::pow(row.sup_dist, out.summary.kappa_pred) / (C * row.delta)
                : 0.0;
        }
        out.summary.bound_b_uniform = true;
        for (const auto& row : out.rows)
            if (row.ok && row.bound_b_ratio > 1.0 + 1e-9)
                out.summary.bound_b_uniform = false;
    }
    return out;
}

}  // namespace hnlab

#endif  // HNLAB_SEMIALG_HPP
