#include "scn/load_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace scn {
namespace {

// Poisson pmf values 0..K with tail mass below tail_tol. Means beyond ~600
// would underflow the leading term; the densities used here sit far below.
std::vector<double> poisson_pmf(double nu, double tail_tol) {
    if (!(nu >= 0.0)) throw std::invalid_argument("poisson_pmf: negative mean");
    if (nu > 600.0) throw std::invalid_argument("poisson_pmf: mean too large for direct series");
    std::vector<double> p;
    double term = std::exp(-nu);
    double cum = term;
    p.push_back(term);
    for (long k = 1; cum < 1.0 - tail_tol && k < 100000; ++k) {
        term *= nu / static_cast<double>(k);
        cum += term;
        p.push_back(term);
    }
    return p;
}

// E[1 / (K + c + 1)] for K Poisson with the given pmf table.
double inv_shifted_mean(const std::vector<double>& pmf, std::size_t c) {
    double g = 0.0;
    for (std::size_t a = 0; a < pmf.size(); ++a) g += pmf[a] / static_cast<double>(a + c + 1);
    return g;
}

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double m, double fm,
             double b, double fb, double whole, double tol, int depth) {
    if (depth > 40) throw std::runtime_error("adaptive quadrature did not converge");
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
}

// Adaptive Simpson with a depth cap; tol is absolute on the result scale.
double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    return adapt(f, a, fa, m, fm, b, fb, simpson(a, fa, fm, b, fb), tol, 0);
}

} // namespace

void MomentSpec::validate() const {
    if (!(nu_u >= 0.0) || !std::isfinite(nu_u))
        throw std::invalid_argument("MomentSpec: nu_u must be non-negative");
    if (!(nu_c >= 0.0) || !std::isfinite(nu_c))
        throw std::invalid_argument("MomentSpec: nu_c must be non-negative");
    if (!(r_th > 0.0) || !std::isfinite(r_th))
        throw std::invalid_argument("MomentSpec: r_th must be positive");
    if (!(series_tail_tol > 0.0 && series_tail_tol < 1.0))
        throw std::invalid_argument("MomentSpec: series_tail_tol must lie in (0, 1)");
    if (!(quad_tol > 0.0 && quad_tol < 1.0))
        throw std::invalid_argument("MomentSpec: quad_tol must lie in (0, 1)");
    if (e2_samples <= 0) throw std::invalid_argument("MomentSpec: e2_samples must be positive");
}

LoadSnapshot compute_loads(const Deployment& dep, const std::vector<bool>& awake) {
    if (awake.size() != dep.sbs.size())
        throw std::invalid_argument("compute_loads: awake mask size mismatch");
    LoadSnapshot snap;
    snap.load.assign(dep.sbs.size(), 0.0);
    snap.factor.assign(dep.ue.size(), 0.0);
    const double r2 = dep.r_th * dep.r_th;
    std::vector<std::size_t> serving;
    for (std::size_t j = 0; j < dep.ue.size(); ++j) {
        serving.clear();
        for (std::size_t i = 0; i < dep.sbs.size(); ++i)
            if (awake[i] && dist2(dep.ue[j], dep.sbs[i]) <= r2) serving.push_back(i);
        if (serving.empty()) continue;
        const double w = 1.0 / static_cast<double>(serving.size());
        snap.factor[j] = w;
        for (std::size_t i : serving) snap.load[i] += w;
    }
    return snap;
}

double first_moment(const MomentSpec& spec) {
    spec.validate();
    const std::vector<double> pmf = poisson_pmf(spec.nu_c, spec.series_tail_tol);
    const double inner = inv_shifted_mean(pmf, 0);
    // Radial integral of f_r(r) = 2r/r_th^2 against the (distance-free) inner
    // expectation; kept as a quadrature to mirror the moment's integral form.
    const auto f = [&](double r) { return 2.0 * r / (spec.r_th * spec.r_th) * inner; };
    return spec.nu_u * integrate(f, 0.0, spec.r_th, spec.quad_tol * std::max(inner, 1e-12));
}

double pair_kernel(const MomentSpec& spec, double r1, double r2, double phi) {
    const TwoUeAreas a = two_ue_areas(r1, r2, phi, spec.r_th);
    // Awake SBSs seen by both UEs live in the full UE-UE lens, inside and
    // outside the serving disk; the rest of each UE disk is private.
    const double rho = spec.rho_c();
    const double nu_com = rho * (a.a_t + a.a_ec);
    const double nu1 = rho * (a.a_o1 - a.a_t + a.a_e1);
    const double nu2 = rho * (a.a_o2 - a.a_t + a.a_e2);
    const std::vector<double> pc = poisson_pmf(nu_com, spec.series_tail_tol);
    const std::vector<double> p1 = poisson_pmf(nu1, spec.series_tail_tol);
    const std::vector<double> p2 = poisson_pmf(nu2, spec.series_tail_tol);
    double total = 0.0;
    for (std::size_t c = 0; c < pc.size(); ++c)
        total += pc[c] * inv_shifted_mean(p1, c) * inv_shifted_mean(p2, c);
    return total;
}

McEstimate second_moment(const MomentSpec& spec, std::uint64_t seed) {
    spec.validate();

    // Diagonal term E1 = nu_u E[1/(K+1)^2], written as the same radial
    // integral as the first moment.
    const std::vector<double> pmf = poisson_pmf(spec.nu_c, spec.series_tail_tol);
    double inner = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        const double d = static_cast<double>(k + 1);
        inner += pmf[k] / (d * d);
    }
    const auto f = [&](double r) { return 2.0 * r / (spec.r_th * spec.r_th) * inner; };
    const double e1 = spec.nu_u * integrate(f, 0.0, spec.r_th, spec.quad_tol * std::max(inner, 1e-12));

    // Pair term E2: Monte Carlo over (r1, r2, phi).
    RandomStream rng(seed);
    double mean = 0.0;
    double m2acc = 0.0;
    for (long i = 0; i < spec.e2_samples; ++i) {
        const double r1 = spec.r_th * std::sqrt(rng.uniform01());
        const double r2 = spec.r_th * std::sqrt(rng.uniform01());
        const double phi = kPi * rng.uniform01();
        const double v = pair_kernel(spec, r1, r2, phi);
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2acc += delta * (v - mean);
    }
    const double n = static_cast<double>(spec.e2_samples);
    const double var = spec.e2_samples > 1 ? m2acc / (n - 1.0) : 0.0;
    McEstimate out;
    out.value = e1 + spec.nu_u * spec.nu_u * mean;
    out.se = spec.nu_u * spec.nu_u * std::sqrt(var / n);
    return out;
}

GammaMixtureFit fit_from_moments(double m1, double m2, double nu_u) {
    if (!(nu_u >= 0.0)) throw std::invalid_argument("fit_from_moments: nu_u must be non-negative");
    const double p0 = std::exp(-nu_u);
    if (!(p0 < 1.0)) throw std::invalid_argument("fit_from_moments: nu_u must be positive");
    const double m1c = m1 / (1.0 - p0);
    const double m2c = m2 / (1.0 - p0);
    if (!(m1c > 0.0))
        throw std::invalid_argument("fit_from_moments: conditional mean must be positive");
    const double var = m2c - m1c * m1c;
    if (!(var > 0.0))
        throw std::invalid_argument("fit_from_moments: conditional variance must be positive");
    GammaMixtureFit fit;
    fit.beta = m1c / var;
    fit.alpha = fit.beta * m1c;
    fit.p0 = p0;
    return fit;
}

GammaMixtureFit fit_empirical(const std::vector<double>& samples, double nu_u,
                              FitDiagnostics* diag) {
    FitDiagnostics d;
    d.n = samples.size();
    for (double x : samples) {
        if (x < 0.0 || !std::isfinite(x))
            throw std::invalid_argument("fit_empirical: samples must be finite and non-negative");
        if (x > 0.0) ++d.n_positive;
        d.m1 += x;
        d.m2 += x * x;
    }
    if (!samples.empty()) {
        d.m1 /= static_cast<double>(samples.size());
        d.m2 /= static_cast<double>(samples.size());
        d.zero_fraction =
            static_cast<double>(samples.size() - d.n_positive) / static_cast<double>(samples.size());
    }
    d.small_sample = d.n_positive < 30;
    if (diag) *diag = d;
    if (d.n_positive < 2)
        throw std::invalid_argument("fit_empirical: need at least two positive samples");
    return fit_from_moments(d.m1, d.m2, nu_u);
}

double load_cdf(double x, const GammaMixtureFit& fit) {
    if (x < 0.0) return 0.0;
    if (x == 0.0 || fit.p0 >= 1.0) return fit.p0;
    if (std::isinf(x)) return 1.0;
    return fit.p0 + (1.0 - fit.p0) * boost::math::gamma_p(fit.alpha, fit.beta * x);
}

double load_pdf(double x, const GammaMixtureFit& fit) {
    if (x <= 0.0 || fit.p0 >= 1.0) return 0.0;
    const double logp = fit.alpha * std::log(fit.beta) + (fit.alpha - 1.0) * std::log(x) -
                        fit.beta * x - std::lgamma(fit.alpha);
    return (1.0 - fit.p0) * std::exp(logp);
}

bool dlb_should_stop(double l_min, std::size_t n_next_hop_idle, double kappa,
                     const GammaMixtureFit& fit) {
    const double tail = 1.0 - load_cdf(l_min, fit);
    const double p_better = 1.0 - std::pow(tail, static_cast<double>(n_next_hop_idle));
    return p_better < kappa;
}

std::vector<double> sample_origin_loads(const MomentSpec& spec, long n_samples,
                                        RandomStream& rng) {
    spec.validate();
    if (n_samples < 0) throw std::invalid_argument("sample_origin_loads: negative sample count");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    const double r2 = spec.r_th * spec.r_th;
    for (long s = 0; s < n_samples; ++s) {
        // SBSs beyond 2 r_th cannot share a UE with the origin SBS.
        const std::vector<Point> others = sample_hppp(spec.rho_c(), 2.0 * spec.r_th, rng);
        const long m = rng.poisson(spec.nu_u);
        double load = 0.0;
        for (long j = 0; j < m; ++j) {
            const double r = spec.r_th * std::sqrt(rng.uniform01());
            const double th = 2.0 * kPi * rng.uniform01();
            const Point u{r * std::cos(th), r * std::sin(th)};
            long nserv = 1;
            for (const Point& o : others)
                if (dist2(u, o) <= r2) ++nserv;
            load += 1.0 / static_cast<double>(nserv);
        }
        out.push_back(load);
    }
    return out;
}

double ks_statistic(std::vector<double> samples, const GammaMixtureFit& fit) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    // Tied values are one ECDF jump; the left-limit comparison must use
    // F(x-), which differs from F(x) at the atom at zero.
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        const double f = load_cdf(samples[i], fit);
        const double f_left = samples[i] == 0.0 ? 0.0 : f;
        d = std::max(d, std::abs(f - static_cast<double>(j) / n));
        d = std::max(d, std::abs(f_left - static_cast<double>(i) / n));
        i = j;
    }
    return d;
}

} // namespace scn
