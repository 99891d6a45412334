#pragma once

#include <cstdint>
#include <vector>

#include "scn/geometry.hpp"
#include "scn/rng.hpp"

namespace scn {

// Instantaneous load of a deployment under an awake mask: factor[j] is UE j's
// share 1/n(j) (0 when nothing serves it), load[i] the sum of shares of the
// UEs that SBS i serves. Sleeping SBSs carry zero load.
struct LoadSnapshot {
    std::vector<double> load;
    std::vector<double> factor;
};

LoadSnapshot compute_loads(const Deployment& dep, const std::vector<bool>& awake);

// Densities and numerical knobs for the analytic load moments. nu_u and nu_c
// are the mean UE / awake-SBS counts in an r_th-disk.
struct MomentSpec {
    double nu_u = 0.0;
    double nu_c = 0.0;
    double r_th = 50.0;
    double series_tail_tol = 1e-9;
    double quad_tol = 1e-6;
    long e2_samples = 200000;

    double rho_u() const { return nu_u / (kPi * r_th * r_th); }
    double rho_c() const { return nu_c / (kPi * r_th * r_th); }
    void validate() const;
};

struct McEstimate {
    double value = 0.0;
    double se = 0.0;
};

// E[L] at the typical SBS.
double first_moment(const MomentSpec& spec);

// E[L^2] = E1 + E2. The pair term E2 integrates pair_kernel over the two UE
// positions by Monte Carlo with spec.e2_samples points; se covers that
// integration only.
McEstimate second_moment(const MomentSpec& spec, std::uint64_t seed);

// E[w1 w2] for two UEs of the typical SBS at radii r1, r2 and angular
// separation phi; w is the reciprocal of a UE's serving count.
double pair_kernel(const MomentSpec& spec, double r1, double r2, double phi);

// Zero-inflated Gamma load model: P(L = 0) = p0 and L | L > 0 is Gamma with
// shape alpha and rate beta.
struct GammaMixtureFit {
    double alpha = 0.0;
    double beta = 0.0;
    double p0 = 0.0;
};

// Moment-matches the conditional Gamma from the unconditional moments, with
// the void mass fixed analytically to exp(-nu_u). Throws std::invalid_argument
// when the implied conditional variance or mean is non-positive.
GammaMixtureFit fit_from_moments(double m1, double m2, double nu_u);

struct FitDiagnostics {
    std::size_t n = 0;
    std::size_t n_positive = 0;
    double zero_fraction = 0.0; // empirical count; the fit itself uses exp(-nu_u)
    double m1 = 0.0;
    double m2 = 0.0;
    bool small_sample = false; // fewer than 30 positive samples
};

// Sample-moment fit. Throws std::invalid_argument with fewer than two
// positive samples or zero sample variance.
GammaMixtureFit fit_empirical(const std::vector<double>& samples, double nu_u,
                              FitDiagnostics* diag = nullptr);

double load_cdf(double x, const GammaMixtureFit& fit);

// Density of the continuous part; the atom at zero is not included.
double load_pdf(double x, const GammaMixtureFit& fit);

// Hop-expansion stop rule: stop when the chance that at least one of the
// n_next_hop_idle candidates beats the current best load l_min drops below
// kappa.
bool dlb_should_stop(double l_min, std::size_t n_next_hop_idle, double kappa,
                     const GammaMixtureFit& fit);

// Monte Carlo draws of the typical SBS load: origin SBS plus Poisson fields
// of awake SBSs and UEs at the given densities.
std::vector<double> sample_origin_loads(const MomentSpec& spec, long n_samples,
                                        RandomStream& rng);

// Kolmogorov-Smirnov distance between the sample's empirical CDF and the
// fitted mixture.
double ks_statistic(std::vector<double> samples, const GammaMixtureFit& fit);

} // namespace scn
