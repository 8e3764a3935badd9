#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rtmhd/mode.hpp"

namespace rtmhd {

/// Linearized state at one horizontal frequency in the phase-normalized real form:
/// u = (-i phi, -i theta, psi), q = pi, density perturbation r.
/// Horizontal field: N = (a1, a2, i a3) with a1, a2 on midpoints and a3 on nodes.
/// Vertical field:   N = (-i a1, -i a2, a3) with a1, a2 on extended nodes and a3 on midpoints.
struct LinearState {
    double t = 0.0;
    Vec phi, theta, psi, pi, r;
    Vec a1, a2, a3;
};

LinearState zero_state(const Grid1D& grid, Orientation orientation);

struct LinearProblem {
    std::shared_ptr<const DensityProfile> profile;
    Grid1D grid;
    Frequency xi;
    MagneticConfig mag;
    PhysicalParams params;
};

/// Crank-Nicolson stepper; the velocity-pressure system is assembled and factorized once.
class Evolver {
public:
    Evolver(LinearProblem problem, double dt);
    ~Evolver();
    Evolver(Evolver&&) noexcept;
    Evolver& operator=(Evolver&&) noexcept;

    void step(LinearState& state) const;
    double dt() const { return dt_; }
    const LinearProblem& problem() const { return problem_; }

    double norm_u(const LinearState& s) const;
    double norm_rho(const LinearState& s) const;
    double norm_N(const LinearState& s) const;
    /// Max-norm of the discrete divergence of u relative to the max-norm of its summands.
    double div_u(const LinearState& s) const;
    double div_N(const LinearState& s) const;

private:
    struct Impl;
    LinearProblem problem_;
    double dt_;
    std::unique_ptr<Impl> impl_;
};

struct Sample {
    double t = 0.0;
    double norm_rho = 0.0;
    double norm_u = 0.0;
    double norm_N = 0.0;
    double div_u = 0.0;
};

struct Evolution {
    std::vector<Sample> series;
    LinearState final_state;
    double max_div_u = 0.0;
};

Evolution evolve(const LinearState& init, const LinearProblem& problem, double dt, double T,
                 int record_every = 1);

struct RateEstimate {
    double rate = 0.0;
    double residual = 0.0;  // RMS of log-norm about the fitted line
    int samples = 0;
};

/// Least-squares slope of log(norm) over the last half of (t, norm).
RateEstimate measured_rate(const std::vector<double>& t, const std::vector<double>& norm);
RateEstimate measured_rate(const std::vector<Sample>& series);

/// Eigenmode initial data: u = lambda v, r = -rho' psi, N = M-bar . grad v.
LinearState eigenmode_state(const NormalMode& mode, const DensityProfile& profile);

/// Smooth random divergence-free data (u and N) with random density perturbation.
LinearState random_state(const Grid1D& grid, Frequency xi, Orientation orientation,
                         const DensityProfile& profile, std::uint64_t seed);

struct VerifyOptions {
    double dt_factor = 0.01;  // dt = dt_factor / lambda
    double T_factor = 3.0;    // T = T_factor / lambda
    int record_every = 1;
    double rate_tol = 0.02;
};

struct SharpnessRun {
    std::uint64_t seed = 0;
    Frequency xi;
    double lambda = 0.0;
    double measured = 0.0;
};

struct SharpnessReport {
    std::vector<SharpnessRun> runs;
    double max_rate = 0.0;
};

/// Evolves random data at each frequency and checks measured <= lambda (1 + rate_tol)
/// per frequency and max <= Lambda (1 + rate_tol); throws SharpnessViolation otherwise.
/// lambdas[i] is the growth rate at xi_set[i].
SharpnessReport sharpness_test(const DensityProfile& profile, const Grid1D& grid,
                               const MagneticConfig& mag, const PhysicalParams& params,
                               double Lambda, const std::vector<Frequency>& xi_set,
                               const std::vector<double>& lambdas,
                               const std::vector<std::uint64_t>& seeds,
                               const VerifyOptions& opts = {});

void write_series_csv(const std::vector<Sample>& series, const std::string& path);

}  // namespace rtmhd
