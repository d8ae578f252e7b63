#pragma once

#include "qgol/engine.hpp"
#include "qgol/lattice.hpp"
#include "qgol/parallel.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace qgol {

/// Generation (0-based) at which quantum and classical runs are compared:
/// two rule applications after the initial state.
inline constexpr std::size_t kDeltaGeneration = 2;

/// Mean l1 distance between two states: (1/L^2) sum |n_a - m_a|.
double delta_metric(const BinaryState& a, const BinaryState& b);

/// delta_metric of the states at generation kDeltaGeneration.
double delta_metric(const GenerationTrace& quantum, const GenerationTrace& classical);

struct DeltaSurface {
    std::vector<double> tau_grid;
    std::vector<double> sigma_grid;
    std::vector<double> values;  // row-major, tau index first
    std::size_t ensemble_size = 0;

    double at(std::size_t tau_index, std::size_t sigma_index) const
    {
        return values[tau_index * sigma_grid.size() + sigma_index];
    }
};

/// Ensemble-mean delta_metric on a (tau, sigma) grid, one random initial state
/// per seed. One transfer matrix per tau. The ensemble mean is summed in seed
/// order regardless of `exec`.
DeltaSurface delta_surface(const LatticeSpec& spec, std::span<const double> tau_grid,
                           std::span<const double> sigma_grid, std::span<const std::uint64_t> seeds,
                           RuleReading reading = RuleReading::evolved, Exec exec = Exec::parallel);

/// Per tau row, the smallest sigma attaining the row minimum.
std::vector<std::pair<double, double>> sigma_min_curve(const DeltaSurface& surface);

/// Quadratic approximation C(sigma) = -0.337 sigma^2 + 0.384 sigma of the
/// Delta = 0.02 contour.
constexpr double contour_curve(double sigma) noexcept { return -0.337 * sigma * sigma + 0.384 * sigma; }

/// Piecewise-linear least-squares fit with fixed interior breakpoints,
/// continuous at the breakpoints. Returns the slope of each segment.
std::vector<double> piecewise_linear_slopes(std::span<const std::pair<double, double>> points,
                                            std::span<const double> breakpoints);

/// D^k = (1/L^2) sum_a n_{a,k}, one value per generation.
std::vector<double> density_series(const GenerationTrace& trace);

/// S(f) for f = 0 .. T-1.
struct Spectrum {
    std::size_t generations = 0;
    std::vector<double> power;
};

/// n~_a(f) = (1/T) sum_t s_a(t) exp(-2 pi i t f / T), S(f) = sum_a |n~_a(f)|^2,
/// over the binary cell histories of the trace.
Spectrum power_spectrum(const GenerationTrace& trace, Exec exec = Exec::parallel);

/// Cell histories as a T x cells row-major 0/1 matrix; the input of power_spectrum.
Spectrum power_spectrum(std::span<const std::uint8_t> histories, std::size_t generations, std::size_t cells,
                        Exec exec = Exec::parallel);

struct PowerLawFit {
    double c = 0.0;
    double alpha = 0.0;
    std::size_t f_lo = 0;
    std::size_t f_hi = 0;
    std::size_t points = 0;
    std::size_t skipped_zero_bins = 0;
    double residual = 0.0;  // rms of log S - (log C + alpha log f)
};

/// Least squares of log S against log f over f_lo..f_hi (inclusive). Zero
/// bins are skipped and counted. Throws FitError with fewer than two usable
/// bins and ConfigError for an invalid range.
PowerLawFit fit_power_law(const Spectrum& spectrum, std::size_t f_lo, std::size_t f_hi);

/// Index of the largest S(f) over f >= 1 (first one on ties).
std::size_t dominant_frequency(const Spectrum& spectrum);

void write_surface_csv(std::ostream& os, const DeltaSurface& surface);
void write_spectrum_csv(std::ostream& os, const Spectrum& spectrum);

} // namespace qgol
