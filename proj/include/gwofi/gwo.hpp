#ifndef GWOFI_GWO_HPP
#define GWOFI_GWO_HPP

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace gwofi {

/// Mixed binary/continuous search space. The first `n_bits` dimensions are
/// mask bits kept in [0,1] and thresholded through a sigmoid transfer; the
/// remaining dimensions are boxed reals. A log10 dimension is searched as
/// its exponent and decoded back with pow(10, v).
struct SearchSpace {
    struct ContinuousDim {
        std::string name;
        double lo = 0.0;
        double hi = 1.0;
        bool log10 = false;
    };

    int n_bits = 0;
    std::vector<ContinuousDim> dims;

    int size() const { return n_bits + static_cast<int>(dims.size()); }
    double dim_lo(int d) const;
    double dim_hi(int d) const;
};

void validate(const SearchSpace& space);

/// Decoded continuous block, aligned with `dims`.
std::vector<double> decode_params(const SearchSpace& space, const std::vector<double>& pos);

struct Wolf {
    std::vector<double> pos;
    std::vector<std::uint8_t> mask;  // bits the last evaluation used
    double fitness = 0.0;
};

struct Leaders {
    Wolf alpha, beta, delta;
};

struct GwoConfig {
    int wolves = 20;
    int iters = 100;
    double steepness = 10.0;  // sigmoid transfer slope
    std::uint64_t seed = 0;
    bool parallel = true;
};

/// Exploration coefficient, linear from 2 toward 0: 2 * (1 - t / T).
double coefficient_a(int t, int iters);

/// One-dimension move toward a leader: L - A * |C * L - x| with
/// A = 2 a r1 - a and C = 2 r2.
double leader_guided_dim(double x, double leader, double a, double r1, double r2);

/// Sigmoid transfer at 0.5: the bit is set when draw < s(v).
bool binarize_dim(double v, double draw, double steepness);

/// Fitness of one mask + decoded hyperparameter block; smaller is better.
using FitnessFn =
    std::function<double(const std::vector<std::uint8_t>& mask, const std::vector<double>& params)>;

/// Called once per iteration after the leader update, for tests and tracing.
using Observer = std::function<void(int iter, const Leaders& leaders, const std::vector<Wolf>& pack)>;

struct GwoResult {
    Leaders leaders;
    std::vector<double> alpha_history;  // best-so-far after each iteration, never increasing
};

/// Pack search with best-so-far alpha/beta/delta archives. Every random draw
/// is a pure function of (seed, iteration, wolf, dimension, channel), so the
/// result does not depend on evaluation order and parallel fitness is safe.
/// `trace` (optional) receives one "iter<TAB>alpha<TAB>selected" line per
/// iteration.
GwoResult optimize(const SearchSpace& space, const FitnessFn& fitness, const GwoConfig& cfg,
                   std::ostream* trace = nullptr, const Observer& observer = {});

} // namespace gwofi

#endif
