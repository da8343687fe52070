#include "gwofi/gwo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "gwofi/dataset.hpp"
#include "gwofi/errors.hpp"
#include "gwofi/rng.hpp"

namespace gwofi {

double SearchSpace::dim_lo(int d) const {
    if (d < n_bits) return 0.0;
    const auto& c = dims[static_cast<size_t>(d - n_bits)];
    return c.log10 ? std::log10(c.lo) : c.lo;
}

double SearchSpace::dim_hi(int d) const {
    if (d < n_bits) return 1.0;
    const auto& c = dims[static_cast<size_t>(d - n_bits)];
    return c.log10 ? std::log10(c.hi) : c.hi;
}

void validate(const SearchSpace& space) {
    if (space.n_bits < 0) throw ConfigError("search space cannot have negative mask bits");
    if (space.size() < 1) throw ConfigError("search space is empty");
    for (const auto& c : space.dims) {
        if (!(c.lo <= c.hi))
            throw ConfigError("dimension '" + c.name + "' has lo > hi");
        if (c.log10 && !(c.lo > 0.0))
            throw ConfigError("log dimension '" + c.name + "' needs positive bounds");
        if (!std::isfinite(c.lo) || !std::isfinite(c.hi))
            throw ConfigError("dimension '" + c.name + "' has non-finite bounds");
    }
}

std::vector<double> decode_params(const SearchSpace& space, const std::vector<double>& pos) {
    if (pos.size() != static_cast<size_t>(space.size()))
        throw ConfigError("position length does not match the search space");
    std::vector<double> out;
    out.reserve(space.dims.size());
    for (size_t i = 0; i < space.dims.size(); ++i) {
        double v = pos[static_cast<size_t>(space.n_bits) + i];
        out.push_back(space.dims[i].log10 ? std::pow(10.0, v) : v);
    }
    return out;
}

double coefficient_a(int t, int iters) {
    if (iters < 1) throw ConfigError("iteration count must be >= 1");
    return 2.0 * (1.0 - static_cast<double>(t) / static_cast<double>(iters));
}

double leader_guided_dim(double x, double leader, double a, double r1, double r2) {
    double A = 2.0 * a * r1 - a;
    double C = 2.0 * r2;
    return leader - A * std::abs(C * leader - x);
}

bool binarize_dim(double v, double draw, double steepness) {
    double s = 1.0 / (1.0 + std::exp(-steepness * (v - 0.5)));
    return draw < s;
}

namespace {

// rng channels, all keyed by (seed, iter, wolf, dim, channel): 2L and 2L+1
// are r1/r2 for leader L in {alpha, beta, delta}
constexpr std::uint64_t kChanBinarize = 6;
constexpr std::uint64_t kChanInit = 7;

struct Evaluator {
    const SearchSpace& space;
    const FitnessFn& fitness;
    const GwoConfig& cfg;

    void mask_of(int iter, int w, const std::vector<double>& pos,
                 std::vector<std::uint8_t>& mask) const {
        mask.resize(static_cast<size_t>(space.n_bits));
        for (int d = 0; d < space.n_bits; ++d) {
            double draw = counter_uniform(cfg.seed, static_cast<std::uint64_t>(iter),
                                          static_cast<std::uint64_t>(w),
                                          static_cast<std::uint64_t>(d), kChanBinarize);
            mask[static_cast<size_t>(d)] = binarize_dim(pos[static_cast<size_t>(d)], draw,
                                                        cfg.steepness) ? 1 : 0;
        }
    }

    void evaluate(int iter, int w, Wolf& wolf) const {
        mask_of(iter, w, wolf.pos, wolf.mask);
        wolf.fitness = fitness(wolf.mask, decode_params(space, wolf.pos));
    }
};

void absorb(Leaders& leaders, const Wolf& wolf) {
    if (wolf.fitness < leaders.alpha.fitness) {
        leaders.delta = leaders.beta;
        leaders.beta = leaders.alpha;
        leaders.alpha = wolf;
    } else if (wolf.fitness < leaders.beta.fitness) {
        leaders.delta = leaders.beta;
        leaders.beta = wolf;
    } else if (wolf.fitness < leaders.delta.fitness) {
        leaders.delta = wolf;
    }
}

} // namespace

GwoResult optimize(const SearchSpace& space, const FitnessFn& fitness, const GwoConfig& cfg,
                   std::ostream* trace, const Observer& observer) {
    validate(space);
    if (cfg.wolves < 3) throw ConfigError("the pack needs at least 3 wolves");
    if (cfg.iters < 1) throw ConfigError("iteration count must be >= 1");
    if (!(cfg.steepness > 0.0)) throw ConfigError("transfer steepness must be positive");
    if (!fitness) throw ConfigError("no fitness function given");

    const int dim = space.size();
    Evaluator eval{space, fitness, cfg};

    std::vector<Wolf> pack(static_cast<size_t>(cfg.wolves));
    for (int w = 0; w < cfg.wolves; ++w) {
        auto& wolf = pack[static_cast<size_t>(w)];
        wolf.pos.resize(static_cast<size_t>(dim));
        for (int d = 0; d < dim; ++d) {
            double u = counter_uniform(cfg.seed, 0, static_cast<std::uint64_t>(w),
                                       static_cast<std::uint64_t>(d), kChanInit);
            wolf.pos[static_cast<size_t>(d)] = space.dim_lo(d) + u * (space.dim_hi(d) - space.dim_lo(d));
        }
    }

    std::vector<std::exception_ptr> errors(static_cast<size_t>(cfg.wolves));
    auto evaluate_pack = [&](int iter) {
        // exceptions may not cross the parallel region; park them per slot
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
        for (int w = 0; w < cfg.wolves; ++w) {
            try {
                eval.evaluate(iter, w, pack[static_cast<size_t>(w)]);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        }
        for (int w = 0; w < cfg.wolves; ++w)
            if (errors[static_cast<size_t>(w)]) std::rethrow_exception(errors[static_cast<size_t>(w)]);
        for (int w = 0; w < cfg.wolves; ++w)
            if (!std::isfinite(pack[static_cast<size_t>(w)].fitness))
                throw NumericError("fitness is not finite at iteration " + std::to_string(iter) +
                                   ", wolf " + std::to_string(w));
    };

    Leaders leaders;
    leaders.alpha.fitness = leaders.beta.fitness = leaders.delta.fitness =
        std::numeric_limits<double>::infinity();

    evaluate_pack(0);
    for (const auto& wolf : pack) absorb(leaders, wolf);

    GwoResult result;
    result.alpha_history.reserve(static_cast<size_t>(cfg.iters));

    long long selected = 0;
    for (int t = 1; t <= cfg.iters; ++t) {
        double a = coefficient_a(t - 1, cfg.iters);
        const Wolf* guide[3] = {&leaders.alpha, &leaders.beta, &leaders.delta};
        for (int w = 0; w < cfg.wolves; ++w) {
            auto& wolf = pack[static_cast<size_t>(w)];
            for (int d = 0; d < dim; ++d) {
                double sum = 0.0;
                for (int L = 0; L < 3; ++L) {
                    double r1 = counter_uniform(cfg.seed, static_cast<std::uint64_t>(t),
                                                static_cast<std::uint64_t>(w),
                                                static_cast<std::uint64_t>(d),
                                                static_cast<std::uint64_t>(2 * L));
                    double r2 = counter_uniform(cfg.seed, static_cast<std::uint64_t>(t),
                                                static_cast<std::uint64_t>(w),
                                                static_cast<std::uint64_t>(d),
                                                static_cast<std::uint64_t>(2 * L + 1));
                    sum += leader_guided_dim(wolf.pos[static_cast<size_t>(d)],
                                             guide[L]->pos[static_cast<size_t>(d)], a, r1, r2);
                }
                double v = sum / 3.0;
                wolf.pos[static_cast<size_t>(d)] = std::clamp(v, space.dim_lo(d), space.dim_hi(d));
            }
        }

        evaluate_pack(t);
        for (const auto& wolf : pack) absorb(leaders, wolf);

        result.alpha_history.push_back(leaders.alpha.fitness);
        selected = 0;
        for (auto bit : leaders.alpha.mask) selected += bit;
        if (trace)
            *trace << t << '\t' << format_double(leaders.alpha.fitness) << '\t' << selected
                   << '\n';
        if (observer) observer(t, leaders, pack);
    }

    result.leaders = leaders;
    return result;
}

} // namespace gwofi
