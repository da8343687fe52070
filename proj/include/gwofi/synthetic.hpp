#ifndef GWOFI_SYNTHETIC_HPP
#define GWOFI_SYNTHETIC_HPP

#include <cstdint>

#include "gwofi/dataset.hpp"

namespace gwofi::synth {

/// Binary features f01..fNN, outcome = f01 AND f02 with labels flipped at
/// `flip_prob`; every feature is an independent coin at `feature_p`.
Dataset conjunction_dataset(int n, int n_features, double flip_prob, double feature_p,
                            std::uint64_t seed);

/// Three informative coins g1..g3 plus noise coins; outcome = majority of
/// the three, flipped at `flip_prob`. All three are needed for a full score.
Dataset planted_mask_dataset(int n, int n_noise, double flip_prob, std::uint64_t seed);

/// Noise coins plus one column `marker` that equals the outcome exactly, so
/// marker=yes <-> outcome=yes is a deterministic planted implication.
Dataset implication_dataset(int n, int n_noise, double p_rule, std::uint64_t seed);

/// Mixed-kind table with missing cells and labels that need CSV quoting;
/// exercises the reader/writer round trip.
Dataset random_mixed(int n, std::uint64_t seed);

} // namespace gwofi::synth

#endif
