#pragma once

#include <string>
#include <vector>

#include "bergman/weight.hpp"

namespace bergman {

struct SuitePair {
    WeightPtr omega;
    WeightPtr nu;
    double p = 2.0;
    std::string name;
    bool expect_bounded = false;  ///< ground truth from the classical results
};

/// The built-in weights exercised by the diagnostics: standard, exponential
/// and rapidly increasing representatives.
const std::vector<WeightPtr>& suite_weights();

/// Pairs with sigma integrable, for the extremal-identity and Hoelder checks.
const std::vector<SuitePair>& extremal_identity_pairs();

/// Pairs for the integration-identity validation.
const std::vector<SuitePair>& integration_identity_pairs();

/// Mixed pairs (bounded, diverging, sigma-failing) for trend agreement and
/// class-transfer checks.
const std::vector<SuitePair>& transfer_pairs();

} // namespace bergman
