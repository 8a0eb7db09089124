#include "bergman/suite.hpp"

namespace bergman {

const std::vector<WeightPtr>& suite_weights() {
    static const std::vector<WeightPtr> weights = {
        make_standard(0.0),
        make_standard(0.5),
        make_standard(1.0),
        make_standard(2.5),
        make_exponential(1.0, 1.0, 1.0),
        make_exponential(1.0, 0.5, 1.0),
        make_rapidly_increasing(2.0),
    };
    return weights;
}

const std::vector<SuitePair>& extremal_identity_pairs() {
    static const std::vector<SuitePair> pairs = {
        {make_standard(0.0), make_standard(0.0), 2.0, "std0/std0 p=2", true},
        {make_standard(1.0), make_standard(1.0), 1.5, "std1/std1 p=1.5", true},
        {make_standard(2.5), make_standard(2.5), 3.0, "std2.5/std2.5 p=3", true},
        {make_standard(1.0), make_standard(0.0), 2.0, "std1/std0 p=2", true},
        {make_standard(2.5), make_standard(1.0), 2.0, "std2.5/std1 p=2", true},
        {make_exponential(1, 1, 1), make_exponential(1, 1, 1), 2.0, "exp111/exp111 p=2", true},
        {make_exponential(2.0 / 3.0, 0.5, 1), make_exponential(1, 0.5, 1), 3.0,
         "exp(2/3,.5,1)/exp(1,.5,1) p=3", true},
    };
    return pairs;
}

const std::vector<SuitePair>& integration_identity_pairs() {
    static const std::vector<SuitePair> pairs = {
        {make_standard(0.0), make_standard(0.0), 2.0, "std0/std0 p=2", true},
        {make_standard(1.0), make_standard(1.0), 3.0, "std1/std1 p=3", true},
        {make_standard(1.0), make_standard(0.0), 2.0, "std1/std0 p=2", true},
        {make_exponential(1, 0.5, 1), make_exponential(1, 0.5, 1), 2.0,
         "exp(1,.5,1) self p=2", true},
        {make_exponential(2.0 / 3.0, 0.5, 1), make_exponential(1, 0.5, 1), 3.0,
         "exp(2/3,.5,1)/exp(1,.5,1) p=3", true},
    };
    return pairs;
}

const std::vector<SuitePair>& transfer_pairs() {
    static const std::vector<SuitePair> pairs = {
        {make_standard(1.0), make_standard(1.0), 2.0, "std1 self p=2", true},
        {make_standard(1.0), make_standard(0.0), 2.0, "std1/std0 p=2", true},
        {make_standard(2.5), make_standard(1.0), 2.0, "std2.5/std1 p=2", true},
        {make_standard(0.0), make_standard(2.0), 2.0, "std0/std2 p=2 (sigma fails)", false},
        {make_standard(1.0), make_exponential(1, 1, 1), 2.0, "std1/exp111 p=2 (sigma fails)",
         false},
        {make_exponential(1, 1, 1), make_standard(1.0), 2.0, "exp111/std1 p=2", false},
        {make_exponential(1, 1, 1), make_exponential(1, 1, 1), 2.0, "exp111 self p=2", true},
        {make_rapidly_increasing(2.0), make_rapidly_increasing(2.0), 2.0, "ri2 self p=2", true},
    };
    return pairs;
}

} // namespace bergman
