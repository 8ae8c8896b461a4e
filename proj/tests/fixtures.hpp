#pragma once

// Frozen test fixtures. The 8- and 5-city coordinate sets are the first-run
// dumps of generate_instance(8, 7, 1) and generate_instance(5, 42, 1); the
// derived values asserted against them in the tests were computed with
// independent one-off scripts before the solver was wired up.

#include <vector>

#include "ringfuse/instance.hpp"

namespace fixtures {

inline ringfuse::Instance cities8() {
    ringfuse::Instance inst;
    inst.name = "fixture-8";
    const double coords[8][2] = {
        {0.75438530415285798, 0.94930120289264419}, {0.11741428103451801, 0.89191317671247627},
        {0.14127156320378675, 0.055093158503943029}, {0.8325229805314458, 0.90071047645970825},
        {0.25715806876399694, 0.71790568464900339}, {0.75574503474009669, 0.59618878077843318},
        {0.39744545441573387, 0.30852871662747394}, {0.83216837237574981, 0.30400516442581715},
    };
    for (int i = 0; i < 8; ++i) inst.cities.push_back({i, coords[i][0], coords[i][1]});
    return inst;
}

// Independently enumerated optimum of cities8().
inline constexpr double kOpt8Length = 3.0387709488062677;
inline const std::vector<int> kOpt8Order = {0, 1, 4, 2, 6, 7, 5, 3};

inline ringfuse::Instance cities5() {
    ringfuse::Instance inst;
    inst.name = "fixture-5";
    const double coords[5][2] = {
        {0.75515553295453897, 0.63903139385469743}, {0.7521452007480266, 0.13627268363243705},
        {0.90326896642837828, 0.094068311762837031}, {0.57457030410826393, 0.37288769945618483},
        {0.27387410173717075, 0.39027088141429356},
    };
    for (int i = 0; i < 5; ++i) inst.cities.push_back({i, coords[i][0], coords[i][1]});
    return inst;
}

inline ringfuse::Instance unit_square() {
    ringfuse::Instance inst;
    inst.name = "square";
    inst.cities = {{0, 0.0, 0.0}, {1, 1.0, 0.0}, {2, 1.0, 1.0}, {3, 0.0, 1.0}};
    return inst;
}

} // namespace fixtures
