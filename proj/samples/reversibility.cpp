// Detailed-balance verdicts on the n=4, m=2 chains.
#include "cachemix/cachemix.hpp"

#include <iostream>

int main() {
    using namespace cachemix;
    const auto dist = make_zipf(4, 0.8);
    for (const char* spec : {"lru", "fifo", "random", "climb", "klru:2", "lrum:1,1"}) {
        const auto cfg = parse_policy(spec, 2);
        auto space = std::make_shared<const StateSpace>(enumerate_states(cfg, 4));
        const auto P = build_transition_matrix(cfg, dist, space);
        const auto pi = stationary_numeric(P);
        const auto r = is_reversible(P, pi.pi);
        std::cout << spec << ": " << (r.reversible ? "reversible" : "not reversible");
        if (r.witness)
            std::cout << ", e.g. " << format_state(space->states[r.witness->x]) << " -> "
                      << format_state(space->states[r.witness->y]) << " carries " << r.witness->forward
                      << " forward but " << r.witness->backward << " back";
        std::cout << '\n';
    }
}
