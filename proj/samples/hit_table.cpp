// Stationary hit probabilities at n=20, m=4, Zipf 0.8: closed forms for the
// single-level policies and long simulations for the rest.
#include "cachemix/cachemix.hpp"

#include <cstdio>

int main() {
    using namespace cachemix;
    const auto dist = make_zipf(20, 0.8);
    for (auto kind : {PolicyKind::lru, PolicyKind::fifo, PolicyKind::random, PolicyKind::climb}) {
        PolicyConfig c;
        c.kind = kind;
        c.m = 4;
        std::printf("%-10s exact %.4f\n", c.name().c_str(), hit_probability_closed_form(kind, dist, 4));
    }
    for (const char* spec : {"klru:2", "lrum:1,3", "arc", "alru:0"}) {
        const auto est = monte_carlo_stationary(parse_policy(spec, 4), dist, 200'000, 2'000'000, 1);
        std::printf("%-10s sim   %.4f +- %.4f%s\n", spec, est.hit, est.stderr_, est.converged ? "" : " (unconverged)");
    }
}
