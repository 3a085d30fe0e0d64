// Learning error of LRU and FIFO at n=7, m=3 from every start state.
#include "cachemix/cachemix.hpp"

#include <iostream>

int main() {
    using namespace cachemix;
    const auto dist = make_zipf(7, 0.8);
    const auto w = RankWeights::standard(7, 3);
    const auto grid = parse_t_grid("log:1..1000:4");
    std::vector<LearningCurve> curves;
    for (const char* spec : {"lru", "fifo"}) curves.push_back(learning_error_curve(parse_policy(spec, 3), dist, w, grid));
    write_learning_csv(std::cout, curves);
}
