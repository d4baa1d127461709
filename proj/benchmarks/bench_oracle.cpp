// Compares the serial reference oracle against the OpenMP variant and the
// backward recursion on a batch of tree specs. Both oracle modes must agree
// bit for bit; the table reports wall times and the speedup.
//
// Payoffs come in two flavors: a call, whose repeated leaf values collapse
// the enumeration's value sets, and an irregular explicit payoff that keeps
// them large. The second one is the honest stress case.

#include <omp.h>

#include <cstdio>
#include <random>

#include "qsa/binomial.hpp"

using namespace qsa;

namespace {

struct Case {
    const char* name;
    int periods;
    int grid;
    bool irregular;
};

NodeBounds banded() {
    return NodeBounds{Rat(3, 2), Rat(2), Rat(1, 2), Rat(3, 4), Rat(1, 4), Rat(3, 4)};
}

Payoff payoff_for(const Tree& tree, bool irregular) {
    if (!irregular) return Payoff::call(Rat(1));
    std::mt19937_64 rng(5);
    std::map<std::string, Rat> values;
    for (const auto& leaf : tree.leaves())
        values[leaf.path] = Rat(static_cast<long>(rng() % 4096), 64);
    return Payoff::explicit_map(values);
}

} // namespace

int main() {
    const Case cases[] = {
        {"T=2 G=2 call", 2, 2, false},
        {"T=2 G=3 call", 2, 3, false},
        {"T=3 G=2 call", 3, 2, false},
        {"T=2 G=2 expl", 2, 2, true},
        {"T=2 G=3 expl", 2, 3, true},
        {"T=3 G=2 expl", 3, 2, true},
    };

    std::printf("%-14s %12s %10s %10s %10s %8s\n", "case", "choices", "dp[s]", "serial[s]",
                "openmp[s]", "speedup");
    for (const Case& c : cases) {
        BinomialTreeSpec spec;
        spec.periods = c.periods;
        spec.grid = c.grid;
        spec.bounds = banded();
        const Tree tree = build_tree(spec);
        const Payoff payoff = payoff_for(tree, c.irregular);

        double t0 = omp_get_wtime();
        const SuperhedgeResult dp = superhedge_price(tree, payoff);
        const double dp_time = omp_get_wtime() - t0;

        OracleOptions serial;
        serial.cap = Int(4000000);
        serial.parallel = false;
        t0 = omp_get_wtime();
        const Rat serial_price = brute_force_price(tree, payoff, serial);
        const double serial_time = omp_get_wtime() - t0;

        OracleOptions parallel = serial;
        parallel.parallel = true;
        t0 = omp_get_wtime();
        const Rat parallel_price = brute_force_price(tree, payoff, parallel);
        const double parallel_time = omp_get_wtime() - t0;

        if (serial_price != parallel_price || serial_price != dp.value) {
            std::printf("MISMATCH on %s\n", c.name);
            return 1;
        }
        std::printf("%-14s %12s %10.4f %10.4f %10.4f %7.2fx\n", c.name,
                    oracle_choice_count(tree).str().c_str(), dp_time, serial_time, parallel_time,
                    parallel_time > 0 ? serial_time / parallel_time : 0.0);
    }
    std::printf("threads: %d\n", omp_get_max_threads());
    return 0;
}
