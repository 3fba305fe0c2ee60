#include "driftsolve/wright_fisher.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace drift {

namespace {

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Counts {
    long at_one = 0;
    long at_zero = 0;
    long unresolved = 0;
};

Counts run_range(const WfConfig& cfg, long begin, long end, long cap)
{
    const int n = cfg.pop_size;
    const double m0 = eval_drift(cfg.model, 0.0);
    const double m1 = eval_drift(cfg.model, 1.0);
    Counts c;
    for (long rep = begin; rep < end; ++rep) {
        // per-replicate substream keyed by (seed, replicate index)
        std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(rep))));
        int count = static_cast<int>(std::lround(cfg.init_freq * n));
        bool resolved = false;
        for (long gen = 0; gen < cap; ++gen) {
            if (count == 0 && m0 <= 0.0) {
                ++c.at_zero;
                resolved = true;
                break;
            }
            if (count == n && m1 >= 0.0) {
                ++c.at_one;
                resolved = true;
                break;
            }
            const double x = static_cast<double>(count) / n;
            const double p = std::clamp(x + eval_drift(cfg.model, x) / n, 0.0, 1.0);
            count = std::binomial_distribution<int>(n, p)(rng);
        }
        if (!resolved)
            ++c.unresolved;
    }
    return c;
}

} // namespace

FixationEstimate simulate_fixation(const WfConfig& cfg)
{
    if (cfg.pop_size < 10)
        throw std::invalid_argument("population size must be at least 10");
    if (cfg.replicates < 1)
        throw std::invalid_argument("need at least one replicate");
    if (!(cfg.init_freq >= 0.0 && cfg.init_freq <= 1.0))
        throw std::invalid_argument("initial frequency must lie in [0,1]");
    const long cap = cfg.generation_cap > 0 ? cfg.generation_cap
                                            : 100L * cfg.pop_size;

    const long total = cfg.replicates;
    const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(),
                                                   static_cast<unsigned>((total + 499) / 500)));
    std::vector<std::future<Counts>> parts;
    parts.reserve(workers);
    const long chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const long b = w * chunk;
        const long e = std::min<long>(total, b + chunk);
        if (b >= e)
            break;
        parts.push_back(std::async(std::launch::async,
                                   [&cfg, b, e, cap] { return run_range(cfg, b, e, cap); }));
    }
    Counts sum;
    for (auto& f : parts) {
        const Counts c = f.get();
        sum.at_one += c.at_one;
        sum.at_zero += c.at_zero;
        sum.unresolved += c.unresolved;
    }

    FixationEstimate est;
    est.replicates = total;
    est.fixed_at_one = static_cast<double>(sum.at_one) / total;
    est.fixed_at_zero = static_cast<double>(sum.at_zero) / total;
    est.unresolved = static_cast<double>(sum.unresolved) / total;
    return est;
}

} // namespace drift
