#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>

namespace dgcat {

/* Parallel loop over [0, n); worker count is capped by DGCAT_THREADS
 * (default 1, so runs are sequential and byte-reproducible unless the
 * user opts in). The body must only write to disjoint slots. */
void parallel_for(size_t n, const std::function<void(size_t)>& body);

/* Deterministic RNG for generated corpora; mt19937_64 is fully
 * specified, so streams are identical across platforms. */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    /* uniform-ish integer in [lo, hi]; modulo bias is irrelevant here */
    long next(long lo, long hi)
    {
        if (lo > hi)
            throw std::invalid_argument("bad range");
        return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(int percent) { return next(0, 99) < percent; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace dgcat
