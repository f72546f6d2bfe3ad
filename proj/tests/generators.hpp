#pragma once

#include <cstdint>
#include <vector>

#include "superint/potentials.hpp"

// Small deterministic generators for the property tests. Each test seeds its
// own stream so failures reproduce from the printed case index.
namespace gen {

class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53; }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
    std::uint64_t state_;
};

// k on the regular (+) branch, kept away from 1/2 so the centrifugal term is active.
inline superint::ModelV1 model_v1(Stream& s) {
    superint::ModelV1 m;
    m.omega = s.uniform(0.5, 2.0);
    m.k1 = s.uniform(-1.5, 1.5);
    m.k2 = s.uniform(0.6, 3.0);
    return m;
}

inline superint::ModelV2 model_v2(Stream& s) {
    superint::ModelV2 m;
    m.omega = s.uniform(0.5, 2.0);
    m.k1 = s.uniform(0.6, 3.0);
    m.k2 = s.uniform(0.6, 3.0);
    return m;
}

}  // namespace gen
