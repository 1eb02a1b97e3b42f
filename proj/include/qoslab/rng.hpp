#pragma once

#include <cmath>
#include <cstdint>

namespace qoslab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Seeded random stream identified by (master_seed, stream_id). Substreams are
/// derived by mixing, not by drawing, so the draw sequence of any logical
/// stream is independent of how work is split across threads.
///
/// The generator is splitmix64 in counter mode: construction is O(1), which
/// matters because the streaming experiments derive one substream per sample.
/// Gaussian variates use an explicit Box-Muller so sequences do not depend on
/// the standard library's normal_distribution implementation.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0)
        : master_seed_(master_seed),
          stream_id_(stream_id),
          state_(detail::splitmix64(master_seed ^ detail::splitmix64(stream_id + 0x51ed270b7a2fd117ULL))) {}

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Independent stream derived from this one's identity; unaffected by any
    /// draws already made here.
    RngStream substream(std::uint64_t k) const {
        return RngStream(master_seed_, detail::splitmix64(stream_id_ * 0x2545f4914f6cdd1dULL + k + 1));
    }

    /// Uniform on [0, 1).
    double uniform() {
        return (bits() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_pos() {
        return ((bits() >> 11) + 1) * 0x1.0p-53;
    }

    std::uint64_t bits() { return detail::splitmix64(state_ += 0x9e3779b97f4a7c15ULL); }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_pos();
        double v = uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qoslab
