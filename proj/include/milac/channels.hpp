// SPDX-License-Identifier: Apache-2.0
//
// Channel generators. H is K x N with row k equal to h_k^H.

#ifndef MILAC_CHANNELS_HPP
#define MILAC_CHANNELS_HPP

#include "milac/linalg.hpp"
#include "milac/random.hpp"

#include <cstdint>
#include <numbers>
#include <string>

namespace milac {

enum class ChannelModel { rayleigh, clustered };

inline std::string to_string(ChannelModel m) {
    return m == ChannelModel::rayleigh ? "rayleigh" : "clustered";
}

struct GeometricChannelParams {
    int paths = 5;
};

struct ChannelMatrix {
    CMat H;
    ChannelModel model = ChannelModel::rayleigh;
    std::uint64_t seed = 0;
    std::uint32_t trial = 0;

    Index users() const { return H.rows(); }
    Index antennas() const { return H.cols(); }
};

/// ULA steering vector with half-wavelength spacing, unit norm.
inline CVec array_response(double angle, Index N) {
    require_dims(N >= 1, "array_response: N must be positive");
    const double step = std::numbers::pi * std::sin(angle);
    const double amp = 1.0 / std::sqrt(static_cast<double>(N));
    CVec a(N);
    for (Index n = 0; n < N; ++n) a(n) = std::polar(amp, step * static_cast<double>(n));
    return a;
}

/// h = sqrt(N/L) sum_l gain_l a(angle_l) for explicit path parameters.
inline CVec clustered_user_channel(Index N, const CVec& gains, const RVec& angles) {
    require_dims(gains.size() == angles.size() && gains.size() >= 1,
                 "clustered_user_channel: need matching, non-empty path lists");
    const double L = static_cast<double>(gains.size());
    CVec h = CVec::Zero(N);
    for (Index l = 0; l < gains.size(); ++l) h += gains(l) * array_response(angles(l), N);
    return h * std::sqrt(static_cast<double>(N) / L);
}

/// rows x cols matrix of i.i.d. CN(0,1) entries, row-major draw order.
inline CMat complex_gaussian(Index rows, Index cols, Philox& rng) {
    CMat m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) m(r, c) = rng.complex_normal();
    return m;
}

/// i.i.d. CN(0,1) entries. User k draws from substream (trial, k).
inline ChannelMatrix rayleigh_channel(Index N, Index K, const RngStreams& streams, std::uint32_t trial) {
    require_dims(N >= 1 && K >= 1, "rayleigh_channel: N and K must be positive");
    ChannelMatrix ch{CMat(K, N), ChannelModel::rayleigh, streams.seed(), trial};
    for (Index k = 0; k < K; ++k) {
        Philox rng = streams.stream(trial, static_cast<std::uint32_t>(k));
        for (Index n = 0; n < N; ++n) ch.H(k, n) = rng.complex_normal();
    }
    return ch;
}

/// Clustered geometric model with per-user, per-path angles uniform on
/// [0, 2 pi) and CN(0,1) path gains.
inline ChannelMatrix clustered_channel(Index N, Index K, const GeometricChannelParams& params,
                                       const RngStreams& streams, std::uint32_t trial) {
    require_dims(N >= 1 && K >= 1, "clustered_channel: N and K must be positive");
    if (params.paths < 1) throw ValidationError("clustered_channel: need at least one path");
    ChannelMatrix ch{CMat(K, N), ChannelModel::clustered, streams.seed(), trial};
    const Index L = params.paths;
    for (Index k = 0; k < K; ++k) {
        Philox rng = streams.stream(trial, static_cast<std::uint32_t>(k));
        CVec gains(L);
        RVec angles(L);
        for (Index l = 0; l < L; ++l) {
            gains(l) = rng.complex_normal();
            angles(l) = 2.0 * std::numbers::pi * rng.uniform();
        }
        ch.H.row(k) = clustered_user_channel(N, gains, angles).adjoint();
    }
    return ch;
}

} // namespace milac

#endif // MILAC_CHANNELS_HPP
