#pragma once

#include <array>
#include <map>

#include "diamond/buffered_relay.hpp"

namespace ref {

// Published 16-level link rates (units/s) by mean SNR in dB, ranks 1..16.
inline const std::map<int, std::array<double, 16>> kRates16 = {
    {0, {0.025, 0.07, 0.115, 0.16, 0.205, 0.255, 0.305, 0.355, 0.405, 0.465, 0.525, 0.59, 0.67, 0.76, 0.88, 1.015}},
    {2, {0.035, 0.105, 0.17, 0.24, 0.32, 0.37, 0.435, 0.50, 0.57, 0.64, 0.715, 0.795, 0.885, 0.99, 1.13, 1.28}},
    {4, {0.0505, 0.16, 0.255, 0.35, 0.435, 0.52, 0.605, 0.685, 0.77, 0.855, 0.94, 1.035, 1.135, 1.255, 1.40, 1.565}},
    {6, {0.085, 0.24, 0.375, 0.495, 0.605, 0.71, 0.81, 0.91, 1.00, 1.10, 1.195, 1.30, 1.41, 1.535, 1.695, 1.865}},
    {8, {0.13, 0.35, 0.525, 0.68, 0.815, 0.935, 1.05, 1.16, 1.265, 1.355, 1.475, 1.585, 1.705, 1.835, 2.005, 2.175}},
    {10, {0.20, 0.495, 0.715, 0.90, 1.055, 1.19, 1.32, 1.435, 1.55, 1.66, 1.775, 1.89, 2.01, 2.15, 2.32, 2.495}},
};

inline const std::array<int, 6> kSnrs = {0, 2, 4, 6, 8, 10};

struct DelayRow {
    diamond::Thresholds thr;  // U, u, D, d
    double delay;             // published average delay (seconds at T = 1 ms)
    double improvement;       // units/s
};

// 6 dB rows with finite delay
inline const std::array<DelayRow, 4> kDelayRows6dB = {{
    {{16, 14, 3, 1}, 6.68, 0.0199},
    {{16, 15, 3, 1}, 15.08, 0.0269},
    {{16, 15, 3, 2}, 17.27, 0.0311},
    {{15, 15, 3, 2}, 29.38, 0.0465},
}};

inline const diamond::Thresholds kDivergent6dB{15, 15, 2, 2};

}  // namespace ref
