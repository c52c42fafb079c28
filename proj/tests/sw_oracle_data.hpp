// Generated by tests/oracles/gen_sw_oracle.py. Do not edit by hand.
#pragma once

#include <cstdint>

namespace sw_oracle {

struct Case {
    const char* dist;
    std::uint64_t seed;
    std::uint64_t stream;
    int n;
    double param0;
    double param1;
    double w;
    double p;
};

inline constexpr Case kCases[] = {
    {"normal", 1003ull, 0ull, 3, 0.0, 1.0, 0x1.b6b1029155244p-1, 0x1.0913264eda452p-2},
    {"normal", 1004ull, 0ull, 4, 0.0, 1.0, 0x1.f46ca2f101915p-1, 0x1.c5eb58a01ef8ep-1},
    {"normal", 1005ull, 0ull, 5, 0.0, 1.0, 0x1.e00c9cdf0b72cp-1, 0x1.4c49618b75202p-1},
    {"normal", 1011ull, 0ull, 11, 0.0, 1.0, 0x1.f123ca752e726p-1, 0x1.cadbd23551f44p-1},
    {"normal", 1012ull, 0ull, 12, 0.0, 1.0, 0x1.f7b7b42bcadedp-1, 0x1.fd3c4dbb88d84p-1},
    {"normal", 1025ull, 0ull, 25, 0.0, 1.0, 0x1.e6289e85e9b3ap-1, 0x1.f510a4868541cp-3},
    {"normal", 1050ull, 0ull, 50, 0.0, 1.0, 0x1.f077935e12161p-1, 0x1.cb3dad6d2925cp-3},
    {"normal", 1100ull, 0ull, 100, 0.0, 1.0, 0x1.f752d1b009041p-1, 0x1.d32ca8e37b3ecp-3},
    {"normal", 1500ull, 0ull, 500, 0.0, 1.0, 0x1.fe5cd6c3a1c4fp-1, 0x1.b8a67890078e1p-2},
    {"normal", 3000ull, 0ull, 2000, 0.0, 1.0, 0x1.ff45d6606473cp-1, 0x1.7a3dd5ece72c0p-4},
    {"normal", 6000ull, 0ull, 5000, 0.0, 1.0, 0x1.ffd7248b14ae8p-1, 0x1.57a369a65eb3fp-1},
    {"uniform", 2010ull, 1ull, 10, -1.0, 3.0, 0x1.d2bcab8893262p-1, 0x1.2b24cda6ae09ep-2},
    {"uniform", 2050ull, 1ull, 50, -1.0, 3.0, 0x1.ec11d759c220cp-1, 0x1.93dbd84e2ba58p-4},
    {"uniform", 2500ull, 1ull, 500, -1.0, 3.0, 0x1.ebc8f75fd5e66p-1, 0x1.16296667cb4b3p-32},
    {"uniform", 7000ull, 1ull, 5000, -1.0, 3.0, 0x1.e8c8b32668fa8p-1, 0x1.0a76db435e1c7p-120},
    {"exponential", 3010ull, 2ull, 10, 1.5, 0.0, 0x1.a24b96f4beb50p-1, 0x1.7dbbd7d9f40afp-6},
    {"exponential", 3050ull, 2ull, 50, 1.5, 0.0, 0x1.a64341715975ap-1, 0x1.cb677ebbdf848p-19},
    {"exponential", 3500ull, 2ull, 500, 1.5, 0.0, 0x1.a2230d7390da4p-1, 0x1.73241dc176454p-76},
    {"exponential", 8000ull, 2ull, 5000, 1.5, 0.0, 0x1.a1d4f75b87c99p-1, 0x1.07fb4a5dc9712p-197},
    {"normal", 4242ull, 3ull, 200, -7.5, 0.01, 0x1.fc34aa9a1ffe8p-1, 0x1.a27ff5ec3338fp-2},
    {"normal", 4243ull, 4ull, 64, 1000000.0, 250.0, 0x1.f5f6050f3ec12p-1, 0x1.9ae910ef261e8p-2},
};

}  // namespace sw_oracle
