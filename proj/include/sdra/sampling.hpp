#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "dynmat.hpp"

namespace sdra {

struct SamplerConfig {
    std::uint64_t seed = 1;
    int count = 50;
    double box_re = 2.0;
    double box_im = 2.0;
    double min_separation = 0.1;
    int retry_cap = 10000;
};

// Rejection sampler over the complex box; lambda has scheme.rank entries and
// u is drawn for legs 0..max_leg (legs listed in fixed_u keep their value).
inline std::vector<Point> sample_points(const SamplerConfig& cfg, const WeightScheme& scheme, int max_leg,
                                        const std::vector<DynMat>& pole_sources = {},
                                        const std::map<int, cplx>& fixed_u = {}) {
    if (cfg.count < 1) throw Error("sampler: count must be at least 1");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> re(-cfg.box_re, cfg.box_re), im(-cfg.box_im, cfg.box_im);
    auto draw = [&] { return cplx(re(rng), im(rng)); };
    auto separated = [&](const std::vector<cplx>& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j)
                if (std::abs(v[i] - v[j]) < cfg.min_separation) return false;
        return true;
    };
    std::vector<Point> out;
    out.reserve(cfg.count);
    int attempts = 0;
    while (static_cast<int>(out.size()) < cfg.count) {
        if (++attempts > cfg.retry_cap)
            throw Error("sampler: retry cap exceeded (constraints too tight for the sampling box)");
        std::vector<cplx> lam(scheme.rank);
        for (auto& x : lam) x = draw();
        std::vector<cplx> u(max_leg + 1);
        for (int l = 0; l <= max_leg; ++l) {
            auto it = fixed_u.find(l);
            u[l] = it != fixed_u.end() ? it->second : draw();
        }
        if (!separated(lam) || !separated(u)) continue;
        Point p(Eigen::Map<Vec>(lam.data(), scheme.rank), u);
        bool bad = false;
        for (const auto& d : pole_sources)
            if (d.near_pole(p, cfg.min_separation)) {
                bad = true;
                break;
            }
        if (bad) continue;
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace sdra
