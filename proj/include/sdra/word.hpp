#pragma once

#include <map>

#include "automorphism.hpp"

namespace sdra {

// A product of dynamical matrices interleaved with integer powers of one automorphism
// acting on single legs. Normal ordering moves every power to the right:
// g_l^p X = Ad(g_l^p)(X) g_l^p.
struct WordItem {
    DynMat mat;
    int leg = -1;
    int power = 0;

    static WordItem m(DynMat X) { return WordItem{std::move(X), -1, 0}; }
    static WordItem g(int leg, int power) { return WordItem{DynMat(), leg, power}; }
    bool is_power() const { return !mat.valid(); }
};

struct NormalWord {
    DynMat matrix;
    std::map<int, int> pending; // leg -> remaining power on the right
};

inline NormalWord normal_order(const std::vector<WordItem>& items, const Automorphism& g) {
    std::map<int, int> pending;
    std::vector<DynMat> fs;
    for (const auto& it : items) {
        if (it.is_power()) {
            pending[it.leg] += it.power;
            continue;
        }
        DynMat X = it.mat;
        const Legs legs = X.legs();
        for (int l : legs) {
            auto p = pending.find(l);
            if (p != pending.end() && p->second != 0) X = adjoint_auto(X, g, {l}, Side::Conjugate, p->second);
        }
        fs.push_back(X);
    }
    for (auto it = pending.begin(); it != pending.end();)
        it = it->second == 0 ? pending.erase(it) : std::next(it);
    if (fs.empty()) throw Error("normal_order: word has no matrix factor");
    return NormalWord{product(fs), pending};
}

} // namespace sdra
