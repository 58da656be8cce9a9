#include "entroq/hard_instance.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

namespace entroq {

HardInstance build_hard_instance(std::vector<std::vector<std::uint8_t>> bits) {
    if (bits.empty()) throw std::invalid_argument("hard_instance: empty bit matrix");
    HardInstance inst;
    inst.n = static_cast<int>(bits.size());
    inst.k = static_cast<int>(bits[0].size());
    if (inst.k < 1) throw std::invalid_argument("hard_instance: k must be >= 1");
    for (const auto& row : bits) {
        if (static_cast<int>(row.size()) != inst.k)
            throw std::invalid_argument("hard_instance: ragged bit matrix");
        for (auto b : row)
            if (b > 1) throw std::invalid_argument("hard_instance: entries must be 0 or 1");
    }
    inst.bits = std::move(bits);
    inst.f.resize(inst.n);
    for (int i = 0; i < inst.n; ++i)
        inst.f[i] = std::accumulate(inst.bits[i].begin(), inst.bits[i].end(), 0LL);
    inst.R = std::accumulate(inst.f.begin(), inst.f.end(), 0LL);
    if (inst.R == 0) throw std::invalid_argument("hard_instance: all-zero bit matrix");

    std::vector<double> p(inst.n), q(inst.n + 1);
    const double nk = static_cast<double>(inst.n) * inst.k;
    for (int i = 0; i < inst.n; ++i) {
        p[i] = static_cast<double>(inst.f[i]) / inst.R;
        q[i] = static_cast<double>(inst.f[i]) / nk;
    }
    q[inst.n] = static_cast<double>(nk - inst.R) / nk;
    inst.p = Distribution::from_probs(std::move(p));
    inst.q = Distribution::from_probs(std::move(q));
    return inst;
}

HardInstance build_hard_instance(int n, int k, double target_t, std::uint64_t seed) {
    if (n < 1 || k < 1) throw std::invalid_argument("hard_instance: n, k must be >= 1");
    if (!(target_t > 0.0 && target_t <= k))
        throw std::invalid_argument("hard_instance: target t outside (0, k]");
    long long cells = static_cast<long long>(n) * k;
    long long R = std::llround(target_t * n);
    R = std::clamp(R, 1LL, cells);
    // place exactly R ones uniformly among the cells
    std::vector<long long> idx(cells);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 gen(seed);
    std::shuffle(idx.begin(), idx.end(), gen);
    std::vector<std::vector<std::uint8_t>> bits(n, std::vector<std::uint8_t>(k, 0));
    for (long long s = 0; s < R; ++s) bits[idx[s] / k][idx[s] % k] = 1;
    return build_hard_instance(std::move(bits));
}

HardInstance load_hard_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("hard_instance: cannot open " + path);
    std::vector<std::vector<std::uint8_t>> bits;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::uint8_t> row;
        for (char ch : line) {
            if (ch != '0' && ch != '1')
                throw std::runtime_error("hard_instance: bad character in " + path);
            row.push_back(ch == '1' ? 1 : 0);
        }
        bits.push_back(std::move(row));
    }
    return build_hard_instance(std::move(bits));
}

int sample_q(const HardInstance& inst, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    int i = std::uniform_int_distribution<int>(0, inst.n - 1)(gen);
    int j = std::uniform_int_distribution<int>(0, inst.k - 1)(gen);
    return inst.bits[i][j] ? i : inst.n;
}

std::vector<int> discrete_oracle_view(const HardInstance& inst) {
    std::vector<int> table;
    table.reserve(static_cast<size_t>(inst.n) * inst.k);
    for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.k; ++j) table.push_back(inst.bits[i][j] ? i : inst.n);
    return table;
}

EntropyRelation entropy_relation_check(const HardInstance& inst) {
    long long cells = static_cast<long long>(inst.n) * inst.k;
    if (inst.R <= 0 || inst.R >= cells)
        throw std::invalid_argument("entropy_relation_check: t/k must lie strictly inside (0,1)");
    double t_over_k = static_cast<double>(inst.R) / cells;
    double k_over_t = static_cast<double>(cells) / inst.R;
    EntropyRelation rel;
    rel.lhs = shannon_entropy(inst.p);
    rel.rhs = k_over_t * (shannon_entropy(inst.q) - binary_entropy(t_over_k));
    rel.max_dev = std::abs(rel.lhs - rel.rhs);
    return rel;
}

}  // namespace entroq
