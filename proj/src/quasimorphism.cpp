#include "hamlab/quasimorphism.hpp"

#include "hamlab/errors.hpp"

#include <algorithm>
#include <random>

namespace hamlab {

namespace {

// greedy non-overlapping occurrence count, left to right
int count_occurrences(const Word& w, const Word& pat) {
    if (pat.empty() || w.size() < pat.size()) return 0;
    int count = 0;
    size_t i = 0;
    while (i + pat.size() <= w.size()) {
        bool hit = true;
        for (size_t j = 0; j < pat.size(); ++j) {
            if (w[i + j] != pat[j]) {
                hit = false;
                break;
            }
        }
        if (hit) {
            ++count;
            i += pat.size();
        } else {
            ++i;
        }
    }
    return count;
}

} // namespace

CountingQM::CountingQM(Word pattern, int genus)
    : pattern_(free_reduce(std::move(pattern))), genus_(genus) {
    if (pattern_.empty()) throw config_error("counting pattern must be non-trivial");
    pattern_inv_ = inverse(pattern_);
    if (pattern_ == pattern_inv_) throw config_error("counting pattern equals its own inverse");
}

int CountingQM::evaluate(const Word& w) const {
    Word r = dehn_reduce(free_reduce(w), genus_);
    return count_occurrences(r, pattern_) - count_occurrences(r, pattern_inv_);
}

HomogenizedValue CountingQM::homogenize(const Word& w, int p_max) const {
    if (p_max < 4 || (p_max & (p_max - 1)) != 0)
        throw config_error("p_max must be a power of two >= 4");
    Word u = cyclic_reduce(dehn_reduce(free_reduce(w), genus_)).first;
    HomogenizedValue out;
    out.p_used = p_max;
    if (u.empty()) return out;
    double full = static_cast<double>(evaluate(power(u, p_max))) / p_max;
    double half = static_cast<double>(evaluate(power(u, p_max / 2))) / (p_max / 2);
    out.value = full;
    out.error_bound = std::abs(full - half);
    return out;
}

Word random_reduced_word(int length, int genus, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> idx(1, 2 * genus);
    std::uniform_int_distribution<int> sgn(0, 1);
    Word w;
    w.reserve(static_cast<size_t>(std::max(length, 0)));
    while (static_cast<int>(w.size()) < length) {
        Letter l{idx(rng), sgn(rng) ? 1 : -1};
        if (!w.empty() && l == w.back().inverse()) continue;
        w.push_back(l);
    }
    return w;
}

double CountingQM::defect_estimate(int samples, int max_len, std::uint64_t seed) const {
    if (samples < 1) throw config_error("defect_estimate needs samples >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(1, std::max(1, max_len));
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
        Word w = random_reduced_word(len(rng), genus_, rng());
        Word v = random_reduced_word(len(rng), genus_, rng());
        double err = std::abs(static_cast<double>(evaluate(concat(w, v)) - evaluate(w) - evaluate(v)));
        best = std::max(best, err);
    }
    return best;
}

bool CountingQM::vanishes_on(const std::vector<Word>& loops, int p_max) const {
    if (loops.empty()) throw config_error("vanishes_on needs a non-empty loop set");
    for (const Word& loop : loops) {
        HomogenizedValue h = homogenize(loop, p_max);
        if (std::abs(h.value) > h.error_bound) return false;
    }
    return true;
}

} // namespace hamlab
