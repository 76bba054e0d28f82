#pragma once

#include "hamlab/surface_group.hpp"

#include <cstdint>
#include <vector>

namespace hamlab {

struct HomogenizedValue {
    double value = 0.0;
    int p_used = 0;
    double error_bound = 0.0;
};

// Brooks-style counting quasi-morphism: occurrences of a fixed pattern minus
// occurrences of its inverse in the Dehn-reduced representative, counted
// greedily left to right without overlaps.
class CountingQM {
  public:
    CountingQM(Word pattern, int genus);

    const Word& pattern() const { return pattern_; }
    int genus() const { return genus_; }

    int evaluate(const Word& w) const;
    // value = evaluate(u^p_max)/p_max on the cyclically reduced u, with the
    // p_max/2 estimate difference as error bound
    HomogenizedValue homogenize(const Word& w, int p_max) const;

    // running max of |ev(w w') - ev(w) - ev(w')| over sampled random pairs;
    // a lower bound for the true defect
    double defect_estimate(int samples, int max_len, std::uint64_t seed) const;

    // true iff the homogenized value of every loop is zero within its error bound
    bool vanishes_on(const std::vector<Word>& loops, int p_max) const;

  private:
    Word pattern_;
    Word pattern_inv_;
    int genus_;
};

// Uniform freely-reduced random word of the given length.
Word random_reduced_word(int length, int genus, std::uint64_t seed);

} // namespace hamlab
