#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hamlab {

// One generator or inverse generator of pi_1 of the genus-g surface.
// index runs 1..2g with the convention a1,b1,a2,b2,... (odd = a, even = b);
// sign -1 denotes the inverse letter.  Text tokens: "a1","b2" lowercase for
// generators, "A1","B2" uppercase for inverses.
struct Letter {
    int index = 1;
    int sign = 1;

    Letter() = default;
    Letter(int idx, int sgn) : index(idx), sign(sgn) {}

    Letter inverse() const { return Letter{index, -sign}; }
    bool operator==(const Letter& o) const { return index == o.index && sign == o.sign; }
    bool operator!=(const Letter& o) const { return !(*this == o); }
};

// A word in the surface-group generators.  Not automatically reduced.
using Word = std::vector<Letter>;

// Token text format ("a1 B2 a1"); empty string is the empty word.
std::string letter_token(const Letter& l);
Letter parse_letter(const std::string& token);
std::string format_word(const Word& w);
Word parse_word(const std::string& text);

Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, int p); // p may be negative

// Cancels adjacent letter/inverse pairs until none remain.
Word free_reduce(const Word& w);

// Splits a freely reduced w as c * u * c^-1 with u cyclically reduced.
// Returns (u, c).
std::pair<Word, Word> cyclic_reduce(const Word& w);

// Smallest r with w = r^m as a free-group element (m >= 1); for
// w = c * v^m * c^-1 returns c * v * c^-1.
Word primitive_root(const Word& w);

// Dehn's algorithm for the one-relator surface group of genus g.
// Input must be freely reduced.  Repeatedly replaces any subword that
// matches more than half (> 2g letters) of a cyclic rotation of the
// relator prod [a_i, b_i] (or its inverse) by the shorter complement,
// scanning left to right and restarting after each replacement.
Word dehn_reduce(const Word& w, int genus);

// The boundary relator a1 b1 A1 B1 a2 b2 ... of length 4g.
Word relator(int genus);

// Letter count of dehn_reduce(free_reduce(w)); an upper bound for the
// geodesic word length.
int word_length(const Word& w, int genus);

// Word-problem decision via Dehn's algorithm.
bool is_trivial(const Word& w, int genus);

} // namespace hamlab
