#include "hamlab/surface_group.hpp"

#include "hamlab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hamlab {

std::string letter_token(const Letter& l) {
    char base = (l.index % 2 == 1) ? 'a' : 'b';
    int family = (l.index + 1) / 2;
    if (l.sign < 0) base = static_cast<char>(std::toupper(base));
    return std::string(1, base) + std::to_string(family);
}

Letter parse_letter(const std::string& token) {
    if (token.size() < 2) throw config_error("bad word token: '" + token + "'");
    char c = token[0];
    int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
    char base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (base != 'a' && base != 'b') throw config_error("bad word token: '" + token + "'");
    int family = 0;
    try {
        family = std::stoi(token.substr(1));
    } catch (const std::exception&) {
        throw config_error("bad word token: '" + token + "'");
    }
    if (family < 1) throw config_error("bad word token: '" + token + "'");
    int index = (base == 'a') ? 2 * family - 1 : 2 * family;
    return Letter{index, sign};
}

std::string format_word(const Word& w) {
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += letter_token(w[i]);
    }
    return out;
}

Word parse_word(const std::string& text) {
    Word w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) w.push_back(parse_letter(tok));
    return w;
}

Word inverse(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Word power(const Word& w, int p) {
    Word base = (p < 0) ? inverse(w) : w;
    int n = std::abs(p);
    Word out;
    out.reserve(base.size() * static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
}

Word free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (const Letter& l : w) {
        if (!out.empty() && out.back() == l.inverse())
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
    Word u = w;
    Word c; // conjugator prefix, w = c u c^-1
    while (u.size() >= 2 && u.front() == u.back().inverse()) {
        c.push_back(u.front());
        u.erase(u.begin());
        u.pop_back();
    }
    return {u, c};
}

Word primitive_root(const Word& w) {
    auto [u, c] = cyclic_reduce(free_reduce(w));
    if (u.empty()) return {};
    for (size_t len = 1; len <= u.size() / 2; ++len) {
        if (u.size() % len != 0) continue;
        bool periodic = true;
        for (size_t i = len; i < u.size() && periodic; ++i)
            if (!(u[i] == u[i % len])) periodic = false;
        if (periodic) {
            Word v(u.begin(), u.begin() + len);
            return free_reduce(concat(concat(c, v), inverse(c)));
        }
    }
    return free_reduce(concat(concat(c, u), inverse(c)));
}

Word relator(int genus) {
    Word r;
    for (int i = 1; i <= genus; ++i) {
        Letter a{2 * i - 1, 1}, b{2 * i, 1};
        r.push_back(a);
        r.push_back(b);
        r.push_back(a.inverse());
        r.push_back(b.inverse());
    }
    return r;
}

namespace {

// All cyclic rotations of the relator and of its inverse.
std::vector<Word> relator_rotations(int genus) {
    std::vector<Word> rots;
    for (const Word& base : {relator(genus), inverse(relator(genus))}) {
        const int n = static_cast<int>(base.size());
        for (int s = 0; s < n; ++s) {
            Word rot;
            rot.reserve(base.size());
            for (int i = 0; i < n; ++i) rot.push_back(base[(s + i) % n]);
            rots.push_back(std::move(rot));
        }
    }
    return rots;
}

} // namespace

Word dehn_reduce(const Word& w, int genus) {
    if (genus < 2) throw config_error("genus must be >= 2");
    const auto rots = relator_rotations(genus);
    const int rel_len = 4 * genus;
    const int half = 2 * genus;

    Word cur = w;
    bool changed = true;
    while (changed) {
        changed = false;
        const int n = static_cast<int>(cur.size());
        for (int pos = 0; pos < n && !changed; ++pos) {
            // longest relator-rotation prefix starting at pos, over all rotations
            int best_len = 0;
            const Word* best_rot = nullptr;
            for (const Word& rot : rots) {
                int len = 0;
                while (len < rel_len && pos + len < n && cur[pos + len] == rot[len]) ++len;
                if (len > best_len) {
                    best_len = len;
                    best_rot = &rot;
                }
            }
            if (best_len > half) {
                // matched prefix rot[0..best_len) == complement^-1 in the group;
                // replace it by inverse(rot[best_len..rel_len)), which is shorter
                Word repl;
                for (int i = rel_len - 1; i >= best_len; --i) repl.push_back((*best_rot)[i].inverse());
                Word next(cur.begin(), cur.begin() + pos);
                next.insert(next.end(), repl.begin(), repl.end());
                next.insert(next.end(), cur.begin() + pos + best_len, cur.end());
                cur = free_reduce(next);
                changed = true;
            }
        }
    }
    return cur;
}

int word_length(const Word& w, int genus) {
    return static_cast<int>(dehn_reduce(free_reduce(w), genus).size());
}

bool is_trivial(const Word& w, int genus) {
    return dehn_reduce(free_reduce(w), genus).empty();
}

} // namespace hamlab
