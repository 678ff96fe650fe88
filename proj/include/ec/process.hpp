#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "ec/graph.hpp"

namespace ec {

// One path of a multi-step recolouring process: `len` vertices starting at
// `start`, first edge coloured `ca`, alternating with `cb`. A single-vertex
// path stores ca = cb = 0 and len = 1.
struct PathChar {
    Colour ca = 0, cb = 0;
    Vertex start = -1;
    long long len = 1;

    bool trivial() const { return ca == 0; }
    friend bool operator==(const PathChar&, const PathChar&) = default;
};

// A process as stored: one character per path, in step order. The centre
// vertices are implicit (w_1 is the lookup key's neighbour; each later centre
// is the last vertex of the previous path).
using ProcessString = std::vector<PathChar>;

// Canonical order used whenever characters or strings are ranked: characters
// by (len, start, ca, cb), strings lexicographically over that.
inline std::tuple<long long, Vertex, Colour, Colour> char_rank(const PathChar& c) {
    return {c.len, c.start, c.ca, c.cb};
}

inline bool char_less(const PathChar& a, const PathChar& b) { return char_rank(a) < char_rank(b); }

inline bool string_less(const ProcessString& a, const ProcessString& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), char_less);
}

// A process resolved against a concrete colouring: explicit vertices of every
// path plus the centre sequence.
struct SteppingProcess {
    Vertex w1 = -1;
    Colour ka = 0, kb = 0;  // colour pair of the first path's maximal path
    ProcessString chars;
    std::vector<std::vector<Vertex>> paths;  // one vertex list per character
    std::vector<Vertex> centres;             // w_1 .. w_i
    bool augmenting = false;
};

}  // namespace ec
