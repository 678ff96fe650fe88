#include "ec/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_set>

namespace ec {

RawGraph RawGraph::from(const Graph& g) {
    RawGraph raw;
    raw.n = g.vertex_count();
    raw.k = g.palette();
    g.for_each_edge([&](EdgeId e, Vertex u, Vertex v, Colour c) {
        raw.edges.push_back({e, u, v, c});
    });
    return raw;
}

// ------------------------------------------------------------ verify_proper

Verdict verify_proper(const RawGraph& g) {
    std::map<std::pair<Vertex, Vertex>, EdgeId> seen_pair;
    std::map<EdgeId, std::size_t> seen_id;
    std::map<std::pair<Vertex, Colour>, EdgeId> seen_colour;
    for (const auto& rec : g.edges) {
        EdgeId id = rec[0];
        Vertex u = rec[1], v = rec[2];
        Colour c = rec[3];
        Verdict bad;
        bad.pass = false;
        bad.edge_a = id;
        if (u < 0 || u >= g.n || v < 0 || v >= g.n) {
            bad.detail = "endpoint out of range";
            bad.vertex = (u < 0 || u >= g.n) ? u : v;
            return bad;
        }
        if (u == v) {
            bad.detail = "self-loop";
            bad.vertex = u;
            return bad;
        }
        if (c < 0 || c > g.k) {
            bad.detail = "colour outside palette";
            bad.colour = c;
            return bad;
        }
        if (!seen_id.emplace(id, seen_id.size()).second) {
            bad.detail = "duplicate edge id";
            bad.edge_b = id;
            return bad;
        }
        auto key = std::minmax(u, v);
        auto [it, fresh] = seen_pair.emplace(key, id);
        if (!fresh) {
            bad.detail = "parallel edge";
            bad.edge_b = it->second;
            return bad;
        }
        if (c != 0) {
            for (Vertex x : {u, v}) {
                auto [cit, cfresh] = seen_colour.emplace(std::make_pair(x, c), id);
                if (!cfresh) {
                    bad.detail = "two incident edges share a colour";
                    bad.edge_b = cit->second;
                    bad.vertex = x;
                    bad.colour = c;
                    return bad;
                }
            }
        }
    }
    return {};
}

Verdict verify_proper(const Graph& g) { return verify_proper(RawGraph::from(g)); }

// ------------------------------------------------- brute_force_colourable

Verdict brute_force_colourable(const RawGraph& g, Colour k) {
    if (g.edges.size() > 20)
        throw std::invalid_argument("brute_force_colourable: more than 20 edges");
    const int m = static_cast<int>(g.edges.size());
    std::vector<int> deg(std::max(g.n, 1), 0);
    for (const auto& rec : g.edges) {
        ++deg[rec[1]];
        ++deg[rec[2]];
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        int sa = deg[g.edges[a][1]] + deg[g.edges[a][2]];
        int sb = deg[g.edges[b][1]] + deg[g.edges[b][2]];
        return sa != sb ? sa > sb : a < b;
    });
    // clash[i][j]: ordered edges i and j share an endpoint
    std::vector<std::vector<bool>> clash(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) {
            const auto& a = g.edges[order[i]];
            const auto& b = g.edges[order[j]];
            clash[i][j] = clash[j][i] =
                a[1] == b[1] || a[1] == b[2] || a[2] == b[1] || a[2] == b[2];
        }
    std::vector<Colour> chosen(m, 0);
    auto solve = [&](auto&& self, int pos) -> bool {
        if (pos == m) return true;
        for (Colour c = 1; c <= k; ++c) {
            bool ok = true;
            for (int j = 0; j < pos && ok; ++j)
                if (clash[pos][j] && chosen[j] == c) ok = false;
            if (!ok) continue;
            chosen[pos] = c;
            if (self(self, pos + 1)) return true;
            chosen[pos] = 0;
        }
        return false;
    };
    if (solve(solve, 0)) return {};
    Verdict bad;
    bad.pass = false;
    bad.detail = "no proper edge-colouring with this palette (search exhausted)";
    bad.colour = k;
    return bad;
}

Verdict brute_force_colourable(const Graph& g, Colour k) {
    return brute_force_colourable(RawGraph::from(g), k);
}

// --------------------------------------------------------- enumerate_chains

namespace {

// Flat mutable instance for the enumerator: slot-indexed edges, naive scans.
struct Inst {
    int n = 0;
    Colour k = 0;
    std::vector<EdgeId> ids;
    std::vector<std::pair<Vertex, Vertex>> ends;
    std::vector<Colour> col;
    std::vector<std::vector<int>> inc;

    int slot_at(Vertex v, Colour c) const {
        for (int s : inc[v])
            if (col[s] == c) return s;
        return -1;
    }
    bool free_at(Vertex v, Colour c) const { return slot_at(v, c) < 0; }
    Colour min_free(Vertex v) const {
        for (Colour c = 1; c <= k; ++c)
            if (free_at(v, c)) return c;
        return 0;
    }
    Colour min_common(Vertex u, Vertex v) const {
        for (Colour c = 1; c <= k; ++c)
            if (free_at(u, c) && free_at(v, c)) return c;
        return 0;
    }
    Vertex other(int s, Vertex v) const {
        return ends[s].first == v ? ends[s].second : ends[s].first;
    }
};

Inst build_inst(const RawGraph& g) {
    Inst in;
    in.n = g.n;
    in.k = g.k;
    in.inc.resize(g.n);
    for (const auto& rec : g.edges) {
        int s = static_cast<int>(in.ids.size());
        in.ids.push_back(rec[0]);
        in.ends.emplace_back(rec[1], rec[2]);
        in.col.push_back(rec[3]);
        in.inc[rec[1]].push_back(s);
        in.inc[rec[2]].push_back(s);
    }
    return in;
}

struct OFan {
    std::vector<Vertex> leaves;
    std::vector<int> slots;
    std::vector<Colour> reps;
    int stop = 0;  // 0 common-free, 1 repeated, 2 second colour blocked
};

OFan ofan(const Inst& in, Vertex u, Vertex v, bool second, Colour k2) {
    OFan f;
    int s0 = -1;
    for (int s : in.inc[u])
        if (in.other(s, u) == v) s0 = s;
    assert(s0 >= 0 && in.col[s0] == 0);
    f.leaves.push_back(v);
    f.slots.push_back(s0);
    for (;;) {
        Vertex wj = f.leaves.back();
        if (Colour cf = in.min_common(u, wj); cf != 0) {
            f.reps.push_back(cf);
            f.stop = 0;
            return f;
        }
        bool rep_found = false;
        for (Colour r : f.reps)
            if (in.free_at(wj, r)) {
                f.reps.push_back(r);
                f.stop = 1;
                rep_found = true;
                break;
            }
        if (rep_found) return f;
        Colour cand = 0;
        for (Colour c = 1; c <= in.k && cand == 0; ++c)
            if ((!second || c != k2) && in.free_at(wj, c)) cand = c;
        if (cand == 0) {
            assert(second);
            f.reps.push_back(k2);
            f.stop = 2;
            return f;
        }
        int nxt = in.slot_at(u, cand);
        assert(nxt >= 0);
        f.reps.push_back(cand);
        f.leaves.push_back(in.other(nxt, u));
        f.slots.push_back(nxt);
    }
}

struct OWalk {
    std::vector<Vertex> verts;
    std::vector<int> slots;
};

OWalk owalk(const Inst& in, Vertex start, Colour c1, Colour c2) {
    OWalk w;
    w.verts.push_back(start);
    Vertex cur = start;
    Colour next = c1;
    for (;;) {
        int s = in.slot_at(cur, next);
        if (s < 0) break;
        Vertex to = in.other(s, cur);
        if (to == start) break;
        w.verts.push_back(to);
        w.slots.push_back(s);
        cur = to;
        next = (next == c1) ? c2 : c1;
    }
    return w;
}

struct OStep {
    std::vector<int> slots;  // chain segment, starting at the blank edge
    std::vector<Vertex> qverts;
    bool augmenting = false;
    Colour pa = 0, pb = 0, last_colour = 0;
};

std::size_t leaf_pos(const OFan& f, Vertex x) {
    for (std::size_t i = 0; i < f.leaves.size(); ++i)
        if (f.leaves[i] == x) return i;
    return static_cast<std::size_t>(-1);
}

OStep assemble_forward(const Inst& in, const OFan& f, const OWalk& w, std::size_t count,
                       Colour pa, Colour pb, bool aug) {
    OStep st;
    st.slots = f.slots;
    st.qverts.assign(w.verts.begin(), w.verts.begin() + count);
    st.slots.insert(st.slots.end(), w.slots.begin(), w.slots.begin() + (count - 1));
    st.augmenting = aug;
    st.pa = pa;
    st.pb = pb;
    st.last_colour = count >= 2 ? in.col[w.slots[count - 2]] : 0;
    return st;
}

OStep assemble_reversed(const Inst& in, const OFan& f, std::size_t keep, const OWalk& w,
                        std::size_t lo, std::size_t hi, Colour pa, Colour pb, bool aug) {
    OStep st;
    st.slots.assign(f.slots.begin(), f.slots.begin() + keep + 1);
    for (std::size_t i = hi + 1; i-- > lo;) st.qverts.push_back(w.verts[i]);
    for (std::size_t i = hi; i-- > lo;) st.slots.push_back(w.slots[i]);
    st.augmenting = aug;
    st.pa = pa;
    st.pb = pb;
    st.last_colour = hi > lo ? in.col[w.slots[lo]] : 0;
    return st;
}

std::optional<OStep> realize(const Inst& in, Vertex u, Vertex v, bool first, Colour k1_in,
                             Colour k2_in, long long cover) {
    OFan f = ofan(in, u, v, !first, k2_in);
    if (f.stop == 0) {
        OStep st;
        st.slots = f.slots;
        st.qverts = {f.leaves.back()};
        st.augmenting = true;
        return st;
    }
    Colour pa, pb;
    if (first) {
        pa = in.min_free(u);
        if (pa == 0) return std::nullopt;  // palette exhausted at the centre
        pb = f.reps.back();
    } else if (f.stop == 1) {
        pa = 0;
        for (Colour c = 1; c <= in.k && pa == 0; ++c)
            if (c != k1_in && c != k2_in && in.free_at(u, c)) pa = c;
        if (pa == 0) return std::nullopt;
        pb = f.reps.back();
    } else {
        pa = k1_in;
        pb = k2_in;
    }
    OWalk w = owalk(in, f.leaves.back(), pa, pb);
    const long long tp = static_cast<long long>(w.verts.size());
    const Vertex back = w.verts.back();

    if (first) {
        if (cover >= tp) {
            if (back == u) {
                std::size_t pos = leaf_pos(f, w.verts[tp - 2]);
                return assemble_reversed(in, f, pos, w, 0, tp - 2, pa, pb, true);
            }
            if (std::size_t pos = leaf_pos(f, back); pos != static_cast<std::size_t>(-1))
                return assemble_reversed(in, f, pos, w, 0, tp - 1, pa, pb, true);
            return assemble_forward(in, f, w, tp, pa, pb, true);
        }
        if (cover == tp - 1 && back == u) {
            std::size_t pos = leaf_pos(f, w.verts[tp - 2]);
            return assemble_reversed(in, f, pos, w, 1, tp - 2, pa, pb, false);
        }
        return assemble_forward(in, f, w, cover, pa, pb, false);
    }
    if (f.stop == 1 && back == u) {
        std::size_t pos = leaf_pos(f, w.verts[tp - 2]);
        if (cover >= tp) return assemble_reversed(in, f, pos, w, 0, tp - 2, pa, pb, true);
        if (cover == tp - 1) return assemble_reversed(in, f, pos, w, 1, tp - 2, pa, pb, false);
        return assemble_forward(in, f, w, cover, pa, pb, false);
    }
    if (f.stop == 1 && cover >= tp - 1) {
        if (std::size_t pos = leaf_pos(f, back); pos != static_cast<std::size_t>(-1))
            return assemble_reversed(in, f, pos, w, 0, tp - 1, pa, pb, true);
    }
    if (cover < tp - 1) return assemble_forward(in, f, w, cover, pa, pb, false);
    return assemble_forward(in, f, w, tp, pa, pb, true);
}

struct EnumCtx {
    Inst in;
    int max_steps = 1;
    long long max_len = 1;
    int max_out = 0;
    ChainList out;
    std::vector<int> cur;  // flattened chain slots so far
};

void apply_shift(Inst& in, const std::vector<int>& slots,
                 std::vector<std::pair<int, Colour>>& undo) {
    for (std::size_t i = 0; i + 1 < slots.size(); ++i) {
        undo.emplace_back(slots[i], in.col[slots[i]]);
        in.col[slots[i]] = in.col[slots[i + 1]];
    }
    undo.emplace_back(slots.back(), in.col[slots.back()]);
    in.col[slots.back()] = 0;
}

void undo_shift(Inst& in, std::vector<std::pair<int, Colour>>& undo) {
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) in.col[it->first] = it->second;
    undo.clear();
}

void recurse(EnumCtx& cx, int steps_used, Vertex u2, Vertex v2, Colour k1, Colour k2,
             bool first) {
    if (!cx.out.complete) return;
    std::vector<OStep> seen;
    for (long long cover = 2; cover <= cx.max_len + 1; ++cover) {
        std::optional<OStep> st =
            realize(cx.in, u2, v2, first, first ? 0 : k1, first ? 0 : k2, cover);
        if (!st) return;  // no continuation at any budget
        bool dup = false;
        for (const OStep& old : seen)
            if (old.slots == st->slots && old.augmenting == st->augmenting) dup = true;
        if (dup) continue;
        seen.push_back(*st);

        const std::size_t skip = first ? 0 : 1;  // frontier edge already flattened
        std::size_t base = cx.cur.size();
        cx.cur.insert(cx.cur.end(), st->slots.begin() + skip, st->slots.end());
        std::vector<std::pair<int, Colour>> undo;
        if (st->augmenting) {
            // verify: after the full shift the blank edge must accept a colour
            std::vector<std::pair<int, Colour>> full;
            apply_shift(cx.in, st->slots, full);
            int fin = st->slots.back();
            bool good = cx.in.min_common(cx.in.ends[fin].first, cx.in.ends[fin].second) != 0;
            undo_shift(cx.in, full);
            if (good) {
                if (static_cast<int>(cx.out.chains.size()) >= cx.max_out) {
                    cx.out.complete = false;
                } else {
                    std::vector<EdgeId> mapped;
                    for (int s : cx.cur) mapped.push_back(cx.in.ids[s]);
                    cx.out.chains.push_back(std::move(mapped));
                }
            }
        } else if (steps_used < cx.max_steps && st->qverts.size() >= 2) {
            apply_shift(cx.in, st->slots, undo);
            Vertex nu = st->qverts[st->qverts.size() - 2];
            Vertex nv = st->qverts.back();
            Colour nk2 = st->last_colour;
            Colour nk1 = (st->pa == nk2) ? st->pb : st->pa;
            recurse(cx, steps_used + 1, nu, nv, nk1, nk2, false);
            undo_shift(cx.in, undo);
        }
        cx.cur.resize(base);
        if (!cx.out.complete) return;
    }
}

}  // namespace

ChainList enumerate_chains(const RawGraph& g, EdgeId e, int max_steps, int max_len,
                           int max_out) {
    EnumCtx cx;
    cx.in = build_inst(g);
    cx.max_steps = max_steps;
    cx.max_len = max_len;
    cx.max_out = max_out;
    int slot = -1;
    for (std::size_t s = 0; s < cx.in.ids.size(); ++s)
        if (cx.in.ids[s] == e) slot = static_cast<int>(s);
    if (slot < 0 || cx.in.col[slot] != 0)
        throw std::invalid_argument("enumerate_chains: edge missing or coloured");
    auto [u, v] = cx.in.ends[slot];
    recurse(cx, 1, std::min(u, v), std::max(u, v), 0, 0, true);
    return std::move(cx.out);
}

ChainList enumerate_chains(const Graph& g, EdgeId e, int max_steps, int max_len, int max_out) {
    return enumerate_chains(RawGraph::from(g), e, max_steps, max_len, max_out);
}

// ---------------------------------------------- process replay / rebuild

namespace {

// Colour-blind 2-hop ball over all edges (blank included).
std::vector<char> ball2(const Inst& in, const std::vector<Vertex>& srcs) {
    std::vector<int> dist(in.n, -1);
    std::vector<Vertex> queue;
    for (Vertex s : srcs)
        if (dist[s] < 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    for (std::size_t h = 0; h < queue.size(); ++h) {
        Vertex v = queue[h];
        if (dist[v] == 2) continue;
        for (int s : in.inc[v]) {
            Vertex to = in.other(s, v);
            if (dist[to] < 0) {
                dist[to] = dist[v] + 1;
                queue.push_back(to);
            }
        }
    }
    std::vector<char> b(in.n, 0);
    for (int v = 0; v < in.n; ++v) b[v] = dist[v] >= 0;
    return b;
}

std::vector<Vertex> norm_path(std::vector<Vertex> p) {
    if (!p.empty() && p.back() < p.front()) std::reverse(p.begin(), p.end());
    return p;
}

Colour pair_other(Colour c, Colour x, Colour y) { return c == x ? y : x; }

// One resolved step of a process.
struct PStep {
    std::vector<Vertex> verts;
    std::vector<int> slots;
    std::vector<Vertex> qnorm;  // normalized full maximal path
    Vertex centre = -1;
};

// Resolves a string against `wk` (mutated along the way: each non-final step
// swaps its path edges and blanks its jump edge). No fan checks; a final path
// must exhaust its maximal path. Returns nothing on any mismatch.
std::optional<std::vector<PStep>> odecode(Inst& wk, const ProcessString& s) {
    std::vector<PStep> out;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const PathChar& c = s[j];
        const bool last = j + 1 == s.size();
        if (c.trivial()) {
            if (!last || c.len != 1 || c.cb != 0) return std::nullopt;
            out.push_back({{c.start}, {}, {c.start}, -1});
            continue;
        }
        OWalk w = owalk(wk, c.start, c.ca, c.cb);
        const long long tp = static_cast<long long>(w.verts.size());
        if (c.len < 2 || c.len > tp) return std::nullopt;
        if (last != (c.len == tp)) return std::nullopt;
        PStep st;
        st.verts.assign(w.verts.begin(), w.verts.begin() + c.len);
        st.slots.assign(w.slots.begin(), w.slots.begin() + (c.len - 1));
        st.qnorm = norm_path(w.verts);
        out.push_back(std::move(st));
        if (!last) {
            for (long long i = 0; i + 1 < c.len; ++i)
                wk.col[w.slots[i]] = pair_other(wk.col[w.slots[i]], c.ca, c.cb);
            wk.col[w.slots[c.len - 1]] = 0;
            const Vertex centre = w.verts[c.len - 1];
            bool adj = false;
            for (int sl : wk.inc[centre]) adj = adj || wk.other(sl, centre) == s[j + 1].start;
            if (!adj) return std::nullopt;  // next step must start on a fan leaf
        }
    }
    return out;
}

}  // namespace

Verdict replay_process(const RawGraph& g, Vertex w, Vertex y, Colour ka, Colour kb,
                       const ProcessString& s) {
    auto fail = [&](std::string d) {
        Verdict v;
        v.pass = false;
        v.detail = std::move(d);
        v.vertex = w;
        return v;
    };
    if (s.empty()) return fail("empty process string");
    if (ka > kb) std::swap(ka, kb);
    if (w < 0 || w >= g.n || y < 0 || y >= g.n) return fail("vertex out of range");
    if (ka < 1 || kb > g.k || ka == kb) return fail("bad colour pair");
    Inst in = build_inst(g);
    bool adj = false;
    for (int sl : in.inc[y]) adj = adj || in.other(sl, y) == w;
    if (!adj) return fail("w is not a graph neighbour of y");

    Inst wk = in;
    std::vector<PStep> steps;
    Vertex centre = w, front = -1;
    Colour fk1 = 0, fk2 = 0;

    for (std::size_t j = 0; j < s.size(); ++j) {
        const PathChar& c = s[j];
        const bool last = j + 1 == s.size();
        Colour pa = 0, pb = 0;
        Vertex expect_start = -1;
        bool fan_done = false;  // fan settled on a common free colour
        if (c.trivial() && (c.len != 1 || c.cb != 0)) return fail("malformed trivial path");

        if (j == 0) {
            expect_start = y;
            if (c.trivial()) {
                if (wk.slot_at(y, ka) >= 0 || wk.slot_at(y, kb) >= 0)
                    return fail("trivial first path at a vertex with pair edges");
                fan_done = true;
            } else {
                if (std::min(c.ca, c.cb) != ka || std::max(c.ca, c.cb) != kb)
                    return fail("first path pair differs from the key pair");
                if (wk.slot_at(y, c.cb) >= 0)
                    return fail("first path start is not a maximal-path endpoint");
                pa = c.ca;
                pb = c.cb;
            }
        } else {
            OFan f = ofan(wk, centre, front, true, fk2);
            if (f.stop == 0) {
                expect_start = f.leaves.back();
                fan_done = true;
            } else if (f.stop == 1) {
                for (Colour cc = 1; cc <= wk.k && pa == 0; ++cc)
                    if (cc != fk1 && cc != fk2 && wk.free_at(centre, cc)) pa = cc;
                if (pa == 0) return fail("no continuation colour at an inner centre");
                pb = f.reps.back();
                expect_start = f.leaves.back();
            } else {
                pa = fk1;
                pb = fk2;
                expect_start = f.leaves.back();
            }
        }

        if (c.start != expect_start) return fail("step path starts at the wrong vertex");
        if (fan_done) {
            if (!c.trivial() || !last)
                return fail("fan settles on a common free colour; expected a trivial final step");
            steps.push_back({{c.start}, {}, {c.start}, centre});
            continue;
        }
        if (c.trivial()) {
            // Legitimate only when the extension walk itself is single-vertex.
            if (!last) return fail("trivial path before the final step");
            if (wk.slot_at(c.start, pa) >= 0)
                return fail("trivial step where the extension has a path");
            steps.push_back({{c.start}, {}, {c.start}, centre});
            continue;
        }
        if (c.ca != pa || c.cb != pb) return fail("step path pair differs from the extension pair");
        OWalk walk = owalk(wk, c.start, pa, pb);
        const long long tp = static_cast<long long>(walk.verts.size());
        if (c.len < 2 || c.len > tp) return fail("path length does not fit its maximal path");
        if (last && c.len != tp) return fail("final path does not exhaust its maximal path");
        if (!last && c.len == tp) return fail("non-final path exhausts its maximal path");
        PStep st;
        st.verts.assign(walk.verts.begin(), walk.verts.begin() + c.len);
        st.slots.assign(walk.slots.begin(), walk.slots.begin() + (c.len - 1));
        st.qnorm = norm_path(walk.verts);
        st.centre = centre;
        steps.push_back(std::move(st));
        if (!last) {
            const int jump = walk.slots[c.len - 1];
            fk2 = wk.col[jump];
            fk1 = pair_other(fk2, pa, pb);
            for (long long i = 0; i + 1 < c.len; ++i)
                wk.col[walk.slots[i]] = pair_other(wk.col[walk.slots[i]], pa, pb);
            wk.col[jump] = 0;
            centre = walk.verts[c.len - 1];
            front = walk.verts[c.len];
        }
    }

    // Separation rules, judged colour-blind on the original graph.
    const int m = static_cast<int>(steps.size());
    std::vector<std::vector<char>> inpath(m);
    for (int j = 0; j < m; ++j) {
        inpath[j].assign(g.n, 0);
        for (Vertex v : steps[j].verts) inpath[j][v] = 1;
    }
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < j; ++k) {
            bool meet = false;
            for (Vertex v : steps[k].verts) meet = meet || inpath[j][v];
            if (meet && j != k + 1)
                return fail("paths of non-consecutive steps share a vertex");
        }
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < j; ++k)
            for (int sa : steps[j].slots)
                for (int sb : steps[k].slots)
                    if (sa == sb) return fail("two step paths share an edge");
    std::vector<std::vector<char>> cball(m);
    for (int j = 0; j < m; ++j) cball[j] = ball2(in, {steps[j].centre});
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
            bool meet = false;
            for (Vertex v : steps[k].verts) meet = meet || cball[j][v];
            if (meet) return fail("a later path enters the 2-hop ball of an earlier centre");
        }
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            if (j != k && steps[j].qnorm == steps[k].qnorm)
                return fail("two steps lie on the same maximal path");
    for (int j = 1; j < m; ++j) {
        std::vector<Vertex> prefix;
        for (int k = 0; k < j; ++k) prefix.push_back(steps[k].centre);
        for (int k = 0; k + 1 < j; ++k)
            for (Vertex v : steps[k].verts) prefix.push_back(v);
        std::vector<char> b = ball2(in, prefix);
        if (b[steps[j].centre]) return fail("a centre sits in the 2-hop ball of the prefix");
    }
    return {};
}

Verdict replay_process(const Graph& g, Vertex w, Vertex y, Colour ka, Colour kb,
                       const ProcessString& s) {
    return replay_process(RawGraph::from(g), w, y, ka, kb, s);
}

namespace {

struct OPairPath {
    Colour ka, kb;
    std::vector<Vertex> seq;
};

// Maximal (a,b)-paths with more than `ell` vertices, each walked once from
// one endpoint.
std::vector<OPairPath> long_paths(const Inst& in, long long ell) {
    std::vector<OPairPath> out;
    for (Colour a = 1; a <= in.k; ++a)
        for (Colour b = a + 1; b <= in.k; ++b) {
            std::vector<char> seen(in.n, 0);
            for (Vertex v = 0; v < in.n; ++v) {
                if (seen[v]) continue;
                const int sa = in.slot_at(v, a), sb = in.slot_at(v, b);
                if ((sa >= 0) == (sb >= 0)) continue;  // isolated, interior or cycle
                const Colour first = sa >= 0 ? a : b;
                OWalk w = owalk(in, v, first, pair_other(first, a, b));
                for (Vertex x : w.verts) seen[x] = 1;
                if (static_cast<long long>(w.verts.size()) > ell)
                    out.push_back({a, b, std::move(w.verts)});
            }
        }
    return out;
}

struct RebuildCtx {
    const Inst* in = nullptr;
    long long ell = 0, a = 0;
    int levels = 0;
    SpreadTable table;
};

// Level set under the current colouring: single-vertex and short maximal
// paths yield their one full-path string at every level; long paths are empty
// at level 1 and read from the table above it.
std::vector<ProcessString> ctx_level_set(const RebuildCtx& cx, int level, Vertex y, Colour ka,
                                         Colour kb, Vertex w) {
    const Inst& in = *cx.in;
    const int sa = in.slot_at(y, ka), sb = in.slot_at(y, kb);
    if (sa >= 0 && sb >= 0) return {};
    if (sa < 0 && sb < 0) return {ProcessString{PathChar{0, 0, y, 1}}};
    const Colour ca = sa >= 0 ? ka : kb;
    OWalk wk = owalk(in, y, ca, pair_other(ca, ka, kb));
    const long long tp = static_cast<long long>(wk.verts.size());
    if (tp <= cx.ell) return {ProcessString{PathChar{ca, pair_other(ca, ka, kb), y, tp}}};
    if (level <= 1) return {};
    auto it = cx.table.find({level, y, ka, kb, w});
    return it == cx.table.end() ? std::vector<ProcessString>{} : it->second;
}

// Violation level of a decoded candidate against the new prefix (0 = clean).
int classify_candidate(const std::vector<PStep>& dec, const std::vector<char>& p1flag,
                       const std::unordered_set<int>& p1slots, const std::vector<Vertex>& q1norm,
                       const std::vector<char>& ballw, const std::vector<char>& ball12) {
    for (Vertex v : dec[0].verts)
        if (ballw[v]) return 1;
    if (dec.size() >= 2) {
        if (ball12[dec[0].verts.back()]) return 2;
        for (Vertex v : dec[1].verts)
            if (ball12[v]) return 2;
    }
    for (const PStep& st : dec)
        for (int s : st.slots)
            if (p1slots.count(s)) return 3;
    for (const PStep& st : dec)
        if (st.qnorm == q1norm) return 3;
    for (std::size_t j = 1; j < dec.size(); ++j)
        for (Vertex v : dec[j].verts)
            if (p1flag[v]) return 3;
    for (std::size_t j = 2; j < dec.size(); ++j) {
        if (ball12[dec[j - 1].verts.back()]) return 3;
        for (Vertex v : dec[j].verts)
            if (ball12[v]) return 3;
    }
    return 0;
}

// Contribution of extension point seq[pos-1], or nothing when the point is
// unusable or blocked.
std::optional<std::vector<ProcessString>> point_contribution(
    const RebuildCtx& cx, int level, const std::vector<Vertex>& seq,
    const std::vector<int>& seqslots, Colour ka, Colour kb, long long pos, Vertex w,
    const std::vector<char>& ballw, const std::vector<Vertex>& q1norm) {
    const Inst& in = *cx.in;
    const Vertex x = seq[pos - 1];
    if (ballw[x]) return std::nullopt;

    Inst wk = in;
    const int jump = seqslots[pos - 1];
    const Colour k2 = wk.col[jump];
    const Colour k1 = pair_other(k2, ka, kb);
    for (long long i = 0; i + 1 < pos; ++i)
        wk.col[seqslots[i]] = pair_other(wk.col[seqslots[i]], ka, kb);
    wk.col[jump] = 0;

    OFan f = ofan(wk, x, seq[pos], true, k2);
    const Vertex y2 = f.leaves.back();
    const bool immediate = f.stop == 0;
    Colour pa = 0, pb = 0;
    long long t2 = 1;
    std::vector<ProcessString> source;
    if (immediate) {
        source = {ProcessString{PathChar{0, 0, y2, 1}}};
    } else {
        if (f.stop == 1) {
            for (Colour c = 1; c <= in.k && pa == 0; ++c)
                if (c != k1 && c != k2 && wk.free_at(x, c)) pa = c;
            if (pa == 0) return std::nullopt;
            pb = f.reps.back();
        } else {
            pa = k1;
            pb = k2;
        }
        t2 = static_cast<long long>(owalk(wk, y2, pa, pb).verts.size());
        source = ctx_level_set(cx, level - 1, y2, std::min(pa, pb), std::max(pa, pb), x);
    }
    if (source.empty()) return std::nullopt;

    std::vector<char> p1flag(in.n, 0);
    std::vector<Vertex> srcs = {w};
    for (long long i = 0; i < pos; ++i) {
        p1flag[seq[i]] = 1;
        srcs.push_back(seq[i]);
    }
    std::unordered_set<int> p1slots(seqslots.begin(), seqslots.begin() + (pos - 1));
    const std::vector<char> ball12 = ball2(in, srcs);

    std::vector<ProcessString> clean;
    long long n1 = 0, n2 = 0, n3 = 0;
    for (const ProcessString& s : source) {
        if (s.empty()) continue;
        if (s[0].trivial()) {
            if (!(immediate || t2 == 1) || s.size() != 1) continue;
        } else {
            if (immediate || s[0].start != y2 || s[0].ca != pa || s[0].cb != pb) continue;
            if (s.size() == 1 ? s[0].len != t2 : s[0].len + 1 > t2 - 2) continue;
        }
        Inst dk = in;
        auto dec = odecode(dk, s);
        if (!dec) continue;
        switch (classify_candidate(*dec, p1flag, p1slots, q1norm, ballw, ball12)) {
            case 0: clean.push_back(s); break;
            case 1: ++n1; break;
            case 2: ++n2; break;
            default: ++n3; break;
        }
    }
    if (n1 >= 1 || 8 * n2 >= cx.a || 32 * n3 >= cx.a * cx.a) return std::nullopt;
    if (source.size() == 1)
        return clean.size() == 1 ? std::optional(clean) : std::nullopt;

    std::sort(clean.begin(), clean.end(), string_less);
    const long long need = (cx.a + 3) / 4;
    std::vector<ProcessString> picked;
    for (const ProcessString& s : clean) {
        bool dup = false;
        for (const ProcessString& t : picked) dup = dup || t[0] == s[0];
        if (!dup) picked.push_back(s);
        if (static_cast<long long>(picked.size()) == need) break;
    }
    if (static_cast<long long>(picked.size()) < need) return std::nullopt;
    return picked;
}

std::vector<ProcessString> rebuild_key(const RebuildCtx& cx, int level,
                                       const std::vector<Vertex>& seq, Colour ka, Colour kb,
                                       Vertex w) {
    const Inst& in = *cx.in;
    const long long tp = static_cast<long long>(seq.size());
    std::vector<int> seqslots(tp - 1, -1);
    for (long long i = 0; i + 1 < tp; ++i)
        for (int s : in.inc[seq[i]])
            if (in.other(s, seq[i]) == seq[i + 1] && in.col[s] != 0) seqslots[i] = s;
    const std::vector<char> ballw = ball2(in, {w});
    const std::vector<Vertex> q1norm = norm_path(seq);
    const Colour ca1 = in.col[seqslots[0]];
    const long long need_pts = (cx.a + 1) / 2;
    const long long hi = std::min(cx.ell, tp - 3);

    std::vector<std::pair<long long, std::vector<ProcessString>>> pts;
    for (long long pos = 3; pos <= hi && static_cast<long long>(pts.size()) < need_pts; ++pos) {
        auto c = point_contribution(cx, level, seq, seqslots, ka, kb, pos, w, ballw, q1norm);
        if (c) pts.emplace_back(pos, std::move(*c));
    }
    if (static_cast<long long>(pts.size()) < need_pts) return {};

    std::vector<ProcessString> out;
    for (const auto& [pos, strs] : pts) {
        const PathChar p1{ca1, pair_other(ca1, ka, kb), seq[0], pos};
        for (const ProcessString& s : strs) {
            ProcessString full{p1};
            full.insert(full.end(), s.begin(), s.end());
            out.push_back(std::move(full));
        }
    }
    return out;
}

}  // namespace

SpreadTable rebuild_spread(const RawGraph& g, long long ell, long long a, int levels) {
    if (ell < 1 || a < 2) throw std::invalid_argument("rebuild_spread: bad parameters");
    Inst in = build_inst(g);
    RebuildCtx cx;
    cx.in = &in;
    cx.ell = ell;
    cx.a = a;
    cx.levels = levels;
    const auto longs = long_paths(in, ell);
    for (int lvl = 2; lvl <= levels; ++lvl)
        for (const auto& p : longs)
            for (int side = 0; side < 2; ++side) {
                std::vector<Vertex> seq = p.seq;
                if (side) std::reverse(seq.begin(), seq.end());
                std::vector<Vertex> nb;
                for (int s : in.inc[seq[0]]) nb.push_back(in.other(s, seq[0]));
                std::sort(nb.begin(), nb.end());
                for (Vertex w : nb) {
                    auto set = rebuild_key(cx, lvl, seq, p.ka, p.kb, w);
                    if (!set.empty()) cx.table[{lvl, seq[0], p.ka, p.kb, w}] = std::move(set);
                }
            }
    return std::move(cx.table);
}

SpreadTable rebuild_spread(const Graph& g, long long ell, long long a, int levels) {
    return rebuild_spread(RawGraph::from(g), ell, a, levels);
}

// --------------------------------------------- rebuild_splitter_invariant

Verdict rebuild_splitter_invariant(const RawGraph& g, long long dmax, long long eta,
                                   const Rational& eps) {
    Verdict bad;
    bad.pass = false;
    const long long t = g.k;
    if (t < 1 || dmax < 1 || g.n < 0) {
        bad.detail = "malformed splitting parameters";
        return bad;
    }
    std::vector<long long> deg(static_cast<std::size_t>(g.n) * t, 0);
    std::vector<long long> total(static_cast<std::size_t>(g.n), 0);
    for (const auto& rec : g.edges) {
        EdgeId id = rec[0];
        Vertex u = rec[1], v = rec[2];
        Colour c = rec[3];
        bad.edge_a = id;
        if (u < 0 || u >= g.n || v < 0 || v >= g.n) {
            bad.detail = "endpoint out of range";
            bad.vertex = (u < 0 || u >= g.n) ? u : v;
            return bad;
        }
        if (u == v) {
            bad.detail = "self-loop";
            bad.vertex = u;
            return bad;
        }
        if (c < 1 || c > t) {
            bad.detail = "class outside the palette";
            bad.colour = c;
            return bad;
        }
        ++deg[static_cast<std::size_t>(u) * t + c - 1];
        ++deg[static_cast<std::size_t>(v) * t + c - 1];
        ++total[u];
        ++total[v];
    }
    bad.edge_a = kNoEdge;
    for (Vertex v = 0; v < g.n; ++v)
        if (total[v] > dmax) {
            bad.detail = "degree cap exceeded";
            bad.vertex = v;
            return bad;
        }
    auto surplus = [&](Vertex w, Colour c) {
        long long s = t * deg[static_cast<std::size_t>(w) * t + c - 1] - dmax;
        return s > 0 ? s : 0;
    };
    for (const auto& rec : g.edges) {
        Vertex u = rec[1], v = rec[2];
        Colour c = rec[3];
        const long long worn = surplus(u, c) + surplus(v, c);
        for (Colour i = 1; i <= t; ++i)
            if (worn > t * eta + surplus(u, i) + surplus(v, i)) {
                bad.detail = "worn class carries more than eta over another class";
                bad.edge_a = rec[0];
                bad.colour = i;
                return bad;
            }
    }
    const Rational cap = (Rational(1) + eps) * Rational(dmax);
    for (Vertex v = 0; v < g.n; ++v)
        for (Colour c = 1; c <= t; ++c)
            if (cap < Rational(t * deg[static_cast<std::size_t>(v) * t + c - 1])) {
                bad.detail = "class degree above (1+eps)*dmax/t";
                bad.vertex = v;
                bad.colour = c;
                return bad;
            }
    return {};
}

Verdict rebuild_splitter_invariant(const TSplitter& sp) {
    RawGraph raw;
    raw.n = sp.vertex_count();
    raw.k = sp.colours();
    for (EdgeId e = 0; e < sp.edge_slots(); ++e)
        if (sp.alive(e)) {
            auto [u, v] = sp.endpoints(e);
            raw.edges.push_back({e, u, v, sp.colour_of(e)});
        }
    return rebuild_splitter_invariant(raw, sp.config().dmax, sp.eta(),
                                      rational_from_double(sp.config().eps));
}

// --------------------------------------------- rebuild_hierarchy_invariant

Verdict rebuild_hierarchy_invariant(const SplitterHierarchy& hy, bool check_degree_caps) {
    Verdict bad;
    bad.pass = false;
    const HierarchyParams& par = hy.params();
    const int h = par.h;

    std::vector<EdgeId> live;
    for (EdgeId e = 0; e < hy.edge_slots(); ++e)
        if (hy.alive(e)) live.push_back(e);
    if (static_cast<int>(live.size()) != hy.edge_count()) {
        bad.detail = "edge count disagrees with the live slots";
        return bad;
    }

    std::vector<long long> deg0(static_cast<std::size_t>(hy.vertex_count()), 0);
    for (EdgeId e : live) {
        auto [u, v] = hy.endpoints(e);
        ++deg0[u];
        ++deg0[v];
    }
    for (Vertex v = 0; v < hy.vertex_count(); ++v)
        if (deg0[v] != hy.degree(v)) {
            bad.detail = "stored degree differs from the recount";
            bad.vertex = v;
            return bad;
        }

    // Per edge: full profile, and every level splitter holds the edge under
    // the recorded colour with the same endpoints.
    std::map<std::vector<Colour>, std::vector<EdgeId>> members;  // prefix (len < h)
    std::map<std::vector<Colour>, std::vector<EdgeId>> groups;   // full profile
    for (EdgeId e : live) {
        bad.edge_a = e;
        const std::vector<Colour>& chi = hy.profile(e);
        if (static_cast<int>(chi.size()) != h) {
            bad.detail = "profile length differs from the depth";
            return bad;
        }
        for (int lvl = 0; lvl < h; ++lvl) {
            if (chi[lvl] < 1 || chi[lvl] > par.t[lvl]) {
                bad.detail = "profile colour outside the level palette";
                bad.colour = chi[lvl];
                return bad;
            }
            std::vector<Colour> prefix(chi.begin(), chi.begin() + lvl);
            const TSplitter* sp = hy.node_at(prefix);
            if (sp == nullptr) {
                bad.detail = "missing splitter along a live profile";
                return bad;
            }
            EdgeId loc = hy.local_id(e, lvl);
            if (loc == kNoEdge || loc >= sp->edge_slots() || !sp->alive(loc)) {
                bad.detail = "edge missing from its level splitter";
                return bad;
            }
            if (sp->colour_of(loc) != chi[lvl]) {
                bad.detail = "splitter colour differs from the profile";
                bad.colour = sp->colour_of(loc);
                return bad;
            }
            if (std::minmax(sp->endpoints(loc).first, sp->endpoints(loc).second) !=
                std::minmax(hy.endpoints(e).first, hy.endpoints(e).second)) {
                bad.detail = "splitter endpoints differ from the public edge";
                return bad;
            }
            members[prefix].push_back(e);
        }
        groups[chi].push_back(e);
    }
    bad.edge_a = kNoEdge;

    // Node inventory: exactly the prefixes with live edges, counts matching,
    // every splitter internally clean.
    auto nodes = hy.nodes();
    if (nodes.size() != members.size()) {
        bad.detail = nodes.size() > members.size() ? "splitter node without live edges"
                                                   : "live prefix without a splitter node";
        return bad;
    }
    for (const auto& [prefix, sp] : nodes) {
        auto it = members.find(prefix);
        if (it == members.end()) {
            bad.detail = "splitter node without live edges";
            return bad;
        }
        if (sp->edge_count() != static_cast<int>(it->second.size())) {
            bad.detail = "splitter edge count differs from the public grouping";
            return bad;
        }
        if (!sp->check_invariant().empty()) {
            bad.detail = "a level splitter violates its surplus invariant";
            return bad;
        }
        if (!sp->audit_estimates().ok) {
            bad.detail = "a level splitter fails its estimate audit";
            return bad;
        }
    }

    // Leaf partition must equal the grouping by full profile, ids ascending,
    // and stay within the arity product.
    auto part = hy.leaf_partition();
    if (part.size() != groups.size()) {
        bad.detail = "leaf partition size differs from the profile grouping";
        return bad;
    }
    for (const auto& lf : part) {
        auto it = groups.find(lf.index);
        if (it == groups.end()) {
            bad.detail = "leaf partition lists an unknown index";
            return bad;
        }
        std::vector<EdgeId> want = it->second;
        std::sort(want.begin(), want.end());
        if (lf.edges != want) {
            bad.detail = "leaf membership differs from the profile grouping";
            return bad;
        }
    }
    BigInt leaf_cap = 1;
    for (int i = 0; i < par.i1; ++i) leaf_cap *= par.t1;
    for (int i = 0; i < par.i2; ++i) leaf_cap *= par.t2;
    if (BigInt(static_cast<long long>(part.size())) > leaf_cap) {
        bad.detail = "more leaves than the arity product allows";
        return bad;
    }

    if (check_degree_caps) {
        for (int lvl = 0; lvl <= h; ++lvl) {
            std::map<std::pair<std::vector<Colour>, Vertex>, long long> deg;
            for (EdgeId e : live) {
                const std::vector<Colour>& chi = hy.profile(e);
                std::vector<Colour> prefix(chi.begin(), chi.begin() + lvl);
                auto [u, v] = hy.endpoints(e);
                ++deg[{prefix, u}];
                ++deg[{prefix, v}];
            }
            for (const auto& [key, d] : deg)
                if (d > par.dhat[lvl]) {
                    bad.detail = "level degree above its cap";
                    bad.vertex = key.second;
                    return bad;
                }
        }
    }
    return {};
}

}  // namespace ec
