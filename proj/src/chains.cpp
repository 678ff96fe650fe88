#include "ec/chains.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ec {

namespace {
constexpr std::size_t kNoLeaf = static_cast<std::size_t>(-1);
}

// ---------------------------------------------------------------- ColourView

Colour ColourView::colour(EdgeId e) const {
    auto it = over_.find(e);
    return it != over_.end() ? it->second : g_->colour_of(e);
}

EdgeId ColourView::edge_with_colour(Vertex v, Colour c) const {
    auto it = slot_.find(key(v, c));
    return it != slot_.end() ? it->second : g_->edge_with_colour(v, c);
}

bool ColourView::colour_free(Vertex v, Colour c) const { return edge_with_colour(v, c) == kNoEdge; }

Colour ColourView::min_free(Vertex v) const {
    if (!touched_.count(v)) return g_->min_free(v);
    for (Colour c = 1; c <= g_->palette(); ++c)
        if (colour_free(v, c)) return c;
    return 0;
}

Colour ColourView::min_common_free(Vertex u, Vertex v) const {
    if (!touched_.count(u) && !touched_.count(v)) return g_->min_common_free(u, v);
    for (Colour c = 1; c <= g_->palette(); ++c)
        if (colour_free(u, c) && colour_free(v, c)) return c;
    return 0;
}

std::vector<Colour> ColourView::free_colours(Vertex v) const {
    if (!touched_.count(v)) return g_->free_colours(v);
    std::vector<Colour> out;
    for (Colour c = 1; c <= g_->palette(); ++c)
        if (colour_free(v, c)) out.push_back(c);
    return out;
}

void ColourView::override_colour(EdgeId e, Colour c) {
    Colour old = colour(e);
    if (old == c) return;
    auto [u, v] = g_->endpoints(e);
    over_[e] = c;
    touched_.insert(u);
    touched_.insert(v);
    for (Vertex x : {u, v}) {
        if (old != kBlank) {
            // e stopped wearing `old` at x; repoint the slot at any remaining
            // wearer, since mid-shift states can briefly double a colour up
            EdgeId keep = kNoEdge;
            for (EdgeId e2 : g_->incident(x))
                if (e2 != e && colour(e2) == old) {
                    keep = e2;
                    break;
                }
            slot_[key(x, old)] = keep;
        }
        if (c != kBlank) slot_[key(x, c)] = e;
    }
}

// ---------------------------------------------------------------------- walk

Walk walk_with_edges(const ColourView& view, Vertex v, Colour c1, Colour c2, long long limit) {
    assert(c1 != kBlank && c2 != kBlank && c1 != c2);
    Walk w;
    w.verts.push_back(v);
    Vertex cur = v;
    Colour next = c1;
    while (limit <= 0 || static_cast<long long>(w.verts.size()) < limit) {
        EdgeId e = view.edge_with_colour(cur, next);
        if (e == kNoEdge) break;
        Vertex nx = view.graph().other_end(e, cur);
        if (nx == v) break;  // closed an alternating cycle
        w.verts.push_back(nx);
        w.edges.push_back(e);
        cur = nx;
        next = (next == c1) ? c2 : c1;
    }
    return w;
}

std::vector<Vertex> maximal_path_walk(const ColourView& view, Vertex v, Colour c1, Colour c2,
                                      long long limit) {
    return walk_with_edges(view, v, c1, c2, limit).verts;
}

// ----------------------------------------------------------------------- fan

namespace {

Fan grow_fan(const ColourView& view, Vertex u, Vertex v, bool second, Colour k2) {
    const Graph& g = view.graph();
    Fan f;
    f.centre = u;
    EdgeId e0 = g.find_edge(u, v);
    assert(e0 != kNoEdge && view.colour(e0) == kBlank);
    f.leaves.push_back(v);
    f.edges.push_back(e0);
    const int guard = g.degree(u) + 2;
    for (int iter = 0; iter < guard; ++iter) {
        Vertex wj = f.leaves.back();
        if (Colour cf = view.min_common_free(u, wj); cf != 0) {
            f.reps.push_back(cf);
            f.stop = FanStop::common_free;
            return f;
        }
        Colour rep = 0;
        for (Colour r : f.reps)
            if (view.colour_free(wj, r)) {
                rep = r;
                break;
            }
        if (rep != 0) {
            f.reps.push_back(rep);
            f.stop = FanStop::repeated;
            return f;
        }
        Colour cand = 0;
        for (Colour c : view.free_colours(wj))
            if (!second || c != k2) {
                cand = c;
                break;
            }
        if (cand == 0) {
            assert(second);
            f.reps.push_back(k2);
            f.stop = FanStop::second_blocked;
            return f;
        }
        EdgeId nxt = view.edge_with_colour(u, cand);
        assert(nxt != kNoEdge);  // cand occupied at u, else it were common-free
        f.reps.push_back(cand);
        f.leaves.push_back(g.other_end(nxt, u));
        f.edges.push_back(nxt);
    }
    throw std::logic_error("fan construction did not terminate");
}

std::size_t leaf_index(const Fan& f, Vertex x) {
    for (std::size_t i = 0; i < f.leaves.size(); ++i)
        if (f.leaves[i] == x) return i;
    return kNoLeaf;
}

void truncate_fan_at(Fan& f, std::size_t pos) {
    assert(pos < f.leaves.size());
    f.leaves.resize(pos + 1);
    f.edges.resize(pos + 1);
    f.reps.resize(pos + 1);
}

// Path part covering the first `count` walk vertices in walk order.
StepChain make_forward(const ColourView& view, Fan fan, const Walk& w, std::size_t count,
                       Colour pa, Colour pb, bool augmenting) {
    assert(count >= 2 && count <= w.verts.size());
    StepChain s;
    s.fan = std::move(fan);
    assert(w.verts.front() == s.fan.leaves.back());
    s.q.assign(w.verts.begin(), w.verts.begin() + count);
    s.qedges.push_back(s.fan.edges.back());
    s.qedges.insert(s.qedges.end(), w.edges.begin(), w.edges.begin() + (count - 1));
    s.augmenting = augmenting;
    s.pair_a = pa;
    s.pair_b = pb;
    s.last_edge_colour = view.colour(s.qedges.back());
    assert(s.last_edge_colour == pa || s.last_edge_colour == pb);
    return s;
}

// Path part covering walk vertices [lo..hi] in reverse order; the fan must
// already be truncated so its last leaf is w.verts[hi].
StepChain make_reversed(const ColourView& view, Fan fan, const Walk& w, std::size_t lo,
                        std::size_t hi, Colour pa, Colour pb, bool augmenting) {
    assert(lo <= hi && hi < w.verts.size());
    StepChain s;
    s.fan = std::move(fan);
    assert(w.verts[hi] == s.fan.leaves.back());
    for (std::size_t i = hi + 1; i-- > lo;) s.q.push_back(w.verts[i]);
    s.qedges.push_back(s.fan.edges.back());
    for (std::size_t i = hi; i-- > lo;) s.qedges.push_back(w.edges[i]);
    s.augmenting = augmenting;
    s.pair_a = pa;
    s.pair_b = pb;
    s.last_edge_colour = s.qedges.size() >= 2 ? view.colour(s.qedges.back()) : 0;
    assert(s.qedges.size() < 2 || s.last_edge_colour == pa || s.last_edge_colour == pb);
    return s;
}

StepChain make_trivial(Fan fan) {
    StepChain s;
    s.fan = std::move(fan);
    s.q = {s.fan.leaves.back()};
    s.qedges = {s.fan.edges.back()};
    s.augmenting = true;
    return s;
}

}  // namespace

Fan build_primary_fan(const ColourView& view, Vertex u, Vertex v) {
    return grow_fan(view, u, v, false, 0);
}

Fan build_second_fan(const ColourView& view, Vertex u, Vertex v, Colour k1, Colour k2) {
    assert(k1 != k2 && view.colour_free(u, k1) && view.colour_free(v, k2));
    (void)k1;
    return grow_fan(view, u, v, true, k2);
}

// ---------------------------------------------------------------- first step

StepChain build_first_step(const ColourView& view, Vertex u, Vertex v, long long cover) {
    assert(cover >= 2);
    Fan fan = build_primary_fan(view, u, v);
    if (fan.stop == FanStop::common_free) return make_trivial(std::move(fan));
    assert(fan.stop == FanStop::repeated);

    const Colour k1 = view.min_free(u);
    const Colour k2 = fan.reps.back();
    assert(k1 != 0 && k1 != k2);
    Walk w = walk_with_edges(view, fan.leaves.back(), k1, k2);
    const std::size_t tp = w.verts.size();
    assert(tp >= 2);
    const Vertex back = w.verts.back();

    if (cover >= static_cast<long long>(tp)) {
        if (back == u) {
            // path returns to the centre through a fan leaf: reverse from there
            std::size_t pos = leaf_index(fan, w.verts[tp - 2]);
            assert(pos != kNoLeaf && pos + 1 < fan.leaves.size());
            truncate_fan_at(fan, pos);
            return make_reversed(view, std::move(fan), w, 0, tp - 2, k1, k2, true);
        }
        if (std::size_t pos = leaf_index(fan, back); pos != kNoLeaf) {
            // path ends on an earlier fan leaf: reverse the whole walk
            assert(pos + 1 < fan.leaves.size());
            truncate_fan_at(fan, pos);
            return make_reversed(view, std::move(fan), w, 0, tp - 1, k1, k2, true);
        }
        return make_forward(view, std::move(fan), w, tp, k1, k2, true);
    }
    if (cover == static_cast<long long>(tp) - 1 && back == u) {
        // one short of the returning path: reverse but stop before the start
        std::size_t pos = leaf_index(fan, w.verts[tp - 2]);
        assert(pos != kNoLeaf && pos + 1 < fan.leaves.size());
        truncate_fan_at(fan, pos);
        return make_reversed(view, std::move(fan), w, 1, tp - 2, k1, k2, false);
    }
    return make_forward(view, std::move(fan), w, static_cast<std::size_t>(cover), k1, k2, false);
}

// ---------------------------------------------------------------- later step

ExtensionProbe probe_extension(const ColourView& view, Vertex u2, Vertex v2, Colour k1,
                               Colour k2) {
    ExtensionProbe pr;
    pr.fan = build_second_fan(view, u2, v2, k1, k2);
    pr.start = pr.fan.leaves.back();
    if (pr.fan.stop == FanStop::common_free) {
        pr.ok = pr.immediate = true;
        return pr;
    }
    if (pr.fan.stop == FanStop::repeated) {
        Colour t1 = 0;
        for (Colour c : view.free_colours(u2))
            if (c != k1 && c != k2) {
                t1 = c;
                break;
            }
        if (t1 == 0) return pr;  // palette too tight for a fresh pair colour
        pr.pa = t1;
        pr.pb = pr.fan.reps.back();
    } else {
        pr.pa = k1;
        pr.pb = k2;
    }
    pr.ok = true;
    pr.walk = walk_with_edges(view, pr.start, pr.pa, pr.pb);
    return pr;
}

std::optional<StepChain> build_next_step(const ColourView& view, Vertex u2, Vertex v2, Colour k1,
                                         Colour k2, long long cover) {
    assert(cover >= 2);
    ExtensionProbe pr = probe_extension(view, u2, v2, k1, k2);
    if (!pr.ok) return std::nullopt;
    if (pr.immediate) return make_trivial(std::move(pr.fan));

    Fan fan = std::move(pr.fan);
    const Walk& w = pr.walk;
    const std::size_t tp = w.verts.size();
    assert(tp >= 2);
    const Vertex back = w.verts.back();
    const bool plain = cover < static_cast<long long>(tp) - 1;

    if (fan.stop == FanStop::repeated && back == u2) {
        // walk returns to the centre through the leaf holding its second colour
        std::size_t pos = leaf_index(fan, w.verts[tp - 2]);
        assert(pos != kNoLeaf && pos + 1 < fan.leaves.size());
        if (cover >= static_cast<long long>(tp)) {
            truncate_fan_at(fan, pos);
            return make_reversed(view, std::move(fan), w, 0, tp - 2, pr.pa, pr.pb, true);
        }
        if (cover == static_cast<long long>(tp) - 1) {
            truncate_fan_at(fan, pos);
            return make_reversed(view, std::move(fan), w, 1, tp - 2, pr.pa, pr.pb, false);
        }
        return make_forward(view, std::move(fan), w, static_cast<std::size_t>(cover), pr.pa,
                            pr.pb, false);
    }
    if (fan.stop == FanStop::repeated) {
        if (std::size_t pos = leaf_index(fan, back); pos != kNoLeaf && !plain) {
            // walk ends on an earlier fan leaf: reverse the whole walk
            assert(pos + 1 < fan.leaves.size());
            truncate_fan_at(fan, pos);
            return make_reversed(view, std::move(fan), w, 0, tp - 1, pr.pa, pr.pb, true);
        }
    }
    if (plain)
        return make_forward(view, std::move(fan), w, static_cast<std::size_t>(cover), pr.pa,
                            pr.pb, false);
    return make_forward(view, std::move(fan), w, tp, pr.pa, pr.pb, true);
}

// ------------------------------------------------------------ shift plumbing

bool simulate_step_shift(ColourView& view, const StepChain& step) {
    assert(!step.qedges.empty() && step.fan.edges.back() == step.qedges.front());
    std::vector<EdgeId> edges = step.fan.edges;
    edges.insert(edges.end(), step.qedges.begin() + 1, step.qedges.end());
    if (view.colour(edges.front()) != kBlank) return false;
    const Graph& g = view.graph();
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Colour c = view.colour(edges[i + 1]);
        if (c == kBlank) return false;
        view.override_colour(edges[i + 1], kBlank);
        auto [a, b] = g.endpoints(edges[i]);
        if (!view.colour_free(a, c) || !view.colour_free(b, c)) return false;
        view.override_colour(edges[i], c);
    }
    return true;
}

std::optional<Frontier> step_frontier(const StepChain& step) {
    if (step.augmenting || step.q.size() < 2) return std::nullopt;
    Frontier f;
    f.u2 = step.q[step.q.size() - 2];
    f.v2 = step.q.back();
    f.k2 = step.last_edge_colour;
    f.k1 = (step.pair_a == f.k2) ? step.pair_b : step.pair_a;
    assert(f.k2 == step.pair_a || f.k2 == step.pair_b);
    return f;
}

std::vector<EdgeId> VizingChain::flatten() const {
    std::vector<EdgeId> out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const StepChain& s = steps[i];
        std::size_t from = 0;
        if (i > 0) {
            assert(!out.empty() && s.fan.edges.front() == out.back());
            from = 1;  // the frontier edge is already the previous step's tail
        }
        out.insert(out.end(), s.fan.edges.begin() + from, s.fan.edges.end());
        out.insert(out.end(), s.qedges.begin() + 1, s.qedges.end());
    }
    return out;
}

ExtendResult extend_vizing(const Graph& g, const VizingChain& prefix, long long cover) {
    if (prefix.steps.empty()) throw std::invalid_argument("extend_vizing: empty prefix");
    if (prefix.augmenting()) return {ExtendStatus::already_augmenting, {}};
    ColourView view(g);
    for (const StepChain& s : prefix.steps)
        if (!simulate_step_shift(view, s)) return {ExtendStatus::prefix_not_shiftable, {}};
    auto fr = step_frontier(prefix.steps.back());
    if (!fr) return {ExtendStatus::dead_end, {}};
    if (!view.colour_free(fr->u2, fr->k1) || !view.colour_free(fr->v2, fr->k2))
        return {ExtendStatus::dead_end, {}};
    auto next = build_next_step(view, fr->u2, fr->v2, fr->k1, fr->k2, cover);
    if (!next) return {ExtendStatus::dead_end, {}};
    return {ExtendStatus::ok, std::move(*next)};
}

std::optional<VizingChain> find_augmenting_chain(const Graph& g, EdgeId e, int max_steps,
                                                 long long ell) {
    if (g.colour_of(e) != kBlank) throw std::logic_error("find_augmenting_chain: coloured edge");
    assert(ell >= 1 && max_steps >= 1);
    auto [a, b] = g.endpoints(e);
    const long long cover = ell + 1;
    ColourView view(g);
    VizingChain ch;
    ch.steps.push_back(build_first_step(view, std::min(a, b), std::max(a, b), cover));
    while (!ch.steps.back().augmenting) {
        if (static_cast<int>(ch.steps.size()) >= max_steps) return std::nullopt;
        if (!simulate_step_shift(view, ch.steps.back())) return std::nullopt;
        auto fr = step_frontier(ch.steps.back());
        if (!fr) return std::nullopt;
        auto next = build_next_step(view, fr->u2, fr->v2, fr->k1, fr->k2, cover);
        if (!next) return std::nullopt;
        ch.steps.push_back(std::move(*next));
    }
    // confirm the final blank edge really picks up a colour once shifted
    if (!simulate_step_shift(view, ch.steps.back())) return std::nullopt;
    auto [x, y] = g.endpoints(ch.steps.back().qedges.back());
    if (view.min_common_free(x, y) == 0) return std::nullopt;
    return ch;
}

SetColourResult shift_pair(Graph& g, EdgeId from, EdgeId to) {
    Colour c = g.colour_of(to);
    g.clear_colour(to);
    SetColourResult r = g.set_colour(from, c);
    if (!r.ok) {
        SetColourResult undo = g.set_colour(to, c);
        assert(undo.ok);
        (void)undo;
    }
    return r;
}

ShiftOutcome shift_chain(Graph& g, const std::vector<EdgeId>& chain, int j) {
    assert(j >= 0 && j < static_cast<int>(chain.size()));
    ShiftOutcome out;
    for (int i = 0; i < j; ++i) {
        SetColourResult r{false, kNoEdge};
        if (g.colour_of(chain[i + 1]) != kBlank) r = shift_pair(g, chain[i], chain[i + 1]);
        if (!r.ok) {
            out.ok = false;
            out.failed_step = i;
            out.conflict = r.conflict;
            for (int h = i - 1; h >= 0; --h) {
                SetColourResult undo = shift_pair(g, chain[h + 1], chain[h]);
                assert(undo.ok);
                (void)undo;
            }
            return out;
        }
    }
    return out;
}

void vizing_colour_edge(Graph& g, EdgeId e) {
    auto [a, b] = g.endpoints(e);
    ColourView view(g);
    StepChain s = build_first_step(view, std::min(a, b), std::max(a, b), 1LL << 60);
    assert(s.augmenting);
    VizingChain ch;
    ch.steps.push_back(std::move(s));
    std::vector<EdgeId> edges = ch.flatten();
    ShiftOutcome sh = shift_chain(g, edges, static_cast<int>(edges.size()) - 1);
    assert(sh.ok);
    (void)sh;
    auto [x, y] = g.endpoints(edges.back());
    Colour c = g.min_common_free(x, y);
    assert(c != 0);
    SetColourResult r = g.set_colour(edges.back(), c);
    assert(r.ok);
    (void)r;
}

}  // namespace ec
