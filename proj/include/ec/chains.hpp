#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ec/graph.hpp"

namespace ec {

// Read-only colouring view with a small set of edge-colour overrides, used to
// evaluate fans and walks on "what the colouring will look like" mid-chain
// without mutating the graph.
class ColourView {
  public:
    explicit ColourView(const Graph& g) : g_(&g) {}

    const Graph& graph() const { return *g_; }
    Colour colour(EdgeId e) const;
    EdgeId edge_with_colour(Vertex v, Colour c) const;
    bool colour_free(Vertex v, Colour c) const;
    Colour min_free(Vertex v) const;
    Colour min_common_free(Vertex u, Vertex v) const;
    std::vector<Colour> free_colours(Vertex v) const;  // increasing
    void override_colour(EdgeId e, Colour c);          // c may be blank
    bool clean() const { return over_.empty(); }

  private:
    const Graph* g_;
    std::unordered_map<EdgeId, Colour> over_;
    std::unordered_map<std::uint64_t, EdgeId> slot_;  // (v,colour) -> edge (kNoEdge = freed)
    std::unordered_set<Vertex> touched_;

    std::uint64_t key(Vertex v, Colour c) const {
        return (static_cast<std::uint64_t>(v) << 32) | static_cast<std::uint32_t>(c);
    }
};

struct Walk {
    std::vector<Vertex> verts;
    std::vector<EdgeId> edges;
};

// Alternating-colour walk: starts at v, first edge coloured c1, then c2, c1...
// Returns the visited vertices (starting with v); [v] alone when v has no c1
// edge. Truncates after `limit` vertices when limit > 0. Walking around a
// cycle stops upon returning to v (start listed once).
Walk walk_with_edges(const ColourView& view, Vertex v, Colour c1, Colour c2, long long limit = 0);
std::vector<Vertex> maximal_path_walk(const ColourView& view, Vertex v, Colour c1, Colour c2,
                                      long long limit = 0);

enum class FanStop {
    common_free,     // last rep is free at centre and leaf
    repeated,        // last rep equals an earlier rep
    second_blocked,  // second-fan rule ran out of candidates; last rep = k2
};

struct Fan {
    Vertex centre = -1;
    std::vector<Vertex> leaves;  // w_1.. (w_1 = far endpoint of the starting edge)
    std::vector<EdgeId> edges;   // centre-w_1.. (first one blank)
    std::vector<Colour> reps;    // rep chosen at each leaf
    FanStop stop = FanStop::common_free;
};

// Fan growth from blank edge (u,v) with centre u; the second variant excludes
// k2 from step-candidates and may stop by settling on k2.
Fan build_primary_fan(const ColourView& view, Vertex u, Vertex v);
Fan build_second_fan(const ColourView& view, Vertex u, Vertex v, Colour k1, Colour k2);

// One realised step of a multi-step chain: a (possibly truncated) fan plus a
// path part. q holds the path vertices after the centre; qedges[0] is the
// pivot (the fan's last edge) and qedges[i] joins q[i-1],q[i].
struct StepChain {
    Fan fan;
    std::vector<Vertex> q;
    std::vector<EdgeId> qedges;
    bool augmenting = false;
    Colour pair_a = 0, pair_b = 0;  // path pair colours (0,0 when trivial)
    Colour last_edge_colour = 0;    // pre-shift colour of the final path edge (0 when trivial)
};

struct VizingChain {
    std::vector<StepChain> steps;
    bool augmenting() const { return !steps.empty() && steps.back().augmenting; }
    std::vector<EdgeId> flatten() const;
};

// Everything the second-fan extension derives before committing to a budget:
// the fan, the walk pair, and the full walk from the fan's last leaf.
struct ExtensionProbe {
    bool ok = false;         // false: no viable continuation here
    bool immediate = false;  // fan stopped on a common free colour (trivial augmenting step)
    Fan fan;
    Colour pa = 0, pb = 0;  // walk pair; pa is the first-edge colour at `start`
    Vertex start = -1;      // the fan's last leaf
    Walk walk;              // full maximal walk from start under the view
};
ExtensionProbe probe_extension(const ColourView& view, Vertex u2, Vertex v2, Colour k1, Colour k2);

// Builds the first step for blank edge (u,v) with centre u under `view`,
// covering at most `cover` path vertices (use a huge cover for the full walk).
StepChain build_first_step(const ColourView& view, Vertex u, Vertex v, long long cover);

// Builds a later step at the blank frontier (u2,v2) where k1 is free at u2 and
// k2 at v2 (the pre-shift colours around the frontier edge). Empty when no
// continuation exists (candidate colours exhausted).
std::optional<StepChain> build_next_step(const ColourView& view, Vertex u2, Vertex v2, Colour k1,
                                         Colour k2, long long cover);

// Applies a step's shift to the overlay (no graph mutation). Returns false if
// some edge is not shiftable under the view (stale chain).
bool simulate_step_shift(ColourView& view, const StepChain& step);

// Blank frontier after shifting a non-augmenting step; empty for augmenting
// or degenerate (single-vertex path) steps.
struct Frontier {
    Vertex u2, v2;
    Colour k1, k2;
};
std::optional<Frontier> step_frontier(const StepChain& step);

enum class ExtendStatus { ok, prefix_not_shiftable, already_augmenting, dead_end };
struct ExtendResult {
    ExtendStatus status;
    StepChain step;  // valid when status == ok
};

// Simulates `prefix` (which must be non-empty), then builds one more step
// covering at most `cover` path vertices.
ExtendResult extend_vizing(const Graph& g, const VizingChain& prefix, long long cover);

// Greedy multi-step search: every step covers at most ell+1 path vertices;
// gives up after max_steps non-augmenting steps.
std::optional<VizingChain> find_augmenting_chain(const Graph& g, EdgeId e, int max_steps,
                                                 long long ell);

// Moves the colour of `to` onto `from` (which must be blank); `to` goes blank.
SetColourResult shift_pair(Graph& g, EdgeId from, EdgeId to);

struct ShiftOutcome {
    bool ok = true;
    int failed_step = -1;
    EdgeId conflict = kNoEdge;
};
// Shifts the first j pairs of the chain (j = edges-1 shifts the whole chain);
// rolls everything back and reports the failing step on a properness clash.
ShiftOutcome shift_chain(Graph& g, const std::vector<EdgeId>& chain, int j);

// Insert-time recolouring: build an augmenting chain for blank edge e (fan at
// the smaller-id endpoint, unbounded cover), shift it, colour the final edge.
void vizing_colour_edge(Graph& g, EdgeId e);

}  // namespace ec
