#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ec/graph.hpp"

namespace ec {

// Maintains, for every unordered pair of colours, the components of the
// subgraph formed by edges wearing those two colours.  Each component is a
// path or an even cycle.  Paths are stored as explicit vertex sequences;
// cycles are stored as the underlying path plus one parked "slot" edge that
// closes it.  On top of the components sits a layered digraph:
//
//   X1  one node per maximal two-coloured path (cycles have no X1 node;
//       vertices isolated for a pair count as implicit length-0 paths),
//   X2  one node per graph vertex,
//   Y1  (vertex -> path) when the vertex is an endpoint of the path,
//   Y2  (vertex -> vertex) in both directions for every coloured edge,
//   Y3  (path -> vertex) when the vertex lies within distance ell-1 of one
//       of the path's endpoints.
//
// Y2 and Y3 are derived on demand from the component store; only the
// components themselves are materialized.  Recolouring operations return a
// report of which maximal paths vanished and which appeared, with their
// endpoints, for consumers that maintain data keyed on path structure.

struct PathRef {
    std::int64_t id = -1;  // -1 marks an implicit length-0 path
    Colour ka = 0, kb = 0;  // ka < kb
    std::array<Vertex, 2> ends{-1, -1};
    long long length = 0;  // edge count
    bool cycle = false;
};

struct ChangeReport {
    std::vector<PathRef> removed;  // endpoint data as of just before the change
    std::vector<PathRef> added;
};

struct CanonComp {
    Colour ka = 0, kb = 0;
    bool cycle = false;
    std::vector<Vertex> seq;

    bool operator==(const CanonComp&) const = default;
    bool operator<(const CanonComp& o) const {
        if (ka != o.ka) return ka < o.ka;
        if (kb != o.kb) return kb < o.kb;
        if (cycle != o.cycle) return cycle < o.cycle;
        return seq < o.seq;
    }
};

class BicompSkeleton {
  public:
    // Builds the component store from the graph's current colouring.
    // `ell` fixes the Y3 radius; changing it means building a new skeleton.
    BicompSkeleton(Graph& g, long long ell);

    Graph& graph() { return *g_; }
    const Graph& graph() const { return *g_; }
    long long ell() const { return ell_; }

    // Applies the colour to the graph (edge must be blank, colour free at
    // both endpoints) and restructures every affected pair.  Throws on a
    // violated precondition.  The report covers all colour pairs.
    ChangeReport bcs_colour(EdgeId e, Colour k);

    // Clears the edge's colour (edge must be coloured) and restructures.
    ChangeReport bcs_uncolour(EdgeId e);

    // Vertices of the maximal path/cycle through v whose first step leaves v
    // along a k1-coloured edge, truncated to `limit` vertices when limit > 0.
    // Answered from the stored sequence; the graph is consulted only to
    // orient the first step.
    std::vector<Vertex> maximal_path_walk(Vertex v, Colour k1, Colour k2,
                                          long long limit = 0) const;

    // Component of v for the pair {a, b}; implicit length-0 ref when v has
    // no edge wearing either colour.
    PathRef path_of(Vertex v, Colour a, Colour b) const;

    // True when the Y1 edge (v -> component of v) exists for this pair,
    // i.e. v is an endpoint of a stored path or isolated for the pair.
    bool is_endpoint(Vertex v, Colour a, Colour b) const;

    // Stored paths covering v within distance ell-1 of one of their
    // endpoints (incoming Y3 edges; implicit length-0 paths not listed).
    std::vector<PathRef> y3_in(Vertex v) const;

    // Coloured neighbours of v (outgoing Y2 edges).
    std::vector<Vertex> y2_out(Vertex v) const;

    // Up to `count` vertices of a stored component starting from the given
    // endpoint and moving inward.
    std::vector<Vertex> near_end(std::int64_t comp_id, Vertex end,
                                 long long count) const;

    PathRef by_id(std::int64_t comp_id) const;
    std::vector<PathRef> all_components() const;

    // Normalized live structure: paths oriented with the smaller endpoint
    // first; cycles rotation- and direction-normalized (slot excluded).
    std::vector<CanonComp> canonical_components() const;

    // Same normal form computed by scanning the graph from scratch.
    static std::vector<CanonComp> fresh_components(const Graph& g);

    // Structural self-check (sequence alternation, slot placement, index
    // consistency, endpoint degrees).  Empty string when sound.
    std::string validate() const;

  private:
    struct Comp {
        std::int64_t id = -1;
        Colour ka = 0, kb = 0;
        std::vector<Vertex> seq;  // >= 2 vertices
        bool cycle = false;
        EdgeId slot = kNoEdge;
    };

    using PairKey = std::uint32_t;
    static PairKey pair_key(Colour a, Colour b);
    static std::uint64_t where_key(Vertex v, PairKey p);

    const Comp* find_comp(Vertex v, PairKey p) const;
    Comp* find_comp(Vertex v, PairKey p);
    PathRef ref_of(const Comp& c) const;
    static PathRef iso_ref(Vertex v, Colour a, Colour b);

    std::int64_t register_comp(Colour ka, Colour kb, std::vector<Vertex> seq,
                               bool cycle, EdgeId slot);
    void unregister_comp(std::int64_t id);
    static void orient_back(std::vector<Vertex>& seq, Vertex v);

    void merge_pair(Colour ka, Colour kb, EdgeId e, Vertex u, Vertex v,
                    ChangeReport& rep);
    void split_pair(Colour ka, Colour kb, EdgeId e, Vertex u, Vertex v,
                    ChangeReport& rep);

    Graph* g_;
    long long ell_;
    std::int64_t next_id_ = 0;
    std::unordered_map<std::int64_t, Comp> comps_;
    std::unordered_map<std::uint64_t, std::int64_t> where_;
    std::unordered_map<Vertex, std::unordered_set<PairKey>> vpairs_;
};

}  // namespace ec
