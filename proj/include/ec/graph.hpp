#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ec {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;
using Colour = std::int32_t;

inline constexpr Colour kBlank = 0;
inline constexpr EdgeId kNoEdge = -1;

struct SetColourResult {
    bool ok = true;
    EdgeId conflict = kNoEdge;  // an edge already carrying the colour at a shared endpoint
};

// Simple graph on a fixed vertex set with a proper partial edge colouring over
// palette {1..k}. Edge ids are stable and never reused. Colour 0 means blank.
class Graph {
  public:
    Graph(int n, Colour k);

    int vertex_count() const { return n_; }
    Colour palette() const { return k_; }
    int edge_count() const { return alive_count_; }
    int edge_slots() const { return static_cast<int>(edges_.size()); }
    int coloured_count() const { return coloured_count_; }

    // Rejects self-loops and duplicates of alive edges.
    EdgeId add_edge(Vertex u, Vertex v);
    // Skips the duplicate scan (callers that mirror an already-validated graph).
    EdgeId add_edge_unchecked(Vertex u, Vertex v);
    // The edge must currently be blank.
    void remove_edge(EdgeId e);

    bool alive(EdgeId e) const { return e >= 0 && e < edge_slots() && edges_[e].colour >= 0; }
    std::pair<Vertex, Vertex> endpoints(EdgeId e) const;
    Vertex other_end(EdgeId e, Vertex v) const;
    Colour colour_of(EdgeId e) const;
    bool has_edge(Vertex u, Vertex v) const { return find_edge(u, v) != kNoEdge; }
    EdgeId find_edge(Vertex u, Vertex v) const;

    // The edge must be blank and c in [1..k]; on conflict nothing changes and
    // the offending edge is reported.
    SetColourResult set_colour(EdgeId e, Colour c);
    void clear_colour(EdgeId e);

    int degree(Vertex v) const { return degree_[v]; }
    int max_degree() const { return max_degree_; }

    EdgeId edge_with_colour(Vertex v, Colour c) const;
    bool colour_free(Vertex v, Colour c) const;
    // Smallest free colour at v, or 0 if the palette is exhausted.
    Colour min_free(Vertex v) const;
    // Smallest colour free at both endpoints, or 0.
    Colour min_common_free(Vertex u, Vertex v) const;
    // All free colours at v in increasing order.
    std::vector<Colour> free_colours(Vertex v) const;

    const std::vector<EdgeId>& incident(Vertex v) const { return incident_[v]; }

    template <class F>
    void for_each_edge(F&& f) const {
        for (EdgeId e = 0; e < edge_slots(); ++e)
            if (edges_[e].colour >= 0) f(e, edges_[e].u, edges_[e].v, edges_[e].colour);
    }

  private:
    struct EdgeRec {
        Vertex u = -1;
        Vertex v = -1;
        Colour colour = -1;  // -1 = dead slot, 0 = blank, >0 = colour
        std::int32_t pos_u = -1;
        std::int32_t pos_v = -1;
    };

    EdgeId attach(Vertex u, Vertex v);
    void check_vertex(Vertex v) const;
    void bump_degree(Vertex v, int delta);

    std::size_t words() const { return static_cast<std::size_t>((k_ + 64) / 64); }
    std::uint64_t* used_row(Vertex v) { return used_.data() + static_cast<std::size_t>(v) * words(); }
    const std::uint64_t* used_row(Vertex v) const {
        return used_.data() + static_cast<std::size_t>(v) * words();
    }

    int n_;
    Colour k_;
    int alive_count_ = 0;
    int coloured_count_ = 0;
    int max_degree_ = 0;
    std::vector<EdgeRec> edges_;
    std::vector<std::vector<EdgeId>> incident_;
    std::vector<EdgeId> by_colour_;        // n * (k+1) flat: vertex x colour -> edge
    std::vector<std::uint64_t> used_;      // n * words() bitset of occupied colours
    std::vector<int> degree_;
    std::vector<int> degree_hist_;
};

}  // namespace ec
