#include "ec/graph.hpp"

#include <cassert>
#include <stdexcept>

namespace ec {

Graph::Graph(int n, Colour k) : n_(n), k_(k) {
    if (n < 0 || k < 1) throw std::invalid_argument("graph needs n >= 0 and k >= 1");
    incident_.resize(n_);
    by_colour_.assign(static_cast<std::size_t>(n_) * (k_ + 1), kNoEdge);
    used_.assign(static_cast<std::size_t>(n_) * words(), 0);
    degree_.assign(n_, 0);
    degree_hist_.assign(1, n_);  // all vertices at degree 0
}

void Graph::check_vertex(Vertex v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("vertex out of range");
}

void Graph::bump_degree(Vertex v, int delta) {
    int d = degree_[v];
    degree_hist_[d] -= 1;
    d += delta;
    degree_[v] = d;
    if (d >= static_cast<int>(degree_hist_.size())) degree_hist_.resize(d + 1, 0);
    degree_hist_[d] += 1;
    if (d > max_degree_) max_degree_ = d;
    while (max_degree_ > 0 && degree_hist_[max_degree_] == 0) --max_degree_;
}

EdgeId Graph::attach(Vertex u, Vertex v) {
    EdgeId e = static_cast<EdgeId>(edges_.size());
    EdgeRec rec;
    rec.u = u;
    rec.v = v;
    rec.colour = kBlank;
    rec.pos_u = static_cast<std::int32_t>(incident_[u].size());
    rec.pos_v = static_cast<std::int32_t>(incident_[v].size());
    incident_[u].push_back(e);
    incident_[v].push_back(e);
    edges_.push_back(rec);
    ++alive_count_;
    bump_degree(u, +1);
    bump_degree(v, +1);
    return e;
}

EdgeId Graph::add_edge(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loop rejected");
    if (has_edge(u, v)) throw std::invalid_argument("duplicate edge rejected");
    return attach(u, v);
}

EdgeId Graph::add_edge_unchecked(Vertex u, Vertex v) {
    assert(u != v && u >= 0 && v >= 0 && u < n_ && v < n_);
    return attach(u, v);
}

void Graph::remove_edge(EdgeId e) {
    if (!alive(e)) throw std::invalid_argument("removing dead edge");
    EdgeRec& rec = edges_[e];
    if (rec.colour != kBlank) throw std::logic_error("removing a coloured edge");
    auto detach = [&](Vertex x, std::int32_t pos) {
        auto& list = incident_[x];
        EdgeId last = list.back();
        list[pos] = last;
        if (edges_[last].u == x) edges_[last].pos_u = pos;
        if (edges_[last].v == x) edges_[last].pos_v = pos;
        list.pop_back();
    };
    detach(rec.u, rec.pos_u);
    detach(rec.v, rec.pos_v);
    bump_degree(rec.u, -1);
    bump_degree(rec.v, -1);
    rec.colour = -1;
    --alive_count_;
}

std::pair<Vertex, Vertex> Graph::endpoints(EdgeId e) const {
    assert(alive(e));
    return {edges_[e].u, edges_[e].v};
}

Vertex Graph::other_end(EdgeId e, Vertex v) const {
    assert(alive(e));
    const EdgeRec& rec = edges_[e];
    assert(rec.u == v || rec.v == v);
    return rec.u == v ? rec.v : rec.u;
}

Colour Graph::colour_of(EdgeId e) const {
    assert(alive(e));
    return edges_[e].colour;
}

EdgeId Graph::find_edge(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return kNoEdge;
    const Vertex base = degree_[u] <= degree_[v] ? u : v;
    const Vertex other = base == u ? v : u;
    for (EdgeId e : incident_[base])
        if (other_end(e, base) == other) return e;
    return kNoEdge;
}

SetColourResult Graph::set_colour(EdgeId e, Colour c) {
    if (!alive(e)) throw std::invalid_argument("colouring dead edge");
    if (c < 1 || c > k_) throw std::invalid_argument("colour outside palette");
    EdgeRec& rec = edges_[e];
    if (rec.colour != kBlank) throw std::logic_error("colouring a non-blank edge");
    if (EdgeId clash = edge_with_colour(rec.u, c); clash != kNoEdge) return {false, clash};
    if (EdgeId clash = edge_with_colour(rec.v, c); clash != kNoEdge) return {false, clash};
    rec.colour = c;
    for (Vertex x : {rec.u, rec.v}) {
        by_colour_[static_cast<std::size_t>(x) * (k_ + 1) + c] = e;
        used_row(x)[c >> 6] |= 1ull << (c & 63);
    }
    ++coloured_count_;
    return {};
}

void Graph::clear_colour(EdgeId e) {
    if (!alive(e)) throw std::invalid_argument("uncolouring dead edge");
    EdgeRec& rec = edges_[e];
    if (rec.colour == kBlank) throw std::logic_error("uncolouring a blank edge");
    Colour c = rec.colour;
    rec.colour = kBlank;
    for (Vertex x : {rec.u, rec.v}) {
        by_colour_[static_cast<std::size_t>(x) * (k_ + 1) + c] = kNoEdge;
        used_row(x)[c >> 6] &= ~(1ull << (c & 63));
    }
    --coloured_count_;
}

EdgeId Graph::edge_with_colour(Vertex v, Colour c) const {
    assert(v >= 0 && v < n_ && c >= 1 && c <= k_);
    return by_colour_[static_cast<std::size_t>(v) * (k_ + 1) + c];
}

bool Graph::colour_free(Vertex v, Colour c) const {
    assert(v >= 0 && v < n_ && c >= 1 && c <= k_);
    return (used_row(v)[c >> 6] & (1ull << (c & 63))) == 0;
}

Colour Graph::min_free(Vertex v) const {
    const std::uint64_t* row = used_row(v);
    const std::size_t w = words();
    for (std::size_t i = 0; i < w; ++i) {
        std::uint64_t free_bits = ~row[i];
        if (i == 0) free_bits &= ~1ull;  // bit 0 is the blank sentinel, not a colour
        while (free_bits) {
            int bit = __builtin_ctzll(free_bits);
            Colour c = static_cast<Colour>(i * 64 + bit);
            if (c > k_) return 0;
            return c;
        }
    }
    return 0;
}

Colour Graph::min_common_free(Vertex u, Vertex v) const {
    const std::uint64_t* ru = used_row(u);
    const std::uint64_t* rv = used_row(v);
    const std::size_t w = words();
    for (std::size_t i = 0; i < w; ++i) {
        std::uint64_t free_bits = ~(ru[i] | rv[i]);
        if (i == 0) free_bits &= ~1ull;
        while (free_bits) {
            int bit = __builtin_ctzll(free_bits);
            Colour c = static_cast<Colour>(i * 64 + bit);
            if (c > k_) return 0;
            return c;
        }
    }
    return 0;
}

std::vector<Colour> Graph::free_colours(Vertex v) const {
    std::vector<Colour> out;
    const std::uint64_t* row = used_row(v);
    for (Colour c = 1; c <= k_; ++c)
        if ((row[c >> 6] & (1ull << (c & 63))) == 0) out.push_back(c);
    return out;
}

}  // namespace ec
