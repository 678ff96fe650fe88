#include "ec/tsplitter.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <stdexcept>

#include "ec/params.hpp"

namespace ec {

TSplitter::TSplitter(const SplitterConfig& cfg) : cfg_(cfg) {
    if (cfg_.n < 1) throw std::invalid_argument("splitter needs at least one vertex");
    if (cfg_.t < 1) throw std::invalid_argument("splitter needs at least one colour");
    if (cfg_.dmax < 1) throw std::invalid_argument("splitter needs a positive degree cap");
    if (!(cfg_.eps > 0.0 && cfg_.eps < 1.0))
        throw std::invalid_argument("splitter needs eps in (0,1)");
    if (cfg_.eta_override) {
        eta_ = *cfg_.eta_override;
    } else {
        eta_ = eta_value(rational_from_double(cfg_.eps), cfg_.dmax, cfg_.t, cfg_.n)
                   .convert_to<long long>();
    }
    if (eta_ < 1)
        throw std::invalid_argument("derived eta is zero; this configuration needs an override");
    stride_ = cfg_.stride_override ? *cfg_.stride_override
                                   : stride_value(cfg_.dmax, BigInt(eta_)).convert_to<long long>();
    if (stride_ < 1) throw std::invalid_argument("stride must be positive");
    cap_ = (cfg_.dmax + cfg_.t - 1) / cfg_.t;
    const std::size_t cells = static_cast<std::size_t>(cfg_.n) * cfg_.t;
    deg_.assign(cells, 0);
    total_deg_.assign(cfg_.n, 0);
    rings_.assign(cells, {});
    msd_.assign(cells, {});
}

void TSplitter::check_vertex(Vertex v) const {
    if (v < 0 || v >= cfg_.n) throw std::out_of_range("vertex outside the splitter");
}

bool TSplitter::alive(EdgeId e) const {
    return e >= 0 && e < edge_slots() && edges_[e].u >= 0;
}

std::pair<Vertex, Vertex> TSplitter::endpoints(EdgeId e) const {
    if (!alive(e)) throw std::out_of_range("dead edge");
    return {edges_[e].u, edges_[e].v};
}

Colour TSplitter::colour_of(EdgeId e) const {
    if (!alive(e)) throw std::out_of_range("dead edge");
    return edges_[e].c;
}

int TSplitter::degree(Vertex v) const {
    check_vertex(v);
    return total_deg_[v];
}

int TSplitter::colour_degree(Vertex v, Colour c) const {
    check_vertex(v);
    if (c < 1 || c > cfg_.t) throw std::out_of_range("colour outside the palette");
    return deg_[at(v, c)];
}

int TSplitter::max_colour_degree() const {
    int best = 0;
    for (int d : deg_) best = std::max(best, d);
    return best;
}

long long TSplitter::surplus_scaled(Vertex v, Colour c) const {
    long long s = static_cast<long long>(cfg_.t) * deg_[at(v, c)] - cfg_.dmax;
    return s > 0 ? s : 0;
}

long long TSplitter::potential() const {
    long long phi = 0;
    for (Vertex v = 0; v < cfg_.n; ++v)
        for (Colour c = 1; c <= cfg_.t; ++c) {
            long long f = deg_[at(v, c)] - cap_;
            if (f > 0) phi += f * (f + 1) / 2;
        }
    return phi;
}

std::vector<TSplitter::Violation> TSplitter::check_invariant() const {
    std::vector<Violation> out;
    for (EdgeId e = 0; e < edge_slots(); ++e) {
        if (!alive(e)) continue;
        const EdgeRec& r = edges_[e];
        const long long worn = surplus_scaled(r.u, r.c) + surplus_scaled(r.v, r.c);
        for (Colour c = 1; c <= cfg_.t; ++c)
            if (worn > static_cast<long long>(cfg_.t) * eta_ + surplus_scaled(r.u, c) +
                           surplus_scaled(r.v, c))
                out.push_back({e, c});
    }
    return out;
}

std::pair<std::vector<EdgeId>, int> TSplitter::ring(Vertex v, Colour c) const {
    check_vertex(v);
    if (c < 1 || c > cfg_.t) throw std::out_of_range("colour outside the palette");
    const Ring& rg = rings_[at(v, c)];
    return {rg.order, rg.cursor};
}

void TSplitter::ring_insert(Vertex w, Colour c, EdgeId e) {
    Ring& rg = rings_[at(w, c)];
    rg.order.insert(rg.order.begin() + rg.cursor, e);
    // Keep pointing at the incumbent: the fresh edge sits just before the
    // cursor and is refreshed last. An empty ring restarts at position 0.
    if (rg.order.size() > 1) ++rg.cursor;
}

void TSplitter::ring_remove(Vertex w, Colour c, EdgeId e) {
    Ring& rg = rings_[at(w, c)];
    auto it = std::find(rg.order.begin(), rg.order.end(), e);
    assert(it != rg.order.end());
    const int p = static_cast<int>(it - rg.order.begin());
    rg.order.erase(it);
    if (p < rg.cursor) --rg.cursor;
    if (rg.cursor >= static_cast<int>(rg.order.size())) rg.cursor = 0;
}

void TSplitter::refresh_estimates(EdgeId e) {
    EdgeRec& r = edges_[e];
    if (r.estc != kBlank)
        for (Colour c = 1; c <= cfg_.t; ++c) {
            const long long diff = r.est[r.estc - 1] - r.est[c - 1];
            msd_[at(r.u, c)].erase({diff, e});
            msd_[at(r.v, c)].erase({diff, e});
        }
    r.sums.clear();
    for (Colour c = 1; c <= cfg_.t; ++c) {
        r.est[c - 1] = surplus_scaled(r.u, c) + surplus_scaled(r.v, c);
        r.sums.insert({r.est[c - 1], c});
    }
    r.estc = r.c;
    if (r.estc != kBlank)
        for (Colour c = 1; c <= cfg_.t; ++c) {
            const long long diff = r.est[r.estc - 1] - r.est[c - 1];
            msd_[at(r.u, c)].insert({diff, e});
            msd_[at(r.v, c)].insert({diff, e});
        }
    ++counters_.refreshes;
}

void TSplitter::round_robin(Vertex u, Vertex v) {
    for (Vertex w : {u, v})
        for (Colour c = 1; c <= cfg_.t; ++c) {
            Ring& rg = rings_[at(w, c)];
            const long long d = static_cast<long long>(rg.order.size());
            if (d == 0) continue;
            // Refreshing is idempotent within one pass, so capping the sweep
            // at d covers exactly the entries the full stride would touch.
            const long long steps = std::min<long long>(stride_, d);
            for (long long j = 0; j < steps; ++j)
                refresh_estimates(rg.order[(rg.cursor + j) % d]);
            rg.cursor = static_cast<int>((rg.cursor + stride_) % d);
        }
}

void TSplitter::push_violations(Vertex u, Vertex v) {
    for (Vertex w : {u, v})
        for (Colour c = 1; c <= cfg_.t; ++c) {
            const Msd& m = msd_[at(w, c)];
            if (m.empty()) continue;
            if (2 * m.rbegin()->first > static_cast<long long>(cfg_.t) * eta_ &&
                queued_.insert({w, c}).second)
                queue_.push_back({w, c});
        }
}

void TSplitter::recolour(EdgeId e, std::vector<Recolour>& log) {
    EdgeRec& r = edges_[e];
    const Colour from = r.c;
    const Colour to = r.sums.begin()->second;
    const long long phi0 = phi_;
    long long gain = 0;
    if (from != kBlank) {
        // Estimates always track the live colour, so a violating edge never
        // extracts the colour it already wears.
        assert(to != from);
        gain = surplus_scaled(r.u, from) + surplus_scaled(r.v, from) -
               (surplus_scaled(r.u, to) + surplus_scaled(r.v, to));
        for (Vertex w : {r.u, r.v}) {
            phi_ -= floor_surplus(w, from);
            --deg_[at(w, from)];
            ring_remove(w, from, e);
        }
    }
    r.c = to;
    for (Vertex w : {r.u, r.v}) {
        ++deg_[at(w, to)];
        phi_ += floor_surplus(w, to);
        ring_insert(w, to, e);
    }
    refresh_estimates(e);
    round_robin(r.u, r.v);
    push_violations(r.u, r.v);
    if (from != kBlank) {
        ++counters_.recolourings;
        log.push_back({e, from, to, gain, phi0, phi_});
    }
}

void TSplitter::drain(std::vector<Recolour>& log) {
    while (!queue_.empty()) {
        const auto [w, c] = queue_.front();
        queue_.pop_front();
        queued_.erase({w, c});
        ++counters_.queue_pops;
        const Msd& m = msd_[at(w, c)];
        if (m.empty() || 2 * m.rbegin()->first <= static_cast<long long>(cfg_.t) * eta_)
            continue;
        recolour(m.rbegin()->second, log);
    }
}

TSplitter::InsertResult TSplitter::insert(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loop");
    if (total_deg_[u] + 1 > cfg_.dmax || total_deg_[v] + 1 > cfg_.dmax)
        throw std::invalid_argument("insertion would breach the degree cap");
    const EdgeId e = static_cast<EdgeId>(edges_.size());
    EdgeRec r;
    r.u = u;
    r.v = v;
    r.est.assign(cfg_.t, 0);
    edges_.push_back(std::move(r));
    ++total_deg_[u];
    ++total_deg_[v];
    ++alive_;
    ++counters_.inserts;
    refresh_estimates(e);  // blank edge: seeds the per-colour sums only
    InsertResult res;
    res.id = e;
    recolour(e, res.log);
    drain(res.log);
    res.colour = edges_[e].c;
    return res;
}

std::vector<Recolour> TSplitter::erase(EdgeId e) {
    if (!alive(e)) throw std::invalid_argument("erasing a dead edge");
    EdgeRec& r = edges_[e];
    const Vertex u = r.u;
    const Vertex v = r.v;
    const Colour worn = r.c;
    assert(worn != kBlank);
    if (r.estc != kBlank)
        for (Colour c = 1; c <= cfg_.t; ++c) {
            const long long diff = r.est[r.estc - 1] - r.est[c - 1];
            msd_[at(u, c)].erase({diff, e});
            msd_[at(v, c)].erase({diff, e});
        }
    for (Vertex w : {u, v}) {
        phi_ -= floor_surplus(w, worn);
        --deg_[at(w, worn)];
        ring_remove(w, worn, e);
        --total_deg_[w];
    }
    r.u = -1;
    r.v = -1;
    r.c = kBlank;
    r.estc = kBlank;
    r.est.clear();
    r.sums.clear();
    --alive_;
    ++counters_.erases;
    round_robin(u, v);
    std::vector<Recolour> log;
    push_violations(u, v);
    drain(log);
    return log;
}

TSplitter::EstimateAudit TSplitter::audit_estimates() const {
    EstimateAudit a;
    std::vector<int> deg(deg_.size(), 0);
    std::vector<int> total(total_deg_.size(), 0);
    for (EdgeId e = 0; e < edge_slots(); ++e) {
        if (!alive(e)) continue;
        const EdgeRec& r = edges_[e];
        for (Vertex w : {r.u, r.v}) {
            ++deg[at(w, r.c)];
            ++total[w];
        }
        if (r.c == kBlank || r.estc != r.c ||
            r.est.size() != static_cast<std::size_t>(cfg_.t)) {
            a.structures_ok = false;
            continue;
        }
        for (Colour c = 1; c <= cfg_.t; ++c) {
            const long long truth = surplus_scaled(r.u, c) + surplus_scaled(r.v, c);
            const long long sum_err = std::abs(r.est[c - 1] - truth);
            if (sum_err > a.worst_sum_err) {
                a.worst_sum_err = sum_err;
                a.worst_edge = e;
            }
            const long long row = r.est[r.estc - 1] - r.est[c - 1];
            const long long true_row = surplus_scaled(r.u, r.c) + surplus_scaled(r.v, r.c) -
                                       (surplus_scaled(r.u, c) + surplus_scaled(r.v, c));
            const long long diff_err = std::abs(row - true_row);
            if (diff_err > a.worst_diff_err) {
                a.worst_diff_err = diff_err;
                a.worst_edge = e;
            }
            if (!r.sums.count({r.est[c - 1], c})) a.structures_ok = false;
            if (!msd_[at(r.u, c)].count({row, e}) || !msd_[at(r.v, c)].count({row, e}))
                a.mirror_ok = false;
        }
    }
    if (deg != deg_ || total != total_deg_) a.structures_ok = false;
    for (Vertex v = 0; v < cfg_.n; ++v)
        for (Colour c = 1; c <= cfg_.t; ++c) {
            const Ring& rg = rings_[at(v, c)];
            if (static_cast<int>(rg.order.size()) != deg_[at(v, c)]) a.structures_ok = false;
            if (rg.cursor < 0 ||
                (rg.cursor != 0 && rg.cursor >= static_cast<int>(rg.order.size())))
                a.structures_ok = false;
            if (msd_[at(v, c)].size() != static_cast<std::size_t>(total_deg_[v]))
                a.structures_ok = false;
        }
    a.phi_ok = phi_ == potential();
    a.ok = 16 * a.worst_sum_err <= static_cast<long long>(cfg_.t) * eta_ &&
           8 * a.worst_diff_err <= static_cast<long long>(cfg_.t) * eta_ && a.mirror_ok &&
           a.structures_ok && a.phi_ok;
    return a;
}

}  // namespace ec
