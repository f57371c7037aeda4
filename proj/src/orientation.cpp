#include "flipdist/orientation.hpp"

#include <algorithm>
#include <string>

namespace flipdist {

Orientation::Orientation(const Embedding& emb, std::vector<uint8_t> towards_second)
    : emb_(&emb), dir_(std::move(towards_second)) {
    if (static_cast<int>(dir_.size()) != emb.edge_count())
        throw domain_error("orientation must assign a direction to every edge");
}

Orientation Orientation::from_directions(
    const Embedding& emb, const std::map<EdgeId, std::pair<VertexId, VertexId>>& dirs) {
    std::vector<uint8_t> bits(emb.edge_count(), 0);
    std::vector<char> seen(emb.edge_count(), 0);
    for (const auto& [e, dir] : dirs) {
        int idx = emb.edge_index(e);
        auto [u, v] = emb.ends(e);
        if (dir == std::make_pair(u, v)) bits[idx] = 0;
        else if (dir == std::make_pair(v, u)) bits[idx] = 1;
        else
            throw domain_error("direction of edge " + std::to_string(e) +
                               " does not match its endpoints");
        seen[idx] = 1;
    }
    for (int i = 0; i < emb.edge_count(); ++i)
        if (!seen[i])
            throw domain_error("orientation is missing edge " +
                               std::to_string(emb.edge_id(i)));
    return Orientation(emb, std::move(bits));
}

VertexId Orientation::tail(EdgeId e) const {
    int idx = emb_->edge_index(e);
    auto [u, v] = emb_->ends(e);
    return dir_[idx] ? v : u;
}

VertexId Orientation::head(EdgeId e) const {
    int idx = emb_->edge_index(e);
    auto [u, v] = emb_->ends(e);
    return dir_[idx] ? u : v;
}

HalfEdge Orientation::directed(EdgeId e) const { return HalfEdge{e, tail(e), head(e)}; }

bool Orientation::points_along(const HalfEdge& h) const {
    return tail(h.edge) == h.tail && head(h.edge) == h.head;
}

int Orientation::out_degree(VertexId v) const {
    int deg = 0;
    for (EdgeId e : emb_->rotation(v))
        if (tail(e) == v) ++deg;
    return deg;
}

std::vector<int> Orientation::out_degrees() const {
    std::vector<int> deg(emb_->vertex_count(), 0);
    for (int i = 0; i < emb_->edge_count(); ++i)
        deg[emb_->vertex_index(tail(emb_->edge_id(i)))]++;
    return deg;
}

Orientation Orientation::with_reversed(const std::vector<EdgeId>& edges) const {
    Orientation out = *this;
    for (EdgeId e : edges) out.dir_[emb_->edge_index(e)] ^= 1;
    return out;
}

uint64_t Orientation::bit_code() const {
    if (emb_->edge_count() > 64)
        throw domain_error("bit_code supports at most 64 edges");
    uint64_t code = 0;
    for (int i = 0; i < emb_->edge_count(); ++i)
        if (dir_[i]) code |= uint64_t{1} << i;
    return code;
}

bool Orientation::operator==(const Orientation& o) const {
    return emb_ == o.emb_ && dir_ == o.dir_;
}

int AlphaSpec::sum() const {
    int total = 0;
    for (const auto& [v, a] : out_degree) total += a;
    return total;
}

int AlphaSpec::at(VertexId v) const {
    auto it = out_degree.find(v);
    if (it == out_degree.end())
        throw domain_error("alpha does not cover vertex " + std::to_string(v));
    return it->second;
}

std::vector<uint8_t> EulerianDifference::direction_mask() const {
    std::vector<uint8_t> mask(embedding->edge_count(), 0);
    for (const HalfEdge& h : edges) {
        int idx = embedding->edge_index(h.edge);
        mask[idx] = embedding->ends(h.edge).first == h.tail ? 1 : 2;
    }
    return mask;
}

bool is_alpha_orientation(const Orientation& d, const AlphaSpec& alpha) {
    const Embedding& emb = d.embedding();
    if (static_cast<int>(alpha.out_degree.size()) != emb.vertex_count())
        throw domain_error("alpha and orientation cover different vertex sets");
    for (const auto& [v, a] : alpha.out_degree) {
        if (!emb.has_vertex(v))
            throw domain_error("alpha names unknown vertex " + std::to_string(v));
        if (d.out_degree(v) != a) return false;
    }
    return true;
}

namespace {

// One augmenting step of the edge->endpoint assignment search: give vertex v
// one more unit by moving some already-assigned edge to its other endpoint.
bool free_capacity(const Embedding& emb, VertexId v,
                   std::map<VertexId, std::vector<EdgeId>>& assigned,
                   std::map<VertexId, int>& used, const AlphaSpec& alpha,
                   std::vector<char>& visited_edge) {
    if (used[v] < alpha.at(v)) return true;
    for (size_t k = 0; k < assigned[v].size(); ++k) {
        EdgeId e = assigned[v][k];
        int eidx = emb.edge_index(e);
        if (visited_edge[eidx]) continue;
        visited_edge[eidx] = 1;
        auto [a, b] = emb.ends(e);
        VertexId other = (a == v) ? b : a;
        if (free_capacity(emb, other, assigned, used, alpha, visited_edge)) {
            assigned[v].erase(assigned[v].begin() + k);
            assigned[other].push_back(e);
            used[v]--;
            used[other]++;
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<Orientation> find_alpha_orientation(const Embedding& emb,
                                                  const AlphaSpec& alpha) {
    if (static_cast<int>(alpha.out_degree.size()) != emb.vertex_count())
        throw domain_error("alpha must cover exactly the embedding's vertices");
    for (const auto& [v, a] : alpha.out_degree) {
        if (!emb.has_vertex(v))
            throw domain_error("alpha names unknown vertex " + std::to_string(v));
        if (a < 0) throw domain_error("alpha has a negative out-degree");
    }
    if (alpha.sum() != emb.edge_count())
        throw domain_error("alpha out-degrees sum to " + std::to_string(alpha.sum()) +
                           " but the graph has " + std::to_string(emb.edge_count()) +
                           " edges");

    std::vector<EdgeId> order;
    for (const auto& e : emb.edges()) order.push_back(e.id);
    std::sort(order.begin(), order.end());

    std::map<VertexId, std::vector<EdgeId>> assigned;
    std::map<VertexId, int> used;
    for (const auto& v : emb.vertices()) {
        assigned[v.id];
        used[v.id] = 0;
    }

    for (EdgeId e : order) {
        auto [u, v] = emb.ends(e);
        bool placed = false;
        for (VertexId w : {u, v}) {
            std::vector<char> visited(emb.edge_count(), 0);
            visited[emb.edge_index(e)] = 1;
            if (free_capacity(emb, w, assigned, used, alpha, visited)) {
                assigned[w].push_back(e);
                used[w]++;
                placed = true;
                break;
            }
        }
        if (!placed) return std::nullopt;  // max flow < E: alpha infeasible
    }

    std::vector<uint8_t> bits(emb.edge_count(), 0);
    for (const auto& [v, list] : assigned)
        for (EdgeId e : list) bits[emb.edge_index(e)] = emb.ends(e).first == v ? 0 : 1;
    return Orientation(emb, std::move(bits));
}

std::vector<int> strong_components(const Orientation& d) {
    const Embedding& emb = d.embedding();
    int n = emb.vertex_count();
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : emb.edges())
        adj[emb.vertex_index(d.tail(e.id))].push_back(emb.vertex_index(d.head(e.id)));

    std::vector<int> comp(n, -1), disc(n, -1), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    int timer = 0, ncomp = 0;
    struct Frame { int v; size_t i; };
    for (int root = 0; root < n; ++root) {
        if (disc[root] != -1) continue;
        std::vector<Frame> call{{root, 0}};
        disc[root] = low[root] = timer++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& fr = call.back();
            if (fr.i < adj[fr.v].size()) {
                int w = adj[fr.v][fr.i++];
                if (disc[w] == -1) {
                    disc[w] = low[w] = timer++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[fr.v] = std::min(low[fr.v], disc[w]);
                }
            } else {
                int v = fr.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
                if (low[v] == disc[v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = ncomp;
                        if (w == v) break;
                    }
                    ++ncomp;
                }
            }
        }
    }
    return comp;
}

bool is_strongly_connected(const Orientation& d) {
    std::vector<int> comp = strong_components(d);
    return std::all_of(comp.begin(), comp.end(), [&](int c) { return c == comp[0]; });
}

std::vector<EdgeId> rigid_edges(const Embedding& emb, const AlphaSpec& alpha,
                                const Orientation& d) {
    if (&d.embedding() != &emb)
        throw domain_error("orientation belongs to a different embedding");
    if (!is_alpha_orientation(d, alpha))
        throw domain_error("rigid_edges requires an alpha-orientation witness");
    // An edge differs between two orientations with equal out-degree vectors
    // only if it lies on a directed cycle: the disagreement set is balanced at
    // every vertex, so each of its edges sits on a directed cycle. Hence the
    // rigid edges of the instance are exactly the edges of this one witness
    // whose endpoints fall into different strong components.
    std::vector<int> comp = strong_components(d);
    std::vector<EdgeId> rigid;
    for (const auto& e : emb.edges()) {
        if (comp[emb.vertex_index(e.u)] != comp[emb.vertex_index(e.v)])
            rigid.push_back(e.id);
    }
    std::sort(rigid.begin(), rigid.end());
    return rigid;
}

EulerianDifference difference(const Orientation& dp, const Orientation& d) {
    if (&dp.embedding() != &d.embedding())
        throw domain_error("difference requires orientations of the same embedding");
    const Embedding& emb = dp.embedding();
    EulerianDifference diff;
    diff.embedding = &emb;
    std::vector<int> balance(emb.vertex_count(), 0);
    for (const auto& e : emb.edges()) {
        if (dp.tail(e.id) == d.tail(e.id)) continue;
        HalfEdge h = dp.directed(e.id);
        balance[emb.vertex_index(h.tail)]++;
        balance[emb.vertex_index(h.head)]--;
        diff.edges.push_back(h);
    }
    for (int i = 0; i < emb.vertex_count(); ++i)
        if (balance[i] != 0)
            throw domain_error("difference is not balanced at vertex " +
                               std::to_string(emb.vertex_id(i)) +
                               "; the orientations do not share an out-degree vector");
    return diff;
}

}  // namespace flipdist
