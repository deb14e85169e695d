#include "torsionlab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "torsionlab/errors.hpp"

namespace torsionlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * (b - a).cross(c - a);
}

struct EdgeKey {
    int a, b;
    EdgeKey(int u, int v) : a(std::min(u, v)), b(std::max(u, v)) {}
    bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& e) const {
        return std::hash<long long>()((static_cast<long long>(e.a) << 32) ^ e.b);
    }
};

using EdgeSet = std::unordered_set<EdgeKey, EdgeKeyHash>;
template <class T>
using EdgeMap = std::unordered_map<EdgeKey, T, EdgeKeyHash>;

// ---------------------------------------------------------------------------
// Ear clipping (initial exact triangulation of the polygon)
// ---------------------------------------------------------------------------

bool point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, double eps) {
    const double d1 = (b - a).cross(p - a);
    const double d2 = (c - b).cross(p - b);
    const double d3 = (a - c).cross(p - c);
    return d1 >= -eps && d2 >= -eps && d3 >= -eps;
}

std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& pts) {
    const int n = static_cast<int>(pts.size());
    std::list<int> ring;
    for (int i = 0; i < n; ++i) ring.push_back(i);

    double scale2 = 0.0;
    for (const Vec2& p : pts) scale2 = std::max(scale2, p.norm2());
    const double area_eps = 1e-20 * std::max(scale2, 1.0);

    std::vector<std::array<int, 3>> tris;
    tris.reserve(static_cast<std::size_t>(n) - 2);

    auto is_ear = [&](std::list<int>::iterator it) {
        auto prev = (it == ring.begin()) ? std::prev(ring.end()) : std::prev(it);
        auto next = std::next(it);
        if (next == ring.end()) next = ring.begin();
        const Vec2& a = pts[static_cast<std::size_t>(*prev)];
        const Vec2& b = pts[static_cast<std::size_t>(*it)];
        const Vec2& c = pts[static_cast<std::size_t>(*next)];
        const double area = tri_area(a, b, c);
        if (area <= area_eps) return false;
        // Inclusive blocking: a vertex lying exactly on the candidate
        // diagonal (e.g. a reflex corner collinear with it) must reject the
        // ear, or the clip swallows region outside the polygon.
        const double eps = 1e-12 * std::max({(a - b).norm2(), (b - c).norm2(), (c - a).norm2()});
        for (int j : ring) {
            if (j == *prev || j == *it || j == *next) continue;
            if (point_in_triangle(pts[static_cast<std::size_t>(j)], a, b, c, eps)) return false;
        }
        return true;
    };

    std::size_t stall = 0;
    auto it = ring.begin();
    while (ring.size() > 3) {
        if (stall > 2 * ring.size() + 8)
            throw MeshingFailure("ear clipping stalled (degenerate polygon?)");
        if (is_ear(it)) {
            auto prev = (it == ring.begin()) ? std::prev(ring.end()) : std::prev(it);
            auto next = std::next(it);
            if (next == ring.end()) next = ring.begin();
            tris.push_back({*prev, *it, *next});
            it = ring.erase(it);
            if (it == ring.end()) it = ring.begin();
            stall = 0;
        } else {
            ++it;
            if (it == ring.end()) it = ring.begin();
            ++stall;
        }
    }
    auto a = ring.begin();
    auto b = std::next(a);
    auto c = std::next(b);
    tris.push_back({*a, *b, *c});
    return tris;
}

// ---------------------------------------------------------------------------
// Working mesh with edge-split refinement, flips and smoothing
// ---------------------------------------------------------------------------

struct WorkMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;
    std::vector<std::uint8_t> node_boundary;
    EdgeSet boundary_edges;

    double longest_edge2(std::size_t t, int& le) const {
        const auto& T = tris[t];
        double best = -1.0;
        le = 0;
        for (int e = 0; e < 3; ++e) {
            const double l2 = (nodes[static_cast<std::size_t>(T[(e + 1) % 3])] -
                               nodes[static_cast<std::size_t>(T[e])]).norm2();
            // Deterministic tie-break on the vertex pair.
            if (l2 > best * (1 + 1e-15) ||
                (std::fabs(l2 - best) <= 1e-15 * best &&
                 EdgeKey(T[(e + 1) % 3], T[e]).a < 0)) {
                best = l2;
                le = e;
            }
        }
        return best;
    }

    Vec2 centroid(std::size_t t) const {
        const auto& T = tris[t];
        return (nodes[static_cast<std::size_t>(T[0])] + nodes[static_cast<std::size_t>(T[1])] +
                nodes[static_cast<std::size_t>(T[2])]) / 3.0;
    }
};

// Split every edge in `split_edges` at its midpoint, subdividing each triangle
// consistently.  Assumes closure: every triangle that contains a split edge
// also has its own longest edge in the set.
void apply_splits(WorkMesh& m, const EdgeSet& split_edges) {
    EdgeMap<int> midpoint;
    midpoint.reserve(split_edges.size());
    for (const EdgeKey& e : split_edges) {
        const Vec2 mid = (m.nodes[static_cast<std::size_t>(e.a)] +
                          m.nodes[static_cast<std::size_t>(e.b)]) * 0.5;
        const int idx = static_cast<int>(m.nodes.size());
        m.nodes.push_back(mid);
        const bool bdry = m.boundary_edges.count(e) > 0;
        m.node_boundary.push_back(bdry ? 1 : 0);
        midpoint.emplace(e, idx);
        if (bdry) {
            m.boundary_edges.erase(e);
            m.boundary_edges.insert(EdgeKey(e.a, idx));
            m.boundary_edges.insert(EdgeKey(idx, e.b));
        }
    }

    std::vector<std::array<int, 3>> out;
    out.reserve(m.tris.size() * 2);

    // Recursive subdivision of one triangle against the split set.
    std::function<void(std::array<int, 3>)> subdivide = [&](std::array<int, 3> T) {
        int edge = -1;
        double best = -1.0;
        for (int e = 0; e < 3; ++e) {
            const EdgeKey k(T[e], T[(e + 1) % 3]);
            if (midpoint.count(k)) {
                const double l2 = (m.nodes[static_cast<std::size_t>(T[(e + 1) % 3])] -
                                   m.nodes[static_cast<std::size_t>(T[e])]).norm2();
                if (l2 > best) {
                    best = l2;
                    edge = e;
                }
            }
        }
        if (edge < 0) {
            out.push_back(T);
            return;
        }
        const int a = T[edge];
        const int b = T[(edge + 1) % 3];
        const int c = T[(edge + 2) % 3];
        const int mnode = midpoint.at(EdgeKey(a, b));
        subdivide({a, mnode, c});
        subdivide({mnode, b, c});
    };

    for (const auto& T : m.tris) subdivide(T);
    m.tris = std::move(out);
}

EdgeMap<std::pair<int, int>> build_adjacency(const WorkMesh& m) {
    EdgeMap<std::pair<int, int>> adj;
    adj.reserve(m.tris.size() * 2);
    for (std::size_t t = 0; t < m.tris.size(); ++t) {
        for (int e = 0; e < 3; ++e) {
            const EdgeKey k(m.tris[t][e], m.tris[t][(e + 1) % 3]);
            auto it = adj.find(k);
            if (it == adj.end())
                adj.emplace(k, std::make_pair(static_cast<int>(t), -1));
            else
                it->second.second = static_cast<int>(t);
        }
    }
    return adj;
}

bool incircle_violated(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    // d strictly inside the circumcircle of (a,b,c), CCW orientation assumed.
    const double ax = a.x - d.x, ay = a.y - d.y;
    const double bx = b.x - d.x, by = b.y - d.y;
    const double cx = c.x - d.x, cy = c.y - d.y;
    const double det = (ax * ax + ay * ay) * (bx * cy - by * cx) -
                       (bx * bx + by * by) * (ax * cy - ay * cx) +
                       (cx * cx + cy * cy) * (ax * by - ay * bx);
    return det > 1e-24;
}

// Lawson flips toward the Delaunay condition; boundary edges are never
// touched.  Returns the number of flips performed.
std::size_t delaunay_flips(WorkMesh& m, int max_sweeps) {
    std::size_t flips_total = 0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        auto adj = build_adjacency(m);
        std::size_t flips = 0;
        for (auto& [key, pr] : adj) {
            const int t1 = pr.first, t2 = pr.second;
            if (t1 < 0 || t2 < 0) continue;
            if (m.boundary_edges.count(key)) continue;
            auto& T1 = m.tris[static_cast<std::size_t>(t1)];
            auto& T2 = m.tris[static_cast<std::size_t>(t2)];
            // Locate the shared edge in both triangles.
            int e1 = -1, e2 = -1;
            for (int e = 0; e < 3; ++e) {
                if (EdgeKey(T1[e], T1[(e + 1) % 3]) == key) e1 = e;
                if (EdgeKey(T2[e], T2[(e + 1) % 3]) == key) e2 = e;
            }
            if (e1 < 0 || e2 < 0) continue;  // stale entry after a flip
            const int a = T1[e1];
            const int b = T1[(e1 + 1) % 3];
            const int c = T1[(e1 + 2) % 3];
            const int d = T2[(e2 + 2) % 3];
            if (T2[e2] != b || T2[(e2 + 1) % 3] != a) continue;  // orientation mismatch
            const Vec2& A = m.nodes[static_cast<std::size_t>(a)];
            const Vec2& B = m.nodes[static_cast<std::size_t>(b)];
            const Vec2& C = m.nodes[static_cast<std::size_t>(c)];
            const Vec2& D = m.nodes[static_cast<std::size_t>(d)];
            if (!incircle_violated(A, B, C, D)) continue;
            // Flip is valid only when the quad a-d-b-c is strictly convex.
            if (tri_area(A, D, C) <= 0 || tri_area(D, B, C) <= 0) continue;
            T1 = {a, d, c};
            T2 = {d, b, c};
            ++flips;
            // Adjacency is stale for the four outer edges; the next sweep
            // rebuilds it.  Skip further flips on these triangles this sweep.
        }
        flips_total += flips;
        if (flips == 0) break;
    }
    return flips_total;
}

double tri_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double la = (b - c).norm();
    const double lb = (a - c).norm();
    const double lc = (a - b).norm();
    const double lmax = std::max({la, lb, lc});
    const double area = tri_area(a, b, c);
    if (area <= 0 || lmax <= 0) return -1.0;
    // min angle ~ asin(2 area / (product of the two longest sides)); use the
    // exact law-of-cosines version for reliability.
    auto angle = [](double opp, double s1, double s2) {
        const double cosv = std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2), -1.0, 1.0);
        return std::acos(cosv);
    };
    return std::min({angle(la, lb, lc), angle(lb, la, lc), angle(lc, la, lb)});
}

// Optimisation-based smoothing: move each interior node to the size-weighted
// average of its neighbours, but only accept moves that do not decrease the
// worst incident angle (keeps graded regions intact).
void smooth_interior(WorkMesh& m, int rounds,
                     const std::function<double(const Vec2&)>& target_size) {
    for (int round = 0; round < rounds; ++round) {
        std::vector<std::vector<int>> star(m.nodes.size());
        for (std::size_t t = 0; t < m.tris.size(); ++t)
            for (int v : m.tris[t]) star[static_cast<std::size_t>(v)].push_back(static_cast<int>(t));

        std::vector<std::vector<int>> nbrs(m.nodes.size());
        for (const auto& T : m.tris) {
            for (int e = 0; e < 3; ++e) {
                nbrs[static_cast<std::size_t>(T[e])].push_back(T[(e + 1) % 3]);
                nbrs[static_cast<std::size_t>(T[e])].push_back(T[(e + 2) % 3]);
            }
        }

        for (std::size_t v = 0; v < m.nodes.size(); ++v) {
            if (m.node_boundary[v]) continue;
            if (nbrs[v].empty()) continue;
            Vec2 target{0, 0};
            double wsum = 0.0;
            for (int u : nbrs[v]) {
                const Vec2& p = m.nodes[static_cast<std::size_t>(u)];
                const double s = std::max(target_size(p), 1e-300);
                const double w = 1.0 / (s * s);
                target += p * w;
                wsum += w;
            }
            target = target / wsum;

            auto worst_angle = [&]() {
                double worst = 1e30;
                for (int t : star[v]) {
                    const auto& T = m.tris[static_cast<std::size_t>(t)];
                    worst = std::min(worst, tri_min_angle(m.nodes[static_cast<std::size_t>(T[0])],
                                                          m.nodes[static_cast<std::size_t>(T[1])],
                                                          m.nodes[static_cast<std::size_t>(T[2])]));
                }
                return worst;
            };

            const Vec2 original = m.nodes[v];
            const double before = worst_angle();
            Vec2 trial = target;
            bool accepted = false;
            for (int attempt = 0; attempt < 4 && !accepted; ++attempt) {
                m.nodes[v] = trial;
                if (worst_angle() >= before) {
                    accepted = true;
                } else {
                    trial = (trial + original) * 0.5;
                }
            }
            if (!accepted) m.nodes[v] = original;
        }
    }
}

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2.0 * ab.cross(ac);
    const double ab2 = ab.norm2(), ac2 = ac.norm2();
    return a + Vec2{ac.y * ab2 - ab.y * ac2, ab.x * ac2 - ac.x * ab2} / d;
}

// Quality-driven point insertion on a dynamic triangulation with local
// Delaunay legalisation (incremental Bowyer-Watson).  Bad triangles get
// their circumcenter inserted; when the circumcenter is unreachable or
// crowds an existing vertex, the triangle's longest edge is split instead.
struct DynTri {
    WorkMesh& m;
    EdgeMap<std::array<int, 2>> adj;

    explicit DynTri(WorkMesh& mesh) : m(mesh) {
        adj.reserve(m.tris.size() * 2);
        for (std::size_t t = 0; t < m.tris.size(); ++t) add_tri_edges(static_cast<int>(t));
    }

    void add_tri_edges(int t) {
        const auto& T = m.tris[static_cast<std::size_t>(t)];
        for (int e = 0; e < 3; ++e) {
            const EdgeKey k(T[e], T[(e + 1) % 3]);
            auto it = adj.find(k);
            if (it == adj.end())
                adj.emplace(k, std::array<int, 2>{t, -1});
            else if (it->second[0] != t && it->second[1] != t) {
                if (it->second[0] < 0)
                    it->second[0] = t;
                else
                    it->second[1] = t;
            }
        }
    }

    void replace_adj(const EdgeKey& k, int old_t, int new_t) {
        auto it = adj.find(k);
        if (it == adj.end()) {
            adj.emplace(k, std::array<int, 2>{new_t, -1});
            return;
        }
        if (it->second[0] == old_t)
            it->second[0] = new_t;
        else if (it->second[1] == old_t)
            it->second[1] = new_t;
        else if (it->second[0] < 0)
            it->second[0] = new_t;
        else
            it->second[1] = new_t;
    }

    int neighbour(const EdgeKey& k, int t) const {
        auto it = adj.find(k);
        if (it == adj.end()) return -1;
        return it->second[0] == t ? it->second[1] : it->second[0];
    }

    // Lawson legalisation starting from the given edges.
    void legalize(std::vector<EdgeKey>& stack) {
        int guard = 0;
        while (!stack.empty() && guard++ < 100000) {
            const EdgeKey k = stack.back();
            stack.pop_back();
            if (m.boundary_edges.count(k)) continue;
            auto it = adj.find(k);
            if (it == adj.end()) continue;
            const int t1 = it->second[0], t2 = it->second[1];
            if (t1 < 0 || t2 < 0) continue;
            auto& T1 = m.tris[static_cast<std::size_t>(t1)];
            auto& T2 = m.tris[static_cast<std::size_t>(t2)];
            int e1 = -1, e2 = -1;
            for (int e = 0; e < 3; ++e) {
                if (EdgeKey(T1[e], T1[(e + 1) % 3]) == k) e1 = e;
                if (EdgeKey(T2[e], T2[(e + 1) % 3]) == k) e2 = e;
            }
            if (e1 < 0 || e2 < 0) continue;
            const int a = T1[e1];
            const int b = T1[(e1 + 1) % 3];
            const int c = T1[(e1 + 2) % 3];
            const int d = T2[(e2 + 2) % 3];
            if (!(T2[e2] == b && T2[(e2 + 1) % 3] == a)) continue;
            const Vec2& A = m.nodes[static_cast<std::size_t>(a)];
            const Vec2& B = m.nodes[static_cast<std::size_t>(b)];
            const Vec2& C = m.nodes[static_cast<std::size_t>(c)];
            const Vec2& D = m.nodes[static_cast<std::size_t>(d)];
            if (!incircle_violated(A, B, C, D)) continue;
            if (tri_area(A, D, C) <= 0 || tri_area(D, B, C) <= 0) continue;
            // Flip: (a,b,c)+(b,a,d) -> (a,d,c)+(d,b,c).
            T1 = {a, d, c};
            T2 = {d, b, c};
            adj.erase(k);
            adj.emplace(EdgeKey(d, c), std::array<int, 2>{t1, t2});
            replace_adj(EdgeKey(a, d), t2, t1);
            replace_adj(EdgeKey(d, b), t2, t2);
            replace_adj(EdgeKey(b, c), t1, t2);
            // EdgeKey(a, c) stays with t1.
            stack.push_back(EdgeKey(a, d));
            stack.push_back(EdgeKey(d, b));
            stack.push_back(EdgeKey(b, c));
            stack.push_back(EdgeKey(a, c));
        }
    }

    // Insert p inside triangle tc (3-way split), legalise around it.
    void insert_in_triangle(int tc, const Vec2& p) {
        const auto T = m.tris[static_cast<std::size_t>(tc)];
        const int idx = static_cast<int>(m.nodes.size());
        m.nodes.push_back(p);
        m.node_boundary.push_back(0);
        const int t1 = tc;
        const int t2 = static_cast<int>(m.tris.size());
        const int t3 = t2 + 1;
        m.tris[static_cast<std::size_t>(t1)] = {T[0], T[1], idx};
        m.tris.push_back({T[1], T[2], idx});
        m.tris.push_back({T[2], T[0], idx});
        replace_adj(EdgeKey(T[1], T[2]), tc, t2);
        replace_adj(EdgeKey(T[2], T[0]), tc, t3);
        adj.emplace(EdgeKey(T[0], idx), std::array<int, 2>{t1, t3});
        adj.emplace(EdgeKey(T[1], idx), std::array<int, 2>{t1, t2});
        adj.emplace(EdgeKey(T[2], idx), std::array<int, 2>{t2, t3});
        std::vector<EdgeKey> stack{EdgeKey(T[0], T[1]), EdgeKey(T[1], T[2]),
                                   EdgeKey(T[2], T[0])};
        legalize(stack);
    }

    // Split the edge (a,b) at its midpoint; updates one or two incident
    // triangles and legalises.
    void split_edge(const EdgeKey& k) {
        auto it = adj.find(k);
        if (it == adj.end()) return;
        const std::array<int, 2> ts = it->second;
        const bool bdry = m.boundary_edges.count(k) > 0;
        const Vec2 mid = (m.nodes[static_cast<std::size_t>(k.a)] +
                          m.nodes[static_cast<std::size_t>(k.b)]) * 0.5;
        const int idx = static_cast<int>(m.nodes.size());
        m.nodes.push_back(mid);
        m.node_boundary.push_back(bdry ? 1 : 0);
        if (bdry) {
            m.boundary_edges.erase(k);
            m.boundary_edges.insert(EdgeKey(k.a, idx));
            m.boundary_edges.insert(EdgeKey(idx, k.b));
        }
        adj.erase(k);
        std::vector<EdgeKey> stack;
        for (int t : ts) {
            if (t < 0) continue;
            const auto T = m.tris[static_cast<std::size_t>(t)];
            int e = -1;
            for (int q = 0; q < 3; ++q)
                if (EdgeKey(T[q], T[(q + 1) % 3]) == k) e = q;
            if (e < 0) continue;
            const int a = T[e];
            const int b = T[(e + 1) % 3];
            const int c = T[(e + 2) % 3];
            const int tn = static_cast<int>(m.tris.size());
            m.tris[static_cast<std::size_t>(t)] = {a, idx, c};
            m.tris.push_back({idx, b, c});
            replace_adj(EdgeKey(b, c), t, tn);
            replace_adj(EdgeKey(a, idx), -1, t);
            replace_adj(EdgeKey(idx, b), -1, tn);
            adj.emplace(EdgeKey(idx, c), std::array<int, 2>{t, tn});
            stack.push_back(EdgeKey(a, c));
            stack.push_back(EdgeKey(b, c));
        }
        legalize(stack);
    }
};

int insert_for_quality(WorkMesh& m, const Polygon& domain, double gate_deg,
                       const std::unordered_set<int>& sharp, int rounds,
                       const std::function<double(const Vec2&)>& target_size) {
    const double gate = gate_deg * kPi / 180.0;
    int inserted = 0;
    const std::size_t max_tris = m.tris.size() * 4 + 4096;

    for (int round = 0; round < rounds && m.tris.size() < max_tris; ++round) {
        DynTri dyn(m);
        std::vector<std::pair<double, std::array<int, 3>>> bad;
        for (std::size_t t = 0; t < m.tris.size(); ++t) {
            const auto& T = m.tris[t];
            if (sharp.count(T[0]) || sharp.count(T[1]) || sharp.count(T[2])) continue;
            const double a = tri_min_angle(m.nodes[static_cast<std::size_t>(T[0])],
                                           m.nodes[static_cast<std::size_t>(T[1])],
                                           m.nodes[static_cast<std::size_t>(T[2])]);
            if (a < gate) bad.push_back({a, T});
        }
        if (bad.empty()) break;
        std::sort(bad.begin(), bad.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        if (bad.size() > 512) bad.resize(512);

        std::map<std::array<int, 3>, int> live;
        for (std::size_t t = 0; t < m.tris.size(); ++t) {
            auto key = m.tris[t];
            std::sort(key.begin(), key.end());
            live[key] = static_cast<int>(t);
        }

        int handled_this_round = 0;
        for (const auto& [angle, Tb] : bad) {
            auto key = Tb;
            std::sort(key.begin(), key.end());
            const auto it = live.find(key);
            if (it == live.end()) continue;
            const int tb = it->second;
            {
                auto cur = m.tris[static_cast<std::size_t>(tb)];
                std::sort(cur.begin(), cur.end());
                if (cur != key) continue;  // restructured by an earlier insertion
            }

            const Vec2 cc = circumcenter(m.nodes[static_cast<std::size_t>(Tb[0])],
                                         m.nodes[static_cast<std::size_t>(Tb[1])],
                                         m.nodes[static_cast<std::size_t>(Tb[2])]);
            bool handled = false;
            if (std::isfinite(cc.x) && std::isfinite(cc.y) && point_in_polygon(domain, cc)) {
                int tc = -1;
                for (std::size_t t = 0; t < m.tris.size() && tc < 0; ++t) {
                    const auto& T = m.tris[t];
                    const Vec2& a = m.nodes[static_cast<std::size_t>(T[0])];
                    const Vec2& b = m.nodes[static_cast<std::size_t>(T[1])];
                    const Vec2& c = m.nodes[static_cast<std::size_t>(T[2])];
                    const double eps = -1e-14 * std::max((a - b).norm2(), (a - c).norm2());
                    if ((b - a).cross(cc - a) >= eps && (c - b).cross(cc - b) >= eps &&
                        (a - c).cross(cc - c) >= eps)
                        tc = static_cast<int>(t);
                }
                if (tc >= 0) {
                    const auto T = m.tris[static_cast<std::size_t>(tc)];
                    const Vec2& a = m.nodes[static_cast<std::size_t>(T[0])];
                    const Vec2& b = m.nodes[static_cast<std::size_t>(T[1])];
                    const Vec2& c = m.nodes[static_cast<std::size_t>(T[2])];
                    const double area2 = (b - a).cross(c - a);
                    const double l0 = (b - cc).cross(c - cc) / area2;
                    const double l1 = (c - cc).cross(a - cc) / area2;
                    const double l2 = 1.0 - l0 - l1;
                    double dmin = 1e300;
                    for (int q = 0; q < 3; ++q)
                        dmin = std::min(dmin, dist(cc, m.nodes[static_cast<std::size_t>(T[q])]));
                    const double lmin = std::min({l0, l1, l2});
                    if (lmin >= 0.02 && dmin > 1e-12) {
                        dyn.insert_in_triangle(tc, cc);
                        handled = true;
                    } else if (lmin < 0.02 && lmin >= -1e-9) {
                        const int q = (l0 <= l1 && l0 <= l2) ? 0 : (l1 <= l2 ? 1 : 2);
                        dyn.split_edge(EdgeKey(T[(q + 1) % 3], T[(q + 2) % 3]));
                        handled = true;
                    }
                }
            }
            if (!handled) {
                int le = 0;
                m.longest_edge2(static_cast<std::size_t>(tb), le);
                dyn.split_edge(EdgeKey(Tb[le], Tb[(le + 1) % 3]));
            }
            ++inserted;
            ++handled_this_round;
            if (m.tris.size() >= max_tris) break;
        }
        if (handled_this_round == 0) break;
        smooth_interior(m, 1, target_size);
    }
    return inserted;
}

} // namespace

TriMesh uniform_refine(const TriMesh& mesh) {
    TriMesh out;
    out.nodes = mesh.nodes;
    out.boundary = mesh.boundary;
    out.domain = mesh.domain;
    out.target_h = 0.5 * mesh.target_h;
    out.grading_ratio = mesh.grading_ratio;
    out.grading_depth = mesh.grading_depth;
    out.min_angle_deg = mesh.min_angle_deg;
    out.corner_vertex = mesh.corner_vertex;

    // Boundary edges of the input (edges used by exactly one triangle).
    EdgeMap<int> edge_use;
    for (const auto& T : mesh.triangles)
        for (int e = 0; e < 3; ++e) edge_use[EdgeKey(T[e], T[(e + 1) % 3])]++;

    EdgeMap<int> midpoint;
    auto mid_node = [&](int a, int b) {
        const EdgeKey k(a, b);
        auto it = midpoint.find(k);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(out.nodes.size());
        out.nodes.push_back((mesh.nodes[static_cast<std::size_t>(a)] +
                             mesh.nodes[static_cast<std::size_t>(b)]) * 0.5);
        const bool bdry = edge_use.at(k) == 1 && mesh.boundary[static_cast<std::size_t>(a)] &&
                          mesh.boundary[static_cast<std::size_t>(b)];
        out.boundary.push_back(bdry ? 1 : 0);
        midpoint.emplace(k, idx);
        return idx;
    };

    out.triangles.reserve(mesh.triangles.size() * 4);
    for (const auto& T : mesh.triangles) {
        const int m01 = mid_node(T[0], T[1]);
        const int m12 = mid_node(T[1], T[2]);
        const int m20 = mid_node(T[2], T[0]);
        out.triangles.push_back({T[0], m01, m20});
        out.triangles.push_back({m01, T[1], m12});
        out.triangles.push_back({m20, m12, T[2]});
        out.triangles.push_back({m01, m12, m20});
    }

    out.nearest_corner.assign(out.nodes.size(), -1);
    const double tag_radius = 2.0 * mesh.target_h;
    for (std::size_t v = 0; v < out.nodes.size(); ++v) {
        double best = tag_radius;
        for (std::size_t k = 0; k < out.corner_vertex.size(); ++k) {
            const double d = dist(out.nodes[v], out.domain[out.corner_vertex[k]]);
            if (d < best) {
                best = d;
                out.nearest_corner[v] = static_cast<int>(k);
            }
        }
    }
    return out;
}

double triangle_min_angle_deg(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double la = (b - c).norm();
    const double lb = (a - c).norm();
    const double lc = (a - b).norm();
    auto angle = [](double opp, double s1, double s2) {
        const double cosv = std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2), -1.0, 1.0);
        return std::acos(cosv);
    };
    const double amin = std::min({angle(la, lb, lc), angle(lb, la, lc), angle(lc, la, lb)});
    return amin * 180.0 / kPi;
}

double TriMesh::triangle_area(std::size_t t) const {
    const auto& T = triangles[t];
    return tri_area(nodes[static_cast<std::size_t>(T[0])], nodes[static_cast<std::size_t>(T[1])],
                    nodes[static_cast<std::size_t>(T[2])]);
}

double TriMesh::total_area() const {
    double s = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) s += triangle_area(t);
    return s;
}

std::size_t TriMesh::interior_node_count() const {
    std::size_t n = 0;
    for (auto f : boundary)
        if (!f) ++n;
    return n;
}

TriMesh triangulate(const Polygon& poly, double h, double q, int depth) {
    MeshOptions opt;
    opt.h = h;
    opt.grading_ratio = q;
    opt.grading_depth = depth;
    return triangulate(poly, opt);
}

TriMesh triangulate(const Polygon& poly, const MeshOptions& opt) {
    validate_polygon(poly);
    if (!(opt.h > 0)) throw std::invalid_argument("triangulate: h > 0 required");
    if (!(opt.grading_ratio > 0 && opt.grading_ratio < 1))
        throw std::invalid_argument("triangulate: grading ratio q in (0,1) required");
    if (opt.h > polygon_diameter(poly))
        throw std::invalid_argument("triangulate: h exceeds the domain diameter");

    const double q = opt.grading_ratio;
    const int depth = opt.grading_depth;
    const double s_min = opt.h * std::pow(q, depth);

    const auto corner_ids = polygon_corner_indices(poly);
    std::vector<Vec2> corner_pts;
    std::vector<double> corner_angles;
    for (std::size_t ci : corner_ids) {
        corner_pts.push_back(poly[ci]);
        corner_angles.push_back(2.0 * polygon_half_angle(poly, ci));
    }

    auto target_size = [&](const Vec2& x) {
        double s = opt.h;
        if (depth > 0) {
            for (const Vec2& c : corner_pts) {
                const double d = dist(x, c);
                s = std::min(s, std::max(s_min, 0.7 * d * (1.0 - q) / q));
            }
        }
        if (opt.size_field) s = std::min(s, std::max(opt.size_field(x), 1e-300));
        return s;
    };

    WorkMesh m;
    m.nodes = poly.vertices;
    m.node_boundary.assign(m.nodes.size(), 1);
    for (std::size_t i = 0, n = poly.size(); i < n; ++i)
        m.boundary_edges.insert(EdgeKey(static_cast<int>(i), static_cast<int>((i + 1) % n)));
    m.tris = ear_clip(poly.vertices);

    // Refinement passes: collect oversized triangles, close the split set so
    // each affected triangle splits through its longest edge, split, repeat.
    int pass = 0;
    for (; pass < opt.max_refine_passes; ++pass) {
        EdgeSet splits;
        for (std::size_t t = 0; t < m.tris.size(); ++t) {
            int le = 0;
            const double l2 = m.longest_edge2(t, le);
            const double target = target_size(m.centroid(t));
            if (l2 > target * target) {
                const auto& T = m.tris[t];
                splits.insert(EdgeKey(T[le], T[(le + 1) % 3]));
            }
        }
        if (splits.empty()) break;

        // Closure: a triangle with any split edge must have its longest edge split.
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t t = 0; t < m.tris.size(); ++t) {
                const auto& T = m.tris[t];
                bool touched = false;
                for (int e = 0; e < 3; ++e)
                    if (splits.count(EdgeKey(T[e], T[(e + 1) % 3]))) touched = true;
                if (!touched) continue;
                int le = 0;
                m.longest_edge2(t, le);
                const EdgeKey lk(T[le], T[(le + 1) % 3]);
                if (!splits.count(lk)) {
                    splits.insert(lk);
                    grew = true;
                }
            }
        }
        apply_splits(m, splits);
        delaunay_flips(m, 2);
    }
    if (pass == opt.max_refine_passes)
        throw MeshingFailure("triangulate: size targets not reached within pass budget");

    // Guarantee at least one interior node per triangle: split all-boundary
    // triangles at the centroid (keeps the cover and conformity intact).
    {
        std::vector<std::array<int, 3>> out;
        out.reserve(m.tris.size());
        for (const auto& T : m.tris) {
            const bool all_bdry = m.node_boundary[static_cast<std::size_t>(T[0])] &&
                                  m.node_boundary[static_cast<std::size_t>(T[1])] &&
                                  m.node_boundary[static_cast<std::size_t>(T[2])];
            if (!all_bdry) {
                out.push_back(T);
                continue;
            }
            const Vec2 c = (m.nodes[static_cast<std::size_t>(T[0])] +
                            m.nodes[static_cast<std::size_t>(T[1])] +
                            m.nodes[static_cast<std::size_t>(T[2])]) / 3.0;
            const int idx = static_cast<int>(m.nodes.size());
            m.nodes.push_back(c);
            m.node_boundary.push_back(0);
            out.push_back({T[0], T[1], idx});
            out.push_back({T[1], T[2], idx});
            out.push_back({T[2], T[0], idx});
        }
        m.tris = std::move(out);
    }

    // Quality improvement.
    double worst = 0.0;
    auto sharp_corner_nodes = [&]() {
        std::unordered_set<int> sharp;
        for (std::size_t k = 0; k < corner_pts.size(); ++k) {
            if (corner_angles[k] < 2.0 * opt.min_angle_deg * kPi / 180.0) {
                for (std::size_t v = 0; v < m.nodes.size(); ++v)
                    if (dist(m.nodes[v], corner_pts[k]) < 1e-12) sharp.insert(static_cast<int>(v));
            }
        }
        return sharp;
    };
    auto min_angle_excluding_sharp = [&](const std::unordered_set<int>& sharp) {
        double a = 180.0;
        for (const auto& T : m.tris) {
            if (sharp.count(T[0]) || sharp.count(T[1]) || sharp.count(T[2])) continue;
            a = std::min(a, triangle_min_angle_deg(m.nodes[static_cast<std::size_t>(T[0])],
                                                   m.nodes[static_cast<std::size_t>(T[1])],
                                                   m.nodes[static_cast<std::size_t>(T[2])]));
        }
        return a;
    };

    const auto sharp = sharp_corner_nodes();
    for (int attempt = 0; attempt <= opt.quality_retries; ++attempt) {
        for (int r = 0; r < opt.smoothing_rounds; ++r) {
            delaunay_flips(m, 2);
            smooth_interior(m, 1, target_size);
        }
        delaunay_flips(m, 4);
        worst = min_angle_excluding_sharp(sharp);
        if (worst >= opt.min_angle_deg) break;
        insert_for_quality(m, poly, opt.min_angle_deg + 0.5, sharp, 24, target_size);
        smooth_interior(m, 2, target_size);
        delaunay_flips(m, 4);
        worst = min_angle_excluding_sharp(sharp);
        if (worst >= opt.min_angle_deg) break;
    }
    if (worst < opt.min_angle_deg)
        throw MeshingFailure("triangulate: min angle " + std::to_string(worst) +
                             " deg below target after retries");

    // Package the result.
    TriMesh mesh;
    mesh.nodes = std::move(m.nodes);
    mesh.triangles = std::move(m.tris);
    mesh.boundary = std::move(m.node_boundary);
    mesh.domain = poly;
    mesh.target_h = opt.h;
    mesh.grading_ratio = q;
    mesh.grading_depth = depth;
    mesh.min_angle_deg = worst;
    mesh.corner_vertex = corner_ids;

    mesh.nearest_corner.assign(mesh.nodes.size(), -1);
    const double tag_radius = 2.0 * opt.h;
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v) {
        double best = tag_radius;
        for (std::size_t k = 0; k < corner_pts.size(); ++k) {
            const double d = dist(mesh.nodes[v], corner_pts[k]);
            if (d < best) {
                best = d;
                mesh.nearest_corner[v] = static_cast<int>(k);
            }
        }
    }

    // Ensure positive orientation everywhere.
    for (auto& T : mesh.triangles) {
        if (tri_area(mesh.nodes[static_cast<std::size_t>(T[0])],
                     mesh.nodes[static_cast<std::size_t>(T[1])],
                     mesh.nodes[static_cast<std::size_t>(T[2])]) < 0)
            std::swap(T[1], T[2]);
    }
    return mesh;
}

} // namespace torsionlab
