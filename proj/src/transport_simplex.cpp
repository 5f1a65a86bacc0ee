#include "nanboltz/detail/transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nanboltz/errors.hpp"

namespace nanboltz::detail {

namespace {

constexpr int8_t kStateTree = 0;
constexpr int8_t kStateLower = 1;

class Simplex {
public:
    Simplex(const double* cost, std::size_t n, std::size_t m,
            std::span<const int64_t> supply, std::span<const int64_t> demand)
        : c_(cost), n_(n), m_(m), real_arcs_(n * m),
          arc_count_(n * m + n + m), node_count_(n + m + 1), root_(static_cast<int>(n + m)) {
        double c_max = 0.0;
        for (std::size_t a = 0; a < real_arcs_; ++a) c_max = std::max(c_max, c_[a]);
        art_cost_ = (c_max + 1.0) * static_cast<double>(node_count_ + 1);

        flow_.assign(arc_count_, 0);
        state_.assign(arc_count_, kStateLower);
        parent_.assign(node_count_, -1);
        pred_.assign(node_count_, -1);
        first_child_.assign(node_count_, -1);
        next_sib_.assign(node_count_, -1);
        prev_sib_.assign(node_count_, -1);
        depth_.assign(node_count_, 0);
        pi_.assign(node_count_, 0.0);

        // Initial strongly feasible tree: every node hangs off the root by its
        // artificial arc, carrying its full supply or demand.
        for (int k = 0; k < root_; ++k) {
            std::size_t a = real_arcs_ + static_cast<std::size_t>(k);
            parent_[k] = root_;
            pred_[k] = static_cast<int64_t>(a);
            state_[a] = kStateTree;
            depth_[k] = 1;
            attach(k, root_);
            if (k < static_cast<int>(n_)) {
                flow_[a] = supply[static_cast<std::size_t>(k)];
                pi_[k] = art_cost_;
            } else {
                flow_[a] = demand[static_cast<std::size_t>(k) - n_];
                pi_[k] = -art_cost_;
            }
        }
    }

    TransportSolution solve() {
        const std::size_t block =
            std::max<std::size_t>(64, static_cast<std::size_t>(std::sqrt(double(arc_count_))));
        const uint64_t pivot_cap = 2000 * static_cast<uint64_t>(node_count_) + 1000000;
        uint64_t pivots = 0;
        std::size_t cursor = 0;

        for (;;) {
            std::size_t best = arc_count_;
            double best_rc = 0.0;
            std::size_t scanned = 0;
            while (scanned < arc_count_) {
                std::size_t chunk = std::min(block, arc_count_ - scanned);
                std::size_t hi = cursor + chunk;
                if (hi <= arc_count_) {
                    scan_range(cursor, hi, best, best_rc);
                } else {
                    scan_range(cursor, arc_count_, best, best_rc);
                    scan_range(0, hi - arc_count_, best, best_rc);
                }
                cursor += chunk;
                if (cursor >= arc_count_) cursor -= arc_count_;
                scanned += chunk;
                if (best != arc_count_) break;
            }
            if (best == arc_count_) break;  // optimal
            pivot(best);
            if (++pivots > pivot_cap)
                throw numerical_error("transport simplex exceeded pivot cap", 0.0, 0.0);
        }

        TransportSolution sol;
        sol.pivots = pivots;
        long double total = 0.0L;
        for (std::size_t a = 0; a < real_arcs_; ++a) {
            if (flow_[a] > 0) {
                sol.flows.push_back({static_cast<uint32_t>(a / m_),
                                     static_cast<uint32_t>(a % m_), flow_[a]});
                total += static_cast<long double>(flow_[a]) * c_[a];
            }
        }
        for (std::size_t a = real_arcs_; a < arc_count_; ++a)
            if (flow_[a] != 0)
                throw numerical_error("transport problem infeasible (unbalanced marginals?)",
                                      0.0, 0.0);
        sol.cost = static_cast<double>(total);
        return sol;
    }

private:
    int tail(std::size_t a) const {
        if (a < real_arcs_) return static_cast<int>(a / m_);
        int k = static_cast<int>(a - real_arcs_);
        return k < static_cast<int>(n_) ? k : root_;
    }
    int head(std::size_t a) const {
        if (a < real_arcs_) return static_cast<int>(n_ + a % m_);
        int k = static_cast<int>(a - real_arcs_);
        return k < static_cast<int>(n_) ? root_ : k;
    }
    double cost(std::size_t a) const { return a < real_arcs_ ? c_[a] : art_cost_; }
    double reduced_cost(std::size_t a) const { return cost(a) - pi_[tail(a)] + pi_[head(a)]; }

    // Best (most negative) reduced cost over the arc range [lo, hi), with the
    // source/sink indices tracked incrementally to keep the scan division-free.
    void scan_range(std::size_t lo, std::size_t hi, std::size_t& best, double& best_rc) const {
        std::size_t a = lo;
        if (a < real_arcs_) {
            std::size_t real_hi = std::min(hi, real_arcs_);
            std::size_t i = a / m_;
            std::size_t j = a % m_;
            double pi_t = pi_[i];
            const double* pi_sink = pi_.data() + n_;
            while (a < real_hi) {
                std::size_t row_end = std::min(real_hi, a + (m_ - j));
                for (; a < row_end; ++a, ++j) {
                    if (state_[a] != kStateLower) continue;
                    double rc = c_[a] - pi_t + pi_sink[j];
                    if (rc < best_rc) {
                        best_rc = rc;
                        best = a;
                    }
                }
                if (j == m_) {
                    j = 0;
                    pi_t = pi_[++i];
                }
            }
        }
        for (; a < hi; ++a) {
            if (state_[a] != kStateLower) continue;
            double rc = reduced_cost(a);
            if (rc < best_rc) {
                best_rc = rc;
                best = a;
            }
        }
    }

    void attach(int u, int p) {
        prev_sib_[u] = -1;
        next_sib_[u] = first_child_[p];
        if (first_child_[p] >= 0) prev_sib_[first_child_[p]] = u;
        first_child_[p] = u;
    }

    void detach(int u) {
        int p = parent_[u];
        if (first_child_[p] == u) first_child_[p] = next_sib_[u];
        if (prev_sib_[u] >= 0) next_sib_[prev_sib_[u]] = next_sib_[u];
        if (next_sib_[u] >= 0) prev_sib_[next_sib_[u]] = prev_sib_[u];
        next_sib_[u] = prev_sib_[u] = -1;
    }

    void pivot(std::size_t in_arc) {
        const int t = tail(in_arc);
        const int h = head(in_arc);

        // Join of the two tree paths.
        int u = t, v = h;
        while (u != v) {
            if (depth_[u] >= depth_[v]) u = parent_[u];
            else v = parent_[v];
        }
        const int join = u;

        // Leaving arc: minimum residual among flow-decreasing arcs around the
        // cycle. Scanning the tail path with strict < and the head path with
        // <= keeps the tree strongly feasible under degeneracy.
        int64_t delta = std::numeric_limits<int64_t>::max();
        int u_out = -1;
        bool out_on_tail_side = true;
        for (int w = t; w != join; w = parent_[w]) {
            std::size_t a = static_cast<std::size_t>(pred_[w]);
            if (tail(a) == w && flow_[a] < delta) {
                delta = flow_[a];
                u_out = w;
                out_on_tail_side = true;
            }
        }
        for (int w = h; w != join; w = parent_[w]) {
            std::size_t a = static_cast<std::size_t>(pred_[w]);
            if (head(a) == w && flow_[a] <= delta) {
                delta = flow_[a];
                u_out = w;
                out_on_tail_side = false;
            }
        }
        if (u_out < 0)
            throw numerical_error("transport simplex: unbounded pivot cycle", 0.0, 0.0);

        // Push delta around the cycle (entering arc direction t -> h).
        if (delta != 0) {
            flow_[in_arc] += delta;
            for (int w = t; w != join; w = parent_[w]) {
                std::size_t a = static_cast<std::size_t>(pred_[w]);
                flow_[a] += (head(a) == w) ? delta : -delta;
            }
            for (int w = h; w != join; w = parent_[w]) {
                std::size_t a = static_cast<std::size_t>(pred_[w]);
                flow_[a] += (tail(a) == w) ? delta : -delta;
            }
        }

        const std::size_t out_arc = static_cast<std::size_t>(pred_[u_out]);
        if (out_arc == in_arc) return;  // cannot happen for a lower-state entering arc

        state_[in_arc] = kStateTree;
        state_[out_arc] = kStateLower;

        // The subtree cut off at u_out contains exactly one entering endpoint;
        // re-root it there and hang it from the other endpoint.
        const int u_in = out_on_tail_side ? t : h;
        const int v_in = out_on_tail_side ? h : t;
        const double sigma = (u_in == h) ? -reduced_cost(in_arc) : reduced_cost(in_arc);

        detach(u_in);
        int w = u_in;
        int p = parent_[w];
        int64_t a = pred_[w];
        while (w != u_out) {
            int gp = parent_[p];
            int64_t ga = pred_[p];
            detach(p);
            parent_[p] = w;
            pred_[p] = a;
            attach(p, w);
            w = p;
            p = gp;
            a = ga;
        }
        parent_[u_in] = v_in;
        pred_[u_in] = static_cast<int64_t>(in_arc);
        attach(u_in, v_in);

        // Refresh potentials and depths across the re-hung subtree.
        stack_.clear();
        stack_.push_back(u_in);
        while (!stack_.empty()) {
            int x = stack_.back();
            stack_.pop_back();
            depth_[x] = depth_[parent_[x]] + 1;
            pi_[x] += sigma;
            for (int ch = first_child_[x]; ch >= 0; ch = next_sib_[ch]) stack_.push_back(ch);
        }
    }

    const double* c_;
    std::size_t n_, m_, real_arcs_, arc_count_;
    int node_count_, root_;
    double art_cost_ = 0.0;

    std::vector<int64_t> flow_;
    std::vector<int8_t> state_;
    std::vector<int> parent_;
    std::vector<int64_t> pred_;
    std::vector<int> first_child_, next_sib_, prev_sib_;
    std::vector<int> depth_;
    std::vector<double> pi_;
    std::vector<int> stack_;
};

}  // namespace

TransportSolution solve_transport(const double* cost, std::size_t n, std::size_t m,
                                  std::span<const int64_t> supply,
                                  std::span<const int64_t> demand) {
    if (n == 0 || m == 0) throw input_error("transport: empty marginals");
    if (supply.size() != n || demand.size() != m)
        throw input_error("transport: marginal sizes do not match cost matrix");
    int64_t total_supply = std::accumulate(supply.begin(), supply.end(), int64_t{0});
    int64_t total_demand = std::accumulate(demand.begin(), demand.end(), int64_t{0});
    if (total_supply != total_demand) throw input_error("transport: unbalanced problem");
    for (int64_t s : supply)
        if (s < 0) throw input_error("transport: negative supply");
    for (int64_t d : demand)
        if (d < 0) throw input_error("transport: negative demand");

    Simplex solver(cost, n, m, supply, demand);
    return solver.solve();
}

}  // namespace nanboltz::detail
