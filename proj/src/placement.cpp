#include "xbarmap/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace xbarmap {

namespace {

// Index-compressed view of a cluster: synapse s connects pre slot ps[s] to
// post slot qs[s]; slot orders follow ascending neuron id.
struct ClusterView {
    std::vector<std::uint32_t> pre_ids;
    std::vector<std::uint32_t> post_ids;
    std::vector<std::size_t> ps;
    std::vector<std::size_t> qs;
    std::vector<double> spikes;
    std::vector<std::vector<std::size_t>> syn_of_pre;
    std::vector<std::vector<std::size_t>> syn_of_post;
};

ClusterView make_view(const Cluster &cluster)
{
    ClusterView v;
    std::unordered_map<std::uint32_t, std::size_t> pre_slot;
    std::unordered_map<std::uint32_t, std::size_t> post_slot;
    for (const Synapse &s : cluster.internal_synapses)
    {
        if (!pre_slot.contains(s.pre))
        {
            pre_slot[s.pre] = 0;
            v.pre_ids.push_back(s.pre);
        }
        if (!post_slot.contains(s.post))
        {
            post_slot[s.post] = 0;
            v.post_ids.push_back(s.post);
        }
    }
    std::sort(v.pre_ids.begin(), v.pre_ids.end());
    std::sort(v.post_ids.begin(), v.post_ids.end());
    for (std::size_t i = 0; i < v.pre_ids.size(); ++i)
    {
        pre_slot[v.pre_ids[i]] = i;
    }
    for (std::size_t i = 0; i < v.post_ids.size(); ++i)
    {
        post_slot[v.post_ids[i]] = i;
    }
    v.syn_of_pre.resize(v.pre_ids.size());
    v.syn_of_post.resize(v.post_ids.size());
    for (const Synapse &s : cluster.internal_synapses)
    {
        const std::size_t idx = v.ps.size();
        v.ps.push_back(pre_slot[s.pre]);
        v.qs.push_back(post_slot[s.post]);
        v.spikes.push_back(static_cast<double>(s.spikes));
        v.syn_of_pre[pre_slot[s.pre]].push_back(idx);
        v.syn_of_post[post_slot[s.post]].push_back(idx);
    }
    return v;
}

// Row assignment per pre slot, column assignment per post slot.
struct Layout {
    std::vector<std::size_t> row_of_pre;
    std::vector<std::size_t> col_of_post;
    std::vector<bool> row_used;
    std::vector<bool> col_used;
};

enum class MoveKind { row_swap, row_move, col_swap, col_move, pair_swap };

// pair_swap exchanges the full (row, col) footprint of two synapses with
// distinct pres and posts; the others permute one side.
struct Move {
    MoveKind kind;
    std::size_t a = 0;
    std::size_t b = 0;
};

void apply_move(Layout &lay, const ClusterView &v, const Move &m)
{
    switch (m.kind)
    {
    case MoveKind::row_swap:
        std::swap(lay.row_of_pre[m.a], lay.row_of_pre[m.b]);
        break;
    case MoveKind::row_move:
        lay.row_used[lay.row_of_pre[m.a]] = false;
        lay.row_of_pre[m.a] = m.b;
        lay.row_used[m.b] = true;
        break;
    case MoveKind::col_swap:
        std::swap(lay.col_of_post[m.a], lay.col_of_post[m.b]);
        break;
    case MoveKind::col_move:
        lay.col_used[lay.col_of_post[m.a]] = false;
        lay.col_of_post[m.a] = m.b;
        lay.col_used[m.b] = true;
        break;
    case MoveKind::pair_swap:
        std::swap(lay.row_of_pre[v.ps[m.a]], lay.row_of_pre[v.ps[m.b]]);
        std::swap(lay.col_of_post[v.qs[m.a]], lay.col_of_post[v.qs[m.b]]);
        break;
    }
}

class PlacementSearch {
public:
    PlacementSearch(const ClusterView &v, const CrossbarProfile &prof)
            : view_(v), prof_(prof), rows_(prof.geometry().rows),
              cols_(prof.geometry().cols)
    {
    }

    std::size_t path_of(const Layout &lay, std::size_t syn) const
    {
        return lay.col_of_post[view_.qs[syn]] +
                (rows_ - 1 - lay.row_of_pre[view_.ps[syn]]);
    }

    double latency_term(const Layout &lay, std::size_t syn) const
    {
        return view_.spikes[syn] *
                prof_.at_path(path_of(lay, syn)).prog_latency_s;
    }

    double latency_sum(const Layout &lay) const
    {
        double sum = 0.0;
        for (std::size_t s = 0; s < view_.ps.size(); ++s)
        {
            sum += latency_term(lay, s);
        }
        return sum;
    }

    double lifetime_of(const Layout &lay, std::size_t syn) const
    {
        return prof_.at_path(path_of(lay, syn)).endurance_cycles /
                view_.spikes[syn];
    }

    double lifetime_min(const Layout &lay) const
    {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < view_.ps.size(); ++s)
        {
            m = std::min(m, lifetime_of(lay, s));
        }
        return m;
    }

    // Ascending sorted endurance/spikes vector; compared leximin so that
    // plateaus of the plain minimum can still be escaped.
    std::vector<double> lifetime_vector(const Layout &lay) const
    {
        std::vector<double> vals(view_.ps.size());
        for (std::size_t s = 0; s < view_.ps.size(); ++s)
        {
            vals[s] = lifetime_of(lay, s);
        }
        std::sort(vals.begin(), vals.end());
        return vals;
    }

    std::vector<Move> full_neighborhood(const Layout &lay) const
    {
        std::vector<Move> moves;
        const std::size_t np = view_.pre_ids.size();
        const std::size_t nq = view_.post_ids.size();
        for (std::size_t i = 0; i < np; ++i)
        {
            for (std::size_t j = i + 1; j < np; ++j)
            {
                moves.push_back({MoveKind::row_swap, i, j});
            }
            for (std::size_t r = 0; r < rows_; ++r)
            {
                if (!lay.row_used[r])
                {
                    moves.push_back({MoveKind::row_move, i, r});
                }
            }
        }
        for (std::size_t i = 0; i < nq; ++i)
        {
            for (std::size_t j = i + 1; j < nq; ++j)
            {
                moves.push_back({MoveKind::col_swap, i, j});
            }
            for (std::size_t c = 0; c < cols_; ++c)
            {
                if (!lay.col_used[c])
                {
                    moves.push_back({MoveKind::col_move, i, c});
                }
            }
        }
        const std::size_t n = view_.ps.size();
        for (std::size_t s = 0; s < n; ++s)
        {
            for (std::size_t t = s + 1; t < n; ++t)
            {
                if (view_.ps[s] != view_.ps[t] && view_.qs[s] != view_.qs[t])
                {
                    moves.push_back({MoveKind::pair_swap, s, t});
                }
            }
        }
        return moves;
    }

    // First-improvement climb with full re-evaluation; meant for small
    // clusters where the objectives need exactness. Single moves come
    // first; paired row x column moves catch optima that no single-side
    // permutation change can reach.
    template <typename Eval, typename Better>
    void climb_small(Layout &lay, const Eval &eval, const Better &better) const
    {
        constexpr int kMaxSteps = 4096;
        constexpr std::size_t kMaxCompound = 250000;
        auto current = eval(lay);
        for (int step = 0; step < kMaxSteps; ++step)
        {
            bool improved = false;
            for (const Move &m : full_neighborhood(lay))
            {
                Layout trial = lay;
                apply_move(trial, view_, m);
                auto value = eval(trial);
                if (better(value, current))
                {
                    lay = std::move(trial);
                    current = std::move(value);
                    improved = true;
                    break;
                }
            }
            if (!improved)
            {
                const std::vector<Move> rows = one_side_moves(lay, true);
                const std::vector<Move> cols = one_side_moves(lay, false);
                if (rows.size() * cols.size() <= kMaxCompound)
                {
                    for (const Move &mr : rows)
                    {
                        for (const Move &mc : cols)
                        {
                            Layout trial = lay;
                            apply_move(trial, view_, mr);
                            apply_move(trial, view_, mc);
                            auto value = eval(trial);
                            if (better(value, current))
                            {
                                lay = std::move(trial);
                                current = std::move(value);
                                improved = true;
                                break;
                            }
                        }
                        if (improved)
                        {
                            break;
                        }
                    }
                }
            }
            if (!improved)
            {
                return;
            }
        }
    }

    // Latency-sum climb with delta evaluation for large clusters.
    void climb_latency_large(Layout &lay) const
    {
        constexpr int kMaxSteps = 4096;
        double current = latency_sum(lay);
        for (int step = 0; step < kMaxSteps; ++step)
        {
            bool improved = false;
            for (const Move &m : side_moves(lay))
            {
                const double delta = latency_delta(lay, m);
                if (delta < -1e-12 * std::abs(current) - 1e-300)
                {
                    apply_move(lay, view_, m);
                    current += delta;
                    improved = true;
                    break;
                }
            }
            if (!improved)
            {
                return;
            }
        }
    }

    // Only moves touching the bottleneck synapse can raise the minimum.
    void climb_lifetime_large(Layout &lay) const
    {
        const std::size_t n = view_.ps.size();
        const int max_steps = static_cast<int>(4 * (rows_ + cols_));
        for (int step = 0; step < max_steps; ++step)
        {
            double min_val = std::numeric_limits<double>::infinity();
            std::size_t bottleneck = 0;
            for (std::size_t s = 0; s < n; ++s)
            {
                const double val = lifetime_of(lay, s);
                if (val < min_val)
                {
                    min_val = val;
                    bottleneck = s;
                }
            }
            bool improved = false;
            for (const Move &m : bottleneck_moves(lay, bottleneck))
            {
                Layout trial = lay;
                apply_move(trial, view_, m);
                if (lifetime_min(trial) > min_val)
                {
                    lay = std::move(trial);
                    improved = true;
                    break;
                }
            }
            if (!improved)
            {
                return;
            }
        }
    }

private:
    std::vector<Move> one_side_moves(const Layout &lay, bool row_side) const
    {
        std::vector<Move> moves;
        const std::size_t slots =
                row_side ? view_.pre_ids.size() : view_.post_ids.size();
        const std::size_t range = row_side ? rows_ : cols_;
        const std::vector<bool> &used =
                row_side ? lay.row_used : lay.col_used;
        for (std::size_t i = 0; i < slots; ++i)
        {
            for (std::size_t j = i + 1; j < slots; ++j)
            {
                moves.push_back({row_side ? MoveKind::row_swap
                                          : MoveKind::col_swap,
                        i, j});
            }
            for (std::size_t x = 0; x < range; ++x)
            {
                if (!used[x])
                {
                    moves.push_back({row_side ? MoveKind::row_move
                                              : MoveKind::col_move,
                            i, x});
                }
            }
        }
        return moves;
    }

    std::vector<Move> side_moves(const Layout &lay) const
    {
        std::vector<Move> moves;
        const std::size_t np = view_.pre_ids.size();
        const std::size_t nq = view_.post_ids.size();
        for (std::size_t i = 0; i < np; ++i)
        {
            for (std::size_t j = i + 1; j < np; ++j)
            {
                moves.push_back({MoveKind::row_swap, i, j});
            }
            for (std::size_t r = 0; r < rows_; ++r)
            {
                if (!lay.row_used[r])
                {
                    moves.push_back({MoveKind::row_move, i, r});
                }
            }
        }
        for (std::size_t i = 0; i < nq; ++i)
        {
            for (std::size_t j = i + 1; j < nq; ++j)
            {
                moves.push_back({MoveKind::col_swap, i, j});
            }
            for (std::size_t c = 0; c < cols_; ++c)
            {
                if (!lay.col_used[c])
                {
                    moves.push_back({MoveKind::col_move, i, c});
                }
            }
        }
        return moves;
    }

    std::vector<Move> bottleneck_moves(
            const Layout &lay, std::size_t bottleneck) const
    {
        std::vector<Move> moves;
        const std::size_t bp = view_.ps[bottleneck];
        const std::size_t bq = view_.qs[bottleneck];
        for (std::size_t i = 0; i < view_.pre_ids.size(); ++i)
        {
            if (i != bp)
            {
                moves.push_back(
                        {MoveKind::row_swap, std::min(i, bp), std::max(i, bp)});
            }
        }
        for (std::size_t r = 0; r < rows_; ++r)
        {
            if (!lay.row_used[r])
            {
                moves.push_back({MoveKind::row_move, bp, r});
            }
        }
        for (std::size_t i = 0; i < view_.post_ids.size(); ++i)
        {
            if (i != bq)
            {
                moves.push_back(
                        {MoveKind::col_swap, std::min(i, bq), std::max(i, bq)});
            }
        }
        for (std::size_t c = 0; c < cols_; ++c)
        {
            if (!lay.col_used[c])
            {
                moves.push_back({MoveKind::col_move, bq, c});
            }
        }
        return moves;
    }

    double pre_latency(const Layout &lay, std::size_t pre_slot,
            std::size_t row) const
    {
        double sum = 0.0;
        for (std::size_t s : view_.syn_of_pre[pre_slot])
        {
            const std::size_t path =
                    lay.col_of_post[view_.qs[s]] + (rows_ - 1 - row);
            sum += view_.spikes[s] * prof_.at_path(path).prog_latency_s;
        }
        return sum;
    }

    double post_latency(const Layout &lay, std::size_t post_slot,
            std::size_t col) const
    {
        double sum = 0.0;
        for (std::size_t s : view_.syn_of_post[post_slot])
        {
            const std::size_t path =
                    col + (rows_ - 1 - lay.row_of_pre[view_.ps[s]]);
            sum += view_.spikes[s] * prof_.at_path(path).prog_latency_s;
        }
        return sum;
    }

    double latency_delta(const Layout &lay, const Move &m) const
    {
        switch (m.kind)
        {
        case MoveKind::row_swap:
        {
            const std::size_t ra = lay.row_of_pre[m.a];
            const std::size_t rb = lay.row_of_pre[m.b];
            return pre_latency(lay, m.a, rb) + pre_latency(lay, m.b, ra) -
                    pre_latency(lay, m.a, ra) - pre_latency(lay, m.b, rb);
        }
        case MoveKind::row_move:
            return pre_latency(lay, m.a, m.b) -
                    pre_latency(lay, m.a, lay.row_of_pre[m.a]);
        case MoveKind::col_swap:
        {
            const std::size_t ca = lay.col_of_post[m.a];
            const std::size_t cb = lay.col_of_post[m.b];
            return post_latency(lay, m.a, cb) + post_latency(lay, m.b, ca) -
                    post_latency(lay, m.a, ca) - post_latency(lay, m.b, cb);
        }
        case MoveKind::col_move:
            return post_latency(lay, m.a, m.b) -
                    post_latency(lay, m.a, lay.col_of_post[m.a]);
        case MoveKind::pair_swap:
            break;
        }
        return 0.0;
    }

    const ClusterView &view_;
    const CrossbarProfile &prof_;
    std::size_t rows_;
    std::size_t cols_;
};

bool leximin_better(
        const std::vector<double> &a, const std::vector<double> &b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        if (a[i] != b[i])
        {
            return a[i] > b[i];
        }
    }
    return false;
}

// Exact placement for small independent clusters, where every synapse has
// its own pre and post neuron. An optimal placement then only uses the n
// rows and n columns nearest the relevant corner, and a cell's profile
// depends on the offsets (i, j) from that corner only through i + j, so
// the search space collapses to matchings of [0,n) x [0,n).
class IndependentExact {
public:
    IndependentExact(const ClusterView &v, const CrossbarProfile &prof,
            std::size_t rows, std::size_t cols)
            : view_(v), prof_(prof), rows_(rows), cols_(cols),
              n_(v.ps.size()), order_(v.ps.size())
    {
        for (std::size_t s = 0; s < n_; ++s)
        {
            order_[s] = s;
        }
        std::stable_sort(order_.begin(), order_.end(),
                [&](std::size_t a, std::size_t b) {
                    return view_.spikes[a] > view_.spikes[b];
                });
    }

    static bool applicable(const ClusterView &v)
    {
        return v.ps.size() == v.pre_ids.size() &&
                v.ps.size() == v.post_ids.size() && v.ps.size() <= 8 &&
                !v.ps.empty();
    }

    // Maximize the minimum endurance/spikes. Binary search over the
    // achievable values; feasibility of the induced per-synapse path
    // thresholds is decided exactly over offset matchings.
    void solve_lifetime(Layout &lay)
    {
        const std::size_t p_max = rows_ + cols_ - 2;
        std::vector<double> candidates;
        for (std::size_t s = 0; s < n_; ++s)
        {
            if (view_.spikes[s] <= 0.0)
            {
                continue;
            }
            for (std::size_t p = 0; p <= p_max; ++p)
            {
                candidates.push_back(
                        prof_.at_path(p).endurance_cycles / view_.spikes[s]);
            }
        }
        if (candidates.empty())
        {
            // no activations anywhere; any corner packing works
            std::vector<std::pair<int, int>> pairs(n_);
            for (std::size_t k = 0; k < n_; ++k)
            {
                pairs[k] = {static_cast<int>(k), static_cast<int>(k)};
            }
            write_layout(lay, pairs, true);
            return;
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()),
                candidates.end());

        // largest feasible candidate; the smallest is always feasible
        std::vector<std::pair<int, int>> pairs;
        std::vector<std::pair<int, int>> best_pairs;
        long long lo = 0;
        long long hi = static_cast<long long>(candidates.size()) - 1;
        while (lo <= hi)
        {
            const long long mid = lo + (hi - lo) / 2;
            if (lifetime_feasible(candidates[mid], pairs))
            {
                best_pairs = pairs;
                lo = mid + 1;
            }
            else
            {
                hi = mid - 1;
            }
        }
        if (best_pairs.empty())
        {
            lifetime_feasible(candidates.front(), best_pairs);
        }
        write_layout(lay, best_pairs, true);
    }

    // Minimize the summed spikes x latency over offset matchings by a
    // min-cost sweep of (used-i, used-j) mask pairs.
    void solve_latency(Layout &lay)
    {
        const std::size_t states = 1u << n_;
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<std::vector<double>> cost(
                states, std::vector<double>(states, inf));
        std::vector<std::vector<std::pair<std::uint8_t, std::uint8_t>>> from(
                states,
                std::vector<std::pair<std::uint8_t, std::uint8_t>>(
                        states, {0, 0}));
        cost[0][0] = 0.0;

        std::vector<std::vector<unsigned>> by_count(n_ + 1);
        for (unsigned m = 0; m < states; ++m)
        {
            by_count[static_cast<unsigned>(__builtin_popcount(m))].push_back(m);
        }
        for (std::size_t k = 0; k < n_; ++k)
        {
            const double a = view_.spikes[order_[k]];
            for (unsigned mi : by_count[k])
            {
                for (unsigned mj : by_count[k])
                {
                    if (cost[mi][mj] == inf)
                    {
                        continue;
                    }
                    for (std::size_t i = 0; i < n_; ++i)
                    {
                        if (mi & (1u << i))
                        {
                            continue;
                        }
                        for (std::size_t j = 0; j < n_; ++j)
                        {
                            if (mj & (1u << j))
                            {
                                continue;
                            }
                            const double c = cost[mi][mj] +
                                    a *
                                            prof_.at_path(i + j)
                                                    .prog_latency_s;
                            const unsigned ni = mi | (1u << i);
                            const unsigned nj = mj | (1u << j);
                            if (c < cost[ni][nj])
                            {
                                cost[ni][nj] = c;
                                from[ni][nj] = {
                                        static_cast<std::uint8_t>(i),
                                        static_cast<std::uint8_t>(j)};
                            }
                        }
                    }
                }
            }
        }

        std::vector<std::pair<int, int>> pairs(n_);
        unsigned mi = states - 1;
        unsigned mj = states - 1;
        for (std::size_t k = n_; k-- > 0;)
        {
            const auto [i, j] = from[mi][mj];
            pairs[k] = {i, j};
            mi &= ~(1u << i);
            mj &= ~(1u << j);
        }
        write_layout(lay, pairs, false);
    }

private:
    // thresholds -> offset demands -> exact matching with memoized DFS
    bool lifetime_feasible(
            double value, std::vector<std::pair<int, int>> &pairs)
    {
        const int p_max = static_cast<int>(rows_ + cols_ - 2);
        std::vector<int> demands(n_);
        for (std::size_t k = 0; k < n_; ++k)
        {
            const double a = view_.spikes[order_[k]];
            int theta = 0;
            if (a > 0.0)
            {
                while (theta <= p_max &&
                        prof_.at_path(theta).endurance_cycles < value * a)
                {
                    ++theta;
                }
                if (theta > p_max)
                {
                    return false;
                }
            }
            demands[k] = p_max - theta;
            if (demands[k] < 0)
            {
                return false;
            }
        }
        // a synapse with more spikes has a tighter demand; sorted already
        pairs.assign(n_, {-1, -1});
        std::vector<bool> dead(1u << (2 * n_), false);
        return match(0, 0, 0, demands, pairs, dead);
    }

    bool match(std::size_t k, unsigned mi, unsigned mj,
            const std::vector<int> &demands,
            std::vector<std::pair<int, int>> &pairs, std::vector<bool> &dead)
    {
        if (k == n_)
        {
            return true;
        }
        const unsigned key = mi | (mj << n_);
        if (dead[key])
        {
            return false;
        }
        for (std::size_t i = 0; i < n_; ++i)
        {
            if (mi & (1u << i))
            {
                continue;
            }
            for (std::size_t j = 0; j < n_; ++j)
            {
                if ((mj & (1u << j)) ||
                        static_cast<int>(i + j) > demands[k])
                {
                    continue;
                }
                pairs[k] = {static_cast<int>(i), static_cast<int>(j)};
                if (match(k + 1, mi | (1u << i), mj | (1u << j), demands,
                            pairs, dead))
                {
                    return true;
                }
            }
        }
        dead[key] = true;
        return false;
    }

    // offsets measure from the long-path corner for lifetime (top rows,
    // right columns) and from the short-path corner for latency
    void write_layout(Layout &lay,
            const std::vector<std::pair<int, int>> &pairs, bool long_corner)
    {
        lay.row_of_pre.assign(view_.pre_ids.size(), 0);
        lay.col_of_post.assign(view_.post_ids.size(), 0);
        lay.row_used.assign(rows_, false);
        lay.col_used.assign(cols_, false);
        for (std::size_t k = 0; k < n_; ++k)
        {
            const std::size_t s = order_[k];
            const auto [i, j] = pairs[k];
            const std::size_t row = long_corner
                    ? static_cast<std::size_t>(i)
                    : rows_ - 1 - static_cast<std::size_t>(i);
            const std::size_t col = long_corner
                    ? cols_ - 1 - static_cast<std::size_t>(j)
                    : static_cast<std::size_t>(j);
            lay.row_of_pre[view_.ps[s]] = row;
            lay.col_of_post[view_.qs[s]] = col;
            lay.row_used[row] = true;
            lay.col_used[col] = true;
        }
    }

    const ClusterView &view_;
    const CrossbarProfile &prof_;
    std::size_t rows_;
    std::size_t cols_;
    std::size_t n_;
    std::vector<std::size_t> order_;
};

std::vector<double> slot_key(const std::vector<std::vector<std::size_t>> &of,
        const std::vector<double> &spikes, bool use_max)
{
    std::vector<double> key(of.size(), 0.0);
    for (std::size_t i = 0; i < of.size(); ++i)
    {
        for (std::size_t s : of[i])
        {
            key[i] = use_max ? std::max(key[i], spikes[s]) : key[i] + spikes[s];
        }
    }
    return key;
}

std::vector<std::size_t> order_by_key_desc(const std::vector<double> &key)
{
    std::vector<std::size_t> order(key.size());
    for (std::size_t i = 0; i < key.size(); ++i)
    {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    return order;
}

Layout seed_layout(const ClusterView &v, std::size_t rows, std::size_t cols,
        PlacementPolicy policy)
{
    Layout lay;
    lay.row_of_pre.resize(v.pre_ids.size());
    lay.col_of_post.resize(v.post_ids.size());
    lay.row_used.assign(rows, false);
    lay.col_used.assign(cols, false);

    if (policy == PlacementPolicy::row_major)
    {
        for (std::size_t i = 0; i < v.pre_ids.size(); ++i)
        {
            lay.row_of_pre[i] = i;
        }
        for (std::size_t i = 0; i < v.post_ids.size(); ++i)
        {
            lay.col_of_post[i] = i;
        }
    }
    else if (policy == PlacementPolicy::performance_first)
    {
        // Busiest pre on the bottom row, busiest post on the leftmost
        // column: both shorten the paths carrying the most spikes.
        const auto pk = slot_key(v.syn_of_pre, v.spikes, false);
        const auto qk = slot_key(v.syn_of_post, v.spikes, false);
        std::size_t r = rows;
        for (std::size_t i : order_by_key_desc(pk))
        {
            lay.row_of_pre[i] = --r;
        }
        std::size_t c = 0;
        for (std::size_t i : order_by_key_desc(qk))
        {
            lay.col_of_post[i] = c++;
        }
    }
    else
    {
        // Hottest traffic goes to the longest paths: top rows, right
        // columns, where endurance is highest.
        const auto pk = slot_key(v.syn_of_pre, v.spikes, true);
        const auto qk = slot_key(v.syn_of_post, v.spikes, true);
        std::size_t r = 0;
        for (std::size_t i : order_by_key_desc(pk))
        {
            lay.row_of_pre[i] = r++;
        }
        std::size_t c = cols;
        for (std::size_t i : order_by_key_desc(qk))
        {
            lay.col_of_post[i] = --c;
        }
    }
    for (std::size_t r : lay.row_of_pre)
    {
        lay.row_used[r] = true;
    }
    for (std::size_t c : lay.col_of_post)
    {
        lay.col_used[c] = true;
    }
    return lay;
}

} // namespace

PlacementPolicy placement_policy_from_string(const std::string &name)
{
    if (name == "row_major")
    {
        return PlacementPolicy::row_major;
    }
    if (name == "performance_first")
    {
        return PlacementPolicy::performance_first;
    }
    if (name == "lifetime_first")
    {
        return PlacementPolicy::lifetime_first;
    }
    throw std::invalid_argument("unknown placement policy '" + name + "'");
}

std::string to_string(PlacementPolicy policy)
{
    switch (policy)
    {
    case PlacementPolicy::row_major:
        return "row_major";
    case PlacementPolicy::performance_first:
        return "performance_first";
    case PlacementPolicy::lifetime_first:
        return "lifetime_first";
    }
    return "?";
}

CellAssignment place_synapses(const Cluster &cluster,
        const CrossbarProfile &profile, PlacementPolicy policy)
{
    const std::size_t rows = profile.geometry().rows;
    const std::size_t cols = profile.geometry().cols;
    const ClusterView view = make_view(cluster);
    const std::size_t n = view.ps.size();

    if (view.pre_ids.size() > rows || view.post_ids.size() > cols ||
            n > rows * cols)
    {
        throw std::invalid_argument("cluster " + std::to_string(cluster.id) +
                " does not fit a " + std::to_string(rows) + "x" +
                std::to_string(cols) + " crossbar (" +
                std::to_string(view.pre_ids.size()) + " inputs, " +
                std::to_string(view.post_ids.size()) + " outputs, " +
                std::to_string(n) + " synapses)");
    }

    Layout lay = seed_layout(view, rows, cols, policy);
    const PlacementSearch search(view, profile);
    constexpr std::size_t kSmall = 48;
    const bool exact = policy != PlacementPolicy::row_major &&
            IndependentExact::applicable(view);

    if (policy == PlacementPolicy::performance_first)
    {
        if (exact)
        {
            IndependentExact(view, profile, rows, cols).solve_latency(lay);
        }
        else if (n <= kSmall)
        {
            search.climb_small(
                    lay, [&](const Layout &l) { return search.latency_sum(l); },
                    [](double a, double b) {
                        return a < b - 1e-12 * std::abs(b);
                    });
        }
        else
        {
            search.climb_latency_large(lay);
        }
    }
    else if (policy == PlacementPolicy::lifetime_first)
    {
        if (exact)
        {
            IndependentExact(view, profile, rows, cols).solve_lifetime(lay);
            // the minimum is optimal; the climb can only refine the levels
            // above it
            search.climb_small(
                    lay,
                    [&](const Layout &l) { return search.lifetime_vector(l); },
                    [](const std::vector<double> &a,
                            const std::vector<double> &b) {
                        return leximin_better(a, b);
                    });
        }
        else if (n <= kSmall)
        {
            search.climb_small(
                    lay,
                    [&](const Layout &l) { return search.lifetime_vector(l); },
                    [](const std::vector<double> &a,
                            const std::vector<double> &b) {
                        return leximin_better(a, b);
                    });
        }
        else
        {
            search.climb_lifetime_large(lay);
        }
    }

    CellAssignment out;
    out.cells.resize(n);
    for (std::size_t s = 0; s < n; ++s)
    {
        out.cells[s] = CellCoordinate{
                lay.row_of_pre[view.ps[s]], lay.col_of_post[view.qs[s]]};
    }
    return out;
}

} // namespace xbarmap
