#include "safeplan/planner.hpp"

#include "safeplan/errors.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <limits>
#include <queue>
#include <unordered_set>

namespace safeplan {

namespace {

using NodeId = std::uint32_t;
constexpr NodeId no_node = std::numeric_limits<NodeId>::max();

// Interned states stored back to back in one buffer.
class StateRegistry {
public:
    explicit StateRegistry(std::size_t num_vars)
        : width_(num_vars), ids_(64, Hash{this}, Equal{this}) {}

    // Returns (id, inserted).
    std::pair<NodeId, bool> insert(std::span<const ValueId> values) {
        auto candidate = static_cast<NodeId>(size());
        data_.insert(data_.end(), values.begin(), values.end());
        auto [it, inserted] = ids_.insert(candidate);
        if (!inserted)
            data_.resize(data_.size() - width_);
        return {*it, inserted};
    }

    std::span<const ValueId> get(NodeId id) const {
        return {data_.data() + static_cast<std::size_t>(id) * width_, width_};
    }

    std::size_t size() const {
        return width_ == 0 ? ids_.size() : data_.size() / width_;
    }

private:
    struct Hash {
        const StateRegistry *reg;
        std::size_t operator()(NodeId id) const {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (ValueId v : reg->get(id)) {
                h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
                h *= 0x100000001b3ULL;
            }
            return static_cast<std::size_t>(h);
        }
    };
    struct Equal {
        const StateRegistry *reg;
        bool operator()(NodeId a, NodeId b) const {
            auto x = reg->get(a);
            auto y = reg->get(b);
            return std::equal(x.begin(), x.end(), y.begin(), y.end());
        }
    };

    std::size_t width_;
    std::vector<ValueId> data_;
    std::unordered_set<NodeId, Hash, Equal> ids_;
};

std::vector<const Action *> sorted_actions(const ActionModel &model) {
    std::vector<const Action *> ops;
    ops.reserve(model.num_actions());
    for (const auto &[name, a] : model.actions())
        ops.push_back(&a);
    return ops;
}

bool applicable(std::span<const ValueId> s, const Action &a) {
    for (const Fact &f : a.pre()) {
        if (s[static_cast<std::size_t>(f.var)] != f.value)
            return false;
    }
    return true;
}

void apply_into(std::span<const ValueId> s, const Action &a, std::vector<ValueId> &out) {
    out.assign(s.begin(), s.end());
    for (const Fact &f : a.eff())
        out[static_cast<std::size_t>(f.var)] = f.value;
}

bool goal_reached(std::span<const ValueId> s, const PartialAssignment &goal) {
    for (const Fact &f : goal) {
        if (s[static_cast<std::size_t>(f.var)] != f.value)
            return false;
    }
    return true;
}

int max_effect_size(const ActionModel &model) {
    std::size_t k = 0;
    for (const auto &[name, a] : model.actions())
        k = std::max(k, a.eff().size());
    return static_cast<int>(std::max<std::size_t>(k, 1));
}

class Clock {
public:
    Clock() : start_(std::chrono::steady_clock::now()) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

struct Node {
    NodeId parent = no_node;
    std::uint32_t op = 0;
    std::uint32_t g = 0;
    bool closed = false;
};

Plan extract_plan(const std::vector<Node> &nodes, NodeId goal,
                  const std::vector<const Action *> &ops) {
    Plan plan;
    for (NodeId n = goal; nodes[n].parent != no_node; n = nodes[n].parent)
        plan.steps.push_back(ops[nodes[n].op]->name());
    std::reverse(plan.steps.begin(), plan.steps.end());
    return plan;
}

void check_problem(const Problem &prob) {
    check_state(prob.model.variables(), prob.init);
    check_assignment(prob.model.variables(), prob.goal);
}

} // namespace

const char *to_string(SearchOutcome o) {
    switch (o) {
    case SearchOutcome::plan:
        return "plan";
    case SearchOutcome::no_plan:
        return "no_plan";
    case SearchOutcome::resource_limit:
        return "resource_limit";
    }
    return "unknown";
}

int goal_count_heuristic(const State &s, const PartialAssignment &goal, int max_effect) {
    int unsatisfied = 0;
    for (const Fact &f : goal) {
        if (s[f.var] != f.value)
            ++unsatisfied;
    }
    const int k = std::max(max_effect, 1);
    return (unsatisfied + k - 1) / k;
}

SearchResult solve(const Problem &prob, const SearchLimits &limits) {
    check_problem(prob);
    Clock clock;
    SearchResult result;
    const auto ops = sorted_actions(prob.model);
    const int k = max_effect_size(prob.model);

    StateRegistry registry(prob.init.size());
    std::vector<Node> nodes;

    auto heuristic = [&](std::span<const ValueId> s) {
        int unsatisfied = 0;
        for (const Fact &f : prob.goal) {
            if (s[static_cast<std::size_t>(f.var)] != f.value)
                ++unsatisfied;
        }
        return static_cast<std::uint32_t>((unsatisfied + k - 1) / k);
    };

    struct Entry {
        std::uint32_t f;
        std::uint32_t h;
        std::uint32_t g;
        NodeId node;
    };
    // priority_queue pops the "largest", so the comparator says whether a
    // ranks below b.
    auto worse = [&registry](const Entry &a, const Entry &b) {
        if (a.f != b.f)
            return a.f > b.f;
        if (a.h != b.h)
            return a.h > b.h;
        auto sa = registry.get(a.node);
        auto sb = registry.get(b.node);
        return std::lexicographical_compare(sb.begin(), sb.end(), sa.begin(), sa.end());
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

    auto [root, _] = registry.insert(prob.init.values());
    nodes.push_back(Node{});
    std::uint32_t h0 = heuristic(registry.get(root));
    open.push({h0, h0, 0, root});
    result.stats.generated = 1;
    result.stats.peak_frontier = 1;

    std::vector<ValueId> buffer;
    while (!open.empty()) {
        Entry top = open.top();
        open.pop();
        Node &node = nodes[top.node];
        if (node.closed || top.g != node.g)
            continue;
        node.closed = true;
        ++result.stats.expanded;

        if (goal_reached(registry.get(top.node), prob.goal)) {
            result.outcome = SearchOutcome::plan;
            result.plan = extract_plan(nodes, top.node, ops);
            result.stats.wall_seconds = clock.elapsed();
            return result;
        }
        if ((result.stats.expanded & 1023) == 0 && clock.elapsed() > limits.max_seconds) {
            result.outcome = SearchOutcome::resource_limit;
            result.stats.wall_seconds = clock.elapsed();
            return result;
        }

        for (std::size_t i = 0; i < ops.size(); ++i) {
            auto state = registry.get(top.node);
            if (!applicable(state, *ops[i]))
                continue;
            apply_into(state, *ops[i], buffer);
            if (result.stats.generated >= limits.max_generated) {
                result.outcome = SearchOutcome::resource_limit;
                result.stats.wall_seconds = clock.elapsed();
                return result;
            }
            ++result.stats.generated;
            auto [succ, inserted] = registry.insert(buffer);
            const std::uint32_t g = top.g + 1;
            if (inserted) {
                nodes.push_back(Node{top.node, static_cast<std::uint32_t>(i), g, false});
            } else {
                Node &existing = nodes[succ];
                if (existing.closed || existing.g <= g)
                    continue;
                existing.parent = top.node;
                existing.op = static_cast<std::uint32_t>(i);
                existing.g = g;
            }
            std::uint32_t h = heuristic(registry.get(succ));
            open.push({g + h, h, g, succ});
        }
        result.stats.peak_frontier =
            std::max<std::uint64_t>(result.stats.peak_frontier, open.size());
    }
    result.outcome = SearchOutcome::no_plan;
    result.stats.wall_seconds = clock.elapsed();
    return result;
}

SearchResult solve_bfs(const Problem &prob, const SearchLimits &limits) {
    check_problem(prob);
    Clock clock;
    SearchResult result;
    const auto ops = sorted_actions(prob.model);

    StateRegistry registry(prob.init.size());
    std::vector<Node> nodes;
    std::deque<NodeId> queue;

    auto [root, _] = registry.insert(prob.init.values());
    nodes.push_back(Node{});
    result.stats.generated = 1;
    result.stats.peak_frontier = 1;
    if (goal_reached(registry.get(root), prob.goal)) {
        result.stats.expanded = 1;
        result.outcome = SearchOutcome::plan;
        result.stats.wall_seconds = clock.elapsed();
        return result;
    }
    queue.push_back(root);

    std::vector<ValueId> buffer;
    while (!queue.empty()) {
        NodeId cur = queue.front();
        queue.pop_front();
        ++result.stats.expanded;
        if ((result.stats.expanded & 1023) == 0 && clock.elapsed() > limits.max_seconds) {
            result.outcome = SearchOutcome::resource_limit;
            result.stats.wall_seconds = clock.elapsed();
            return result;
        }
        for (std::size_t i = 0; i < ops.size(); ++i) {
            auto state = registry.get(cur);
            if (!applicable(state, *ops[i]))
                continue;
            apply_into(state, *ops[i], buffer);
            if (result.stats.generated >= limits.max_generated) {
                result.outcome = SearchOutcome::resource_limit;
                result.stats.wall_seconds = clock.elapsed();
                return result;
            }
            ++result.stats.generated;
            auto [succ, inserted] = registry.insert(buffer);
            if (!inserted)
                continue;
            nodes.push_back(Node{cur, static_cast<std::uint32_t>(i), nodes[cur].g + 1, false});
            if (goal_reached(registry.get(succ), prob.goal)) {
                result.outcome = SearchOutcome::plan;
                result.plan = extract_plan(nodes, succ, ops);
                result.stats.wall_seconds = clock.elapsed();
                return result;
            }
            queue.push_back(succ);
        }
        result.stats.peak_frontier = std::max<std::uint64_t>(result.stats.peak_frontier, queue.size());
    }
    result.outcome = SearchOutcome::no_plan;
    result.stats.wall_seconds = clock.elapsed();
    return result;
}

ReachabilityGraph explore(const ActionModel &model, const State &start, std::size_t cap) {
    check_state(model.variables(), start);
    ReachabilityGraph graph;
    const auto ops = sorted_actions(model);
    for (const Action *a : ops)
        graph.action_names.push_back(a->name());

    StateRegistry registry(start.size());
    registry.insert(start.values());
    graph.states.push_back(start);
    graph.edges.emplace_back();

    std::vector<ValueId> buffer;
    for (std::size_t cur = 0; cur < graph.states.size(); ++cur) {
        for (std::size_t i = 0; i < ops.size(); ++i) {
            auto state = registry.get(static_cast<NodeId>(cur));
            if (!applicable(state, *ops[i]))
                continue;
            apply_into(state, *ops[i], buffer);
            auto [succ, inserted] = registry.insert(buffer);
            if (inserted) {
                if (graph.states.size() >= cap) {
                    graph.truncated = true;
                    return graph;
                }
                graph.states.emplace_back(buffer);
                graph.edges.emplace_back();
            }
            graph.edges[cur].push_back({i, succ});
        }
    }
    return graph;
}

std::vector<std::optional<std::size_t>> goal_distances(const ReachabilityGraph &graph,
                                                       const PartialAssignment &goal) {
    const std::size_t n = graph.states.size();
    std::vector<std::vector<std::size_t>> reverse(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto &e : graph.edges[s])
            reverse[e.target].push_back(s);
    }
    std::vector<std::optional<std::size_t>> dist(n);
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
        if (graph.states[s].satisfies(goal)) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        std::size_t s = queue.front();
        queue.pop_front();
        for (std::size_t p : reverse[s]) {
            if (!dist[p]) {
                dist[p] = *dist[s] + 1;
                queue.push_back(p);
            }
        }
    }
    return dist;
}

} // namespace safeplan
