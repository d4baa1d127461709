#include "qsa/binomial.hpp"

#include <algorithm>
#include <functional>

#include "qsa/error.hpp"

namespace qsa {

void NodeBounds::validate() const {
    if (!(0 < p_lo)) fail("InvalidBounds", "(i) requires 0 < pi");
    if (!(p_lo <= p_hi)) fail("InvalidBounds", "(i) requires pi <= Pi");
    if (!(p_hi < 1)) fail("InvalidBounds", "(i) requires Pi < 1");
    if (!(d_lo <= d_hi)) fail("InvalidBounds", "(ii) requires d <= D");
    if (!(u_lo <= u_hi)) fail("InvalidBounds", "(ii) requires u <= U");
    if (!(0 < d_lo)) fail("InvalidBounds", "(iii) requires 0 < d");
    if (!(d_lo < 1)) fail("InvalidBounds", "(iii) requires d < 1");
    if (!(1 < u_hi)) fail("InvalidBounds", "(iii) requires 1 < U");
}

std::vector<Rat> grid_points(const Rat& lo, const Rat& hi, int count) {
    if (count < 1) fail("InvalidBounds", "grid needs at least one point");
    if (lo == hi) return {lo};
    // The endpoints are always part of the grid, so a proper interval never
    // discretizes to fewer than two points.
    if (count <= 2) return {lo, hi};
    std::vector<Rat> points;
    points.reserve(count);
    const Rat step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) points.push_back(lo + step * i);
    points.back() = hi; // exact endpoint, independent of the step arithmetic
    return points;
}

int TreeNode::child_index(const Rat& m) const {
    for (int j = 0; j < child_count(); ++j) {
        if (child_multipliers[j] == m) return j;
    }
    fail("InvalidChoice", "multiplier " + format_rational(m) + " is not a child of node \"" +
                              path + "\"");
}

Tree build_tree(const BinomialTreeSpec& spec) {
    if (spec.periods < 1) fail("InvalidBounds", "the tree needs at least one period");
    if (spec.grid < 1) fail("InvalidBounds", "the grid needs at least one point");
    Tree tree;
    tree.spec = spec;

    TreeNode root;
    root.path = "";
    tree.levels.push_back({root});

    for (int t = 0; t < spec.periods; ++t) {
        auto& level = tree.levels[t];
        std::vector<TreeNode> next;
        long produced = 0;
        for (std::size_t parent = 0; parent < level.size(); ++parent) {
            TreeNode& node = level[parent];
            const auto override_it = spec.node_bounds.find(node.path);
            node.bounds = override_it != spec.node_bounds.end() ? override_it->second : spec.bounds;
            node.bounds.validate();
            node.u_grid = grid_points(node.bounds.u_lo, node.bounds.u_hi, spec.grid);
            node.d_grid = grid_points(node.bounds.d_lo, node.bounds.d_hi, spec.grid);
            std::vector<Rat> multipliers = node.u_grid;
            multipliers.insert(multipliers.end(), node.d_grid.begin(), node.d_grid.end());
            std::sort(multipliers.begin(), multipliers.end());
            multipliers.erase(std::unique(multipliers.begin(), multipliers.end()),
                              multipliers.end());
            node.child_multipliers = std::move(multipliers);
            node.child_begin = static_cast<int>(next.size());

            for (const Rat& m : node.child_multipliers) {
                TreeNode child;
                child.parent = static_cast<int>(parent);
                child.multiplier = m;
                child.price = node.price * m;
                child.path = node.path.empty() ? format_rational(m)
                                               : node.path + "x" + format_rational(m);
                next.push_back(std::move(child));
                if (++produced > spec.leaf_cap)
                    fail("SizeCapExceeded", "level " + std::to_string(t + 1) + " exceeds " +
                                                std::to_string(spec.leaf_cap) + " nodes");
            }
        }
        tree.levels.push_back(std::move(next));
    }

    std::vector<std::string> atoms;
    atoms.reserve(tree.leaves().size());
    for (const auto& leaf : tree.leaves()) atoms.push_back(leaf.path);
    tree.leaf_space = make_space(std::move(atoms));
    return tree;
}

KernelChoice KernelChoice::per_step(const Tree& tree, const std::vector<KernelSelection>& steps) {
    if (static_cast<int>(steps.size()) != tree.periods())
        fail("InvalidChoice", "need one selection per period");
    KernelChoice choice;
    for (int t = 0; t < tree.periods(); ++t)
        choice.per_node.emplace_back(tree.levels[t].size(), steps[t]);
    return choice;
}

KernelChoice KernelChoice::homogeneous(const Tree& tree, const KernelSelection& selection) {
    return per_step(tree, std::vector<KernelSelection>(tree.periods(), selection));
}

void validate_choice(const Tree& tree, const KernelChoice& choice) {
    if (static_cast<int>(choice.per_node.size()) != tree.periods())
        fail("InvalidChoice", "need selections for every period");
    for (int t = 0; t < tree.periods(); ++t) {
        if (choice.per_node[t].size() != tree.levels[t].size())
            fail("InvalidChoice", "selection count mismatch at level " + std::to_string(t));
        for (std::size_t i = 0; i < tree.levels[t].size(); ++i) {
            const auto& node = tree.levels[t][i];
            const auto& sel = choice.per_node[t][i];
            const auto in_grid = [](const std::vector<Rat>& grid, const Rat& v) {
                return std::find(grid.begin(), grid.end(), v) != grid.end();
            };
            if (!in_grid(node.u_grid, sel.u))
                fail("InvalidChoice", "u = " + format_rational(sel.u) +
                                          " is not a grid point at node \"" + node.path + "\"");
            if (!in_grid(node.d_grid, sel.d))
                fail("InvalidChoice", "d = " + format_rational(sel.d) +
                                          " is not a grid point at node \"" + node.path + "\"");
            if (sel.p < node.bounds.p_lo || sel.p > node.bounds.p_hi)
                fail("InvalidChoice", "p = " + format_rational(sel.p) +
                                          " is outside the probability interval at node \"" +
                                          node.path + "\"");
        }
    }
}

Measure product_measure(const Tree& tree, const KernelChoice& choice, const std::string&) {
    validate_choice(tree, choice);
    std::vector<Rat> prob(1, Rat(1));
    for (int t = 0; t < tree.periods(); ++t) {
        std::vector<Rat> next(tree.levels[t + 1].size(), Rat(0));
        for (std::size_t i = 0; i < tree.levels[t].size(); ++i) {
            if (prob[i] == 0) continue;
            const auto& node = tree.levels[t][i];
            const auto& sel = choice.per_node[t][i];
            const int cu = node.child_begin + node.child_index(sel.u);
            const int cd = node.child_begin + node.child_index(sel.d);
            if (cu == cd) {
                next[cu] += prob[i];
            } else {
                next[cu] += sel.p * prob[i];
                next[cd] += (1 - sel.p) * prob[i];
            }
        }
        prob = std::move(next);
    }
    return Measure(tree.leaf_space, std::move(prob));
}

Event support_of_product(const Tree& tree, const KernelChoice& choice) {
    validate_choice(tree, choice);
    // A path belongs to the support iff its multiplier at every step is the
    // u or the d selected at the node it passes through, so the support is
    // the set of leaves reachable through selected edges.
    std::vector<int> current{0};
    for (int t = 0; t < tree.periods(); ++t) {
        std::vector<int> next;
        for (int i : current) {
            const auto& node = tree.levels[t][i];
            const auto& sel = choice.per_node[t][i];
            const int cu = node.child_begin + node.child_index(sel.u);
            const int cd = node.child_begin + node.child_index(sel.d);
            next.push_back(cu);
            if (cd != cu) next.push_back(cd);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        current = std::move(next);
    }
    return current;
}

SupportPairCheck supports_equal_or_disjoint(const Tree& tree,
                                            const std::vector<KernelChoice>& choices) {
    std::vector<Event> supports;
    supports.reserve(choices.size());
    for (const auto& choice : choices) supports.push_back(support_of_product(tree, choice));
    for (std::size_t a = 0; a < supports.size(); ++a) {
        for (std::size_t b = a + 1; b < supports.size(); ++b) {
            if (supports[a] == supports[b]) continue;
            if (event_intersection(supports[a], supports[b]).empty()) continue;
            return SupportPairCheck{false,
                                    std::make_pair(static_cast<int>(a), static_cast<int>(b))};
        }
    }
    return SupportPairCheck{};
}

Rat Payoff::eval(const TreeNode& leaf) const {
    switch (kind) {
        case Kind::call: return std::max(Rat(0), Rat(leaf.price - strike));
        case Kind::put: return std::max(Rat(0), Rat(strike - leaf.price));
        case Kind::digital: return leaf.price >= strike ? Rat(1) : Rat(0);
        case Kind::identity: return leaf.price;
        case Kind::explicit_map: {
            const auto it = leaf_values.find(leaf.path);
            if (it == leaf_values.end())
                fail("MissingLeafPayoff", "no payoff for leaf \"" + leaf.path + "\"");
            return it->second;
        }
    }
    fail("BadPayoff", "unknown payoff kind");
}

Payoff Payoff::call(Rat strike) { return Payoff{Kind::call, std::move(strike), {}}; }
Payoff Payoff::put(Rat strike) { return Payoff{Kind::put, std::move(strike), {}}; }
Payoff Payoff::digital(Rat strike) { return Payoff{Kind::digital, std::move(strike), {}}; }
Payoff Payoff::identity() { return Payoff{Kind::identity, Rat(0), {}}; }
Payoff Payoff::explicit_map(std::map<std::string, Rat> values) {
    return Payoff{Kind::explicit_map, Rat(0), std::move(values)};
}

Payoff Payoff::parse(const std::string& text) {
    if (text == "identity") return identity();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string name = text.substr(0, colon);
        const Rat strike = parse_rational(text.substr(colon + 1));
        if (name == "call") return call(strike);
        if (name == "put") return put(strike);
        if (name == "digital") return digital(strike);
    }
    fail("BadPayoff", "expected call:K, put:K, digital:K or identity, got \"" + text + "\"");
}

SuperhedgeResult superhedge_price(const Tree& tree, const Payoff& payoff) {
    const int T = tree.periods();
    SuperhedgeResult result;
    result.node_values.assign(T + 1, {});
    result.argmax.assign(T, {});

    auto& leaf_values = result.node_values[T];
    leaf_values.resize(tree.leaves().size());
    for (std::size_t i = 0; i < tree.leaves().size(); ++i)
        leaf_values[i] = payoff.eval(tree.leaves()[i]);

    for (int t = T - 1; t >= 0; --t) {
        const auto& level = tree.levels[t];
        const auto& next_values = result.node_values[t + 1];
        auto& values = result.node_values[t];
        auto& argmax = result.argmax[t];
        values.resize(level.size());
        argmax.resize(level.size());
        const int n = static_cast<int>(level.size());
#pragma omp parallel for schedule(static) if (n >= 32)
        for (int i = 0; i < n; ++i) {
            const auto& node = level[i];
            const Rat p_ends[2] = {node.bounds.p_lo, node.bounds.p_hi};
            const int p_count = node.bounds.p_lo == node.bounds.p_hi ? 1 : 2;
            bool first = true;
            Rat best;
            KernelSelection best_sel;
            for (const Rat& u : node.u_grid) {
                const Rat& vu = next_values[node.child_begin + node.child_index(u)];
                for (const Rat& d : node.d_grid) {
                    const Rat& vd = next_values[node.child_begin + node.child_index(d)];
                    for (int pi = 0; pi < p_count; ++pi) {
                        const Rat value =
                            u == d ? vu : p_ends[pi] * vu + (1 - p_ends[pi]) * vd;
                        if (first || value > best) {
                            best = value;
                            best_sel = KernelSelection{u, d, p_ends[pi]};
                            first = false;
                        }
                    }
                }
            }
            values[i] = std::move(best);
            argmax[i] = std::move(best_sel);
        }
    }
    result.value = result.node_values[0][0];
    return result;
}

namespace {

std::vector<std::vector<std::vector<Rat>>> node_p_grids(const Tree& tree, int p_points) {
    const int points = p_points > 0 ? p_points : tree.spec.grid;
    std::vector<std::vector<std::vector<Rat>>> grids(tree.periods());
    for (int t = 0; t < tree.periods(); ++t) {
        grids[t].reserve(tree.levels[t].size());
        for (const auto& node : tree.levels[t])
            grids[t].push_back(grid_points(node.bounds.p_lo, node.bounds.p_hi, points));
    }
    return grids;
}

// Exhaustive enumeration of subtree expectations: every kernel assignment on
// the subtree reachable from (t, i) contributes one value. The value set of
// each selected child pair is combined by a full Cartesian product, never by
// maximizing the children first, so the oracle does not reuse the
// dynamic-programming interchange it is checking. Duplicate values are
// merged; that shrinks the sets without touching their maximum.
struct OracleWalk {
    const Tree& tree;
    const std::vector<Rat>& leaf_payoff;
    const std::vector<std::vector<std::vector<Rat>>>& p_grids;

    std::vector<Rat> values(int t, int i) const {
        if (t == tree.periods()) return {leaf_payoff[i]};
        const auto& node = tree.levels[t][i];
        std::vector<Rat> out;
        for (const Rat& u : node.u_grid) {
            const int cu = node.child_begin + node.child_index(u);
            const std::vector<Rat> a = values(t + 1, cu);
            for (const Rat& d : node.d_grid) {
                const int cd = node.child_begin + node.child_index(d);
                if (cu == cd) {
                    out.insert(out.end(), a.begin(), a.end());
                    continue;
                }
                const std::vector<Rat> b = values(t + 1, cd);
                for (const Rat& p : p_grids[t][i]) {
                    std::vector<Rat> pa(a.size());
                    for (std::size_t k = 0; k < a.size(); ++k) pa[k] = p * a[k];
                    std::vector<Rat> qb(b.size());
                    for (std::size_t k = 0; k < b.size(); ++k) qb[k] = (1 - p) * b[k];
                    for (const Rat& x : pa)
                        for (const Rat& y : qb) out.push_back(x + y);
                }
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

} // namespace

Int oracle_choice_count(const Tree& tree, int p_points) {
    const auto p_grids = node_p_grids(tree, p_points);
    std::function<Int(int, int)> count = [&](int t, int i) -> Int {
        if (t == tree.periods()) return 1;
        const auto& node = tree.levels[t][i];
        Int total = 0;
        for (const Rat& u : node.u_grid) {
            const int cu = node.child_begin + node.child_index(u);
            for (const Rat& d : node.d_grid) {
                const int cd = node.child_begin + node.child_index(d);
                const Int below = cu == cd ? count(t + 1, cu) : count(t + 1, cu) * count(t + 1, cd);
                total += Int(static_cast<long>(p_grids[t][i].size())) * below;
            }
        }
        return total;
    };
    return count(0, 0);
}

Rat brute_force_price(const Tree& tree, const Payoff& payoff, const OracleOptions& options) {
    const Int count = oracle_choice_count(tree, options.p_points);
    if (count > options.cap)
        fail("OracleCapExceeded", "kernel assignment count " + count.str() +
                                      " exceeds the cap " + options.cap.str());

    std::vector<Rat> leaf_payoff(tree.leaves().size());
    for (std::size_t i = 0; i < tree.leaves().size(); ++i)
        leaf_payoff[i] = payoff.eval(tree.leaves()[i]);
    const auto p_grids = node_p_grids(tree, options.p_points);
    const OracleWalk walk{tree, leaf_payoff, p_grids};

    // Root selections become explicit work items so the parallel variant can
    // split them. Each item streams the full Cartesian product of the two
    // child value sets; max over exact rationals is order-independent, so
    // serial and parallel runs agree bit for bit.
    const auto& root = tree.levels[0][0];
    std::vector<std::vector<Rat>> child_values(root.child_count());
    for (int j = 0; j < root.child_count(); ++j)
        child_values[j] = walk.values(1, root.child_begin + j);

    struct RootOption {
        int cu, cd; // child slots
        Rat p;
    };
    std::vector<RootOption> root_options;
    for (const Rat& u : root.u_grid) {
        for (const Rat& d : root.d_grid) {
            const int cu = root.child_index(u);
            const int cd = root.child_index(d);
            if (cu == cd) {
                root_options.push_back({cu, cd, Rat(1)});
                continue;
            }
            for (const Rat& p : p_grids[0][0]) root_options.push_back({cu, cd, p});
        }
    }

    const int option_count = static_cast<int>(root_options.size());
    std::vector<Rat> option_best(option_count);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (int k = 0; k < option_count; ++k) {
        const RootOption& opt = root_options[k];
        const std::vector<Rat>& a = child_values[opt.cu];
        Rat best;
        bool has = false;
        if (opt.cu == opt.cd) {
            for (const Rat& value : a) {
                if (!has || value > best) {
                    best = value;
                    has = true;
                }
            }
        } else {
            const std::vector<Rat>& b = child_values[opt.cd];
            std::vector<Rat> pa(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) pa[i] = opt.p * a[i];
            std::vector<Rat> qb(b.size());
            for (std::size_t i = 0; i < b.size(); ++i) qb[i] = (1 - opt.p) * b[i];
            for (const Rat& x : pa) {
                for (const Rat& y : qb) {
                    Rat value = x + y;
                    if (!has || value > best) {
                        best = std::move(value);
                        has = true;
                    }
                }
            }
        }
        option_best[k] = std::move(best);
    }

    Rat best = option_best.front();
    for (int k = 1; k < option_count; ++k) {
        if (option_best[k] > best) best = option_best[k];
    }
    return best;
}

Rat step_choice_price(const Tree& tree, const Payoff& payoff, const OracleOptions& options) {
    if (!tree.spec.node_bounds.empty())
        fail("Unsupported", "time-only kernel choices need homogeneous bounds");
    const int T = tree.periods();
    std::vector<Rat> leaf_payoff(tree.leaves().size());
    for (std::size_t i = 0; i < tree.leaves().size(); ++i)
        leaf_payoff[i] = payoff.eval(tree.leaves()[i]);

    const auto& root = tree.levels[0][0];
    const auto p_grid = grid_points(root.bounds.p_lo, root.bounds.p_hi,
                                    options.p_points > 0 ? options.p_points : tree.spec.grid);
    std::vector<KernelSelection> step_options;
    for (const Rat& u : root.u_grid)
        for (const Rat& d : root.d_grid)
            for (const Rat& p : p_grid) step_options.push_back(KernelSelection{u, d, p});

    Int count = 1;
    for (int t = 0; t < T; ++t) count *= Int(static_cast<long>(step_options.size()));
    if (count > options.cap)
        fail("OracleCapExceeded",
             "step choice count " + count.str() + " exceeds the cap " + options.cap.str());

    std::vector<int> odometer(T, 0);
    Rat best;
    bool has = false;
    for (;;) {
        // Expectation under the product measure of the current selections.
        std::function<Rat(int, int)> value = [&](int t, int i) -> Rat {
            if (t == T) return leaf_payoff[i];
            const auto& node = tree.levels[t][i];
            const auto& sel = step_options[odometer[t]];
            const int cu = node.child_begin + node.child_index(sel.u);
            const int cd = node.child_begin + node.child_index(sel.d);
            if (cu == cd) return value(t + 1, cu);
            return sel.p * value(t + 1, cu) + (1 - sel.p) * value(t + 1, cd);
        };
        const Rat v = value(0, 0);
        if (!has || v > best) {
            best = v;
            has = true;
        }
        int t = 0;
        while (t < T && ++odometer[t] == static_cast<int>(step_options.size())) {
            odometer[t] = 0;
            ++t;
        }
        if (t == T) break;
    }
    return best;
}

bool values_price_monotone(const Tree& tree, const SuperhedgeResult& result) {
    for (int t = 0; t <= tree.periods(); ++t) {
        std::vector<std::pair<Rat, Rat>> by_price;
        by_price.reserve(tree.levels[t].size());
        for (std::size_t i = 0; i < tree.levels[t].size(); ++i)
            by_price.emplace_back(tree.levels[t][i].price, result.node_values[t][i]);
        std::sort(by_price.begin(), by_price.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        bool nondecreasing = true;
        bool nonincreasing = true;
        for (std::size_t i = 0; i + 1 < by_price.size(); ++i) {
            if (by_price[i].first == by_price[i + 1].first) {
                if (by_price[i].second != by_price[i + 1].second) return false;
                continue;
            }
            if (by_price[i].second > by_price[i + 1].second) nondecreasing = false;
            if (by_price[i].second < by_price[i + 1].second) nonincreasing = false;
        }
        if (!nondecreasing && !nonincreasing) return false;
    }
    return true;
}

SupermartingaleCheck verify_supermartingale(const Tree& tree, const SuperhedgeResult& result,
                                            const std::vector<KernelChoice>& choices) {
    for (std::size_t c = 0; c < choices.size(); ++c) {
        validate_choice(tree, choices[c]);
        for (int t = 0; t < tree.periods(); ++t) {
            for (std::size_t i = 0; i < tree.levels[t].size(); ++i) {
                const auto& node = tree.levels[t][i];
                const auto& sel = choices[c].per_node[t][i];
                const int cu = node.child_begin + node.child_index(sel.u);
                const int cd = node.child_begin + node.child_index(sel.d);
                const Rat expected =
                    cu == cd ? result.node_values[t + 1][cu]
                             : sel.p * result.node_values[t + 1][cu] +
                                   (1 - sel.p) * result.node_values[t + 1][cd];
                if (expected > result.node_values[t][i])
                    return SupermartingaleCheck{false, static_cast<int>(c), t,
                                                static_cast<int>(i)};
            }
        }
    }
    return SupermartingaleCheck{};
}

} // namespace qsa
