#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsa/measure.hpp"

namespace qsa {

/// Per-node constraint box: gross-return intervals [u_lo, u_hi] (up),
/// [d_lo, d_hi] (down) and the branch-probability interval [p_lo, p_hi].
struct NodeBounds {
    Rat u_lo, u_hi; // [u, U]
    Rat d_lo, d_hi; // [d, D]
    Rat p_lo, p_hi; // [pi, Pi]

    /// Enforces (i) 0 < pi <= Pi < 1, (ii) d <= D and u <= U,
    /// (iii) 0 < d < 1 < U. Throws Error("InvalidBounds") naming the
    /// violated inequality.
    void validate() const;
};

/// Non-recombining tree specification. The initial price is 1; each interval
/// is discretized to `grid` equispaced points with both endpoints always
/// included, so a proper interval never has fewer than two grid points and a
/// degenerate one collapses to a single point.
struct BinomialTreeSpec {
    int periods = 1; // T
    int grid = 1;    // G, points per parameter axis
    NodeBounds bounds;
    /// Optional per-node overrides keyed by the node path ("" is the root,
    /// otherwise multipliers joined by 'x', e.g. "2x1/2").
    std::map<std::string, NodeBounds> node_bounds;
    long leaf_cap = 20000;
};

struct TreeNode {
    int parent = -1;
    Rat multiplier = 1; // edge label from the parent
    Rat price = 1;
    std::string path;
    int child_begin = 0; // index into the next level
    std::vector<Rat> u_grid;
    std::vector<Rat> d_grid;
    std::vector<Rat> child_multipliers; // sorted union of the two grids
    NodeBounds bounds;

    int child_count() const { return static_cast<int>(child_multipliers.size()); }
    /// Child slot for a multiplier value; Error("InvalidChoice") if absent.
    int child_index(const Rat& multiplier) const;
};

struct Tree {
    BinomialTreeSpec spec;
    std::vector<std::vector<TreeNode>> levels; // levels[0..T]; leaves at T
    SpacePtr leaf_space;                       // atoms are leaf paths

    int periods() const { return spec.periods; }
    const std::vector<TreeNode>& leaves() const { return levels.back(); }
};

/// Throws Error("SizeCapExceeded") or Error("InvalidBounds").
Tree build_tree(const BinomialTreeSpec& spec);

std::vector<Rat> grid_points(const Rat& lo, const Rat& hi, int count);

struct KernelSelection {
    Rat u, d, p;
};

/// One product measure of the model: a kernel selection for every decision
/// node (levels 0..T-1). A path leaves the support at the first step whose
/// multiplier is not the selected u or d, so selections at nodes off the
/// selected branches affect neither the measure nor its support.
struct KernelChoice {
    std::vector<std::vector<KernelSelection>> per_node; // [t][node]

    static KernelChoice per_step(const Tree& tree, const std::vector<KernelSelection>& steps);
    static KernelChoice homogeneous(const Tree& tree, const KernelSelection& selection);
};

/// Checks u and d against the node grids and p against the probability
/// interval. Throws Error("InvalidChoice").
void validate_choice(const Tree& tree, const KernelChoice& choice);

/// Leaf-path probability measure induced by the choice.
Measure product_measure(const Tree& tree, const KernelChoice& choice,
                        const std::string& name = "");

/// Order support: the leaves whose every step multiplier equals the chosen u
/// or d at the node passed through. The induced measure puts full mass on it.
Event support_of_product(const Tree& tree, const KernelChoice& choice);

struct SupportPairCheck {
    bool ok = true;
    std::optional<std::pair<int, int>> violating; // indices into `choices`
};

/// Checks that supports are pairwise identical or disjoint.
SupportPairCheck supports_equal_or_disjoint(const Tree& tree,
                                            const std::vector<KernelChoice>& choices);

struct Payoff {
    enum class Kind { call, put, digital, identity, explicit_map };
    Kind kind = Kind::identity;
    Rat strike = 0;
    std::map<std::string, Rat> leaf_values; // explicit_map, keyed by leaf path

    Rat eval(const TreeNode& leaf) const;

    static Payoff call(Rat strike);
    static Payoff put(Rat strike);
    static Payoff digital(Rat strike);
    static Payoff identity();
    static Payoff explicit_map(std::map<std::string, Rat> values);
    /// Parses "call:K", "put:K", "digital:K", "identity".
    static Payoff parse(const std::string& text);
};

struct SuperhedgeResult {
    Rat value;
    std::vector<std::vector<Rat>> node_values;          // [t][node]
    std::vector<std::vector<KernelSelection>> argmax;   // [t][node], t < T
};

/// Backward recursion V_t = max over box selections of
/// p V_{t+1}(child u) + (1-p) V_{t+1}(child d). The objective is affine in
/// p, so only the interval endpoints enter. Nodes within a time slice are
/// evaluated in parallel; results do not depend on the thread count.
SuperhedgeResult superhedge_price(const Tree& tree, const Payoff& payoff);

struct OracleOptions {
    Int cap = 1000000;
    bool parallel = false;
    /// p values enumerated per node; 0 means the spec grid size.
    int p_points = 0;
};

/// Number of payoff-distinct kernel assignments the oracle walks: selections
/// on the subtree a measure can actually reach (off-path selections cannot
/// change the expectation).
Int oracle_choice_count(const Tree& tree, int p_points = 0);

/// Independent pricing oracle: the exact maximum of E_Q[payoff] over every
/// grid kernel assignment, enumerated explicitly with no backward-recursion
/// shortcuts. Must equal superhedge_price exactly. Serial by default; the
/// parallel variant splits the root selections across threads and is
/// bit-identical to the serial one. Throws Error("OracleCapExceeded").
Rat brute_force_price(const Tree& tree, const Payoff& payoff,
                      const OracleOptions& options = OracleOptions{});

/// Maximum of E_Q[payoff] over kernel choices that depend on time only
/// (the same selection at every node of a slice).
Rat step_choice_price(const Tree& tree, const Payoff& payoff, const OracleOptions& options = OracleOptions{});

/// True when node values depend on the node only through its price and are
/// monotone in it on every slice. Under these two exact checks the optimal
/// selection can be chosen constant, so the step-choice oracle is exact.
bool values_price_monotone(const Tree& tree, const SuperhedgeResult& result);

struct SupermartingaleCheck {
    bool ok = true;
    int choice = -1;
    int level = -1;
    int node = -1;
};

/// For every choice and decision node, the one-step conditional expectation
/// of the value process must not exceed the node value.
SupermartingaleCheck verify_supermartingale(const Tree& tree, const SuperhedgeResult& result,
                                            const std::vector<KernelChoice>& choices);

} // namespace qsa
