#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace phylotoric {

class Tree;

namespace detail {
// Mutable staging form used by the parser, by edge contraction and by the
// topology enumerator; vertex 0 is the root.
struct RawTree {
    std::vector<int> parent;                // -1 for the root
    std::vector<std::vector<int>> kids;     // empty exactly at leaves
    std::vector<int> label;                 // >0 at leaves, 0 at inner vertices

    int add(int parent_id, int leaf_label) {
        parent.push_back(parent_id);
        kids.emplace_back();
        label.push_back(leaf_label);
        if (parent_id >= 0) kids[parent_id].push_back(static_cast<int>(parent.size()) - 1);
        return static_cast<int>(parent.size()) - 1;
    }
};

Tree make_tree(const RawTree& raw);
}  // namespace detail

/**
 * Rooted leaf-labeled tree.  Leaf labels are distinct positive integers; the
 * leaf *index* is the rank of the label in the sorted label set, which makes
 * trees over the same label set share one index space.
 *
 * Shape constraints: at least two leaves, the root has at least two children,
 * and every non-root inner vertex has at least two children (no degree-2
 * inner vertices).
 *
 * Canonical form: children are ordered by smallest descendant label, vertices
 * are numbered in DFS pre-order (root = 0), and the edge list is the pre-order
 * list of (parent, child) pairs, identified by the child vertex.  The text
 * serialization of the canonical form is the equality key.
 */
class Tree {
public:
    // Text grammar:  tree := '(' node (',' node)+ ')',  node := label | tree.
    static Tree parse(const std::string& text) {
        std::size_t pos = 0;
        detail::RawTree raw;
        skip_space(text, pos);
        if (pos >= text.size() || text[pos] != '(')
            throw std::invalid_argument("tree text: expected '(' at position " +
                                        std::to_string(pos));
        parse_group(text, pos, raw, -1);
        skip_space(text, pos);
        if (pos != text.size())
            throw std::invalid_argument("tree text: trailing characters at position " +
                                        std::to_string(pos));
        return Tree(raw);
    }

    // Star tree on labels 1..l (the unique topology with one inner vertex).
    static Tree claw(int leaf_count) {
        if (leaf_count < 3)
            throw std::domain_error("claw tree needs at least 3 leaves");
        detail::RawTree raw;
        raw.add(-1, 0);
        for (int i = 1; i <= leaf_count; ++i) raw.add(0, i);
        return Tree(raw);
    }

    int leaf_count() const { return static_cast<int>(leaf_labels_.size()); }
    int edge_count() const { return static_cast<int>(edge_child_.size()); }
    int vertex_count() const { return static_cast<int>(parent_.size()); }
    int inner_vertex_count() const { return vertex_count() - leaf_count(); }
    const std::vector<int>& leaf_labels() const { return leaf_labels_; }
    const std::string& text() const { return text_; }

    int root() const { return 0; }
    const std::vector<int>& children(int v) const { return children_.at(v); }
    bool is_leaf_vertex(int v) const { return leaf_label_.at(v) > 0; }
    int leaf_label_of_vertex(int v) const { return leaf_label_.at(v); }
    int leaf_index_of_vertex(int v) const { return leaf_index(leaf_label_.at(v)); }

    // Rank of a label in the sorted label set.
    int leaf_index(int label) const {
        auto it = std::lower_bound(leaf_labels_.begin(), leaf_labels_.end(), label);
        if (it == leaf_labels_.end() || *it != label)
            throw std::invalid_argument("no leaf with label " + std::to_string(label));
        return static_cast<int>(it - leaf_labels_.begin());
    }

    int edge_child(int e) const { return edge_child_.at(e); }
    int edge_parent(int e) const { return parent_.at(edge_child_.at(e)); }
    // Edge whose child is v; -1 for the root.
    int parent_edge(int v) const { return parent_edge_.at(v); }

    bool pendant(int e) const { return is_leaf_vertex(edge_child(e)); }
    int pendant_leaf_index(int e) const {
        if (!pendant(e)) throw std::domain_error("edge is not pendant");
        return leaf_index_of_vertex(edge_child(e));
    }
    int pendant_edge_of_leaf(int leaf_idx) const {
        for (int e = 0; e < edge_count(); ++e)
            if (pendant(e) && pendant_leaf_index(e) == leaf_idx) return e;
        throw std::invalid_argument("leaf index out of range");
    }

    // Bitmask over leaf indices below the edge (on the child side).
    std::uint64_t below_mask(int e) const { return below_.at(e); }
    std::uint64_t full_mask() const {
        return leaf_count() == 64 ? ~std::uint64_t(0)
                                  : ((std::uint64_t(1) << leaf_count()) - 1);
    }
    // Rooting-independent edge key: the split side not containing leaf index 0.
    std::uint64_t split_key(int e) const {
        std::uint64_t m = below_.at(e);
        return (m & 1) ? (full_mask() ^ m) : m;
    }

    std::vector<int> inner_edge_indices() const {
        std::vector<int> out;
        for (int e = 0; e < edge_count(); ++e)
            if (!pendant(e)) out.push_back(e);
        return out;
    }

    // Sorted set of nontrivial splits (inner-edge keys); the unrooted topology key.
    std::vector<std::uint64_t> topology_key() const {
        std::vector<std::uint64_t> keys;
        for (int e : inner_edge_indices()) keys.push_back(split_key(e));
        std::sort(keys.begin(), keys.end());
        return keys;
    }

    // Collapse an inner edge: the child vertex merges into its parent.
    Tree contract_edge(int e) const {
        if (pendant(e))
            throw std::domain_error("cannot contract a pendant edge");
        int gone = edge_child(e);
        detail::RawTree raw;
        std::vector<int> new_id(vertex_count(), -1);
        for (int v = 0; v < vertex_count(); ++v) {
            if (v == gone) continue;
            int p = parent_[v];
            if (p == gone) p = parent_[gone];
            new_id[v] = raw.add(p < 0 ? -1 : new_id[p], leaf_label_[v]);
        }
        return Tree(raw);
    }

    // Same underlying graph re-rooted at an inner vertex.  Throws if the current
    // root has degree 2 (re-rooting would strand it as a degree-2 inner vertex).
    Tree rooted_at(int vertex) const {
        if (is_leaf_vertex(vertex))
            throw std::domain_error("cannot root at a leaf");
        detail::RawTree raw;
        std::vector<int> new_id(vertex_count(), -1);
        std::vector<int> stack{vertex};
        new_id[vertex] = raw.add(-1, leaf_label_[vertex]);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            std::vector<int> nbrs = children_[v];
            if (parent_[v] >= 0) nbrs.push_back(parent_[v]);
            for (int w : nbrs) {
                if (new_id[w] >= 0) continue;
                new_id[w] = raw.add(new_id[v], leaf_label_[w]);
                stack.push_back(w);
            }
        }
        return Tree(raw);
    }

    // One tree per inner vertex chosen as root, this rooting included.
    std::vector<Tree> inner_rootings() const {
        std::vector<Tree> out;
        for (int v = 0; v < vertex_count(); ++v)
            if (!is_leaf_vertex(v)) out.push_back(rooted_at(v));
        return out;
    }

    friend bool operator==(const Tree& a, const Tree& b) { return a.text_ == b.text_; }
    friend bool operator<(const Tree& a, const Tree& b) { return a.text_ < b.text_; }

private:
    friend Tree detail::make_tree(const detail::RawTree& raw);

    explicit Tree(const detail::RawTree& raw) { finalize(raw); }

    static void skip_space(const std::string& s, std::size_t& pos) {
        while (pos < s.size() && s[pos] == ' ') ++pos;
    }

    static void parse_group(const std::string& s, std::size_t& pos, detail::RawTree& raw,
                            int parent_id) {
        int me = raw.add(parent_id, 0);
        ++pos;  // consume '('
        int members = 0;
        for (;;) {
            skip_space(s, pos);
            if (pos >= s.size())
                throw std::invalid_argument("tree text: unbalanced '(' at end of input");
            if (s[pos] == '(') {
                parse_group(s, pos, raw, me);
            } else if (s[pos] >= '0' && s[pos] <= '9') {
                std::size_t start = pos;
                while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
                int label = std::stoi(s.substr(start, pos - start));
                if (label <= 0)
                    throw std::invalid_argument("tree text: leaf label must be positive at position " +
                                                std::to_string(start));
                raw.add(me, label);
            } else {
                throw std::invalid_argument("tree text: unexpected character '" +
                                            std::string(1, s[pos]) + "' at position " +
                                            std::to_string(pos));
            }
            ++members;
            skip_space(s, pos);
            if (pos >= s.size())
                throw std::invalid_argument("tree text: unbalanced '(' at end of input");
            if (s[pos] == ',') {
                ++pos;
                continue;
            }
            if (s[pos] == ')') {
                ++pos;
                break;
            }
            throw std::invalid_argument("tree text: expected ',' or ')' at position " +
                                        std::to_string(pos));
        }
        if (members < 2)
            throw std::invalid_argument("tree text: group with fewer than 2 members "
                                        "(degree-2 inner vertex)");
    }

    void finalize(const detail::RawTree& raw) {
        int n = static_cast<int>(raw.parent.size());
        // Label sanity.
        std::set<int> seen;
        for (int v = 0; v < n; ++v) {
            if (raw.kids[v].empty() != (raw.label[v] > 0))
                throw std::invalid_argument("tree: inner vertex without children");
            if (raw.label[v] > 0 && !seen.insert(raw.label[v]).second)
                throw std::invalid_argument("tree: duplicate leaf label " +
                                            std::to_string(raw.label[v]));
        }
        if (seen.size() < 2)
            throw std::invalid_argument("tree: fewer than 2 leaves");
        if (seen.size() > 64)
            throw std::invalid_argument("tree: more than 64 leaves unsupported");
        for (int v = 0; v < n; ++v) {
            if (raw.kids[v].empty()) continue;
            if (static_cast<int>(raw.kids[v].size()) < 2)
                throw std::invalid_argument(v == 0 ? "tree: root must have at least 2 children"
                                                   : "tree: degree-2 inner vertex");
        }
        leaf_labels_.assign(seen.begin(), seen.end());

        // Children sorted by smallest descendant label, then pre-order renumber.
        std::vector<int> min_label(n, 0);
        compute_min_label(raw, 0, min_label);
        std::vector<std::vector<int>> sorted_kids = raw.kids;
        for (int v = 0; v < n; ++v)
            std::sort(sorted_kids[v].begin(), sorted_kids[v].end(),
                      [&](int a, int b) { return min_label[a] < min_label[b]; });

        parent_.assign(n, -1);
        children_.assign(n, {});
        leaf_label_.assign(n, 0);
        parent_edge_.assign(n, -1);
        edge_child_.clear();
        std::vector<int> new_id(n, -1);
        std::vector<int> stack{0};
        int next = 0;
        std::vector<int> order;
        // Iterative pre-order with children pushed in reverse sorted order.
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            new_id[v] = next++;
            order.push_back(v);
            for (auto it = sorted_kids[v].rbegin(); it != sorted_kids[v].rend(); ++it)
                stack.push_back(*it);
        }
        for (int v : order) {
            int id = new_id[v];
            leaf_label_[id] = raw.label[v];
            if (raw.parent[v] >= 0) parent_[id] = new_id[raw.parent[v]];
        }
        // Pre-order ids make parents smaller than children; edge order follows ids.
        for (int id = 1; id < n; ++id) {
            children_[parent_[id]].push_back(id);
            parent_edge_[id] = static_cast<int>(edge_child_.size());
            edge_child_.push_back(id);
        }

        below_.assign(edge_child_.size(), 0);
        std::vector<std::uint64_t> below_vertex(n, 0);
        for (int id = n - 1; id >= 1; --id) {
            if (leaf_label_[id] > 0)
                below_vertex[id] = std::uint64_t(1) << leaf_index(leaf_label_[id]);
            below_vertex[parent_[id]] |= below_vertex[id];
            below_[parent_edge_[id]] = below_vertex[id];
        }

        text_ = serialize(0);
    }

    static void compute_min_label(const detail::RawTree& raw, int v, std::vector<int>& out) {
        if (raw.kids[v].empty()) {
            out[v] = raw.label[v];
            return;
        }
        out[v] = std::numeric_limits<int>::max();
        for (int k : raw.kids[v]) {
            compute_min_label(raw, k, out);
            out[v] = std::min(out[v], out[k]);
        }
    }

    std::string serialize(int v) const {
        if (leaf_label_[v] > 0) return std::to_string(leaf_label_[v]);
        std::string out = "(";
        for (std::size_t i = 0; i < children_[v].size(); ++i) {
            if (i) out += ',';
            out += serialize(children_[v][i]);
        }
        out += ')';
        return out;
    }

    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<int> leaf_label_;
    std::vector<int> parent_edge_;
    std::vector<int> edge_child_;
    std::vector<std::uint64_t> below_;
    std::vector<int> leaf_labels_;
    std::string text_;
};

namespace detail {
inline Tree make_tree(const RawTree& raw) { return Tree(raw); }
}  // namespace detail

// True iff `small` arises from `big` by contracting a set of inner edges
// (rooted semantics: the child of a contracted edge merges into its parent).
// Requires equal leaf label sets.
inline bool leq(const Tree& small, const Tree& big) {
    if (small.leaf_labels() != big.leaf_labels())
        throw std::domain_error("leq: trees have different leaf label sets");
    int excess = big.edge_count() - small.edge_count();
    if (excess < 0) return false;
    if (excess == 0) return small == big;
    std::vector<int> inner = big.inner_edge_indices();
    int m = static_cast<int>(inner.size());
    if (excess > m) return false;
    // Contractions of distinct inner edges commute, so subsets suffice.  Track
    // edges across intermediate trees by their below-mask (preserved by
    // contraction and unique within a tree).
    std::vector<int> pick(excess);
    for (int i = 0; i < excess; ++i) pick[i] = i;
    for (;;) {
        std::vector<std::uint64_t> masks;
        for (int i : pick) masks.push_back(big.below_mask(inner[i]));
        Tree cur = big;
        for (std::uint64_t mask : masks) {
            for (int e = 0; e < cur.edge_count(); ++e)
                if (cur.below_mask(e) == mask) {
                    cur = cur.contract_edge(e);
                    break;
                }
        }
        if (cur == small) return true;
        int i = excess - 1;
        while (i >= 0 && pick[i] == m - excess + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < excess; ++j) pick[j] = pick[j - 1] + 1;
    }
    return false;
}

namespace detail {

inline Tree attach_leaf_at_vertex(const Tree& t, int vertex, int label) {
    RawTree raw;
    std::vector<int> new_id(t.vertex_count(), -1);
    for (int v = 0; v < t.vertex_count(); ++v) {
        int p = v == 0 ? -1 : new_id[t.edge_parent(t.parent_edge(v))];
        new_id[v] = raw.add(p, t.is_leaf_vertex(v) ? t.leaf_label_of_vertex(v) : 0);
    }
    raw.add(new_id[vertex], label);
    return make_tree(raw);
}

inline Tree attach_leaf_on_edge(const Tree& t, int edge, int label) {
    RawTree raw;
    std::vector<int> new_id(t.vertex_count(), -1);
    int child = t.edge_child(edge);
    int mid = -1;
    for (int v = 0; v < t.vertex_count(); ++v) {
        int p;
        if (v == 0) {
            p = -1;
        } else {
            int pv = t.edge_parent(t.parent_edge(v));
            p = new_id[pv];
        }
        if (v == child) {
            mid = raw.add(p, 0);
            p = mid;
        }
        new_id[v] = raw.add(p, t.is_leaf_vertex(v) ? t.leaf_label_of_vertex(v) : 0);
    }
    raw.add(mid, label);
    return make_tree(raw);
}

}  // namespace detail

/**
 * All leaf-labeled topologies on labels 1..l with no degree-2 vertices, one
 * rooted representative each (rooted at the inner vertex adjacent to leaf l).
 * Deterministic order: by edge count, then by canonical text; the claw comes
 * first.  Supported range: 3 <= l <= 7.
 */
inline std::vector<Tree> enumerate_topologies(int leaf_count) {
    if (leaf_count < 3 || leaf_count > 7)
        throw std::domain_error("enumerate_topologies supports 3 <= l <= 7");
    std::vector<Tree> pool{Tree::claw(3)};
    for (int next = 4; next <= leaf_count; ++next) {
        std::map<std::vector<std::uint64_t>, Tree> grown;
        for (const Tree& t : pool) {
            for (int v = 0; v < t.vertex_count(); ++v) {
                if (t.is_leaf_vertex(v)) continue;
                Tree candidate = detail::attach_leaf_at_vertex(t, v, next);
                grown.emplace(candidate.topology_key(), candidate);
            }
            for (int e = 0; e < t.edge_count(); ++e) {
                Tree candidate = detail::attach_leaf_on_edge(t, e, next);
                grown.emplace(candidate.topology_key(), candidate);
            }
        }
        pool.clear();
        for (auto& [key, t] : grown) pool.push_back(t);
    }
    std::vector<Tree> out;
    out.reserve(pool.size());
    for (const Tree& t : pool) {
        int leaf_vertex = -1;
        for (int v = 0; v < t.vertex_count(); ++v)
            if (t.is_leaf_vertex(v) && t.leaf_label_of_vertex(v) == leaf_count) leaf_vertex = v;
        out.push_back(t.rooted_at(t.edge_parent(t.parent_edge(leaf_vertex))));
    }
    std::sort(out.begin(), out.end(), [](const Tree& a, const Tree& b) {
        if (a.edge_count() != b.edge_count()) return a.edge_count() < b.edge_count();
        return a.text() < b.text();
    });
    return out;
}

}  // namespace phylotoric
