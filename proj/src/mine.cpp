#include "dockrule/mine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dockrule/enforce.hpp"
#include "dockrule/sexp.hpp"

namespace dockrule {

std::vector<TreeNode> collect_subtrees(const std::vector<TreeNode>& corpus,
                                       const std::string& kind) {
    std::vector<TreeNode> out;
    for (const auto& tree : corpus) {
        walk(tree, [&](const TreeNode& n, const NodePath&) {
            if (n.kind == kind) out.push_back(n);
            return true;
        });
    }
    return out;
}

namespace {

// Pre-order index of one instance.
struct Indexed {
    std::vector<std::string> kind;
    std::vector<std::vector<int>> kids;
};

void index_tree(const TreeNode& n, Indexed& ix, int& next) {
    int id = next++;
    ix.kind.push_back(n.kind);
    ix.kids.emplace_back();
    for (const auto& c : n.children) {
        ix.kids[id].push_back(next);
        index_tree(c, ix, next);
    }
}

using Embedding = std::vector<int>;  // host id per pattern id, pre-order

struct Recorded {
    TreeNode tree;
    std::set<int> supp;
};

// Rightmost-path growth over kind-only patterns. Each ordered pattern
// is produced exactly once: new nodes append as the last child of a
// node on the rightmost path, landing at the end of pre-order, so ids
// and existing embeddings stay valid.
class Miner {
  public:
    Miner(const std::vector<TreeNode>& instances, const MineOptions& opt)
        : opt_(opt) {
        n_ = static_cast<int>(instances.size());
        for (const auto& inst : instances) {
            Indexed ix;
            int next = 0;
            index_tree(inst, ix, next);
            inst_.push_back(std::move(ix));
        }
    }

    bool truncated() const { return truncated_; }
    const std::map<std::string, Recorded>& found() const { return found_; }

    void run(const std::string& root_kind) {
        kinds_ = {root_kind};
        parent_ = {-1};
        pkids_ = {{}};
        depth_ = {1};
        rpath_ = {0};

        std::vector<std::vector<Embedding>> embs(n_);
        std::set<int> supp;
        for (int i = 0; i < n_; ++i) {
            if (inst_[i].kind[0] == root_kind) {
                embs[i].push_back({0});
                supp.insert(i);
            }
        }
        if (!frequent(supp)) return;
        record(supp);
        grow(embs);
    }

  private:
    MineOptions opt_;
    int n_ = 0;
    std::vector<Indexed> inst_;

    std::vector<std::string> kinds_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> pkids_;
    std::vector<int> depth_;
    std::vector<int> rpath_;

    std::map<std::string, Recorded> found_;
    bool truncated_ = false;

    bool frequent(const std::set<int>& supp) const {
        if (supp.empty()) return false;
        return static_cast<double>(supp.size()) >=
               opt_.min_support * n_ - 1e-9;
    }

    TreeNode rebuild(int id) const {
        TreeNode node(kinds_[id]);
        for (int c : pkids_[id]) node.children.push_back(rebuild(c));
        return node;
    }

    void record(const std::set<int>& supp) {
        TreeNode t = rebuild(0);
        std::string key = sexp_encode(t);
        found_.emplace(std::move(key), Recorded{std::move(t), supp});
    }

    void grow(const std::vector<std::vector<Embedding>>& embs) {
        // Extension points: every node on the rightmost path.
        for (size_t ri = 0; ri < rpath_.size(); ++ri) {
            int at = rpath_[ri];
            int prev_child = pkids_[at].empty() ? -1 : pkids_[at].back();

            // Candidate kinds for a new last child of `at`.
            std::set<std::string> cand;
            for (int i = 0; i < n_; ++i) {
                for (const auto& e : embs[i]) {
                    int h = e[at];
                    const auto& hk = inst_[i].kids[h];
                    size_t from = 0;
                    if (prev_child >= 0) {
                        int hprev = e[prev_child];
                        from = static_cast<size_t>(
                                   std::find(hk.begin(), hk.end(), hprev) -
                                   hk.begin()) +
                               1;
                    }
                    for (size_t k = from; k < hk.size(); ++k)
                        cand.insert(inst_[i].kind[hk[k]]);
                }
            }

            for (const auto& kind : cand) {
                std::vector<std::vector<Embedding>> next(n_);
                std::set<int> supp;
                for (int i = 0; i < n_; ++i) {
                    for (const auto& e : embs[i]) {
                        int h = e[at];
                        const auto& hk = inst_[i].kids[h];
                        size_t from = 0;
                        if (prev_child >= 0) {
                            int hprev = e[prev_child];
                            from = static_cast<size_t>(
                                       std::find(hk.begin(), hk.end(), hprev) -
                                       hk.begin()) +
                                   1;
                        }
                        for (size_t k = from; k < hk.size(); ++k) {
                            if (inst_[i].kind[hk[k]] != kind) continue;
                            Embedding ext = e;
                            ext.push_back(hk[k]);
                            next[i].push_back(std::move(ext));
                        }
                    }
                    if (!next[i].empty()) supp.insert(i);
                }
                if (!frequent(supp)) continue;
                if (static_cast<int>(kinds_.size()) + 1 > opt_.max_nodes ||
                    depth_[at] + 1 > opt_.max_depth) {
                    truncated_ = true;
                    continue;
                }

                int id = static_cast<int>(kinds_.size());
                kinds_.push_back(kind);
                parent_.push_back(at);
                pkids_[at].push_back(id);
                pkids_.emplace_back();
                depth_.push_back(depth_[at] + 1);
                std::vector<int> saved_rpath = rpath_;
                rpath_.resize(ri + 1);
                rpath_.push_back(id);

                record(supp);
                grow(next);

                rpath_ = std::move(saved_rpath);
                kinds_.pop_back();
                parent_.pop_back();
                pkids_[at].pop_back();
                pkids_.pop_back();
                depth_.pop_back();
            }
        }
    }
};

// Root-path chain pattern through one node: KIND0 -> ... -> KINDk.
TreeNode chain_pattern(const std::vector<std::string>& kinds) {
    TreeNode node(kinds.back());
    for (size_t i = kinds.size() - 1; i-- > 0;) {
        TreeNode parent(kinds[i]);
        parent.children.push_back(std::move(node));
        node = std::move(parent);
    }
    return node;
}

void collect_root_paths(const TreeNode& n, std::vector<std::string>& prefix,
                        std::vector<TreeNode>& out) {
    prefix.push_back(n.kind);
    if (prefix.size() > 1) out.push_back(chain_pattern(prefix));
    for (const auto& c : n.children) collect_root_paths(c, prefix, out);
    prefix.pop_back();
}

}  // namespace

MineResult mine_frequent_subtrees(const std::vector<TreeNode>& instances,
                                  const MineOptions& options) {
    MineResult result;
    if (instances.empty()) return result;

    Miner miner(instances, options);
    miner.run(instances.front().kind);
    result.truncated = miner.truncated();
    const auto& found = miner.found();

    // Support coherence: every non-root root-path of the pattern must
    // be supported by exactly the instances supporting the pattern.
    std::vector<const Recorded*> coherent;
    for (const auto& [sexp, rec] : found) {
        std::vector<std::string> prefix;
        std::vector<TreeNode> paths;
        collect_root_paths(rec.tree, prefix, paths);
        bool ok = true;
        for (const auto& path : paths) {
            auto it = found.find(sexp_encode(path));
            if (it == found.end() || it->second.supp != rec.supp) {
                ok = false;
                break;
            }
        }
        if (ok) coherent.push_back(&rec);
    }

    // Maximality under root-anchored containment.
    std::vector<FrequentSubtree> keep;
    for (const Recorded* p : coherent) {
        bool subsumed = false;
        for (const Recorded* q : coherent) {
            if (q == p) continue;
            if (structurally_equal(q->tree, p->tree)) continue;
            if (aligns(q->tree, p->tree)) {
                subsumed = true;
                break;
            }
        }
        if (!subsumed) {
            FrequentSubtree fs;
            fs.tree = p->tree;
            fs.frequency = static_cast<int>(p->supp.size());
            fs.support = static_cast<double>(p->supp.size()) / instances.size();
            keep.push_back(std::move(fs));
        }
    }

    std::sort(keep.begin(), keep.end(),
              [](const FrequentSubtree& a, const FrequentSubtree& b) {
                  if (a.frequency != b.frequency) return a.frequency > b.frequency;
                  return sexp_encode(a.tree) < sexp_encode(b.tree);
              });
    result.frequent = std::move(keep);
    return result;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string rule_key(const TreeAssociationRule& r) {
    std::string key = sexp_encode(r.antecedent);
    key += "|";
    key += location_name(r.location);
    key += "|";
    key += scope_name(r.scope);
    for (const auto& c : r.consequent) key += "|" + sexp_encode(c);
    return key;
}

}  // namespace

std::vector<TreeAssociationRule> build_tars(
    const std::vector<FrequentSubtree>& frequent, const std::string& kind) {
    std::vector<TreeAssociationRule> out;
    std::set<std::string> seen;
    int index = 0;
    for (const auto& fs : frequent) {
        if (fs.tree.children.empty()) continue;
        TreeAssociationRule rule;
        rule.antecedent = TreeNode(kind);
        rule.star_parent_path = {};
        rule.location = RuleLocation::ChildOf;
        rule.scope = RuleScope::Intra;
        rule.consequent = fs.tree.children;
        rule.name = "mined-" + lower(kind) + "-" + std::to_string(++index);
        if (seen.insert(rule_key(rule)).second) out.push_back(std::move(rule));
    }
    return out;
}

std::vector<TreeAssociationRule> mine_rules(const std::vector<TreeNode>& corpus,
                                            const std::vector<std::string>& kinds,
                                            const MineOptions& options) {
    std::vector<TreeAssociationRule> out;
    std::set<std::string> seen;
    for (const auto& kind : kinds) {
        auto instances = collect_subtrees(corpus, kind);
        if (instances.empty()) continue;
        auto mined = mine_frequent_subtrees(instances, options);
        for (auto& rule : build_tars(mined.frequent, kind)) {
            if (seen.insert(rule_key(rule)).second)
                out.push_back(std::move(rule));
        }
    }
    return out;
}

}  // namespace dockrule
