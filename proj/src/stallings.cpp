#include "liftlim/stallings.hpp"

#include <algorithm>
#include <deque>

#include "liftlim/errors.hpp"

namespace liftlim {

SubgroupGraph::SubgroupGraph(Alphabet alphabet, std::vector<std::int32_t> cells)
    : alphabet_(std::move(alphabet)), cells_(std::move(cells)) {
  const std::size_t c = columns();
  vertices_ = c == 0 ? 1 : cells_.size() / c;
}

std::size_t SubgroupGraph::edge_count() const {
  std::size_t n = 0;
  for (std::size_t v = 0; v < vertices_; ++v)
    for (std::size_t g = 0; g < alphabet_.size(); ++g)
      if (follow(v, 2 * g) != kNone) ++n;
  return n;
}

namespace {

constexpr std::size_t kMaxFoldLetters = 1u << 24;

class Folder {
 public:
  explicit Folder(std::size_t columns) : cols_(columns) { add_vertex(); }

  std::size_t add_vertex() {
    parent_.push_back(parent_.size());
    adj_.resize(adj_.size() + cols_, -1);
    return parent_.size() - 1;
  }

  std::size_t find(std::size_t v) {
    std::size_t r = v;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[v] != r) {
      const std::size_t next = parent_[v];
      parent_[v] = r;
      v = next;
    }
    return r;
  }

  std::int64_t& at(std::size_t v, std::size_t col) { return adj_[v * cols_ + col]; }

  // resolved neighbour, or -1
  std::int64_t next(std::size_t v, std::size_t col) {
    const std::int64_t t = at(find(v), col);
    return t < 0 ? -1 : static_cast<std::int64_t>(find(static_cast<std::size_t>(t)));
  }

  void add_edge(std::size_t u, std::size_t col, std::size_t v) {
    u = find(u);
    v = find(v);
    const std::int64_t fu = next(u, col), bv = next(v, col ^ 1u);
    if (fu >= 0) {
      merge(static_cast<std::size_t>(fu), v);
    } else if (bv >= 0) {
      merge(static_cast<std::size_t>(bv), u);
    } else {
      at(u, col) = static_cast<std::int64_t>(v);
      at(v, col ^ 1u) = static_cast<std::int64_t>(u);
    }
  }

  void merge(std::size_t a, std::size_t b) {
    std::deque<std::pair<std::size_t, std::size_t>> pending{{a, b}};
    while (!pending.empty()) {
      auto [x, y] = pending.front();
      pending.pop_front();
      x = find(x);
      y = find(y);
      if (x == y) continue;
      if (x > y) std::swap(x, y);
      parent_[y] = x;
      for (std::size_t col = 0; col < cols_; ++col) {
        const std::int64_t ty = at(y, col);
        if (ty < 0) continue;
        const std::int64_t tx = at(x, col);
        if (tx < 0) at(x, col) = ty;
        else pending.emplace_back(static_cast<std::size_t>(tx), static_cast<std::size_t>(ty));
      }
    }
  }

  // Reads w from the base, creating only the unread middle of the loop.
  void add_loop(const std::vector<std::size_t>& w) {
    if (w.empty()) return;
    std::size_t f = find(0), b = find(0);
    std::size_t i = 0, j = w.size();
    while (i < j) {
      const std::int64_t t = next(f, w[i]);
      if (t < 0) break;
      f = static_cast<std::size_t>(t);
      ++i;
    }
    while (j > i) {
      const std::int64_t t = next(b, w[j - 1] ^ 1u);
      if (t < 0) break;
      b = static_cast<std::size_t>(t);
      --j;
    }
    if (i == j) {
      merge(f, b);
      return;
    }
    for (; i + 1 < j; ++i) {
      const std::size_t v = add_vertex();
      add_edge(f, w[i], v);
      f = find(v);
    }
    add_edge(f, w[i], b);
  }

  // Resolved edges between live vertices, forward columns only.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> edges() {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
    for (std::size_t v = 0; v < parent_.size(); ++v) {
      if (parent_[v] != v) continue;
      for (std::size_t col = 0; col < cols_; col += 2) {
        const std::int64_t t = next(v, col);
        if (t >= 0) out.emplace_back(v, col, static_cast<std::size_t>(t));
      }
    }
    return out;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::size_t cols_;
  std::vector<std::size_t> parent_;
  std::vector<std::int64_t> adj_;
};

using EdgeList = std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>;

// Prunes hanging trees away from `base` and relabels breadth-first.
SubgroupGraph finish(const Alphabet& alphabet, std::size_t vertex_slots, std::size_t base, const EdgeList& edges) {
  const std::size_t cols = 2 * alphabet.size();
  std::vector<std::int64_t> adj(vertex_slots * cols, -1);
  std::vector<std::size_t> degree(vertex_slots, 0);
  for (auto [u, col, v] : edges) {
    adj[u * cols + col] = static_cast<std::int64_t>(v);
    adj[v * cols + (col ^ 1u)] = static_cast<std::int64_t>(u);
    ++degree[u];
    ++degree[v];
  }
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < vertex_slots; ++v)
    if (v != base && degree[v] == 1) queue.push_back(v);
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    for (std::size_t col = 0; col < cols; ++col) {
      const std::int64_t t = adj[v * cols + col];
      if (t < 0) continue;
      const std::size_t u = static_cast<std::size_t>(t);
      adj[v * cols + col] = -1;
      adj[u * cols + (col ^ 1u)] = -1;
      --degree[v];
      if (--degree[u] == 1 && u != base) queue.push_back(u);
    }
  }
  std::vector<std::int64_t> order(vertex_slots, -1);
  std::vector<std::size_t> bfs{base};
  order[base] = 0;
  for (std::size_t k = 0; k < bfs.size(); ++k)
    for (std::size_t col = 0; col < cols; ++col) {
      const std::int64_t t = adj[bfs[k] * cols + col];
      if (t >= 0 && order[static_cast<std::size_t>(t)] < 0) {
        order[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(bfs.size());
        bfs.push_back(static_cast<std::size_t>(t));
      }
    }
  std::vector<std::int32_t> cells(bfs.size() * cols, SubgroupGraph::kNone);
  for (std::size_t k = 0; k < bfs.size(); ++k)
    for (std::size_t col = 0; col < cols; ++col) {
      const std::int64_t t = adj[bfs[k] * cols + col];
      if (t >= 0) cells[k * cols + col] = static_cast<std::int32_t>(order[static_cast<std::size_t>(t)]);
    }
  return SubgroupGraph(alphabet, std::move(cells));
}

}  // namespace

SubgroupGraph fold_graph(const std::vector<Word>& generators, const Alphabet& alphabet) {
  Folder f(2 * alphabet.size());
  for (const auto& w : generators) {
    if (!(w.alphabet() == alphabet)) throw AlphabetMismatch("subgroup generator over the wrong alphabet");
    std::vector<std::size_t> cols;
    for (const auto& l : w.letters(kMaxFoldLetters)) cols.push_back(2 * l.gen + (l.sign < 0 ? 1 : 0));
    f.add_loop(cols);
  }
  return finish(alphabet, f.size(), f.find(0), f.edges());
}

bool graph_member(const SubgroupGraph& g, const Word& w) {
  if (!(w.alphabet() == g.alphabet())) throw AlphabetMismatch("word is not over the graph's alphabet");
  std::size_t v = 0;
  for (const auto& s : w.syllables()) {
    const std::size_t col = 2 * s.gen + (s.exp < 0 ? 1 : 0);
    Integer steps = abs(s.exp);
    const std::size_t start = v;
    std::size_t walked = 0;
    while (steps > 0) {
      const std::int32_t t = g.follow(v, col);
      if (t == SubgroupGraph::kNone) return false;
      v = static_cast<std::size_t>(t);
      --steps;
      ++walked;
      // edges of one label form an injective partial map, so a return to
      // the start closes a cycle of length `walked`
      if (v == start && steps > 0) steps %= static_cast<unsigned long>(walked);
    }
  }
  return v == 0;
}

SubgroupGraph graph_intersect(const SubgroupGraph& a, const SubgroupGraph& b) {
  if (!(a.alphabet() == b.alphabet())) throw AlphabetMismatch("graphs over different alphabets");
  const std::size_t cols = a.columns(), nb = b.vertex_count();
  std::vector<std::int64_t> id(a.vertex_count() * nb, -1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 0}};
  id[0] = 0;
  EdgeList edges;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [x, y] = pairs[k];
    for (std::size_t col = 0; col < cols; ++col) {
      const std::int32_t tx = a.follow(x, col), ty = b.follow(y, col);
      if (tx == SubgroupGraph::kNone || ty == SubgroupGraph::kNone) continue;
      const std::size_t key = static_cast<std::size_t>(tx) * nb + static_cast<std::size_t>(ty);
      if (id[key] < 0) {
        id[key] = static_cast<std::int64_t>(pairs.size());
        pairs.emplace_back(tx, ty);
      }
      if (col % 2 == 0) edges.emplace_back(k, col, static_cast<std::size_t>(id[key]));
    }
  }
  return finish(a.alphabet(), pairs.size(), 0, edges);
}

std::optional<Integer> graph_index(const SubgroupGraph& g) {
  for (auto c : g.cells())
    if (c == SubgroupGraph::kNone) return std::nullopt;
  return Integer(static_cast<unsigned long>(g.vertex_count()));
}

std::vector<Word> graph_generators(const SubgroupGraph& g) {
  const Alphabet& alpha = g.alphabet();
  std::vector<std::optional<Word>> path(g.vertex_count());
  std::vector<std::vector<bool>> tree(g.vertex_count(), std::vector<bool>(g.columns(), false));
  path[0] = Word(alpha);
  std::vector<std::size_t> bfs{0};
  for (std::size_t k = 0; k < bfs.size(); ++k)
    for (std::size_t col = 0; col < g.columns(); ++col) {
      const std::int32_t t = g.follow(bfs[k], col);
      if (t == SubgroupGraph::kNone || path[static_cast<std::size_t>(t)]) continue;
      path[static_cast<std::size_t>(t)] =
          multiply(*path[bfs[k]], Word::generator(alpha, col / 2, (col & 1) ? -1 : 1));
      tree[bfs[k]][col] = true;
      tree[static_cast<std::size_t>(t)][col ^ 1u] = true;
      bfs.push_back(static_cast<std::size_t>(t));
    }
  std::vector<Word> out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    for (std::size_t gen = 0; gen < alpha.size(); ++gen) {
      const std::int32_t t = g.follow(v, 2 * gen);
      if (t == SubgroupGraph::kNone || tree[v][2 * gen]) continue;
      out.push_back(multiply(multiply(*path[v], Word::generator(alpha, gen)), invert(*path[static_cast<std::size_t>(t)])));
    }
  return out;
}

std::size_t graph_rank(const SubgroupGraph& g) { return g.edge_count() + 1 - g.vertex_count(); }

bool graph_contains(const SubgroupGraph& outer, const SubgroupGraph& inner) {
  for (const auto& w : graph_generators(inner))
    if (!graph_member(outer, w)) return false;
  return true;
}

bool in_kernel(const GroupHom& h, const Word& w, KernelTarget target) {
  const Word image = apply_hom(h, w);
  if (target == KernelTarget::Free) return image.is_identity();
  const auto v = abelianize(image);
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

bool in_kernel(const GroupHom& h, const Word& w, const CosetTable& target) {
  for (const auto& s : target.subgroup_generators())
    if (!s.is_identity()) throw UnsupportedBackend("kernel test needs a table of the trivial subgroup");
  if (!(h.target() == target.alphabet())) throw AlphabetMismatch("hom target does not match the table");
  return coset_action(target, apply_hom(h, w)) == 0;
}

bool in_kernel(const GroupHom& h, const Word& w, const Presentation& target) {
  if (!target.relators().empty()) throw UnsupportedBackend("triviality in a group with relators needs a finite coset table");
  return in_kernel(h, w, KernelTarget::Free);
}

}  // namespace liftlim
