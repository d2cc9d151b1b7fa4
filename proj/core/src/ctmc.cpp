#include "pepa/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "pepa/errors.hpp"

namespace pepa {

namespace {

Rational edge_value(const DerivationGraph& g, const Edge& e) {
  if (e.activity.rate.is_passive())
    throw ModelError("model is incomplete: state " + to_string(g.state(e.src)) +
                     " has a passive " + e.activity.action + " activity");
  return e.activity.rate.value() * Rational(static_cast<long>(e.multiplicity));
}

void check_index(const DerivationGraph& g, int i) {
  if (i < 0 || i >= g.state_count())
    throw Error("state index " + std::to_string(i) + " out of range");
}

}  // namespace

Rational transition_rate(const DerivationGraph& g, int i, int j) {
  check_index(g, i);
  check_index(g, j);
  Rational sum = 0;
  auto [begin, end] = g.out_edges(i);
  for (const Edge* e = begin; e != end; ++e) {
    if (e->dst == j) sum += edge_value(g, *e);
  }
  return sum;
}

Rational conditional_rate(const DerivationGraph& g, int i, int j,
                          const Action& alpha) {
  check_index(g, i);
  check_index(g, j);
  Rational sum = 0;
  auto [begin, end] = g.out_edges(i);
  for (const Edge* e = begin; e != end; ++e) {
    if (e->dst == j && e->activity.action == alpha) sum += edge_value(g, *e);
  }
  return sum;
}

Rational total_conditional_rate(const DerivationGraph& g, int i,
                                const Action& alpha) {
  check_index(g, i);
  Rational sum = 0;
  auto [begin, end] = g.out_edges(i);
  for (const Edge* e = begin; e != end; ++e) {
    if (e->activity.action == alpha) sum += edge_value(g, *e);
  }
  return sum;
}

Rational outgoing_to(const DerivationGraph& g, int i, const std::vector<int>& S,
                     const Action& alpha) {
  check_index(g, i);
  Rational sum = 0;
  auto [begin, end] = g.out_edges(i);
  for (const Edge* e = begin; e != end; ++e) {
    if (e->activity.action == alpha &&
        std::find(S.begin(), S.end(), e->dst) != S.end())
      sum += edge_value(g, *e);
  }
  return sum;
}

Rational incoming_from(const DerivationGraph& g, const std::vector<int>& S,
                       int j, const Action& alpha) {
  check_index(g, j);
  Rational sum = 0;
  for (int i : S) sum += conditional_rate(g, i, j, alpha);
  return sum;
}

Rational exit_rate(const DerivationGraph& g, int i) {
  check_index(g, i);
  Rational sum = 0;
  auto [begin, end] = g.out_edges(i);
  for (const Edge* e = begin; e != end; ++e) sum += edge_value(g, *e);
  return sum;
}

Generator generator(const DerivationGraph& g) {
  Generator gen;
  gen.n = g.state_count();
  gen.q.assign(gen.n, std::vector<Rational>(gen.n, Rational(0)));
  for (const Edge& e : g.edges()) {
    Rational value = edge_value(g, e);  // rejects passive rates everywhere
    if (e.src == e.dst) continue;       // self-loops cancel in q_ii
    gen.q[e.src][e.dst] += value;
  }
  for (int i = 0; i < gen.n; ++i) {
    Rational rowSum = 0;
    for (int j = 0; j < gen.n; ++j) {
      if (j != i) rowSum += gen.q[i][j];
    }
    gen.q[i][i] = -rowSum;
  }
  return gen;
}

std::vector<std::vector<int>> strongly_connected_components(
    const DerivationGraph& g) {
  int n = g.state_count();
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> onStack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;

  struct Frame {
    int v;
    const Edge* next;
    const Edge* end;
  };
  for (int start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    std::vector<Frame> frames;
    auto open = [&](int v) {
      index[v] = lowlink[v] = counter++;
      stack.push_back(v);
      onStack[v] = true;
      auto [b, e] = g.out_edges(v);
      frames.push_back({v, b, e});
    };
    open(start);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next != f.end) {
        int w = f.next->dst;
        ++f.next;
        if (index[w] == -1) {
          open(w);
        } else if (onStack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
        if (lowlink[v] == index[v]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            onStack[w] = false;
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          components.push_back(std::move(comp));
        }
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

bool is_irreducible(const DerivationGraph& g) {
  return strongly_connected_components(g).size() == 1;
}

namespace {

void require_complete_irreducible(const DerivationGraph& g) {
  CompletenessReport report = is_complete(g);
  if (!report.complete)
    throw ModelError("model is incomplete: state " +
                     to_string(g.state(report.passive_states.front())) +
                     " has a passive activity at the top level");
  auto components = strongly_connected_components(g);
  if (components.size() <= 1) return;
  // name the first terminal component: once entered, the chain cannot leave
  for (const auto& comp : components) {
    bool exits = false;
    for (int v : comp) {
      auto [b, e] = g.out_edges(v);
      for (const Edge* edge = b; edge != e && !exits; ++edge) {
        if (std::find(comp.begin(), comp.end(), edge->dst) == comp.end())
          exits = true;
      }
      if (exits) break;
    }
    if (!exits) {
      throw ModelError(
          "chain is reducible: the component containing state " +
          to_string(g.state(comp.front())) +
          " cannot reach the rest of the state space");
    }
  }
  throw ModelError("chain is reducible");
}

}  // namespace

SteadyState steady_state(const Generator& gen, const DerivationGraph& g) {
  if (gen.n != g.state_count())
    throw Error("generator and graph disagree on the state count");
  if (gen.n == 0) throw ModelError("empty state space");
  require_complete_irreducible(g);

  int n = gen.n;
  // pi*Q = 0 transposed: row j encodes the balance of state j; row 0 is
  // replaced by the normalization sum(pi) = 1.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1, Rational(0)));
  for (int i = 0; i < n; ++i) a[0][i] = 1;
  a[0][n] = 1;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < n; ++i) a[j][i] = gen.q[i][j];
    a[j][n] = 0;
  }

  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row) {
      if (a[row][col] != 0) {
        pivot = row;
        break;
      }
    }
    if (pivot == -1)
      throw ModelError("steady state system is singular");
    std::swap(a[col], a[pivot]);
    for (int row = col + 1; row < n; ++row) {
      if (a[row][col] == 0) continue;
      Rational factor = a[row][col] / a[col][col];
      for (int k = col; k <= n; ++k) a[row][k] -= factor * a[col][k];
    }
  }

  SteadyState out;
  out.pi.assign(n, Rational(0));
  for (int row = n - 1; row >= 0; --row) {
    Rational acc = a[row][n];
    for (int k = row + 1; k < n; ++k) acc -= a[row][k] * out.pi[k];
    out.pi[row] = acc / a[row][row];
  }
  return out;
}

std::vector<double> steady_state_double(const Generator& gen,
                                        const DerivationGraph& g) {
  if (gen.n != g.state_count())
    throw Error("generator and graph disagree on the state count");
  if (gen.n == 0) throw ModelError("empty state space");
  require_complete_irreducible(g);

  int n = gen.n;
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  double maxEntry = 0.0;
  for (int i = 0; i < n; ++i) a[0][i] = 1.0;
  a[0][n] = 1.0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      a[j][i] = to_double(gen.q[i][j]);
      maxEntry = std::max(maxEntry, std::abs(a[j][i]));
    }
  }

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (a[pivot][col] == 0.0)
      throw ModelError("steady state system is singular");
    std::swap(a[col], a[pivot]);
    for (int row = col + 1; row < n; ++row) {
      if (a[row][col] == 0.0) continue;
      double factor = a[row][col] / a[col][col];
      for (int k = col; k <= n; ++k) a[row][k] -= factor * a[col][k];
    }
  }

  std::vector<double> pi(n, 0.0);
  for (int row = n - 1; row >= 0; --row) {
    double acc = a[row][n];
    for (int k = row + 1; k < n; ++k) acc -= a[row][k] * pi[k];
    pi[row] = acc / a[row][row];
  }

  // residual check of pi*Q against the documented tolerance
  double tolerance = 1e-12 * (1.0 + maxEntry);
  for (int j = 0; j < n; ++j) {
    double r = 0.0;
    for (int i = 0; i < n; ++i) r += pi[i] * to_double(gen.q[i][j]);
    if (std::abs(r) > tolerance)
      throw ModelError("floating steady state residual exceeds tolerance");
  }
  return pi;
}

}  // namespace pepa
