#include <algorithm>
#include <cmath>
#include <exception>
#include <queue>
#include <thread>

#include "ced/errors.hpp"
#include "ced/simulate.hpp"

namespace ced {

namespace {

enum class Color : std::uint8_t { Red, Blue, Dead };

enum class EventKind : std::uint8_t { Death, Spread, Overtake };

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  std::int32_t node;
  // Spread: child slot of `node`. Overtake: the red child being overtaken.
  std::int32_t target;

  bool operator>(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
};

constexpr std::int32_t kWhite = -1;

// One trial on the depth-capped tree. Vertices exist only once they turn
// red; an empty child slot is a white vertex. Every clock is sampled when it
// becomes active and stays valid until it fires or its source changes color
// for good, so stale events are simply skipped when popped.
class TreeRun {
 public:
  TreeRun(int d, double lambda, double rho, int depth_cap, std::mt19937_64& rng, const TreeSimOptions& options)
      : d_(d), lambda_(lambda), rho_(rho), cap_(depth_cap), rng_(rng), options_(options) {
    rec_.renewals_per_level.assign(static_cast<std::size_t>(cap_), 0);
    rec_.strict_renewals_per_level.assign(static_cast<std::size_t>(cap_), 0);
  }

  TreeTrialRecord run() {
    // Node 0 is the extra blue vertex attached to the root; its slot 0 is the root.
    const std::int32_t extra = add_node(-1, Color::Blue);
    const std::int32_t root = add_node(0, Color::Red);
    child(extra, 0) = root;
    became_red(root);
    parent_turned_blue(extra);

    while (!queue_.empty()) {
      const Event e = queue_.top();
      queue_.pop();
      now_ = e.time;
      switch (e.kind) {
        case EventKind::Death:
          if (color_[e.node] == Color::Red) color_[e.node] = Color::Dead;
          break;
        case EventKind::Spread:
          if (color_[e.node] == Color::Red && child(e.node, e.target) == kWhite) {
            const std::int32_t w = add_node(depth_[e.node] + 1, Color::Red);
            child(e.node, e.target) = w;
            became_red(w);
          }
          break;
        case EventKind::Overtake:
          if (color_[e.target] == Color::Red) {
            color_[e.target] = Color::Blue;
            ++rec_.blue_count;
            rec_.blue_reached_depth = std::max(rec_.blue_reached_depth, depth_[e.target]);
            parent_turned_blue(e.target);
          }
          break;
      }
    }
    return std::move(rec_);
  }

 private:
  std::int32_t add_node(int depth, Color c) {
    if (color_.size() >= options_.max_vertices) {
      throw ResourceError("tree simulation exceeded its budget of " + std::to_string(options_.max_vertices) +
                          " vertices (depth cap " + std::to_string(cap_) + ")");
    }
    color_.push_back(c);
    depth_.push_back(depth);
    children_.insert(children_.end(), static_cast<std::size_t>(d_), kWhite);
    return static_cast<std::int32_t>(color_.size() - 1);
  }

  std::int32_t& child(std::int32_t v, int slot) {
    return children_[static_cast<std::size_t>(v) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(slot)];
  }

  void schedule(double rate, EventKind kind, std::int32_t node, std::int32_t target) {
    if (rate <= 0.0) return;
    queue_.push(Event{now_ + exponential(rng_, rate), seq_++, kind, node, target});
  }

  void became_red(std::int32_t v) {
    rec_.red_reached_depth = std::max(rec_.red_reached_depth, depth_[v]);
    schedule(rho_, EventKind::Death, v, 0);
    if (depth_[v] < cap_) {
      for (int s = 0; s < d_; ++s) schedule(lambda_, EventKind::Spread, v, s);
    }
  }

  // Overtake clocks for red children, and the renewal checks: a red child w
  // of a freshly blue vertex is a renewal vertex when its first child is
  // white, and a strict one when all of its children are. Vertices on the
  // cap cannot spread, so their renewals are not counted.
  void parent_turned_blue(std::int32_t b) {
    for (int s = 0; s < d_; ++s) {
      const std::int32_t w = child(b, s);
      if (w == kWhite || color_[w] != Color::Red) continue;
      schedule(1.0, EventKind::Overtake, b, w);
      if (depth_[w] >= cap_) continue;
      const auto level = static_cast<std::size_t>(depth_[w]);
      if (child(w, 0) == kWhite) ++rec_.renewals_per_level[level];
      bool all_white = true;
      for (int c = 0; c < d_; ++c) all_white = all_white && child(w, c) == kWhite;
      if (all_white) ++rec_.strict_renewals_per_level[level];
    }
  }

  int d_;
  double lambda_;
  double rho_;
  int cap_;
  std::mt19937_64& rng_;
  const TreeSimOptions& options_;

  std::vector<Color> color_;
  std::vector<int> depth_;
  std::vector<std::int32_t> children_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  TreeTrialRecord rec_;
};

double mean_of(std::uint64_t sum, std::uint64_t n) { return static_cast<double>(sum) / static_cast<double>(n); }

double se_of(std::uint64_t sum, std::uint64_t sumsq, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  const double mean = static_cast<double>(sum) / nn;
  const double var = std::max(0.0, static_cast<double>(sumsq) / nn - mean * mean);
  return std::sqrt(var / nn);
}

}  // namespace

TreeTrialRecord simulate_tree_trial(int d, double lambda, double rho, int depth_cap, std::mt19937_64& rng,
                                    const TreeSimOptions& options) {
  if (d < 2) throw InvalidParameter("d must be >= 2");
  if (depth_cap < 1) throw InvalidParameter("depth_cap must be >= 1");
  return TreeRun(d, lambda, rho, depth_cap, rng, options).run();
}

double TreeSummary::renewal_mean(int level) const {
  return mean_of(renewal_sum.at(static_cast<std::size_t>(level)), n_trials);
}

double TreeSummary::renewal_se(int level) const {
  const auto i = static_cast<std::size_t>(level);
  return se_of(renewal_sum.at(i), renewal_sumsq.at(i), n_trials);
}

double TreeSummary::strict_renewal_mean(int level) const {
  return mean_of(strict_renewal_sum.at(static_cast<std::size_t>(level)), n_trials);
}

double TreeSummary::strict_renewal_se(int level) const {
  const auto i = static_cast<std::size_t>(level);
  return se_of(strict_renewal_sum.at(i), strict_renewal_sumsq.at(i), n_trials);
}

double TreeSummary::blue_reach_frequency() const { return mean_of(blue_reached_cap, n_trials); }
double TreeSummary::red_reach_frequency() const { return mean_of(red_reached_cap, n_trials); }
double TreeSummary::mean_blue_count() const { return mean_of(blue_count_sum, n_trials); }

TreeSummary simulate_tree(const ModelParams& p, int depth_cap, std::uint64_t n_trials, std::uint64_t seed,
                          unsigned threads, const TreeSimOptions& options) {
  if (n_trials < 1) throw InvalidParameter("n_trials must be >= 1");
  if (depth_cap < 1) throw InvalidParameter("depth_cap must be >= 1");

  TreeSummary base;
  base.seed = seed;
  base.d = p.d();
  base.lambda = p.lambda();
  base.rho = p.rho();
  base.depth_cap = depth_cap;
  const auto levels = static_cast<std::size_t>(depth_cap);
  base.renewal_sum.assign(levels, 0);
  base.renewal_sumsq.assign(levels, 0);
  base.strict_renewal_sum.assign(levels, 0);
  base.strict_renewal_sumsq.assign(levels, 0);

  const double lambda = p.lambda().to_double();
  const double rho = p.rho().to_double();
  const unsigned n_workers =
      static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n_trials)));

  std::vector<TreeSummary> parts(n_workers, base);
  std::vector<std::exception_ptr> errors(n_workers);
  auto run = [&](unsigned w) {
    try {
      TreeSummary& s = parts[w];
      const std::uint64_t begin = n_trials * w / n_workers;
      const std::uint64_t end = n_trials * (w + 1) / n_workers;
      for (std::uint64_t t = begin; t < end; ++t) {
        auto rng = trial_stream(seed, t);
        const TreeTrialRecord r = simulate_tree_trial(p.d(), lambda, rho, depth_cap, rng, options);
        for (std::size_t k = 0; k < levels; ++k) {
          const std::uint64_t a = r.renewals_per_level[k];
          const std::uint64_t b = r.strict_renewals_per_level[k];
          s.renewal_sum[k] += a;
          s.renewal_sumsq[k] += a * a;
          s.strict_renewal_sum[k] += b;
          s.strict_renewal_sumsq[k] += b * b;
        }
        s.blue_reached_cap += r.blue_reached_depth >= depth_cap ? 1 : 0;
        s.red_reached_cap += r.red_reached_depth >= depth_cap ? 1 : 0;
        s.blue_count_sum += r.blue_count;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (n_workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  TreeSummary out = base;
  out.n_trials = n_trials;
  for (const auto& s : parts) {
    for (std::size_t k = 0; k < levels; ++k) {
      out.renewal_sum[k] += s.renewal_sum[k];
      out.renewal_sumsq[k] += s.renewal_sumsq[k];
      out.strict_renewal_sum[k] += s.strict_renewal_sum[k];
      out.strict_renewal_sumsq[k] += s.strict_renewal_sumsq[k];
    }
    out.blue_reached_cap += s.blue_reached_cap;
    out.red_reached_cap += s.red_reached_cap;
    out.blue_count_sum += s.blue_count_sum;
  }
  return out;
}

}  // namespace ced
