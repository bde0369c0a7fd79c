#include "roguegym/harness.hpp"

#include <charconv>
#include <cmath>
#include <deque>
#include <exception>
#include <ostream>
#include <set>
#include <thread>

namespace roguegym {

Env::Env(GameConfig config, std::uint64_t seed) : config_(std::move(config)), seed_(seed) {
  validate(config_);
}

Observation Env::reset(std::optional<std::uint64_t> seed) {
  if (seed) seed_ = *seed;
  current_ = new_game(config_, seed_, reset_count_);
  ++reset_count_;
  return observe(*current_);
}

StepResult Env::step(Action action) {
  if (!current_) throw ContractError("step called before reset");
  const Transition tr = apply(*current_, action);
  return {observe(*current_), tr.reward, tr.done, tr.info};
}

StepResult Env::step(char key) {
  const auto action = action_from_key(key);
  if (!action) throw std::invalid_argument(std::string("unknown action key '") + key + "'");
  return step(*action);
}

StepResult Env::step(int index) {
  const auto action = action_from_index(index);
  if (!action) throw std::invalid_argument("action index " + std::to_string(index) + " outside [0, 10]");
  return step(*action);
}

// ---------------------------------------------------------------------------

Decision RandomAgent::act(const Observation&, RngStream& rng) {
  ActionProbs probs;
  probs.fill(1.0 / kNumActions);
  return {static_cast<int>(rng.uniform_int(0, kNumActions - 1)), probs};
}

Decision ScriptedAgent::act(const Observation&, RngStream&) {
  if (next_ >= script_.size()) return {action_index(Action::NoOp), std::nullopt};
  return {action_index(script_[next_++]), std::nullopt};
}

namespace {

bool walkable_glyph(char c) { return c == '.' || c == '#' || c == '+' || c == '%' || c == '*'; }

Action step_toward(Pos delta) {
  if (delta == Pos{-1, 0}) return Action::Left;
  if (delta == Pos{1, 0}) return Action::Right;
  if (delta == Pos{0, -1}) return Action::Up;
  return Action::Down;
}

}  // namespace

void GreedyDescendAgent::begin_episode(std::uint64_t, int) {
  depth_ = 0;
  searches_ = 0;
  visited_.clear();
}

Decision GreedyDescendAgent::act(const Observation& obs, RngStream&) {
  const CharGrid& view = obs.chars;
  const int w = view.width();
  const int h = view.height();
  if (obs.status.depth != depth_) {
    depth_ = obs.status.depth;
    visited_.assign(static_cast<std::size_t>(w * h), 0);
    searches_ = 0;
  }
  if (obs.status.under_player == '%') return {action_index(Action::Descend), std::nullopt};

  Pos me{-1, -1};
  for (int y = 0; y < h && me.x < 0; ++y) {
    for (int x = 0; x < w; ++x) {
      if (view[{x, y}] == '@') {
        me = {x, y};
        break;
      }
    }
  }
  if (me.x < 0) return {action_index(Action::Search), std::nullopt};
  visited_[static_cast<std::size_t>(me.y * w + me.x)] = 1;

  auto is_frontier = [&](Pos p) {
    if (visited_[static_cast<std::size_t>(p.y * w + p.x)]) return false;
    for (Pos d : kNeighbors4) {
      const Pos q = p + d;
      if (q.x >= 0 && q.y >= 0 && q.x < w && q.y < h && view[q] == ' ') return true;
    }
    return false;
  };

  // First 4-connected move toward the nearest stairs, else the nearest frontier.
  Grid<int> first_move(w, h, -1);
  std::deque<Pos> queue;
  std::optional<Pos> frontier_goal;
  for (int i = 0; i < 4; ++i) {
    const Pos q = me + kNeighbors4[i];
    if (q.x < 0 || q.y < 0 || q.x >= w || q.y >= h || !walkable_glyph(view[q])) continue;
    first_move[q] = i;
    queue.push_back(q);
  }
  while (!queue.empty()) {
    const Pos p = queue.front();
    queue.pop_front();
    if (view[p] == '%') {
      searches_ = 0;
      return {action_index(step_toward(kNeighbors4[first_move[p]])), std::nullopt};
    }
    if (!frontier_goal && is_frontier(p)) frontier_goal = p;
    for (Pos d : kNeighbors4) {
      const Pos q = p + d;
      if (q.x < 0 || q.y < 0 || q.x >= w || q.y >= h || q == me || first_move[q] >= 0 || !walkable_glyph(view[q])) {
        continue;
      }
      first_move[q] = first_move[p];
      queue.push_back(q);
    }
  }
  if (frontier_goal) {
    searches_ = 0;
    return {action_index(step_toward(kNeighbors4[first_move[*frontier_goal]])), std::nullopt};
  }
  // Stuck: search for a while, then forget what was visited and sweep again.
  if (++searches_ > 10) {
    std::fill(visited_.begin(), visited_.end(), 0);
    searches_ = 0;
  }
  return {action_index(Action::Search), std::nullopt};
}

std::unique_ptr<AgentPolicy> make_builtin_agent(const std::string& name) {
  if (name == "random") return std::make_unique<RandomAgent>();
  if (name == "greedy") return std::make_unique<GreedyDescendAgent>();
  return nullptr;
}

// ---------------------------------------------------------------------------

EvalError::EvalError(std::uint64_t seed, int episode, int step, const std::string& what)
    : std::runtime_error("seed " + std::to_string(seed) + ", episode " + std::to_string(episode) + ", step " +
                         std::to_string(step) + ": " + what),
      seed_(seed),
      episode_(episode),
      step_(step) {}

std::string agent_label(std::uint64_t seed, int episode) {
  return "agent/" + std::to_string(seed) + "/" + std::to_string(episode);
}

double policy_entropy(const ActionProbs& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

namespace {

void check_decision(const Decision& d, std::uint64_t seed, int episode, int step) {
  if (d.action < 0 || d.action >= kNumActions) {
    throw EvalError(seed, episode, step, "agent returned action " + std::to_string(d.action));
  }
  if (d.probs) {
    double sum = 0.0;
    for (double p : *d.probs) {
      if (!(p >= 0.0)) throw EvalError(seed, episode, step, "negative or NaN action probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw EvalError(seed, episode, step, "action probabilities do not sum to 1");
  }
}

SeedResult run_seed(AgentPolicy& agent, std::uint64_t seed, int episodes, const GameConfig& config,
                    std::uint64_t eval_seed, const FloorSource& floor_source) {
  SeedResult result;
  for (int episode = 0; episode < episodes; ++episode) {
    GameState state = floor_source
                          ? new_game_on_floor(config, floor_source(config, seed), seed,
                                              static_cast<std::uint64_t>(episode))
                          : new_game(config, seed, static_cast<std::uint64_t>(episode));
    RngStream rng = derive_stream(eval_seed, agent_label(seed, episode));
    agent.begin_episode(seed, episode);
    double total = 0.0;
    double entropy = 0.0;
    int entropy_steps = 0;
    while (!state.done) {
      const Decision d = agent.act(observe(state), rng);
      check_decision(d, seed, episode, state.step_count + 1);
      if (d.probs) {
        entropy += policy_entropy(*d.probs);
        ++entropy_steps;
      }
      total += apply(state, static_cast<Action>(d.action)).reward;
    }
    result.rewards.push_back(total);
    result.entropy_sums.push_back(entropy);
    result.entropy_steps.push_back(entropy_steps);
  }
  double sum = 0.0;
  for (double r : result.rewards) sum += r;
  result.mean = sum / episodes;
  return result;
}

}  // namespace

EvalReport evaluate(const AgentPolicy& agent, const std::vector<std::uint64_t>& seeds, int episodes_per_seed,
                    const GameConfig& config, std::uint64_t eval_seed, const EvalOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("evaluate: empty seed list");
  if (episodes_per_seed < 1) throw std::invalid_argument("evaluate: episodes_per_seed must be >= 1");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("evaluate: duplicate seeds");
  }
  validate(config);

  std::vector<SeedResult> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(seeds.size())));
  auto shard = [&](int worker) {
    std::unique_ptr<AgentPolicy> local = agent.clone();
    for (std::size_t i = static_cast<std::size_t>(worker); i < seeds.size(); i += static_cast<std::size_t>(workers)) {
      try {
        results[i] = run_seed(*local, seeds[i], episodes_per_seed, config, eval_seed, options.floor_source);
      } catch (...) {
        errors[i] = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    shard(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(shard, w);
    for (auto& t : pool) t.join();
  }

  EvalReport report;
  report.agent = agent.name();
  report.episodes_per_seed = episodes_per_seed;
  report.eval_seed = eval_seed;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    report.per_seed.emplace(seeds[i], std::move(results[i]));
  }
  // Errors surface in ascending seed order so the reported failure is stable.
  std::map<std::uint64_t, std::exception_ptr> failures;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (errors[i]) failures.emplace(seeds[i], errors[i]);
  }
  if (!failures.empty()) std::rethrow_exception(failures.begin()->second);

  double sum_means = 0.0;
  double sum_rewards = 0.0;
  double entropy = 0.0;
  long long entropy_steps = 0;
  std::size_t episodes = 0;
  for (const auto& [seed, r] : report.per_seed) {
    sum_means += r.mean;
    for (std::size_t e = 0; e < r.rewards.size(); ++e) {
      sum_rewards += r.rewards[e];
      entropy += r.entropy_sums[e];
      entropy_steps += r.entropy_steps[e];
      ++episodes;
    }
  }
  report.aggregate_mean = sum_means / static_cast<double>(report.per_seed.size());
  const double episode_mean = sum_rewards / static_cast<double>(episodes);
  double sq = 0.0;
  for (const auto& [seed, r] : report.per_seed) {
    for (double v : r.rewards) sq += (v - episode_mean) * (v - episode_mean);
  }
  report.aggregate_std = std::sqrt(sq / static_cast<double>(episodes));
  if (entropy_steps > 0) report.mean_policy_entropy = entropy / static_cast<double>(entropy_steps);
  return report;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_csv(const EvalReport& report, std::ostream& out) {
  out << "seed,episode,reward\n";
  for (const auto& [seed, r] : report.per_seed) {
    for (std::size_t e = 0; e < r.rewards.size(); ++e) {
      out << seed << ',' << e << ',' << format_number(r.rewards[e]) << '\n';
    }
  }
}

nlohmann::json summary_json(const EvalReport& report) {
  std::size_t episodes = 0;
  for (const auto& [seed, r] : report.per_seed) episodes += r.rewards.size();
  return {
      {"agent", report.agent},
      {"aggregate_mean", report.aggregate_mean},
      {"aggregate_std", report.aggregate_std},
      {"mean_policy_entropy",
       report.mean_policy_entropy ? nlohmann::json(*report.mean_policy_entropy) : nlohmann::json(nullptr)},
      {"episodes_per_seed", report.episodes_per_seed},
      {"num_seeds", report.per_seed.size()},
      {"num_episodes", episodes},
      {"eval_seed", report.eval_seed},
  };
}

}  // namespace roguegym
