#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gdtw/imitate.hpp"
#include "gdtw/rng.hpp"

namespace gdtw {

void ImitationProblem::validate() const {
    expert.validate();
    if (horizon < 2) throw std::invalid_argument("ImitationProblem: horizon must be >= 2");
    if (start.size() != 2) throw std::invalid_argument("ImitationProblem: start must be 2-D");
    if (action_bound <= 0.0)
        throw std::invalid_argument("ImitationProblem: action_bound must be positive");
    if (learn_rate <= 0.0)
        throw std::invalid_argument("ImitationProblem: learn_rate must be positive");
    if (steps < 0) throw std::invalid_argument("ImitationProblem: steps must be >= 0");
    if (gamma < 0.0) throw std::invalid_argument("ImitationProblem: gamma must be >= 0");
}

TimeSeries rollout(const std::vector<std::vector<double>>& actions,
                   const std::vector<double>& start, int horizon, double bound) {
    if (static_cast<int>(actions.size()) != horizon - 1)
        throw std::invalid_argument("rollout: need horizon - 1 actions");
    TimeSeries traj;
    std::vector<double> x = start;
    traj.points.push_back(x);
    for (const auto& a : actions) {
        if (a.size() != x.size()) throw std::invalid_argument("rollout: action dim mismatch");
        for (size_t c = 0; c < x.size(); ++c)
            x[c] += std::clamp(a[c], -bound, bound);
        traj.points.push_back(x);
    }
    return traj;
}

namespace {

GdtwResult solve_alignment(const DistanceMatrix& dx, const DistanceMatrix& dy,
                           double gamma, const FwOptions& opts) {
    FwOptions o = opts;
    o.gamma = gamma;
    return gamma > 0.0 ? soft_gdtw(dx, dy, o) : gdtw(dx, dy, o);
}

}  // namespace

ImitationLoss imitation_loss(const TimeSeries& traj, const DistanceMatrix& expert_d,
                             double gamma, const FwOptions& opts) {
    ImitationLoss out;
    out.solve = solve_alignment(pairwise_distances(traj), expert_d, gamma, opts);
    out.value = out.solve.value;
    return out;
}

ImitationLoss imitation_loss(const TimeSeries& traj, const TimeSeries& expert,
                             double gamma, const FwOptions& opts) {
    return imitation_loss(traj, pairwise_distances(expert), gamma, opts);
}

ImitationResult imitate(const ImitationProblem& problem) {
    problem.validate();
    const int t = problem.horizon;
    const double bound = problem.action_bound;

    // expert distance matrix computed once; this is the expensive part for
    // grid-video experts
    const DistanceMatrix expert_d = pairwise_distances(problem.expert);

    SplitMix64 rng(problem.seed);
    std::vector<std::vector<double>> actions(t - 1, std::vector<double>(2));
    for (auto& a : actions)
        for (double& v : a) v = rng.uniform(-bound / 4.0, bound / 4.0);

    ImitationResult res;
    FwOptions fw = problem.fw;
    fw.restarts = 0;
    TimeSeries traj = rollout(actions, problem.start, t, bound);

    double initial_loss = -1.0;
    for (int step = 0; step <= problem.steps; ++step) {
        // periodic extra random restart alongside the warm start, to escape
        // limit cycles without throwing the current alignment away
        bool explore = step > 0 && problem.restart_alignment_every > 0 &&
                       step % problem.restart_alignment_every == 0;
        fw.restarts = explore ? 1 : 0;
        if (explore) fw.seed = rng.next();
        GdtwResult solve = solve_alignment(pairwise_distances(traj), expert_d,
                                           problem.gamma, fw);
        res.loss_history.push_back(solve.value);
        if (initial_loss < 0.0) initial_loss = solve.value;
        if (solve.value > 1e3 * std::max(initial_loss, 1e-12))
            throw std::runtime_error("imitate: loss diverged past 1000x initial");
        if (step == problem.steps) break;

        // warm-start the next alignment solve
        fw.init = FwInit::Given;
        fw.given_init = problem.gamma > 0.0 ? round_to_path(solve.soft_alignment)
                                            : solve.alignment;

        const Mat a_dense = problem.gamma > 0.0 ? solve.soft_alignment.weights
                                                : solve.alignment.indicator();
        auto grad_x = gdtw_grad_dy(traj, expert_d.m, a_dense, fw.normalize_inputs);

        // backprop through the prefix-sum rollout: suffix sums of state grads
        std::vector<std::vector<double>> grad_a(t - 1, std::vector<double>(2, 0.0));
        std::vector<double> suffix(2, 0.0);
        for (int s = t - 1; s >= 1; --s) {
            for (int c = 0; c < 2; ++c) suffix[c] += grad_x[s][c];
            for (int c = 0; c < 2; ++c) grad_a[s - 1][c] = suffix[c];
        }

        double norm2 = 0.0;
        for (const auto& g : grad_a)
            for (double v : g) norm2 += v * v;
        double scale = problem.learn_rate;
        const double clip_norm = 10.0;
        if (norm2 > clip_norm * clip_norm) scale *= clip_norm / std::sqrt(norm2);

        for (int u = 0; u < t - 1; ++u)
            for (int c = 0; c < 2; ++c) {
                actions[u][c] -= scale * grad_a[u][c];
                // keep the parameters inside the action box so the rollout
                // clip stays inactive and gradients keep flowing
                actions[u][c] = std::clamp(actions[u][c], -bound, bound);
            }
        traj = rollout(actions, problem.start, t, bound);
    }

    res.trajectory = std::move(traj);
    res.actions = std::move(actions);
    return res;
}

}  // namespace gdtw
