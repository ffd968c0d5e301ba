#pragma once

#include <cstdint>
#include <vector>

#include "gdtw/gdtw.hpp"
#include "gdtw/series.hpp"

namespace gdtw {

/// Open-loop imitation problem: optimize an action sequence so the rolled-out
/// 2-D trajectory gets close, in (soft) GDTW, to an expert living anywhere.
struct ImitationProblem {
    TimeSeries expert;
    int horizon = 0;                 ///< T_x, >= 2
    std::vector<double> start{0.0, 0.0};
    double action_bound = 0.2;
    double gamma = 0.1;              ///< 0 = hard alignments
    double learn_rate = 5e-2;
    int steps = 500;
    uint64_t seed = 0;
    FwOptions fw;                    ///< inner solver; gamma is taken from above
    int restart_alignment_every = 50;

    void validate() const;
};

struct ImitationResult {
    TimeSeries trajectory;            ///< final rollout in R^2
    std::vector<double> loss_history; ///< length steps + 1
    std::vector<std::vector<double>> actions;
};

/// x_{t+1} = x_t + clip(a_t, +-bound); |actions| must equal T - 1.
TimeSeries rollout(const std::vector<std::vector<double>>& actions,
                   const std::vector<double>& start, int horizon, double bound);

/// (Soft) GDTW between a trajectory and the expert. The DistanceMatrix
/// overload takes a precomputed expert matrix (the cache `imitate` keeps);
/// both routes return identical values.
struct ImitationLoss {
    double value = 0.0;
    GdtwResult solve;
};
ImitationLoss imitation_loss(const TimeSeries& traj, const TimeSeries& expert,
                             double gamma, const FwOptions& opts);
ImitationLoss imitation_loss(const TimeSeries& traj, const DistanceMatrix& expert_d,
                             double gamma, const FwOptions& opts);

/// Gradient descent on the action sequence, warm-starting alignments between
/// steps. Throws std::runtime_error if the loss diverges past 1000x initial.
ImitationResult imitate(const ImitationProblem& problem);

}  // namespace gdtw
