#pragma once

#include "cmrl/cmdp.hpp"
#include "cmrl/rng.hpp"

#include <memory>
#include <optional>

namespace cmrl {

/// One task drawn from the distribution: the scalar task index (the
/// family parameter) and the instantiated CMDP.
struct TaskDraw {
    double param = 0.0;
    TabularCmdp cmdp;
};

/// Abstract source of i.i.d. task draws. Draws are independent across calls
/// given independent rng streams; samplers own no hidden randomness.
class TaskSampler {
public:
    virtual ~TaskSampler() = default;
    virtual TaskDraw draw(Rng& rng) const = 0;
    /// Exact optimal reward value of a task, when the family can provide it.
    virtual std::optional<double> true_optimum(const TaskDraw& task) const { return std::nullopt; }
    /// True when the family's constraint values are monotone (non-increasing)
    /// in the task parameter, enabling the structured feasibility shortcut.
    virtual bool constraint_monotone() const { return false; }
};

using TaskSamplerPtr = std::shared_ptr<const TaskSampler>;

} // namespace cmrl
