#include "cbfsim/dcc.hpp"

#include "cbfsim/error.hpp"

#include <algorithm>
#include <cmath>

namespace cbfsim
{

void DccParams::validate() const
{
    if (!(minDuty > 0.0 && minDuty <= maxDuty && maxDuty <= 1.0))
    {
        throw ConfigError("dcc.min_duty/max_duty: need 0 < min_duty <= max_duty <= 1");
    }
    if (!(initialDuty >= minDuty && initialDuty <= maxDuty))
    {
        throw ConfigError("dcc.initial_duty: must lie within [min_duty, max_duty]");
    }
    if (!(targetCbr > 0.0 && targetCbr < 1.0))
    {
        throw ConfigError("dcc.target_cbr: must lie in (0, 1)");
    }
    if (!(decreaseFactor > 0.0 && decreaseFactor < 1.0))
    {
        throw ConfigError("dcc.decrease_factor: must lie in (0, 1)");
    }
    if (!(additiveStep >= 0.0))
    {
        throw ConfigError("dcc.additive_step: must be non-negative");
    }
    if (!(cbrSmoothing >= 0.0 && cbrSmoothing < 1.0))
    {
        throw ConfigError("dcc.cbr_smoothing: must lie in [0, 1)");
    }
    if (cbrWindow <= Duration{0})
    {
        throw ConfigError("dcc.cbr_window_ms: must be positive");
    }
    if (!(minGate > Duration{0} && minGate <= maxGate))
    {
        throw ConfigError("dcc.min_gate_ms/max_gate_ms: need 0 < min_gate <= max_gate");
    }
}

double smoothCbr(double previous, double windowFraction, const DccParams& p)
{
    const double window = std::clamp(windowFraction, 0.0, 1.0);
    return p.cbrSmoothing * previous + (1.0 - p.cbrSmoothing) * window;
}

double updateDuty(double duty, double cbr, const DccParams& p)
{
    if (cbr < p.targetCbr)
    {
        return std::min(p.maxDuty, duty + p.additiveStep);
    }
    return std::max(p.minDuty, duty * p.decreaseFactor);
}

Duration gateInterval(double duty, Duration lastTxAirtime, const DccParams& p)
{
    const double d = std::clamp(duty, p.minDuty, p.maxDuty);
    // Rounded up so the node never exceeds its share.
    const double raw = static_cast<double>(lastTxAirtime.count()) * (1.0 - d) / d;
    const Duration interval{static_cast<Duration::rep>(std::ceil(raw))};
    return std::clamp(interval, p.minGate, p.maxGate);
}

} // namespace cbfsim
