#pragma once

#include "cbfsim/time.hpp"

namespace cbfsim
{

/// Adaptive DCC constants. The duty bounds and gate bounds are the hard
/// envelope (0.06 %..3 % of the medium, 1..40 Hz, >= 25 ms between dequeues);
/// target and step sizes drive a simple AIMD loop inside that envelope.
struct DccParams
{
    double minDuty = 0.0006;
    double maxDuty = 0.03;
    double initialDuty = 0.03;
    double targetCbr = 0.68;
    double additiveStep = 0.0002;
    double decreaseFactor = 0.95;
    double cbrSmoothing = 0.5; // weight of the previous estimate
    Duration cbrWindow{100'000};
    Duration minGate{25'000};
    Duration maxGate{1'000'000};

    void validate() const;
};

struct DccState
{
    double cbr = 0.0;
    double duty = 0.03;
    SimTime gateNext = kSimStart;
    Duration lastTxAirtime{0};
};

/// Exponentially smoothed channel busy ratio.
double smoothCbr(double previous, double windowFraction, const DccParams& p);

/// One AIMD step toward the target CBR, clamped to the duty envelope.
double updateDuty(double duty, double cbr, const DccParams& p);

/// Idle time required after a transmission of the given airtime so that the
/// node stays within its duty share, clamped to [minGate, maxGate].
Duration gateInterval(double duty, Duration lastTxAirtime, const DccParams& p);

/// Earliest time the gate lets the next frame out. Pure query.
constexpr SimTime nextPermittedTx(const DccState& s, SimTime now) noexcept
{
    return s.gateNext > now ? s.gateNext : now;
}

} // namespace cbfsim
