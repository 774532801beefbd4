"""Pure-Python fixed-point kernels.

These are the hot inner loops of the simulator: the integer PID step (plus a
batch runner over error sequences) and the integer thermal substep
integrator. A compiled Cython twin (`greenloop._kernels`) implements the
same functions; `greenloop._backend` picks whichever is importable. Both
backends must agree bit-for-bit, which the parity test suite enforces.

All arithmetic is exact integer arithmetic. The compiled twin uses 64-bit
(PID) and 128-bit (plant) intermediates, so callers keep inputs inside the
ranges the public wrappers validate (gains <= 1e6, |error| <= 1e5, plant
rates <= 10/s in nano units, temperatures inside the +/-200 C guard rail).
"""

import numpy as np

PWM_MAX = 40000

# plant substep denominator: duty counts * ms-per-second * nano rate unit
_PLANT_DEN = PWM_MAX * 1000 * 1_000_000_000


def pid_step(acc, last_error, kp, ki, kd, error):
    """One controller update. Returns (duty, acc, saturated, idle, unclamped).

    Negative error short-circuits to the idle state: zero duty and a cleared
    accumulator. Otherwise the candidate accumulator (acc + error) is
    committed only when the unclamped output lands inside [0, PWM_MAX];
    a saturated output leaves the accumulator untouched.
    """
    if error < 0:
        return 0, 0, False, True, 0
    acc_candidate = acc + error
    u_raw = kp * error + ki * acc_candidate + kd * (error - last_error)
    if 0 <= u_raw <= PWM_MAX:
        return u_raw, acc_candidate, False, False, u_raw
    duty = 0 if u_raw < 0 else PWM_MAX
    return duty, acc, True, False, u_raw


def pid_run_sequence(kp, ki, kd, errors, acc0=0, last0=0):
    """Run the PID over a whole error sequence.

    Returns int64 arrays (duties, accumulators, flags); flag bit 0 marks a
    saturated step, bit 1 an idle step.
    """
    n = len(errors)
    duties = np.empty(n, dtype=np.int64)
    accs = np.empty(n, dtype=np.int64)
    flags = np.empty(n, dtype=np.int64)
    acc = acc0
    last = last0
    for i in range(n):
        e = int(errors[i])
        duty, acc, sat, idle, _ = pid_step(acc, last, kp, ki, kd, e)
        last = e
        duties[i] = duty
        accs[i] = acc
        flags[i] = (1 if sat else 0) | (2 if idle else 0)
    return duties, accs, flags


def plant_run_substeps(
    temp_milli,
    tamb_milli,
    tsrc_milli,
    k_passive_nano,
    k_fan_nano,
    k_src_nano,
    duty_counts,
    disturbance_on,
    dt_ms,
    substeps,
):
    """Advance the first-order thermal state by `substeps` Euler substeps.

    Temperatures are integer milli-degrees, rates integer nano-per-second,
    duty in PWM counts out of 40000. Each substep adds the round-half-up
    (toward +inf) milli-degree image of the exact rational increment.
    """
    src_term = k_src_nano * PWM_MAX if disturbance_on else 0
    den = _PLANT_DEN
    two_den = 2 * den
    for _ in range(substeps):
        drift = (k_passive_nano * PWM_MAX + k_fan_nano * duty_counts) * (
            tamb_milli - temp_milli
        )
        if src_term:
            drift += src_term * (tsrc_milli - temp_milli)
        temp_milli += (2 * drift * dt_ms + den) // two_den
    return temp_milli
