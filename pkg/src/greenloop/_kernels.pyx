# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-point kernels.

Bit-identical twin of greenloop._kernels_py: integer PID step / sequence
runner and the integer thermal substep integrator. PID math uses 64-bit
integers (callers bound gains and errors); plant math uses 128-bit
intermediates so worst-case rate * duty * delta-T products cannot wrap.
"""

import numpy as np

cdef extern from *:
    """
    typedef __int128 gl_int128;
    """
    ctypedef long long gl_int128

cdef long long PWM_MAX_C = 40000
# duty counts * ms-per-second * nano rate unit
cdef gl_int128 PLANT_DEN = <gl_int128> 40000 * 1000 * 1000000000

PWM_MAX = 40000


cdef inline long long _floordiv128(gl_int128 n, gl_int128 d):
    # C division truncates toward zero; match Python's floor semantics.
    cdef gl_int128 q = n / d
    if n % d != 0 and (n < 0) != (d < 0):
        q -= 1
    return <long long> q


cdef inline void _pid_step_c(
    long long acc,
    long long last_error,
    long long kp,
    long long ki,
    long long kd,
    long long error,
    long long *out,
) noexcept:
    # out = [duty, acc, saturated, idle, unclamped]
    cdef long long acc_candidate, u_raw
    if error < 0:
        out[0] = 0
        out[1] = 0
        out[2] = 0
        out[3] = 1
        out[4] = 0
        return
    acc_candidate = acc + error
    u_raw = kp * error + ki * acc_candidate + kd * (error - last_error)
    if 0 <= u_raw <= PWM_MAX_C:
        out[0] = u_raw
        out[1] = acc_candidate
        out[2] = 0
    else:
        out[0] = 0 if u_raw < 0 else PWM_MAX_C
        out[1] = acc
        out[2] = 1
    out[3] = 0
    out[4] = u_raw


def pid_step(acc, last_error, kp, ki, kd, error):
    """One controller update. Returns (duty, acc, saturated, idle, unclamped)."""
    cdef long long out[5]
    _pid_step_c(acc, last_error, kp, ki, kd, error, out)
    return int(out[0]), int(out[1]), bool(out[2]), bool(out[3]), int(out[4])


def pid_run_sequence(kp, ki, kd, errors, acc0=0, last0=0):
    """Run the PID over a whole error sequence.

    Returns int64 arrays (duties, accumulators, flags); flag bit 0 marks a
    saturated step, bit 1 an idle step.
    """
    err_arr = np.ascontiguousarray(errors, dtype=np.int64)
    cdef long long[::1] e = err_arr
    cdef Py_ssize_t n = e.shape[0]
    duties_arr = np.empty(n, dtype=np.int64)
    accs_arr = np.empty(n, dtype=np.int64)
    flags_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] duties = duties_arr
    cdef long long[::1] accs = accs_arr
    cdef long long[::1] flags = flags_arr
    cdef long long ckp = kp, cki = ki, ckd = kd
    cdef long long acc = acc0, last = last0
    cdef long long out[5]
    cdef Py_ssize_t i
    for i in range(n):
        _pid_step_c(acc, last, ckp, cki, ckd, e[i], out)
        acc = out[1]
        last = e[i]
        duties[i] = out[0]
        accs[i] = acc
        flags[i] = out[2] | (out[3] << 1)
    return duties_arr, accs_arr, flags_arr


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
    """Advance the first-order thermal state by `substeps` Euler substeps."""
    cdef gl_int128 temp = <long long> temp_milli
    cdef gl_int128 tamb = <long long> tamb_milli
    cdef gl_int128 tsrc = <long long> tsrc_milli
    cdef gl_int128 coupling = (
        <gl_int128> (<long long> k_passive_nano) * PWM_MAX_C
        + <gl_int128> (<long long> k_fan_nano) * (<long long> duty_counts)
    )
    cdef gl_int128 src_term = 0
    if disturbance_on:
        src_term = <gl_int128> (<long long> k_src_nano) * PWM_MAX_C
    cdef gl_int128 dt = <long long> dt_ms
    cdef gl_int128 drift
    cdef long long nsub = substeps
    cdef long long k
    for k in range(nsub):
        drift = coupling * (tamb - temp)
        if src_term != 0:
            drift += src_term * (tsrc - temp)
        temp += _floordiv128(2 * drift * dt + PLANT_DEN, 2 * PLANT_DEN)
    return int(<long long> temp)
