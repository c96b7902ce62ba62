import numpy as np

from numba import njit

EMPTY, EXCITON, BIEXCITON = 0, 1, 2


@njit
def capture_chain(n_pulses, n_qw, r_qw, r_cap, r_x, r_xx, qd_injection, seed):
    """
    Gillespie run of the barrier-capture chain, one excitation pulse at a time.
    Each pulse runs until no event is left.
    inputs:
        n_qw: mean number of barrier carriers per pulse (Poisson)
        r_qw, r_cap: barrier decay rate and capture rate per carrier
        r_x, r_xx: exciton and biexciton radiative rates
        qd_injection: probability the pulse creates the exciton directly
    returns:
        counts: X photons per pulse
        times: X emission times after their pulse, concatenated pulse by pulse
        xx_counts: XX photons per pulse
    """
    np.random.seed(seed)
    counts = np.zeros(n_pulses, dtype=np.int64)
    xx_counts = np.zeros(n_pulses, dtype=np.int64)
    times = np.empty(max(n_pulses, 16))
    n_times = 0

    for pulse in range(n_pulses):
        n = np.random.poisson(n_qw) if n_qw > 0 else 0
        q = EMPTY
        if qd_injection > 0 and np.random.random() < qd_injection:
            q = EXCITON
        t = 0.0
        while True:
            rate_decay = r_qw * n
            rate_capture = r_cap * n if q < BIEXCITON else 0.0
            rate_x = r_x if q == EXCITON else 0.0
            rate_xx = r_xx if q == BIEXCITON else 0.0
            total = rate_decay + rate_capture + rate_x + rate_xx
            if total <= 0.0:
                break
            t += np.random.exponential(1.0) / total
            u = np.random.random() * total
            if u < rate_decay:
                n -= 1
            elif u < rate_decay + rate_capture:
                n -= 1
                q += 1
            elif u < rate_decay + rate_capture + rate_x:
                q = EMPTY
                counts[pulse] += 1
                if n_times == len(times):
                    grown = np.empty(2 * len(times))
                    grown[:n_times] = times[:n_times]
                    times = grown
                times[n_times] = t
                n_times += 1
            else:
                q = EXCITON
                xx_counts[pulse] += 1
    return counts, times[:n_times], xx_counts


@njit
def coincidences(counts, max_separation):
    """
    Coincidence areas by pulse separation k = 0..max_separation
    k = 0 counts photon pairs inside one pulse, n(n-1).
    """
    n = len(counts)
    out = np.zeros(max_separation + 1)
    for i in range(n):
        out[0] += counts[i] * (counts[i] - 1)
    for k in range(1, max_separation + 1):
        s = 0.0
        for i in range(n - k):
            s += counts[i] * counts[i + k]
        out[k] = s
    return out
