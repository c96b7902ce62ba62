import numpy as np

from numba import njit


@njit
def loaded_fractions(switch_times, initial_state, n_bins, dt):
    """
    Time-weighted loaded fraction of every bin of a two-state trajectory.
    inputs:
        switch_times: ascending times where the state flips
        initial_state: 1 if loaded at t = 0, else 0
        n_bins: number of bins of width dt starting at t = 0
    """
    fractions = np.zeros(n_bins)
    state = initial_state
    k = 0
    n_switch = len(switch_times)
    for b in range(n_bins):
        start = b * dt
        end = start + dt
        t = start
        loaded = 0.0
        while k < n_switch and switch_times[k] < end:
            if state == 1:
                loaded += switch_times[k] - t
            t = switch_times[k]
            state = 1 - state
            k += 1
        if state == 1:
            loaded += end - t
        fractions[b] = loaded / dt
    return fractions


@njit
def run_lengths(states, value):
    """Lengths of the maximal runs of `value` in an integer sequence"""
    out = np.zeros(len(states), dtype=np.int64)
    n_runs = 0
    current = 0
    for s in states:
        if s == value:
            current += 1
        elif current > 0:
            out[n_runs] = current
            n_runs += 1
            current = 0
    if current > 0:
        out[n_runs] = current
        n_runs += 1
    return out[:n_runs]
