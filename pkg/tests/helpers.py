"""Independent oracles used across the test suite.

These deliberately take the dumbest correct route (per-index scans, textbook
pole tables) so they stay independent of the implementation they check.
"""

import numpy as np


def brute_force_peaks(x, min_distance=1, min_height=float("-inf"), max_count=None):
    """Reference peak finder.

    A candidate index i must sit strictly above its nearest differing
    neighbours on both sides and be the first index of its plateau; candidates
    are then accepted greedily in descending height (ties to the earlier
    index) subject to pairwise distance against everything already accepted.
    """
    x = [float(v) for v in x]
    n = len(x)
    candidates = []
    for i in range(1, n - 1):
        if x[i] < min_height:
            continue
        if x[i] <= x[i - 1]:
            continue  # not rising into i, or not the first index of a plateau
        j = i
        while j + 1 < n and x[j + 1] == x[i]:
            j += 1
        if j + 1 < n and x[j + 1] < x[i]:
            candidates.append(i)
    candidates.sort(key=lambda k: (-x[k], k))
    accepted = []
    spacing = max(int(min_distance), 1)
    for i in candidates:
        if max_count is not None and len(accepted) >= max_count:
            break
        if all(abs(i - k) >= spacing for k in accepted):
            accepted.append(i)
    return sorted(accepted)


def butter3_bandpass_magnitude(freqs, f_low, f_high, fs):
    """Order-3 Butterworth band-pass magnitude from the prototype pole table.

    The analog prototype poles are -1 and -1/2 +/- j*sqrt(3)/2. The digital
    response at f follows by mapping f through the bilinear prewarp
    Omega = 2*fs*tan(pi*f/fs) and the low-pass-to-band-pass substitution
    nu = (Omega^2 - Omega1*Omega2) / ((Omega2 - Omega1) * Omega) with the
    band edges prewarped the same way.
    """
    freqs = np.asarray(freqs, dtype=float)

    def warp(f):
        return 2.0 * fs * np.tan(np.pi * f / fs)

    w1, w2 = warp(f_low), warp(f_high)
    omega = warp(freqs)
    nu = (omega**2 - w1 * w2) / ((w2 - w1) * omega)
    s = 1j * nu
    root = np.sqrt(3.0) / 2.0
    denom = (s + 1.0) * (s + 0.5 - 1j * root) * (s + 0.5 + 1j * root)
    return np.abs(1.0 / denom)
