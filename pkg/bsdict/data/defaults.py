"""
Numerical defaults: tolerances, working-grid resolution and pursuit settings.
"""

tolerances = {
    # relative tolerance for "(d - c) / b is an integer" style checks
    "ratio": 1e-12,
    # relative residual allowed in scaling equations and eliminations
    "span": 1e-8,
    # relative residual allowed by span certification
    "certification": 1e-6,
    # singular values below rank * sigma_max are treated as zero
    "rank": 1e-8,
    # smallest admissible diagonal scaling coefficient
    "pivot": 1e-10,
    # smallest admissible projected atom norm, relative to the atom norm
    "candidate": 1e-10,
    # selection scores this close to the maximum are considered tied
    "tie": 1e-12,
    # a best score this small relative to ||r|| means r is orthogonal to every candidate
    "stagnation": 1e-14,
    # slack on the target error accepted while pruning
    "prune_slack": 1e-12,
    # relative slack of the frame inequality check
    "frame": 1e-9,
}

grid = {
    # samples per fine knot interval: h = b' / q
    "q": 16,
}

evaluation = {
    # above this order the truncated-power sum loses too many digits
    "closed_form_max_order": 8,
}

pursuit = {
    "target_relerr": 1e-3,
}

frame = {
    "n_checks": 100,
    "seed": 0,
}
