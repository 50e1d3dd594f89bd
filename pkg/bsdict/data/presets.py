"""
Experiment presets for the command-line `reproduce` command.

Each preset is a dictionary whose keys are field names of `config.RunConfig`.
"""

blocky = {
    "command": "approx",
    "preset": "blocky",
    "m": 1,
    "c": 0.0,
    "d": 4.0,
    "b": 1.0,
    "b_prime": 2.0**-8,
    "grid_q": 4,
    "seed": 0,
    "n_blocks": 10,
    "target_relerr": 1e-6,
}

chirp = {
    "command": "approx",
    "preset": "chirp",
    "m": 4,
    "c": 0.0,
    "d": 4.0,
    "b": 2.0**-3,
    "b_prime": 2.0**-5,
    "grid_q": 16,
    "f0": 0.25,
    "f1": 2.5,
    "target_relerr": 1e-2,
}

# Bases on the left and dictionaries of double support on the right:
# order 1, order 4 with ESEP, order 4 with EPKB.
figure1 = {
    "command": "figure1",
    "preset": "figure1",
    "c": 0.0,
    "d": 4.0,
    "b": 1.0,
    "b_prime": 0.5,
    "grid_q": 32,
}

presets = {
    "blocky": blocky,
    "chirp": chirp,
    "figure1": figure1,
}
