"""Named experiment presets.

Each preset stores a complete request payload for one of the service
endpoints; explicitly supplied request fields override preset values.
The fig* names index the standard figure-style experiments: static scans,
quenches to and across the critical coupling, and final-coupling sweeps.
"""

# name -> (kind, summary, payload)
PRESETS: dict[str, tuple[str, str, dict]] = {
    "fig1": (
        "static-scan",
        "equilibrium Fisher density vs coupling for N = 21, 101, 401, 1001",
        {
            "lambdas": {"start": 0.0, "stop": 2.0, "step": 0.02},
            "n_values": [21, 101, 401, 1001],
            "refine": True,
        },
    ),
    "fig2a": (
        "quench",
        "quench 1.5 -> 1.0 (into the critical point from above), N = 201",
        {
            "spec": {"n": 201, "lambda1": 1.5, "lambda2": 1.0},
            "grid": {"dt": 0.05, "t_max": 120.0},
        },
    ),
    "fig2b": (
        "quench",
        "quench 0.5 -> 1.0 (into the critical point from below), N = 201",
        {
            "spec": {"n": 201, "lambda1": 0.5, "lambda2": 1.0},
            "grid": {"dt": 0.05, "t_max": 120.0},
        },
    ),
    "fig2c": (
        "study",
        "revival/decay times vs size for quenches 1.5 -> 1.0 and 0.5 -> 1.0",
        {
            "study": {
                "sizes": [61, 101, 201, 401],
                "lambda1_values": [1.5, 0.5],
                "lambda2": 1.0,
                "dt": 0.05,
            }
        },
    ),
    "fig3a": (
        "quench",
        "quench 1.1 -> 1.0, N = 201",
        {
            "spec": {"n": 201, "lambda1": 1.1, "lambda2": 1.0},
            "grid": {"dt": 0.05, "t_max": 120.0},
        },
    ),
    "fig3b": (
        "quench",
        "quench 0.9 -> 1.0, N = 201",
        {
            "spec": {"n": 201, "lambda1": 0.9, "lambda2": 1.0},
            "grid": {"dt": 0.05, "t_max": 120.0},
        },
    ),
    "fig3c": (
        "study",
        "decay time vs quench size for 0.0, 0.5, 0.7, 0.9 -> 1.0",
        {
            "study": {
                "sizes": [61, 101, 201, 401],
                "lambda1_values": [0.0, 0.5, 0.7, 0.9],
                "lambda2": 1.0,
                "dt": 0.05,
            }
        },
    ),
    "fig4a": (
        "quench",
        "cross-critical quench 2.0 -> 0.2, N = 201 (decay and fluctuations)",
        {
            "spec": {"n": 201, "lambda1": 2.0, "lambda2": 0.2},
            "grid": {"dt": 0.05, "t_max": 60.0},
        },
    ),
    "fig5": (
        "quench",
        "quench 2.0 -> 0.2, N = 201, fine grid for direction-switch cusps",
        {
            "spec": {"n": 201, "lambda1": 2.0, "lambda2": 0.2},
            "grid": {"dt": 0.01, "t_max": 7.0},
        },
    ),
    "fig6": (
        "quench",
        "quench 2.0 -> 0.2, N = 201, rate functions r_le and r_fq",
        {
            "spec": {"n": 201, "lambda1": 2.0, "lambda2": 0.2},
            "grid": {"dt": 0.01, "t_max": 7.0},
        },
    ),
    "fig7": (
        "quench",
        "quench 0.2 -> 2.0, N = 201, rate functions and cusps",
        {
            "spec": {"n": 201, "lambda1": 0.2, "lambda2": 2.0},
            "grid": {"dt": 0.01, "t_max": 4.0},
        },
    ),
    "fig8a": (
        "sweep",
        "long-time Fisher density vs final coupling from lambda1 = 2.0, N = 401",
        {
            "lambda1": 2.0,
            "lambda2": {"start": 0.02, "stop": 4.0, "step": 0.02},
            "n": 401,
            "t_ltr": 20.0,
            "dt": 0.05,
        },
    ),
    "fig8b": (
        "sweep",
        "long-time Fisher density vs final coupling from lambda1 = 0.2, N = 401",
        {
            "lambda1": 0.2,
            "lambda2": {"start": 0.02, "stop": 4.0, "step": 0.02},
            "n": 401,
            "t_ltr": 80.0,
            "dt": 0.05,
        },
    ),
}
