"""Shared fixtures data for the test modules."""

from copsym.copulas import make_clayton, make_m, make_mtheta, make_pi, make_w, mixture, symmetrize, transpose

THETAS = (0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 1.0 / 3.0)

# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def named_copulas():
    """A fixed zoo covering every family and operator."""
    m02 = make_mtheta(0.2)
    return {
        "pi": make_pi(),
        "m": make_m(),
        "w": make_w(),
        "mtheta0": make_mtheta(0.0),
        "mtheta0.2": m02,
        "mtheta1/3": make_mtheta(1.0 / 3.0),
        "clayton0.5": make_clayton(0.5),
        "clayton2": make_clayton(2.0),
        "transpose": transpose(m02),
        "symmetrized": symmetrize(make_mtheta(0.3)),
        "mixture": mixture(0.4, m02, make_clayton(1.0)),
        "nested": mixture(0.7, transpose(make_mtheta(0.1)), mixture(0.5, make_w(), make_pi())),
    }
