import numpy as np

from osmodes.profile import ShearProfile
from osmodes.specialfn import ai_at_zero
from osmodes.verification import fast_wall_ratio


def test_fast_ratio_at_wall_matches_airy_values():
    """With z_c at the wall the fast ratio is delta Ai(2,0)/Ai(1,0)."""
    r, fr = fast_wall_ratio(ShearProfile("blasius"), 0.01, 1e9, 0)
    # phi_3 ~ Ai(2, eta/delta): ratio = delta Ai(2,0)/Ai(1,0), a negative multiple of delta
    pred = fr.delta * ai_at_zero(2) / ai_at_zero(1)
    assert abs(r / pred - 1) < 1e-3
    assert abs(np.angle(r) - 5 * np.pi / 6) < 1e-3
