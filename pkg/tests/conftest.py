import numpy as np

from momt import MomentMap, full_truncation
from momt.words import empty_word, generator


def scalar_t_map(t: float) -> MomentMap:
    """n=1 moments L(e)=1, L(g1)=t — the worked example used throughout."""
    sigma = full_truncation(1, 1)
    return MomentMap(
        sigma,
        1,
        1,
        {
            empty_word(1): np.eye(1, dtype=complex),
            generator(1, 1): np.array([[t]], dtype=complex),
        },
    )


def scalar_seq_map(vals) -> MomentMap:
    """n=1 moments depending only on word length: L(w) = vals[|w|]."""
    depth = len(vals) - 1
    sigma = full_truncation(1, depth)
    blocks = {w: np.array([[complex(vals[len(w)])]]) for w in sigma}
    return MomentMap(sigma, 1, 1, blocks)
