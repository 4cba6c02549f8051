from typing import Optional

import numpy as np


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def fresh_seed() -> int:
    """Draw a master seed from OS entropy, small enough for JSON reports."""
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint32)[0])


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent stream for one trial, derived from the master seed and the trial index."""
    if master_seed < 0 or trial_index < 0:
        raise ValueError('seeds and trial indices must be non-negative')
    return np.random.default_rng(np.random.SeedSequence([master_seed, trial_index]))
