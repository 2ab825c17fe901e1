"""Per-trial random streams."""

from numpy.random import Generator, Philox, SeedSequence


def trial_stream(seed: int, trial_index: int) -> Generator:
    """
    Derive the random stream for one trial.

    The stream depends only on (seed, trial_index): SeedSequence hashes both
    into the Philox key, so trial i draws the same numbers whatever other
    trials exist and whichever worker runs it.

    Args:
        seed: 64-bit experiment seed
        trial_index: Index of the trial within the experiment

    Returns:
        A numpy Generator owned by that trial
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be nonnegative, got {trial_index}")
    sequence = SeedSequence(entropy=int(seed), spawn_key=(int(trial_index),))
    return Generator(Philox(sequence))
