import numpy as np
import pytest

from edc_eval.score_data import ComparisonSet, Kind
from edc_eval.synthetic import SyntheticDataset

VARIANT_1 = (0.05, 0.10, 0.15, 0.20, 0.25)
VARIANT_2 = (0.01, 0.02, 0.03, 0.04, 0.05)

# Fixed gap subtracted from cross-subject utility minima to fake non-mated scores.
NONMATED_MARGIN = 1.0


def synthetic_nonmated(data: SyntheticDataset, n_pairs: int, seed: int = 0,
                       margin: float = NONMATED_MARGIN):
    """Cross-subject pairs with CS = min utility - margin (test fixture only)."""
    rng = np.random.default_rng(seed)
    k = data.spec.samples_per_subject
    n = len(data.sample_ids)
    a = rng.integers(0, n, size=n_pairs * 2)
    b = rng.integers(0, n, size=n_pairs * 2)
    keep = (a // k) != (b // k)
    a, b = a[keep][:n_pairs], b[keep][:n_pairs]
    cs = np.minimum(data.utility[a], data.utility[b]) - margin
    ids = data.sample_ids
    return ComparisonSet.from_arrays([ids[i] for i in a], [ids[j] for j in b], cs, Kind.NONMATED), a, b


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
