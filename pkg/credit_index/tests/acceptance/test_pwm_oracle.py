#!/usr/bin/env python3
"""
Acceptance: PWM Oracle
======================

Sample probability-weighted moments against independent references on 1000
random samples: exhaustive subset enumeration for small n and the binomial
closed form otherwise.
"""

import itertools
import math
import pytest
import sys
from pathlib import Path

import numpy as np

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from lib.lmom import l_moments, sample_pwm

N_SAMPLES = 1000
ENUMERATION_LIMIT = 12
TOLERANCE = 1e-10


def enumerated_pwm(values, r):
    """Mean of the subset maxima over all (r+1)-subsets, divided by r+1."""
    x = sorted(values)
    maxima = [max(subset) for subset in itertools.combinations(x, r + 1)]
    return math.fsum(maxima) / len(maxima) / (r + 1)


def binomial_pwm(values, r):
    x = sorted(values)
    n = len(x)
    total = math.fsum(x[i - 1] * math.comb(i - 1, r) for i in range(1, n + 1))
    return total / (n * math.comb(n - 1, r))


def random_samples():
    rng = np.random.default_rng(2024)
    draws = (
        lambda n: rng.normal(0.0, 1.0, n),
        lambda n: rng.gamma(0.8, 2.0, n) - 1.0,
        lambda n: rng.uniform(-5.0, 5.0, n),
        lambda n: np.round(rng.normal(0.0, 3.0, n)),  # ties
    )
    for j in range(N_SAMPLES):
        n = int(rng.integers(3, 51))
        yield j, draws[j % len(draws)](n)


SAMPLES = list(random_samples())


class TestPwmOracle:
    """beta_0..beta_2 against reference computations."""

    def test_sample_sizes_cover_range(self):
        """Test the batch spans n = 3..50 with an enumerable part."""
        sizes = {len(x) for _, x in SAMPLES}

        assert min(sizes) == 3
        assert max(sizes) == 50
        assert sum(1 for _, x in SAMPLES if len(x) <= ENUMERATION_LIMIT) > 100

    @pytest.mark.parametrize("r", [0, 1, 2])
    def test_against_reference(self, r):
        """Test every sample within 1e-10 of its reference."""
        for j, x in SAMPLES:
            oracle = enumerated_pwm(x, r) if len(x) <= ENUMERATION_LIMIT else binomial_pwm(x, r)
            scale = max(1.0, float(np.max(np.abs(x))))

            assert abs(sample_pwm(x, r) - oracle) <= TOLERANCE * scale, f"sample {j}, n={len(x)}"

    def test_closed_form_matches_enumeration(self):
        """Test both references agree where both apply."""
        for _, x in SAMPLES:
            if len(x) <= 8:
                for r in range(3):
                    assert binomial_pwm(x, r) == pytest.approx(enumerated_pwm(x, r), abs=1e-12)

    def test_l_moments_use_the_same_pwms(self):
        """Test l_moments reports the oracle betas."""
        for _, x in SAMPLES[:50]:
            if np.ptp(x) == 0:
                continue
            lmom = l_moments(x)
            for r in range(3):
                assert lmom.beta[r] == pytest.approx(binomial_pwm(x, r), abs=1e-10)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
