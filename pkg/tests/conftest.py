import numpy as np
import pytest

import tlspin as t


@pytest.fixture(scope="session")
def kls():
    """Antidiagonal family at p = 2: real symmetric generator, tau = 5.25."""
    return t.builtin_bform("kls", 2)


@pytest.fixture(scope="session")
def xxz():
    """Spin-1/2 family at q = 3: tau = -10/3."""
    return t.builtin_bform("xxz", 3)


@pytest.fixture(scope="session")
def random_bform():
    """Factory for seeded random complex b, resampling degenerate draws."""

    def make(seed: int, n: int) -> t.BForm:
        rng = np.random.default_rng(seed)
        for _ in range(50):
            b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            try:
                return t.make_bform(b)
            except (t.DegenerateParameter, t.SingularMatrix):
                continue
        raise RuntimeError(f"no valid random b for seed {seed}, n {n}")

    return make
