import numpy as np


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (g + g.conj().T)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    cols = dim if rank is None else rank
    g = rng.normal(size=(dim, cols)) + 1j * rng.normal(size=(dim, cols))
    rho = g @ g.conj().T
    return rho / rho.trace().real
