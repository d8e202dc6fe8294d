"""Shared meshes, built once per session.

The acceptance criteria and several unit tests exercise the same family
meshes; building them in session fixtures keeps the suite fast.
"""

import numpy as np
import pytest

from steklab.families import FamilyDescriptor, generate_mesh
from steklab.spectral import SpectralProblem, solve_steklov


@pytest.fixture(scope="session")
def disk_mesh():
    return generate_mesh(FamilyDescriptor("ball-flat", h=0.05, n=2, delta=1.0))


@pytest.fixture(scope="session")
def disk_mesh_coarse():
    return generate_mesh(FamilyDescriptor("ball-flat", h=0.15, n=2, delta=1.0))


@pytest.fixture(scope="session")
def annulus_mesh():
    return generate_mesh(FamilyDescriptor("annulus-flat", h=0.05, n=2, eps=1.0, delta=2.0))


@pytest.fixture(scope="session")
def cylinder_mesh():
    return generate_mesh(
        FamilyDescriptor("cylinder-surface", h=0.05, radius=1.0, length=1.0)
    )


@pytest.fixture(scope="session")
def circle_mesh():
    return generate_mesh(FamilyDescriptor("sphere-boundary", h=0.05, n=2, eps=1.0))


@pytest.fixture(scope="session")
def torus_mesh():
    return generate_mesh(
        FamilyDescriptor("torus-surface", h=0.22, major_radius=2.0, minor_radius=1.0)
    )


@pytest.fixture(scope="session")
def revolution_mesh():
    return generate_mesh(
        FamilyDescriptor("revolution-closure", h=0.15, n=2, eps=0.5, delta=2.0)
    )


@pytest.fixture(scope="session")
def product_mesh():
    return generate_mesh(
        FamilyDescriptor(
            "product-annulus-circle", h=0.3, n=2, eps=0.5, delta=2.0, circle_radius=0.3
        )
    )


@pytest.fixture(scope="session")
def disk_spectrum(disk_mesh):
    return solve_steklov(SpectralProblem(disk_mesh, "steklov", k_max=6))


@pytest.fixture(scope="session")
def cylinder_spectrum(cylinder_mesh):
    return solve_steklov(SpectralProblem(cylinder_mesh, "steklov", k_max=5))


def random_rotation(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


@pytest.fixture(scope="session")
def product_sn_case():
    """Mixed problem on A(0.5, 1.5) x S^1_0.4 plus its separated-mode values."""
    from steklab.closed_forms import separated_mode_sn_eigenvalue
    from steklab.families import FamilyDescriptor as FD

    mesh = generate_mesh(
        FD("product-annulus-circle", h=0.15, n=2, eps=0.5, delta=1.5, circle_radius=0.4)
    )
    fem = solve_steklov(SpectralProblem(mesh, "steklov-neumann", k_max=3))
    values = sorted(
        separated_mode_sn_eigenvalue(2, 0.5, 1.5, float(k * k), (j / 0.4) ** 2, 2048)
        for k in range(5)
        for j in range(5)
        if (k, j) != (0, 0)
    )
    return fem, values
