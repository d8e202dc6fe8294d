import math

import numpy as np
import pytest

from steklab.errors import ResolutionError, UsageError
from steklab.families import (
    FamilyDescriptor,
    exact_volumes,
    generate_mesh,
    geometric_summary,
    injectivity_radius,
)


def volume_errors(kind, hs, **params):
    errs = []
    for h in hs:
        desc = FamilyDescriptor(kind, h=h, **params)
        mesh = generate_mesh(desc)
        exact, _ = exact_volumes(desc)
        errs.append(abs(mesh.volume() - exact))
    return errs


@pytest.mark.parametrize(
    "kind,params",
    [
        ("ball-flat", dict(n=2, delta=1.0)),
        ("annulus-flat", dict(n=2, eps=1.0, delta=2.0)),
        ("cylinder-surface", dict(radius=1.0, length=1.0)),
        ("sphere-boundary", dict(n=2, eps=1.0)),
    ],
)
def test_volume_second_order_convergence(kind, params):
    errs = volume_errors(kind, [0.2, 0.1, 0.05], **params)
    # O(h^2): each halving should cut the error by roughly 4; accept >= 2.5
    assert errs[0] / errs[1] > 2.5
    assert errs[1] / errs[2] > 2.5


def test_torus_and_revolution_volumes_converge():
    for kind, params in [
        ("torus-surface", dict(major_radius=2.0, minor_radius=1.0)),
        ("revolution-closure", dict(n=2, eps=0.5, delta=2.0)),
    ]:
        errs = volume_errors(kind, [0.4, 0.2, 0.1], **params)
        assert errs[0] > errs[1] > errs[2]
        assert errs[1] / errs[2] > 2.0


def test_cylinder_exact_areas():
    desc = FamilyDescriptor("cylinder-surface", h=0.02, radius=1.0, length=1.0)
    summary = geometric_summary(generate_mesh(desc), desc)
    assert summary.volume_m == pytest.approx(2 * math.pi, rel=2e-3)
    assert summary.volume_sigma == pytest.approx(4 * math.pi, rel=2e-3)


def test_annulus_areas_and_tags():
    desc = FamilyDescriptor("annulus-flat", h=0.05, n=2, eps=1.0, delta=2.0)
    mesh = generate_mesh(desc)
    summary = geometric_summary(mesh, desc)
    assert summary.volume_m == pytest.approx(3 * math.pi, rel=2e-3)
    assert summary.volume_sigma == pytest.approx(2 * math.pi, rel=2e-3)
    # inner faces steklov, outer neumann
    for face, tag in zip(mesh.boundary_faces, mesh.face_tags):
        radius = np.linalg.norm(mesh.vertices[face], axis=1).mean()
        assert tag == ("steklov" if radius < 1.5 else "neumann")


def test_revolution_closure_single_boundary_circle(revolution_mesh):
    assert revolution_mesh.boundary_components() == 1
    bverts = revolution_mesh.boundary_vertices()
    pos = revolution_mesh.vertices[bverts]
    assert np.allclose(np.linalg.norm(pos[:, :2], axis=1), 0.5, atol=1e-12)
    assert np.allclose(pos[:, 2], -1.0, atol=1e-12)


def test_revolution_closure_records_seams(revolution_mesh):
    seams = revolution_mesh.metadata["seam_rings"]
    assert len(seams) == 2
    for seam, height in zip(seams, (-1.0, 1.0)):
        pos = revolution_mesh.vertices[np.array(seam)]
        assert np.allclose(np.linalg.norm(pos[:, :2], axis=1), 2.0, atol=1e-9)
        assert np.allclose(pos[:, 2], height, atol=1e-9)


def test_product_unit_boundary_volume():
    # R chosen so the boundary torus has unit volume: R = eps^(1-n)/(2 pi n omega_n)
    eps, n = 0.2, 2
    big_r = eps ** (1 - n) / (2 * math.pi * n * math.pi)  # omega_2 = pi
    desc = FamilyDescriptor(
        "product-annulus-circle", h=0.08, n=2, eps=eps, delta=1.0, circle_radius=big_r
    )
    mesh = generate_mesh(desc)
    summary = geometric_summary(mesh, desc)
    _, exact_sigma = exact_volumes(desc)
    assert exact_sigma == pytest.approx(1.0, rel=1e-12)
    # chord deficit of the coarse circle factor dominates; convergence to the
    # exact unit volume is covered by the refinement test below
    assert summary.volume_sigma == pytest.approx(1.0, rel=4e-2)


def test_product_volume_converges():
    desc_params = dict(n=2, eps=0.5, delta=1.5, circle_radius=0.4)
    errs = volume_errors("product-annulus-circle", [0.3, 0.15], **desc_params)
    assert errs[0] / errs[1] > 2.5


def test_injectivity_radii():
    sphere = FamilyDescriptor("sphere-boundary", h=0.1, n=2, eps=0.1)
    assert injectivity_radius(sphere) == pytest.approx(0.1 * math.pi)
    product = FamilyDescriptor(
        "product-annulus-circle", h=0.3, n=2, eps=0.1, delta=1.0, circle_radius=1.0
    )
    assert injectivity_radius(product) == pytest.approx(0.1 * math.pi)
    cylinder = FamilyDescriptor("cylinder-surface", h=0.1, radius=0.7, length=1.0)
    assert injectivity_radius(cylinder) == pytest.approx(0.7 * math.pi)
    ball = FamilyDescriptor("ball-flat", h=0.1, n=2, delta=1.0)
    assert injectivity_radius(ball) is None
    assert geometric_summary(generate_mesh(ball), ball).injectivity_radius is None


def test_summary_isoperimetric_ratio(disk_mesh_coarse):
    s = geometric_summary(disk_mesh_coarse)
    assert s.isoperimetric_ratio == pytest.approx(
        s.volume_sigma / s.volume_m**0.5, rel=1e-12
    )


def test_rejects_unresolved_inner_sphere():
    with pytest.raises(ResolutionError, match="fewer than 8"):
        generate_mesh(FamilyDescriptor("annulus-flat", h=0.5, n=2, eps=0.1, delta=2.0))


def test_descriptor_validation():
    with pytest.raises(UsageError):
        FamilyDescriptor("annulus-flat", h=0.1, n=2, eps=2.0, delta=1.0)
    with pytest.raises(UsageError):
        FamilyDescriptor("ball-flat", h=-0.1, n=2, delta=1.0)
    with pytest.raises(UsageError):
        FamilyDescriptor("no-such-family", h=0.1)
    with pytest.raises(UsageError):
        FamilyDescriptor("revolution-closure", h=0.1, n=3, eps=0.5, delta=2.0)
    with pytest.raises(UsageError):
        FamilyDescriptor("ball-flat", h=0.1, n=4, delta=1.0)


def test_ball_3d_and_shell_3d_volumes():
    ball = FamilyDescriptor("ball-flat", h=0.25, n=3, delta=1.0)
    mesh = generate_mesh(ball)
    exact, exact_sigma = exact_volumes(ball)
    assert mesh.volume() == pytest.approx(exact, rel=0.05)
    assert mesh.steklov_volume() == pytest.approx(exact_sigma, rel=0.05)

    shell = FamilyDescriptor("annulus-flat", h=0.3, n=3, eps=1.0, delta=2.0)
    mesh = generate_mesh(shell)
    exact, exact_sigma = exact_volumes(shell)
    assert mesh.volume() == pytest.approx(exact, rel=0.08)
    assert mesh.steklov_volume() == pytest.approx(exact_sigma, rel=0.08)
    assert mesh.boundary_components() == 2


def test_sphere_3d_mesh_closed():
    desc = FamilyDescriptor("sphere-boundary", h=0.2, n=3, eps=1.0)
    mesh = generate_mesh(desc)
    assert len(mesh.boundary_faces) == 0
    assert mesh.volume() == pytest.approx(4 * math.pi, rel=0.03)


def test_all_meshes_validate(torus_mesh, product_mesh, revolution_mesh):
    for mesh in (torus_mesh, product_mesh, revolution_mesh):
        mesh.validate()


@pytest.mark.parametrize("eps,delta", [(0.3, 1.5), (0.5, 2.0), (0.8, 3.0)])
def test_revolution_closure_boundary_component_family(eps, delta):
    mesh = generate_mesh(
        FamilyDescriptor("revolution-closure", h=0.2, n=2, eps=eps, delta=delta)
    )
    assert mesh.boundary_components() == 1
