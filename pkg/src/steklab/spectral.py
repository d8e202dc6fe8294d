"""Piecewise-linear finite elements for Steklov eigenvalue problems.

The weak problem is driven by two sparse symmetric forms on mesh vertices:
the stiffness K (Dirichlet energy, with per-simplex gradients taken in each
simplex's own tangent plane inside R^m) and the boundary mass B supported on
Steklov-tagged faces.  Eigenvalues come from the Schur complement of K onto
the Steklov vertices, a discrete Dirichlet-to-Neumann operator, paired with
the boundary mass in a dense symmetric generalized eigensolve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.linalg import splu

from .errors import MeshError, NumericalError, UsageError
from .mesh import NEUMANN, STEKLOV, EmbeddedMesh

KIND_STEKLOV = "steklov"
KIND_STEKLOV_NEUMANN = "steklov-neumann"

_SCHUR_CHUNK_DOUBLES = 24_000_000  # cap on the dense block used per Schur sweep


@dataclass
class SpectralProblem:
    mesh: EmbeddedMesh
    kind: str = KIND_STEKLOV
    k_max: int = 1
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.kind not in (KIND_STEKLOV, KIND_STEKLOV_NEUMANN):
            raise UsageError(f"unknown problem kind {self.kind!r}")
        if self.k_max < 1:
            raise UsageError("k_max must be at least 1")
        if self.tolerance <= 0:
            raise UsageError("tolerance must be positive")
        tags = set(self.mesh.face_tags)
        if self.kind == KIND_STEKLOV and NEUMANN in tags:
            raise UsageError("pure Steklov problem posed on a mesh with neumann faces")
        if STEKLOV not in tags:
            raise UsageError("no steklov faces on the mesh")


@dataclass
class SpectralResult:
    """Nondecreasing eigenvalues with per-pair residuals and diagnostics."""

    eigenvalues: np.ndarray
    residuals: np.ndarray
    dof_interior: int
    dof_boundary: int
    boundary_vertices: np.ndarray
    eigenvectors_boundary: Optional[np.ndarray] = None
    metadata: dict = field(default_factory=dict)

    def to_payload(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "residuals": [float(v) for v in self.residuals],
            "dof_interior": self.dof_interior,
            "dof_boundary": self.dof_boundary,
            "metadata": self.metadata,
        }


def _cell_geometry(mesh: EmbeddedMesh):
    """Per-cell edge Grams, inverses and volumes; aborts on a degenerate cell."""
    n = mesh.intrinsic_dim
    pts = mesh.vertices[mesh.cells]
    edges = pts[:, 1:, :] - pts[:, :1, :]
    gram = np.einsum("cik,cjk->cij", edges, edges)
    det = np.linalg.det(gram)
    bad = np.nonzero(det <= 0.0)[0]
    if bad.size:
        raise MeshError(f"degenerate simplex at cell {int(bad[0])}")
    vols = np.sqrt(det) / math.factorial(n)
    ginv = np.linalg.inv(gram)
    return ginv, vols


def _shape_derivatives(n: int) -> np.ndarray:
    """Barycentric shape-function derivatives in simplex coordinates, (n, n+1)."""
    mat = np.zeros((n, n + 1))
    mat[:, 0] = -1.0
    mat[:, 1:] = np.eye(n)
    return mat


def assemble_operators(mesh: EmbeddedMesh) -> tuple[csr_matrix, csr_matrix]:
    """Stiffness and Steklov boundary mass on all mesh vertices.

    K is PSD with the constants in its kernel on a connected mesh; B is PSD
    and supported exactly on the Steklov-boundary vertices.
    """
    n = mesh.intrinsic_dim
    nv = mesh.n_vertices
    ginv, vols = _cell_geometry(mesh)
    shape = _shape_derivatives(n)
    kloc = np.einsum("ai,cab,bj->cij", shape, ginv, shape) * vols[:, None, None]
    rows = np.repeat(mesh.cells[:, :, None], n + 1, axis=2)
    cols = np.repeat(mesh.cells[:, None, :], n + 1, axis=1)
    stiffness = coo_matrix(
        (kloc.ravel(), (rows.ravel(), cols.ravel())), shape=(nv, nv)
    ).tocsr()

    faces = mesh.steklov_faces()
    d = n - 1
    if faces.size == 0:
        mass = csr_matrix((nv, nv))
        return stiffness, mass
    if d == 0:
        fvols = np.ones(len(faces))
    else:
        pts = mesh.vertices[faces]
        edges = pts[:, 1:, :] - pts[:, :1, :]
        gram = np.einsum("fik,fjk->fij", edges, edges)
        det = np.linalg.det(gram)
        fvols = np.sqrt(np.maximum(det, 0.0)) / math.factorial(d)
    template = (np.ones((d + 1, d + 1)) + np.eye(d + 1)) / ((d + 1) * (d + 2))
    mloc = fvols[:, None, None] * template[None, :, :]
    rows = np.repeat(faces[:, :, None], d + 1, axis=2)
    cols = np.repeat(faces[:, None, :], d + 1, axis=1)
    mass = coo_matrix((mloc.ravel(), (rows.ravel(), cols.ravel())), shape=(nv, nv)).tocsr()
    return stiffness, mass


def assemble(problem: SpectralProblem) -> tuple[csr_matrix, csr_matrix]:
    """Validated assembly for a posed problem."""
    problem.mesh.validate()
    return assemble_operators(problem.mesh)


def _schur_complement(stiffness, gamma, interior):
    """Dense S = K_GG - K_GI K_II^{-1} K_IG, solving in column chunks."""
    k_csc = stiffness.tocsc()
    k_gg = k_csc[np.ix_(gamma, gamma)].toarray()
    if interior.size == 0:
        return k_gg
    k_ig = k_csc[np.ix_(interior, gamma)]
    k_ii = k_csc[np.ix_(interior, interior)]
    try:
        lu = splu(k_ii.tocsc())
    except RuntimeError as exc:
        raise NumericalError(f"interior stiffness factorization failed: {exc}") from exc
    ng = len(gamma)
    chunk = max(1, min(ng, _SCHUR_CHUNK_DOUBLES // max(1, len(interior))))
    schur = k_gg
    for start in range(0, ng, chunk):
        block = k_ig[:, start : start + chunk].toarray()
        x = lu.solve(block)
        schur[:, start : start + chunk] -= k_ig.T @ x
    return 0.5 * (schur + schur.T)


def solve_steklov(problem: SpectralProblem) -> SpectralResult:
    """k_max+1 smallest Steklov eigenvalues via the boundary Schur reduction.

    sigma_0 = 0 (constants) is always part of the reported spectrum and is
    not deflated.  Residuals are the backward errors
    |S x - sigma B x| / ((|S|_1 + sigma |B|_1) |x|), which stay meaningful
    at sigma_0 where |S x| itself vanishes.
    """
    mesh = problem.mesh
    stiffness, mass = assemble(problem)
    if not mesh.is_connected():
        raise NumericalError("mesh is disconnected; the interior block is singular")
    gamma = mesh.steklov_vertices()
    if len(gamma) <= problem.k_max:
        raise UsageError(
            f"k_max = {problem.k_max} requires more than {len(gamma)} Steklov vertices"
        )
    interior = np.setdiff1d(np.arange(mesh.n_vertices), gamma)
    schur = _schur_complement(stiffness, gamma, interior)
    bmat = mass.tocsc()[np.ix_(gamma, gamma)].toarray()

    want = problem.k_max + 1
    try:
        if want < len(gamma) // 4:
            vals, vecs = scipy.linalg.eigh(
                schur, bmat, subset_by_index=[0, problem.k_max], driver="gvx"
            )
        else:
            vals, vecs = scipy.linalg.eigh(schur, bmat)
            vals, vecs = vals[:want], vecs[:, :want]
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"boundary eigensolve failed: {exc}") from exc

    scale = float(np.abs(vals).max()) if len(vals) else 1.0
    if vals[0] < -problem.tolerance * max(scale, 1.0):
        raise NumericalError(f"leading eigenvalue {vals[0]} is significantly negative")
    vals = np.maximum(vals, 0.0)

    s_norm = np.abs(schur).sum(axis=0).max()
    b_norm = np.abs(bmat).sum(axis=0).max()
    residuals = np.empty(want)
    for j in range(want):
        x = vecs[:, j]
        mis = schur @ x - vals[j] * (bmat @ x)
        residuals[j] = np.linalg.norm(mis) / (
            (s_norm + vals[j] * b_norm) * np.linalg.norm(x)
        )
    if residuals.max() > problem.tolerance:
        raise NumericalError(
            f"eigenpair residual {residuals.max():.3e} exceeds tolerance {problem.tolerance}"
        )
    return SpectralResult(
        eigenvalues=vals,
        residuals=residuals,
        dof_interior=int(len(interior)),
        dof_boundary=int(len(gamma)),
        boundary_vertices=gamma,
        eigenvectors_boundary=vecs,
        metadata={"kind": problem.kind, "n_vertices": mesh.n_vertices},
    )


def rayleigh_from_operators(stiffness, mass, values: np.ndarray) -> float:
    v = np.asarray(values, dtype=float)
    den = float(v @ (mass @ v))
    num = float(v @ (stiffness @ v))
    if den <= 0.0 or den < 1e-30 * max(num, 1.0):
        raise UsageError("test function vanishes on the Steklov boundary")
    return num / den


def rayleigh_quotient(mesh: EmbeddedMesh, values: np.ndarray) -> float:
    """Dirichlet energy over Steklov boundary L2 norm of a vertex vector."""
    v = np.asarray(values, dtype=float)
    if v.shape != (mesh.n_vertices,):
        raise UsageError("vertex value vector has the wrong length")
    stiffness, mass = assemble_operators(mesh)
    return rayleigh_from_operators(stiffness, mass, v)


def cell_gradient_norms(mesh: EmbeddedMesh, values: np.ndarray) -> np.ndarray:
    """Per-cell Euclidean norm of the piecewise gradient of a vertex vector."""
    v = np.asarray(values, dtype=float)
    ginv, _ = _cell_geometry(mesh)
    shape = _shape_derivatives(mesh.intrinsic_dim)
    dv = np.einsum("ai,ci->ca", shape, v[mesh.cells])
    sq = np.einsum("ca,cab,cb->c", dv, ginv, dv)
    return np.sqrt(np.maximum(sq, 0.0))


def spectra_match(
    computed, reference, atol: float = 1e-8, rtol: float = 1e-2
) -> bool:
    """Compare spectra as sorted multisets with atol + rtol*|ref| per entry."""
    a = np.sort(np.asarray(computed, dtype=float))
    b = np.sort(np.asarray(reference, dtype=float))
    if a.shape != b.shape:
        return False
    return bool(np.all(np.abs(a - b) <= atol + rtol * np.abs(b)))
