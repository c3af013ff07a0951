"""Multilinear forms and both sides of the Bohnenblust-Hille inequality.

A form of degree n on K^N (K real or complex) is stored as a dense rank-n
coefficient tensor with every slot of the same dimension N.  Coefficients
are indexed ``coeffs[i1, ..., in]`` in C (row-major) order, so the *last*
index varies fastest in the flattened layout; serialized forms record this
as ``index_order = "C"``.

Two norms are computed:

* ``mixed_norm`` -- the l_{2n/(n+1)} norm of the coefficient tensor (the
  left side of the inequality); for n = 1 this is the plain l1 norm.
* the sup norm -- sup |T| over the closed unit cube [-1, 1]^N per slot in
  the real case, or the closed unit polydisc per slot in the complex case.
  By per-slot linearity the real sup is attained at sign vertices, and by
  the maximum principle the complex sup is attained on the torus of
  unit-modulus points, so maximizing over the closed domain loses nothing.

Sup-norm results are certificates: an exact value (real vertex
enumeration), a heuristic lower bound only (alternating maximization), or
a two-sided Lipschitz grid bracket (complex).  Every certificate carries a
witness point in the admissible domain attaining its lower bound.

All values here are immutable after construction and safe to share across
threads; restart batches of the alternating ascent may run concurrently
because restart r always draws from ``seed + r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, PreconditionError

REAL = "real"
COMPLEX = "complex"
FIELDS = (REAL, COMPLEX)

# Dense-storage cap: N^n coefficients at most (desk scale).
DEFAULT_COEFF_BUDGET = 10**6
# Real vertex enumeration refused above n*N sign bits (2^20 evaluations).
DEFAULT_ENUM_BITS = 20
# Complex phase grids refused above this many grid rows.
DEFAULT_GRID_BUDGET = 2_000_000

TWO_PI = 2.0 * math.pi

EXACT = "exact"
HEURISTIC = "heuristic-lower-only"
LIPSCHITZ_GRID = "lipschitz-grid"


@dataclass(frozen=True, eq=False)
class MultilinearForm:
    """Degree-n coefficient tensor over a scalar field.

    ``coeffs`` must have every axis of the same length; a real form stores
    float64 entries (complex input is accepted only when its imaginary
    part is identically zero).
    """

    field: str
    coeffs: np.ndarray

    def __post_init__(self):
        if self.field not in FIELDS:
            raise PreconditionError(f"unknown scalar field {self.field!r}")
        c = np.asarray(self.coeffs)
        if c.ndim < 1:
            raise PreconditionError("degree must be at least 1")
        dims = set(c.shape)
        if len(dims) != 1:
            raise PreconditionError(
                f"all slots must share one dimension, got shape {c.shape}")
        if c.shape[0] < 1:
            raise PreconditionError("slot dimension must be at least 1")
        if c.size > DEFAULT_COEFF_BUDGET:
            raise BudgetExceededError(
                f"{c.size} coefficients exceed the dense-storage cap "
                f"{DEFAULT_COEFF_BUDGET}")
        if self.field == REAL:
            if np.iscomplexobj(c):
                if np.any(c.imag != 0.0):
                    raise PreconditionError(
                        "real form with nonzero imaginary coefficients")
                c = c.real
            c = c.astype(np.float64)
        else:
            c = c.astype(np.complex128)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self):
        return self.coeffs.ndim

    @property
    def dim(self):
        return self.coeffs.shape[0]

    def is_zero(self):
        return not np.any(self.coeffs)

    def __repr__(self):
        return (f"MultilinearForm(field={self.field!r}, degree={self.degree}, "
                f"dim={self.dim})")


@dataclass(frozen=True, eq=False)
class SupNormCertificate:
    """Bracket [lower, upper] for the sup norm, with its provenance.

    ``witness`` is an argument tuple in the admissible domain attaining
    ``lower``.  ``mesh`` is the actual phase-grid spacing (0 unless
    kind = lipschitz-grid).
    """

    lower: float
    upper: float
    kind: str
    witness: tuple
    mesh: float = 0.0

    def __post_init__(self):
        if self.kind not in (EXACT, HEURISTIC, LIPSCHITZ_GRID):
            raise PreconditionError(f"unknown certificate kind {self.kind!r}")
        if self.lower > self.upper:
            raise PreconditionError(
                f"certificate lower {self.lower} exceeds upper {self.upper}")
        if self.kind == EXACT and self.lower != self.upper:
            raise PreconditionError("exact certificates must have lower == upper")


@dataclass(frozen=True, eq=False)
class NormReport:
    """Mixed norm, sup certificate and the resulting ratio bracket."""

    mixed: float
    sup: SupNormCertificate
    ratio_lower: float
    ratio_upper: float


@dataclass(frozen=True)
class CertificationPolicy:
    """How bh_ratio certifies the sup norm.

    kind "auto" picks the exact vertex oracle for real forms within the
    enumeration budget (falling back to the heuristic ascent) and the
    Lipschitz phase grid for complex forms.  ``mesh`` overrides the
    target-gap mesh solver for the grid path.
    """

    kind: str = "auto"  # auto | exact | ascend | grid
    restarts: int = 8
    seed: int = 0
    mesh: float | None = None
    target_gap: float = 0.05
    enum_bits: int = DEFAULT_ENUM_BITS
    grid_budget: int = DEFAULT_GRID_BUDGET


def evaluate(form, args):
    """Evaluate T(x_1, ..., x_n) by contracting one slot at a time.

    Linear in each slot; raises on argument-count or length mismatch, and
    refuses complex arguments on a real form.
    """
    if len(args) != form.degree:
        raise PreconditionError(
            f"form of degree {form.degree} evaluated on {len(args)} vectors")
    vecs = []
    for a in args:
        v = np.asarray(a)
        if v.shape != (form.dim,):
            raise PreconditionError(
                f"argument of shape {v.shape} for slot dimension {form.dim}")
        if form.field == REAL:
            if np.iscomplexobj(v):
                if np.any(v.imag != 0.0):
                    raise PreconditionError("complex argument on a real form")
                v = v.real
            v = v.astype(np.float64)
        else:
            v = v.astype(np.complex128)
        vecs.append(v)
    cur = form.coeffs
    for v in vecs:
        cur = np.tensordot(v, cur, axes=(0, 0))
    value = cur[()]
    return float(value) if form.field == REAL else complex(value)


def mixed_norm(form):
    """l_{2n/(n+1)} norm of the coefficients, compensated summation.

    For n = 1 the exponent is 1 and the result is the exact fsum of the
    coefficient moduli (so 1-linear ratios come out as exactly 1.0).
    """
    n = form.degree
    mags = np.abs(form.coeffs).ravel()
    if n == 1:
        return math.fsum(float(m) for m in mags)
    p = 2.0 * n / (n + 1.0)
    s = math.fsum(float(m) ** p for m in mags)
    return s ** ((n + 1.0) / (2.0 * n))


# ---------------------------------------------------------------------------
# slot-row cascades shared by the vertex and phase-grid oracles
# ---------------------------------------------------------------------------

def _cascade(coeffs, rows):
    """Contract slots 0..n-2 against every row combination of ``rows``.

    Returns a (len(rows)^(n-1), N) matrix whose row r is the induced
    linear functional of the last slot; row index digits are base
    len(rows), most significant digit = slot 0.
    """
    n = coeffs.ndim
    dim = coeffs.shape[0]
    if n == 1:
        return coeffs.reshape(1, dim)
    cur = rows @ coeffs.reshape(dim, -1)
    nrows = rows.shape[0]
    for _ in range(n - 2):
        k = cur.shape[0]
        cur = cur.reshape(k, dim, -1)
        cur = np.einsum("gn,knr->kgr", rows, cur)
        cur = cur.reshape(k * nrows, -1)
    return cur


def _decode_digits(index, base, count):
    digits = []
    for pos in range(count):
        digits.append((index // base ** (count - 1 - pos)) % base)
    return digits


def _sign_rows(dim):
    idx = np.indices((2,) * dim).reshape(dim, -1).T
    return 1.0 - 2.0 * idx.astype(np.float64)


def sup_norm_real_exact(form, max_bits=DEFAULT_ENUM_BITS):
    """Exact real sup by sign-vertex enumeration.

    Per-slot linearity puts the maximum over [-1,1]^(N*n) at a sign
    vertex; slots 0..n-2 are enumerated (2^(N(n-1)) combinations) and the
    last slot is closed form (sum of |induced functional|).  Refused when
    n*N exceeds ``max_bits``.
    """
    if form.field != REAL:
        raise PreconditionError("exact vertex oracle requires a real form")
    n, dim = form.degree, form.dim
    bits = n * dim
    if bits > max_bits:
        raise BudgetExceededError(
            f"vertex enumeration needs {bits} sign bits, budget is {max_bits}; "
            f"use the heuristic ascent instead")
    rows = _sign_rows(dim) if n >= 2 else np.ones((1, dim))
    table = _cascade(form.coeffs, rows)
    vals = np.abs(table).sum(axis=1)
    best = int(np.argmax(vals))
    g = table[best]
    value = math.fsum(abs(float(x)) for x in g)
    witness = [rows[d].copy() for d in _decode_digits(best, rows.shape[0], n - 1)]
    witness.append(np.where(g < 0.0, -1.0, 1.0))
    return SupNormCertificate(value, value, EXACT, tuple(witness))


def _induced_functional(coeffs, vectors, slot):
    """Contract every slot except ``slot``; returns a length-N vector."""
    cur = np.moveaxis(coeffs, slot, 0)
    for k in range(coeffs.ndim):
        if k == slot:
            continue
        cur = np.tensordot(cur, vectors[k], axes=(1, 0))
    return cur


def sup_norm_ascend(form, restarts=8, seed=0, max_sweeps=100, trace=None):
    """Heuristic lower bound by alternating per-slot maximization.

    With all slots but j frozen the form is linear in slot j, so the slot
    optimum is closed form: the sign vector of the induced functional
    (real) or its conjugate-phase unit vector (complex).  Zero functional
    entries keep the current value, which preserves monotone ascent and
    determinism.  Restart r draws its start from ``seed + r``; the result
    is the best over restarts.  ``trace``, if given, collects the
    objective after every slot update.
    """
    if restarts < 1:
        raise PreconditionError("restarts must be at least 1")
    n, dim = form.degree, form.dim
    best_val = -math.inf
    best_witness = None
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        if form.field == REAL:
            xs = [rng.integers(0, 2, dim) * 2.0 - 1.0 for _ in range(n)]
        else:
            xs = [np.exp(1j * TWO_PI * rng.random(dim)) for _ in range(n)]
        prev = -math.inf
        for _ in range(max_sweeps):
            val = prev
            for j in range(n):
                g = _induced_functional(form.coeffs, xs, j)
                if form.field == REAL:
                    xs[j] = np.where(g == 0.0, xs[j], np.where(g < 0.0, -1.0, 1.0))
                else:
                    mag = np.abs(g)
                    safe = np.where(mag > 0.0, mag, 1.0)
                    xs[j] = np.where(mag == 0.0, xs[j], np.conj(g) / safe)
                val = float(np.abs(g).sum())
                if trace is not None:
                    trace.append(val)
            if not val > prev * (1.0 + 1e-15) + 1e-300:
                break
            prev = val
        attained = abs(evaluate(form, xs))
        if attained > best_val:
            best_val = attained
            best_witness = tuple(x.copy() for x in xs)
    return SupNormCertificate(best_val, math.inf, HEURISTIC, best_witness)


def _slot_lipschitz(coeffs):
    """Per-slot vectors of per-coordinate phase derivative bounds.

    Entry [j][i] bounds |d|T|/d theta| for the phase of coordinate i in
    slot j: the sum of |c| over all tensor entries whose slot-j index
    is i.
    """
    a = np.abs(coeffs)
    out = []
    for j in range(coeffs.ndim):
        axes = tuple(k for k in range(coeffs.ndim) if k != j)
        out.append(a.sum(axis=axes))
    return out


def _phase_rows(dim, grid_size, spacing):
    free = dim - 1
    if free == 0:
        return np.ones((1, dim), dtype=np.complex128)
    idx = np.indices((grid_size,) * free).reshape(free, -1).T
    rows = np.empty((grid_size**free, dim), dtype=np.complex128)
    rows[:, 0] = 1.0
    rows[:, 1:] = np.exp(1j * spacing * idx)
    return rows


def sup_norm_complex_certified_upper(form, mesh, budget=DEFAULT_GRID_BUDGET):
    """Two-sided complex sup bracket from a phase grid.

    |T| on the torus is invariant under a global phase per slot, so the
    first coordinate of every slot is gauge-fixed to 1 and only the
    remaining (N-1) phases per slot are gridded; the final slot is closed
    form (sum of |induced functional|, attained by conjugate phases).
    The upper bound adds the per-variable Lipschitz slack
    (spacing / 2) * sum of per-phase derivative bounds over the gridded
    variables, which never exceeds the crude bound
    (sum |c|) * mesh/2 * n * N.  Refused, with the coarsest affordable
    mesh reported, when the grid row count exceeds ``budget``.
    """
    if form.field != COMPLEX:
        raise PreconditionError("phase-grid certification requires a complex form")
    if not mesh > 0.0:
        raise PreconditionError("mesh must be positive")
    n, dim = form.degree, form.dim
    grid_size = max(1, math.ceil(TWO_PI / mesh))
    spacing = TWO_PI / grid_size
    free = dim - 1
    gridded_vars = free * (n - 1)
    rows_total = grid_size**gridded_vars if gridded_vars > 0 else 1
    if rows_total > budget:
        fit = int(budget ** (1.0 / gridded_vars))
        hint = (f"; coarsest affordable mesh is {TWO_PI / fit:.6g}"
                if fit >= 1 else "")
        raise BudgetExceededError(
            f"phase grid needs {rows_total} rows, budget is {budget}{hint}")
    lam = _slot_lipschitz(form.coeffs)
    lam_gridded = math.fsum(float(lam[j][i]) for j in range(n - 1)
                            for i in range(1, dim))
    gap = 0.5 * spacing * lam_gridded if gridded_vars > 0 else 0.0
    rows = (_phase_rows(dim, grid_size, spacing) if n >= 2
            else np.ones((1, dim), dtype=np.complex128))
    table = _cascade(form.coeffs, rows)
    vals = np.abs(table).sum(axis=1)
    best = int(np.argmax(vals))
    g = table[best]
    lower = math.fsum(abs(complex(x)) for x in g)
    witness = [rows[d].copy()
               for d in _decode_digits(best, rows.shape[0], n - 1)]
    mag = np.abs(g)
    last = np.where(mag == 0.0, 1.0 + 0j, np.conj(g) / np.where(mag > 0.0, mag, 1.0))
    witness.append(last)
    return SupNormCertificate(lower, lower + gap, LIPSCHITZ_GRID,
                              tuple(witness), spacing)


def mesh_for_target_gap(form, target_gap, budget=DEFAULT_GRID_BUDGET):
    """Largest mesh whose Lipschitz slack stays below ``target_gap``.

    Coarsened further if the implied grid would blow the row budget (the
    certificate stays sound either way, only looser).
    """
    n, dim = form.degree, form.dim
    gridded_vars = (dim - 1) * (n - 1)
    if gridded_vars == 0:
        return TWO_PI
    lam = _slot_lipschitz(form.coeffs)
    lam_gridded = math.fsum(float(lam[j][i]) for j in range(n - 1)
                            for i in range(1, dim))
    if lam_gridded == 0.0:
        return TWO_PI
    mesh = 2.0 * target_gap / lam_gridded
    grid_size = max(1, math.ceil(TWO_PI / mesh))
    if grid_size**gridded_vars > budget:
        grid_size = max(1, int(budget ** (1.0 / gridded_vars)))
        mesh = TWO_PI / grid_size
    return mesh


def certify_sup(form, policy=CertificationPolicy()):
    """Dispatch to the certification path selected by ``policy``."""
    kind = policy.kind
    if kind == "auto":
        if form.field == REAL:
            kind = "exact" if form.degree * form.dim <= policy.enum_bits else "ascend"
        else:
            kind = "grid"
    if kind == "exact":
        return sup_norm_real_exact(form, max_bits=policy.enum_bits)
    if kind == "ascend":
        return sup_norm_ascend(form, restarts=policy.restarts, seed=policy.seed)
    if kind == "grid":
        mesh = policy.mesh
        if mesh is None:
            mesh = mesh_for_target_gap(form, policy.target_gap, policy.grid_budget)
        return sup_norm_complex_certified_upper(form, mesh, budget=policy.grid_budget)
    raise PreconditionError(f"unknown certification kind {policy.kind!r}")


def bh_ratio(form, policy=CertificationPolicy()):
    """Mixed norm over sup norm as a certified bracket.

    ratio_lower = mixed / sup.upper is a true lower bound on the optimal
    constant whenever the sup certificate is two-sided (exact or grid);
    with a heuristic certificate sup.upper is infinite and ratio_lower
    degrades to 0.  Raises on the zero form (ratio undefined).
    """
    if form.is_zero():
        raise PreconditionError("ratio undefined for the zero form")
    mixed = mixed_norm(form)
    cert = certify_sup(form, policy)
    ratio_lower = 0.0 if math.isinf(cert.upper) else mixed / cert.upper
    ratio_upper = math.inf if cert.lower == 0.0 else mixed / cert.lower
    return NormReport(mixed, cert, ratio_lower, ratio_upper)


def tensor_product(a, b):
    """Degree-(na+nb) form with coefficients a[i...] * b[j...].

    Slot sets are disjoint, so sup(a (x) b) = sup(a) * sup(b); dims may
    differ and the smaller tensor is zero-padded to the larger dimension.
    """
    if a.field != b.field:
        raise PreconditionError(
            f"tensor product across fields {a.field!r} and {b.field!r}")
    dim = max(a.dim, b.dim)

    def pad(form):
        width = dim - form.dim
        if width == 0:
            return form.coeffs
        return np.pad(form.coeffs, [(0, width)] * form.degree)

    return MultilinearForm(a.field, np.multiply.outer(pad(a), pad(b)))


def random_form(degree, dim, field, seed=0):
    """Independent standard Gaussian coefficients, unit max modulus.

    Complex forms draw real and imaginary parts independently.  The
    normalization makes test distributions scale-free.
    """
    rng = np.random.default_rng(seed)
    shape = (dim,) * degree
    while True:
        if field == REAL:
            c = rng.standard_normal(shape)
        else:
            c = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        top = np.abs(c).max()
        if top > 0.0:
            return MultilinearForm(field, c / top)


def as_complex(form):
    """The same coefficients viewed over the complex field."""
    if form.field == COMPLEX:
        return form
    return MultilinearForm(COMPLEX, form.coeffs.astype(np.complex128))


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def form_to_dict(form):
    """Serializable dict; complex coefficients become [re, im] pairs."""
    flat = form.coeffs.ravel()
    if form.field == REAL:
        coeffs = [float(x) for x in flat]
    else:
        coeffs = [[float(x.real), float(x.imag)] for x in flat]
    return {
        "field": form.field,
        "degree": form.degree,
        "dim": form.dim,
        "index_order": "C",
        "coeffs": coeffs,
    }


def form_from_dict(data):
    order = data.get("index_order", "C")
    if order != "C":
        raise PreconditionError(f"unsupported index order {order!r}")
    try:
        field = data["field"]
        degree = int(data["degree"])
        dim = int(data["dim"])
        data["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed serialized form: {exc}") from exc
    if field == REAL:
        flat = np.array([float(x) for x in data["coeffs"]], dtype=np.float64)
    else:
        flat = np.array([complex(re, im) for re, im in data["coeffs"]],
                        dtype=np.complex128)
    if flat.size != dim**degree:
        raise PreconditionError(
            f"{flat.size} coefficients for shape {(dim,) * degree}")
    return MultilinearForm(field, flat.reshape((dim,) * degree))
