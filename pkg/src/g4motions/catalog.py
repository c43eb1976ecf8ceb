"""The fifteen catalog entries: spacetimes with a simply transitive
four-parameter motion group.

Each entry packages, as closed-form expression tables over the chart
(u1, u2, u3, u4):

* the Killing frame ``xi`` (rows = group index) and its dual ``dual``
  (rows = coordinate index), inverse matrices of one another,
* the nonzero structure constants ``C`` closing the frame's Lie brackets,
* a tetrad pair ``e_cov``/``e_con`` from which the invariant metric is
  built as g_ij = eta_ab e^a_i e^b_j,
* the admissible electromagnetic potential, stored basis-wise in the four
  potential constants alpha_1..alpha_4 (every tabulated solution is linear
  in them), both in holonomic components and contracted onto the frame.

The group labels follow Petrov's classification of such groups.  Where the
published source tables are internally inconsistent (a handful of sign and
label slips), the stored entry is the corrected form that satisfies the
defining identities, and the discrepancy is recorded in ``notes`` so reports
can surface it; the uncorrected frame-potential tables are kept alongside
(``reference_frame``) for cross-checking where they are expressible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import adiff
from .adiff import Const, FieldExpr, coords, exp, sin, cos

U1, U2, U3, U4 = coords()

__all__ = [
    "GroupId",
    "GroupParams",
    "SampleDomain",
    "OrientationDecision",
    "GroupModel",
    "InvalidParams",
    "ClosureFailed",
    "get_group",
    "all_groups",
    "sample_points",
    "potential",
    "potential_from_tetrad",
    "frame_potential",
    "orient_tetrad",
    "catalog_entry",
]


class InvalidParams(ValueError):
    """Group parameters violate the entry's constraints."""


class ClosureFailed(RuntimeError):
    """No overall sign makes the frame brackets close on the stored constants."""


class GroupId(str, Enum):
    G4_I_CNE1 = "g4-i-cne1"
    G4_I_CEQ1 = "g4-i-ceq1"
    G4_II = "g4-ii"
    G4_III = "g4-iii"
    G4_IV = "g4-iv"
    G4_V = "g4-v"
    G4_VI_1 = "g4-vi-1"
    G4_VI_2 = "g4-vi-2"
    G4_VI_3 = "g4-vi-3"
    G4_VI_4_1 = "g4-vi-4-1"
    G4_VI_4_2 = "g4-vi-4-2"
    G4_VII_A = "g4-vii-a"
    G4_VII_B = "g4-vii-b"
    G4_VIII_A = "g4-viii-a"
    G4_VIII_B = "g4-viii-b"

    def __str__(self):
        return self.value


ABELIAN_SUBGROUP_IDS = frozenset(
    {
        GroupId.G4_VI_1,
        GroupId.G4_VI_2,
        GroupId.G4_VI_3,
        GroupId.G4_VI_4_1,
        GroupId.G4_VI_4_2,
    }
)

#: Groups whose metric completes the 3x3 frame block with a flat fourth
#: direction (g^44 = 1, no cross terms): the "X4 = p4 over a G3 orbit" form.
BLOCK_ETA_IDS = frozenset({GroupId.G4_VII_A, GroupId.G4_VIII_A})

#: Groups whose tetrad tables come straight from the source (as opposed to
#: the derived left-invariant tetrads of the Abelian-subgroup family).
PRINTED_TETRAD_IDS = frozenset(set(GroupId) - ABELIAN_SUBGROUP_IDS)


@dataclass
class GroupParams:
    """Free constants of a catalog entry.

    ``c`` enters only the first group pair (epsilon = c - 1), ``alpha_angle``
    the third group (sin of it must not vanish), ``k``/``l``/``eps01`` the
    Abelian-subgroup family, ``em_alphas`` are the four potential constants
    and ``eta`` the constant frame metric (symmetric, nondegenerate,
    arbitrary signature).
    """

    c: float = 2.0
    alpha_angle: float = math.pi / 3.0
    k: float = 2.0
    l: float = 3.0
    eps01: int = 1
    em_alphas: tuple = (1.0, 1.0, 1.0, 1.0)
    eta: tuple = ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1))

    def eta_matrix(self) -> np.ndarray:
        return np.asarray(self.eta, dtype=float)

    def alphas(self) -> np.ndarray:
        return np.asarray(self.em_alphas, dtype=float)


@dataclass
class SampleDomain:
    """Axis-aligned box in the chart; keeps all catalog denominators and
    exponentials tame (denominators stay >= 0.1 in magnitude inside it)."""

    lows: tuple
    highs: tuple
    excluded: str = ""

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.lows, float), np.asarray(self.highs, float)

    def contains(self, u) -> bool:
        lo, hi = self.bounds()
        u = np.asarray(u, float)
        return bool(np.all(u >= lo) and np.all(u <= hi))


DEFAULT_DOMAIN = SampleDomain((-1.5,) * 4, (1.5,) * 4)
SPHERICAL_DOMAIN = SampleDomain(
    (0.2, -1.5, -1.5, -1.5),
    (math.pi - 0.2, 1.5, 1.5, 1.5),
    excluded="sin(u1) = 0",
)


def sample_points(dom: SampleDomain, n: int, seed: int) -> np.ndarray:
    """Deterministic uniform draw of ``n`` chart points, shape (n, 4)."""
    if n < 0:
        raise ValueError("sample count must be nonnegative")
    lo, hi = dom.bounds()
    rng = np.random.default_rng(seed)
    return lo + (hi - lo) * rng.random((n, adiff.CHART_DIM))


@dataclass
class OrientationDecision:
    """Outcome of resolving which tetrad index labels matrix rows.

    ``status`` is "resolved", "ambiguous" (both readings reproduce the
    potential table; harmless, the stored reading is used) or "failed"
    (neither does; the entry is flagged, the stored reading is used).
    ``relabel`` maps stored potential-constant bases onto tetrad bases when
    the tables agree only up to a constant relabeling.
    """

    status: str
    rows_are_coordinates: bool
    duality_residual: float
    potential_residual: float
    relabel: np.ndarray | None = None
    note: str = ""


@dataclass
class GroupModel:
    """One fully wired catalog entry; immutable after construction."""

    group_id: GroupId
    params: GroupParams
    structure_constants: np.ndarray  # C[gamma][alpha][beta]
    xi: list  # 4x4 FieldExpr, rows = group index, cols = coordinate index
    dual: list  # 4x4 FieldExpr, rows = coordinate index, cols = group index
    e_cov: list  # 4x4 FieldExpr, rows = coordinate index, cols = frame index
    e_con: list  # 4x4 FieldExpr, rows = frame index, cols = coordinate index
    holo_basis: list  # holo_basis[beta][i]: coefficient of alpha_beta in A_i
    frame_basis: list  # frame_basis[beta][alpha]: recomputed xi . A
    reference_frame: list | None  # source frame-potential table, if linear
    eta_eff: np.ndarray  # 4x4 constant frame metric actually used
    domain: SampleDomain
    tetrad_printed: bool
    abelian_block: np.ndarray | None  # the 3x3 C_a^b matrix for the VI family
    notes: tuple = ()
    orientation: OrientationDecision | None = None
    _bracket_sign: int | None = field(default=None, repr=False, compare=False)

    @property
    def name(self) -> str:
        return self.group_id.value

    def eta_con(self) -> np.ndarray:
        return np.linalg.inv(self.eta_eff)

    def bracket_sign(self) -> int:
        """Overall sign s with [xi_a, xi_b] = s C^g_ab xi_g, found empirically."""
        if self._bracket_sign is None:
            self._bracket_sign = _resolve_bracket_sign(self)
        return self._bracket_sign


# --------------------------------------------------------------------------
# Expression-table helpers
# --------------------------------------------------------------------------


def _table(rows) -> list:
    return [[adiff.as_expr(x) for x in row] for row in rows]


def _zeros(n=4, m=4):
    return [[adiff.ZERO for _ in range(m)] for _ in range(n)]


def _ctensor(entries) -> np.ndarray:
    """Structure constants from {(gamma, alpha, beta): value} (1-based),
    antisymmetrized in the lower pair."""
    C = np.zeros((4, 4, 4))
    for (g, a, b), v in entries.items():
        C[g - 1, a - 1, b - 1] = v
        C[g - 1, b - 1, a - 1] = -v
    return C


def _matmul_exprs(A, B) -> list:
    n, m, p = len(A), len(B[0]), len(B)
    out = _zeros(n, m)
    for i in range(n):
        for j in range(m):
            acc = adiff.ZERO
            for k in range(p):
                acc = acc + A[i][k] * B[k][j]
            out[i][j] = acc
    return out


def _frame_from_holo(xi, holo_basis) -> list:
    """Frame potential components A_alpha = xi_alpha^i A_i, basis-wise."""
    out = _zeros()
    for beta in range(4):
        for alpha in range(4):
            acc = adiff.ZERO
            for i in range(4):
                acc = acc + xi[alpha][i] * holo_basis[beta][i]
            out[beta][alpha] = acc
    return out


def eval_table(exprs, points) -> np.ndarray:
    """Evaluate a table of FieldExpr at points (n, 4) -> (n, r, c)."""
    pts = np.asarray(points, float).T  # (4, n)
    n = pts.shape[1]
    r, c = len(exprs), len(exprs[0])
    out = np.empty((n, r, c))
    for i in range(r):
        for j in range(c):
            out[:, i, j] = exprs[i][j].eval(pts)
    return out


def eval_table_jet(exprs, points) -> tuple[np.ndarray, np.ndarray]:
    """Values (n, r, c) and gradients (n, 4, r, c) of a FieldExpr table."""
    pts = np.asarray(points, float).T
    n = pts.shape[1]
    r, c = len(exprs), len(exprs[0])
    vals = np.empty((n, r, c))
    grads = np.empty((n, adiff.CHART_DIM, r, c))
    for i in range(r):
        for j in range(c):
            jet = exprs[i][j].jet(pts)
            vals[:, i, j] = jet.value
            grads[:, :, i, j] = jet.grad.T
    return vals, grads


# --------------------------------------------------------------------------
# Entry builders
# --------------------------------------------------------------------------


def _build_g4_i(params: GroupParams, c_equals_one: bool):
    if c_equals_one:
        c, eps = 1.0, 0.0
    else:
        c, eps = params.c, params.c - 1.0
        if c == 1.0:
            raise InvalidParams("g4-i-cne1 requires c != 1 (use g4-i-ceq1)")

    xi = _table(
        [
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [-1, U3, 0, 0],
            [eps * U1, c * U2, U3, 1],
        ]
    )
    dual = _table(
        [
            [U3, 0, -1, 0],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [-(eps * U1 * U3 + c * U2), -U3, eps * U1, 1],
        ]
    )
    C = _ctensor({(1, 1, 4): c, (1, 2, 3): 1.0, (2, 2, 4): 1.0, (3, 3, 4): eps})

    em_eps = exp(-eps * U4) if eps else adiff.ONE
    em_c = exp(-c * U4)
    em = exp(-U4)
    e_cov = _table(
        [
            [em_eps, 0, 0, 0],
            [0, em_c, 0, 0],
            [0, U1 * em_c, em, 0],
            [0, 0, 0, 1],
        ]
    )
    ep_eps = exp(eps * U4) if eps else adiff.ONE
    e_con = _table(
        [
            [ep_eps, 0, 0, 0],
            [0, exp(c * U4), 0, 0],
            [0, -U1 * exp(U4), exp(U4), 0],
            [0, 0, 0, 1],
        ]
    )
    holo = [
        [em_eps, adiff.ZERO, adiff.ZERO, adiff.ZERO],
        [adiff.ZERO, em_c, U1 * em_c, adiff.ZERO],
        [adiff.ZERO, adiff.ZERO, em, adiff.ZERO],
        [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ONE],
    ]
    if c_equals_one:
        reference_frame = _table(
            [
                [0, 0, -1, 0],
                [em, U1 * em, U3 * em, (U1 * U3 + U2) * em],
                [0, em, 0, U3 * em],
                [0, 0, 0, 1],
            ]
        )
        notes = ()
    else:
        reference_frame = _table(
            [
                [0, 0, em_eps, -c * U1 * em_eps],
                [em_c, U1 * em_c, U3 * em_c, (c * U2 + U1 * U3) * em_c],
                [0, em, 0, U3 * em],
                [0, 0, 0, 1],
            ]
        )
        notes = (
            "reference frame-potential table disagrees with the holonomic "
            "table in the alpha1 basis (sign of the exp(-eps*u4) term in "
            "A_3 and its coefficient in A_4); the recomputed frame table "
            "is used",
        )
    return xi, dual, C, e_cov, e_con, holo, reference_frame, notes


def _build_g4_ii():
    xi = _table(
        [
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [-1, U3, 0, 0],
            [U1, 2 * U2 + 0.5 * U1 * U1, U3 - U1, 1],
        ]
    )
    dual = _table(
        [
            [U3, 0, -1, 0],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [-(U1 * U3 + 2 * U2 + 0.5 * U1 * U1), U1 - U3, U1, 1],
        ]
    )
    C = _ctensor(
        {(1, 1, 4): 2.0, (1, 2, 3): 1.0, (2, 2, 4): 1.0, (2, 3, 4): 1.0, (3, 3, 4): 1.0}
    )
    em, em2 = exp(-U4), exp(-2 * U4)
    ep, ep2 = exp(U4), exp(2 * U4)
    e_cov = _table(
        [
            [0, U4 * em, -em, 0],
            [em2, 0, 0, 0],
            [U1 * em2, em, 0, 0],
            [0, 0, 0, 1],
        ]
    )
    e_con = _table(
        [
            [0, ep2, 0, 0],
            [0, -U1 * ep, ep, 0],
            [-ep, -U1 * U4 * ep, U4 * ep, 0],
            [0, 0, 0, 1],
        ]
    )
    holo = [
        [adiff.ZERO, em2, U1 * em2, adiff.ZERO],
        [U4 * em, adiff.ZERO, em, adiff.ZERO],
        [-em, adiff.ZERO, adiff.ZERO, adiff.ZERO],
        [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ONE],
    ]
    reference_frame = _table(
        [
            [em2, U1 * em2, U3 * em2, (U1 * U3 + 2 * U2 - 0.5 * U1 * U1) * em2],
            [0, em, -U4 * em, (U3 + U1 * U4 - U1) * em],
            [0, 0, em, -U1 * em],
            [0, 0, 0, 1],
        ]
    )
    return xi, dual, C, e_cov, e_con, holo, reference_frame, ()


def _build_g4_iii(params: GroupParams):
    a = params.alpha_angle
    sa, ca = math.sin(a), math.cos(a)
    if abs(sa) < 1e-12:
        raise InvalidParams("g4-iii requires sin(alpha_angle) != 0")

    xi = _table(
        [
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [-1, U3, 0, 0],
            [2 * ca * U1 - U3, 2 * ca * U2 + 0.5 * (U3 * U3 - U1 * U1), U1, 1],
        ]
    )
    # The (4,1) entry below carries +(u1^2 + u3^2)/2; the source table prints
    # it with a minus sign, which breaks the duality xi . dual = identity.
    dual = _table(
        [
            [U3, 0, -1, 0],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [
                -2 * ca * (U1 * U3 + U2) + 0.5 * (U1 * U1 + U3 * U3),
                -U1,
                2 * ca * U1 - U3,
                1,
            ],
        ]
    )
    C = _ctensor(
        {
            (1, 1, 4): 2 * ca,
            (1, 2, 3): 1.0,
            (3, 2, 4): 1.0,
            (2, 3, 4): -1.0,
            (3, 3, 4): 2 * ca,
        }
    )
    phase = sa * U4
    em = exp(-ca * U4)
    ep = exp(ca * U4)
    em2 = exp(-2 * ca * U4)
    ep2 = exp(2 * ca * U4)
    s_ph, c_ph = sin(phase), cos(phase)
    s_sh, c_sh = sin(phase - a), cos(phase - a)
    # Left-invariance forces the u1-components of the oscillatory coframe
    # legs to be the *negated* shifted trig terms (they are the u4-derivative
    # of the u3-components); the source tetrad and the holonomic A_1 print
    # them with the opposite sign, which breaks the Killing identities.
    e_cov = _table(
        [
            [0, -(em * s_sh), -(em * c_sh), 0],
            [em2, 0, 0, 0],
            [U1 * em2, em * s_ph, em * c_ph, 0],
            [0, 0, 0, 1],
        ]
    )
    inv_sa = 1.0 / sa
    e_con = _table(
        [
            [0, ep2, 0, 0],
            [inv_sa * ep * c_ph, -inv_sa * U1 * ep * c_sh, inv_sa * ep * c_sh, 0],
            [-inv_sa * ep * s_ph, inv_sa * U1 * ep * s_sh, -inv_sa * ep * s_sh, 0],
            [0, 0, 0, 1],
        ]
    )
    # Holonomic table with the same A_1 sign correction; A_4 = 0 as
    # tabulated (the alpha4 freedom enters only via the tetrad route).
    holo = [
        [-(em * s_sh), adiff.ZERO, em * s_ph, adiff.ZERO],
        [-(em * c_sh), adiff.ZERO, em * c_ph, adiff.ZERO],
        [adiff.ZERO, em2, U1 * em2, adiff.ZERO],
        [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ZERO],
    ]
    reference_frame = _table(
        [
            [
                em2,
                U1 * em2,
                U3 * em2,
                (2 * ca * U2 + 0.5 * (U1 * U1 + U3 * U3)) * em2,
            ],
            [
                0,
                em * s_ph,
                em * s_sh,
                U1 * em * s_ph + (2 * ca * U1 - U3) * em * s_sh,
            ],
            [
                0,
                em * c_ph,
                em * c_sh,
                U1 * em * c_ph + (2 * ca * U1 - U3) * em * c_sh,
            ],
            [0, 0, 0, 0],
        ]
    )
    notes = (
        "dual-frame entry (4,1) sign-corrected (+(u1^2+u3^2)/2) to satisfy "
        "duality with the Killing frame",
        "tetrad first row and holonomic A_1 stored with negated oscillatory "
        "terms: the tabulated sign is inconsistent with left-invariance "
        "(and with the relative sign of the source's own frame table)",
        "frame- and holonomic-potential tables use conflicting constant "
        "labels; the frame table is recomputed from the holonomic one",
        "holonomic table fixes A_4 = 0 (alpha4 enters only via the "
        "tetrad-constructed potential)",
    )
    return xi, dual, C, e_cov, e_con, holo, reference_frame, notes


def _build_g4_iv():
    xi = _table(
        [
            [0, 0, 1, 0],
            [0, 1, 0, 0],
            [-1, U2, 0, 0],
            [0, 0, U3, 1],
        ]
    )
    dual = _table(
        [
            [0, U2, -1, 0],
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [-U3, 0, 0, 1],
        ]
    )
    # The source lists C^2_14 = 1; the bracket of the tabulated frame gives
    # [xi_1, xi_4] = xi_1, so the stored entry is C^1_14 = 1.
    C = _ctensor({(1, 1, 4): 1.0, (2, 2, 3): 1.0})
    e_cov = _table(
        [
            [1, 0, 0, 0],
            [0, exp(U1), 0, 0],
            [0, 0, exp(-U4), 0],
            [0, 0, 0, 1],
        ]
    )
    e_con = _table(
        [
            [1, 0, 0, 0],
            [0, exp(-U1), 0, 0],
            [0, 0, exp(U4), 0],
            [0, 0, 0, 1],
        ]
    )
    holo = [
        [adiff.ONE, adiff.ZERO, adiff.ZERO, adiff.ZERO],
        [adiff.ZERO, exp(U1), adiff.ZERO, adiff.ZERO],
        [adiff.ZERO, adiff.ZERO, exp(-U4), adiff.ZERO],
        [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ZERO],
    ]
    reference_frame = _table(
        [
            [0, 0, 0, 0],
            [0, exp(U1), U2 * exp(U1), 0],
            [exp(-U4), 0, -1, U3 * exp(-U4)],
            [0, 0, 0, 1],
        ]
    )
    notes = (
        "structure constant stored as C^1_14 = 1; the source prints C^2_14, "
        "inconsistent with the bracket of its own frame",
        "source potential tables use undeclared constants and tie the "
        "constants of A_1 and A_3 together; the holonomic table is stored "
        "with four independent constants (A_4 = 0 as tabulated)",
    )
    return xi, dual, C, e_cov, e_con, holo, reference_frame, notes


def _build_g4_v():
    xi = _table(
        [
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [-1, U2, U3, 0],
            [0, -U3, U2, 1],
        ]
    )
    dual = _table(
        [
            [U2, U3, -1, 0],
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [U3, -U2, 0, 1],
        ]
    )
    C = _ctensor({(1, 1, 3): 1.0, (2, 1, 4): 1.0, (2, 2, 3): 1.0, (1, 2, 4): -1.0})
    epu1, emu1 = exp(U1), exp(-U1)
    s4, c4 = sin(U4), cos(U4)
    e_cov = _table(
        [
            [1, 0, 0, 0],
            [0, c4 * epu1, s4 * epu1, 0],
            [0, s4 * epu1, -(c4 * epu1), 0],
            [0, 0, 0, 1],
        ]
    )
    e_con = _table(
        [
            [1, 0, 0, 0],
            [0, c4 * emu1, s4 * emu1, 0],
            [0, s4 * emu1, -(c4 * emu1), 0],
            [0, 0, 0, 1],
        ]
    )
    holo = [
        [adiff.ONE, adiff.ZERO, adiff.ZERO, adiff.ZERO],
        [adiff.ZERO, c4 * epu1, s4 * epu1, adiff.ZERO],
        [adiff.ZERO, s4 * epu1, -(c4 * epu1), adiff.ZERO],
        [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ONE],
    ]
    notes = (
        "source frame-potential table is written in amplitude/phase "
        "constants (with a doubly assigned label); the frame table is "
        "recomputed from the holonomic one",
    )
    return xi, dual, C, e_cov, e_con, holo, None, notes


def _abelian_matrix(group_id: GroupId, params: GroupParams) -> np.ndarray:
    k, l, e = params.k, params.l, float(params.eps01)
    if params.eps01 not in (0, 1):
        raise InvalidParams("eps01 must be 0 or 1")
    if group_id is GroupId.G4_VI_1:
        return np.array([[l, 0, 0], [0, e, 0], [0, 0, k]])
    if group_id is GroupId.G4_VI_2:
        return np.array([[l, 0, 0], [0, k, 1], [0, -1, k]])
    if group_id is GroupId.G4_VI_3:
        return np.array([[e, 0, 0], [0, k, 1], [0, 0, k]])
    if group_id is GroupId.G4_VI_4_1:
        if k == e:
            raise InvalidParams("g4-vi-4-1 requires k != eps01")
        return np.array([[e, 0, 0], [0, k, 1], [1, 0, k]])
    if group_id is GroupId.G4_VI_4_2:
        return np.array([[k, 0, 0], [0, k, 1], [1, 0, k]])
    raise InvalidParams(f"{group_id} is not an Abelian-subgroup entry")


def _abelian_flow(group_id: GroupId, params: GroupParams, t: FieldExpr) -> list:
    """Closed-form matrix exponential expm(-t C) for the entry's 3x3 block.

    Columns are the solutions of dA_a/dt = -C_a^b A_b with unit initial data,
    which is simultaneously the covariant-tetrad block at u4 = t.
    """
    k, l, e = params.k, params.l, float(params.eps01)
    ek = exp(-k * t)
    if group_id is GroupId.G4_VI_1:
        return _table(
            [
                [exp(-l * t), 0, 0],
                [0, exp(-e * t), 0],
                [0, 0, ek],
            ]
        )
    if group_id is GroupId.G4_VI_2:
        st, ct = sin(t), cos(t)
        return _table(
            [
                [exp(-l * t), 0, 0],
                [0, ek * ct, -(ek * st)],
                [0, ek * st, ek * ct],
            ]
        )
    if group_id is GroupId.G4_VI_3:
        return _table(
            [
                [exp(-e * t), 0, 0],
                [0, ek, -(t * ek)],
                [0, 0, ek],
            ]
        )
    if group_id is GroupId.G4_VI_4_1:
        d = k - e
        ee = exp(-e * t)
        return _table(
            [
                [ee, 0, 0],
                [
                    (1.0 / d**2) * ee - (1.0 / d**2) * ek - (1.0 / d) * (t * ek),
                    ek,
                    -(t * ek),
                ],
                [(1.0 / d) * ek - (1.0 / d) * ee, 0, ek],
            ]
        )
    if group_id is GroupId.G4_VI_4_2:
        return _table(
            [
                [ek, 0, 0],
                [0.5 * (t * t * ek), ek, -(t * ek)],
                [-(t * ek), 0, ek],
            ]
        )
    raise InvalidParams(f"{group_id} is not an Abelian-subgroup entry")


def _build_g4_vi(group_id: GroupId, params: GroupParams):
    M = _abelian_matrix(group_id, params)
    us = (U1, U2, U3)

    xi = _zeros()
    dual = _zeros()
    for a in range(3):
        xi[a][a] = adiff.ONE
        dual[a][a] = adiff.ONE
    for q in range(3):
        drift = adiff.ZERO
        for p in range(3):
            drift = drift + M[p, q] * us[p]
        xi[3][q] = drift
        dual[3][q] = -drift
    xi[3][3] = adiff.ONE
    dual[3][3] = adiff.ONE

    C = np.zeros((4, 4, 4))
    for a in range(3):
        for q in range(3):
            C[q, a, 3] = M[a, q]
            C[q, 3, a] = -M[a, q]

    cov_block = _abelian_flow(group_id, params, U4)  # expm(-u4 C)
    con_block = _abelian_flow(group_id, params, -U4)  # expm(+u4 C)
    e_cov = _zeros()
    e_con = _zeros()
    for i in range(3):
        for j in range(3):
            e_cov[i][j] = cov_block[i][j]
            e_con[i][j] = con_block[i][j]
    e_cov[3][3] = adiff.ONE
    e_con[3][3] = adiff.ONE

    # Holonomic potential as tabulated: A_a = frame component, A_4 built from
    # the Abelian drift so that the field strength cancels identically
    # (the zero-field construction), plus the constant alpha4.
    holo = _zeros()
    for b in range(3):
        for q in range(3):
            holo[b][q] = cov_block[q][b]
        a4 = adiff.ZERO
        for p in range(3):
            for q in range(3):
                a4 = a4 - M[p, q] * us[p] * cov_block[q][b]
        holo[b][3] = a4
    holo[3][3] = adiff.ONE

    reference_frame = _zeros()
    for b in range(3):
        for a in range(3):
            reference_frame[b][a] = cov_block[a][b]
    reference_frame[3][3] = adiff.ONE

    notes = (
        "tetrad derived (not tabulated): left-invariant block expm(u4 C) "
        "completed by the flat fourth direction",
        "holonomic A_4 includes the constant alpha4 (exact contraction of "
        "the frame table; the tabulated A_4 omits this pure-gauge term)",
    )
    return xi, dual, C, e_cov, e_con, holo, reference_frame, notes


def _build_g4_vii(shifted: bool):
    """Unsolvable group over the sl(2)-type G3 orbit; the fourth generator is
    p4 (plain) or p1 + p4 (shifted coordinates, tilde u1 = u1 - u4)."""
    w = U1 - U4 if shifted else U1
    emu3, epu3 = exp(-U3), exp(U3)

    xi = _table(
        [
            [0, 1, 0, 0],
            [0, U2, 1, 0],
            [epu3, U2 * U2, 2 * U2, 0],
            [1, 0, 0, 1] if shifted else [0, 0, 0, 1],
        ]
    )
    d3 = [
        [U2 * U2 * emu3, -2 * U2 * emu3, emu3],
        [adiff.ONE, adiff.ZERO, adiff.ZERO],
        [-U2, adiff.ONE, adiff.ZERO],
    ]
    dual = _zeros()
    for i in range(3):
        for b in range(3):
            dual[i][b] = d3[i][b]
    if shifted:
        for b in range(3):
            dual[3][b] = -d3[0][b]
    dual[3][3] = adiff.ONE

    C = _ctensor({(1, 1, 2): 1.0, (3, 2, 3): 1.0, (2, 1, 3): 2.0})

    e_cov = _table(
        [
            [1, 0, 0, 0],
            [w * w * emu3, -2 * w * emu3, emu3, 0],
            [-w, 1, 0, 0],
            [-1, 0, 0, 1] if shifted else [0, 0, 0, 1],
        ]
    )
    e_con = _table(
        [
            [1, 0, 0, 0],
            [w, 0, 1, 0],
            [w * w, epu3, 2 * w, 0],
            [1, 0, 0, 1] if shifted else [0, 0, 0, 1],
        ]
    )
    holo = [
        [adiff.ONE, w * w * emu3, -w, adiff.ZERO],
        [adiff.ZERO, -2 * w * emu3, adiff.ONE, adiff.ZERO],
        [adiff.ZERO, emu3, adiff.ZERO, adiff.ZERO],
        [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ONE],
    ]
    if shifted:
        reference_frame = None
        notes = (
            "source frame/dual tables for the 3-space orbit carry swapped "
            "index labels; stored with the assignment fixed by bracket "
            "closure and duality",
            "source holonomic table for the shifted variant is inconsistent "
            "with its own tetrad (missing exp(-u3) factor in A_2, spurious "
            "u2-term in A_3); stored table rebuilt from the tetrad, keeping "
            "A_4 = alpha4 (the difference is a constant, pure-gauge term)",
        )
    else:
        q_coeff = [w * w, -2 * w, adiff.ONE]  # Q = a1 w^2 - 2 a2 w + a3
        reference_frame = _zeros()
        for b in range(3):
            reference_frame[b][0] = q_coeff[b] * emu3
            reference_frame[b][1] = U2 * q_coeff[b] * emu3
            reference_frame[b][2] = U2 * U2 * q_coeff[b] * emu3
        # - (a1 u1 + a2) additions in A_2, A_3 and the a1 exp(u3) tail in A_3
        reference_frame[0][1] = reference_frame[0][1] - U1
        reference_frame[1][1] = reference_frame[1][1] - 1
        reference_frame[0][2] = reference_frame[0][2] - U2 * U1 + epu3
        reference_frame[1][2] = reference_frame[1][2] - U2
        reference_frame[3][3] = adiff.ONE
        notes = (
            "source frame/dual tables for the 3-space orbit carry swapped "
            "index labels; stored with the assignment fixed by bracket "
            "closure and duality",
            "source frame-potential table disagrees with the holonomic one "
            "(sign of a2, factor 2 on the u2 cross terms); the recomputed "
            "frame table is used",
        )
    return xi, dual, C, e_cov, e_con, holo, reference_frame, notes


def _build_g4_viii(shifted: bool):
    """Unsolvable group over the rotation-type G3 orbit; the fourth generator
    is p4 (plain) or p3 + p4 (shifted coordinates, tilde u3 = u3 - u4)."""
    s1, c1 = sin(U1), cos(U1)
    s2, c2 = sin(U2), cos(U2)
    w = U3 - U4 if shifted else U3
    sw, cw = sin(w), cos(w)
    inv_s1 = 1 / s1

    xi = _table(
        [
            [0, 1, 0, 0],
            [c2, -(s2 * c1 * inv_s1), s2 * inv_s1, 0],
            [-s2, -(c2 * c1 * inv_s1), c2 * inv_s1, 0],
            [0, 0, 1, 1] if shifted else [0, 0, 0, 1],
        ]
    )
    d3 = [
        [adiff.ZERO, c2, -s2],
        [adiff.ONE, adiff.ZERO, adiff.ZERO],
        [c1, s2 * s1, c2 * s1],
    ]
    dual = _zeros()
    for i in range(3):
        for b in range(3):
            dual[i][b] = d3[i][b]
    if shifted:
        for b in range(3):
            dual[3][b] = -d3[2][b]
    dual[3][3] = adiff.ONE

    C = _ctensor({(3, 1, 2): 1.0, (1, 2, 3): 1.0, (2, 3, 1): 1.0})

    e_cov = _table(
        [
            [cw, -sw, 0, 0],
            [s1 * sw, s1 * cw, c1, 0],
            [0, 0, 1, 0],
            [0, 0, -1, 1] if shifted else [0, 0, 0, 1],
        ]
    )
    e_con = _table(
        [
            [cw, sw * inv_s1, -(sw * c1 * inv_s1), 0],
            [-sw, cw * inv_s1, -(cw * c1 * inv_s1), 0],
            [0, 0, 1, 0],
            [0, 0, 1, 1] if shifted else [0, 0, 0, 1],
        ]
    )
    if shifted:
        # As tabulated: a single rotational constant (alpha2 unused) and
        # A_4 = alpha4; the full family appears via the tetrad route.
        holo = [
            [cw, s1 * sw, adiff.ZERO, adiff.ZERO],
            [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ZERO],
            [adiff.ZERO, c1, adiff.ONE, adiff.ZERO],
            [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ONE],
        ]
        notes = (
            "source holonomic table for the shifted variant omits the "
            "second rotational constant (alpha2 unused) and the constant "
            "pure-gauge part of A_4; stored as tabulated",
        )
    else:
        holo = [
            [cw, s1 * sw, adiff.ZERO, adiff.ZERO],
            [-sw, s1 * cw, adiff.ZERO, adiff.ZERO],
            [adiff.ZERO, c1, adiff.ONE, adiff.ZERO],
            [adiff.ZERO, adiff.ZERO, adiff.ZERO, adiff.ONE],
        ]
        notes = (
            "source holonomic table uses amplitude/phase constants; stored "
            "in the equivalent form linear in alpha1/alpha2",
        )
    return xi, dual, C, e_cov, e_con, holo, None, notes


# --------------------------------------------------------------------------
# Assembly
# --------------------------------------------------------------------------


def _effective_eta(group_id: GroupId, params: GroupParams) -> np.ndarray:
    eta = params.eta_matrix()
    if eta.shape != (4, 4):
        raise InvalidParams("eta must be a 4x4 matrix")
    if not np.allclose(eta, eta.T, atol=1e-12):
        raise InvalidParams("eta must be symmetric")
    if group_id in BLOCK_ETA_IDS:
        out = np.zeros((4, 4))
        out[:3, :3] = eta[:3, :3]
        out[3, 3] = 1.0
        eta = out
    if abs(np.linalg.det(eta)) < 1e-12:
        raise InvalidParams("eta must be nondegenerate")
    return eta


_BUILDERS = {
    GroupId.G4_I_CNE1: lambda p: _build_g4_i(p, c_equals_one=False),
    GroupId.G4_I_CEQ1: lambda p: _build_g4_i(p, c_equals_one=True),
    GroupId.G4_II: lambda p: _build_g4_ii(),
    GroupId.G4_III: _build_g4_iii,
    GroupId.G4_IV: lambda p: _build_g4_iv(),
    GroupId.G4_V: lambda p: _build_g4_v(),
    GroupId.G4_VI_1: lambda p: _build_g4_vi(GroupId.G4_VI_1, p),
    GroupId.G4_VI_2: lambda p: _build_g4_vi(GroupId.G4_VI_2, p),
    GroupId.G4_VI_3: lambda p: _build_g4_vi(GroupId.G4_VI_3, p),
    GroupId.G4_VI_4_1: lambda p: _build_g4_vi(GroupId.G4_VI_4_1, p),
    GroupId.G4_VI_4_2: lambda p: _build_g4_vi(GroupId.G4_VI_4_2, p),
    GroupId.G4_VII_A: lambda p: _build_g4_vii(shifted=False),
    GroupId.G4_VII_B: lambda p: _build_g4_vii(shifted=True),
    GroupId.G4_VIII_A: lambda p: _build_g4_viii(shifted=False),
    GroupId.G4_VIII_B: lambda p: _build_g4_viii(shifted=True),
}


def get_group(group_id: GroupId | str, params: GroupParams | None = None) -> GroupModel:
    """Build the fully wired model for one catalog entry."""
    group_id = GroupId(group_id)
    params = params if params is not None else GroupParams()
    xi, dual, C, e_cov, e_con, holo, reference_frame, notes = _BUILDERS[group_id](
        params
    )
    model = GroupModel(
        group_id=group_id,
        params=params,
        structure_constants=C,
        xi=xi,
        dual=dual,
        e_cov=e_cov,
        e_con=e_con,
        holo_basis=holo,
        frame_basis=_frame_from_holo(xi, holo),
        reference_frame=reference_frame,
        eta_eff=_effective_eta(group_id, params),
        domain=(
            SPHERICAL_DOMAIN
            if group_id in (GroupId.G4_VIII_A, GroupId.G4_VIII_B)
            else DEFAULT_DOMAIN
        ),
        tetrad_printed=group_id in PRINTED_TETRAD_IDS,
        abelian_block=(
            _abelian_matrix(group_id, params)
            if group_id in ABELIAN_SUBGROUP_IDS
            else None
        ),
        notes=notes,
    )
    model.orientation = orient_tetrad(model)
    return model


def all_groups(params: GroupParams | None = None) -> list[GroupModel]:
    return [get_group(gid, params) for gid in GroupId]


def _resolve_bracket_sign(model: GroupModel, n_points: int = 16, seed: int = 1234) -> int:
    pts = sample_points(model.domain, n_points, seed)
    xi, dxi = eval_table_jet(model.xi, pts)  # dxi: (n, j, a, i) = d_j xi_a^i
    bracket = np.einsum("naj,njbi->nabi", xi, dxi)
    bracket = bracket - bracket.transpose(0, 2, 1, 3)
    target = np.einsum("gab,ngi->nabi", model.structure_constants, xi)
    scale = 1.0 + np.maximum(np.abs(bracket), np.abs(target))
    res_plus = np.max(np.abs(bracket - target) / scale)
    res_minus = np.max(np.abs(bracket + target) / scale)
    if min(res_plus, res_minus) > 1e-8:
        raise ClosureFailed(
            f"{model.name}: no bracket sign closes on the stored structure "
            f"constants (residuals {res_plus:.2e} / {res_minus:.2e})"
        )
    return 1 if res_plus <= res_minus else -1


# --------------------------------------------------------------------------
# Potentials
# --------------------------------------------------------------------------


def potential(model: GroupModel, u, alphas=None) -> np.ndarray:
    """Holonomic potential A_i at chart point(s) u with the model's (or the
    given) potential constants."""
    alphas = model.params.alphas() if alphas is None else np.asarray(alphas, float)
    u = np.asarray(u, float)
    pts = u[None, :] if u.ndim == 1 else u
    table = eval_table(model.holo_basis, pts)  # (n, beta, i)
    out = np.einsum("b,nbi->ni", alphas, table)
    return out[0] if u.ndim == 1 else out


def frame_potential(model: GroupModel, u, alphas=None) -> np.ndarray:
    """Frame potential components A_alpha = xi_alpha^i A_i."""
    alphas = model.params.alphas() if alphas is None else np.asarray(alphas, float)
    u = np.asarray(u, float)
    pts = u[None, :] if u.ndim == 1 else u
    table = eval_table(model.frame_basis, pts)
    out = np.einsum("b,nba->na", alphas, table)
    return out[0] if u.ndim == 1 else out


def potential_from_tetrad(model: GroupModel, u, alphas=None) -> np.ndarray:
    """Left-invariant potential A_i = alpha_beta e^beta_i."""
    alphas = model.params.alphas() if alphas is None else np.asarray(alphas, float)
    u = np.asarray(u, float)
    pts = u[None, :] if u.ndim == 1 else u
    ecov = eval_table(model.e_cov, pts)  # (n, i, beta)
    out = np.einsum("b,nib->ni", alphas, ecov)
    return out[0] if u.ndim == 1 else out


def tetrad_basis_table(model: GroupModel) -> list:
    """Tetrad-constructed potential, basis-wise: entry [beta][i] = e^beta_i."""
    return [[model.e_cov[i][beta] for i in range(4)] for beta in range(4)]


# --------------------------------------------------------------------------
# Tetrad orientation
# --------------------------------------------------------------------------


def _duality_residual(cov_vals, con_vals) -> float:
    prod = np.einsum("nai,nib->nab", con_vals, cov_vals)
    return float(np.max(np.abs(prod - np.eye(4))))


def _relabel_fit(tetrad_tab, holo_tab) -> tuple[float, np.ndarray]:
    """Best constant map R with holo[gamma] ~= sum_beta R[gamma,beta] *
    tetrad[beta]; returns (relative residual, R)."""
    n = tetrad_tab.shape[0]
    X = tetrad_tab.reshape(n, 4, 4).transpose(0, 2, 1).reshape(-1, 4)  # (n*4, beta)
    R = np.empty((4, 4))
    resid = 0.0
    for gamma in range(4):
        y = holo_tab[:, gamma, :].reshape(-1)
        coef, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
        R[gamma] = coef
        err = np.max(np.abs(X @ coef - y))
        resid = max(resid, err / (1.0 + np.max(np.abs(y), initial=0.0)))
    return resid, R


def orient_tetrad(model: GroupModel, n_points: int = 40, seed: int = 977) -> OrientationDecision:
    """Decide whether the stored tetrad rows index coordinates or frame legs.

    Both readings of an inverse pair satisfy the duality contraction, so the
    discriminating test is whether the tetrad-constructed potential spans the
    stored holonomic table (up to a constant relabeling, which the source
    tables use freely).  The stored reading (rows = coordinate index for
    e^alpha_i) is kept unless only the transposed reading fits.
    """
    pts = sample_points(model.domain, n_points, seed)
    if not model.tetrad_printed:
        cov = eval_table(model.e_cov, pts)
        con = eval_table(model.e_con, pts)
        return OrientationDecision(
            status="resolved",
            rows_are_coordinates=True,
            duality_residual=_duality_residual(cov, con),
            potential_residual=0.0,
            note="derived tetrad; orientation fixed by construction",
        )
    cov = eval_table(model.e_cov, pts)  # (n, i, alpha)
    con = eval_table(model.e_con, pts)  # (n, alpha, i)
    holo = eval_table(model.holo_basis, pts)  # (n, beta, i)

    dual_stored = _duality_residual(cov, con)
    dual_flipped = _duality_residual(
        cov.transpose(0, 2, 1), con.transpose(0, 2, 1)
    )

    tet_stored = cov.transpose(0, 2, 1)  # [n, beta, i] with rows=i reading
    tet_flipped = cov  # transposed reading
    fit_stored, R_stored = _relabel_fit(tet_stored, holo)
    fit_flipped, R_flipped = _relabel_fit(tet_flipped, holo)

    tol = 1e-9
    ok_stored = dual_stored <= 1e-10 and fit_stored <= tol
    ok_flipped = dual_flipped <= 1e-10 and fit_flipped <= tol
    if ok_stored and ok_flipped:
        status, note = "ambiguous", "both row conventions reproduce the potential table"
    elif ok_stored:
        status, note = "resolved", ""
    elif ok_flipped:
        status, note = (
            "resolved",
            "transposed reading selected by the potential table",
        )
    else:
        status, note = (
            "failed",
            "no row convention reproduces the stored potential table",
        )
    use_stored = ok_stored or not ok_flipped
    return OrientationDecision(
        status=status,
        rows_are_coordinates=use_stored,
        duality_residual=dual_stored if use_stored else dual_flipped,
        potential_residual=fit_stored if use_stored else fit_flipped,
        relabel=R_stored if use_stored else R_flipped,
        note=note,
    )


# --------------------------------------------------------------------------
# Machine-readable dump
# --------------------------------------------------------------------------


def _nonzero_constants(C: np.ndarray) -> list:
    out = []
    for g in range(4):
        for a in range(4):
            for b in range(a + 1, 4):
                v = C[g, a, b]
                if v == 0.0:
                    continue
                # one representative per antisymmetric pair, positive value
                al, be = (a, b) if v > 0 else (b, a)
                out.append(
                    {"gamma": g + 1, "alpha": al + 1, "beta": be + 1, "value": abs(v)}
                )
    return out


_CONSTRAINTS = {
    GroupId.G4_I_CNE1: "c != 1",
    GroupId.G4_I_CEQ1: "",
    GroupId.G4_III: "sin(alpha_angle) != 0",
    GroupId.G4_VI_4_1: "k != eps01",
}


def catalog_entry(model: GroupModel) -> dict:
    """One entry of the machine-readable catalog listing."""
    return {
        "id": model.name,
        "constraints": _CONSTRAINTS.get(model.group_id, ""),
        "abelian_subgroup": model.group_id in ABELIAN_SUBGROUP_IDS,
        "tetrad_source": "tabulated" if model.tetrad_printed else "derived",
        "structure_constants": _nonzero_constants(model.structure_constants),
        "domain": {
            "lows": list(model.domain.lows),
            "highs": list(model.domain.highs),
            "excluded": model.domain.excluded,
        },
        "notes": list(model.notes),
    }
