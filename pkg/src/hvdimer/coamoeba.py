"""Coamoebas of Laurent polynomials with binomial edges, exact trinomial membership.

Arguments are measured in turns (fractions of a full turn).  In exact mode
coefficient arguments are rationals; the zero-locus sampler is floating point.
"""
from __future__ import annotations

import cmath
import enum
import math
import random
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd

import numpy as np

from .arrangement import (
    BLACK,
    UNCOLORED,
    WHITE,
    ArrangementComplex,
    OrientedArrangement,
    TorusLine,
    build_complex,
    color_cells,
    frac_mod1,
    is_admissible,
)
from .errors import (
    DegenerateInput,
    NonBinomialEdge,
    NotAdmissible,
    NotAnEdge,
    ValidationError,
    VerificationFailure,
)
from .lattice import Lattice2, convex_hull, cross


@dataclass(frozen=True)
class Term:
    exponent: tuple[int, int]
    modulus: Fraction
    argument: Fraction  # turns, in [0, 1)

    def __post_init__(self):
        object.__setattr__(self, "exponent", (int(self.exponent[0]), int(self.exponent[1])))
        object.__setattr__(self, "modulus", Fraction(self.modulus))
        object.__setattr__(self, "argument", frac_mod1(self.argument))
        if self.modulus <= 0:
            raise ValidationError("term moduli must be positive")

    def coefficient(self) -> complex:
        return float(self.modulus) * cmath.exp(2j * math.pi * float(self.argument))


@dataclass(frozen=True)
class LaurentPolynomial:
    terms: tuple[Term, ...]

    def __post_init__(self):
        terms = tuple(sorted(self.terms, key=lambda t: t.exponent))
        object.__setattr__(self, "terms", terms)
        exps = [t.exponent for t in terms]
        if len(set(exps)) != len(exps):
            raise ValidationError("exponents must be pairwise distinct")
        if len(terms) < 2:
            raise ValidationError("at least two terms required")

    @property
    def exponents(self):
        return [t.exponent for t in self.terms]

    def term_at(self, exponent):
        for t in self.terms:
            if t.exponent == tuple(exponent):
                return t
        return None

    def newton_edges(self):
        """Counterclockwise hull edges as (start, end) exponent pairs."""
        hull = convex_hull(self.exponents)
        if len(hull) < 3:
            if len(hull) == 2:
                return [(hull[0], hull[1]), (hull[1], hull[0])]
            raise DegenerateInput("Newton polygon is a point")
        return [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]

    def evaluate(self, x: complex, y: complex) -> complex:
        return sum(t.coefficient() * x ** t.exponent[0] * y ** t.exponent[1] for t in self.terms)

    def to_json(self):
        return {"terms": [
            {"exponent": list(t.exponent), "modulus": str(t.modulus), "argument": str(t.argument)}
            for t in self.terms
        ]}

    @classmethod
    def from_json(cls, data):
        if "polynomial" in data:
            return parse_polynomial(data["polynomial"])
        return cls(tuple(
            Term(tuple(d["exponent"]), Fraction(str(d.get("modulus", 1))), Fraction(str(d.get("argument", 0))))
            for d in data["terms"]
        ))

    def __str__(self):
        parts = []
        for t in self.terms:
            mono = []
            for var, k in zip("xy", t.exponent):
                if k == 1:
                    mono.append(var)
                elif k:
                    mono.append(f"{var}^{k}")
            coef = "" if t.modulus == 1 and t.argument == 0 else f"{t.modulus}*e({t.argument})"
            body = "*".join(([coef] if coef else []) + mono) or "1"
            parts.append(body)
        return " + ".join(parts)


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?((?:[xy](?:\^-?\d+)?\*?)*)$")


def parse_polynomial(text: str) -> LaurentPolynomial:
    """Parse sums like ``1 + x^2*y + 3*x*y^-1`` with positive rational coefficients."""
    terms = []
    for raw in text.replace(" ", "").split("+"):
        m = _TERM.match(raw)
        if not raw or not m:
            raise ValidationError(f"cannot parse term {raw!r}")
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        e = [0, 0]
        for var, k in re.findall(r"([xy])(?:\^(-?\d+))?", m.group(2)):
            e["xy".index(var)] += int(k) if k else 1
        terms.append(Term(tuple(e), coef, Fraction(0)))
    return LaurentPolynomial(tuple(terms))


class Trinomial(LaurentPolynomial):
    def __post_init__(self):
        super().__post_init__()
        if len(self.terms) != 3:
            raise ValidationError("a trinomial has exactly three terms")
        e0, e1, e2 = self.exponents
        if cross((e1[0] - e0[0], e1[1] - e0[1]), (e2[0] - e0[0], e2[1] - e0[1])) == 0:
            raise DegenerateInput("exponents are affinely dependent")

    @classmethod
    def from_polynomial(cls, w: LaurentPolynomial) -> "Trinomial":
        return cls(w.terms)

    def ordered_terms(self):
        """Lowest exponent first, the other two counterclockwise around it."""
        t0, t1, t2 = self.terms
        e0, e1, e2 = t0.exponent, t1.exponent, t2.exponent
        if cross((e1[0] - e0[0], e1[1] - e0[1]), (e2[0] - e0[0], e2[1] - e0[1])) < 0:
            t1, t2 = t2, t1
        return t0, t1, t2

    def pullback_matrix(self):
        """Rows are the exponent differences (e1 - e0, e2 - e0); positive determinant."""
        e0, e1, e2 = (t.exponent for t in self.ordered_terms())
        return ((e1[0] - e0[0], e1[1] - e0[1]), (e2[0] - e0[0], e2[1] - e0[1]))

    def pullback_point(self, theta, phi):
        """Image of (theta, phi) on the torus of the base curve 1 + X + Y."""
        t0, t1, t2 = self.ordered_terms()
        (a, b), (c, d) = self.pullback_matrix()
        return (frac_mod1(t1.argument - t0.argument + a * theta + b * phi),
                frac_mod1(t2.argument - t0.argument + c * theta + d * phi))


def _edge_normal(e):
    (x1, y1), (x2, y2) = e
    return (y2 - y1, x1 - x2)


def edge_leading_term(w: LaurentPolynomial, e) -> LaurentPolynomial:
    e = (tuple(e[0]), tuple(e[1]))
    edges = w.newton_edges()
    if e not in edges and (e[1], e[0]) not in edges:
        raise NotAnEdge(f"{e} is not an edge of the Newton polygon")
    if e not in edges:
        e = (e[1], e[0])
    n = _edge_normal(e)
    top = n[0] * e[0][0] + n[1] * e[0][1]
    return LaurentPolynomial(tuple(t for t in w.terms if n[0] * t.exponent[0] + n[1] * t.exponent[1] == top))


@dataclass(frozen=True)
class AsymptoticBoundary:
    line: TorusLine
    source_edge: tuple


def asymptotic_boundary_list(w: LaurentPolynomial) -> list[AsymptoticBoundary]:
    out = []
    for e in w.newton_edges():
        lead = edge_leading_term(w, e)
        if len(lead.terms) != 2:
            raise NonBinomialEdge(f"edge {e} carries {len(lead.terms)} terms")
        t1, t2 = lead.term_at(e[0]), lead.term_at(e[1])
        d = (e[1][0] - e[0][0], e[1][1] - e[0][1])
        g = gcd(abs(d[0]), abs(d[1]))
        slope = (d[1] // g, -d[0] // g)  # outward normal of the edge
        base = t2.argument - t1.argument + Fraction(1, 2)
        for k in range(g):
            out.append(AsymptoticBoundary(TorusLine(slope, (base + k) / g), e))
    return out


def asymptotic_boundaries(w: LaurentPolynomial) -> OrientedArrangement:
    bs = asymptotic_boundary_list(w)
    return OrientedArrangement(tuple(b.line for b in bs), tuple(b.line.slope for b in bs))


class MembershipClass(enum.Enum):
    InteriorMember = "interior"
    VertexMember = "vertex"
    NonMember = "non-member"


def _classify_gaps(psis, one):
    """Classify three angles in [0, one) by their cyclic gaps."""
    a, b, c = sorted(psis)
    gaps = sorted((b - a, c - b, one - c + a))
    if 2 * gaps[2] < one:
        return MembershipClass.InteriorMember
    if gaps[0] == 0 and 2 * gaps[1] == one and 2 * gaps[2] == one:
        return MembershipClass.VertexMember
    return MembershipClass.NonMember


def term_arguments(w: LaurentPolynomial, theta, phi):
    return [frac_mod1(t.argument + t.exponent[0] * theta + t.exponent[1] * phi) for t in w.terms]


def trinomial_membership(w: Trinomial, theta, phi) -> MembershipClass:
    return _classify_gaps(term_arguments(w, Fraction(theta), Fraction(phi)), 1)


def _lcm(*xs):
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out


def membership_grid(w: Trinomial, grid: int) -> np.ndarray:
    """Exact classes at (i/grid, j/grid) as codes 0 non, 1 interior, 2 vertex; indexed [j, i]."""
    L = _lcm(grid, *(t.argument.denominator for t in w.terms))
    s = L // grid
    i = np.arange(grid, dtype=np.int64)
    I, J = np.meshgrid(i, i)
    psi = np.stack([
        (int(t.argument * L) + s * (t.exponent[0] * I + t.exponent[1] * J)) % L for t in w.terms
    ])
    psi.sort(axis=0)
    g = np.stack([psi[1] - psi[0], psi[2] - psi[1], L - psi[2] + psi[0]])
    g.sort(axis=0)
    out = np.zeros((grid, grid), dtype=np.int8)
    out[2 * g[2] < L] = 1
    out[(g[0] == 0) & (2 * g[1] == L) & (2 * g[2] == L)] = 2
    return out


@dataclass
class CoamoebaDecomposition:
    polynomial: LaurentPolynomial
    complex: ArrangementComplex
    colored_cells: list[int]
    vertices: list[tuple[Fraction, Fraction]]

    @property
    def arrangement(self):
        return self.complex.arrangement

    def with_flipped_cell(self, cell: int) -> "CoamoebaDecomposition":
        """Negative control: swap a cell between colored and uncolored."""
        colors = list(self.complex.colors)
        colors[cell] = UNCOLORED if colors[cell] != UNCOLORED else WHITE
        cells = [k for k, c in enumerate(colors) if c != UNCOLORED]
        return replace(self, complex=replace(self.complex, colors=colors), colored_cells=cells)

    def to_json(self):
        c = self.complex
        return {
            "polynomial": self.polynomial.to_json(),
            "arrangement": self.arrangement.to_json(),
            "cells": [
                {"id": k, "color": c.colors[k], "polygon": [[str(x), str(y)] for x, y in c.cell_lift(k)]}
                for k in range(len(c.cells))
            ],
            "colored_cells": self.colored_cells,
            "vertices": [[str(x), str(y)] for x, y in self.vertices],
        }


def coamoeba_decomposition(w: Trinomial) -> CoamoebaDecomposition:
    if not isinstance(w, Trinomial):
        w = Trinomial.from_polynomial(w)
    cpx = color_cells(build_complex(asymptotic_boundaries(w)))
    ok, bad = is_admissible(cpx)
    if not ok:
        raise NotAdmissible(f"asymptotic arrangement of {w} is not admissible (edges {bad})")
    cells = [k for k, col in enumerate(cpx.colors) if col != UNCOLORED]
    return CoamoebaDecomposition(w, cpx, cells, sorted(cpx.vertices))


# -- geometric prediction ------------------------------------------------------


def _shift_range(pts, axis):
    lo = math.floor(min(p[axis] for p in pts))
    hi = math.ceil(max(p[axis] for p in pts))
    return range(lo - 1, hi + 1)


def predicted_grid(dec: CoamoebaDecomposition, grid: int) -> tuple[np.ndarray, np.ndarray]:
    """(class codes, containing colored cell or -1) at (i/grid, j/grid), indexed [j, i]."""
    c = dec.complex
    i = np.arange(grid, dtype=np.int64)
    I, J = np.meshgrid(i, i)
    on = np.zeros((grid, grid), dtype=np.int64)
    for ln in c.arrangement.lines:
        a, b = ln.slope
        cn, cd = ln.offset.numerator, ln.offset.denominator
        on += ((b * I - a * J) * cd - cn * grid) % (grid * cd) == 0
    cell = np.full((grid, grid), -1, dtype=np.int64)
    for k in dec.colored_cells:
        pts = c.cell_lift(k)
        D = _lcm(*(q.denominator for p in pts for q in p))
        P = [(int(p[0] * D) * grid, int(p[1] * D) * grid) for p in pts]
        for sx in _shift_range(pts, 0):
            for sy in _shift_range(pts, 1):
                X = (I + sx * grid) * D
                Y = (J + sy * grid) * D
                inside = np.ones((grid, grid), dtype=bool)
                for m in range(len(P)):
                    p, q = P[m], P[(m + 1) % len(P)]
                    inside &= (q[0] - p[0]) * (Y - p[1]) - (q[1] - p[1]) * (X - p[0]) > 0
                cell[inside & (on == 0)] = k
    cls = np.zeros((grid, grid), dtype=np.int8)
    cls[cell >= 0] = 1
    cls[on >= 2] = 2
    return cls, cell


def locate_samples(dec: CoamoebaDecomposition, pts, tol: float = 1e-6) -> np.ndarray:
    """Colored cell containing each point with margin ``tol``, else -1."""
    c = dec.complex
    P = np.asarray(pts, dtype=float).reshape(-1, 2)
    out = np.full(len(P), -1, dtype=np.int64)
    for k in dec.colored_cells:
        poly = [(float(p[0]), float(p[1])) for p in c.cell_lift(k)]
        for sx in _shift_range(poly, 0):
            for sy in _shift_range(poly, 1):
                X, Y = P[:, 0] + sx, P[:, 1] + sy
                inside = np.ones(len(P), dtype=bool)
                for m in range(len(poly)):
                    p, q = poly[m], poly[(m + 1) % len(poly)]
                    ex, ey = q[0] - p[0], q[1] - p[1]
                    inside &= (ex * (Y - p[1]) - ey * (X - p[0])) / math.hypot(ex, ey) > tol
                out[inside] = k
    return out


def _near_lines(lines, pts, tol):
    P = np.asarray(pts, dtype=float).reshape(-1, 2)
    near = np.zeros(len(P), dtype=bool)
    for ln in lines:
        a, b = ln.slope
        v = (b * P[:, 0] - a * P[:, 1] - float(ln.offset)) % 1.0
        near |= np.minimum(v, 1.0 - v) / math.hypot(a, b) <= tol
    return near


# -- sampling ------------------------------------------------------------------


def _lift_base(w: Trinomial, u: float, v: float):
    """All (theta, phi) whose term-argument differences equal (u, v) turns."""
    (m11, m12), (m21, m22) = w.pullback_matrix()
    det = m11 * m22 - m12 * m21
    a0, a1, a2 = (float(t.argument) for t in w.ordered_terms())
    ru, rv = u - (a1 - a0), v - (a2 - a0)
    lat = Lattice2([(m11, m21), (m12, m22)])
    out = []
    for kx, ky in lat.residues():
        bu, bv = ru + kx, rv + ky
        th = (m22 * bu - m12 * bv) / det
        ph = (-m21 * bu + m11 * bv) / det
        out.append((th % 1.0, ph % 1.0))
    return out


def _base_point(x: complex):
    y = -1 - x
    if y == 0:
        return None
    return ((cmath.phase(x) / (2 * math.pi)) % 1.0, (cmath.phase(y) / (2 * math.pi)) % 1.0)


def sample_zero_locus(w: Trinomial, n: int, seed: int = 0, x_values=None):
    """Points of the coamoeba of w from n random points of 1 + X + Y = 0.

    ``x_values`` replaces the random base points by given complex X values.
    """
    if n < 1 and x_values is None:
        raise ValidationError("n must be positive")
    if x_values is None:
        rng = random.Random(seed)
        x_values = []
        for _ in range(n):
            r = 10.0 ** rng.uniform(-3.0, 3.0)
            x_values.append(cmath.rect(r, 2 * math.pi * rng.random()))
    pts = []
    for x in x_values:
        b = _base_point(complex(x))
        if b is None:
            continue
        pts.extend(_lift_base(w, *b))
    return pts


# real X on the three intervals map to the three vertices of the base picture
VERTEX_FIBER_X = (-2.0, -0.5, 1.0)


def verify_theorem3(w: Trinomial, n: int = 10_000, grid: int = 512, seed: int = 0,
                    decomposition: CoamoebaDecomposition | None = None, tol: float = 1e-6):
    if not isinstance(w, Trinomial):
        w = Trinomial.from_polynomial(w)
    dec = decomposition or coamoeba_decomposition(w)
    lines = dec.arrangement.lines

    # (b) exact grid agreement
    actual = membership_grid(w, grid)
    predicted, _ = predicted_grid(dec, grid)
    agree = actual == predicted
    if not agree.all():
        j, i = map(int, np.argwhere(~agree)[0])
        names = {0: "NonMember", 1: "InteriorMember", 2: "VertexMember"}
        raise VerificationFailure(
            f"grid point ({i}/{grid}, {j}/{grid}) is {names[int(actual[j, i])]}, "
            f"decomposition predicts {names[int(predicted[j, i])]}",
            {"point": [f"{i}/{grid}", f"{j}/{grid}"], "actual": names[int(actual[j, i])],
             "predicted": names[int(predicted[j, i])]},
        )

    # (a) samples lie in the predicted set; (c) every colored cell is hit
    pts = sample_zero_locus(w, n, seed)
    where = locate_samples(dec, pts, tol)
    near = _near_lines(lines, pts, tol)
    stray = np.flatnonzero((where < 0) & ~near)
    if len(stray):
        pt = pts[int(stray[0])]
        raise VerificationFailure(f"sample {pt} lies outside the predicted coamoeba",
                                  {"sample": list(pt)})
    near_boundary = int(((where < 0) & near).sum())
    hits = {k: int((where == k).sum()) for k in dec.colored_cells}
    missed = [k for k, v in hits.items() if v == 0]
    if missed:
        raise VerificationFailure(f"colored cells {missed} received no sample", {"cells": missed})

    # vertex fibers: real base points land exactly on arrangement vertices
    fiber = sample_zero_locus(w, 1, x_values=VERTEX_FIBER_X)
    vset = [(float(x), float(y)) for x, y in dec.vertices]
    fiber_hits = set()
    for pt in fiber:
        best = min(range(len(vset)), key=lambda m: _torus_dist(vset[m], pt))
        if _torus_dist(vset[best], pt) > tol:
            raise VerificationFailure(f"vertex-fiber sample {pt} is not at a predicted vertex",
                                      {"sample": list(pt)})
        fiber_hits.add(best)
    if len(fiber_hits) != len(vset):
        raise VerificationFailure("some predicted vertex has no fiber sample",
                                  {"missing": sorted(set(range(len(vset))) - fiber_hits)})

    return {
        "polynomial": str(w),
        "pass": True,
        "colored_cells": len(dec.colored_cells),
        "white_cells": sum(dec.complex.colors[k] == WHITE for k in dec.colored_cells),
        "black_cells": sum(dec.complex.colors[k] == BLACK for k in dec.colored_cells),
        "vertices": [[str(x), str(y)] for x, y in dec.vertices],
        "grid": grid,
        "grid_points": grid * grid,
        "grid_agreement": float(agree.mean()),
        "grid_counts": {name: int((actual == code).sum())
                        for code, name in ((0, "NonMember"), (1, "InteriorMember"), (2, "VertexMember"))},
        "samples": len(pts),
        "samples_in_cells": len(pts) - near_boundary,
        "samples_near_boundary": near_boundary,
        "cell_hits": {str(k): v for k, v in sorted(hits.items())},
        "vertex_fibers_hit": len(fiber_hits),
        "seed": seed,
    }


def _torus_dist(p, q):
    dx = abs(p[0] - q[0]) % 1.0
    dy = abs(p[1] - q[1]) % 1.0
    return math.hypot(min(dx, 1 - dx), min(dy, 1 - dy))
