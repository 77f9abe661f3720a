"""Self-check suite behind ``qsyncgeom verify``.

Each check returns a status and a one-line detail; an exception inside a
check counts as a failure and is reported under the check's name.
"""

from __future__ import annotations

import time
import traceback
from dataclasses import dataclass, field
from typing import Callable

from .algebra import PRIMITIVE_POLYS, BitPoly, MAX_FIELD_DEGREE, divides, is_primitive, primitive_poly
from .codes import CyclicCode, bch_bound, contains_word, is_dual_containing, is_subcode, min_distance, rank_gf2
from .geomcodes import (
    code_params,
    dual_dimension_check,
    geometry_code,
    index_set,
    root_minimal_polynomial,
)
from .geometry import (
    Family,
    build_model,
    complement_vector,
    enumerate_flats,
    eg_min_weight_support,
    incidence_vector,
    pg_min_weight_support,
    point_count,
)
from .qsync import (
    QsyncSpec,
    assert_max_tolerance,
    build_qsync,
    check_witness_exponents,
    closed_form_bit,
    closed_form_phase,
    format_row,
    qsync_row,
)
from .tables import EXPECTED, compute_row

QUICK_MAX_N = 1023
STRUCTURE_MAX_N = 1 << 16
RANK_MAX_N = 341
PG_WITNESS_MAX_N = 5461
SAMPLED_FLATS = 40


@dataclass
class Check:
    name: str
    status: str  # "pass" | "fail"
    detail: str = ""
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail, "elapsed_ms": round(self.elapsed_ms, 1)}


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def exit_status(self) -> int:
        return 0 if all(c.status == "pass" for c in self.checks) else 1

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status != "pass"]

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks], "exit_status": self.exit_status}

    def format_text(self) -> str:
        lines = [f"{c.status.upper():4}  {c.name}  {c.detail}".rstrip() for c in self.checks]
        lines.append(f"{len(self.checks) - len(self.failed)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def geometries(limit: int) -> list[tuple[Family, int, int]]:
    """All (family, m, h) with m >= 2 and length at most ``limit``."""
    out = []
    for fam in Family:
        for h in range(1, MAX_FIELD_DEGREE + 1):
            m = 2
            while point_count(fam, m, h) <= limit:
                out.append((fam, m, h))
                m += 1
    return sorted(out)


def qsync_specs(limit: int) -> list[QsyncSpec]:
    specs = []
    for fam, m, h in geometries(limit):
        for ti in range((m + 2) // 2, m):
            for to in range(ti + 1, m):
                specs.append(QsyncSpec(fam, m, h, ti, to))
    return specs


class _Suite:
    def __init__(self, limit: int, seed: int, expected, overrides: dict[int, int] | None):
        self.limit = limit
        self.seed = seed
        self.expected = expected
        self.overrides = overrides or {}

    def rows(self, family: Family, cap: int | None = None):
        cap = min(self.limit, cap) if cap else self.limit
        return [
            (key, vals)
            for key, vals in sorted(self.expected[family].items())
            if point_count(family, key[0], key[1]) <= cap
        ]

    # -- individual checks -------------------------------------------------

    def primitive_polys(self):
        bad = [e for e in range(1, MAX_FIELD_DEGREE + 1) if not is_primitive(primitive_poly(e))]
        if bad:
            return False, f"non-primitive modulus for degree(s) {bad}"
        changed = sorted(e for e in self.overrides if self.overrides[e] != PRIMITIVE_POLYS[e])
        return True, f"{MAX_FIELD_DEGREE} degrees primitive; overridden: {changed or 'none'}"

    def _table(self, family: Family):
        rows = self.rows(family)
        bad = []
        for key, vals in rows:
            got = compute_row(family, *key, with_generator=True).values()
            if got != tuple(vals):
                bad.append(f"{key}: computed {got}, expected {tuple(vals)}")
        if bad:
            return False, "; ".join(bad)
        return True, f"{len(rows)} rows match (rank formula, zero count and deg g agree)"

    def table_pg(self):
        return self._table(Family.PG)

    def table_eg(self):
        return self._table(Family.EG)

    def distance_exhaustive(self):
        out = []
        for t, want, strategy in ((2, 7, "exhaustive"), (3, 3, "bounds")):
            rep = min_distance(geometry_code(Family.PG, 4, 1, t), strategy=strategy)
            if not rep.certified or rep.value != want:
                return False, f"PG(4,2) t={t}: {rep.to_json()}"
            out.append(f"[31,{31 - geometry_code(Family.PG, 4, 1, t).g.degree}]={rep.value} via {rep.method}")
        return True, ", ".join(out)

    def distance_eg_witness(self):
        rows = self.rows(Family.EG, STRUCTURE_MAX_N)
        for (m, h, t), (n, k, d) in rows:
            code = geometry_code(Family.EG, m, h, t)
            w = eg_min_weight_support(build_model(Family.EG, m, h), t)
            if w.weight != d or not contains_word(code, w) or bch_bound(code.roots, n) != d:
                return False, f"EG{(m, h, t)}: witness weight {w.weight}, BCH {bch_bound(code.roots, n)}, d {d}"
            rep = min_distance(code, witness=w)
            if not (rep.certified and rep.value == d):
                return False, f"EG{(m, h, t)}: {rep.to_json()}"
        return True, f"{len(rows)} rows certified by BCH bound meeting witness weight"

    def distance_pg_witness(self):
        rows = self.rows(Family.PG, PG_WITNESS_MAX_N)
        for (m, h, t), (n, k, d) in rows:
            code = geometry_code(Family.PG, m, h, t)
            w = pg_min_weight_support(build_model(Family.PG, m, h), t)
            if w.weight != d or not contains_word(code, w):
                return False, f"PG{(m, h, t)}: witness weight {w.weight} (d={d}), codeword={contains_word(code, w)}"
        return True, f"{len(rows)} rows have a codeword of weight d"

    def incidence_rank(self):
        rows = self.rows(Family.PG, RANK_MAX_N)
        for (m, h, t), (n, k, d) in rows:
            model = build_model(Family.PG, m, h)
            vecs = [incidence_vector(f) for f in enumerate_flats(model, t)]
            total = 0
            for v in vecs:
                total ^= v.bits
            if total != (1 << n) - 1:
                return False, f"PG{(m, h, t)}: flats do not sum to the all-one vector"
            r = rank_gf2([complement_vector(v).bits for v in vecs], n)
            if r != n - k:
                return False, f"PG{(m, h, t)}: complement rank {r} != n-k = {n - k}"
        return True, f"{len(rows)} rows: complement rank = n-k"

    def dual_dimension(self):
        rows = [r for r in self.rows(Family.EG) if r[0][2] <= r[0][0] - 2]
        for (m, h, t), _ in rows:
            rep = dual_dimension_check(m, h, t)
            if not rep.ok:
                return False, f"EG{(m, h, t)}: {rep}"
        return True, f"{len(rows)} rows consistent"

    def dual_containing(self):
        count = 0
        for fam, m, h in geometries(min(self.limit, STRUCTURE_MAX_N)):
            for t in range((m + 2) // 2, m):
                code = geometry_code(fam, m, h, t)
                res = {meth: is_dual_containing(code, meth) for meth in ("matrix", "poly", "roots")}
                if not all(res.values()):
                    return False, f"{fam.value}{(m, h, t)}: {res}"
                count += 1
        return True, f"{count} codes dual-containing by all three routes"

    def nesting(self):
        count = 0
        for fam, m, h in geometries(min(self.limit, STRUCTURE_MAX_N)):
            chain = [geometry_code(fam, m, h, t) for t in range(1, m)]
            for a, b in zip(chain, chain[1:]):
                if not is_subcode(a, b) or a.g == b.g:
                    return False, f"{fam.value}{(m, h)}: chain not strictly nested"
                count += 1
        return True, f"{count} adjacent pairs strictly nested"

    def corrupted_generator(self):
        fam, m, h, t = Family.PG, 5, 1, 3
        inner = geometry_code(fam, m, h, t)
        outer = geometry_code(fam, m, h, t + 1)
        j = next(iter(inner.roots))
        bad_factor = root_minimal_polynomial(fam, m, h, -j)
        bad = CyclicCode(inner.n, inner.g * bad_factor)
        bad_outer = CyclicCode(outer.n, outer.g * bad_factor)
        results = {
            "matrix": is_dual_containing(bad, "matrix"),
            "poly": is_dual_containing(bad, "poly"),
            "nesting": is_subcode(inner, bad_outer),
        }
        if any(results.values()):
            return False, f"corrupted generator was accepted: {results}"
        return True, "corrupted generator rejected by both dual checks and the nesting check"

    def qsync_order(self):
        specs = qsync_specs(min(self.limit, STRUCTURE_MAX_N))
        for s in specs:
            p = build_qsync(s)
            if not assert_max_tolerance(p):
                return False, f"{s}: ord f = {p.ord_f} != n = {p.n}"
        return True, f"{len(specs)} pairs reach ord f = n"

    def qsync_witness_exponents(self):
        # For EG with h = 1 the second exponent already lies in the outer
        # zero set, so the argument (not the conclusion) breaks down there.
        specs = [
            s for s in qsync_specs(min(self.limit, STRUCTURE_MAX_N))
            if not (s.family is Family.EG and s.h == 1)
        ]
        bad = [s for s in specs if not check_witness_exponents(s)]
        if bad:
            return False, f"witness exponents missing for {bad[:3]}"
        return True, f"{len(specs)} pairs (EG with h=1 excluded)"

    def qsync_rows(self):
        want = {
            (Family.PG, 5, 2, 3, 4): "[[1365+a,763]] a<1365 phase=10 bit=2",
            (Family.EG, 5, 2, 3, 4): "[[1023+a,473]] a<1023 phase=11 bit=2",
        }
        done = []
        for key, text in want.items():
            if point_count(key[0], key[1], key[2]) > self.limit:
                continue
            got = format_row(qsync_row(QsyncSpec(*key)))
            if got != text:
                return False, f"{key}: {got!r} != {text!r}"
            done.append(got)
        return True, "; ".join(done) or "no rows within limit"

    def closed_forms(self):
        count = 0
        for fam, m, h in geometries(min(self.limit, STRUCTURE_MAX_N)):
            for t in range((m + 2) // 2, m - 1):
                d1 = code_params(fam, m, h, t).d
                d2 = code_params(fam, m, h, t + 1).d
                if closed_form_phase(fam, m, h, t) != (d1 - 1) // 2 or closed_form_bit(fam, m, h, t) != (d2 - 1) // 2:
                    return False, f"{fam.value}{(m, h, t)}"
                count += 1
        return True, f"{count} parameter sets"

    def binary_coincidence(self):
        # E(m, t, 2) matches C(m-1, t-1, 2); the unshifted pairing does not hold
        count = 0
        for m in range(3, 8):
            for t in range(2, m):
                e = code_params(Family.EG, m, 1, t).as_tuple()
                c = code_params(Family.PG, m - 1, 1, t - 1).as_tuple()
                if e != c:
                    return False, f"E({m},{t},2) = {e} but C({m - 1},{t - 1},2) = {c}"
                count += 1
        return True, f"{count} pairs E(m,t,2) = C(m-1,t-1,2)"

    def sampled_flats(self):
        count = 0
        for fam in Family:
            rows = self.rows(fam)
            if not rows:
                continue
            (m, h, t), _ = rows[-1]
            code = geometry_code(fam, m, h, t)
            dual_g = code.dual_generator
            model = build_model(fam, m, h)
            for flat in enumerate_flats(model, t, "sample", count=SAMPLED_FLATS, seed=self.seed):
                v = incidence_vector(flat)
                if fam is Family.PG:
                    v = complement_vector(v)
                if not divides(dual_g, BitPoly(v.bits)):
                    return False, f"{fam.value}{(m, h, t)}: sampled flat {flat.to_json()} outside the dual"
                count += 1
        return True, f"{count} sampled flats lie in the dual code (seed {self.seed})"


QUICK_CHECKS = [
    ("primitive-polynomials", "primitive_polys"),
    ("table-pg", "table_pg"),
    ("table-eg", "table_eg"),
    ("distance-exhaustive", "distance_exhaustive"),
    ("distance-eg-witness", "distance_eg_witness"),
    ("distance-pg-witness", "distance_pg_witness"),
    ("incidence-rank", "incidence_rank"),
    ("eg-dual-dimension", "dual_dimension"),
    ("dual-containing", "dual_containing"),
    ("nesting", "nesting"),
    ("corrupted-generator", "corrupted_generator"),
    ("order-maximal", "qsync_order"),
    ("witness-exponents", "qsync_witness_exponents"),
    ("qsync-rows", "qsync_rows"),
    ("closed-forms", "closed_forms"),
    ("binary-coincidence", "binary_coincidence"),
    ("sampled-flats", "sampled_flats"),
]


def run_verify(
    level: str = "quick",
    *,
    max_n: int = 1 << 21,
    seed: int = 0,
    expected=None,
    overrides: dict[int, int] | None = None,
    progress: Callable[[Check], None] | None = None,
) -> VerifyReport:
    """Run every check with lengths up to 1023 (quick) or ``max_n`` (full)."""
    if level not in ("quick", "full"):
        raise ValueError(f"unknown level {level!r}")
    limit = QUICK_MAX_N if level == "quick" else max_n
    suite = _Suite(limit, seed, expected or EXPECTED, overrides)
    report = VerifyReport()
    for name, attr in QUICK_CHECKS:
        start = time.perf_counter()
        try:
            ok, detail = getattr(suite, attr)()
        except Exception as exc:  # noqa: BLE001 - every failure is reported, not raised
            ok = False
            detail = f"{type(exc).__name__}: {exc}"
            last = traceback.extract_tb(exc.__traceback__)[-1]
            detail += f" (at {last.name}:{last.lineno})"
        check = Check(name, "pass" if ok else "fail", detail, (time.perf_counter() - start) * 1e3)
        report.checks.append(check)
        if progress:
            progress(check)
    return report
