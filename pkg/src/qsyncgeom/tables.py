"""Reference parameter tables for the PG and EG code families.

Only the row keys (m, h, t) drive table generation; every n, k, d printed
is recomputed.  ``EXPECTED`` holds the reference values and is consulted
solely by the verification suite and the tests.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .algebra import InvariantViolation, format_hex
from .geomcodes import code_params, generator_poly, index_set
from .geometry import Family, point_count

DEFAULT_MAX_N = 1 << 21
HARD_MAX_N = 1 << 25
GENPOLY_JSON_MAX_N = 1 << 12

EXPECTED: dict[Family, dict[tuple[int, int, int], tuple[int, int, int]]] = {
    Family.PG: {
        (4, 1, 2): (31, 16, 7),
        (4, 1, 3): (31, 26, 3),
        (4, 2, 2): (341, 196, 21),
        (4, 2, 3): (341, 316, 5),
        (4, 3, 2): (4681, 3106, 73),
        (4, 3, 3): (4681, 4556, 9),
        (5, 1, 3): (63, 42, 7),
        (5, 1, 4): (63, 57, 3),
        (5, 2, 3): (1365, 1064, 21),
        (5, 2, 4): (1365, 1329, 5),
        (5, 3, 3): (37449, 32598, 73),
        (5, 3, 4): (37449, 37233, 9),
        (6, 1, 3): (127, 64, 15),
        (6, 1, 4): (127, 99, 7),
        (6, 1, 5): (127, 120, 3),
        (6, 2, 3): (5461, 3186, 85),
        (6, 2, 4): (5461, 4901, 21),
        (6, 2, 5): (5461, 5412, 5),
        (7, 1, 4): (255, 163, 15),
        (7, 1, 5): (255, 219, 7),
        (7, 1, 6): (255, 247, 3),
        (7, 2, 4): (21845, 16629, 85),
        (7, 2, 5): (21845, 20885, 21),
        (7, 2, 6): (21845, 21781, 5),
        (8, 1, 4): (511, 256, 31),
        (8, 1, 5): (511, 382, 15),
        (8, 1, 6): (511, 466, 7),
        (8, 1, 7): (511, 502, 3),
        (8, 2, 4): (87381, 51396, 341),
        (8, 2, 5): (87381, 76512, 85),
        (8, 2, 6): (87381, 85836, 21),
        (8, 2, 7): (87381, 87300, 5),
    },
    Family.EG: {
        (5, 2, 3): (1023, 748, 23),
        (5, 2, 4): (1023, 988, 5),
        (5, 3, 3): (32767, 28042, 79),
        (5, 3, 4): (32767, 32552, 9),
        (6, 2, 4): (4095, 3572, 23),
        (6, 2, 5): (4095, 4047, 5),
        (6, 3, 4): (262143, 249816, 79),
        (6, 3, 5): (262143, 261801, 9),
        (6, 4, 4): (16777215, 16490000, 287),
        (6, 4, 5): (16777215, 16774815, 17),
        (7, 2, 4): (16383, 11728, 95),
        (7, 2, 5): (16383, 15473, 23),
        (7, 2, 6): (16383, 16320, 5),
        (7, 3, 4): (2097151, 1763104, 639),
        (7, 3, 5): (2097151, 2068983, 79),
        (7, 3, 6): (2097151, 2096640, 9),
        (8, 2, 5): (65535, 55627, 95),
        (8, 2, 6): (65535, 64055, 23),
        (8, 2, 7): (65535, 65455, 5),
        (8, 3, 5): (16777215, 15742657, 639),
        (8, 3, 6): (16777215, 16719003, 79),
        (8, 3, 7): (16777215, 16776487, 9),
        (9, 2, 5): (262143, 184848, 383),
        (9, 2, 6): (262143, 242724, 95),
        (9, 2, 7): (262143, 259860, 23),
        (9, 2, 8): (262143, 262044, 5),
    },
}


def table_keys(family: Family | str) -> list[tuple[int, int, int]]:
    return sorted(EXPECTED[Family.parse(family)])


@dataclass(frozen=True)
class TableRow:
    family: str
    m: int
    h: int
    t: int
    n: int
    k: int
    d: int
    genpoly_hex: str | None = None

    def key(self) -> tuple[int, int, int]:
        return self.m, self.h, self.t

    def values(self) -> tuple[int, int, int]:
        return self.n, self.k, self.d

    def to_json(self) -> dict:
        out = asdict(self)
        if out["genpoly_hex"] is None:
            del out["genpoly_hex"]
        return out


def compute_row(
    family: Family | str,
    m: int,
    h: int,
    t: int,
    *,
    with_generator: bool = False,
    genpoly_max_n: int = GENPOLY_JSON_MAX_N,
) -> TableRow:
    """Parameters from the closed forms, with k cross-checked by the zero count.

    With ``with_generator`` the generator polynomial is built as well and its
    degree must give the same k.
    """
    fam = Family.parse(family)
    params = code_params(fam, m, h, t)
    k_roots = params.n - len(index_set(fam, m, h, t))
    if k_roots != params.k:
        raise InvariantViolation(f"{fam.value}{(m, h, t)}: k from rank formula {params.k} != {k_roots} from zeros")
    hex_g = None
    if with_generator:
        g = generator_poly(fam, m, h, t)
        if params.n - g.degree != params.k:
            raise InvariantViolation(f"{fam.value}{(m, h, t)}: deg g gives k = {params.n - g.degree}")
        if params.n <= genpoly_max_n:
            hex_g = format_hex(g)
    return TableRow(fam.value, m, h, t, params.n, params.k, params.d, hex_g)


def _compute(args) -> TableRow:
    fam, key, with_generator = args
    return compute_row(fam, *key, with_generator=with_generator)


def table_rows(
    family: Family | str,
    max_n: int = DEFAULT_MAX_N,
    include_huge: bool = False,
    *,
    with_generator: bool = False,
    workers: int = 1,
) -> tuple[list[TableRow], list[tuple[int, int, int]]]:
    """Rows of the reference table within the size limits, plus the skipped keys.

    Rows are returned in (m, h, t) order regardless of ``workers``.
    """
    fam = Family.parse(family)
    if max_n > HARD_MAX_N:
        raise ValueError(f"max_n={max_n} exceeds {HARD_MAX_N}")
    limit = HARD_MAX_N if include_huge else max_n
    keep, skipped = [], []
    for key in table_keys(fam):
        (keep if point_count(fam, key[0], key[1]) <= limit else skipped).append(key)
    jobs = [(fam, key, with_generator) for key in keep]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_compute, jobs))
    else:
        rows = [_compute(j) for j in jobs]
    rows.sort(key=TableRow.key)
    return rows, skipped


CSV_FIELDS = ("family", "m", "h", "t", "n", "k", "d")


def format_csv(rows: list[TableRow], header: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([getattr(r, f) for f in CSV_FIELDS])
    return buf.getvalue()


def format_json(rows: list[TableRow]) -> str:
    return json.dumps([r.to_json() for r in rows], indent=1, sort_keys=True) + "\n"


def note_skipped(family: Family | str, skipped: list[tuple[int, int, int]], stream=None) -> None:
    stream = stream or sys.stderr
    fam = Family.parse(family)
    for m, h, t in skipped:
        n = point_count(fam, m, h)
        print(f"skipped {fam.value} row m={m} h={h} t={t} (n={n} above --max-n; use --include-huge)", file=stream)
