"""Partial latin squares: validation, parastrophy, canonical species keys, enumeration.

A partial latin square (PLS) is stored as a set of (row, col, sym) triples in
which no two triples agree on two coordinates.  By convention every row,
column and symbol id actually occurs, so ids are dense (1..k in each
coordinate).  Unused symbol ids are likewise forbidden; ``validate_pls``
relabels everything densely in first-appearance order.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, NamedTuple, Optional, Sequence


class LatinConflict(ValueError):
    """Two triples collide on a coordinate pair (row+col, row+sym or col+sym)."""

    def __init__(self, pair: tuple[str, str], first: "Triple", second: "Triple"):
        self.pair = pair
        self.first = first
        self.second = second
        super().__init__(
            f"{pair[0]}/{pair[1]} conflict between {tuple(first)} and {tuple(second)}"
        )


class EmptyInput(ValueError):
    """A PLS needs at least one filled cell."""


class SizeLimitExceeded(ValueError):
    """Requested size is beyond the supported enumeration bound."""


class ParameterOutOfRange(ValueError):
    """Constructor parameter outside its documented range."""


class Triple(NamedTuple):
    row: int
    col: int
    sym: int


@dataclass(frozen=True)
class PLS:
    """A partial latin square as a sorted tuple of dense 1-based triples.

    Construct via :func:`validate_pls` (or the generators below); the raw
    constructor performs no checking.
    """

    triples: tuple[Triple, ...]
    n_rows: int
    n_cols: int
    n_syms: int

    @property
    def size(self) -> int:
        return len(self.triples)

    @property
    def order(self) -> int:
        return max(self.n_rows, self.n_cols, self.n_syms)

    def cell_map(self) -> dict[tuple[int, int], int]:
        return {(t.row, t.col): t.sym for t in self.triples}

    def row_ids(self) -> range:
        return range(1, self.n_rows + 1)

    def __str__(self) -> str:
        return format_grid(self)


def validate_pls(triples: Iterable[Sequence[int]]) -> PLS:
    """Validate triples and return the densely relabelled PLS.

    Ids are relabelled 1..k per coordinate in order of first appearance in the
    input sequence, which makes encodings of hard-coded squares deterministic.
    Rejects duplicate cells and latin violations.
    """
    raw = [Triple(int(t[0]), int(t[1]), int(t[2])) for t in triples]
    if not raw:
        raise EmptyInput("a PLS must contain at least one triple")
    for t in raw:
        if t.row < 1 or t.col < 1 or t.sym < 1:
            raise ValueError(f"triple ids must be >= 1, got {tuple(t)}")
    by_rc: dict[tuple[int, int], Triple] = {}
    by_rs: dict[tuple[int, int], Triple] = {}
    by_cs: dict[tuple[int, int], Triple] = {}
    for t in raw:
        if (t.row, t.col) in by_rc:
            raise LatinConflict(("row", "col"), by_rc[(t.row, t.col)], t)
        if (t.row, t.sym) in by_rs:
            raise LatinConflict(("row", "sym"), by_rs[(t.row, t.sym)], t)
        if (t.col, t.sym) in by_cs:
            raise LatinConflict(("col", "sym"), by_cs[(t.col, t.sym)], t)
        by_rc[(t.row, t.col)] = t
        by_rs[(t.row, t.sym)] = t
        by_cs[(t.col, t.sym)] = t
    rmap: dict[int, int] = {}
    cmap: dict[int, int] = {}
    smap: dict[int, int] = {}
    for t in raw:
        rmap.setdefault(t.row, len(rmap) + 1)
        cmap.setdefault(t.col, len(cmap) + 1)
        smap.setdefault(t.sym, len(smap) + 1)
    relabelled = tuple(
        sorted(Triple(rmap[t.row], cmap[t.col], smap[t.sym]) for t in raw)
    )
    return PLS(relabelled, len(rmap), len(cmap), len(smap))


# ---------------------------------------------------------------------------
# Parastrophy: the symmetric-group action permuting the three coordinate roles.


@dataclass(frozen=True, order=True)
class Parastrophe:
    """A permutation of the coordinate roles (row, col, sym).

    ``perm=(p0,p1,p2)`` sends a triple t to (t[p0], t[p1], t[p2]).
    """

    perm: tuple[int, int, int]

    def apply(self, t: Sequence[int]) -> Triple:
        p = self.perm
        return Triple(t[p[0]], t[p[1]], t[p[2]])

    def __mul__(self, other: "Parastrophe") -> "Parastrophe":
        # composition: self applied after other
        p, q = self.perm, other.perm
        return Parastrophe((q[p[0]], q[p[1]], q[p[2]]))

    @property
    def is_identity(self) -> bool:
        return self.perm == (0, 1, 2)


IDENTITY_PARASTROPHE = Parastrophe((0, 1, 2))
TRANSPOSE = Parastrophe((1, 0, 2))
#: all six parastrophes in fixed (lexicographic) order; used wherever a
#: deterministic scan order is required.
ALL_PARASTROPHES: tuple[Parastrophe, ...] = tuple(
    Parastrophe(p) for p in sorted(permutations((0, 1, 2)))
)


def parastrophe(p: PLS, sigma: Parastrophe) -> PLS:
    """Apply sigma to every triple of p.  Labels stay dense, so no revalidation."""
    counts = (p.n_rows, p.n_cols, p.n_syms)
    q = sigma.perm
    return PLS(
        tuple(sorted(sigma.apply(t) for t in p.triples)),
        counts[q[0]],
        counts[q[1]],
        counts[q[2]],
    )


# ---------------------------------------------------------------------------
# Canonical species form.
#
# The species of a PLS is its orbit under relabelling each coordinate
# independently combined with parastrophy.  The key is the lexicographically
# least sorted-triple encoding over the whole orbit.  The minimum is attained
# by a labelling that is in first-appearance order along the sorted encoding
# (relabelling the first violation with a swap gives a smaller encoding), so a
# branch-and-bound over "which triple comes next" with first-appearance label
# assignment is exhaustive.


@dataclass(frozen=True, order=True)
class SpeciesKey:
    """Canonical byte encoding of a species: the minimal flattened triple list."""

    blob: bytes

    def to_pls(self) -> PLS:
        b = self.blob
        return validate_pls(
            [(b[i], b[i + 1], b[i + 2]) for i in range(0, len(b), 3)]
        )

    def hex(self) -> str:
        return self.blob.hex()

    @classmethod
    def from_hex(cls, text: str) -> "SpeciesKey":
        return cls(bytes.fromhex(text))

    @property
    def size(self) -> int:
        return len(self.blob) // 3


def canonical_form(p: PLS) -> SpeciesKey:
    """Species key of p: minimal encoding over all 6 parastrophes x relabellings."""
    return SpeciesKey(_canonical_blob(p.triples))


_PERMS = tuple(sorted(permutations((0, 1, 2))))


@lru_cache(maxsize=1 << 18)
def _canonical_blob(triples: tuple[Triple, ...]) -> bytes:
    best: Optional[tuple] = None
    for p in _PERMS:
        image = tuple(sorted((t[p[0]], t[p[1]], t[p[2]]) for t in triples))
        best = _min_relabelling(image, best)
    assert best is not None
    return b"".join(bytes(t) for t in best)


def _min_relabelling(triples: tuple, best: Optional[tuple]) -> tuple:
    """Lexicographically least sorted encoding of `triples` under relabelling.

    Seeded with (and compared against) `best` so callers can share the bound
    across parastrophe images.
    """
    rmap: dict[int, int] = {}
    cmap: dict[int, int] = {}
    smap: dict[int, int] = {}
    acc: list[tuple[int, int, int]] = []

    def rec(remaining: list) -> None:
        nonlocal best
        if not remaining:
            cand = tuple(acc)
            if best is None or cand < best:
                best = cand
            return
        pos = len(acc)
        tight = False
        if best is not None:
            prefix = best[:pos]
            acc_t = tuple(acc)
            if acc_t > prefix:
                return
            tight = acc_t == prefix
        nr = len(rmap) + 1
        nc = len(cmap) + 1
        ns = len(smap) + 1
        mint = None
        cands: list[int] = []
        for i, t in enumerate(remaining):
            lab = (rmap.get(t[0], nr), cmap.get(t[1], nc), smap.get(t[2], ns))
            if mint is None or lab < mint:
                mint = lab
                cands = [i]
            elif lab == mint:
                cands.append(i)
        if tight and mint > best[pos]:
            return
        acc.append(mint)  # type: ignore[arg-type]
        for i in cands:
            r, c, s = remaining[i]
            add_r = r not in rmap
            add_c = c not in cmap
            add_s = s not in smap
            if add_r:
                rmap[r] = nr
            if add_c:
                cmap[c] = nc
            if add_s:
                smap[s] = ns
            rec(remaining[:i] + remaining[i + 1 :])
            if add_r:
                del rmap[r]
            if add_c:
                del cmap[c]
            if add_s:
                del smap[s]
        acc.pop()

    rec(list(triples))
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Isomorph-free enumeration of species by size.
#
# A size-m PLS minus any triple is (after dense relabelling) a size-(m-1) PLS,
# and the deleted triple sits inside the bounding box grown by one in each
# dimension.  Augmenting every size-(m-1) representative over that box is
# therefore exhaustive; canonical keys deduplicate.

_species_lock = threading.Lock()
_species_levels: list[list[PLS]] = []

MAX_ENUM_SIZE = 8


def enumerate_species(max_size: int) -> dict[int, list[PLS]]:
    """One canonical representative per species, for each size 1..max_size.

    Representatives are the decoded canonical forms, sorted by species key.
    Levels are cached for the lifetime of the process.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    if max_size > MAX_ENUM_SIZE:
        raise SizeLimitExceeded(
            f"species enumeration is capped at size {MAX_ENUM_SIZE}, got {max_size}"
        )
    return {m: list(_species_level(m)) for m in range(1, max_size + 1)}


def _species_level(m: int) -> list[PLS]:
    with _species_lock:
        while len(_species_levels) < m:
            nxt = len(_species_levels) + 1
            if nxt == 1:
                level = [validate_pls([(1, 1, 1)])]
            else:
                keys: set[bytes] = set()
                for parent in _species_levels[-1]:
                    for cand in _extensions(parent):
                        keys.add(_canonical_blob(cand.triples))
                level = [SpeciesKey(b).to_pls() for b in sorted(keys)]
            _species_levels.append(level)
    return _species_levels[m - 1]


def _extensions(p: PLS):
    by_rc = {(t.row, t.col) for t in p.triples}
    by_rs = {(t.row, t.sym) for t in p.triples}
    by_cs = {(t.col, t.sym) for t in p.triples}
    base = p.triples
    for r in range(1, p.n_rows + 2):
        for c in range(1, p.n_cols + 2):
            if (r, c) in by_rc:
                continue
            for s in range(1, p.n_syms + 2):
                if (r, s) in by_rs or (c, s) in by_cs:
                    continue
                yield PLS(
                    tuple(sorted(base + (Triple(r, c, s),))),
                    max(p.n_rows, r),
                    max(p.n_cols, c),
                    max(p.n_syms, s),
                )


def sub_species_contains(p: PLS, q: PLS) -> bool:
    """True iff some subset of p's triples, as a PLS, lies in q's species."""
    if q.size > p.size:
        return False
    target = _canonical_blob(q.triples)
    for subset in combinations(p.triples, q.size):
        sub = validate_pls(sorted(subset))
        if _canonical_blob(sub.triples) == target:
            return True
    return False


# ---------------------------------------------------------------------------
# Named PLS families.


def gen_evans(n: int, a: int) -> PLS:
    """Size-n square: row 1 holds symbols 1..a, then column n holds a+1..n.

    The cell (1, n) cannot be filled by any of the n symbols, so the square
    never embeds in a group (or quasigroup) of order exactly n.
    """
    if n < 2 or not 1 <= a < n:
        raise ParameterOutOfRange(f"need n >= 2 and 1 <= a < n, got n={n}, a={a}")
    cells = [(1, i, i) for i in range(1, a + 1)]
    cells += [(i, n, i) for i in range(a + 1, n + 1)]
    return validate_pls(cells)


def gen_diagonal(t: int) -> PLS:
    """Diagonal square with t distinct symbols: cell (i, i) = i."""
    if t < 1:
        raise ParameterOutOfRange(f"need t >= 1, got {t}")
    return validate_pls([(i, i, i) for i in range(1, t + 1)])


def gen_row_cycle(length: int) -> PLS:
    """Two-row square whose second row is the first shifted cyclically by one.

    Embedding it forces an element of order `length`, so it only fits groups
    whose order `length` divides.
    """
    if length < 2:
        raise ParameterOutOfRange(f"need length >= 2, got {length}")
    cells = [(1, j, j) for j in range(1, length + 1)]
    cells += [(2, j, j % length + 1) for j in range(1, length + 1)]
    return validate_pls(cells)


def gen_delta(n: int) -> PLS:
    """Diagonal square of size n with one symbol on cells 1..3, another on 4..n."""
    if n < 4:
        raise ParameterOutOfRange(f"need n >= 4, got {n}")
    cells = [(i, i, 1) for i in range(1, 4)]
    cells += [(i, i, 2) for i in range(4, n + 1)]
    return validate_pls(cells)


@lru_cache(maxsize=64)
def _row_cycle_blob(length: int) -> bytes:
    return _canonical_blob(gen_row_cycle(length).triples)


def row_cycle_length(p: PLS) -> Optional[int]:
    """The length l if p is in the species of the l-cycle two-row square."""
    if p.size % 2 or p.size < 4:
        return None
    length = p.size // 2
    if _canonical_blob(p.triples) == _row_cycle_blob(length):
        return length
    return None


def is_t_species(p: PLS) -> bool:
    """True iff no two triples of p share any coordinate (pure diagonal shape)."""
    return p.n_rows == p.n_cols == p.n_syms == p.size


# ---------------------------------------------------------------------------
# Text formats.  Two interchangeable formats are supported:
#   triple list -- one "r c s" per line, 1-based integers;
#   grid        -- one line per row, '.' for empty cells, alphanumeric symbol
#                  tokens otherwise.
# Round-tripping either format preserves the species.


def format_triples(p: PLS) -> str:
    return "\n".join(f"{t.row} {t.col} {t.sym}" for t in p.triples) + "\n"


def parse_triples(text: str) -> PLS:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"expected 'row col sym', got {line!r}")
        rows.append(tuple(int(x) for x in parts))
    return validate_pls(rows)


def format_grid(p: PLS) -> str:
    cells = p.cell_map()
    width = len(str(p.n_syms))
    lines = []
    for r in range(1, p.n_rows + 1):
        toks = [
            str(cells[(r, c)]).rjust(width) if (r, c) in cells else ".".rjust(width)
            for c in range(1, p.n_cols + 1)
        ]
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> PLS:
    triples = []
    sym_ids: dict[str, int] = {}
    width = None
    row = 0
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        row += 1
        if width is None:
            width = len(toks)
        elif len(toks) != width:
            raise ValueError(f"ragged grid: row {row} has {len(toks)} tokens, expected {width}")
        for col, tok in enumerate(toks, start=1):
            if tok == ".":
                continue
            sym_ids.setdefault(tok, len(sym_ids) + 1)
            triples.append((row, col, sym_ids[tok]))
    return validate_pls(triples)


def parse_pls(text: str, fmt: str = "auto") -> PLS:
    """Parse a single PLS from text in either format.

    auto: triple list if every non-blank line is exactly three integers,
    grid otherwise.  Three-column all-numeric grids without empty cells are
    indistinguishable from triple lists; pass an explicit fmt for those.
    """
    if fmt == "triples":
        return parse_triples(text)
    if fmt == "grid":
        return parse_grid(text)
    if fmt != "auto":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [
        ln.split("#", 1)[0].split()
        for ln in text.splitlines()
        if ln.split("#", 1)[0].strip()
    ]
    if lines and all(
        len(toks) == 3 and all(tok.isdigit() for tok in toks) for toks in lines
    ):
        return parse_triples(text)
    return parse_grid(text)


def format_species_file(reps: Iterable[PLS]) -> str:
    """Triple-list records separated by blank lines."""
    return "\n".join(format_triples(p) for p in reps)


def parse_species_file(text: str) -> list[PLS]:
    chunks = [c for c in text.split("\n\n") if c.strip()]
    return [parse_triples(c) for c in chunks]
