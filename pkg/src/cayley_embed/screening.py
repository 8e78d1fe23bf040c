"""Reduction rules and the classification pipeline for psi(n) and its variants.

psi(n) is the largest m such that every PLS of size m embeds in some group of
order n; psi_plus restricts to abelian groups and psi_circ to the cyclic
group.  A species of size psi+1 embedding in no admissible group is an
obstacle.  The pipeline screens species with two reduction rules (applied
over all six parastrophes) plus the diagonal transversal bound, and settles
the survivors by exact search.  Screening is advisory only: a species is
never declared embeddable off a reduction unless its reduced square was
itself proved embeddable for the same (n, variant).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from .embed import embeds_in_class, quadrangle_violation, transversal_bound
from .groups import Group, OrderUnsupported, abelian_groups_of_order, cyclic, groups_of_order
from .pls import (
    ALL_PARASTROPHES,
    PLS,
    Parastrophe,
    SpeciesKey,
    Triple,
    canonical_form,
    enumerate_species,
    is_t_species,
    parastrophe,
    row_cycle_length,
    validate_pls,
)


class TripleNotInP(ValueError):
    pass


class RowNotInP(ValueError):
    pass


class OrderExceedsN(ValueError):
    pass


class IncompleteClass(ValueError):
    """The supplied group list cannot be known to be the full class."""


def removable_triple(p: PLS, t: Triple, n: int) -> bool:
    """Deletion rule: p embeds in any order-n group whenever p - {t} does.

    Requires order(p) <= n.  Conditions: (i) removing t empties its row;
    (ii) every remaining row keeps a cell in t's column or a cell holding
    t's symbol.
    """
    t = Triple(*t)
    if t not in p.triples:
        raise TripleNotInP(f"{tuple(t)} is not a triple of the square")
    if p.order > n:
        raise OrderExceedsN(f"square order {p.order} exceeds n={n}")
    rest = [u for u in p.triples if u != t]
    if any(u.row == t.row for u in rest):
        return False
    rows_ok = {u.row for u in rest if u.col == t.col or u.sym == t.sym}
    return all(u.row in rows_ok for u in rest)


def shift_line(p: PLS, row: int, n: int) -> bool:
    """Line-shift rule: p embeds in any order-n group whenever p minus row does.

    With the row's cells (row, c_i, s_i) for i = 1..l and p' the rest: C1 and
    S1 index the cells whose column (resp. symbol) still occurs in p'.
    Conditions: (i) C1 and S1 are disjoint;
    (ii) n >= |rows(p)| + |C1|*(|syms(p')| - 1) + |S1|*(|cols(p')| - 1);
    (iii) n >= |cols(p)| + |syms(p)| - l.
    """
    if not 1 <= row <= p.n_rows:
        raise RowNotInP(f"row {row} is not a row of the square")
    line = [u for u in p.triples if u.row == row]
    rest = [u for u in p.triples if u.row != row]
    rest_cols = {u.col for u in rest}
    rest_syms = {u.sym for u in rest}
    c1 = {i for i, u in enumerate(line) if u.col in rest_cols}
    s1 = {i for i, u in enumerate(line) if u.sym in rest_syms}
    if c1 & s1:
        return False
    ell = len(line)
    if n < p.n_rows + len(c1) * (len(rest_syms) - 1) + len(s1) * (len(rest_cols) - 1):
        return False
    return n >= p.n_cols + p.n_syms - ell


@dataclass(frozen=True)
class ReductionCertificate:
    """A one-step reduction: under `sigma`, removing `removed` leaves `reduced`.

    `reduced` is the densely revalidated remainder, or None when the rule
    removed the whole square.  The conditions were checked for order `n`.
    """

    rule: str  # "removable-triple" | "shift-line"
    sigma: Parastrophe
    removed: tuple[Triple, ...]
    reduced: Optional[PLS]
    n: int


def _residue(triples: Sequence[Triple]) -> Optional[PLS]:
    if not triples:
        return None
    return validate_pls(sorted(triples))


def reducible(p: PLS, n: int) -> Optional[ReductionCertificate]:
    """First reduction certificate found, or None.

    Deterministic scan: parastrophes in fixed lexicographic order; within
    each image the deletion rule over triples in sorted order, then the
    line-shift rule over rows in increasing order.
    """
    for sigma in ALL_PARASTROPHES:
        q = parastrophe(p, sigma)
        if q.order <= n:
            for t in q.triples:
                if removable_triple(q, t, n):
                    return ReductionCertificate(
                        "removable-triple",
                        sigma,
                        (t,),
                        _residue([u for u in q.triples if u != t]),
                        n,
                    )
        for row in range(1, q.n_rows + 1):
            if shift_line(q, row, n):
                line = tuple(u for u in q.triples if u.row == row)
                return ReductionCertificate(
                    "shift-line",
                    sigma,
                    line,
                    _residue([u for u in q.triples if u.row != row]),
                    n,
                )
    return None


def row_cycle_species(p: PLS) -> Optional[int]:
    """The cycle length l if p lies in the species of the two-row l-cycle."""
    return row_cycle_length(p)


def _fast_path_embeds(p: PLS, n: int) -> bool:
    """Diagonal squares with all-distinct symbols embed in every order-n group
    once their size is within the transversal bound."""
    return is_t_species(p) and p.size <= transversal_bound(n)


def screen_size(size: int, n: int) -> list[SpeciesKey]:
    """Species of the given size that survive screening at order n.

    Survivors are the species neither reduced by either rule (over all six
    parastrophes) nor certified by the diagonal fast path; they are the ones
    that require direct search.
    """
    if not 1 <= size <= 7:
        raise ValueError(f"screening supports sizes 1..7, got {size}")
    reps = enumerate_species(size)[size]
    out = []
    for rep in reps:
        if _fast_path_embeds(rep, n):
            continue
        if reducible(rep, n) is not None:
            continue
        out.append(canonical_form(rep))
    return out


# ---------------------------------------------------------------------------
# psi classification.


@dataclass(frozen=True)
class Obstacle:
    species_key: SpeciesKey
    representative: PLS
    certificate: dict

    def to_json(self) -> dict:
        return {
            "species_key": self.species_key.hex(),
            "representative_triples": [list(t) for t in self.representative.triples],
            "certificate": self.certificate,
        }


@dataclass(frozen=True)
class PsiResult:
    n: int
    variant: str
    psi: int
    obstacles: tuple[Obstacle, ...]
    survivor_counts: dict[int, int]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "psi": self.psi,
            "obstacles": [o.to_json() for o in self.obstacles],
            "survivor_counts": {str(k): v for k, v in sorted(self.survivor_counts.items())},
        }


PSI_RESULT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["n", "variant", "psi", "obstacles", "survivor_counts"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "variant": {"enum": ["group", "abelian", "cyclic"]},
        "psi": {"type": "integer", "minimum": 0},
        "obstacles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["species_key", "representative_triples", "certificate"],
                "properties": {
                    "species_key": {"type": "string", "pattern": "^[0-9a-f]+$"},
                    "representative_triples": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "integer", "minimum": 1},
                            "minItems": 3,
                            "maxItems": 3,
                        },
                    },
                    "certificate": {"type": "object"},
                },
                "additionalProperties": False,
            },
        },
        "survivor_counts": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
    },
    "additionalProperties": False,
}

VARIANTS = ("group", "abelian", "cyclic")


def default_group_class(n: int, variant: str) -> list[Group]:
    if variant == "group":
        try:
            return groups_of_order(n)
        except OrderUnsupported as exc:
            raise IncompleteClass(
                f"no built-in complete catalogue for order {n}; "
                "supply the full class explicitly"
            ) from exc
    if variant == "abelian":
        return abelian_groups_of_order(n)
    if variant == "cyclic":
        return [cyclic(n)]
    raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


@dataclass(frozen=True)
class _Classification:
    key_blob: bytes
    embeddable: bool
    searched: bool
    method: str
    certificate: Optional[dict]


def _classify_one(
    rep: PLS,
    n: int,
    groups: Sequence[Group],
    known: dict[bytes, bool],
    use_screening: bool,
) -> _Classification:
    blob = canonical_form(rep).blob
    if use_screening:
        if _fast_path_embeds(rep, n):
            return _Classification(blob, True, False, "transversal-bound", None)
        cert = reducible(rep, n)
        if cert is not None:
            if cert.reduced is None:
                return _Classification(blob, True, False, "reduction", None)
            if known.get(canonical_form(cert.reduced).blob):
                return _Classification(blob, True, False, "reduction", None)
    verdict = embeds_in_class(rep, groups)
    if verdict.embeds_in_some:
        return _Classification(blob, True, True, "search", None)
    certificate = None
    # a violation in any parastrophe image rules out every group, since
    # same-species squares embed alike
    for sigma in ALL_PARASTROPHES:
        if quadrangle_violation(parastrophe(rep, sigma)):
            certificate = {"kind": "quadrangle", "parastrophe": list(sigma.perm)}
            break
    if certificate is None:
        length = row_cycle_length(rep)
        if length is not None and n % length:
            certificate = {"kind": "row-cycle", "length": length}
        else:
            certificate = {"kind": "exhausted-search", "groups": [g.name for g in groups]}
    return _Classification(blob, False, True, "search", certificate)


def _classify_chunk(args) -> list[_Classification]:
    reps, n, groups, known, use_screening = args
    return [_classify_one(rep, n, groups, known, use_screening) for rep in reps]


def psi(
    n: int,
    variant: str = "group",
    groups: Optional[Sequence[Group]] = None,
    *,
    assume_complete: bool = False,
    use_screening: bool = True,
    workers: int = 1,
) -> PsiResult:
    """Compute psi for the given order and variant, with its obstacle species.

    `groups` must be the complete class of groups for (n, variant); when
    omitted it is built from the catalogue (order <= 16 for variant="group").
    Passing an explicit list for an uncatalogued order requires
    assume_complete=True.  Sizes ascend with the inductive rule: a species is
    embeddable if a reduction lands on an already-embeddable species, if the
    diagonal fast path certifies it, or if search embeds it in some listed
    group.  psi is one less than the first size with a non-embeddable
    species, and the obstacles are all such species at that size.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if groups is None:
        groups = default_group_class(n, variant)
    else:
        groups = list(groups)
        if variant == "group" and n > 16 and not assume_complete:
            raise IncompleteClass(
                "catalogue completeness is only known for orders <= 16; "
                "pass assume_complete=True to trust the supplied class"
            )
    if not groups or any(g.order != n for g in groups):
        raise ValueError(f"group class must be nonempty groups of order {n}")

    cap = n + 1 if n <= 4 else 7
    known: dict[bytes, bool] = {}
    survivor_counts: dict[int, int] = {}
    for size in range(1, cap + 1):
        reps = enumerate_species(size)[size]
        results = _classify_level(reps, n, groups, known, use_screening, workers)
        survivor_counts[size] = sum(1 for r in results if r.searched)
        for r in results:
            known[r.key_blob] = r.embeddable
        bad = [(rep, r) for rep, r in zip(reps, results) if not r.embeddable]
        if bad:
            obstacles = tuple(
                Obstacle(SpeciesKey(r.key_blob), rep, r.certificate or {})
                for rep, r in bad
            )
            return PsiResult(n, variant, size - 1, obstacles, survivor_counts)
    raise RuntimeError(f"no obstacle found for n={n} within size cap {cap}")


def _classify_level(reps, n, groups, known, use_screening, workers):
    if workers <= 1 or len(reps) < 32:
        return [_classify_one(rep, n, groups, known, use_screening) for rep in reps]
    chunks = [reps[i::workers] for i in range(workers)]
    try:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    _classify_chunk,
                    [(chunk, n, list(groups), dict(known), use_screening) for chunk in chunks],
                )
            )
    except OSError:
        return [_classify_one(rep, n, groups, known, use_screening) for rep in reps]
    by_blob = {}
    for part in parts:
        for r in part:
            by_blob[r.key_blob] = r
    return [by_blob[canonical_form(rep).blob] for rep in reps]
