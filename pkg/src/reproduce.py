"""One-shot reproduction of the published claims on the four built-in arrangements"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.arrangement import (
    Arrangement,
    builtin_arrangement,
    combinatorial_data,
    weak_equal,
)
from src.classify import DfReport, bounds_check, compute_df
from src.config import LogderivConfig
from src.derivations import DerivationSpace, derivation_space
from src.polynomial import BivariatePoly, parse_polynomial
from src.poset import (
    distinguishing_pair,
    is_distinguishing_pair,
    poset_isomorphic,
    verify_poset_witness,
)
from src.utils.logging_setup import Timer

PASS = "PASS"
FAIL = "FAIL"
INFO = "INFO"

CONIC_TEXT = "6*x^2 + 2*y^2 + 5*x + 8*x*y + 1"

# 0-based line pairs named in the published text, labelled as in its figure
PUBLISHED_PAIRS: Dict[str, Tuple[int, int]] = {"pappus": (0, 5), "nonpappus": (2, 3)}


@dataclass(frozen=True)
class Claim:
    name: str
    status: str
    detail: str = ""


@dataclass
class ReproductionResult:
    claims: List[Claim] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(claim.status != FAIL for claim in self.claims)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.claims.append(Claim(name, PASS if ok else FAIL, detail))

    def info(self, name: str, detail: str) -> None:
        self.claims.append(Claim(name, INFO, detail))

    def render(self) -> str:
        width = max((len(c.name) for c in self.claims), default=0)
        out = [f"{'claim'.ljust(width)}  status  detail"]
        for claim in self.claims:
            out.append(f"{claim.name.ljust(width)}  {claim.status.ljust(6)}  {claim.detail}")
        verdict = "all claims hold" if self.passed else "some claims FAILED"
        out.append(f"# {verdict}")
        return "\n".join(out) + "\n"


def conic() -> BivariatePoly:
    return parse_polynomial(CONIC_TEXT)


def triple_points_off_conic(arrangement: Arrangement) -> List[List[int]]:
    """1-based line indices of the affine triple points not on the conic"""
    curve = conic()
    return [
        [i + 1 for i in s.incident_lines]
        for s in combinatorial_data(arrangement).sing
        if s.multiplicity == 3 and curve.evaluate(*s.point) != 0
    ]


def _pair_directions(arrangement: Arrangement) -> List[Tuple[int, int]]:
    data = combinatorial_data(arrangement)
    return [
        direction
        for direction, members in zip(data.class_directions, data.parallel_classes)
        if len(members) == 2
    ]


def asymptotic_directions_ok(arrangement: Arrangement) -> bool:
    """Every triple point at infinity lies on the projective closure of the conic"""
    quadratic = {(i, j): c for (i, j), c in conic().terms.items() if i + j == 2}
    at_infinity = _pair_directions(arrangement)
    return bool(at_infinity) and all(
        sum(c * vx**i * vy**j for (i, j), c in quadratic.items()) == 0
        for vx, vy in at_infinity
    )


def _dims(
    arrangement: Arrangement, top: int, spaces: Dict[int, DerivationSpace]
) -> List[int]:
    for d in range(top + 1):
        if d not in spaces:
            spaces[d] = derivation_space(arrangement, d)
    return [spaces[d].dim for d in range(top + 1)]


def _filtration_claim(
    result: ReproductionResult,
    label: str,
    arrangement: Arrangement,
    first_nonempty: int,
    spaces: Dict[int, DerivationSpace],
) -> None:
    dims = _dims(arrangement, first_nonempty, spaces)
    ok = all(v == 0 for v in dims[:-1]) and dims[-1] >= 1
    result.add(
        f"{label}: F_d = 0 for d < {first_nonempty}, F_{first_nonempty} != 0",
        ok,
        f"dims {dims}",
    )


def _df(
    arrangement: Arrangement,
    limit: int,
    config: LogderivConfig,
    spaces: Dict[int, DerivationSpace],
) -> DfReport:
    return compute_df(
        arrangement,
        limit,
        grid_cap=config.computation.grid_cap,
        fallback_above_cap=config.computation.fallback_above_cap,
        spaces=spaces,
    )


def published_pair_note(arrangement: Arrangement, name: str, computed: List[int]) -> str:
    """Compare the published distinguishing pair of ``name`` with the computed one"""
    first, second = PUBLISHED_PAIRS[name]
    found = "/".join(f"L{i + 1}" for i in computed)
    if is_distinguishing_pair(arrangement, first, second):
        verdict = "is also a witness"
    else:
        verdict = "is not a witness in equation order"
    return f"published L{first + 1}/L{second + 1}, computed {found}; published pair {verdict}"


def run_reproduction(config: Optional[LogderivConfig] = None) -> ReproductionResult:
    config = config or LogderivConfig()
    timer = Timer()
    result = ReproductionResult()
    names = ("pappus", "nonpappus", "ziegler", "ziegler2")
    arrangements = {name: builtin_arrangement(name) for name in names}
    spaces: Dict[str, Dict[int, DerivationSpace]] = {name: {} for name in names}
    p1, p2 = arrangements["pappus"], arrangements["nonpappus"]
    z1, z2 = arrangements["ziegler"], arrangements["ziegler2"]

    # Weak combinatorics
    for name in ("pappus", "nonpappus"):
        data = combinatorial_data(arrangements[name])
        result.add(
            f"{name}: 8 lines, 6 triple and 7 double points",
            data.n == 8 and data.weak_signature == {3: 6, 2: 7},
            f"signature {data.weak_signature}",
        )
    for name in ("ziegler", "ziegler2"):
        data = combinatorial_data(arrangements[name])
        result.add(
            f"{name}: 8 lines, 4 triple and 14 double points",
            data.n == 8 and data.weak_signature == {3: 4, 2: 14},
            f"signature {data.weak_signature}",
        )
    result.info(
        "ziegler: pairs of parallel lines",
        f"computed {combinatorial_data(z1).parallel_pairs}; the published text says three",
    )
    projective = combinatorial_data(z1).projective_signature
    result.add(
        "ziegler: 6 triple points in the projective closure",
        projective.get(3) == 6,
        f"projective signature {projective}",
    )

    # Filtrations
    _filtration_claim(result, "pappus", p1, 4, spaces["pappus"])
    _filtration_claim(result, "nonpappus", p2, 5, spaces["nonpappus"])
    _filtration_claim(result, "ziegler", z1, 5, spaces["ziegler"])
    _filtration_claim(result, "ziegler2", z2, 6, spaces["ziegler2"])

    # d_f
    limit = config.computation.df_search_limit
    df: Dict[str, DfReport] = {
        "pappus": _df(p1, max(limit, 4), config, spaces["pappus"]),
        "nonpappus": _df(p2, max(limit, 5), config, spaces["nonpappus"]),
        "ziegler": _df(z1, max(limit, 5), config, spaces["ziegler"]),
        "ziegler2": _df(z2, config.reproduce.z2_search_limit, config, spaces["ziegler2"]),
    }
    result.add("pappus: d_f = 4", df["pappus"].d_f == 4, df["pappus"].describe())
    result.add("nonpappus: d_f = 5", df["nonpappus"].d_f == 5, df["nonpappus"].describe())
    result.add("ziegler: d_f = 5", df["ziegler"].d_f == 5, df["ziegler"].describe())
    z2_df = df["ziegler2"]
    result.add(
        "ziegler2: d_f >= 6",
        z2_df.d_f is None or z2_df.d_f >= 6,
        z2_df.describe(),
    )
    result.info("ziegler2: computed d_f (beyond published results)", z2_df.describe())

    # Weak versus strong combinatorics
    pappus_iso = poset_isomorphic(p1, p2)
    result.add(
        "pappus/nonpappus: weakly equal, posets not isomorphic, d_f 4 != 5",
        weak_equal(p1, p2)
        and not pappus_iso.isomorphic
        and df["pappus"].d_f != df["nonpappus"].d_f,
        f"d_f {df['pappus'].d_f} vs {df['nonpappus'].d_f}",
    )
    pair_p1 = distinguishing_pair(p1)
    pair_p2 = distinguishing_pair(p2)
    result.add(
        "pappus/nonpappus: distinguishing pair meets in a double vs a triple point",
        pair_p1[1] == 2 and pair_p2[1] == 3,
        f"pappus lines {[i + 1 for i in pair_p1[0]]}, nonpappus lines "
        f"{[i + 1 for i in pair_p2[0]]}",
    )
    for name, arrangement, (lines, _) in [
        ("pappus", p1, pair_p1),
        ("nonpappus", p2, pair_p2),
    ]:
        result.info(
            f"{name}: published distinguishing pair",
            published_pair_note(arrangement, name, lines),
        )
    ziegler_iso = poset_isomorphic(z1, z2)
    verified = ziegler_iso.witness is not None and verify_poset_witness(
        z1, z2, ziegler_iso.witness
    )
    z1_df = df["ziegler"].d_f
    strictly_smaller = z1_df is not None and (z2_df.d_f is None or z1_df < z2_df.d_f)
    result.add(
        "ziegler/ziegler2: posets isomorphic, d_f(ziegler) < d_f(ziegler2)",
        ziegler_iso.isomorphic and verified and strictly_smaller,
        f"witness verified: {verified}",
    )

    # Conic through the triple points
    off_z1 = triple_points_off_conic(z1)
    result.add(
        "ziegler: affine triple points on 6x^2+2y^2+5x+8xy+1=0",
        not off_z1 and combinatorial_data(z1).weak_signature.get(3) == 4,
        "all 4 on the conic" if not off_z1 else f"off the conic: {off_z1}",
    )
    result.add(
        "ziegler: triple points at infinity on the conic's asymptotic directions",
        asymptotic_directions_ok(z1),
        f"directions {_pair_directions(z1)}",
    )
    off_z2 = triple_points_off_conic(z2)
    result.add(
        "ziegler2: some affine triple point off the conic",
        bool(off_z2),
        f"off the conic: {off_z2}",
    )

    # Bounds and constructors
    for name in names:
        bounds = bounds_check(
            arrangements[name],
            grid_cap=config.computation.grid_cap,
            spaces=spaces[name],
            df_report=df[name],
        )
        failed = [s.claim for s in bounds.statements if not s.holds]
        result.add(
            f"{name}: bounds and minimal constructors",
            not failed,
            f"nu_inf={bounds.nu_inf} nu_f={bounds.nu_f} nu={bounds.nu}"
            + (f"; failed {failed}" if failed else ""),
        )

    result.elapsed_seconds = timer.stop()
    budget = config.reproduce.time_budget_seconds
    if result.elapsed_seconds > budget:
        logging.warning(
            f"Reproduction took {result.elapsed_seconds:.1f}s, over the {budget}s budget"
        )
        result.info("time budget", f"{result.elapsed_seconds:.1f}s > {budget}s")
    logging.info(
        f"Reproduction finished in {result.elapsed_seconds:.2f}s: "
        f"{'PASS' if result.passed else 'FAIL'}"
    )
    return result
