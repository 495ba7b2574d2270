"""Report models and builders

Every rational is serialized as a string "p/q" (or "p"), polynomial terms as
[i, j, "p/q"]. Line and point indices in reports are 0-based. Reports carry the
tool version and no timestamps, so identical inputs give identical output.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from src import __version__
from src.arrangement import Arrangement, combinatorial_data, weak_equal
from src.classify import (
    BoundsReport,
    ClassTag,
    DfReport,
    FieldClass,
    InvariantLines,
    bounds_check,
    classify,
    compute_df,
)
from src.derivations import DerivationSpace, VectorField, derivation_space, is_logarithmic
from src.polynomial import BivariatePoly, format_rational
from src.poset import PosetComparison, poset_isomorphic, verify_poset_witness

Term = Tuple[int, int, str]


def rational_str(value) -> str:
    return format_rational(value)


def parse_rational_str(text: str) -> Fraction:
    numerator, _, denominator = text.partition("/")
    return Fraction(int(numerator), int(denominator or 1))


def poly_terms(f: BivariatePoly) -> List[Term]:
    return [(i, j, rational_str(c)) for (i, j), c in f.items()]


def terms_poly(terms: List[Term]) -> BivariatePoly:
    return BivariatePoly({(i, j): parse_rational_str(c) for i, j, c in terms})


class FieldModel(BaseModel):
    """chi = P d/dx + Q d/dy as term lists"""

    P: List[Term]
    Q: List[Term]
    text: str = Field(description="Human-readable 'P;Q' form")

    @classmethod
    def from_field(cls, chi: VectorField) -> "FieldModel":
        return cls(P=poly_terms(chi.P), Q=poly_terms(chi.Q), text=chi.format())

    def to_field(self) -> VectorField:
        return VectorField(terms_poly(self.P), terms_poly(self.Q))


class ClassModel(BaseModel):
    tag: str
    center: Optional[List[str]] = None
    direction: Optional[List[int]] = None

    @classmethod
    def from_class(cls, field_class: FieldClass) -> "ClassModel":
        return cls(
            tag=field_class.tag.value,
            center=[rational_str(v) for v in field_class.center]
            if field_class.center is not None
            else None,
            direction=list(field_class.direction)
            if field_class.direction is not None
            else None,
        )


class ArrangementModel(BaseModel):
    name: Optional[str] = None
    lines: List[List[str]]

    @classmethod
    def from_arrangement(cls, arrangement: Arrangement) -> "ArrangementModel":
        return cls(
            name=arrangement.name,
            lines=[[rational_str(v) for v in line.triple] for line in arrangement],
        )

    def to_arrangement(self) -> Arrangement:
        return Arrangement.from_coefficients(
            ([parse_rational_str(v) for v in triple] for triple in self.lines),
            name=self.name,
        )


class SingularPointModel(BaseModel):
    point: List[str]
    lines: List[int]


class ParallelClassModel(BaseModel):
    direction: List[int]
    lines: List[int]


class CombinatoricsModel(BaseModel):
    n: int
    m: int
    p: int
    nu_inf: int
    nu_f: int
    nu: int
    weak_signature: Dict[str, int]
    parallel_pairs: int
    projective_signature: Dict[str, int]
    singular_points: List[SingularPointModel]
    parallel_classes: List[ParallelClassModel]


class DegreeModel(BaseModel):
    d: int
    dim: int
    rank: int
    classes: List[ClassModel]
    basis: Optional[List[FieldModel]] = None


class TrailModel(BaseModel):
    d: int
    dim: int
    decision: str
    bound: Optional[str] = None
    method: Optional[str] = None
    finite_found: bool = False


class DfModel(BaseModel):
    d_max: int
    d_f: Optional[int] = None
    not_found_below: Optional[int] = None
    witness: Optional[FieldModel] = None
    trail: List[TrailModel]

    @classmethod
    def from_report(cls, report: DfReport) -> "DfModel":
        return cls(
            d_max=report.d_max,
            d_f=report.d_f,
            not_found_below=report.not_found_below,
            witness=FieldModel.from_field(report.witness) if report.witness else None,
            trail=[TrailModel(**entry.__dict__) for entry in report.trail],
        )


class BoundStatementModel(BaseModel):
    claim: str
    d: Optional[int] = None
    holds: bool
    detail: str = ""


class BoundsModel(BaseModel):
    nu_inf: int
    nu_f: int
    nu: int
    statements: List[BoundStatementModel]

    @classmethod
    def from_report(cls, report: BoundsReport) -> "BoundsModel":
        return cls(
            nu_inf=report.nu_inf,
            nu_f=report.nu_f,
            nu=report.nu,
            statements=[BoundStatementModel(**s.__dict__) for s in report.statements],
        )


class AnalysisReport(BaseModel):
    """Self-contained analysis of one arrangement"""

    tool: str = "logderiv"
    version: str = __version__
    arrangement: ArrangementModel
    combinatorics: CombinatoricsModel
    filtration: List[DegreeModel]
    df: DfModel
    bounds: BoundsModel


class PosetWitnessModel(BaseModel):
    line_map: List[Tuple[int, int]]
    point_map: List[Tuple[int, int]]


class ComparisonReport(BaseModel):
    tool: str = "logderiv"
    version: str = __version__
    first: ArrangementModel
    second: ArrangementModel
    weak_equal: bool
    poset_isomorphic: bool
    witness: Optional[PosetWitnessModel] = None
    witness_verified: Optional[bool] = None
    df_first: Optional[DfModel] = None
    df_second: Optional[DfModel] = None


class ClassifyReport(BaseModel):
    tool: str = "logderiv"
    version: str = __version__
    field: FieldModel
    degree: int
    classification: ClassModel
    invariant_lines: Optional[List[List[str]]] = None
    complete: Optional[bool] = None
    arrangement: Optional[ArrangementModel] = None
    is_logarithmic: Optional[bool] = None
    pointwise_fixed_lines: Optional[List[int]] = None


def combinatorics_model(arrangement: Arrangement) -> CombinatoricsModel:
    data = combinatorial_data(arrangement)
    return CombinatoricsModel(
        n=data.n,
        m=data.m,
        p=data.p,
        nu_inf=data.nu_inf,
        nu_f=data.nu_f,
        nu=data.nu,
        weak_signature={str(k): v for k, v in data.weak_signature.items()},
        parallel_pairs=data.parallel_pairs,
        projective_signature={str(k): v for k, v in data.projective_signature.items()},
        singular_points=[
            SingularPointModel(
                point=[rational_str(v) for v in s.point], lines=list(s.incident_lines)
            )
            for s in data.sing
        ],
        parallel_classes=[
            ParallelClassModel(direction=list(direction), lines=list(indices))
            for direction, indices in zip(data.class_directions, data.parallel_classes)
        ],
    )


def degree_model(space: DerivationSpace, include_basis: bool) -> DegreeModel:
    basis = space.basis
    return DegreeModel(
        d=space.d,
        dim=space.dim,
        rank=space.rank,
        classes=[ClassModel.from_class(classify(chi)) for chi in basis],
        basis=[FieldModel.from_field(chi) for chi in basis] if include_basis else None,
    )


def build_analysis_report(
    arrangement: Arrangement,
    d_max: int,
    df_limit: int,
    include_bases: bool = False,
    grid_cap: int = 10,
    fallback_above_cap: bool = True,
) -> AnalysisReport:
    spaces: Dict[int, DerivationSpace] = {}
    for d in range(d_max + 1):
        spaces[d] = derivation_space(arrangement, d)
    df = compute_df(
        arrangement,
        max(df_limit, d_max, 1),
        grid_cap=grid_cap,
        fallback_above_cap=fallback_above_cap,
        spaces=spaces,
    )
    bounds = bounds_check(arrangement, grid_cap=grid_cap, spaces=spaces, df_report=df)
    return AnalysisReport(
        arrangement=ArrangementModel.from_arrangement(arrangement),
        combinatorics=combinatorics_model(arrangement),
        filtration=[degree_model(spaces[d], include_bases) for d in range(d_max + 1)],
        df=DfModel.from_report(df),
        bounds=BoundsModel.from_report(bounds),
    )


def build_comparison_report(
    first: Arrangement,
    second: Arrangement,
    df_limit: Optional[int] = None,
    grid_cap: int = 10,
    fallback_above_cap: bool = True,
) -> ComparisonReport:
    comparison: PosetComparison = poset_isomorphic(first, second)
    witness = None
    verified = None
    if comparison.witness is not None:
        witness = PosetWitnessModel(
            line_map=sorted(comparison.witness.line_map.items()),
            point_map=sorted(comparison.witness.point_map.items()),
        )
        verified = verify_poset_witness(first, second, comparison.witness)
    report = ComparisonReport(
        first=ArrangementModel.from_arrangement(first),
        second=ArrangementModel.from_arrangement(second),
        weak_equal=weak_equal(first, second),
        poset_isomorphic=comparison.isomorphic,
        witness=witness,
        witness_verified=verified,
    )
    if df_limit is not None:
        report.df_first = DfModel.from_report(
            compute_df(
                first, df_limit, grid_cap=grid_cap, fallback_above_cap=fallback_above_cap
            )
        )
        report.df_second = DfModel.from_report(
            compute_df(
                second, df_limit, grid_cap=grid_cap, fallback_above_cap=fallback_above_cap
            )
        )
    return report


def build_classify_report(
    chi: VectorField,
    field_class: FieldClass,
    lines: Optional[InvariantLines] = None,
    arrangement: Optional[Arrangement] = None,
    fixed: Optional[List[int]] = None,
) -> ClassifyReport:
    report = ClassifyReport(
        field=FieldModel.from_field(chi),
        degree=chi.degree,
        classification=ClassModel.from_class(field_class),
    )
    if lines is not None:
        report.invariant_lines = [
            [rational_str(v) for v in line.triple] for line in lines.rational_lines
        ]
        report.complete = lines.complete
    if arrangement is not None:
        report.arrangement = ArrangementModel.from_arrangement(arrangement)
        report.is_logarithmic = is_logarithmic(chi, arrangement)
        report.pointwise_fixed_lines = fixed
    return report


def _class_matches(model: ClassModel, field_class: FieldClass) -> bool:
    return model == ClassModel.from_class(field_class)


def verify_analysis_report(payload: dict) -> List[str]:
    """Re-check an emitted analysis report from its own contents

    Returns a list of failure messages; an empty list means every claim holds.
    """
    failures: List[str] = []
    report = AnalysisReport.model_validate(payload)
    arrangement = report.arrangement.to_arrangement()

    fresh = combinatorics_model(arrangement)
    if fresh != report.combinatorics:
        failures.append("combinatorial data differs from a fresh computation")

    for degree in report.filtration:
        space = derivation_space(arrangement, degree.d)
        if space.dim != degree.dim:
            failures.append(f"d={degree.d}: dim {degree.dim} != computed {space.dim}")
        if degree.basis is None:
            continue
        if len(degree.basis) != degree.dim:
            failures.append(f"d={degree.d}: basis length differs from dim")
        for k, (model, stated) in enumerate(zip(degree.basis, degree.classes)):
            chi = model.to_field()
            if chi.degree > degree.d or not is_logarithmic(chi, arrangement):
                failures.append(f"d={degree.d}: basis element {k} is not in F_{degree.d}")
            if not _class_matches(stated, classify(chi)):
                failures.append(f"d={degree.d}: basis element {k} class mismatch")

    df = report.df
    if df.d_f is not None:
        if df.witness is None:
            failures.append("d_f given without a witness")
        else:
            chi = df.witness.to_field()
            if chi.degree != df.d_f:
                failures.append(f"witness degree {chi.degree} != d_f {df.d_f}")
            if not is_logarithmic(chi, arrangement):
                failures.append("d_f witness is not logarithmic")
            if classify(chi).tag != ClassTag.FINITE:
                failures.append("d_f witness is not finite-type")
    for entry in df.trail:
        if entry.decision == "bound-used" and not entry.d < report.combinatorics.nu_f:
            failures.append(f"d={entry.d}: bound cited with d >= nu_f")

    for statement in report.bounds.statements:
        if not statement.holds:
            failures.append(f"bound statement {statement.claim} (d={statement.d}) fails")
    rechecked = bounds_check(arrangement)
    expected = {(s.claim, s.d): s.holds for s in rechecked.statements}
    for statement in report.bounds.statements:
        key = (statement.claim, statement.d)
        if key in expected and expected[key] != statement.holds:
            failures.append(f"bound statement {statement.claim} (d={statement.d}) differs")

    if failures:
        logging.warning(f"Report verification found {len(failures)} problems")
    return failures


class ClaimModel(BaseModel):
    name: str
    status: str
    detail: str = ""


class ReproductionReport(BaseModel):
    tool: str = "logderiv"
    version: str = __version__
    passed: bool
    claims: List[ClaimModel]
