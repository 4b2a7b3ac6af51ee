"""verify-suite: catalog expectations and instance-level checks, grouped by scope."""

import logging
from typing import Callable, List, Optional, Tuple

from app.application.dto.check_dto import CheckReport
from app.application.dto.report_dto import SuiteFailure, SuiteReport
from app.application.services.catalog_service import CatalogService
from app.application.services.category_service import CategoryService
from app.application.services.cone_service import ConeService
from app.application.services.connected_service import ConnectedService
from app.application.services.functor_service import FunctorService
from app.application.services.isomorphism_service import IsomorphismService
from app.application.services.semigroup_service import SemigroupService
from app.core.config import settings
from app.core.exceptions import CCConditionViolated, EngineError, NotLeftReductive
from app.domain.entities.connected import ConnectedCategory
from app.domain.entities.semigroup import FiniteSemigroup
from app.infrastructure.observability.error_tracker import FailureTracker
from app.infrastructure.observability.metrics import StageTimer

logger = logging.getLogger(__name__)

Check = Tuple[str, Callable[[], CheckReport]]

SCOPES = ("semigroup", "category", "cones", "connected", "functors", "catalog")

ROUNDTRIP_SEMIGROUPS = ("T2", "T3", "ST3", "I2", "SL2", "Z2", "R2", "RRB3", "B4")
ROUNDTRIP_CATEGORIES = ("P1", "P2", "P3", "SP3", "X2")


def _semigroup(name: str) -> FiniteSemigroup:
    return CatalogService.build(name)


def _connected(name: str) -> ConnectedCategory:
    return CatalogService.build(name)


def _bands() -> List[FiniteSemigroup]:
    return [entry.build() for entry in CatalogService.census_entries()]


def _left_connected(S: FiniteSemigroup) -> ConnectedCategory:
    """C(S), or C(S^op) when S is only right reductive."""
    if SemigroupService.is_left_reductive(S):
        return FunctorService.functor_C(S)
    return FunctorService.functor_C(SemigroupService.opposite(S))


def _semigroup_checks(S: FiniteSemigroup) -> CheckReport:
    """Flag implications and the agreement of every equivalent characterisation."""
    report = CheckReport(subject=S.name)
    flags = SemigroupService.classify(S)
    problems = flags.inconsistencies()
    report.add("flags_consistent", not problems, "; ".join(problems))
    if not flags.regular:
        return report
    ladder = SemigroupService.l_unipotent_ladder(S)
    report.add("l_unipotent_conditions_agree", len(set(ladder.values())) == 1, ladder)
    report.add("l_unipotent_ladder_matches_flag", ladder["unique_idempotent_per_l_class"] == flags.l_unipotent)
    inverse = SemigroupService.inverse_ladder(S)
    report.add("inverse_conditions_agree", len(set(inverse.values())) == 1, inverse)
    report.add("inverse_ladder_matches_flag", inverse["idempotents_commute"] == flags.inverse)
    if flags.l_unipotent:
        g = SemigroupService.greens(S)
        bad = next(
            (
                (e, f)
                for e in g.idempotents
                for f in g.idempotents
                if bool(g.leq_l[e, f]) != bool(g.nat_leq[e, f])
            ),
            None,
        )
        report.add("left_order_is_natural_order_on_idempotents", bad is None, bad)
    bad_inverse = next(
        (
            (a, x)
            for a in range(S.size)
            for x in SemigroupService.inverses(S, a)
            if S.product(a, x, a) != a or S.product(x, a, x) != x
        ),
        None,
    )
    report.add("inverses_are_inverses", bad_inverse is None, bad_inverse)
    return report


def _normal_control() -> CheckReport:
    """𝕡₂ with the empty set is not normal."""
    report = CheckReport(subject="P2 with empty set")
    C = CatalogService.powerset_base(2, include_empty=True)
    normal = CategoryService.verify_normal(C)
    report.add("rejected_as_not_normal", not normal.passed)
    failing = {check.name for check in normal.failures()}
    report.add("empty_set_breaks_splitting", "inclusions_split" in failing, sorted(failing))
    return report


def _category_checks(name: str) -> CheckReport:
    cc = _connected(name)
    report = CategoryService.verify_normal(cc.category)
    report.add("epi_component_rule", not CategoryService.epi_component_rule_failures(cc.category))
    report.add("factorization_unique", not CategoryService.factorization_uniqueness_failures(cc.category))
    return report


def _left_category_checks(name: str) -> CheckReport:
    S = _semigroup(name)
    L = CategoryService.build_left_category(S)
    report = CategoryService.left_category_checks(L)
    report.extend(CategoryService.verify_normal(L.category), prefix="normal.")
    return report


def _lr_iso(name: str) -> CheckReport:
    _, report = FunctorService.lr_isomorphism_for_inverse(_semigroup(name))
    return report


def _powerset_cones(n: int) -> CheckReport:
    cc = _connected(f"P{n}")
    report = CheckReport(subject=f"P{n} cones")
    report.add("cone_count", cc.full.size == n**n, cc.full.size)
    iso = CatalogService.phi_isomorphism(n)
    report.add("point_evaluation_is_isomorphism", iso.is_bijective)
    return report


def _partition_poset() -> CheckReport:
    cc = _connected("P3")
    report = CheckReport(subject="P3 R-classes")
    iso = IsomorphismService.find_poset_iso(
        ConnectedService.r_class_poset(cc.full), CatalogService.partition_poset(3)
    )
    report.add("r_class_poset_is_partition_lattice", iso is not None)
    report.extend(CatalogService.partition_check(cc, 3))
    return report


def _cone_greens(cc: ConnectedCategory) -> CheckReport:
    report = ConeService.cone_greens_check(cc.full)
    if cc.full.size <= settings.CONE_ASSOCIATIVITY_LIMIT:
        triple = ConeService.associativity_failure(cc.full)
        report.add("cone_product_associative", triple is None, triple)
    sub = ConnectedService.connection_semigroup(cc)
    if sub.size < cc.full.size:
        report.extend(ConeService.cone_greens_check(sub), prefix="connection.")
    return report


def _connected_checks(cc: ConnectedCategory) -> CheckReport:
    report = ConnectedService.connected_checks(cc)
    if ConnectedService.is_supported(cc):
        report.extend(ConnectedService.supported_checks(cc), prefix="supported.")
    k = ConnectedService.is_bounded_above(cc.category)
    if k is not None:
        report.add("largest_object_gives_identity", ConnectedService.bounded_above_identity(cc) is not None)
    return report


def _self_supported_instances() -> CheckReport:
    report = CheckReport(subject="self-supported instances")
    cc = FunctorService.functor_C(_semigroup("I2"))
    report.add("inverse_category_self_supported", ConnectedService.is_supported(cc) and ConnectedService.is_self_supported(cc))
    report.add(
        "inverse_connection_idempotents_commute",
        SemigroupService.idempotents_commute(FunctorService.functor_S(cc)),
    )
    band = FunctorService.functor_C(_semigroup("RRB3"))
    supported = ConnectedService.is_supported(band)
    report.add("band_category_supported", supported)
    report.add("band_category_not_self_supported", supported and not ConnectedService.is_self_supported(band))
    return report


def _duality() -> CheckReport:
    cc = _connected("P2")
    report = CheckReport(subject="P2 duality")
    sub = ConnectedService.connection_semigroup(cc).semigroup
    dual = ConnectedService.dual_connection_semigroup(cc)
    report.add("dual_regular", SemigroupService.is_regular(dual))
    report.add("dual_right_reductive", SemigroupService.is_right_reductive(dual))
    report.add("dual_anti_isomorphic", IsomorphismService.find_semigroup_iso(dual, sub, anti=True) is not None)
    left = CategoryService.build_left_category(sub).category
    right = CategoryService.build_right_category(dual).category
    report.add("right_of_dual_is_left_of_original", IsomorphismService.find_category_iso(right, left) is not None)
    return report


def _semigroup_roundtrip(S: FiniteSemigroup) -> CheckReport:
    report = CheckReport(subject=f"{S.name} roundtrip")
    if SemigroupService.is_left_reductive(S):
        iso = FunctorService.roundtrip_semigroup(S)
    else:
        iso = FunctorService.roundtrip_semigroup_dual(S)
    report.add("isomorphic_to_connection_semigroup", iso.is_bijective)
    return report


def _category_roundtrip(cc: ConnectedCategory) -> CheckReport:
    report = CheckReport(subject=f"{cc.name} roundtrip")
    m = FunctorService.roundtrip_category(cc)
    report.add("cc_isomorphism", m.is_bijective)
    return report


def _concrete(family: str, n: int) -> CheckReport:
    report = CheckReport(subject=f"L({family}{n}) concrete isomorphism")
    m = CatalogService.concrete_isomorphism(family, n)
    report.add("cc_isomorphism", m.is_bijective)
    return report


def _naturality() -> CheckReport:
    B, Y, phi = CatalogService.band_projection()
    report = FunctorService.naturality_check(phi, B, Y)
    FunctorService.hom_to_cc(phi, B, Y)
    report.add("projection_induces_cc_morphism", True)
    return report


def _adjunction() -> CheckReport:
    report = CheckReport(subject="adjunction")
    for band in _bands() + [_semigroup("SL2"), _semigroup("RRB3")]:
        report.extend(FunctorService.band_adjunction_check(band), prefix=f"{band.name}.")
    B, target, phi = CatalogService.semilattice_into_powerset()
    report.extend(FunctorService.band_adjunction_check(B, target, phi), prefix="SL2->P2.")
    return report


def _negative_controls() -> CheckReport:
    report = CheckReport(subject="negative controls")
    try:
        FunctorService.functor_C(_semigroup("L2"))
        report.add("left_zero_rejected", False, "functor_C accepted L2")
    except NotLeftReductive:
        report.add("left_zero_rejected", True)
    try:
        FunctorService.cc_to_hom(CatalogService.broken_connection_morphism())
        report.add("class_swap_rejected", False, "cc_to_hom accepted the swapped classes")
    except CCConditionViolated:
        report.add("class_swap_rejected", True)
    return report


class VerificationService:
    """Service assembling and running verify-suite scopes."""

    @staticmethod
    def checks_for(scope: str) -> List[Check]:
        """Named checks of one scope, in run order.

        Raises:
            ValueError: unknown scope
        """
        if scope == "semigroup":
            names = [e.name for e in CatalogService.entries() if e.kind == "semigroup"]
            checks: List[Check] = [(f"laws.{n}", lambda n=n: _semigroup_checks(_semigroup(n))) for n in names]
            checks += [(f"laws.{b.name}", lambda b=b: _semigroup_checks(b)) for b in _bands()]
            return checks
        if scope == "category":
            checks = [(f"normal.{n}", lambda n=n: _category_checks(n)) for n in ROUNDTRIP_CATEGORIES]
            checks += [(f"left_category.{n}", lambda n=n: _left_category_checks(n)) for n in ("T2", "T3", "I2", "RRB3")]
            checks += [(f"lr_iso.{n}", lambda n=n: _lr_iso(n)) for n in ("I2", "I3", "Z2", "SL2")]
            checks.append(("normal.P2_with_empty_set", _normal_control))
            return checks
        if scope == "cones":
            checks = [(f"powerset.P{n}", lambda n=n: _powerset_cones(n)) for n in (2, 3)]
            checks.append(("partition_poset.P3", _partition_poset))
            checks += [(f"greens.{n}", lambda n=n: _cone_greens(_connected(n))) for n in ROUNDTRIP_CATEGORIES]
            checks += [
                (f"greens.L({n})", lambda n=n: _cone_greens(FunctorService.functor_C(_semigroup(n))))
                for n in ROUNDTRIP_SEMIGROUPS
            ]
            checks += [(f"greens.L({b.name})", lambda b=b: _cone_greens(_left_connected(b))) for b in _bands()]
            return checks
        if scope == "connected":
            checks = [(f"connected.{n}", lambda n=n: _connected_checks(_connected(n))) for n in ROUNDTRIP_CATEGORIES]
            checks += [
                (f"connected.L({n})", lambda n=n: _connected_checks(FunctorService.functor_C(_semigroup(n))))
                for n in ROUNDTRIP_SEMIGROUPS
            ]
            checks += [(f"connected.L({b.name})", lambda b=b: _connected_checks(_left_connected(b))) for b in _bands()]
            checks.append(("self_supported", _self_supported_instances))
            checks.append(("duality.P2", _duality))
            return checks
        if scope == "functors":
            checks = [
                (f"roundtrip.{n}", lambda n=n: _semigroup_roundtrip(_semigroup(n)))
                for n in ROUNDTRIP_SEMIGROUPS + ("L2Z", "L2")
            ]
            checks += [(f"roundtrip.{b.name}", lambda b=b: _semigroup_roundtrip(b)) for b in _bands()]
            checks += [(f"roundtrip.{n}", lambda n=n: _category_roundtrip(_connected(n))) for n in ROUNDTRIP_CATEGORIES]
            checks += [
                (f"roundtrip.L({n})", lambda n=n: _category_roundtrip(FunctorService.functor_C(_semigroup(n))))
                for n in ROUNDTRIP_SEMIGROUPS
            ]
            checks += [(f"roundtrip.L({b.name})", lambda b=b: _category_roundtrip(_left_connected(b))) for b in _bands()]
            checks += [
                (f"concrete.{f}{n}", lambda f=f, n=n: _concrete(f, n))
                for f, n in (("T", 2), ("T", 3), ("ST", 3), ("I", 2))
            ]
            checks.append(("naturality.B4", _naturality))
            checks.append(("adjunction", _adjunction))
            checks.append(("negative_controls", _negative_controls))
            return checks
        if scope == "catalog":
            return [
                (f"catalog.{entry.name}", lambda entry=entry: CatalogService.verify_entry(entry))
                for entry in CatalogService.entries(include_census=True)
            ]
        raise ValueError(f"Unknown scope {scope!r}; expected one of {', '.join(SCOPES + ('all',))}")

    @staticmethod
    def run(
        scope: str = "all",
        extra: Optional[List[Check]] = None,
        timer: Optional[StageTimer] = None,
    ) -> SuiteReport:
        """Run every check of a scope (``all`` for every scope).

        Args:
            scope: One of SCOPES or ``all``
            extra: Additional named checks appended to the run
            timer: Collects per-scope timings

        Returns:
            SuiteReport listing every failure
        """
        scopes = SCOPES if scope == "all" else (scope,)
        tracker = FailureTracker()
        timer = timer or StageTimer()
        total = 0
        planned: List[Tuple[str, str, Callable[[], CheckReport]]] = []
        for s in scopes:
            planned.extend((s, name, action) for name, action in VerificationService.checks_for(s))
        planned.extend((scope, name, action) for name, action in (extra or []))

        for s, name, action in planned:
            total += 1
            try:
                with timer.stage(s):
                    report = action()
            except EngineError as exc:
                tracker.record_error(exc, name, s)
                continue
            except Exception as exc:
                logger.exception(f"Unexpected error in {name}", extra={"scope": s, "check": name})
                tracker.record_error(exc, name, s)
                continue
            if report.passed:
                tracker.record_pass(s)
                continue
            for failure in report.failures():
                tracker.record_failure(f"{name}.{failure.name}", s, report.subject, failure.witness)

        failures = [
            SuiteFailure(
                check=f.check,
                scope=f.scope,
                message=f.message,
                witness=f.witness,
                error_type=f.error_type,
                exit_code=f.exit_code,
            )
            for f in tracker.get_failures()
        ]
        logger.info(
            f"verify-suite {scope}: {total} checks, {len(failures)} failures",
            extra={"scope": scope, "check": "verify-suite"},
        )
        return SuiteReport(
            schema_version=settings.REPORT_SCHEMA_VERSION,
            scope=scope,
            passed=not failures,
            exit_code=tracker.exit_code,
            total_checks=total,
            failures=failures,
            summary=tracker.summary(),
            timing=timer.get_summary(),
        )

    @staticmethod
    def exit_code(report: SuiteReport) -> int:
        return report.exit_code

