"""Analysis pipeline behind the ``analyze`` verb.

classify -> Green's data -> 𝕃(S) and its cones -> connection by ℜ ->
roundtrips. A stage whose precondition fails is recorded as skipped with
the reason and the pipeline stops short of what depends on it; invariant
errors raised inside a stage are recorded in the report, cap errors
propagate.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from app.application.dto.check_dto import CheckReport
from app.application.dto.report_dto import (
    AnalysisReport,
    CategorySummary,
    ConeSummary,
    EggboxSummary,
    GreensSummary,
    InputIdentity,
    RoundtripResult,
    StageResult,
)
from app.application.services.catalog_service import CatalogService
from app.application.services.category_service import CategoryService
from app.application.services.cone_service import ConeService
from app.application.services.connected_service import ConnectedService
from app.application.services.functor_service import FunctorService
from app.application.services.semigroup_service import SemigroupService
from app.core.config import settings
from app.core.exceptions import InvariantError, ParseError
from app.domain.entities.category import FiniteCategory
from app.domain.entities.connected import ConnectedCategory
from app.domain.entities.poset import FinitePoset
from app.domain.entities.semigroup import FiniteSemigroup
from app.infrastructure.formats.category_text import dump_category, parse_category
from app.infrastructure.formats.dot import eggbox_to_dot, poset_to_dot
from app.infrastructure.formats.eggbox import eggbox_layout
from app.infrastructure.formats.script import AnalysisScript, looks_like_script, parse_script
from app.infrastructure.formats.semigroup_text import dump_cayley, parse_semigroup
from app.infrastructure.observability.metrics import StageTimer

logger = logging.getLogger(__name__)

Subject = Union[FiniteSemigroup, FiniteCategory, ConnectedCategory]


@dataclass
class LoadedInput:
    """A parsed input with its identity."""

    kind: str
    source: str
    subject: Subject
    canonical_text: str
    script: Optional[AnalysisScript] = None

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.canonical_text.encode("utf-8")).hexdigest()


@dataclass
class AnalysisResult:
    """Report plus DOT diagrams keyed by file stem."""

    report: AnalysisReport
    diagrams: Dict[str, str] = field(default_factory=dict)


class AnalysisService:
    """Service running the analysis pipeline."""

    # ------------------------------------------------------------------
    # input

    @staticmethod
    def _read(path: str) -> str:
        try:
            return Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(0, f"cannot read {path}: {exc.strerror or exc}")

    @staticmethod
    def load(source: str) -> LoadedInput:
        """Resolve ``catalog:NAME`` or a path to a semigroup, category or script.

        Raises:
            ParseError: unreadable or malformed input
            UnknownCatalogEntry: no such catalog entry
        """
        if source.startswith("catalog:"):
            built = CatalogService.build(source[len("catalog:"):])
            if isinstance(built, FiniteSemigroup):
                return LoadedInput("semigroup", source, built, dump_cayley(built))
            return LoadedInput("category", source, built, dump_category(built.category))

        text = AnalysisService._read(source)
        name = Path(source).stem
        if looks_like_script(text):
            script = parse_script(text, base_dir=str(Path(source).parent))
            inner = AnalysisService.load(script.resolve(script.input))
            return LoadedInput(inner.kind, source, inner.subject, text, script=script)
        first = next((line.strip() for line in text.splitlines() if line.split("#", 1)[0].strip()), "")
        if first.startswith("objects"):
            return LoadedInput("category", source, parse_category(text, name=name), text)
        return LoadedInput("semigroup", source, parse_semigroup(text, name=name), text)

    # ------------------------------------------------------------------
    # summaries

    @staticmethod
    def greens_summary(S: FiniteSemigroup) -> GreensSummary:
        g = SemigroupService.greens(S)
        eggbox = [
            EggboxSummary(
                d_class=grid.d_class,
                rows=grid.shape[0],
                columns=grid.shape[1],
                cells=[
                    [("*" if cell.idempotent else "") + ",".join(S.labels[x] for x in cell.elements) for cell in row]
                    for row in grid.cells
                ],
            )
            for grid in eggbox_layout(S)
        ]
        r_order = []
        if SemigroupService.is_regular(S):
            poset = SemigroupService.quotient_poset_R(S)
            r_order = [(poset.labels[a], poset.labels[b]) for a, b in poset.hasse_edges()]
        return GreensSummary(
            order=S.size,
            num_l=g.num_l,
            num_r=g.num_r,
            num_h=g.num_h,
            num_d=g.num_d,
            idempotents=[S.labels[e] for e in g.idempotents],
            monoid_identity=S.labels[S.monoid_identity] if S.monoid_identity is not None else None,
            r_order=r_order,
            eggbox=eggbox,
        )

    @staticmethod
    def category_summary(C: FiniteCategory, axioms: Optional[CheckReport] = None) -> CategorySummary:
        poset = C.poset
        largest = ConnectedService.is_bounded_above(C)
        return CategorySummary(
            name=C.name,
            objects=list(C.object_labels),
            num_morphisms=C.num_morphisms,
            hom_sizes=C.hom_sizes().tolist(),
            order=[(C.object_labels[a], C.object_labels[b]) for a, b in poset.hasse_edges()],
            largest_object=C.object_labels[largest] if largest is not None else None,
            axioms=axioms,
        )

    @staticmethod
    def cone_summary(cc: ConnectedCategory) -> ConeSummary:
        hat = cc.full
        C = cc.category
        g = SemigroupService.greens(hat.semigroup)
        poset = ConnectedService.r_class_poset(hat)
        vertex_counts: Dict[str, int] = {}
        for cone in hat.cones:
            label = C.object_labels[cone.vertex]
            vertex_counts[label] = vertex_counts.get(label, 0) + 1
        sub = ConnectedService.connection_semigroup(cc)
        identity = ConnectedService.bounded_above_identity(cc)
        supported = ConnectedService.is_supported(cc)
        return ConeSummary(
            order=hat.size,
            vertex_counts=vertex_counts,
            idempotents=len(g.idempotents),
            r_classes=[cc.class_label(d) for d in range(g.num_r)],
            r_order=[(cc.class_label(a), cc.class_label(b)) for a, b in poset.hasse_edges()],
            downset=[cc.class_label(d) for d in cc.downset],
            connection_order=sub.size,
            monoid_identity=sub.semigroup.labels[identity] if identity is not None else None,
            supported=supported,
            self_supported=ConnectedService.is_self_supported(cc) if supported else False,
        )

    @staticmethod
    def diagrams(cc: ConnectedCategory, S: Optional[FiniteSemigroup] = None) -> Dict[str, str]:
        """DOT texts: object order, Ĉ/ℛ and (for a semigroup) its egg-box."""
        C = cc.category
        hat_poset = ConnectedService.r_class_poset(cc.full)
        labelled = FinitePoset(hat_poset.leq, tuple(cc.class_label(d) for d in range(hat_poset.size)))
        result = {
            "objects": poset_to_dot(C.poset, name=f"{C.name} objects"),
            "cone_r_classes": poset_to_dot(labelled, name=f"{C.name} cone R-classes"),
        }
        if S is not None:
            result["eggbox"] = eggbox_to_dot(S)
        return result

    # ------------------------------------------------------------------
    # pipeline

    @staticmethod
    def _run_stage(report: AnalysisReport, timer: StageTimer, name: str, action):
        """Run one stage; invariant errors become a failed stage and None is returned."""
        try:
            with timer.stage(name):
                value = action()
        except InvariantError as exc:
            report.stages.append(StageResult(stage=name, status="failed", reason=str(exc)))
            logger.warning(f"Stage {name} failed: {exc}", extra={"stage": name})
            return None
        report.stages.append(StageResult(stage=name, status="ok"))
        return value

    @staticmethod
    def _skip(report: AnalysisReport, names: List[str], reason: str):
        for name in names:
            report.stages.append(StageResult(stage=name, status="skipped", reason=reason))

    @staticmethod
    def _semigroup_roundtrip(report: AnalysisReport, timer: StageTimer, name: str, action) -> None:
        try:
            with timer.stage(name):
                iso = action()
        except InvariantError as exc:
            report.roundtrips.append(RoundtripResult(name=name, status="failed", reason=str(exc)))
            return
        report.roundtrips.append(RoundtripResult(name=name, status="verified", witness=list(iso.mapping)))

    @staticmethod
    def _category_roundtrip(report: AnalysisReport, timer: StageTimer, cc: ConnectedCategory) -> None:
        try:
            with timer.stage("roundtrip_category"):
                m = FunctorService.roundtrip_category(cc)
        except InvariantError as exc:
            report.roundtrips.append(RoundtripResult(name="category", status="failed", reason=str(exc)))
            return
        report.roundtrips.append(
            RoundtripResult(
                name="category",
                status="verified",
                object_map=list(m.object_map),
                morphism_map=list(m.morphism_map),
                class_map={
                    m.source.class_label(d): m.target.class_label(e) for d, e in sorted(m.class_map.items())
                },
            )
        )

    @staticmethod
    def _connected_stages(report: AnalysisReport, timer: StageTimer, cc: ConnectedCategory) -> None:
        report.cones = AnalysisService._run_stage(report, timer, "cone_summary", lambda: AnalysisService.cone_summary(cc))
        if cc.full.size <= settings.CONE_ASSOCIATIVITY_LIMIT:
            greens_check = AnalysisService._run_stage(
                report, timer, "cone_greens", lambda: ConeService.cone_greens_check(cc.full)
            )
            if greens_check is not None:
                report.checks.append(greens_check)
        else:
            AnalysisService._skip(report, ["cone_greens"], f"more than {settings.CONE_ASSOCIATIVITY_LIMIT} cones")
        connected = AnalysisService._run_stage(report, timer, "connected_checks", lambda: ConnectedService.connected_checks(cc))
        if connected is not None:
            report.checks.append(connected)
        if ConnectedService.is_supported(cc):
            supported = AnalysisService._run_stage(
                report, timer, "supported_checks", lambda: ConnectedService.supported_checks(cc)
            )
            if supported is not None:
                report.checks.append(supported)
        AnalysisService._category_roundtrip(report, timer, cc)

    @staticmethod
    def analyze_semigroup(S: FiniteSemigroup, report: AnalysisReport, timer: StageTimer) -> Optional[ConnectedCategory]:
        with timer.stage("classify"):
            flags = SemigroupService.classify(S)
        report.flags = flags.as_dict()
        problems = flags.inconsistencies()
        report.checks.append(
            CheckReport(subject=f"{S.name or 'S'} class flags").add("flags_consistent", not problems, "; ".join(problems))
        )
        with timer.stage("greens"):
            report.greens = AnalysisService.greens_summary(S)
        report.stages.append(StageResult(stage="classify", status="ok"))

        if not flags.regular:
            reason = f"not regular: {S.labels[SemigroupService.non_regular_element(S)]}"
            AnalysisService._skip(report, ["left_category", "cones", "roundtrip"], reason)
            return None
        report.ladders = {
            "l_unipotent": SemigroupService.l_unipotent_ladder(S),
            "inverse": SemigroupService.inverse_ladder(S),
        }

        if not flags.left_reductive:
            a, b = SemigroupService.left_reductive_witness(S)
            reason = f"not left reductive: {S.labels[a]} and {S.labels[b]} act alike"
            if flags.right_reductive:
                AnalysisService._skip(report, ["left_category", "cones"], reason)
                AnalysisService._semigroup_roundtrip(
                    report, timer, "semigroup_dual", lambda: FunctorService.roundtrip_semigroup_dual(S)
                )
            else:
                AnalysisService._skip(report, ["left_category", "cones", "roundtrip"], reason)
            return None

        cc = AnalysisService._run_stage(report, timer, "left_category", lambda: FunctorService.functor_C(S))
        if cc is None:
            return None
        axioms = AnalysisService._run_stage(
            report, timer, "normal_axioms", lambda: CategoryService.verify_normal(cc.category)
        )
        report.category = AnalysisService.category_summary(cc.category, axioms)
        if axioms is not None:
            report.checks.append(axioms)
        AnalysisService._connected_stages(report, timer, cc)
        AnalysisService._semigroup_roundtrip(report, timer, "semigroup", lambda: FunctorService.roundtrip_semigroup(S))
        return cc

    @staticmethod
    def analyze_category(
        subject: Union[FiniteCategory, ConnectedCategory],
        report: AnalysisReport,
        timer: StageTimer,
        downset: Optional[List[int]] = None,
    ) -> Optional[ConnectedCategory]:
        C = subject.category if isinstance(subject, ConnectedCategory) else subject
        axioms = AnalysisService._run_stage(report, timer, "normal_axioms", lambda: CategoryService.verify_normal(C))
        report.category = AnalysisService.category_summary(C, axioms)
        if axioms is None or not axioms.passed:
            if axioms is not None:
                report.checks.append(axioms)
            AnalysisService._skip(report, ["cones", "connect", "roundtrip"], "not a normal category")
            return None
        report.checks.append(axioms)

        if isinstance(subject, ConnectedCategory) and downset is None:
            cc = subject
        else:
            def connect():
                hat = subject.full if isinstance(subject, ConnectedCategory) else ConeService.enumerate_cones(C)
                g = SemigroupService.greens(hat.semigroup)
                return ConnectedService.check_connected(C, hat, downset if downset is not None else range(g.num_r))

            cc = AnalysisService._run_stage(report, timer, "connect", connect)
            if cc is None:
                AnalysisService._skip(report, ["roundtrip"], "category is not connected by the down-set")
                return None

        AnalysisService._connected_stages(report, timer, cc)
        T = FunctorService.functor_S(cc)
        report.flags = SemigroupService.classify(T).as_dict()
        report.greens = AnalysisService.greens_summary(T)
        return cc

    @staticmethod
    def _script_checks(script: AnalysisScript, subject: Subject, cc: Optional[ConnectedCategory]) -> CheckReport:
        report = CheckReport(subject="script checks")
        for check in script.checks:
            if check == "normal":
                C = cc.category if cc is not None else getattr(subject, "category", subject)
                if isinstance(C, FiniteSemigroup):
                    report.add("normal", False, "input has no category")
                else:
                    normal = CategoryService.verify_normal(C)
                    report.add("normal", normal.passed, [f.name for f in normal.failures()][:1])
            elif cc is None:
                report.add(check, False, "no connected category was built")
            elif check == "supported":
                report.add("supported", ConnectedService.is_supported(cc))
            elif check == "self-supported":
                report.add(
                    "self-supported", ConnectedService.is_supported(cc) and ConnectedService.is_self_supported(cc)
                )
            elif check == "bounded-above":
                largest = ConnectedService.is_bounded_above(cc.category)
                identity = ConnectedService.bounded_above_identity(cc)
                report.add("bounded-above", largest is not None and identity is not None)
        return report

    @staticmethod
    def _script_hom(script: AnalysisScript, S: FiniteSemigroup, report: AnalysisReport, timer: StageTimer) -> None:
        target = AnalysisService.load(script.resolve(script.target))
        T = target.subject
        if not isinstance(T, FiniteSemigroup):
            raise ParseError(0, "hom target must be a semigroup")
        missing = [a for a in range(S.size) if a not in script.hom]
        if missing:
            raise ParseError(0, f"hom gives no image for element {missing[0]}")
        phi = [script.hom[a] for a in range(S.size)]
        if any(x < 0 or x >= T.size for x in phi):
            raise ParseError(0, "hom image outside the target")

        def run():
            checks = CheckReport(subject=f"hom {S.name or 'S'} -> {T.name or 'T'}")
            FunctorService.hom_to_cc(phi, S, T)
            checks.add("cc_morphism_built", True)
            checks.extend(FunctorService.naturality_check(phi, S, T))
            return checks

        checks = AnalysisService._run_stage(report, timer, "hom_to_cc", run)
        if checks is not None:
            report.checks.append(checks)

    @staticmethod
    def analyze(source: str, checks: Optional[List[str]] = None) -> AnalysisResult:
        """Run the pipeline on ``catalog:NAME`` or a file path.

        Args:
            source: Input reference
            checks: Extra checks, as in an analysis script

        Returns:
            AnalysisResult with the report and DOT diagrams

        Raises:
            ParseError: malformed input
            CapExceeded: a size or search cap was hit
        """
        loaded = AnalysisService.load(source)
        timer = StageTimer()
        report = AnalysisReport(
            schema_version=settings.REPORT_SCHEMA_VERSION,
            tool=f"{settings.APP_NAME} {settings.APP_VERSION}",
            input=InputIdentity(
                kind=loaded.kind,
                source=loaded.source,
                name=getattr(loaded.subject, "name", ""),
                sha256=loaded.sha256,
            ),
        )
        script = loaded.script or AnalysisScript(input=source)
        if checks:
            script = script.model_copy(update={"checks": list(script.checks) + list(checks)})
        logger.info(f"Analyzing {source}", extra={"stage": "analyze"})

        S: Optional[FiniteSemigroup] = None
        if isinstance(loaded.subject, FiniteSemigroup):
            S = loaded.subject
            cc = AnalysisService.analyze_semigroup(S, report, timer)
            if script.target is not None:
                AnalysisService._script_hom(script, S, report, timer)
        else:
            cc = AnalysisService.analyze_category(loaded.subject, report, timer, downset=script.downset)
        if script.checks:
            report.checks.append(AnalysisService._script_checks(script, loaded.subject, cc))

        report.timing = timer.get_summary()
        diagrams = AnalysisService.diagrams(cc, S) if cc is not None else {}
        if cc is None and S is not None:
            diagrams["eggbox"] = eggbox_to_dot(S)
        return AnalysisResult(report=report, diagrams=diagrams)

