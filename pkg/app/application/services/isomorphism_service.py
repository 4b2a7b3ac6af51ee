"""Isomorphism search for finite semigroups, posets and categories.

Both searches fix a small generating set, branch over images of the
generators that agree on cheap invariants, and propagate every forced
image through the multiplication (composition) table before branching
again. Candidates are tried in ascending index order, so the first
witness found is the lexicographically least one for that generating set.
"""

import logging
from typing import Callable, Dict, Iterator, List, Optional, Sequence

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import DiGraphMatcher, categorical_edge_match, categorical_node_match

from app.application.dto.check_dto import CheckReport
from app.application.services.category_service import CategoryService
from app.application.services.semigroup_service import SemigroupService
from app.core.config import settings
from app.core.exceptions import CapExceeded
from app.domain.entities.category import FiniteCategory
from app.domain.entities.cone import Cone
from app.domain.entities.morphisms import CategoryIso, SemigroupIso
from app.domain.entities.poset import FinitePoset
from app.domain.entities.semigroup import FiniteSemigroup

logger = logging.getLogger(__name__)


def _closure(table: np.ndarray, seeds: Sequence[int]) -> List[int]:
    """Subsemigroup generated by ``seeds``, in discovery order."""
    seen = list(dict.fromkeys(int(s) for s in seeds))
    members = set(seen)
    k = 0
    while k < len(seen):
        x = seen[k]
        for g in list(seeds):
            y = int(table[x, g])
            if y not in members:
                members.add(y)
                seen.append(y)
        k += 1
    return seen


class IsomorphismService:
    """Service for isomorphism witnesses."""

    # ------------------------------------------------------------------
    # semigroups

    @staticmethod
    def semigroup_invariants(S: FiniteSemigroup) -> np.ndarray:
        """Per-element invariants preserved by isomorphisms.

        Columns: idempotent flag, sizes of the L-, R-, H- and D-class, and
        the number of distinct powers.
        """
        g = SemigroupService.greens(S)
        n = S.size
        t = S.table
        powers = np.zeros(n, dtype=np.int64)
        for a in range(n):
            seen = {a}
            x = a
            while True:
                x = int(t[x, a])
                if x in seen:
                    break
                seen.add(x)
            powers[a] = len(seen)
        columns = [
            np.isin(np.arange(n), g.idempotents).astype(np.int64),
            np.bincount(g.l_class)[g.l_class],
            np.bincount(g.r_class)[g.r_class],
            np.bincount(g.h_class)[g.h_class],
            np.bincount(g.d_class)[g.d_class],
            powers,
        ]
        return np.stack(columns, axis=1)

    @staticmethod
    def generating_set(S: FiniteSemigroup) -> List[int]:
        """Greedy generating set: add the least element not yet generated."""
        gens: List[int] = []
        generated: set = set()
        for a in range(S.size):
            if a not in generated:
                gens.append(a)
                generated = set(_closure(S.table, gens))
            if len(generated) == S.size:
                break
        return gens

    @staticmethod
    def find_semigroup_iso(S: FiniteSemigroup, T: FiniteSemigroup, anti: bool = False) -> Optional[SemigroupIso]:
        """Search for an isomorphism S -> T (anti-isomorphism when ``anti`` is set).

        Returns:
            SemigroupIso witness, or None when S and T are not isomorphic
        """
        target = SemigroupService.opposite(T) if anti else T
        if S.size != target.size:
            return None
        inv_s = IsomorphismService.semigroup_invariants(S)
        inv_t = IsomorphismService.semigroup_invariants(target)
        as_keys = lambda inv: sorted(map(tuple, inv.tolist()))
        if as_keys(inv_s) != as_keys(inv_t):
            return None
        keys_s = [tuple(row) for row in inv_s.tolist()]
        keys_t = [tuple(row) for row in inv_t.tolist()]
        ts, tt = S.table, target.table
        gens = IsomorphismService.generating_set(S)

        def propagate(mapping: Dict[int, int], used: set, pending: List[int]) -> bool:
            queue = list(pending)
            while queue:
                x = queue.pop()
                for y in list(mapping):
                    for a, b in ((x, y), (y, x)):
                        product = int(ts[a, b])
                        image = int(tt[mapping[a], mapping[b]])
                        known = mapping.get(product)
                        if known is None:
                            if image in used or keys_s[product] != keys_t[image]:
                                return False
                            mapping[product] = image
                            used.add(image)
                            queue.append(product)
                        elif known != image:
                            return False
            return True

        def search(depth: int, mapping: Dict[int, int], used: set) -> Optional[Dict[int, int]]:
            if depth == len(gens):
                return mapping if len(mapping) == S.size else None
            g = gens[depth]
            if g in mapping:
                return search(depth + 1, mapping, used)
            for candidate in range(target.size):
                if candidate in used or keys_t[candidate] != keys_s[g]:
                    continue
                trial, trial_used = dict(mapping), set(used)
                trial[g] = candidate
                trial_used.add(candidate)
                if propagate(trial, trial_used, [g]):
                    found = search(depth + 1, trial, trial_used)
                    if found is not None:
                        return found
            return None

        found = search(0, {}, set())
        if found is None:
            return None
        mapping = tuple(found[a] for a in range(S.size))
        if SemigroupService.homomorphism_witness(S, target, mapping) is not None:
            return None
        logger.debug(f"Isomorphism {S!r} -> {T!r} found with {len(gens)} generators")
        return SemigroupIso(S, T, mapping, anti=anti)

    @staticmethod
    def are_isomorphic(S: FiniteSemigroup, T: FiniteSemigroup) -> bool:
        return IsomorphismService.find_semigroup_iso(S, T) is not None

    # ------------------------------------------------------------------
    # posets

    @staticmethod
    def find_poset_iso(P: FinitePoset, Q: FinitePoset) -> Optional[Dict[int, int]]:
        """Order isomorphism P -> Q, or None."""
        if P.size != Q.size:
            return None
        matcher = DiGraphMatcher(P.graph, Q.graph)
        for mapping in matcher.isomorphisms_iter():
            return {int(a): int(b) for a, b in sorted(mapping.items())}
        return None

    # ------------------------------------------------------------------
    # categories

    @staticmethod
    def functor_report(
        C: FiniteCategory,
        D: FiniteCategory,
        object_map: Sequence[int],
        morphism_map: Sequence[int],
        subject: str = "functor",
    ) -> CheckReport:
        """Functor laws and inclusion preservation for explicit object/morphism maps."""
        report = CheckReport(subject=subject)
        obj = np.asarray(object_map, dtype=np.int64)
        mor = np.asarray(morphism_map, dtype=np.int64)
        typed = (D.dom[mor] == obj[C.dom]) & (D.cod[mor] == obj[C.cod])
        report.add("preserves_domains", bool(typed.all()), np.flatnonzero(~typed)[:1].tolist())

        bad_id = [a for a in range(C.num_objects) if int(mor[C.identity(a)]) != D.identity(int(obj[a]))]
        report.add("preserves_identities", not bad_id, bad_id[:1])

        fs, gs = np.nonzero(C.compose >= 0)
        lhs = mor[C.compose[fs, gs]]
        rhs = D.compose[mor[fs], mor[gs]]
        bad = np.flatnonzero(lhs != rhs)
        report.add(
            "preserves_composition",
            bad.size == 0,
            (int(fs[bad[0]]), int(gs[bad[0]])) if bad.size else None,
        )

        bad_incl = None
        for a in range(C.num_objects):
            for b in range(C.num_objects):
                if C.leq[a, b] and int(mor[C.inclusion[a, b]]) != int(D.inclusion[obj[a], obj[b]]):
                    bad_incl = (a, b)
                    break
            if bad_incl:
                break
        report.add("preserves_inclusions", bad_incl is None, bad_incl)
        return report

    @staticmethod
    def category_iso_report(
        C: FiniteCategory,
        D: FiniteCategory,
        object_map: Sequence[int],
        morphism_map: Sequence[int],
        subject: str = "isomorphism",
    ) -> CheckReport:
        """Functor laws plus bijectivity and order reflection."""
        report = IsomorphismService.functor_report(C, D, object_map, morphism_map, subject)
        obj = np.asarray(object_map, dtype=np.int64)
        report.add(
            "objects_bijective",
            C.num_objects == D.num_objects and len(set(obj.tolist())) == C.num_objects,
        )
        report.add(
            "morphisms_bijective",
            C.num_morphisms == D.num_morphisms and len(set(int(x) for x in morphism_map)) == C.num_morphisms,
        )
        reflected = np.array_equal(C.leq, D.leq[np.ix_(obj, obj)])
        report.add("object_order_isomorphism", reflected)
        return report

    @staticmethod
    def _object_graph(C: FiniteCategory) -> nx.DiGraph:
        sizes = C.hom_sizes()
        g = nx.DiGraph()
        for a in range(C.num_objects):
            g.add_node(a, loops=int(sizes[a, a]))
        for a in range(C.num_objects):
            for b in range(C.num_objects):
                if a != b and (sizes[a, b] or C.leq[a, b]):
                    g.add_edge(a, b, homs=int(sizes[a, b]), below=bool(C.leq[a, b]))
        return g

    @staticmethod
    def object_bijections(C: FiniteCategory, D: FiniteCategory) -> Iterator[Dict[int, int]]:
        """Object bijections preserving ⪯ and every hom-set size."""
        matcher = DiGraphMatcher(
            IsomorphismService._object_graph(C),
            IsomorphismService._object_graph(D),
            node_match=categorical_node_match("loops", 0),
            edge_match=categorical_edge_match(["homs", "below"], [0, False]),
        )
        for mapping in matcher.isomorphisms_iter():
            yield {int(a): int(b) for a, b in mapping.items()}

    @staticmethod
    def _morphism_keys(C: FiniteCategory) -> List[tuple]:
        isos = CategoryService.isomorphisms(C)
        return [
            (
                bool(isos[f]),
                CategoryService.is_epi(C, f),
                CategoryService.is_mono(C, f),
                CategoryService.is_retraction(C, f),
                C.is_inclusion(f),
            )
            for f in range(C.num_morphisms)
        ]

    @staticmethod
    def find_category_iso(
        C: FiniteCategory,
        D: FiniteCategory,
        cap: Optional[int] = None,
        accept: Optional[Callable[[CategoryIso], bool]] = None,
    ) -> Optional[CategoryIso]:
        """Search for an isomorphism of categories with subobjects C -> D.

        ``accept`` filters complete candidates; the search backtracks past
        rejected ones.

        Raises:
            CapExceeded: more objects than settings.MAX_ISO_OBJECTS
        """
        cap = settings.MAX_ISO_OBJECTS if cap is None else cap
        if C.num_objects > cap:
            raise CapExceeded("objects in isomorphism search", C.num_objects, cap)
        if C.num_objects != D.num_objects or C.num_morphisms != D.num_morphisms:
            return None
        keys_c = IsomorphismService._morphism_keys(C)
        keys_d = IsomorphismService._morphism_keys(D)
        if sorted(keys_c) != sorted(keys_d):
            return None

        # generators: morphisms not composites of earlier ones, identities and inclusions excluded
        fixed = set(int(x) for x in C.identities) | set(int(x) for x in C.inclusion[C.inclusion >= 0])
        gens: List[int] = []
        reached = np.zeros(C.num_morphisms, dtype=bool)
        reached[list(fixed)] = True
        basis = list(fixed)
        for f in range(C.num_morphisms):
            if reached[f]:
                continue
            gens.append(f)
            basis.append(f)
            while True:
                idx = np.flatnonzero(reached | np.isin(np.arange(C.num_morphisms), basis))
                products = C.compose[np.ix_(idx, idx)]
                new = np.zeros_like(reached)
                new[idx] = True
                new[products[products >= 0]] = True
                if np.array_equal(new, reached):
                    break
                reached = new

        def propagate(mapping: Dict[int, int], used: set, pending: List[int]) -> bool:
            queue = list(pending)
            while queue:
                x = queue.pop()
                for y in list(mapping):
                    for a, b in ((x, y), (y, x)):
                        product = int(C.compose[a, b])
                        if product < 0:
                            continue
                        image = int(D.compose[mapping[a], mapping[b]])
                        if image < 0:
                            return False
                        known = mapping.get(product)
                        if known is None:
                            if image in used or keys_c[product] != keys_d[image]:
                                return False
                            mapping[product] = image
                            used.add(image)
                            queue.append(product)
                        elif known != image:
                            return False
            return True

        for sigma in IsomorphismService.object_bijections(C, D):
            mapping: Dict[int, int] = {}
            for a in range(C.num_objects):
                mapping[C.identity(a)] = D.identity(sigma[a])
                for b in range(C.num_objects):
                    if C.leq[a, b]:
                        mapping[int(C.inclusion[a, b])] = int(D.inclusion[sigma[a], sigma[b]])
            used = set(mapping.values())
            if len(used) != len(mapping) or not propagate(mapping, used, list(mapping)):
                continue

            object_map = tuple(sigma[a] for a in range(C.num_objects))

            def search(depth: int, current: Dict[int, int], taken: set) -> Optional[CategoryIso]:
                if depth == len(gens):
                    if len(current) != C.num_morphisms:
                        return None
                    morphism_map = tuple(current[f] for f in range(C.num_morphisms))
                    if not IsomorphismService.category_iso_report(C, D, object_map, morphism_map).passed:
                        return None
                    iso = CategoryIso(C, D, object_map, morphism_map)
                    return iso if accept is None or accept(iso) else None
                f = gens[depth]
                if f in current:
                    return search(depth + 1, current, taken)
                for candidate in D.hom(sigma[int(C.dom[f])], sigma[int(C.cod[f])]):
                    candidate = int(candidate)
                    if candidate in taken or keys_d[candidate] != keys_c[f]:
                        continue
                    trial, trial_taken = dict(current), set(taken)
                    trial[f] = candidate
                    trial_taken.add(candidate)
                    if propagate(trial, trial_taken, [f]):
                        found = search(depth + 1, trial, trial_taken)
                        if found is not None:
                            return found
                return None

            found = search(0, mapping, used)
            if found is not None:
                return found
        return None

    @staticmethod
    def transport_cone(iso: CategoryIso, cone: Cone) -> Cone:
        """Image of a cone of the source under a category isomorphism."""
        back = {b: a for a, b in enumerate(iso.object_map)}
        components = [iso.morphism_map[cone[back[c]]] for c in range(iso.target.num_objects)]
        return Cone(iso.object_map[cone.vertex], tuple(components))
