"""Domain entities."""

from app.domain.entities.poset import FinitePoset
from app.domain.entities.semigroup import ClassFlags, FiniteSemigroup, GreensData
from app.domain.entities.category import FiniteCategory, LeftCategory, MorphismTriple, NormalFactorization
from app.domain.entities.cone import Cone, ConeSemigroup
from app.domain.entities.connected import ConnectedCategory, SupportMap
from app.domain.entities.morphisms import CategoryIso, CCMorphism, Homomorphism, SemigroupIso
from app.domain.entities.catalog import CatalogEntry, PartitionLabel

__all__ = [
    "FinitePoset",
    "ClassFlags",
    "FiniteSemigroup",
    "GreensData",
    "FiniteCategory",
    "LeftCategory",
    "MorphismTriple",
    "NormalFactorization",
    "Cone",
    "ConeSemigroup",
    "ConnectedCategory",
    "SupportMap",
    "CategoryIso",
    "CCMorphism",
    "Homomorphism",
    "SemigroupIso",
    "CatalogEntry",
    "PartitionLabel",
]
