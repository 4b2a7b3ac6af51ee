"""Application services.

The pipeline services (``analysis_service``, ``verification_service``)
depend on the text formats and are imported from their modules.
"""

from app.application.services.semigroup_service import SemigroupService
from app.application.services.category_service import CategoryService
from app.application.services.cone_service import ConeService
from app.application.services.connected_service import ConnectedService
from app.application.services.isomorphism_service import IsomorphismService
from app.application.services.functor_service import FunctorService
from app.application.services.catalog_service import CatalogService

__all__ = [
    "SemigroupService",
    "CategoryService",
    "ConeService",
    "ConnectedService",
    "IsomorphismService",
    "FunctorService",
    "CatalogService",
]
