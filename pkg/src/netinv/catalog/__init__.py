from .model import (
    CATALOG_OWNED_ATTRIBUTES,
    CatalogModuleRecord,
    DependencyRef,
    map_catalog_record,
    merge_policy,
)

__all__ = [
    "CATALOG_OWNED_ATTRIBUTES",
    "CatalogModuleRecord",
    "DependencyRef",
    "map_catalog_record",
    "merge_policy",
]
