from .model import (
    DatastoreDef,
    ModuleIdentifier,
    ModuleImplementation,
    ModuleSetDef,
    ModulesStateDocument,
    PlatformInfo,
    ProtocolInfo,
    SchemaDef,
    YangLibraryDocument,
)
from .mappers import (
    map_hello_fallback,
    map_modules_state,
    map_platform,
    map_yang_library_nmda,
)

__all__ = [
    "DatastoreDef",
    "ModuleIdentifier",
    "ModuleImplementation",
    "ModuleSetDef",
    "ModulesStateDocument",
    "PlatformInfo",
    "ProtocolInfo",
    "SchemaDef",
    "YangLibraryDocument",
    "map_hello_fallback",
    "map_modules_state",
    "map_platform",
    "map_yang_library_nmda",
]
