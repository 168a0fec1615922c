from .model import Attribute, Entity, Query
from .store import ContextStore

__all__ = ["Attribute", "Entity", "Query", "ContextStore"]
