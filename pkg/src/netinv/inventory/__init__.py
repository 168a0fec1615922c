from .service import InventoryService

__all__ = ["InventoryService"]
