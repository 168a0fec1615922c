from .service import PlatformRegistry, RegistrationEvent, RegistrationReport

__all__ = ["PlatformRegistry", "RegistrationEvent", "RegistrationReport"]
