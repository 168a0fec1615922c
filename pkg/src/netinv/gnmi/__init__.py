from .client import gnmi_discover
from .wire import CAPABILITIES_METHOD, CapabilitiesReply, ModelRecord

__all__ = ["CAPABILITIES_METHOD", "CapabilitiesReply", "ModelRecord", "gnmi_discover"]
