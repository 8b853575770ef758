from .base import RootBackend, RootContext
from .complex_backend import ComplexBackend
from .group_ring import GroupRingBackend, GroupRingElement

# Backend registry
BACKEND_REGISTRY = {
    "complex": ComplexBackend,
    "exact": GroupRingBackend,
}


def get_backend(backend_name: str, ctx: RootContext) -> RootBackend:
    """
    Factory function to get a root-of-unity backend bound to a context.

    Args:
        backend_name: Name of the backend (e.g., "complex")
        ctx: Root-of-unity context the backend evaluates against

    Returns:
        An instance of the requested backend

    Raises:
        ValueError: If the backend name is not in the registry
    """
    if backend_name not in BACKEND_REGISTRY:
        available = list(BACKEND_REGISTRY.keys())
        raise ValueError(f"Backend '{backend_name}' not found. Available backends: {available}")

    backend_class = BACKEND_REGISTRY[backend_name]
    return backend_class(ctx)


__all__ = [
    "RootBackend",
    "RootContext",
    "ComplexBackend",
    "GroupRingBackend",
    "GroupRingElement",
    "get_backend",
    "BACKEND_REGISTRY",
]
