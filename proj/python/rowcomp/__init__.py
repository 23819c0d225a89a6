try:
    from ._rowcomp import *  # noqa: F401,F403
    from . import _rowcomp as _core
except ImportError:  # module built outside the package (plain CMake build)
    from _rowcomp import *  # noqa: F401,F403
    import _rowcomp as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
