"""Quantized orthonormal systems: Python front end.

Thin wrapper over the compiled ``_qoslab`` module. Report-producing
operations return plain dicts (the core emits JSON).
"""

import json as _json

try:
    from . import _qoslab as _impl
except ImportError:  # running against a build tree, module next to the package
    import _qoslab as _impl

System = _impl.System
UnsupportedNormError = _impl.UnsupportedNormError
ResourceError = _impl.ResourceError

build_system = _impl.build_system
uniform_bound = _impl.uniform_bound
roundtrip_defect = _impl.roundtrip_defect

__version__ = "0.1.0"


def system_from_json(text):
    if isinstance(text, dict):
        text = _json.dumps(text)
    return _impl.system_from_json(text)


def _wrap(fn):
    def wrapped(*args, **kwargs):
        return _json.loads(fn(*args, **kwargs))

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


verify_orthonormality = _wrap(_impl.verify_orthonormality)
verify_riesz = _wrap(_impl.verify_riesz)
estimate_constants = _wrap(_impl.estimate_constants)
clt = _wrap(_impl.clt)
approximate_deltas = _wrap(_impl.approximate_deltas)
pisier_map = _wrap(_impl.pisier_map)

__all__ = [
    "System",
    "UnsupportedNormError",
    "ResourceError",
    "build_system",
    "system_from_json",
    "uniform_bound",
    "roundtrip_defect",
    "verify_orthonormality",
    "verify_riesz",
    "estimate_constants",
    "clt",
    "approximate_deltas",
    "pisier_map",
]
