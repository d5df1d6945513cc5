"""Canonical JSON-ready encoding of nested protocol values.

Integers become lowercase big-endian hex strings without leading zeros,
tuples become lists, None stays null. `unpack` inverts `pack` exactly for
values built from ints, tuples and None, which is all the wire carries.
"""


def pack(obj):
    if isinstance(obj, bool):
        raise TypeError("booleans are not wire values")
    if isinstance(obj, int):
        if obj < 0:
            raise ValueError("negative integers are not wire values")
        return format(obj, "x")
    if obj is None:
        return None
    if isinstance(obj, (tuple, list)):
        return [pack(v) for v in obj]
    if isinstance(obj, dict):
        return {k: pack(v) for k, v in obj.items()}
    raise TypeError(f"cannot pack {type(obj).__name__}")


def unpack(obj):
    if obj is None:
        return None
    if isinstance(obj, str):
        return int(obj, 16)
    if isinstance(obj, list):
        return tuple(unpack(v) for v in obj)
    if isinstance(obj, dict):
        return {k: unpack(v) for k, v in obj.items()}
    raise TypeError(f"cannot unpack {type(obj).__name__}")
