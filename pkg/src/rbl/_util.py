"""Shared plumbing: exact-fraction serialisation, the portable RNG stream,
atomic file writes and a deterministic parallel map."""

from __future__ import annotations

import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_U64 = (1 << 64) - 1


def splitmix64(seed: int, index: int) -> int:
    """Value #index (0-based) of the splitmix64 stream started at `seed`.

    This is the package's single source of randomness.  It is defined purely
    by 64-bit integer arithmetic, so streams are identical on every platform
    and can be evaluated at any index without stepping through the sequence.
    """
    z = (seed + (index + 1) * SPLITMIX_GAMMA) & _U64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    return (z ^ (z >> 31)) & _U64


def frac_str(q) -> str:
    """Serialise a Fraction (or int) as the exact string "num/den"."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(text: str) -> Fraction:
    """Inverse of frac_str; also accepts plain decimal strings exactly."""
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(text)


def atomic_write_text(path, text: str) -> None:
    """Write text to `path` via a same-directory temp file + rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".rbl-tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def resolve_jobs(jobs=None) -> int:
    """--jobs value, overridden by RBL_JOBS, defaulting to the CPU count."""
    env = os.environ.get("RBL_JOBS")
    if env:
        return max(1, int(env))
    if jobs:
        return max(1, int(jobs))
    return os.cpu_count() or 1


def pmap(fn, items, jobs=None):
    """Map `fn` over `items`, preserving order.

    With jobs > 1 the work is fanned out to worker processes; results are
    collected back in input order, so the output is independent of the
    worker count and of scheduling.
    """
    items = list(items)
    jobs = resolve_jobs(jobs)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, (len(items) + 4 * jobs - 1) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
