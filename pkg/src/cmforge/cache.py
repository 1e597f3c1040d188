"""On-disk polynomial cache: a human-diffable text format.

Layout:
    CMFORGE v1 <kind>
    key=value key=value ...
    <one decimal coefficient per line, lowest power first>   (univariate)
    <i j coefficient triples, one per line>                  (bivariate)
    END

Coefficients stay in decimal so the artifacts can be inspected and diffed;
rationals are written num/den.  A directory-level lock file serializes
writers.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import CacheError
from .polynomials import BiPolynomial, IntPolynomial

TOOL_VERSION = "0.1.0"
KINDS = ("Jpoly", "Phipoly", "classpoly", "divpoly")

MAGIC = "CMFORGE v1"


@dataclass
class CacheEntry:
    kind: str
    params: dict
    payload: object  # IntPolynomial | BiPolynomial | list[Fraction]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CacheError(f"unknown cache kind {self.kind!r}")


class CacheLock:
    """Single-writer lock: an O_EXCL lock file in the cache directory."""

    def __init__(self, directory: Path, timeout: float = 30.0):
        self.path = Path(directory) / ".cmforge.lock"
        self.timeout = timeout
        self._fd = None

    def __enter__(self):
        deadline = time.monotonic() + self.timeout
        while True:
            try:
                self._fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                os.write(self._fd, str(os.getpid()).encode())
                return self
            except FileExistsError:
                if time.monotonic() > deadline:
                    raise CacheError(f"cache lock {self.path} is stuck")
                time.sleep(0.05)

    def __exit__(self, *exc):
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None
        try:
            os.unlink(self.path)
        except FileNotFoundError:
            pass


def entry_filename(kind: str, params: dict) -> str:
    keys = {"Jpoly": ("s",), "Phipoly": ("s",), "classpoly": ("D",), "divpoly": ("D", "N")}
    parts = [f"{k}{params[k]}" for k in keys[kind]]
    return f"{kind}_{'_'.join(parts)}.txt"


def _format_coefficient(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(int(c))


def _parse_coefficient(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def write_entry(directory, entry: CacheEntry, force: bool = False) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / entry_filename(entry.kind, entry.params)
    if path.exists() and not force:
        old = _read_header(path)
        if old.get("version") != TOOL_VERSION:
            raise CacheError(
                f"{path} was written by version {old.get('version')}; "
                "pass force=True to overwrite"
            )
    params = dict(entry.params)
    params.setdefault("version", TOOL_VERSION)
    params.setdefault("created", time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()))
    lines = [f"{MAGIC} {entry.kind}"]
    lines.append(" ".join(f"{k}={v}" for k, v in sorted(params.items())))
    payload = entry.payload
    if isinstance(payload, BiPolynomial):
        for (i, j) in sorted(payload.terms):
            lines.append(f"{i} {j} {payload.terms[(i, j)]}")
    elif isinstance(payload, IntPolynomial):
        lines.extend(_format_coefficient(c) for c in payload.coeffs)
    else:
        lines.extend(_format_coefficient(c) for c in payload)
    lines.append("END")
    with CacheLock(directory):
        path.write_text("\n".join(lines) + "\n")
    return path


def _read_header(path) -> dict:
    with open(path) as fh:
        first = fh.readline().strip()
        if not first.startswith(MAGIC):
            raise CacheError(f"{path}: bad magic line {first!r}")
        second = fh.readline().strip()
    params = {}
    for token in second.split():
        k, _, v = token.partition("=")
        params[k] = v
    return params


def read_entry(path) -> CacheEntry:
    path = Path(path)
    text = path.read_text().splitlines()
    if not text or not text[0].startswith(MAGIC):
        raise CacheError(f"{path}: not a cmforge cache file")
    kind = text[0][len(MAGIC):].strip()
    if kind not in KINDS:
        raise CacheError(f"{path}: unknown kind {kind!r}")
    if text[-1].strip() != "END":
        raise CacheError(f"{path}: missing END terminator (truncated?)")
    params = {}
    for token in text[1].split():
        k, _, v = token.partition("=")
        params[k] = v
    body = [ln.strip() for ln in text[2:-1] if ln.strip()]
    if kind in ("Jpoly", "Phipoly"):
        terms = {}
        for ln in body:
            i, j, c = ln.split()
            terms[(int(i), int(j))] = int(c)
        payload: object = BiPolynomial(terms)
    else:
        coeffs = [_parse_coefficient(ln) for ln in body]
        if all(c.denominator == 1 for c in coeffs):
            payload = IntPolynomial([c.numerator for c in coeffs])
        else:
            payload = coeffs
    entry = CacheEntry(kind, params, payload)
    _validate(entry)
    return entry


def _validate(entry: CacheEntry):
    """Cheap consistency checks on load."""
    if entry.kind == "classpoly":
        from .quadratic import class_number

        D = int(entry.params["D"])
        poly = entry.payload
        if not isinstance(poly, IntPolynomial) or poly.degree != class_number(D):
            raise CacheError(
                f"classpoly D={D}: degree {getattr(poly, 'degree', '?')} "
                f"does not match h(D) = {class_number(D)}"
            )
        if poly.coeffs[-1] != 1:
            raise CacheError(f"classpoly D={D} is not monic")
    elif entry.kind in ("Jpoly", "Phipoly"):
        from .transform import psi

        s = int(entry.params["s"])
        if entry.payload.degree_x != psi(s):
            raise CacheError(
                f"{entry.kind} s={s}: X-degree {entry.payload.degree_x} != psi(s) = {psi(s)}"
            )


def load_or_none(directory, kind: str, params: dict):
    if directory is None:
        return None
    path = Path(directory) / entry_filename(kind, params)
    if not path.exists():
        return None
    entry = read_entry(path)
    if entry.params.get("version") != TOOL_VERSION:
        return None
    return entry
