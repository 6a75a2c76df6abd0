"""Pass/fail records shared by the verification routines."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator


@dataclass
class Check:
    id: str
    ref: str
    passed: bool
    residual: float | None = None
    exact: bool = False
    detail: Any = None
    seconds: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "id": self.id,
            "ref": self.ref,
            "status": "pass" if self.passed else "fail",
            "exact": self.exact,
            "residual": self.residual,
        }
        if self.detail is not None:
            d["detail"] = self.detail
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return d


@dataclass
class Report:
    """Ordered collection of checks; truthy iff every check passed."""

    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def exact(self, id: str, ref: str, ok: bool, detail: Any = None) -> Check:
        return self.add(Check(id, ref, bool(ok), exact=True, detail=detail))

    def numeric(self, id: str, ref: str, residual: float, tol: float, detail: Any = None) -> Check:
        residual = float(residual)
        return self.add(Check(id, ref, residual < tol, residual=residual, detail=detail))

    def timed(self, id: str, ref: str, fn: Callable[[], Any]) -> Check:
        """Run ``fn`` and record it; ``fn`` returns a bool or a (bool, detail) pair."""
        t0 = time.perf_counter()
        out = fn()
        ok, detail = out if isinstance(out, tuple) else (out, None)
        chk = self.exact(id, ref, ok, detail)
        chk.seconds = time.perf_counter() - t0
        return chk

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)

    def __getitem__(self, id: str) -> Check:
        for c in self.checks:
            if c.id == id:
                return c
        raise KeyError(id)

    def __bool__(self) -> bool:
        return self.passed
