"""
Check reports and witnesses
"""

import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from .config import REPORT_FORMAT

logger = logging.getLogger(__name__)


def describe(key: Any) -> Any:
    """JSON-friendly label for a generator, word or tuple of words"""
    from .quiver import Gen
    from .tensor_coalgebra import Word

    if isinstance(key, Gen):
        return key.name
    if isinstance(key, Word):
        return key.names() if key.gens else [f"[{key.start}]"]
    if isinstance(key, tuple):
        return [describe(k) for k in key]
    return str(key)


@dataclass
class Witness:
    """First failing instance of an equation"""

    equation: str
    arity: Any
    path: List[str]
    word: Any
    residual: List[List[Any]]


@dataclass
class CheckReport:
    name: str
    passed: bool
    truncation: int
    checked: int = 0
    witness: Optional[Witness] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class CheckRun:
    """
    Accumulates one check; keeps the first witness.

    record() returns False on the first nonzero residual so callers can
    stop early.
    """

    def __init__(self, name: str, truncation: int, field):
        self.name = name
        self.truncation = truncation
        self.field = field
        self.checked = 0
        self.witness: Optional[Witness] = None

    def record(self, equation: str, arity: Any, path: Iterable[str], word: Any,
               residual: Dict[Any, Any]) -> bool:
        self.checked += 1
        residual = {k: c for k, c in residual.items() if c}
        if not residual or self.witness is not None:
            return self.witness is None
        terms = sorted(residual.items(), key=lambda kc: str(describe(kc[0])))
        self.witness = Witness(
            equation=equation,
            arity=arity,
            path=list(path),
            word=describe(word),
            residual=[[describe(k), self.field.format(c)] for k, c in terms],
        )
        logger.warning(f"{self.name}: {equation} fails at arity {arity} on {self.witness.word}")
        return False

    def fail(self, equation: str, detail: str, path: Iterable[str] = ()) -> bool:
        """Record a failure that has no residual vector"""
        self.checked += 1
        if self.witness is None:
            self.witness = Witness(equation, None, list(path), detail, [])
            logger.warning(f"{self.name}: {equation} fails ({detail})")
        return False

    def report(self) -> CheckReport:
        return CheckReport(self.name, self.witness is None, self.truncation, self.checked, self.witness)


@dataclass
class Report:
    command: str
    truncation: int
    field: str
    inputs: Dict[str, str] = field(default_factory=dict)
    checks: List[CheckReport] = field(default_factory=list)
    facts: Dict[str, Any] = field(default_factory=dict)
    timing: float = 0.0

    @property
    def success(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": REPORT_FORMAT,
            "command": self.command,
            "success": self.success,
            "truncation": self.truncation,
            "field": self.field,
            "inputs": self.inputs,
            "checks": [c.to_dict() for c in self.checks],
            "facts": self.facts,
            "timing": self.timing,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


def file_digest(path: str) -> str:
    with open(path, 'rb') as f:
        return hashlib.sha256(f.read()).hexdigest()


def run_checks(checks: Dict[str, Callable[[], Any]], workers: int = 1) -> List[CheckReport]:
    """
    Run independent checks, possibly in a thread pool

    Each callable returns a CheckReport or a list of them. Results are
    sorted by name, then by group and position, so the order does not
    depend on scheduling.
    """
    order = {name: k for k, name in enumerate(checks)}
    results: List[Tuple[str, int, int, CheckReport]] = []

    def collect(name: str, value: Any) -> None:
        reports = [value] if isinstance(value, CheckReport) else list(value)
        for position, report in enumerate(reports):
            results.append((report.name, order[name], position, report))
        logger.info(f"check group {name} done")

    if workers <= 1:
        for name, fn in checks.items():
            collect(name, fn())
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(fn): name for name, fn in checks.items()}
            for future in as_completed(futures):
                collect(futures[future], future.result())
    return [report for *_, report in sorted(results, key=lambda item: item[:3])]
