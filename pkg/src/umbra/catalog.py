"""Named identity checks and the report format shared by the CLI and tests."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from umbra import opcalc
from umbra.errors import UmbraError
from umbra.family import BUILTINS, builtin
from umbra.series import rat_to_json

CATALOG = (
    "commutator",
    "xi-repr",
    "change-of-basis",
    "prop-dp",
    "prop-x",
    "dpk",
    "conj-dp",
    "repr-theorem",
    "theta-corollary",
    "eigen-q",
    "overline-consistency",
)

RANDOM_OPERATORS = 5


@dataclass
class VerifyReport:
    identity: str
    family: str
    N: int
    N_y: int
    seed: int
    checks: list = field(default_factory=list)
    error: str | None = None
    wall_time: float = 0.0

    @property
    def ok(self):
        return self.error is None and bool(self.checks) and all(c.ok for c in self.checks)

    @property
    def status(self):
        return "pass" if self.ok else "fail"

    @property
    def window(self):
        windows = [c.window for c in self.checks if c.window >= 0]
        return min(windows) if windows else -1

    @property
    def mismatch(self):
        """First failing check as ``(name, column, row, lhs, rhs)``."""
        for c in self.checks:
            if not c.ok:
                return (c.name,) + tuple(c.mismatch or ())
        return None

    def to_json(self):
        # wall time is left out so that reports are byte-stable
        return {
            "identity": self.identity,
            "family": self.family,
            "N": self.N,
            "N_y": self.N_y,
            "seed": self.seed,
            "status": self.status,
            "window": self.window,
            "mismatch": _mismatch_json(self.mismatch),
            "error": self.error,
            "checks": [
                {
                    "name": c.name,
                    "status": "pass" if c.ok else "fail",
                    "window": c.window,
                    "mismatch": _mismatch_json((c.name,) + tuple(c.mismatch)) if c.mismatch else None,
                    "note": c.note,
                }
                for c in self.checks
            ],
        }


def _mismatch_json(m):
    if m is None or len(m) < 5:
        return None
    name, column, row, lhs, rhs = m
    return {"check": name, "column": column, "row": row, "lhs": rat_to_json(lhs), "rhs": rat_to_json(rhs)}


def _partners(fam):
    return [builtin(name, fam.N, fam.N_y) for name in BUILTINS]


def _change_of_basis(fam, seed):
    report = opcalc.Report("change-of-basis")
    for other in _partners(fam):
        report.extend(opcalc.verify_change_of_basis(fam, other))
        report.extend(opcalc.verify_change_of_basis(other, fam))
    return report


def repr_operators(N, seed):
    """Operators fed to the representation theorem: ``1``, ``D``, ``x`` and seeded random ones."""
    ops = [("ID", opcalc.identity(N)), ("D", opcalc.op_D(N)), ("X", opcalc.op_X(N))]
    for s in range(seed, seed + RANDOM_OPERATORS):
        ops.append((f"random({s})", opcalc.random_operator(N, s)))
    return ops


def _repr_theorem(fam, seed):
    report = opcalc.Report("repr-theorem")
    for label, T in repr_operators(fam.N, seed):
        report.extend(opcalc.verify_representation_theorem(fam, T, label))
    return report


_RUNNERS = {
    "commutator": lambda fam, seed: opcalc.verify_commutator(fam),
    "xi-repr": lambda fam, seed: opcalc.xi_representation_check(fam),
    "change-of-basis": _change_of_basis,
    "prop-dp": lambda fam, seed: opcalc.verify_prop_dp(fam),
    "prop-x": lambda fam, seed: opcalc.verify_prop_x(fam),
    "dpk": lambda fam, seed: opcalc.verify_dpk(fam),
    "conj-dp": lambda fam, seed: opcalc.verify_conj_dp(fam),
    "repr-theorem": _repr_theorem,
    "theta-corollary": lambda fam, seed: opcalc.verify_theta_corollary(fam),
    "eigen-q": lambda fam, seed: opcalc.verify_eigen_q(fam),
    "overline-consistency": lambda fam, seed: opcalc.verify_overline(fam),
}


def _timed(identity, fam, label, seed, body):
    start = time.perf_counter()
    report = VerifyReport(identity, label, fam.N, fam.N_y, seed)
    try:
        report.checks = list(body())
    except UmbraError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
    report.wall_time = time.perf_counter() - start
    return report


def run_identity(name, fam, seed=0, label=None):
    if name not in _RUNNERS:
        raise KeyError(f"unknown identity {name!r}; known: {', '.join(CATALOG)}")
    return _timed(name, fam, label or fam.name, seed, lambda: _RUNNERS[name](fam, seed).checks)


def run_catalog(fam, seed=0, label=None, names=CATALOG):
    """Reports in catalog order."""
    return [run_identity(name, fam, seed, label) for name in names]


def run_expression(text, fam, seed=0, label=None):
    """Check ``LHS == RHS`` written in the operator language."""
    from umbra.dsl import parse_identity, to_text

    eq = parse_identity(text)
    name = to_text(eq)

    def body():
        lhs, rhs = eq.lhs.evaluate(fam), eq.rhs.evaluate(fam)
        return [opcalc.compare(name, lhs, rhs)]

    return _timed(name, fam, label or fam.name, seed, body)
