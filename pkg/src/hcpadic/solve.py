"""Solvers for translation-invariant and period-2 boundary laws."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import kernels
from .analytic import hensel_lift, isolate_roots, poly_eval, sqrt_p
from .errors import HenselError, NoSquareRootError, PadicError
from .model import (
    BoundaryField,
    ModelParams,
    existence_gate,
    functional_equation_residual,
    in_Ep,
    lambda_digit_conditions,
    periodic_gate,
    ti_gate,
    ti_polynomial,
    u_polynomial,
    witness_mersenne,
)
from .padic import INF, PadicNumber

OK = "ok"
GATE_FAILURE = "gate_failure"
UNDECIDED = "undecided"
NUMERICAL_FAILURE = "numerical_failure"
# root isolation completed and proved there is no pair in E_p
NO_SOLUTION = "no_solution"

EXIT_CODES = {OK: 0, GATE_FAILURE: 2, UNDECIDED: 2, NO_SOLUTION: 2, NUMERICAL_FAILURE: 3}

# extra digits for the period-2 root isolation, doubled on each retry
_ISOLATION_GUARD = 8
_ISOLATION_RETRIES = 4


def _val_json(v):
    return "inf" if v == INF else int(v)


def _val_parse(v):
    return INF if v == "inf" else int(v)


@dataclass
class Gate:
    name: str
    holds: bool
    witness: str

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "witness": self.witness}


@dataclass(eq=False)
class Solution:
    cls: str  # "TI" or "period-2"
    values: list[PadicNumber]
    precision: int
    residual_valuations: dict = field(default_factory=dict)

    @property
    def residues(self) -> list[int]:
        return [z.residue(self.precision) for z in self.values]

    def to_json(self) -> dict:
        return {
            "class": self.cls,
            "residues": self.residues,
            "precision": self.precision,
            "residual_valuations": {k: _val_json(v) for k, v in self.residual_valuations.items()},
        }

    @classmethod
    def from_json(cls, data: dict, prime: int) -> Solution:
        prec = data["precision"]
        return cls(
            data["class"],
            [PadicNumber.from_residue(r, prime, prec) for r in data["residues"]],
            prec,
            {k: _val_parse(v) for k, v in data["residual_valuations"].items()},
        )


@dataclass(eq=False)
class SolveReport:
    """Outcome of a solver run: gates, verified solutions and diagnostics."""

    kind: str
    status: str
    params: ModelParams
    gates: list[Gate] = field(default_factory=list)
    solutions: list[Solution] = field(default_factory=list)
    checks: list[Gate] = field(default_factory=list)
    message: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "status": self.status,
            "message": self.message,
            "params": self.params.to_json(),
            "gates": [g.to_json() for g in self.gates],
            "checks": [g.to_json() for g in self.checks],
            "solutions": [s.to_json() for s in self.solutions],
        }

    @classmethod
    def from_json(cls, data: dict) -> SolveReport:
        params = ModelParams.from_json(data["params"])
        return cls(
            kind=data["kind"],
            status=data["status"],
            params=params,
            gates=[Gate(**g) for g in data["gates"]],
            solutions=[Solution.from_json(s, params.p) for s in data["solutions"]],
            checks=[Gate(**g) for g in data["checks"]],
            message=data["message"],
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def render_text(self) -> str:
        p, k = self.params.p, self.params.k
        lines = [f"{self.kind} solve  p={p} k={k}  lambda={self.params.fugacity}",
                 f"status: {self.status}"]
        if self.message:
            lines.append(f"note: {self.message}")
        for title, items in (("gates", self.gates), ("checks", self.checks)):
            for g in items:
                mark = "yes" if g.holds else "NO "
                lines.append(f"  {title[:-1]:5s} [{mark}] {g.name}: {g.witness}")
        for s in self.solutions:
            lines.append(f"  {s.cls} solution (mod {p}^{s.precision}):")
            for i, (z, r) in enumerate(zip(s.values, s.residues), 1):
                lines.append(f"    z{i} ≡ {r}  = {z}")
            for name, v in sorted(s.residual_valuations.items()):
                lines.append(f"    v({name}) = {_val_json(v)}")
        return "\n".join(lines)


def _existence_gates(p: int, k: int) -> list[Gate]:
    return [Gate("p | 2^k - 1", existence_gate(p, k), witness_mersenne(p, k))]


# -- translation invariant ---------------------------------------------------


def ti_solve(params: ModelParams, precision: int | None = None) -> SolveReport:
    """Constant boundary law z = ((lambda + z) / z)^k by Hensel lifting from 1."""
    p, k = params.p, params.k
    gates = _existence_gates(p, k) + [
        Gate("p ∤ k + 2", ti_gate(p, k), f"(k + 2) mod {p} = {(k + 2) % p}")
    ]
    report = SolveReport("ti", OK, params, gates)
    if not all(g.holds for g in gates):
        report.status = GATE_FAILURE
        return report
    prec = params.precision if precision is None else min(precision, params.precision)
    F = ti_polynomial(params, prec)
    try:
        z = hensel_lift(F, 1, prec)
    except HenselError as exc:
        report.status = NUMERICAL_FAILURE
        report.message = f"simple-root hypothesis failed despite gates: {exc}"
        return report
    residuals = {
        "F(z)": poly_eval(F, z).valuation,
        "z - ((lambda+z)/z)^k": functional_equation_residual(BoundaryField.constant(z), params),
    }
    report.checks.append(Gate("z in E_p", in_Ep(z), f"z ≡ {z.residue(min(2, prec))} mod {p}^{min(2, prec)}"))
    report.solutions.append(Solution("TI", [z], z.absprec, residuals))
    if not all(c.holds for c in report.checks):
        report.status = NUMERICAL_FAILURE
    return report


def ti_uniqueness_scan(params: ModelParams, modulus_exponent: int) -> list[int]:
    """Residues r ≡ 1 (mod p) in [0, p^m) with F(r) ≡ 0 (mod p^m)."""
    p, m = params.p, modulus_exponent
    F = ti_polynomial(params, m)
    return kernels.root_scan(F.residues, p**m, start=1, step=p, count=p ** (m - 1))


def periodic_residue_scan(params: ModelParams, modulus_exponent: int) -> list[int]:
    """Residues r ≡ 1 (mod p) in [0, p^m) with U(r) ≡ 0 (mod p^m).

    An empirical probe only: clustered roots make many residues vanish.
    """
    p, m = params.p, modulus_exponent
    U = u_polynomial(params, m)
    return kernels.root_scan(U.residues, p**m, start=1, step=p, count=p ** (m - 1))


# -- period two ----------------------------------------------------------------


def _pair_residuals(params: ModelParams, z1: PadicNumber, z2: PadicNumber, U=None) -> dict:
    g = params.g
    out = {}
    if U is not None:
        out["U(z1)"] = poly_eval(U, z1).valuation
        out["U(z2)"] = poly_eval(U, z2).valuation
    out["g(z1) - z2"] = (g(z1) - z2).valuation
    out["g(z2) - z1"] = (g(z2) - z1).valuation
    out["g(g(z1)) - z1"] = (g(g(z1)) - z1).valuation
    out["z1 - z2"] = (z1 - z2).valuation
    out["g(z1) - z1"] = (g(z1) - z1).valuation
    return out


def _pair_ok(res: dict, precision: int) -> bool:
    return (
        res["g(z1) - z2"] >= precision
        and res["g(z2) - z1"] >= precision
        and res["z1 - z2"] < precision
        and res["g(z1) - z1"] < precision
    )


def periodic_solve_general(params: ModelParams, precision: int | None = None) -> SolveReport:
    """Period-2 boundary laws for p >= 7 from the roots of U in E_p.

    The Hensel seed a0 = 1 is tried first.  When U'(1) ≡ 0 (mod p) the two
    members of a period-2 pair share the residue class of 1, so the roots
    are separated by p-adic root isolation instead.
    """
    p, k = params.p, params.k
    gates = _existence_gates(p, k) + [
        Gate("p | k - 2", (k - 2) % p == 0, f"(k - 2) mod {p} = {(k - 2) % p}")
    ]
    report = SolveReport("periodic", OK, params, gates)
    if not periodic_gate(p, k):
        report.status = GATE_FAILURE
        return report
    if p in (2, 3, 5):
        report.status = UNDECIDED
        report.message = "necessary condition holds; existence undecided for p in {3, 5}"
        return report

    want = params.precision if precision is None else min(precision, params.precision)
    guard = _ISOLATION_GUARD
    for _ in range(_ISOLATION_RETRIES):
        work = min(want + guard, params.precision)
        U = u_polynomial(params, work)
        dU1 = U.derivative().eval_residue(1, p)
        seed = Gate("U'(1) ≢ 0 mod p", dU1 != 0, f"U'(1) mod {p} = {dU1}")
        if dU1:
            roots, unresolved = [hensel_lift(U, 1, work)], []
        else:
            iso = isolate_roots(U, center=1, radius_exponent=1)
            roots, unresolved = iso.roots, iso.unresolved
        got = min((r.absprec for r in roots), default=work)
        if got >= want or work >= params.precision:
            break
        guard *= 2
    report.checks.append(seed)
    report.checks.append(Gate("U(1) ≡ 0 mod p", U.eval_residue(1, p) == 0, f"U(1) mod {p} = {U.eval_residue(1, p)}"))
    if unresolved:
        report.checks.append(Gate("roots isolated", False, f"unresolved discs {unresolved}"))

    g = params.g
    seen: list[PadicNumber] = []
    ti_coincident = 0
    for z1 in roots:
        prec = min(z1.absprec, want)
        z1 = z1.with_absprec(prec)
        z2 = g(z1)
        if (z2 - z1).valuation >= prec:
            ti_coincident += 1
            continue
        if any((z1 - s).valuation >= prec for s in seen):
            continue
        seen += [z1, z2]
        res = _pair_residuals(params, z1, z2, U)
        prec = min(prec, z2.absprec)
        if _pair_ok(res, prec) and in_Ep(z1) and in_Ep(z2):
            report.solutions.append(Solution("period-2", [z1, z2], prec, res))
    if ti_coincident:
        report.checks.append(Gate("roots of U distinct from the TI root", False,
                                  f"{ti_coincident} root(s) coincide with the fixed point of g"))
    if not report.solutions:
        if unresolved or ti_coincident:
            report.status = NUMERICAL_FAILURE
            report.message = "no verified period-2 pair among the roots of U in E_p"
        else:
            report.status = NO_SOLUTION
            report.message = f"U has {len(roots)} root(s) in E_p and none forms a period-2 pair"
    return report


def periodic_solve_k2(params: ModelParams, precision: int | None = None) -> SolveReport:
    """Closed-form period-2 pair for k = 2, p = 3 and |lambda - 13|_3 <= 1/27:
    z = (lambda / 2) (lambda - 2 ± sqrt(lambda (lambda - 4)))."""
    p, k, lam = params.p, params.k, params.fugacity
    report = SolveReport("periodic", OK, params, [
        Gate("k = 2", k == 2, f"k = {k}"),
        Gate("p = 3", p == 3, f"p = {p}"),
    ])
    if p == 3:
        d = lambda_digit_conditions(lam)
        report.gates += [
            Gate("lambda_1 = 1", d["lambda_1"] == 1, f"lambda_1 = {d['lambda_1']}"),
            Gate("lambda_2 = 1", d["lambda_2"] == 1, f"lambda_2 = {d['lambda_2']}"),
            Gate("|lambda - 13|_3 <= 1/27", d["valuation_lambda_minus_13"] >= 3,
                 f"v_3(lambda - 13) = {_val_json(d['valuation_lambda_minus_13'])}"),
        ]
    if not all(g.holds for g in report.gates):
        report.status = GATE_FAILURE
        return report

    try:
        s_plus, s_minus = sqrt_p(lam * (lam - 4))
    except NoSquareRootError as exc:
        report.status = NUMERICAL_FAILURE
        report.message = f"lambda(lambda - 4) has no square root: {exc}"
        return report
    z1 = lam / 2 * (lam - 2 + s_plus)
    z2 = lam / 2 * (lam - 2 + s_minus)
    prec = min(z1.absprec, z2.absprec)
    if precision is not None:
        prec = min(prec, precision)
    z1, z2 = z1.with_absprec(prec), z2.with_absprec(prec)

    res = _pair_residuals(params, z1, z2, u_polynomial(params, prec))
    res["Vieta sum"] = (z1 + z2 - (lam * lam - 2 * lam)).valuation
    res["Vieta product"] = (z1 * z2 - lam * lam).valuation
    res["functional equation"] = functional_equation_residual(BoundaryField.alternating(z1, z2), params)
    report.checks += [
        Gate("z1, z2 in E_3", in_Ep(z1) and in_Ep(z2), f"z1 ≡ {z1.residue(1)}, z2 ≡ {z2.residue(1)} mod 3"),
        Gate("z1 ≢ z2", res["z1 - z2"] < prec, f"v(z1 - z2) = {_val_json(res['z1 - z2'])}"),
        Gate("Vieta", min(res["Vieta sum"], res["Vieta product"]) >= prec,
             f"v = {_val_json(res['Vieta sum'])}, {_val_json(res['Vieta product'])}"),
        Gate("g swaps z1, z2", _pair_ok(res, prec),
             f"v = {_val_json(res['g(z1) - z2'])}, {_val_json(res['g(z2) - z1'])}"),
    ]
    report.solutions.append(Solution("period-2", [z1, z2], prec, res))
    if not all(c.holds for c in report.checks):
        report.status = NUMERICAL_FAILURE
    return report


def periodic_solve(params: ModelParams, precision: int | None = None) -> SolveReport:
    """Dispatch: k = 2 and p = 3 use the closed form, p >= 7 root isolation,
    anything else reports its gates."""
    if params.k == 2 and params.p == 3:
        return periodic_solve_k2(params, precision)
    try:
        return periodic_solve_general(params, precision)
    except PadicError as exc:
        report = SolveReport("periodic", NUMERICAL_FAILURE, params, message=str(exc))
        return report

