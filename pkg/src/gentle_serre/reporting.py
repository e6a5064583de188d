"""Report assembly and serialization.

JSON is the single source format; CSV is used only for bulk numeric
series.  Every numeric report field carries its provenance route:
"closed-form" (exact surface formulas), "exact-dynamics" (exact ranks from
the twisted-complex engine) or "float-fit" (numerically fitted values).
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Optional

from .cartan import coxeter, log_spectral_radius
from .exceptions import (CartanNotUnimodular, DiscNotCovered, MissingWinding,
                         NotPolynomial, NotTriviallyGraded)
from .invariants import (SurfaceInvariants, Verdict, check_poincare_hopf, classify,
                         coxeter_polynomial_surface, omega_set, serre_dimensions,
                         serre_entropy, tau_entropy)
from .polynomials import IntegerPolynomial
from .presentation import GentlePresentation
from .surface import DissectedSurface, surface_invariants


def routed(value, route: str) -> dict:
    return {"value": value, "route": route}


def poly_json(poly: IntegerPolynomial) -> dict:
    return {"coefficients": list(poly.coefficients), "pretty": poly.pretty()}


def invariants_report(inv: SurfaceInvariants) -> dict:
    """Closed-form block of a report, from surface invariants alone."""
    out: dict = {"surface_invariants": inv.to_json()}
    out["poincare_hopf"] = check_poincare_hopf(inv).value
    try:
        omega = sorted(omega_set(inv))
        out["omega"] = [str(x) for x in omega]
        out["serre_entropy"] = routed(serre_entropy(inv).to_json(), "closed-form")
        out["tau_entropy"] = routed(tau_entropy(inv).to_json(), "closed-form")
        out["classification"] = classify(inv).to_json()
        try:
            out["serre_dimensions"] = routed(serre_dimensions(inv).to_json(), "closed-form")
        except DiscNotCovered:
            out["serre_dimensions"] = {"skipped": "disc is not covered by the dimension formula"}
    except MissingWinding as exc:
        out["omega"] = {"skipped": str(exc)}
    return out


def surface_polynomial_report(inv: SurfaceInvariants, quiver_excess: Optional[int]) -> dict:
    out: dict = {}
    try:
        main = coxeter_polynomial_surface(inv, quiver_excess)
        out["surface_polynomial"] = poly_json(main)
        out["exponent_convention"] = "|Q1| - |Q0| (equivalently 2g + b - 2)"
    except (NotPolynomial, MissingWinding) as exc:
        out["surface_polynomial"] = {"skipped": f"{type(exc).__name__}: {exc}"}
        return out
    # the printed exponent of the source formula, emitted for comparison
    try:
        alt = coxeter_polynomial_surface(inv, 2 - 2 * inv.genus - inv.b)
        out["alternate_exponent_polynomial"] = poly_json(alt)
    except NotPolynomial as exc:
        out["alternate_exponent_polynomial"] = {"skipped": str(exc)}
    return out


def analyze_report(presentation: GentlePresentation) -> dict:
    """Full closed-form report for an algebra input (no iteration)."""
    surface = DissectedSurface(presentation)
    inv = surface.invariants()
    report: dict = {
        "input": presentation.to_json(),
        "kind": "algebra",
        "surface": surface.to_json(),
    }
    report.update(invariants_report(inv))
    report["ag_pairs"] = [list(p) for p in _ag(inv)]
    report["boundary_parallel"] = {
        v: surface.is_boundary_parallel(v) for v in presentation.vertices}
    excess = len(presentation.arrows) - len(presentation.vertices)
    report["coxeter"] = coxeter_report(presentation, inv, excess)
    return report


def _ag(inv: SurfaceInvariants) -> list[tuple[int, int]]:
    return sorted((c.stops, c.stops - c.winding) for c in inv.mixed
                  if c.winding is not None)


def coxeter_report(presentation: GentlePresentation, inv: Optional[SurfaceInvariants],
                   quiver_excess: Optional[int] = None, rho_tol: float = 1e-9) -> dict:
    out: dict = {}
    if inv is not None and all(not c.fully_stopped for c in inv.components):
        out.update(surface_polynomial_report(inv, quiver_excess))
    try:
        data = coxeter(presentation)
    except (CartanNotUnimodular, NotTriviallyGraded) as exc:
        out["cartan_route"] = {"skipped": f"{type(exc).__name__}: {exc}"}
        return out
    out["cartan_matrix"] = [list(r) for r in data.cartan]
    out["coxeter_matrix"] = [list(r) for r in data.coxeter]
    out["cartan_polynomial"] = poly_json(data.char_poly)
    out["spectral_radius"] = routed(data.spectral_radius, "float-fit")
    logrho = log_spectral_radius(data)
    out["log_spectral_radius"] = routed(logrho, "float-fit")
    out["gromov_yomdin_verdict"] = "pass" if abs(logrho) <= rho_tol else "fail"
    if "surface_polynomial" in out and "coefficients" in out.get("surface_polynomial", {}):
        agree = out["surface_polynomial"]["coefficients"] == list(data.char_poly.coefficients)
        out["routes_agree"] = agree
    return out


# -- CSV helpers ---------------------------------------------------------

def orbit_csv(orbit) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["N", "left_length", "right_length", "n", "dim"])
    for step in orbit.steps:
        for n in sorted(step.profile):
            writer.writerow([step.n, step.left, step.right, n, step.profile[n]])
    return buf.getvalue()


def estimates_csv(estimates) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["t", "N", "estimate"])
    for est in estimates:
        for i, value in enumerate(est.estimates, start=1):
            writer.writerow([est.t, i, repr(value)])
    return buf.getvalue()


def entropy_grid_csv(report: dict, t_grid) -> str:
    """Closed-form h_t samples for plotting, one row per (function, t)."""
    from .invariants import EntropyFunction

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["function", "t", "value"])
    for key in ("serre_entropy", "tau_entropy"):
        block = report.get(key)
        if not isinstance(block, dict) or "value" not in block:
            continue
        func = EntropyFunction.from_json(block["value"])
        for t in t_grid:
            writer.writerow([key, str(t), str(func(Fraction(t)))])
    return buf.getvalue()


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
