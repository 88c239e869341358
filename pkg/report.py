"""
Pipelines from raw curve data to an AnalysisReport, and the table drivers.
"""
from __future__ import annotations

import logging
import multiprocessing
import time
from dataclasses import dataclass, field

from classgroup import EnumerationLimitError
from classgroup_cache import configure_cache
from constants import Assumption
from cubesum import CubeSumVerdict, cube_sum_verdict
from curves import normalize_type1, validate_type2
from eisenstein import is_square_in_K
from localdata import compute_S123, type1_sets
from selmer import (ConsistencyError, RankCertificate, SelmerBounds, check_over_Q, rank_identity, sha_floor,
                    torsion_phi_dim, type1_bounds_K, type1_bounds_Q, type1_class_ranks, type1_dual_bounds_Q,
                    type1_exact_with_root_number, type1_sel3_bounds, type2_bounds, type2_class_ranks,
                    type2_dual_bounds, type2_sel3_bounds)

TABLE1_COLUMNS = ["a", "S_a", "S_a(Q)", "S_aα²(Q)", "|S_a(L)|", "h³_{S_a(L)}", "r",
                  "s^φ_l", "s^φ_u", "s³_l", "s³_u"]
TABLE2_COLUMNS = ["a", "b", "S₁", "S₂", "S₃", "h³_{S₁,₂(L)}", "h³_{S₁,₃(L)}", "r",
                  "s^Ψ_l", "s^Ψ_u", "s³_l", "s³_u"]


@dataclass
class AnalysisReport:
    kind: str
    inputs: dict[str, int]
    local_sets: dict[str, list[str]] = field(default_factory=dict)
    class_ranks: dict[str, int | None] = field(default_factory=dict)
    bounds: dict[str, SelmerBounds] = field(default_factory=dict)
    exact: dict[str, int] = field(default_factory=dict)
    verdict: CubeSumVerdict | None = None
    assumptions: list[Assumption] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)


def _cell(value) -> str:
    return "" if value is None else str(value)


def format_primes(primes) -> str:
    return "{" + ", ".join(str(q) for q in primes) + "}" if primes else "∅"


def _collect_assumptions(report: AnalysisReport) -> None:
    for bounds in report.bounds.values():
        for tag in bounds.assumptions:
            if tag not in report.assumptions:
                report.assumptions.append(tag)


def analyze_type1(a: int, root_number: int | None = None, rank: int | None = None,
                  sha_phi: int | None = None, limit: int | None = None) -> AnalysisReport:
    """
    Everything known about E_a: the sets S_a, the class ranks, the φ- and
    3-Selmer intervals over K and Q, and refinements from external data.

    :param rank: rk E_a(K), supplied from outside.
    :raises InvalidCurveError: for a = 0.
    :raises EnumerationLimitError: when a class group is too large.
    :raises ConsistencyError: when the bounds contradict each other.
    """
    start = time.perf_counter()
    a = normalize_type1(a).a
    cert = RankCertificate(rank, sha_phi, root_number) if rank is not None else None
    sets = type1_sets(a)
    report = AnalysisReport("type1", {"a": a})
    report.local_sets = {
        "S_a": [str(q) for q in sets.S_a],
        "S_a(Q)": [str(ell) for ell in sets.S_a_Q],
        "S_aα²(Q)": [str(ell) for ell in sets.S_aalpha2_Q],
    }
    report.exact["|S_a(L)|"] = sets.size_SaL
    report.timings["local"] = time.perf_counter() - start

    square = is_square_in_K(a)
    ranks = None
    if not square:
        ranks = type1_class_ranks(a, sets, limit)
        report.class_ranks = {"h³_{S_a(L)}": ranks.h_SL, "h³_{S_a(Q(√-3a))}": ranks.h_hat,
                              "h³_{S_aα²(Q(√a))}": ranks.h_tilde}
    report.timings["class_groups"] = time.perf_counter() - start

    over_K = type1_bounds_K(a, sets, ranks)
    over_Q = type1_bounds_Q(a, sets, limit)
    dual_Q = type1_dual_bounds_Q(a, sets, limit)
    check_over_Q(a, over_K, over_Q, dual_Q)
    report.bounds = {"phi_K": over_K, "phi_Q": over_Q, "phi_hat_Q": dual_Q}

    exact_phi = None
    if root_number is not None:
        exact_phi = type1_exact_with_root_number(a, sets, over_K, root_number)
        report.exact["dim Sel^φ(E/K)"] = exact_phi
    report.bounds["sel3_K"] = type1_sel3_bounds(a, sets, over_K, cert, exact_phi)

    if cert is not None and not square:
        report.exact["Ш(E/K)[φ] floor"] = sha_floor(a, sets, ranks, cert)
    if exact_phi is not None and sha_phi is not None:
        report.exact["rk E(Q)"] = rank_identity(exact_phi, torsion_phi_dim(a), sha_phi)
        if cert is not None and 2 * report.exact["rk E(Q)"] != cert.rank:
            raise ConsistencyError(f"rk E(K) = {cert.rank} but the Selmer data give rk E(Q) = "
                                   f"{report.exact['rk E(Q)']}")
    _collect_assumptions(report)
    report.timings["total"] = time.perf_counter() - start
    logging.info(f"Type I a = {a}: Sel^φ ∈ {over_K}, Sel³ ∈ {report.bounds['sel3_K']}")
    return report


def analyze_type2(a: int, b: int, rank: int | None = None, limit: int | None = None) -> AnalysisReport:
    """
    Sets S₁, S₂, S₃, class ranks and the Ψ, Ψ̂ and 3-Selmer intervals of E_{a,b}.

    :param rank: rk E_{a,b}(K), supplied from outside.
    :raises InvalidCurveError: when (a, b) is not a valid pair.
    :raises EnumerationLimitError: when a class group is too large.
    """
    start = time.perf_counter()
    validate_type2(a, b)
    cert = RankCertificate(rank) if rank is not None else None
    sets = compute_S123(a, b)
    report = AnalysisReport("type2", {"a": a, "b": b})
    report.local_sets = {name: [str(q) for q in getattr(sets, name)] for name in ("S1", "S2", "S3")}
    report.exact["|S₁,₂(L)|"] = sets.size_S12L
    report.exact["|S₁,₃(L)|"] = sets.size_S13L
    report.timings["local"] = time.perf_counter() - start

    ranks = None
    if not is_square_in_K(a):
        ranks = type2_class_ranks(a, sets, limit)
        report.class_ranks = {"h³_{S₁,₂(L)}": ranks.h12, "h³_{S₁,₃(L)}": ranks.h13}
    report.timings["class_groups"] = time.perf_counter() - start

    report.bounds = {
        "psi_K": type2_bounds(a, b, sets, ranks),
        "psi_hat_K": type2_dual_bounds(a, b, sets, ranks),
        "sel3_K": type2_sel3_bounds(a, b, sets, ranks, cert),
    }
    _collect_assumptions(report)
    report.timings["total"] = time.perf_counter() - start
    logging.info(f"Type II ({a}, {b}): Sel^Ψ ∈ {report.bounds['psi_K']}, Sel³ ∈ {report.bounds['sel3_K']}")
    return report


def analyze_cubesum(D: int, sha_even: bool = False, rank_positive: bool = False,
                    height: int | None = None) -> AnalysisReport:
    """
    :raises UnsupportedShapeError: for D not of the form ℓ, 2ℓ, ℓ².
    """
    start = time.perf_counter()
    kwargs = {"height": height} if height is not None else {}
    verdict = cube_sum_verdict(D, sha_even, rank_positive, **kwargs)
    report = AnalysisReport("cubesum", {"D": D}, verdict=verdict, assumptions=list(verdict.hypotheses))
    report.exact["dim Sel^φ(E/K)"] = verdict.selmer_dim
    report.timings["total"] = time.perf_counter() - start
    return report


def table1_row(a: int, r: int | None = None, limit: int | None = None) -> dict[str, str]:
    a = normalize_type1(a).a
    sets = type1_sets(a)
    ranks = None if is_square_in_K(a) else type1_class_ranks(a, sets, limit)
    phi = type1_bounds_K(a, sets, ranks)
    sel3 = type1_sel3_bounds(a, sets, phi, RankCertificate(r) if r is not None else None)
    values = [a, format_primes(sets.S_a), format_primes(sets.S_a_Q), format_primes(sets.S_aalpha2_Q),
              sets.size_SaL, None if ranks is None else ranks.h_SL, r,
              phi.lower, phi.upper, sel3.lower, sel3.upper]
    return dict(zip(TABLE1_COLUMNS, (_cell(v) for v in values)))


def table2_row(a: int, b: int, r: int | None = None, limit: int | None = None) -> dict[str, str]:
    sets = compute_S123(a, b)
    ranks = None if is_square_in_K(a) else type2_class_ranks(a, sets, limit)
    psi = type2_bounds(a, b, sets, ranks)
    sel3 = type2_sel3_bounds(a, b, sets, ranks, RankCertificate(r) if r is not None else None)
    values = [a, b, format_primes(sets.S1), format_primes(sets.S2), format_primes(sets.S3),
              *((None, None) if ranks is None else (ranks.h12, ranks.h13)), r,
              psi.lower, psi.upper, sel3.lower, sel3.upper]
    return dict(zip(TABLE2_COLUMNS, (_cell(v) for v in values)))


def _table_task(task: tuple) -> dict[str, str]:
    which, values, r, limit = task
    try:
        if which == 1:
            return table1_row(values[0], r, limit)
        return table2_row(values[0], values[1], r, limit)
    except (ValueError, EnumerationLimitError, ConsistencyError) as e:
        logging.warning(f"Row {values} failed: {e}")
        columns = TABLE1_COLUMNS if which == 1 else TABLE2_COLUMNS
        row = dict.fromkeys(columns, "")
        row.update(zip(columns, (str(v) for v in values)))
        row["error"] = f"{type(e).__name__}: {e}"
        return row


def _init_worker(cache_path: str | None) -> None:
    configure_cache(cache_path)


def run_table(which: int, rows: list[tuple[tuple[int, ...], int | None]], workers: int = 1,
              limit: int | None = None, cache_path: str | None = None) -> list[dict[str, str]]:
    """
    One output row per input row, in input order. A failing row keeps its
    inputs and gains an `error` column.

    :param rows: ((a,) or (a, b), external rank or None) pairs.
    :raises ValueError: for a table number other than 1 or 2.
    """
    if which not in (1, 2):
        raise ValueError(f"there is no table {which}")
    tasks = [(which, values, r, limit) for values, r in rows]
    if workers <= 1 or len(tasks) <= 1:
        results = [_table_task(t) for t in tasks]
    else:
        with multiprocessing.Pool(processes=min(workers, len(tasks)),
                                  initializer=_init_worker, initargs=(cache_path,)) as pool:
            results = list(pool.imap(_table_task, tasks))
    logging.info(f"Table {which}: {len(results)} rows, {sum('error' in r for r in results)} failed")
    return results
