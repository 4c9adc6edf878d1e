"""``logdelta-lab`` command line front end.

Usage::

    logdelta-lab spectrum --gamma 1 --which 1 --k 5 --out results/
    logdelta-lab sweep --gamma-min -0.5 --gamma-max 0.5 --steps 21
    logdelta-lab evolve --gamma -1 --perturb odd --eps 1e-3 --t-end 15
    logdelta-lab report --gamma -1 --sector radial

Options may also come from a ``key = value`` file passed with ``--config``;
flags given on the command line take precedence. Exit status is 0 on
success, 1 for usage errors, 2 for numerical failures (including failed
internal cross-checks) and 3 for I/O errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Grid, PhysParams, Sector, gausson
from .evolution import EvolutionConfig, evolve, perturbation
from .spectral import (
    DiscretizationError,
    Parity,
    assemble_l,
    count_sign_changes,
    eigenvalues_bisection,
    eigenvector_inverse_iteration,
    gamma_sweep,
    neg_count_sturm,
    sector_restrict,
    stability_index,
)
from .specfun import MatchingProblem, merged_eigs, semianalytic_eigs
from .svg import render_svg

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

COMMANDS = ("spectrum", "sweep", "evolve", "report")

# key -> (type, default); None default means "no default"
_KEYS = {
    "gamma": (float, None),
    "omega": (float, -1.0),
    "which": (int, 1),
    "k": (int, 5),
    "sector": (str, "full"),
    "gamma_min": (float, -0.5),
    "gamma_max": (float, 0.5),
    "steps": (int, 21),
    "dt": (float, 1e-3),
    "t_end": (float, 10.0),
    "clamp": (float, 50.0),
    "record_every": (int, 100),
    "perturb": (str, "none"),
    "eps": (float, 1e-2),
    "half_width": (float, 12.0),
    "n_points": (int, 2401),
    "out": (str, "."),
    "seed": (int, 0),
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: PhysParams
    half_width: float
    n_points: int
    which: int = 1
    k: int = 5
    sector: Sector = Sector.FULL
    gamma_min: float = -0.5
    gamma_max: float = 0.5
    steps: int = 21
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    perturb: str = "none"
    eps: float = 1e-2
    output_dir: Path = Path(".")
    seed: int = 0

    @property
    def grid(self) -> Grid:
        return Grid(self.half_width, self.n_points)


def read_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key '{key}'")
            values[key] = val
    return values


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="logdelta-lab",
        description="Spectra, stability verdicts and dynamics for the logarithmic "
        "NLS equation with a delta interaction.",
    )
    p.add_argument("command", choices=COMMANDS)
    for key in _KEYS:
        flag = "--" + key.replace("_", "-")
        p.add_argument(flag, dest=key, default=None, metavar=key.upper())
    p.add_argument("--config", default=None, metavar="PATH")
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_config(argv=None) -> RunConfig:
    parser = _parser()
    parser.__class__ = _Parser
    ns = parser.parse_args(argv)
    merged: dict[str, str] = {}
    if ns.config:
        try:
            merged.update(read_config_file(ns.config))
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from exc
    for key in _KEYS:
        val = getattr(ns, key)
        if val is not None:
            merged[key] = val

    vals = {}
    for key, (typ, default) in _KEYS.items():
        if key in merged:
            try:
                vals[key] = typ(merged[key])
            except ValueError:
                raise UsageError(f"malformed value for {key}: {merged[key]!r}") from None
        else:
            vals[key] = default

    cmd = ns.command
    if cmd != "sweep" and vals["gamma"] is None:
        raise UsageError("missing required key: gamma")
    gamma = vals["gamma"] if vals["gamma"] is not None else 0.0
    for key in ("gamma", "omega", "gamma_min", "gamma_max", "dt", "t_end", "clamp", "eps", "half_width"):
        v = vals[key]
        if v is not None and not math.isfinite(v):
            raise UsageError(f"{key} must be finite")
    if vals["n_points"] % 2 == 0:
        raise UsageError("n_points must be odd")
    if vals["n_points"] < 3:
        raise UsageError("n_points must be at least 3")
    if vals["half_width"] <= 0:
        raise UsageError("half_width must be positive")
    if vals["which"] not in (1, 2):
        raise UsageError("which must be 1 or 2")
    if not 1 <= vals["k"] <= vals["n_points"] // 2:
        raise UsageError("k must be between 1 and n_points/2")
    sector = vals["sector"].lower()
    if sector not in ("full", "radial"):
        raise UsageError("sector must be full or radial")
    if vals["steps"] < 3:
        raise UsageError("steps must be at least 3")
    if not vals["gamma_min"] < vals["gamma_max"]:
        raise UsageError("gamma_min must be below gamma_max")
    if vals["perturb"] not in ("none", "even", "odd", "mixed"):
        raise UsageError("perturb must be none, even, odd or mixed")
    if cmd == "report" and gamma == 0:
        raise UsageError("report requires gamma != 0")
    h = 2.0 * vals["half_width"] / (vals["n_points"] - 1)
    try:
        evo = EvolutionConfig(vals["dt"], vals["t_end"], vals["clamp"], vals["record_every"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if cmd == "evolve" and evo.dt > 0.5 * h:
        raise UsageError(f"dt must not exceed half the mesh spacing ({0.5 * h:g})")

    return RunConfig(
        command=cmd,
        params=PhysParams(vals["omega"], gamma),
        half_width=vals["half_width"],
        n_points=vals["n_points"],
        which=vals["which"],
        k=vals["k"],
        sector=Sector.FULL if sector == "full" else Sector.RADIAL,
        gamma_min=vals["gamma_min"],
        gamma_max=vals["gamma_max"],
        steps=vals["steps"],
        evolution=evo,
        perturb=vals["perturb"],
        eps=vals["eps"],
        output_dir=Path(vals["out"]),
        seed=vals["seed"],
    )


def _num(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_num(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and float data of a CSV written by this module."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


def report_tolerance(h: float) -> float:
    """Allowed gap between matrix and matching-condition eigenvalues."""
    return 20.0 * h * h


def _spectrum(cfg: RunConfig) -> dict[str, str]:
    grid = cfg.grid
    gamma = cfg.params.gamma
    if cfg.sector is Sector.FULL:
        op = assemble_l(grid, gamma, cfg.which)
    else:
        op = sector_restrict(grid, gamma, cfg.which, Parity.EVEN)
    lams = eigenvalues_bisection(op, cfg.k)
    vecs = [eigenvector_inverse_iteration(op, lam) for lam in lams]
    nodes = [count_sign_changes(v.values.real) for v in vecs]
    x = grid.nodes
    rows = [(i, lam, nn) for i, (lam, nn) in enumerate(zip(lams, nodes))]
    ef_rows = [(x[j], *(v.values.real[j] for v in vecs)) for j in range(grid.n_points)]
    svg = render_svg(
        [(f"n={i}", x, v.values.real) for i, v in enumerate(vecs)],
        "x",
        "eigenfunction",
        f"L{cfg.which}, gamma={gamma:g}, {cfg.sector.value.lower()}",
    )
    return {
        "spectrum.csv": csv_text(["index", "eigenvalue", "n_nodes"], rows),
        "eigenfunctions.csv": csv_text(["x"] + [f"psi_{i}" for i in range(cfg.k)], ef_rows),
        "spectrum.svg": svg,
    }


def _sweep(cfg: RunConfig) -> dict[str, str]:
    tr = gamma_sweep(cfg.gamma_min, cfg.gamma_max, cfg.steps, cfg.which, cfg.grid)
    rows = list(zip(tr.gammas, tr.second_eigenvalue, tr.neg_count))
    print(f"slope of second eigenvalue at gamma=0: {tr.slope_at_zero:.10g}")
    return {
        "branch.csv": csv_text(["gamma", "second_eigenvalue", "neg_count"], rows),
        "branch.svg": render_svg(
            [("second eigenvalue", tr.gammas, tr.second_eigenvalue)], "gamma", "eigenvalue",
            f"second eigenvalue of L{cfg.which}",
        ),
    }


def _evolve(cfg: RunConfig) -> tuple[dict[str, str], bool]:
    grid = cfg.grid
    u0 = gausson(cfg.params, grid) + perturbation(grid, cfg.perturb, cfg.eps, cfg.seed)
    tr = evolve(u0, cfg.params, cfg.evolution)
    rows = list(zip(tr.times, tr.charge, tr.energy, tr.orbital_dist, tr.parity_defect))
    files = {
        "trace.csv": csv_text(["t", "Q", "E", "orbital_dist", "parity_defect"], rows),
        "trace.svg": render_svg(
            [("orbital distance", tr.times, tr.orbital_dist)], "t", "orbital distance",
            f"gamma={cfg.params.gamma:g}, perturbation {cfg.perturb}, eps={cfg.eps:g}",
        ),
    }
    if tr.failed:
        print(f"evolution failed: {tr.message}", file=sys.stderr)
    return files, not tr.failed


def _report(cfg: RunConfig) -> tuple[dict[str, str], bool]:
    grid = cfg.grid
    gamma = cfg.params.gamma
    verdict = stability_index(cfg.params, grid, cfg.sector)
    k = 3
    if cfg.sector is Sector.FULL:
        op = assemble_l(grid, gamma, 1)
        semi = merged_eigs(1, gamma, k)
    else:
        op = sector_restrict(grid, gamma, 1, Parity.EVEN)
        semi = semianalytic_eigs(MatchingProblem(1, gamma, "Even"), k)
    lams = eigenvalues_bisection(op, k)
    delta = float(np.max(np.abs(lams - semi)))
    n_semi = int(np.count_nonzero(semi < 0))
    ok = delta <= report_tolerance(grid.spacing) and n_semi == verdict.neg_count_L1
    doc = {
        "gamma": gamma,
        "omega": cfg.params.omega,
        "sector": verdict.sector.value,
        "n_L1": verdict.neg_count_L1,
        "n_L2": verdict.neg_count_L2,
        "n_L2_raw": neg_count_sturm(assemble_l(grid, gamma, 2), 0.0),
        "p": verdict.p_index,
        "verdict": verdict.verdict.value,
        "eigenvalues": [float(v) for v in lams],
        "semianalytic_eigenvalues": [float(v) for v in semi],
        "cross_check_delta": delta,
        "cross_check_tolerance": report_tolerance(grid.spacing),
        "grid": {"half_width": grid.half_width, "n_points": grid.n_points},
    }
    if not ok:
        print(f"cross-check failed: delta={delta:.3e}", file=sys.stderr)
    return {"report.json": json.dumps(doc, indent=2) + "\n"}, ok


def run(cfg: RunConfig) -> int:
    """Execute one command and write its files; returns the exit status."""
    ok = True
    try:
        if cfg.command == "spectrum":
            files = _spectrum(cfg)
        elif cfg.command == "sweep":
            files = _sweep(cfg)
        elif cfg.command == "evolve":
            files, ok = _evolve(cfg)
        else:
            files, ok = _report(cfg)
    except (DiscretizationError, RuntimeError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure in {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if not ok:
        # a failed cross-check or an aborted run leaves no output behind
        return EXIT_NUMERIC

    written: list[Path] = []
    try:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            path = cfg.output_dir / name
            path.write_text(text, encoding="utf-8")
            written.append(path)
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for path in written:
        print(path)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"logdelta-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
