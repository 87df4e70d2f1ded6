"""Scenario runners producing plot-ready CSV/JSON artifacts.

Five scenarios: `trace-distance` (quality of the random-state approximation
to the maximally mixed state), `heatmap` (protocol and reference chi maps
over site and time), `noise-study` (noisy and zero-noise-extrapolated chi
curves), `oracle` (dense reference maps only), and `validate` (fast
self-checks at small width).

Every output file embeds the resolved configuration and a hash of its
canonical form, so artifacts are traceable to exact parameters.  Identical
config and seed reproduce files byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .holevo import chi_of_density, holevo_exact, holevo_from_probs
from .ising import HamiltonianSpec, build_hamiltonian, heisenberg_evolve
from .mitigation import _extrapolate_probs, mitigate, richardson_scheme
from .pauli import OperatorExpansion, PauliString, operator_size
from .protocol import ProtocolConfig, grid_probs
from .protocol import heatmap as protocol_heatmap
from .sim import NoiseModel, apply_gate_inplace, random_state_circuit

HEATMAP_COLUMNS = (
    "site,t,chi,P0_1,P1_1,P2_1,P3_1,P0_2,P1_2,P2_2,P3_2,variant".split(",")
)


# ---------------------------------------------------------------- writers


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def config_header(cfg: ExperimentConfig) -> list[str]:
    lines = ["scramble-probe output"]
    lines.extend(cfg.canonical_text().splitlines())
    lines.append(f"params_sha1 = {cfg.param_hash()}")
    return lines


def write_csv(path: Path, cfg: ExperimentConfig, columns, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        for line in config_header(cfg):
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")
    print(f"wrote {path}")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    raise TypeError(f"not JSON serialisable: {type(obj)}")


def write_json(path: Path, cfg: ExperimentConfig, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "config": cfg.to_dict(),
        "params_sha1": cfg.param_hash(),
        "data": data,
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")
    print(f"wrote {path}")


# ------------------------------------------------------- shared plumbing


def protocol_config(
    ecfg: ExperimentConfig,
    noise: NoiseModel | None = None,
    init: str | None = None,
    evolution: str | None = None,
) -> ProtocolConfig:
    spec = build_hamiltonian(
        ecfg.n_sites, ecfg.coupling_j, ecfg.field_hx, ecfg.field_hz
    )
    return ProtocolConfig(
        hamiltonian=spec,
        op_site=ecfg.op_site,
        op_pair=ecfg.pair(),
        dt=ecfg.trotter_dt,
        ensemble_size=ecfg.ensemble_m,
        depth=ecfg.depth_d,
        shots=ecfg.shots,
        noise=noise,
        seed=ecfg.seed,
        initialization=init if init is not None else ecfg.init,
        evolution=evolution if evolution is not None else ecfg.evolution,
    )


@dataclass
class OracleGrid:
    """Dense-reference chi over (site, time) plus the per-site distributions."""

    sites: tuple[int, ...]
    times: tuple[float, ...]
    chi: np.ndarray  # exact reduced-matrix chi, shape (S, T)
    chi_diag: np.ndarray  # chi of the dephased (Bell-diagonal) pair
    probs_1: np.ndarray  # (S, T, 4)
    probs_2: np.ndarray
    size_1: np.ndarray  # (T,)
    size_2: np.ndarray


def oracle_grid(
    spec: HamiltonianSpec,
    pair: tuple[str, str],
    op_site: int,
    sites: list[int],
    times: list[float],
) -> OracleGrid:
    """Reference grid from continuous Heisenberg evolution of the pair."""
    expansions: list[list[OperatorExpansion]] = []
    for label in pair:
        if label == "I":
            flat = np.zeros(4**spec.n_sites)
            flat[0] = 1.0
            ident = OperatorExpansion(spec.n_sites, flat)
            expansions.append([ident] * len(times))
        else:
            p = PauliString.single_site(label, op_site, spec.n_sites)
            expansions.append([heisenberg_evolve(p, spec, t) for t in times])
    S, T = len(sites), len(times)
    chi = np.zeros((S, T))
    chi_diag = np.zeros((S, T))
    probs = np.zeros((2, S, T, 4))
    size = np.zeros((2, T))
    for w in range(2):
        for ti in range(T):
            size[w, ti] = operator_size(expansions[w][ti])
    for si, site in enumerate(sites):
        for ti in range(T):
            rec = holevo_exact(expansions[0][ti], expansions[1][ti], site, time=times[ti])
            chi[si, ti] = rec.chi
            probs[0, si, ti] = rec.probs_1
            probs[1, si, ti] = rec.probs_2
            chi_diag[si, ti] = holevo_from_probs(rec.probs_1, rec.probs_2)
    return OracleGrid(
        sites=tuple(sites),
        times=tuple(times),
        chi=chi,
        chi_diag=chi_diag,
        probs_1=probs[0],
        probs_2=probs[1],
        size_1=size[0],
        size_2=size[1],
    )


def _heat_rows(sites, times, chi, probs_1, probs_2, variant):
    rows = []
    for si, site in enumerate(sites):
        for ti, t in enumerate(times):
            rows.append(
                (site, t, float(chi[si, ti]), *probs_1[si, ti], *probs_2[si, ti], variant)
            )
    return rows


def _oracle_csv_rows(og: OracleGrid):
    rows = _heat_rows(og.sites, og.times, og.chi, og.probs_1, og.probs_2, "exact")
    rows += _heat_rows(
        og.sites, og.times, og.chi_diag, og.probs_1, og.probs_2, "bell-diagonal"
    )
    return rows


# ------------------------------------------------------------- scenarios


def run_heatmap(ecfg: ExperimentConfig, out_dir: Path) -> int:
    pcfg = protocol_config(ecfg)
    times = ecfg.times()
    grid = protocol_heatmap(pcfg, times)
    og = oracle_grid(
        pcfg.hamiltonian, pcfg.op_pair, ecfg.op_site, list(grid.sites), times
    )
    write_csv(
        out_dir / "heatmap_protocol.csv",
        ecfg,
        HEATMAP_COLUMNS,
        _heat_rows(grid.sites, times, grid.chi, grid.probs_1, grid.probs_2, grid.variant),
    )
    write_csv(out_dir / "heatmap_oracle.csv", ecfg, HEATMAP_COLUMNS, _oracle_csv_rows(og))
    write_json(
        out_dir / "heatmap.json",
        ecfg,
        {
            "sites": list(grid.sites),
            "times": times,
            "protocol_chi": grid.chi,
            "oracle_chi": og.chi,
            "oracle_chi_diag": og.chi_diag,
        },
    )
    return 0


def run_oracle(ecfg: ExperimentConfig, out_dir: Path) -> int:
    spec = build_hamiltonian(ecfg.n_sites, ecfg.coupling_j, ecfg.field_hx, ecfg.field_hz)
    sites = list(range(1, ecfg.n_sites + 1))
    times = ecfg.times()
    og = oracle_grid(spec, ecfg.pair(), ecfg.op_site, sites, times)
    write_csv(out_dir / "heatmap_oracle.csv", ecfg, HEATMAP_COLUMNS, _oracle_csv_rows(og))
    density_rows = []
    for si, site in enumerate(sites):
        for ti, t in enumerate(times):
            p = og.probs_2[si, ti]
            density_rows.append((site, t, *p, 1.0 - p[0]))
    write_csv(
        out_dir / "oracle_density.csv",
        ecfg,
        ["site", "t", "P0", "P1", "P2", "P3", "density"],
        density_rows,
    )
    write_csv(
        out_dir / "oracle_size.csv",
        ecfg,
        ["t", "size_1", "size_2"],
        [(t, og.size_1[ti], og.size_2[ti]) for ti, t in enumerate(times)],
    )
    write_json(
        out_dir / "oracle.json",
        ecfg,
        {
            "sites": sites,
            "times": times,
            "chi": og.chi,
            "chi_diag": og.chi_diag,
            "probs_1": og.probs_1,
            "probs_2": og.probs_2,
            "size_1": og.size_1,
            "size_2": og.size_2,
            "chi_of_density": chi_of_density(1.0 - og.probs_2[..., 0]),
        },
    )
    return 0


def trace_distance_sample(
    n_sites: int, m: int, depth: int, seed: int, replicate: int
) -> float:
    """D(rho_est, I/2^(N-1)) for one replicate of m random-circuit states."""
    n_rest = n_sites - 1
    dim = 2**n_rest
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(m):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(replicate, k))
        )
        circ = random_state_circuit(n_rest, depth, rng)
        vec = np.zeros(dim, dtype=np.complex128)
        vec[0] = 1.0
        view = vec.reshape(-1, 1)
        for g in circ.gates:
            apply_gate_inplace(view, g, n_rest)
        acc += np.outer(vec, vec.conj())
    acc /= m
    delta = acc - np.eye(dim) / dim
    singular = np.linalg.svd(delta, compute_uv=False)
    return 0.5 * float(singular.sum())


def run_trace_distance(ecfg: ExperimentConfig, out_dir: Path) -> int:
    rows = []
    samples: dict[str, list[float]] = {}
    reps = ecfg.replicates
    for n in ecfg.trace_sites():
        if n < 2 or n > 12:
            raise ValueError(f"n_sites {n} outside the supported range 2..12")
        for m in ecfg.trace_ensembles():
            vals = [
                trace_distance_sample(n, m, ecfg.depth_d, ecfg.seed, rep)
                for rep in range(reps)
            ]
            mean = float(np.mean(vals))
            stderr = float(np.std(vals, ddof=1) / np.sqrt(reps)) if reps > 1 else 0.0
            rows.append((n, m, reps, mean, stderr))
            samples[f"n{n}_m{m}"] = [float(v) for v in vals]
    write_csv(
        out_dir / "trace_distance.csv",
        ecfg,
        ["n_sites", "ensemble_m", "replicates", "mean_distance", "stderr"],
        rows,
    )
    write_json(
        out_dir / "trace_distance.json",
        ecfg,
        {"table": [list(r) for r in rows], "samples": samples},
    )
    return 0


def noise_study_curves(ecfg: ExperimentConfig) -> dict[str, np.ndarray]:
    """chi(t) at the probed site: noiseless, noisy, and mitigated variants.

    Runs the density backend (exact maximally mixed initialization) once per
    distinct noise-scale factor; mitigated curves are Richardson
    combinations of the scaled runs.  Raw chi-target extrapolants keep a
    `_raw` twin so clipping stays visible.
    """
    schemes = {k: richardson_scheme(k) for k in ecfg.orders()}
    scales = {0, 1}
    for scheme in schemes.values():
        scales.update(scheme.c)
    site = ecfg.probe()
    times = ecfg.times()
    pair = ecfg.pair()
    base = protocol_config(ecfg, init="exact")
    per_scale: dict[int, np.ndarray] = {}
    for c in sorted(scales):
        noise = None if c == 0 else NoiseModel(ecfg.noise_p, scale=float(c))
        cfg_c = replace(base, noise=noise)
        per_scale[c] = grid_probs(cfg_c, list(pair), [site], times)[:, 0]  # (2, T, 4)
    T = len(times)

    def chi_curve(scale: int) -> np.ndarray:
        g = per_scale[scale]
        return np.array([holevo_from_probs(g[0, ti], g[1, ti]) for ti in range(T)])

    curves: dict[str, np.ndarray] = {
        "noiseless": chi_curve(0),
        "noisy": chi_curve(1),
    }
    for k, scheme in schemes.items():
        if ecfg.mitigation_target == "chi":
            stack = np.stack([chi_curve(c) for c in scheme.c])
            gamma = np.array([float(g) for g in scheme.gamma])
            raw = gamma @ stack
            curves[f"mitigated_nc{k}_raw"] = raw
            curves[f"mitigated_nc{k}"] = np.clip(raw, 0.0, 1.0)
        else:
            vals = np.zeros(T)
            for ti in range(T):
                p1 = _extrapolate_probs([per_scale[c][0, ti] for c in scheme.c], scheme)
                p2 = _extrapolate_probs([per_scale[c][1, ti] for c in scheme.c], scheme)
                vals[ti] = holevo_from_probs(p1, p2)
            curves[f"mitigated_nc{k}"] = vals
    return curves


def run_noise_study(ecfg: ExperimentConfig, out_dir: Path) -> int:
    times = ecfg.times()
    curves = noise_study_curves(ecfg)
    rows = []
    for name in curves:
        for ti, t in enumerate(times):
            rows.append((t, name, float(curves[name][ti])))
    write_csv(out_dir / "noise_study.csv", ecfg, ["t", "curve", "chi"], rows)
    write_json(
        out_dir / "noise_study.json",
        ecfg,
        {"times": times, "site": ecfg.probe(), "curves": curves},
    )
    return 0


def run_validate(ecfg: ExperimentConfig, out_dir: Path | None) -> int:
    from .validation import run_checks

    results = run_checks()
    failures = 0
    for name, ok, detail in results:
        if ok:
            print(f"PASS {name}")
        else:
            failures += 1
            print(f"FAIL {name}: {detail}")
    print(f"{len(results) - failures}/{len(results)} checks passed")
    if out_dir is not None:
        write_json(
            out_dir / "validation.json",
            ecfg,
            {
                "checks": [
                    {"name": n, "passed": ok, "detail": d} for n, ok, d in results
                ]
            },
        )
    return 0 if failures == 0 else 1


RUNNERS = {
    "trace-distance": run_trace_distance,
    "heatmap": run_heatmap,
    "noise-study": run_noise_study,
    "oracle": run_oracle,
}
