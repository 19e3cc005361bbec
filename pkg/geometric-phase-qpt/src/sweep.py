"""
Parameter sweeps: row-major grids over the model inputs, evaluated by a worker pool
"""

import itertools
import logging
import math
from multiprocessing import Pool
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError
from tqdm import tqdm

from dicke import dicke_phase_finite, dicke_phase_limit
from errors import QPTGeometryError
from lmg import lmg_phase, lmg_phase_limit
from models import DickeParams, LMGParams, ModelKind, ProbeParams, SweepConfig, XYParams
from probe_qubit import probe_derivative, probe_phase
from xy_chain import ground_phase_finite, ground_phase_limit, phase_derivative_finite, phase_derivative_limit

logger = logging.getLogger(__name__)

COLUMNS: Dict[ModelKind, List[str]] = {
    ModelKind.XY: ["gamma", "lambda", "n", "beta_g", "dbeta_dlambda"],
    ModelKind.DICKE: ["D", "alpha", "n", "beta_over_n"],
    ModelKind.LMG: ["gamma", "h", "n", "beta_g"],
    ModelKind.PROBE: ["mu", "nu", "eta", "gamma", "lambda", "n", "beta_g", "dbeta_dlambda"],
}

OUTPUT_COLUMNS: Dict[ModelKind, List[str]] = {
    ModelKind.XY: ["beta_g", "dbeta_dlambda"],
    ModelKind.DICKE: ["beta_over_n"],
    ModelKind.LMG: ["beta_g"],
    ModelKind.PROBE: ["beta_g", "dbeta_dlambda"],
}

Task = Tuple[str, Tuple[Optional[float], ...]]
Outcome = Tuple[Tuple[float, ...], List[str]]


def build_grid(config: SweepConfig) -> List[Task]:
    """Input tuples in row-major order over the column order (last column fastest)"""
    sizes: List[Optional[float]] = list(config.sizes)
    if config.model == ModelKind.XY:
        axes = [config.gamma.values(), config.lambda_range.values(), sizes]
    elif config.model == ModelKind.DICKE:
        axes = [config.dicke_d.values(), config.alpha_range.values(), sizes]
    elif config.model == ModelKind.LMG:
        axes = [config.gamma.values(), config.h_range.values(), sizes]
    else:
        axes = [config.mu.values(), config.nu.values(), config.eta.values(),
                config.gamma.values(), config.lambda_range.values(), sizes]
    return [(config.model.value, tuple(float(v) if v is not None else None for v in point))
            for point in itertools.product(*axes)]


def _attempt(function, problems: List[str], label: str) -> float:
    try:
        return float(function())
    except (QPTGeometryError, ValidationError, ValueError, ArithmeticError) as e:
        problems.append(f"{label}: {e}")
        return math.nan


def _size(value: Optional[float]) -> Optional[int]:
    return None if value is None else int(value)


def evaluate_point(task: Task) -> Outcome:
    """Outputs for one grid point; failures become NaN with a message for the caller to log"""
    model, values = task
    problems: List[str] = []
    if model == ModelKind.XY.value:
        gamma, lam, n = values
        if n is None:
            beta = _attempt(lambda: ground_phase_limit(gamma, lam).beta_g, problems, "beta_g")
            slope = _attempt(lambda: phase_derivative_limit(gamma, lam), problems, "dbeta_dlambda")
        else:
            params = XYParams(gamma=gamma, lam=lam, n_sites=_size(n))
            beta = _attempt(lambda: ground_phase_finite(params).beta_g, problems, "beta_g")
            slope = _attempt(lambda: phase_derivative_finite(params), problems, "dbeta_dlambda")
        outputs = (beta, slope)
    elif model == ModelKind.DICKE.value:
        d_value, alpha, n = values
        if n is None:
            outputs = (_attempt(lambda: dicke_phase_limit(alpha), problems, "beta_over_n"),)
        else:
            def finite() -> float:
                params = DickeParams.from_dimensionless(d_value, alpha, _size(n))
                return dicke_phase_finite(params).beta_g / params.n_qubits
            outputs = (_attempt(finite, problems, "beta_over_n"),)
    elif model == ModelKind.LMG.value:
        gamma, h, n = values

        def lmg_value() -> float:
            if n is None:
                return lmg_phase_limit(LMGParams(gamma_lmg=gamma, field=h, n_spins=2)).beta_g
            return lmg_phase(LMGParams(gamma_lmg=gamma, field=h, n_spins=_size(n))).beta_g
        outputs = (_attempt(lmg_value, problems, "beta_g"),)
    else:
        mu, nu, eta, gamma, lam, n = values

        def params() -> ProbeParams:
            return ProbeParams(mu=mu, nu=nu, eta=eta, gamma=gamma, lam=lam, n_sites=_size(n))
        outputs = (_attempt(lambda: probe_phase(params()).beta_g, problems, "beta_g"),
                   _attempt(lambda: probe_derivative(params()), problems, "dbeta_dlambda"))
    return outputs, problems


def _evaluate_all(tasks: List[Task], threads: int, progress: bool) -> List[Outcome]:
    bar = dict(total=len(tasks), desc="sweep", unit="pt", disable=not progress, leave=False)
    if threads <= 1:
        return [evaluate_point(task) for task in tqdm(tasks, **bar)]
    chunksize = max(1, len(tasks) // (threads * 8))
    with Pool(threads) as pool:
        # imap keeps the input order
        return list(tqdm(pool.imap(evaluate_point, tasks, chunksize=chunksize), **bar))


def run_sweep(config: SweepConfig, progress: bool = False) -> pd.DataFrame:
    """Evaluate the configured grid; the limit size is stored as n = inf"""
    tasks = build_grid(config)
    logger.info("Sweeping %d %s points on %d worker(s)", len(tasks), config.model.value, config.threads)
    outcomes = _evaluate_all(tasks, config.threads, progress)

    rows = []
    for (_, values), (outputs, problems) in zip(tasks, outcomes):
        for problem in problems:
            logger.warning("NaN at %s: %s", dict(zip(COLUMNS[config.model], values)), problem)
        inputs = tuple(np.inf if value is None else value for value in values)
        rows.append(inputs + tuple(outputs))
    return pd.DataFrame(rows, columns=COLUMNS[config.model])
