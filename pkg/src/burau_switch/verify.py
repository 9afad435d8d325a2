"""Identity checks behind the ``verify`` subcommand."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .laurent import (
    REDUCED,
    SQUIER,
    LaurentMatrix,
    check_braid_relation,
    check_j_unitarity,
    check_similarity,
    evaluate_word,
    generator_table,
    squier_form,
)
from .numerics import (
    cholesky_2x2,
    specialize_matrix,
    squier_form_at,
    unitarity_error,
    unitarize_matrix,
)

SPOT_OMEGAS = (0.1, 1.0, 2.0)
NUMERIC_TOL = 1e-12


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def flip_beta2_sign() -> dict[int, LaurentMatrix]:
    """Squier table with the (2,2) entry of beta_2 negated."""
    table = generator_table(SQUIER)
    b2 = table[2]
    table[2] = LaurentMatrix(b2.a, b2.b, b2.c, -b2.d)
    return table


FAULTS: dict[str, Callable[[], dict[int, LaurentMatrix]]] = {"beta2-sign": flip_beta2_sign}


def run_checks(squier: dict[int, LaurentMatrix] | None = None, omegas=SPOT_OMEGAS) -> list[Check]:
    beta = squier if squier is not None else generator_table(SQUIER)
    checks = [
        Check("braid relation (reduced Burau)", check_braid_relation(REDUCED)),
        Check("braid relation (Squier)", check_braid_relation(SQUIER, beta)),
        Check("J-unitarity beta_1", check_j_unitarity(beta, (1,))),
        Check("J-unitarity beta_2", check_j_unitarity(beta, (2,))),
        Check("similarity psi = D^-1 beta D, J~ = D* J D", check_similarity(beta)),
    ]
    word = evaluate_word("1 2 1", SQUIER, beta)
    for omega in omegas:
        form = squier_form_at(omega)
        J_sym = specialize_matrix(squier_form(), omega)
        sym_err = float(np.max(np.abs(J_sym - form.J)))
        checks.append(Check(f"J(omega) matches symbolic form at omega={omega}", sym_err <= NUMERIC_TOL,
                            f"err={sym_err:.2e}"))
        for i in (1, 2):
            b = specialize_matrix(beta[i], omega)
            err = float(np.max(np.abs(b.conj().T @ form.J @ b - form.J)))
            checks.append(Check(f"J-unitarity beta_{i} at omega={omega}", err <= NUMERIC_TOL, f"err={err:.2e}"))
        r = cholesky_2x2(form)
        chol_err = float(np.max(np.abs(r.conj().T @ r - form.J)))
        checks.append(Check(f"Cholesky residual at omega={omega}", chol_err <= 1e-14, f"err={chol_err:.2e}"))
        u = unitarize_matrix(specialize_matrix(word, omega), omega)
        u_err = unitarity_error(u)
        checks.append(Check(f"unitarity of U(1 2 1) at omega={omega}", u_err <= NUMERIC_TOL, f"err={u_err:.2e}"))
    return checks
