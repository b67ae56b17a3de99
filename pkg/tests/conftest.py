import numpy as np

from kerrgkp.codewords import (
    ApproximateCodeword,
    CoefficientSet,
    normalization_constant,
    coefficients,
)
from kerrgkp.numerics import TruncationPolicy


def doubled_truncation(cw: ApproximateCodeword) -> ApproximateCodeword:
    """Rebuild a codeword with its coefficient cutoff literally doubled."""
    deep_policy = TruncationPolicy(tail_weight_bound=1e-30, hard_max_n=4096)
    deep = coefficients(cw.params.alpha, cw.params.x, deep_policy)
    n2 = 2 * cw.coefficients.n_max + 1
    if deep.mu.size >= n2:
        mu = deep.mu[:n2].copy()
    else:
        mu = np.pad(deep.mu, (0, n2 - deep.mu.size))
    cs = CoefficientSet(mu=mu, n_max=n2 - 1, alpha=cw.params.alpha, x=cw.params.x)
    nc = normalization_constant(cs, cw.params.tau)
    return ApproximateCodeword(
        label=cw.label,
        params=cw.params,
        coefficients=cs,
        norm_constant=nc,
        pm_norm=cw.pm_norm,
    )
