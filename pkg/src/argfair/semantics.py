"""Final argument weights under the weighted h-Categorizer semantics.

Starting from the initial weights, every step recomputes all arguments
synchronously from the previous vector:

    s(a)^(1)   = sigma(a)
    s(a)^(n+1) = sigma(a) / (1 + sum over attackers b of strength(b, a) * s(b)^(n))

The sequence converges for every graph; iteration stops once the largest
per-argument change falls below the convergence threshold. Unattacked
arguments keep their initial weight forever.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError, ParameterError

DEFAULT_EPSILON = 0.01
DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True)
class FinalWeights:
    """Converged per-argument scores with the iteration metadata."""

    weights: dict
    iterations: int
    epsilon: float
    converged: bool

    def rounded(self, digits=2):
        return {a: round(w, digits) for a, w in self.weights.items()}


@dataclass(frozen=True)
class Explanation:
    """The weakest arguments after two-decimal rounding.

    ``consistent`` means every rounded weight is 1.00, i.e. no pair of the
    queried individual is singled out at all.
    """

    weakest: frozenset
    consistent: bool
    rounded_weights: dict


def hbs_converge(graph, epsilon=DEFAULT_EPSILON, max_iter=DEFAULT_MAX_ITER):
    """Iterate the update rule until the max-norm step change is < epsilon.

    Updates are synchronous (Jacobi): each new vector is computed entirely
    from the previous one. Raises NonConvergenceError carrying the last
    iterate if ``max_iter`` is exhausted, which for a valid graph signals a
    pathologically small epsilon rather than divergence.
    """
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")

    order = sorted(graph.arguments)
    index = {a: i for i, a in enumerate(order)}
    n = len(order)
    sigma = np.array([graph.initial_weight(a) for a in order])
    attack = np.zeros((n, n))
    for (src, dst), count in graph.attack_counts.items():
        attack[index[dst], index[src]] = count / graph.k

    s = sigma.copy()
    for iteration in range(1, max_iter + 1):
        s_next = sigma / (1.0 + attack @ s)
        delta = float(np.max(np.abs(s_next - s))) if n else 0.0
        s = s_next
        if delta < epsilon:
            return FinalWeights(
                weights={a: float(s[index[a]]) for a in order},
                iterations=iteration,
                epsilon=epsilon,
                converged=True,
            )

    last = FinalWeights(
        weights={a: float(s[index[a]]) for a in order},
        iterations=max_iter,
        epsilon=epsilon,
        converged=False,
    )
    raise NonConvergenceError(last, max_iter, epsilon)


def extract_explanation(final_weights):
    """Round to two decimals and single out the minimum-weight arguments.

    If everything rounds to 1.00 the individual was treated consistently
    and the weakest set is empty; otherwise it holds every argument
    attaining the minimum rounded weight.
    """
    if not final_weights.converged:
        raise ParameterError("explanation requires converged weights")
    rounded = final_weights.rounded(2)
    if all(w == 1.0 for w in rounded.values()):
        return Explanation(weakest=frozenset(), consistent=True, rounded_weights=rounded)
    low = min(rounded.values())
    weakest = frozenset(a for a, w in rounded.items() if w == low)
    return Explanation(weakest=weakest, consistent=False, rounded_weights=rounded)


def evaluate(graph, semantics="hbs", **kwargs):
    """Evaluate a graph under a named semantics (extension point)."""
    try:
        run = SEMANTICS[semantics]
    except KeyError:
        raise ParameterError(f"unknown semantics {semantics!r}") from None
    return run(graph, **kwargs)


SEMANTICS = {"hbs": hbs_converge}
