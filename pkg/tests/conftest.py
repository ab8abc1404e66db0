import numpy as np
from hypothesis import strategies as st

from hksim import Configuration, SocialGraph


def quantized_positions(n_max=8, d=1, scale=100.0):
    """Positions on a 1e-6 grid, keeping true gaps far above float error."""
    coord = st.integers(min_value=-int(scale * 1e6), max_value=int(scale * 1e6)).map(
        lambda k: k / 1e6
    )
    if d == 1:
        return st.lists(coord, min_size=1, max_size=n_max)
    return st.lists(
        st.tuples(*[coord] * d).map(list), min_size=1, max_size=n_max
    )


def configurations(n_max=8, d=1):
    return quantized_positions(n_max, d).map(Configuration)


@st.composite
def config_and_graph(draw, n_max=8, d=1):
    config = draw(configurations(n_max, d))
    n = config.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    flags = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, keep in zip(pairs, flags) if keep]
    return config, SocialGraph.from_edges(n, edges)


def random_config(rng, n, d=1, spread=None):
    spread = spread if spread is not None else max(1.0, float(n))
    return Configuration(rng.uniform(0.0, spread, (n, d)))
